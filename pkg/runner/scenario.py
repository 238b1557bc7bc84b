"""
Scenario files: a manifold, an optional bundle, one recipe and the checks
to run, validated with pydantic and reported with JSON pointers.
"""

import json
import logging
import re
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from bourgeois.config import BINDING_RADIUS
from bundle.invariant import BundleSpec
from forms.forms import BaseForm, one_form, two_form
from forms.manifold import FactorKind, ModelFactor, ModelManifold
from forms.sweep import Cycle

from .config import SCHEMA_VERSION
from .errors import ScenarioError
from .expression import Expression

logger = logging.getLogger(__name__)


_PAIR = re.compile(r"(\d+),(\d+)")


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ----------------------------------------------------------------------
# manifold and bundle
# ----------------------------------------------------------------------
class FactorModel(StrictModel):
    kind: FactorKind
    resolution: int = Field(16, ge=2)
    bounds: Optional[Tuple[float, float]] = None

    @model_validator(mode="after")
    def _bounds(self):
        if self.bounds is not None:
            if self.kind != FactorKind.INTERVAL:
                raise ValueError(f"only intervals take bounds, not {self.kind.value}")
            if not self.bounds[0] < self.bounds[1]:
                raise ValueError("interval bounds must be increasing")
        return self

    def build(self) -> ModelFactor:
        if self.kind == FactorKind.INTERVAL:
            return ModelFactor(self.kind, self.resolution, self.bounds or (0.0, 1.0))
        return ModelFactor(self.kind, self.resolution)


class ManifoldModel(StrictModel):
    name: str = ""
    factors: List[FactorModel] = Field(min_length=1)
    orientation: Literal[1, -1] = 1

    @property
    def ambient_dim(self) -> int:
        return sum(f.build().ambient_dim for f in self.factors)

    @property
    def intrinsic_dim(self) -> int:
        return sum(f.build().intrinsic_dim for f in self.factors)

    def build(self, resolution_scale: float = 1.0) -> ModelManifold:
        m = ModelManifold([f.build() for f in self.factors], self.orientation, self.name)
        return m.scaled(resolution_scale) if resolution_scale != 1.0 else m


class CycleModel(StrictModel):
    """Components are expressions in the square coordinates x0, x1."""

    components: List[Expression]
    periodic: Tuple[bool, bool] = (True, True)

    @field_validator("components")
    @classmethod
    def _square_coordinates(cls, comps):
        for i, c in enumerate(comps):
            extra = sorted(k for k in c.coordinates if k > 1)
            if extra:
                raise ValueError(f"component {i} uses x{extra[0]}; cycles are maps of the unit square (x0, x1)")
        return comps

    def build(self, name: str) -> Cycle:
        return Cycle(name, tuple(c.to_field() for c in self.components), self.periodic)


class BundleModel(StrictModel):
    name: str = ""
    curvature: Dict[str, Expression] = {}
    generators: Dict[str, CycleModel] = {}

    @field_validator("curvature")
    @classmethod
    def _pairs(cls, entries):
        for key in entries:
            m = _PAIR.fullmatch(key)
            if m is None or int(m.group(1)) >= int(m.group(2)):
                raise ValueError(f"curvature keys are 'i,j' with i < j, got {key!r}")
        return entries

    def build(self, base: ModelManifold) -> BundleSpec:
        dim = base.ambient_dim
        entries = {}
        for key, expr in self.curvature.items():
            i, j = (int(x) for x in key.split(","))
            entries[(i, j)] = expr.to_field()
        generators = {name: c.build(name) for name, c in self.generators.items()}
        return BundleSpec(base, two_form(entries, dim), generators, self.name or f"{base.name}xS1")


# ----------------------------------------------------------------------
# recipes
# ----------------------------------------------------------------------
class ContactFormInput(StrictModel):
    """β as one expression per ambient coordinate, and u."""

    beta: Optional[List[Expression]] = None
    u: Optional[Expression] = None

    def has_form(self) -> bool:
        return self.beta is not None and self.u is not None

    def beta_form(self, dim: int) -> BaseForm:
        return one_form([c.to_field() for c in self.beta], dim)


class VerifyContactRecipe(ContactFormInput):
    kind: Literal["verify-contact"]
    model: Optional[Literal["lutz-t3", "hopf"]] = None
    gauge: Optional[List[Expression]] = None

    @model_validator(mode="after")
    def _source(self):
        if (self.model is not None) == self.has_form():
            raise ValueError("give either a model or both beta and u")
        return self


class SplitRecipe(ContactFormInput):
    kind: Literal["split"]
    model: Optional[Literal["lutz-t3"]] = None
    axis: int = Field(0, ge=0)
    eps: Optional[float] = Field(None, gt=0)
    slices: List[float] = []

    @model_validator(mode="after")
    def _source(self):
        if (self.model is not None) == self.has_form():
            raise ValueError("give either a model or both beta and u")
        return self


class ConstructRecipe(StrictModel):
    kind: Literal["construct"]
    model: Literal["t2s2"] = "t2s2"
    k: int = Field(ge=0)
    plateau: Optional[float] = None
    width: Optional[float] = None
    escalate: bool = True
    collar_slope: Optional[float] = Field(None, gt=0)


class BourgeoisRecipe(StrictModel):
    kind: Literal["bourgeois"]
    model: Literal["s3"] = "s3"
    r0: Optional[float] = Field(None, gt=0)
    transition: Optional[Tuple[float, float]] = None
    rotations: int = Field(4, ge=1)
    eps: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _transition_inside_binding(self):
        if self.transition is not None:
            a, b = self.transition
            r0 = self.r0 if self.r0 is not None else BINDING_RADIUS
            if not 0 < a < b < r0:
                raise ScenarioError(f"transition ({a:g}, {b:g}) must satisfy 0 < a < b < r0 = {r0:g}", "/recipe/transition")
        return self


class ContactiseRecipe(StrictModel):
    kind: Literal["contactise"]
    model: Literal["t2d2", "hopf"] = "t2d2"
    twisted: bool = True


class EulerRecipe(StrictModel):
    kind: Literal["euler"]
    model: Optional[Literal["t2s2", "hopf"]] = None
    k: int = Field(0, ge=0)


Recipe = Annotated[
    Union[VerifyContactRecipe, SplitRecipe, ConstructRecipe, BourgeoisRecipe, ContactiseRecipe, EulerRecipe],
    Field(discriminator="kind"),
]
RECIPE_KINDS = ("verify-contact", "split", "construct", "bourgeois", "contactise", "euler")


class Scenario(StrictModel):
    schema_version: Literal[1] = Field(SCHEMA_VERSION, alias="schema")
    name: str
    manifold: ManifoldModel
    bundle: Optional[BundleModel] = None
    recipe: Recipe
    checks: List[str] = []
    output: Optional[str] = None

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    @model_validator(mode="after")
    def _resolve(self):
        dim = self.manifold.ambient_dim
        for pointer, expr in self.expressions():
            missing = sorted(k for k in expr.coordinates if k >= dim)
            if missing:
                raise ScenarioError(
                    f"x{missing[0]} in {str(expr)!r} does not exist on the {dim}-dimensional ambient space", pointer
                )
        beta = getattr(self.recipe, "beta", None)
        if beta is not None and len(beta) != dim:
            raise ScenarioError(f"beta needs {dim} components, got {len(beta)}", "/recipe/beta")
        if isinstance(self.recipe, SplitRecipe) and self.recipe.axis >= self.manifold.intrinsic_dim:
            raise ScenarioError(
                f"axis {self.recipe.axis} does not exist on a {self.manifold.intrinsic_dim}-dimensional manifold", "/recipe/axis"
            )
        gauge = getattr(self.recipe, "gauge", None)
        if gauge is not None and len(gauge) != dim:
            raise ScenarioError(f"gauge needs {dim} components, got {len(gauge)}", "/recipe/gauge")
        return self

    def expressions(self) -> List[Tuple[str, Expression]]:
        """Every expression on the ambient space of the manifold, with its pointer."""
        found = []
        if self.bundle is not None:
            found += [(f"/bundle/curvature/{_escape(k)}", e) for k, e in self.bundle.curvature.items()]
        for key in ("beta", "gauge"):
            values = getattr(self.recipe, key, None) or []
            found += [(f"/recipe/{key}/{i}", e) for i, e in enumerate(values)]
        u = getattr(self.recipe, "u", None)
        if u is not None:
            found.append(("/recipe/u", u))
        return found


# ----------------------------------------------------------------------
# loading
# ----------------------------------------------------------------------
def _escape(token: str) -> str:
    return token.replace("~", "~0").replace("/", "~1")


def json_pointer(loc: Sequence[Union[str, int]], data: Any) -> str:
    """
    RFC 6901 pointer for a pydantic error location. Location entries that
    do not name a path in the input (union tags, validator names) are
    skipped unless they are the final, missing key.
    """
    parts = []
    node = data
    for i, key in enumerate(loc):
        last = i == len(loc) - 1
        if isinstance(node, dict) and key in node:
            node = node[key]
        elif isinstance(node, list) and isinstance(key, int) and 0 <= key < len(node):
            node = node[key]
        elif not last or (isinstance(node, dict) and node.get("kind") == key):
            continue
        else:
            node = None
        parts.append(_escape(str(key)))
    return "/" + "/".join(parts)


def scenario_from_dict(data: Any, source: str = "<scenario>") -> Scenario:
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        ctx_error = (first.get("ctx") or {}).get("error")
        if isinstance(ctx_error, ScenarioError):
            raise ctx_error from e
        pointer = json_pointer(first["loc"], data)
        logger.debug(f"{source}: {len(e.errors())} validation error(s)")
        raise ScenarioError(first["msg"], pointer) from e


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ScenarioError(f"No scenario file at {path}") from e
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{path} is not JSON: {e.msg} (line {e.lineno})") from e
    scenario = scenario_from_dict(data, source=path)
    logger.info(f"Loaded scenario {scenario.name} ({scenario.recipe.kind}) from {path}")
    return scenario
