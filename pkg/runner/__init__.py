# Scenario runner: expression language, scenario files, reports and the gallery
from .errors import ExpressionDomainError, ExpressionSyntaxError, ScenarioError, UnknownGalleryEntry
from .expression import Expression, parse_expression
from .gallery import GALLERY, gallery
from .report import CheckEntry, Report
from .run import run
from .scenario import Scenario, load_scenario
