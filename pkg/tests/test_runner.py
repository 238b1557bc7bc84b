"""
Scenario files, runs, reports and the command line
"""
import json

import pytest

from runner import ScenarioError, UnknownGalleryEntry, run
from runner.cli import EXIT_FAIL, EXIT_PASS, EXIT_SCENARIO, main
from runner.gallery import GALLERY, gallery, gallery_path, gallery_scenario
from runner.scenario import load_scenario, scenario_from_dict
from runner.summary import summary_lines

T2 = {"name": "T2", "factors": [{"kind": "circle", "resolution": 12}, {"kind": "circle", "resolution": 12}]}


def scenario_dict(recipe, **extra):
    data = {"schema": 1, "name": "test", "manifold": T2, "recipe": recipe}
    data.update(extra)
    return data


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


# ----------------------------------------------------------------------
# scenario validation
# ----------------------------------------------------------------------
def test_missing_manifold_points_at_the_key():
    data = scenario_dict({"kind": "verify-contact", "model": "lutz-t3"})
    del data["manifold"]
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(data)
    assert info.value.pointer == "/manifold"


def test_unknown_coordinate_in_beta():
    data = scenario_dict({"kind": "verify-contact", "beta": ["x9", "0"], "u": "1"})
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(data)
    assert info.value.pointer == "/recipe/beta/0"
    assert "x9" in str(info.value)


def test_beta_length_must_match_the_ambient_space():
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(scenario_dict({"kind": "verify-contact", "beta": ["0"], "u": "1"}))
    assert info.value.pointer == "/recipe/beta"


def test_model_and_form_are_exclusive():
    recipe = {"kind": "verify-contact", "model": "lutz-t3", "beta": ["0", "0"], "u": "1"}
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(scenario_dict(recipe))
    assert info.value.pointer == "/recipe"
    assert "give either a model" in str(info.value)


def test_bad_expression_points_at_its_field():
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(scenario_dict({"kind": "verify-contact", "beta": ["0", "0"], "u": "sin("}))
    assert info.value.pointer == "/recipe/u"


def test_curvature_keys_are_ordered_pairs():
    bundle = {"curvature": {"1,0": "1"}}
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(scenario_dict({"kind": "euler"}, bundle=bundle))
    assert info.value.pointer == "/bundle/curvature"


def test_unknown_recipe_kind():
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(scenario_dict({"kind": "teleport"}))
    assert info.value.pointer.startswith("/recipe")


S3 = {"name": "S3", "factors": [{"kind": "sphere3", "resolution": 8}]}


def test_bourgeois_transition_must_sit_inside_the_binding_radius():
    data = {"schema": 1, "name": "b", "manifold": S3, "recipe": {"kind": "bourgeois", "r0": 0.5, "transition": [0.3, 0.6]}}
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(data)
    assert info.value.pointer == "/recipe/transition"
    data["recipe"]["transition"] = [0.1, 0.4]
    assert scenario_from_dict(data).recipe.transition == (0.1, 0.4)


def test_split_axis_must_exist_on_the_manifold():
    recipe = {"kind": "split", "beta": ["cos(2*pi*x1)", "0"], "u": "sin(2*pi*x1)", "axis": 5}
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(scenario_dict(recipe))
    assert info.value.pointer == "/recipe/axis"


def test_load_scenario_errors(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ScenarioError) as info:
        load_scenario(str(bad))
    assert "not JSON" in str(info.value)


# ----------------------------------------------------------------------
# runs and reports
# ----------------------------------------------------------------------
@pytest.fixture(scope="module")
def lutz_report():
    return gallery("lutz-t3", resolution_scale=0.5)


def test_lutz_gallery_run(lutz_report):
    assert lutz_report.passed
    names = [c.name for c in lutz_report.checks]
    assert names == ["contact", "lemma-volume", "gauge round trip", "gauge-invariance", "interpolation", "euler [T2]"]
    assert lutz_report.checks[2].details["same_object"] is True
    assert lutz_report.provenance.resolutions["manifold"] == [16, 16]


def test_runs_are_deterministic(lutz_report):
    again = gallery("lutz-t3", resolution_scale=0.5)
    assert again.to_dict(wall_time=False) == lutz_report.to_dict(wall_time=False)


def test_report_json(lutz_report, tmp_path):
    path = lutz_report.write(str(tmp_path / "nested" / "lutz.json"))
    data = json.loads(open(path).read())
    assert data["schema"] == 1
    assert data["recipe"] == "verify-contact"
    assert data["checks"][0]["report"]["min_value"] == pytest.approx(6.283185307, rel=1e-6)
    assert "wall_time" in data["provenance"]


def test_summary_has_a_total_line(lutz_report):
    lines = summary_lines(lutz_report)
    assert any(line.startswith("TOTAL") and line.endswith("PASS") for line in lines)


def test_expression_scenario_runs():
    recipe = {"kind": "verify-contact", "beta": ["cos(2*pi*x1)", "0"], "u": "sin(2*pi*x1)"}
    report = run(scenario_from_dict(scenario_dict(recipe)))
    assert report.passed
    assert [c.name for c in report.checks] == ["contact", "lemma-volume"]
    assert report.checks[0].value == pytest.approx(6.283185307, rel=1e-4)


def test_selected_checks_only():
    recipe = {"kind": "verify-contact", "model": "lutz-t3"}
    report = run(scenario_from_dict(scenario_dict(recipe, checks=["contact"])))
    assert [c.name for c in report.checks] == ["contact"]


def test_unknown_check_is_a_setup_error():
    recipe = {"kind": "verify-contact", "model": "lutz-t3"}
    report = run(scenario_from_dict(scenario_dict(recipe, checks=["nope"])))
    assert not report.passed
    assert report.checks[0].name == "setup"
    assert report.checks[0].error_type == "ScenarioError"


def test_failing_form_is_reported_not_raised():
    recipe = {"kind": "verify-contact", "beta": ["0", "0"], "u": "1"}
    report = run(scenario_from_dict(scenario_dict(recipe)))
    assert not report.passed
    assert report.checks[0].name == "contact"
    assert not report.checks[0].passed


def test_geometry_errors_inside_a_recipe_become_failed_checks():
    recipe = {"kind": "split", "beta": ["cos(2*pi*x1)", "0"], "u": "sin(2*pi*x1)", "axis": 1}
    scenario = scenario_from_dict(scenario_dict(recipe, checks=["dividing-set"]))
    # model_copy skips validation, so the bad axis reaches the recipe
    bad = scenario.model_copy(update={"recipe": scenario.recipe.model_copy(update={"axis": 5})})
    report = run(bad)
    assert not report.passed
    entry = report.checks[0]
    assert (entry.name, entry.error_type) == ("dividing-set", "SplitParameterError")
    assert "out of range" in entry.error
    assert run(scenario).passed


def test_unknown_gallery_entry():
    with pytest.raises(UnknownGalleryEntry) as info:
        gallery_path("nope")
    assert "lutz-t3" in info.value.known


@pytest.mark.parametrize("name", list(GALLERY))
def test_gallery_files_validate(name):
    assert gallery_scenario(name).name == name


@pytest.mark.slow
@pytest.mark.parametrize("name", list(GALLERY))
def test_gallery_passes_at_full_resolution(name):
    report = gallery(name)
    assert report.passed, [c.name for c in report.failed_checks()]


# ----------------------------------------------------------------------
# command line
# ----------------------------------------------------------------------
def test_cli_gallery_writes_a_report(tmp_path):
    out = tmp_path / "lutz.json"
    code = main(["gallery", "lutz-t3", "--resolution-scale", "0.5", "--out", str(out), "--quiet"])
    assert code == EXIT_PASS
    assert json.loads(out.read_text())["passed"] is True


def test_cli_list(capsys):
    assert main(["gallery", "--list"]) == EXIT_PASS
    assert capsys.readouterr().out.split() == list(GALLERY)


def test_cli_unknown_gallery_entry():
    assert main(["gallery", "nope"]) == EXIT_SCENARIO
    assert main(["gallery"]) == EXIT_SCENARIO


def test_cli_recipe_mismatch(tmp_path):
    path = write_json(tmp_path / "s.json", scenario_dict({"kind": "verify-contact", "model": "lutz-t3"}))
    out = tmp_path / "err.json"
    assert main(["split", path, "--out", str(out), "--quiet"]) == EXIT_SCENARIO
    entry = json.loads(out.read_text())["checks"][0]
    assert entry["error_type"] == "ScenarioError"
    assert "/recipe/kind" in entry["error"]


def test_cli_failing_scenario(tmp_path):
    path = write_json(tmp_path / "s.json", scenario_dict({"kind": "verify-contact", "beta": ["0", "0"], "u": "1"}))
    out = tmp_path / "r.json"
    assert main(["verify-contact", path, "--out", str(out), "--quiet"]) == EXIT_FAIL
    assert json.loads(out.read_text())["passed"] is False


def test_cli_bad_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert main(["run", str(bad), "--quiet"]) == EXIT_SCENARIO


def test_cli_transition_outside_the_binding(tmp_path):
    data = {"schema": 1, "name": "b", "manifold": S3, "recipe": {"kind": "bourgeois", "r0": 0.5, "transition": [0.3, 0.6]}}
    out = tmp_path / "err.json"
    assert main(["bourgeois", write_json(tmp_path / "b.json", data), "--out", str(out), "--quiet"]) == EXIT_SCENARIO
    entry = json.loads(out.read_text())["checks"][0]
    assert entry["error_type"] == "ScenarioError"
    assert "/recipe/transition" in entry["error"]
