import json

import pytest

from fillcalc.cli import main


@pytest.fixture
def z2(tmp_path):
    path = tmp_path / "z2.json"
    path.write_text(json.dumps({"generators": ["x", "y"], "relators": ["x y x' y'"]}))
    return str(path)


@pytest.fixture
def k3(tmp_path):
    path = tmp_path / "k3.json"
    path.write_text(
        json.dumps(
            {
                "vertices": ["a", "b", "c"],
                "edges": [["a", "b"], ["b", "c"], ["a", "c"]],
                "base": "a",
            }
        )
    )
    return str(path)


def test_reduce(capsys):
    assert main(["reduce", "--word", "x x' y"]) == 0
    assert capsys.readouterr().out.strip() == "y"


def test_area_scheme_word(z2, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(
        [
            "--json", str(out),
            "area", "--presentation", z2,
            "--word", "x x y x' y x y x' x' y' y' y'",
        ]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["version"] == 1
    assert report["verdicts"]["kind"] == "area"
    assert report["verdicts"]["area"] <= 5
    assert "sequence" in report["witnesses"]


def test_area_non_null_exit_code(z2):
    assert main(["area", "--presentation", z2, "--word", "x"]) == 1


def test_area_budget_exit_code(z2):
    code = main(
        ["--budget-states", "5", "area", "--presentation", z2,
         "--word", "x x x y y x' x' x' y' y'"]
    )
    assert code == 3


def test_dehn(z2, tmp_path):
    out = tmp_path / "r.json"
    assert main(
        ["--json", str(out), "--budget-len", "12",
         "dehn", "--presentation", z2, "--length", "4"]
    ) == 0
    assert json.loads(out.read_text())["verdicts"]["value"] == 1


def test_verify_scheme(z2, tmp_path):
    scheme = tmp_path / "scheme.json"
    scheme.write_text(
        json.dumps(
            {
                "rows": [
                    {"word": "x x y x' y x y x' x' y' y' y'", "area": 2},
                    {"word": "x x y x' y x' y' y'", "area": 1},
                    {"word": "x x y x' x' y'", "area": 2},
                ]
            }
        )
    )
    out = tmp_path / "r.json"
    code = main(
        ["--json", str(out), "--budget-len", "24",
         "verify-scheme", "--presentation", z2, "--scheme", str(scheme)]
    )
    assert code == 0
    assert json.loads(out.read_text())["verdicts"]["total_area"] == 5


def test_pulldown_and_flatten(capsys):
    assert main(["pulldown", "--k", "1", "--h", "0", "--word", "e1_2"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "e1_2 e1_1'"
    assert main(["flatten", "--word", "e1_2 e1_2'"]) == 0


def test_construct_knmr(capsys):
    assert main(["construct", "knmr", "--n", "3", "--m", "2", "--r", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["verdicts"]["generators"]) == 4


def test_construct_presentations(capsys):
    assert main(["construct", "knmr", "--present", "q1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["verdicts"]["relators"]) == 6
    assert main(["construct", "knmr", "--present", "q2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["verdicts"]["relators"]) == 7


def test_construct_cyclic_builtin(capsys):
    assert main(["construct", "cyclic", "--index-bound", "0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdicts"]["members"]


def test_bb_present_and_families(k3, capsys):
    assert main(["bb", "--complex", k3, "present"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["verdicts"]["generators"]) == 6
    assert len(report["verdicts"]["relators"]) == 18
    assert main(["bb", "--complex", k3, "families", "--index-bound", "0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdicts"]["members"]


def test_bb_rarea(k3, tmp_path):
    out = tmp_path / "r.json"
    assert main(
        ["--json", str(out), "bb", "--complex", k3, "rarea", "--index-bound", "1"]
    ) == 0
    rows = json.loads(out.read_text())["verdicts"]["table"]
    assert all(r["upper"] <= r["bound"] for r in rows)


def test_depth(tmp_path, capsys):
    theta = tmp_path / "theta.json"
    theta.write_text(
        json.dumps(
            {
                "rank": 1,
                "charges": {
                    "x1": [1], "y1": [0], "x2": [1], "y2": [0], "x3": [1], "y3": [0]
                },
            }
        )
    )
    code = main(
        ["depth", "--theta", str(theta), "--factors", "x1 y1,x2 y2,x3 y3"]
    )
    assert code == 0
    assert capsys.readouterr().out.splitlines()[0] == "1"


def test_distort(tmp_path):
    theta = tmp_path / "theta.json"
    theta.write_text(
        json.dumps(
            {"rank": 1, "charges": {"x1": [1], "y1": [0], "x2": [1], "y2": [0]}}
        )
    )
    out = tmp_path / "r.json"
    code = main(
        [
            "--json", str(out),
            "distort", "--theta", str(theta), "--factors", "x1 y1,x2 y2",
            "--sub-gens", "x1 x2',y1,y2", "--length", "3",
        ]
    )
    assert code == 0
    assert json.loads(out.read_text())["verdicts"]["kind"] == "value"


def test_bounds(capsys):
    assert main(
        ["bounds", "--kind", "area-radius", "--alpha", "l^2", "--rho", "l",
         "--r", "1"]
    ) == 0
    assert capsys.readouterr().out.splitlines()[0] == "l^4"
    assert main(["bounds", "--kind", "split", "--beta1", "l^2", "--beta2", "l^2"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "l^5"


def test_bounds_usage_error(capsys):
    assert main(["bounds", "--kind", "split", "--beta1", "l^2"]) == 2


def test_fixtures_single(capsys):
    assert main(["fixtures", "run", "--only", "bound-calculators"]) == 0
    out = capsys.readouterr().out
    assert "[pass] bound-calculators" in out


def test_report_determinism(z2, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["area", "--presentation", z2, "--word", "x y x' y'"]
    assert main(["--json", str(a)] + argv) == 0
    assert main(["--json", str(b)] + argv) == 0
    assert a.read_text() == b.read_text()


def test_usage_error_exit_code():
    assert main(["area", "--presentation", "/nonexistent.json", "--word", "x"]) == 2


def test_construct_fiber(tmp_path, capsys):
    spec = tmp_path / "fiber.json"
    spec.write_text(
        json.dumps(
            {
                "a1": ["a", "b"],
                "x1": ["x"],
                "r1": ["x a x' a'"],
                "r2": ["x x a'"],
                "r3": [],
                "a2": ["c"],
                "x2": ["z"],
                "r4": ["z c z' c'"],
                "w_r4": ["a"],
            }
        )
    )
    assert main(["construct", "fiber", "--spec", str(spec)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdicts"]["complete"] is False
    assert report["verdicts"]["generators"]
