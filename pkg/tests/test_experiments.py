import json
from importlib import resources

import pytest

from dirichlet_lab import experiments as ex
from dirichlet_lab.cli import main
from dirichlet_lab.experiments import ScenarioError, TraceRow, emit_report, run_scenario, scenario_from_dict


def base(**kw):
    raw = {
        "schema_version": 1,
        "function": "exp(-t^2/50)*sin(3*t)",
        "x_points": [0.5, -1.25],
        "sweep": [{"n": 20, "l": 4}, {"n": 90, "l": 9}],
        "checks": ["converge"],
    }
    raw.update(kw)
    return raw


def scenario_path(name):
    return resources.files("dirichlet_lab") / "scenarios" / f"{name}.json"


@pytest.mark.parametrize(
    "patch, path",
    [
        ({"schema_version": 2}, "schema_version"),
        ({"function": ""}, "function"),
        ({"function": "sin(t"}, "function"),
        ({"function": "tan(t)"}, "function"),
        ({"checks": []}, "checks"),
        ({"checks": ["converge", "bogus"]}, "checks[1]"),
        ({"sweep": [{"n": 20, "l": 4}, {"n": 10, "l": 9}]}, "sweep[1]"),
        ({"sweep": [{"n": 20, "l": 4}, {"n": 90, "l": 3}]}, "sweep[1].l"),
        ({"sweep": [{"n": 0, "l": 4}]}, "sweep[0].n"),
        ({"sweep": {"rule": "power", "l0": 10, "ratio": 2, "steps": 3, "exponent": 1}}, "sweep.exponent"),
        ({"sweep": {"rule": "cubic"}}, "sweep.rule"),
        ({"x_points": []}, "x_points"),
        ({"x_points": {"interval": [1, 0], "count": 3}}, "x_points.interval"),
        ({"quadrature": {"nodes_per_panel": 1}}, "quadrature"),
        ({"quadrature": {"order": 3}}, "quadrature.order"),
        ({"period_hint": -1}, "period_hint"),
        ({"support_hint": [3, 1]}, "support_hint"),
        ({"class_e": {"T_grid": [10, 5]}}, "class_e.T_grid"),
        ({"lebesgue": {"h_min": 1, "h_max": 10}}, "lebesgue"),
        ({"threshold": 0}, "threshold"),
    ],
)
def test_validation_reports_field_path(patch, path):
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict(base(**patch))
    assert info.value.path.startswith(path.split("[")[0])
    assert info.value.path == path or str(info.value).startswith(path)


def test_empty_checks_writes_nothing(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(base(checks=[])))
    out = tmp_path / "out"
    assert main(["run", "--scenario", str(bad), "--out", str(out)]) == 2
    assert not out.exists()


def test_power_sweep_rule():
    sc = scenario_from_dict(base(sweep={"rule": "power", "l0": 10, "ratio": 2, "steps": 4, "exponent": 2}))
    assert [(g.n, g.l) for g in sc.sweep] == [(100, 10.0), (400, 20.0), (1600, 40.0), (6400, 80.0)]


def test_x_point_forms():
    sc = scenario_from_dict(base(x_points={"interval": [-1, 1], "count": 21}))
    assert len(sc.x_points) == 21 and sc.x_points[0] == -1.0 and sc.x_points[-1] == 1.0
    a = scenario_from_dict(base(x_points={"random": {"interval": [-3, 3], "count": 4}}, seed=3))
    b = scenario_from_dict(base(x_points={"random": {"interval": [-3, 3], "count": 4}}, seed=3))
    c = scenario_from_dict(base(x_points={"random": {"interval": [-3, 3], "count": 4}}), seed=4)
    assert a.x_points == b.x_points != c.x_points


def test_emit_report_single_row():
    row = TraceRow(0, 100, 10.0, 0.1, 1.0, 0.0200626165538, 0.0, 0.0200626165538, None)
    text = emit_report([row], "csv")
    assert text == "j,n,l,eta,x,S,target,abs_error,bound_rhs\n0,100,10,0.1,1,0.0200626165538,0,0.0200626165538,\n"
    data = json.loads(emit_report([row], "json"))
    assert data == [dict(zip(ex.TRACE_HEADER, [0, 100, 10.0, 0.1, 1.0, 0.0200626165538, 0.0, 0.0200626165538, None]))]
    with pytest.raises(ValueError):
        emit_report([], "csv")


def test_fmt_is_fixed_precision():
    assert ex.fmt(1 / 3) == "0.333333333333"
    assert ex.fmt(-0.0) == "0"
    assert ex.fmt(3) == "3"
    assert ex.fmt(None) == ""
    assert ex.fmt(True) == "true"


def test_convergence_demonstrated():
    assert ex.convergence_demonstrated([0.3, 0.2, 0.1], 0.15)
    assert not ex.convergence_demonstrated([0.3, 0.2, 0.1], 0.05)
    assert not ex.convergence_demonstrated([0.3, 0.1, 0.2], None)
    assert not ex.convergence_demonstrated([0.3, 0.2], None)


def test_constant_scenario():
    res = run_scenario(scenario_path("constant"))
    assert res.exit_status == 0
    rows = res.outcomes["converge"].files["converge.csv"].splitlines()[1:]
    assert len(rows) == 9
    assert all(float(r.split(",")[7]) <= 1e-8 for r in rows)


def test_single_harmonic_scenario():
    res = run_scenario(scenario_path("single_harmonic"))
    assert res.exit_status == 0
    rows = res.outcomes["converge"].files["converge.csv"].splitlines()[1:]
    assert all(float(r.split(",")[7]) <= 1e-8 for r in rows)


def test_violated_identity_gives_nonzero_exit(tmp_path):
    coarse = {"nodes_per_panel": 2, "abs_tol": 0.01, "rel_tol": 0.01, "min_panels_per_oscillation": 1}
    raw = base(function="piecewise([0,1]: 1; else: 0)", x_points=[0.5, 1.0], sweep=[{"n": 30, "l": 6}],
               checks=["partial-sum"], quadrature=coarse)
    res = run_scenario(scenario_from_dict(raw), tmp_path)
    assert res.exit_status == 1
    assert res.outcomes["partial-sum"].failures
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["exit_status"] == 1 and summary["checks"]["partial-sum"]["passed"] is False


def test_strict_turns_flags_into_failures():
    raw = base(function="abs(t)", checks=["class-e"], class_e={"c_list": [1], "T_grid": [10, 100, 1000]})
    assert run_scenario(scenario_from_dict(raw)).exit_status == 0
    assert run_scenario(scenario_from_dict(raw), strict=True).exit_status == 1


def test_summary_records_seed_and_files(tmp_path):
    raw = base(checks=["converge", "coeffs"], seed=17)
    run_scenario(scenario_from_dict(raw), tmp_path)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["seed"] == 17
    assert summary["schema_version"] == 1
    assert sorted(p.name for p in tmp_path.iterdir()) == ["coeffs_j0.csv", "coeffs_j1.csv", "converge.csv",
                                                         "summary.json"]


def _all_files(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def test_rerun_is_byte_identical(tmp_path):
    raw = base(checks=list(ex.CHECKS), sweep=[{"n": 12, "l": 3}, {"n": 60, "l": 6}], samples=500,
               class_e={"c_list": [1.0], "T_grid": [10, 100, 1000]})
    outs = []
    for i, jobs in enumerate([1, 1, 4]):
        d = tmp_path / f"run{i}"
        run_scenario(scenario_from_dict(raw), d, jobs=jobs)
        outs.append(_all_files(d))
    assert outs[0] == outs[1] == outs[2]


def test_cli_coeffs_stdout(capsys):
    assert main(["coeffs", "-f", "cos(pi*t/5)", "--l", "5", "--n", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,a,b"
    k1 = lines[2].split(",")
    assert k1[0] == "1" and abs(float(k1[1]) - 1) <= 1e-8 and abs(float(k1[2])) <= 1e-8


def test_cli_kernel(capsys):
    assert main(["kernel", "--l", "2", "--n", "2", "--t-count", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,D"
    assert lines[3] == "0,2.5"


def test_cli_partial_sum_and_checks(tmp_path, capsys):
    assert main(["partial-sum", "-f", "exp(-abs(t))*cos(2*t)", "--l", "8", "--n", "40", "--x", "0.3", "--x", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "x,n,l,value,via" and len(out) == 5
    assert {line.split(",")[-1] for line in out[1:]} == {"coefficient_sum", "kernel_convolution"}
    for sub, fname in [("bound-check", "bound.csv"), ("k-check", "k.csv"), ("lebesgue-check", "lebesgue.json"),
                       ("converge", "converge.csv")]:
        d = tmp_path / sub
        code = main([sub, "-f", "exp(-abs(t))*cos(2*t)", "--l0", "4", "--steps", "3", "--x", "0.5", "--out", str(d)])
        assert code == 0, sub
        assert (d / fname).exists() and (d / "summary.json").exists()


def test_cli_class_e(capsys):
    assert main(["class-e-check", "-f", "sin(t)", "--period", "6.283185307179586"]) == 0
    assert capsys.readouterr().out.startswith("c,T,right_value,left_value\n")


def test_cli_errors(tmp_path, capsys):
    assert main(["coeffs", "-f", "sin(t"]) == 2
    assert "byte offset" in capsys.readouterr().err
    assert main(["run"]) == 2
    assert main(["kernel", "--l", "2"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["run", "--scenario", str(bad)]) == 2
    code = main(["coeffs", "-f", "piecewise([0,1]: 1; else: 0)", "--l", "4", "--n", "3", "--quad-abs-tol", "1e-300",
                 "--quad-rel-tol", "1e-300"])
    assert code == 3


def test_cli_quadrature_flags_reach_summary(tmp_path):
    d = tmp_path / "o"
    main(["converge", "-f", "sin(t)", "--l", "3", "--n", "9", "--quad-nodes", "12", "--quad-panels-per-osc", "6",
          "--out", str(d)])
    q = json.loads((d / "summary.json").read_text())["quadrature"]
    assert q["nodes_per_panel"] == 12 and q["min_panels_per_oscillation"] == 6
