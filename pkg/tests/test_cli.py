"""Scenario front end: validation, determinism, presets, exit codes."""
import json
import math
import os

import pytest

from mzi_sensitivity.cli import (
    Scenario,
    SweepSpec,
    main,
    run_scenario,
    scenario_from_json,
    scenario_to_json,
    sweep_rows,
    validate,
)
from mzi_sensitivity.detection import Scheme
from mzi_sensitivity.mzi_core import Convention
from mzi_sensitivity.presets import PRESET_IDS, resolve_preset
from mzi_sensitivity.states import InputState, PmcId, coherent, fock, squeezed_vacuum


def _benchmark_scenario(**overrides):
    base = dict(
        input=InputState(port0=squeezed_vacuum(1.2), port1=coherent(100.0)),
        pmc=PmcId.COH_SQZ_VAC,
        scheme=Scheme.BALANCED_HOMODYNE,
        reference=Convention.EXTERNAL_REFERENCE,
        sweep=SweepSpec(variable="phi", start=0.9 * math.pi, stop=1.1 * math.pi, points=21),
        output_path="bench.csv",
    )
    base.update(overrides)
    return Scenario(**base)


def test_validate_flags_bad_transmittance():
    violations = validate(_benchmark_scenario(bs1=1.5))
    assert any("bs1 transmittance out of [0,1]" in v for v in violations)


def test_validate_flags_homodyne_without_reference():
    violations = validate(
        _benchmark_scenario(reference=Convention.NO_EXTERNAL_REFERENCE)
    )
    assert any("requires reference=external" in v for v in violations)


def test_validate_flags_incompatible_pmc():
    scenario = _benchmark_scenario(
        input=InputState(port0=fock(1), port1=coherent(2.0)), pmc=PmcId.PMC1
    )
    assert validate(scenario)


def test_validate_accepts_benchmark():
    assert validate(_benchmark_scenario()) == []


def test_round_trip_all_presets():
    for preset in PRESET_IDS:
        for _, scenario in resolve_preset(preset):
            doc = scenario_to_json(scenario)
            again = scenario_from_json(json.loads(json.dumps(doc)))
            assert again == scenario


def test_unknown_keys_rejected():
    doc = scenario_to_json(_benchmark_scenario())
    doc["unexpected"] = 1
    with pytest.raises(ValueError):
        scenario_from_json(doc)
    doc = scenario_to_json(_benchmark_scenario())
    doc["input"]["port0"]["oops"] = 2
    with pytest.raises(ValueError):
        scenario_from_json(doc)


def test_degenerate_sweep_is_single_row():
    scenario = _benchmark_scenario(
        sweep=SweepSpec(variable="phi", start=math.pi, stop=math.pi, points=11)
    )
    assert len(sweep_rows(scenario)) == 1


def test_run_scenario_benchmark_summary(tmp_path):
    summary = run_scenario(_benchmark_scenario(), out_dir=str(tmp_path), label="bench")
    assert summary["tau1"] == pytest.approx(0.55, abs=0.01)
    assert summary["tau2"] == pytest.approx(0.45, abs=0.01)
    assert summary["phi_opt"] == pytest.approx(math.pi, abs=1e-9)
    assert summary["qcrb_i"] == pytest.approx(2.871905864e-3, rel=1e-6)
    csv_path = os.path.join(str(tmp_path), "bench.csv")
    assert os.path.exists(csv_path)
    with open(csv_path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    assert lines[0] == "sweep_var,value,delta_phi,qcrb_2p,qcrb_i,extinction_rate,mean_n4"
    assert len(lines) == 22
    # homodyne rows carry no intensity columns
    assert lines[1].split(",")[5] == ""
    # the sweep contains the working point; its sensitivity equals the optimum
    mid = lines[11].split(",")
    assert float(mid[1]) == pytest.approx(math.pi)
    assert float(mid[2]) == pytest.approx(summary["delta_phi_opt"], rel=1e-9)


def test_run_scenario_is_deterministic(tmp_path):
    s = _benchmark_scenario(sweep=SweepSpec("phi", 0.95 * math.pi, 1.05 * math.pi, 11))
    run_scenario(s, out_dir=str(tmp_path / "a"))
    run_scenario(s, out_dir=str(tmp_path / "b"))
    a = (tmp_path / "a" / "bench.csv").read_bytes()
    b = (tmp_path / "b" / "bench.csv").read_bytes()
    assert a == b


def test_threads_env_does_not_change_output(tmp_path, monkeypatch):
    s = _benchmark_scenario(sweep=SweepSpec("phi", 0.95 * math.pi, 1.05 * math.pi, 16))
    monkeypatch.setenv("MZI_OPT_THREADS", "1")
    run_scenario(s, out_dir=str(tmp_path / "serial"))
    monkeypatch.setenv("MZI_OPT_THREADS", "4")
    run_scenario(s, out_dir=str(tmp_path / "parallel"))
    assert (tmp_path / "serial" / "bench.csv").read_bytes() == (
        tmp_path / "parallel" / "bench.csv"
    ).read_bytes()


def test_main_validate_ok(tmp_path, capsys):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario_to_json(_benchmark_scenario())), encoding="utf-8")
    assert main(["validate", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_main_validate_failure_exit_code(tmp_path):
    doc = scenario_to_json(_benchmark_scenario(bs1=1.5))
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["validate", str(path)]) == 2


def test_main_run_writes_csv_and_summary(tmp_path, capsys):
    doc = scenario_to_json(
        _benchmark_scenario(sweep=SweepSpec("phi", 0.99 * math.pi, 1.01 * math.pi, 5))
    )
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["run", str(path), "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    summary = json.loads(out[-1])
    assert summary["phi_opt"] == pytest.approx(math.pi, abs=1e-9)
    assert (tmp_path / "bench.csv").exists()


def test_main_sweep_requires_sweep_block(tmp_path):
    doc = scenario_to_json(_benchmark_scenario(sweep=None))
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["sweep", str(path), "--out", str(tmp_path)]) == 2


def test_main_computation_degeneracy_exit_code(tmp_path):
    doc = scenario_to_json(
        Scenario(
            input=InputState(port0=squeezed_vacuum(0.0), port1=coherent(0.0)),
            scheme=Scheme.DIFFERENCE_INTENSITY,
            reference=Convention.NO_EXTERNAL_REFERENCE,
            output_path="degenerate.csv",
        )
    )
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["run", str(path), "--out", str(tmp_path)]) == 3


def test_main_io_failure_exit_code(tmp_path):
    doc = scenario_to_json(_benchmark_scenario(sweep=None))
    target = tmp_path / "blocked"
    target.write_text("file, not a directory", encoding="utf-8")
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["run", str(path), "--out", str(target)]) == 4


def test_preset_fig5_summary(tmp_path, capsys):
    assert main(["preset", "fig5", "--out", str(tmp_path)]) == 0
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["tau1"] == pytest.approx(0.55, abs=0.01)
    assert summary["tau2"] == pytest.approx(0.45, abs=0.01)
    assert summary["phi_opt"] == pytest.approx(math.pi, abs=1e-9)
    assert (tmp_path / "fig05_homodyne_coh_sqzvac.csv").exists()


def test_unknown_preset_rejected(tmp_path):
    assert main(["preset", "fig99", "--out", str(tmp_path)]) == 2


def test_fig4_sweep_minimum_row(tmp_path):
    assert main(["preset", "fig4", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "fig04_single_coh_sqzvac.csv").read_text().splitlines()
    assert len(lines) == 1002
    rows = [line.split(",") for line in lines[1:]]
    values = [(float(r[2]) if r[2] else math.inf, float(r[1])) for r in rows]
    best_value, best_phi = min(values)
    # the two working points pi -+ 0.124 pi are equivalent minima
    folded = min(best_phi, 2.0 * math.pi - best_phi)
    assert folded == pytest.approx(0.876 * math.pi, abs=0.002 * math.pi)
    assert best_value == pytest.approx(4.102763e-3, rel=1e-4)


def test_tau2_sweep_runs(tmp_path):
    scenario = Scenario(
        input=InputState(port0=squeezed_vacuum(0.8), port1=coherent(2.0)),
        pmc=PmcId.COH_SQZ_VAC,
        scheme=Scheme.DIFFERENCE_INTENSITY,
        reference=Convention.NO_EXTERNAL_REFERENCE,
        sweep=SweepSpec("tau2", 0.2, 0.8, 7),
        output_path="tau.csv",
    )
    rows = sweep_rows(scenario)
    assert len(rows) == 7
    assert all(r.startswith("tau2,") for r in rows)


def test_alpha_sweep_runs(tmp_path):
    scenario = Scenario(
        input=InputState(port0=squeezed_vacuum(0.8), port1=coherent(2.0)),
        pmc=PmcId.COH_SQZ_VAC,
        scheme=Scheme.SINGLE_MODE_INTENSITY,
        reference=Convention.NO_EXTERNAL_REFERENCE,
        sweep=SweepSpec("alpha", 1.0, 3.0, 5),
        output_path="alpha.csv",
    )
    rows = sweep_rows(scenario)
    assert len(rows) == 5
    values = [float(r.split(",")[2]) for r in rows]
    # brighter drive estimates phase better
    assert values == sorted(values, reverse=True)
