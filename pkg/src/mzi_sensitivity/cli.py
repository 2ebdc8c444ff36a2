"""Scenario-driven command line front end.

A scenario is a strict JSON document selecting the input state (optionally
normalized by a phase-matching condition), the detection scheme, fixed or
auto-optimized beam splitters / working point, and an optional 1-D sweep.
Running a scenario emits a deterministic CSV dataset plus one machine-
parsable JSON summary line on stdout.

Verbs:
    run <scenario.json>        resolve, optimize, write CSV, print summary
    sweep <scenario.json>      same, but requires a sweep block
    validate <scenario.json>   print violations, if any
    preset <figN> [--out DIR]  run the bundled figure-reproduction scenarios

Exit codes: 0 success, 2 validation failure, 3 computation degeneracy,
4 I/O failure.  ``MZI_OPT_THREADS`` caps sweep parallelism.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Optional, Union

from .detection import (
    Scheme,
    mean_output_photons,
    sensitivity_difference,
    sensitivity_homodyne,
    sensitivity_single,
)
from .errors import IncompatiblePmc, MziError, ZeroDerivative
from .mzi_core import BsAngles, Convention
from .optimize import OptimizationReport, joint_optimize
from .qfi import fisher_matrix, qfi_report
from .states import (
    InputState,
    Kind,
    ModeSpec,
    PmcId,
    apply_pmc,
    field_moments,
    mean_total_photons,
    schwinger_moments,
)

__all__ = ["Scenario", "SweepSpec", "validate", "run_scenario", "sweep_rows", "main"]

TWO_PI = 2.0 * math.pi

CSV_HEADER = "sweep_var,value,delta_phi,qcrb_2p,qcrb_i,extinction_rate,mean_n4"

_MODE_KEYS = {
    "kind",
    "amplitude_mag",
    "amplitude_phase",
    "squeeze_mag",
    "squeeze_phase",
    "fock_n",
}
_SCENARIO_KEYS = {
    "input",
    "pmc",
    "scheme",
    "reference",
    "bs1",
    "bs2",
    "working_point",
    "local_oscillator",
    "sweep",
    "output_path",
}
_SWEEP_KEYS = {"variable", "from", "to", "points"}


@dataclass(frozen=True)
class SweepSpec:
    variable: str  # "phi" | "tau2" | "alpha"
    start: float
    stop: float
    points: int


@dataclass(frozen=True)
class Scenario:
    input: InputState
    scheme: Scheme
    reference: Convention
    pmc: Optional[PmcId] = None
    bs1: Union[str, float] = "auto"
    bs2: Union[str, float] = "auto"
    working_point: Union[str, float] = "auto"
    local_oscillator: Union[str, float] = "auto"
    sweep: Optional[SweepSpec] = None
    output_path: str = "scenario.csv"


# ---------------------------------------------------------------------------
# parsing and serialization
# ---------------------------------------------------------------------------

def _mode_from_json(doc: dict, where: str) -> ModeSpec:
    unknown = set(doc) - _MODE_KEYS
    if unknown:
        raise ValueError(f"{where}: unknown keys {sorted(unknown)}")
    if "kind" not in doc:
        raise ValueError(f"{where}: missing 'kind'")
    kind = Kind(doc["kind"])
    return ModeSpec(
        kind=kind,
        amplitude_mag=float(doc.get("amplitude_mag", 0.0)),
        amplitude_phase=float(doc.get("amplitude_phase", 0.0)),
        squeeze_mag=float(doc.get("squeeze_mag", 0.0)),
        squeeze_phase=float(doc.get("squeeze_phase", 0.0)),
        fock_n=int(doc.get("fock_n", 0)),
    )


def _auto_or_float(value, field: str):
    if value == "auto":
        return "auto"
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ValueError(f"{field}: expected 'auto' or a number, got {value!r}")


def scenario_from_json(doc: dict) -> Scenario:
    """Parse a scenario document; unknown keys are errors."""
    unknown = set(doc) - _SCENARIO_KEYS
    if unknown:
        raise ValueError(f"scenario: unknown keys {sorted(unknown)}")
    input_doc = doc.get("input")
    if not isinstance(input_doc, dict) or set(input_doc) != {"port0", "port1"}:
        raise ValueError("input: expected an object with exactly 'port0' and 'port1'")
    state = InputState(
        port0=_mode_from_json(input_doc["port0"], "input.port0"),
        port1=_mode_from_json(input_doc["port1"], "input.port1"),
    )
    sweep_doc = doc.get("sweep")
    sweep = None
    if sweep_doc is not None:
        unknown = set(sweep_doc) - _SWEEP_KEYS
        if unknown:
            raise ValueError(f"sweep: unknown keys {sorted(unknown)}")
        sweep = SweepSpec(
            variable=str(sweep_doc["variable"]),
            start=float(sweep_doc["from"]),
            stop=float(sweep_doc["to"]),
            points=int(sweep_doc["points"]),
        )
    return Scenario(
        input=state,
        scheme=Scheme(doc["scheme"]),
        reference=Convention(doc.get("reference", "none")),
        pmc=PmcId(doc["pmc"]) if doc.get("pmc") is not None else None,
        bs1=_auto_or_float(doc.get("bs1", "auto"), "bs1"),
        bs2=_auto_or_float(doc.get("bs2", "auto"), "bs2"),
        working_point=_auto_or_float(doc.get("working_point", "auto"), "working_point"),
        local_oscillator=_auto_or_float(doc.get("local_oscillator", "auto"), "local_oscillator"),
        sweep=sweep,
        output_path=str(doc.get("output_path", "scenario.csv")),
    )


def scenario_to_json(s: Scenario) -> dict:
    def mode_doc(m: ModeSpec) -> dict:
        return {
            "kind": m.kind.value,
            "amplitude_mag": m.amplitude_mag,
            "amplitude_phase": m.amplitude_phase,
            "squeeze_mag": m.squeeze_mag,
            "squeeze_phase": m.squeeze_phase,
            "fock_n": m.fock_n,
        }

    doc = {
        "input": {"port0": mode_doc(s.input.port0), "port1": mode_doc(s.input.port1)},
        "pmc": s.pmc.value if s.pmc else None,
        "scheme": s.scheme.value,
        "reference": s.reference.value,
        "bs1": s.bs1,
        "bs2": s.bs2,
        "working_point": s.working_point,
        "local_oscillator": s.local_oscillator,
        "sweep": None
        if s.sweep is None
        else {
            "variable": s.sweep.variable,
            "from": s.sweep.start,
            "to": s.sweep.stop,
            "points": s.sweep.points,
        },
        "output_path": s.output_path,
    }
    return doc


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate(s: Scenario) -> list[str]:
    """Exhaustive field checks; returns a list of violations (empty = ok)."""
    violations: list[str] = []
    for name, value in (("bs1", s.bs1), ("bs2", s.bs2)):
        if value != "auto" and not 0.0 <= float(value) <= 1.0:
            violations.append(f"{name} transmittance out of [0,1]")
    if s.scheme is Scheme.BALANCED_HOMODYNE and s.reference is not Convention.EXTERNAL_REFERENCE:
        violations.append("scheme balanced_homodyne requires reference=external")
    if s.sweep is not None:
        if s.sweep.variable not in ("phi", "tau2", "alpha"):
            violations.append(f"sweep.variable unknown: {s.sweep.variable!r}")
        if s.sweep.points < 2:
            violations.append("sweep.points must be at least 2")
        if s.sweep.variable == "tau2" and not (
            0.0 <= s.sweep.start <= 1.0 and 0.0 <= s.sweep.stop <= 1.0
        ):
            violations.append("sweep over tau2 must stay in [0,1]")
        if s.sweep.variable == "alpha" and (s.sweep.start < 0.0 or s.sweep.stop < 0.0):
            violations.append("sweep over alpha needs nonnegative magnitudes")
        if s.sweep.variable == "alpha" and s.input.port1.kind not in (
            Kind.COHERENT,
            Kind.SQUEEZED_COHERENT,
        ):
            violations.append("sweep over alpha needs a coherent amplitude on port 1")
    if s.pmc is not None:
        try:
            apply_pmc(s.input, s.pmc)
        except IncompatiblePmc as exc:
            violations.append(str(exc))
    if not s.output_path:
        violations.append("output_path must be a nonempty string")
    return violations


# ---------------------------------------------------------------------------
# resolution and evaluation
# ---------------------------------------------------------------------------

def _resolve_report(s: Scenario, state: InputState) -> OptimizationReport:
    kwargs = {}
    if s.bs1 != "auto":
        kwargs["bs1"] = 2.0 * math.acos(math.sqrt(float(s.bs1)))
    if s.bs2 != "auto":
        kwargs["bs2"] = 2.0 * math.acos(math.sqrt(float(s.bs2)))
    if s.working_point != "auto":
        kwargs["working_point"] = float(s.working_point)
    if s.local_oscillator != "auto":
        kwargs["phi_local"] = float(s.local_oscillator)
    return joint_optimize(state, s.scheme, s.reference, **kwargs)


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.17g}"


def _row_values(s, state, m, fm, angles, phi, phi_local):
    """One CSV payload: delta_phi, qcrb_2p, qcrb_i, extinction, mean_n4."""
    try:
        if s.scheme is Scheme.DIFFERENCE_INTENSITY:
            delta_phi = sensitivity_difference(m, angles, phi).delta_phi
        elif s.scheme is Scheme.SINGLE_MODE_INTENSITY:
            delta_phi = sensitivity_single(m, angles, phi).delta_phi
        else:
            delta_phi = sensitivity_homodyne(fm, angles, phi, phi_local).delta_phi
    except ZeroDerivative:
        delta_phi = None
    report = qfi_report(fisher_matrix(state, angles.theta))
    qcrb_i = report.qcrb_i if s.reference is Convention.EXTERNAL_REFERENCE else None
    if s.scheme is Scheme.BALANCED_HOMODYNE:
        ext, n4 = None, None
    else:
        n4 = mean_output_photons(m, angles, phi)
        ext = n4 / m.mean_n if m.mean_n > 0 else None
    return delta_phi, report.qcrb_2p, qcrb_i, ext, n4


def sweep_rows(s: Scenario) -> list[str]:
    """CSV rows (without header) for the scenario's sweep grid."""
    if s.sweep is None:
        raise ValueError("scenario has no sweep block")
    state = apply_pmc(s.input, s.pmc) if s.pmc else s.input
    base = _resolve_report(s, state)
    spec = s.sweep
    if spec.start == spec.stop:
        grid = [spec.start]
    else:
        step = (spec.stop - spec.start) / (spec.points - 1)
        grid = [spec.start + i * step for i in range(spec.points)]

    m = schwinger_moments(state)
    fm = field_moments(state)

    def eval_phi(phi: float) -> str:
        angles = BsAngles(base.theta_opt, base.theta_prime_opt)
        vals = _row_values(s, state, m, fm, angles, phi, base.phi_local_opt)
        return ",".join(["phi", _fmt(phi), *map(_fmt, vals)])

    def eval_tau2(tau: float) -> str:
        theta = 2.0 * math.acos(math.sqrt(tau))
        sub = dataclasses.replace(s, bs1=tau, sweep=None)
        rep = _resolve_report(sub, state)
        angles = BsAngles(theta, rep.theta_prime_opt)
        vals = _row_values(s, state, m, fm, angles, rep.phi_opt, rep.phi_local_opt)
        return ",".join(["tau2", _fmt(tau), *map(_fmt, vals)])

    def eval_alpha(mag: float) -> str:
        port1 = dataclasses.replace(s.input.port1, amplitude_mag=mag)
        sub_state = InputState(port0=s.input.port0, port1=port1)
        if s.pmc:
            sub_state = apply_pmc(sub_state, s.pmc)
        rep = _resolve_report(dataclasses.replace(s, sweep=None), sub_state)
        angles = BsAngles(rep.theta_opt, rep.theta_prime_opt)
        m = schwinger_moments(sub_state)
        fm = field_moments(sub_state)
        vals = _row_values(s, sub_state, m, fm, angles, rep.phi_opt, rep.phi_local_opt)
        return ",".join(["alpha", _fmt(mag), *map(_fmt, vals)])

    worker = {"phi": eval_phi, "tau2": eval_tau2, "alpha": eval_alpha}[spec.variable]
    cap = _thread_cap()
    if cap > 1 and len(grid) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=cap) as pool:
            return list(pool.map(worker, grid))
    return [worker(x) for x in grid]


def _thread_cap() -> int:
    raw = os.environ.get("MZI_OPT_THREADS", "")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            return 1
    return max(1, os.cpu_count() or 1)


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_scenario(s: Scenario, out_dir: str = ".", label: str = "scenario") -> dict:
    """Resolve, optimize, write the CSV dataset, and return the summary."""
    violations = validate(s)
    if violations:
        raise ValueError("; ".join(violations))
    state = apply_pmc(s.input, s.pmc) if s.pmc else s.input
    report = _resolve_report(s, state)
    angles = BsAngles(report.theta_opt, report.theta_prime_opt)
    m = schwinger_moments(state)
    fm = field_moments(state)
    delta_phi, qcrb_2p, qcrb_i, ext, n4 = _row_values(
        s, state, m, fm, angles, report.phi_opt, report.phi_local_opt
    )

    if s.sweep is not None:
        rows = sweep_rows(s)
    else:
        rows = [
            ",".join(
                ["phi", _fmt(report.phi_opt), *map(_fmt, (delta_phi, qcrb_2p, qcrb_i, ext, n4))]
            )
        ]
    path = os.path.join(out_dir, s.output_path)
    _write_atomic(path, CSV_HEADER + "\n" + "\n".join(rows) + "\n")

    summary = {
        "scenario": label,
        "scheme": s.scheme.value,
        "reference": s.reference.value,
        "pmc": s.pmc.value if s.pmc else None,
        "tau1": math.cos(0.5 * report.theta_opt) ** 2,
        "tau2": math.cos(0.5 * report.theta_prime_opt) ** 2,
        "theta": report.theta_opt,
        "theta_prime": report.theta_prime_opt,
        "phi_opt": report.phi_opt,
        "phi_local": report.phi_local_opt,
        "delta_phi_opt": report.delta_phi_opt,
        "qcrb_2p": qcrb_2p,
        "qcrb_i": qcrb_i,
        "extinction_rate": ext,
        "mean_n4": n4,
        "mean_total_photons": mean_total_photons(state),
        "hessian_verified": report.hessian_verified,
        "degenerate": report.degenerate,
        "fallback_used": report.fallback_used,
        "output_path": path,
    }
    return summary


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        return scenario_from_json(json.load(handle))


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mzi-opt",
        description="Phase-sensitivity evaluation and optimization of an "
        "unbalanced Mach-Zehnder interferometer.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("run", "sweep", "validate"):
        p = sub.add_parser(verb)
        p.add_argument("scenario", help="path to a scenario JSON file")
        if verb != "validate":
            p.add_argument("--out", default=".", help="output directory for CSV files")
    p = sub.add_parser("preset")
    p.add_argument("figure", help="figure id, e.g. fig5")
    p.add_argument("--out", default=".", help="output directory for CSV files")
    args = parser.parse_args(argv)

    try:
        if args.verb == "preset":
            from .presets import resolve_preset

            scenarios = resolve_preset(args.figure)
            for name, scenario in scenarios:
                summary = run_scenario(scenario, out_dir=args.out, label=name)
                print(json.dumps(summary, sort_keys=True))
            return 0

        scenario = _load_scenario(args.scenario)
        if args.verb == "validate":
            violations = validate(scenario)
            for v in violations:
                print(v)
            if violations:
                return 2
            print("ok")
            return 0
        if args.verb == "sweep" and scenario.sweep is None:
            print("scenario has no sweep block", file=sys.stderr)
            return 2
        summary = run_scenario(scenario, out_dir=args.out, label=args.scenario)
        print(json.dumps(summary, sort_keys=True))
        return 0
    except (ValueError, KeyError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except MziError as exc:
        print(f"computation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
