"""Optimization of the interferometer configuration.

The first beam splitter is fixed by maximizing the relevant quantum Fisher
information (two-parameter without an external phase reference, single-
parameter with one).  The second beam splitter and the working point are
then optimized per detection scheme by alternating two exact stationarity
steps:

* the mixing-angle step uses the closed-form stationarity condition of each
  scheme (an arctangent for difference-intensity and homodyne detection, a
  quartic in tan(theta'/2) for single-mode detection), and
* the working-point step solves the quartic stationarity equation of the
  unified sensitivity form in tan(phi/2), short-circuiting to the standard
  closed forms whenever the coefficient zero structure allows.

Minima are confirmed by finite-difference second-order conditions, and a
dense grid fallback guards the rare non-convergent configurations.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .detection import (
    Scheme,
    SensitivityCoefficients,
    default_local_oscillator_phase,
    generic_coefficients,
    sensitivity_difference,
    sensitivity_from_coefficients,
    sensitivity_homodyne,
    sensitivity_single,
)
from .errors import (
    FlatObjective,
    NoConvergence,
    WrongConvention,
    ZeroDerivative,
    ZeroDerivativeEverywhere,
)
from .mzi_core import BsAngles, Convention, internal_mode_moments
from .qfi import FisherMatrix, qfi_report
from .states import FieldMoments, InputState, SchwingerMoments, field_moments, schwinger_moments

__all__ = [
    "OptimizationReport",
    "QuarticSolution",
    "optimize_bs1",
    "optimize_bs2_difference",
    "optimize_bs2_single",
    "optimize_bs2_homodyne",
    "optimal_working_point",
    "joint_optimize",
]

TWO_PI = 2.0 * math.pi
_STANDARD_CANDIDATES = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)


@dataclass(frozen=True)
class OptimizationReport:
    theta_opt: float
    theta_prime_opt: float
    phi_opt: float
    phi_local_opt: float
    delta_phi_opt: float
    hessian_verified: bool
    degenerate: bool
    fallback_used: bool = False


@dataclass(frozen=True)
class QuarticSolution:
    """Solution record of a quartic stationarity equation.

    ``real_roots`` holds the retained real roots of the tan-half-angle
    quartic, ``candidates_phi`` the corresponding candidate angles (plus the
    standard probe angles), ``chosen`` the minimizing angle, and ``residual``
    the normalized polynomial (or stationarity) value at the chosen point.
    """

    real_roots: tuple[float, ...]
    candidates_phi: tuple[float, ...]
    chosen: float
    residual: float
    fallback: bool = False


# ---------------------------------------------------------------------------
# scalar search helpers
# ---------------------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Golden-section minimum of a unimodal scalar function on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _polish_min(
    f: Callable[[float], float],
    center: float,
    width: float,
    tol: float = 1e-12,
    max_expansions: int = 5,
) -> float:
    """Golden-section polish around ``center`` with downhill bracket growth.

    If the objective still decreases at a bracket edge the bracket is
    doubled (a few times) so candidates displaced by more than the initial
    width are still pulled into their basin.
    """
    lo, hi = center - width, center + width
    for _ in range(max_expansions):
        f_lo, f_hi = f(lo), f(hi)
        interior = f(0.5 * (lo + hi))
        if interior <= min(f_lo, f_hi):
            break
        if f_lo < f_hi:
            lo -= (hi - lo)
        else:
            hi += (hi - lo)
    return _golden_min(f, lo, hi, tol)


def _scan_then_refine(
    f: Callable[[float], float], lo: float, hi: float, points: int, tol: float
) -> float:
    xs = np.linspace(lo, hi, points)
    vals = np.array([f(x) for x in xs])
    i = int(np.argmin(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, points - 1)]
    return _golden_min(f, a, b, tol)


def _real_roots(coeffs: Sequence[float], imag_tol: float = 1e-9) -> list[float]:
    """Real roots of a polynomial, leading near-zeros trimmed.

    ``imag_tol`` is relative to 1 + |Re|.  The default keeps genuinely real
    roots only; candidate generation uses a far looser filter because a
    root of multiplicity m scatters numerically into a complex cluster of
    radius ~eps^(1/m), which for a quadruple root is about 1e-4.
    """
    scale = max(abs(c) for c in coeffs)
    if scale == 0.0:
        return []
    trimmed = list(coeffs)
    while len(trimmed) > 1 and abs(trimmed[0]) <= 1e-12 * scale:
        trimmed.pop(0)
    if len(trimmed) <= 1:
        return []
    roots = np.roots(trimmed)
    return [r.real for r in roots if abs(r.imag) < imag_tol * (1.0 + abs(r.real))]


def _poly_residual(coeffs: Sequence[float], t: float) -> float:
    scale = max(abs(c) for c in coeffs)
    if scale == 0.0:
        return 0.0
    value = 0.0
    for c in coeffs:
        value = value * t + c
    return abs(value) / (scale * max(1.0, abs(t)) ** 4)


# ---------------------------------------------------------------------------
# first beam splitter
# ---------------------------------------------------------------------------

def optimize_bs1(state: InputState, reference: Convention) -> float:
    """Mixing angle of the first beam splitter maximizing the relevant QFI.

    Dense scan over [0, pi] followed by golden-section refinement; raises
    :class:`FlatObjective` when the information does not depend on the angle.
    """
    m = schwinger_moments(state)

    def objective(theta: float) -> float:
        rotated = internal_mode_moments(m, theta)
        fm = FisherMatrix(
            f_ss=rotated.var_n, f_sd=2.0 * rotated.cov_jz_n, f_dd=4.0 * rotated.var_jz
        )
        report = qfi_report(fm)
        return report.f_i if reference is Convention.EXTERNAL_REFERENCE else report.f_2p

    thetas = np.linspace(0.0, math.pi, 2001)
    values = np.array([objective(t) for t in thetas])
    vmax, vmin = float(values.max()), float(values.min())
    if vmax <= 0.0 or (vmax - vmin) < 1e-12 * vmax:
        raise FlatObjective("information is numerically constant in theta")
    i = int(np.argmax(values))
    a = thetas[max(i - 1, 0)]
    b = thetas[min(i + 1, len(thetas) - 1)]
    return _golden_min(lambda t: -objective(t), a, b, 1e-10)


# ---------------------------------------------------------------------------
# second beam splitter, per scheme
# ---------------------------------------------------------------------------

def optimize_bs2_difference(m: SchwingerMoments, theta: float, phi_opt: float) -> float:
    """Stationary mixing angle of the second beam splitter for
    difference-intensity detection at working point ``phi_opt``."""
    st, ct = math.sin(theta), math.cos(theta)
    s2t, c2t = math.sin(2.0 * theta), math.cos(2.0 * theta)
    num = m.var_jy * st * st + m.var_jz * ct * ct - m.symcov_yz * s2t
    den = (
        0.5 * s2t * (m.var_jy - m.var_jz) * math.cos(phi_opt)
        - m.symcov_yz * c2t * math.cos(phi_opt)
        + (m.symcov_xz * ct - m.symcov_xy * st) * math.sin(phi_opt)
    )
    scale = abs(m.var_jy) + abs(m.var_jz) + abs(m.symcov_yz) + abs(m.symcov_xy) + abs(m.symcov_xz)
    if abs(num) <= 1e-12 * max(1e-300, scale) and abs(den) <= 1e-12 * max(1e-300, scale):
        # 0/0: fall back to a direct scan of the sensitivity
        return _scan_then_refine(
            lambda tp: _safe_delta_phi(
                lambda: sensitivity_difference(m, BsAngles(theta, tp), phi_opt).delta_phi
            ),
            1e-9,
            math.pi - 1e-9,
            801,
            1e-10,
        )
    # num >= 0 (it is a variance), so atan2 lands in [0, pi]
    return math.atan2(num, -den)


def optimize_bs2_single(m: SchwingerMoments, theta: float, phi: float) -> QuarticSolution:
    """Quartic stationarity solve in t = tan(theta'/2) for single-mode
    detection; candidate roots are ranked through the sensitivity itself."""
    st, ct = math.sin(theta), math.cos(theta)
    s2t, c2t = math.sin(2.0 * theta), math.cos(2.0 * theta)
    cp, sp = math.cos(phi), math.sin(phi)
    s0 = 0.25 * m.var_n + m.var_jz * ct * ct + m.var_jy * st * st - m.symcov_yz * s2t
    s1 = ((m.var_jy - m.var_jz) * s2t - 2.0 * m.symcov_yz * c2t) * cp + 2.0 * (
        m.symcov_xz * ct - m.symcov_xy * st
    ) * sp
    s2 = m.cov_jz_n * ct - m.cov_jy_n * st
    s3 = m.cov_jx_n * sp - (m.cov_jy_n * ct + m.cov_jz_n * st) * cp
    coeffs = (s2 - s0, s1 - s3, 0.0, s1 + s3, s0 + s2)

    def objective(tp: float) -> float:
        return _safe_delta_phi(
            lambda: sensitivity_single(m, BsAngles(theta, tp), phi).delta_phi
        )

    # strict real roots are kept verbatim; the loose filter adds clusters
    # scattered off the real axis by multiple roots, which get a local polish
    roots = [t for t in _real_roots(coeffs) if t > 0.0]
    seeds = [2.0 * math.atan(t) for t in _real_roots(coeffs, imag_tol=1e-4) if t > 0.0]
    polished = [
        min(max(_polish_min(objective, tp, 0.02), 1e-12), math.pi - 1e-12) for tp in seeds
    ]
    candidates = tuple(seeds) + tuple(polished)
    best, best_tp = math.inf, None
    # seeds precede their polished variants, so on a tie the raw root
    # (analytically exact for simple roots) is kept
    for tp in candidates:
        val = objective(tp)
        if val < best * (1.0 - 1e-12):
            best, best_tp = val, tp
    if best_tp is None:
        chosen = _scan_then_refine(
            lambda tp: _safe_delta_phi(
                lambda: sensitivity_single(m, BsAngles(theta, tp), phi).delta_phi
            ),
            1e-9,
            math.pi - 1e-9,
            801,
            1e-10,
        )
        return QuarticSolution(tuple(roots), candidates, chosen, math.inf, fallback=True)
    residual = _poly_residual(coeffs, math.tan(0.5 * best_tp))
    return QuarticSolution(tuple(roots), candidates, best_tp, residual)


def optimize_bs2_homodyne(
    fm: FieldMoments, theta: float, phi: float, phi_local: float
) -> float:
    """Stationary mixing angle of the second beam splitter for homodyne
    detection on a non-entangled input."""
    w0 = cmath.exp(-2j * phi_local) * fm.var_a0
    w1 = cmath.exp(-2j * phi_local) * fm.var_a1
    cp, cm = fm.cov_n0 + fm.cov_n1, fm.cov_n0 - fm.cov_n1
    ct, st = math.cos(theta), math.sin(theta)
    num = 0.25 * (1.0 + cp + ct * cm + (w0 - w1).real + ct * (w0 + w1).real)
    den = -0.25 * st * (math.cos(phi) * cm + (cmath.exp(-1j * phi) * (w0 + w1)).real)
    scale = max(abs(num), abs(den), 1e-300)
    if abs(den) <= 1e-12 * scale:
        return _bs2_scan_homodyne(fm, theta, phi, phi_local)
    t = -num / den
    if t <= 0.0:
        # stationary point falls outside (0, pi); take the in-range minimum
        return _bs2_scan_homodyne(fm, theta, phi, phi_local)
    return 2.0 * math.atan(t)


def _bs2_scan_homodyne(fm, theta, phi, phi_local):
    return _scan_then_refine(
        lambda tp: _safe_delta_phi(
            lambda: sensitivity_homodyne(fm, BsAngles(theta, tp), phi, phi_local).delta_phi
        ),
        1e-9,
        math.pi - 1e-9,
        801,
        1e-10,
    )


def _safe_delta_phi(thunk: Callable[[], float]) -> float:
    try:
        value = thunk()
    except ZeroDerivative:
        return math.inf
    return value if math.isfinite(value) else math.inf


# ---------------------------------------------------------------------------
# working point
# ---------------------------------------------------------------------------

def _wp_quartic_coeffs(c: SensitivityCoefficients) -> tuple[float, float, float, float, float]:
    ab = c.a + c.b
    return (
        c.e * c.f - 2.0 * c.d * c.g - 2.0 * c.c * c.f + 2.0 * ab * c.g,
        4.0 * (c.a * c.f - c.c * c.g) - 2.0 * (c.d * c.f - c.e * c.g),
        6.0 * c.e * c.f,
        2.0 * (c.d * c.f - c.e * c.g) + 4.0 * (c.a * c.f - c.c * c.g),
        2.0 * (c.c * c.f - ab * c.g) + (c.e * c.f - 2.0 * c.d * c.g),
    )


def _stationarity_residual(c: SensitivityCoefficients, phi: float) -> float:
    """Normalized first-order condition of the unified form at ``phi``."""
    sp, cp = math.sin(phi), math.cos(phi)
    terms = (
        (c.d * c.f - c.e * c.g) * sp * cp,
        (2.0 * c.e * c.f - c.d * c.g) * sp * sp,
        (c.e * c.f - 2.0 * c.d * c.g) * cp * cp,
        2.0 * (c.c * c.f - (c.a + c.b) * c.g) * cp,
        2.0 * (c.a * c.f - c.c * c.g) * sp,
    )
    scale = max(
        abs(c.d * c.f - c.e * c.g),
        abs(2.0 * c.e * c.f - c.d * c.g),
        abs(c.e * c.f - 2.0 * c.d * c.g),
        abs(2.0 * (c.c * c.f - (c.a + c.b) * c.g)),
        abs(2.0 * (c.a * c.f - c.c * c.g)),
        1e-300,
    )
    return abs(sum(terms)) / scale


def optimal_working_point(c: SensitivityCoefficients) -> QuarticSolution:
    """Working point minimizing the unified sensitivity form.

    Dispatches on the zero structure of the coefficients: the standard
    closed forms are used when applicable, the full quartic otherwise.  All
    candidate angles (closed-form values, real quartic roots, and the four
    quarter-turn probes) are ranked through the sensitivity itself; ties are
    broken toward the smallest angle in [0, 2*pi).
    """
    scale = max(abs(x) for x in (c.a, c.b, c.c, c.d, c.e, c.f, c.g))
    if scale == 0.0 or (abs(c.f) <= 1e-12 * scale and abs(c.g) <= 1e-12 * scale):
        raise ZeroDerivativeEverywhere("signal slope vanishes for every working point")

    def near_zero(x: float) -> bool:
        return abs(x) <= 1e-12 * scale

    coeffs = _wp_quartic_coeffs(c)
    roots: list[float] = []
    closed_form: list[float] = []

    def objective(phi: float) -> float:
        return _safe_delta_phi(lambda: sensitivity_from_coefficients(c, phi))

    if near_zero(c.c) and near_zero(c.e) and near_zero(c.f):
        if near_zero(c.d):
            closed_form = [0.5 * math.pi, 1.5 * math.pi]
        else:
            num, den = c.a + c.b + c.d, c.a + c.b - c.d
            if abs(den) <= 1e-15 * max(abs(num), scale):
                closed_form = [math.pi]  # fourth-root solution runs off to t -> inf
            elif num / den >= 0.0:
                t = (num / den) ** 0.25
                closed_form = [2.0 * math.atan(t) % TWO_PI, -2.0 * math.atan(t) % TWO_PI]
    elif near_zero(c.c) and near_zero(c.e) and near_zero(c.g):
        closed_form = [0.0, math.pi]
    elif near_zero(c.c) and near_zero(c.d) and near_zero(c.e):
        base = math.atan2((c.a + c.b) * c.g, c.a * c.f)
        closed_form = [base % TWO_PI, (base + math.pi) % TWO_PI]

    if not closed_form:
        # loose imaginary filter; see _real_roots
        for t in _real_roots(coeffs, imag_tol=1e-4):
            roots.append(t)
            closed_form.append((2.0 * math.atan(t)) % TWO_PI)

    # every candidate gets a local polish: multiple quartic roots scatter by
    # ~1e-4 and the closed forms lose precision when their denominators
    # degenerate, while the true minimum may hug a 0/0 point of the
    # sensitivity where direct formula evaluation is unstable
    seeds = tuple(closed_form) + _STANDARD_CANDIDATES
    polished = tuple(_polish_min(objective, phi, 0.02) % TWO_PI for phi in seeds)
    candidates = seeds + polished
    best, best_phi = math.inf, None
    # closed-form/root seeds carry full analytic precision, so they win ties
    # against their polished variants; equivalent minima resolve to the
    # smallest angle in [0, 2*pi)
    for phi in seeds:
        val = objective(phi)
        if val < best * (1.0 - 1e-12):
            best, best_phi = val, phi
        elif best_phi is not None and abs(val - best) <= 1e-12 * best and phi < best_phi:
            best_phi = phi
    for phi in polished:
        val = objective(phi)
        if val < best * (1.0 - 1e-12):
            best, best_phi = val, phi
    if best_phi is None:
        raise ZeroDerivativeEverywhere("no working point with a finite sensitivity")

    t = math.tan(0.5 * best_phi)
    if abs(t) < 1e8 and max(abs(x) for x in coeffs) > 0.0:
        residual = _poly_residual(coeffs, t)
    else:
        residual = _stationarity_residual(c, best_phi)
    return QuarticSolution(tuple(roots), candidates, best_phi % TWO_PI, residual)


# ---------------------------------------------------------------------------
# joint optimization
# ---------------------------------------------------------------------------

def _scheme_sensitivity(
    scheme: Scheme,
    m: SchwingerMoments,
    fm: FieldMoments,
    angles: BsAngles,
    phi: float,
    phi_local: float,
) -> float:
    if scheme is Scheme.DIFFERENCE_INTENSITY:
        return sensitivity_difference(m, angles, phi).delta_phi
    if scheme is Scheme.SINGLE_MODE_INTENSITY:
        return sensitivity_single(m, angles, phi).delta_phi
    return sensitivity_homodyne(fm, angles, phi, phi_local).delta_phi


def joint_optimize(
    state: InputState,
    scheme: Scheme,
    reference: Optional[Convention] = None,
    *,
    bs1: Optional[float] = None,
    bs2: Optional[float] = None,
    working_point: Optional[float] = None,
    phi_local: Optional[float] = None,
) -> OptimizationReport:
    """Full configuration optimization for one input state and scheme.

    ``bs1``/``bs2``/``working_point`` pin the corresponding variable instead
    of optimizing it (mixing angles in radians, working point in radians).
    The first beam splitter comes from the QFI; the remaining two variables
    are relaxed by alternating exact stationarity steps until both moves
    fall below 1e-10, with a dense-grid fallback if the alternation fails.
    """
    if reference is None:
        reference = (
            Convention.EXTERNAL_REFERENCE
            if scheme is Scheme.BALANCED_HOMODYNE
            else Convention.NO_EXTERNAL_REFERENCE
        )
    if scheme is Scheme.BALANCED_HOMODYNE and reference is not Convention.EXTERNAL_REFERENCE:
        raise WrongConvention("homodyne detection needs the external-reference convention")

    m = schwinger_moments(state)
    fm = field_moments(state)
    theta = bs1 if bs1 is not None else optimize_bs1(state, reference)
    lo_phase = phi_local if phi_local is not None else default_local_oscillator_phase(fm)

    def bs2_step(phi: float) -> float:
        if bs2 is not None:
            return bs2
        if scheme is Scheme.DIFFERENCE_INTENSITY:
            return optimize_bs2_difference(m, theta, phi)
        if scheme is Scheme.SINGLE_MODE_INTENSITY:
            return optimize_bs2_single(m, theta, phi).chosen
        return optimize_bs2_homodyne(fm, theta, phi, lo_phase)

    def wp_step(theta_prime: float) -> float:
        if working_point is not None:
            return working_point % TWO_PI
        moments = fm if scheme is Scheme.BALANCED_HOMODYNE else m
        coeffs = generic_coefficients(scheme, moments, BsAngles(theta, theta_prime), lo_phase)
        return optimal_working_point(coeffs).chosen

    def alternate(tp_seed: float) -> tuple[float, float]:
        theta_prime = tp_seed
        phi = wp_step(theta_prime)
        for _ in range(100):
            new_tp = bs2_step(phi)
            new_phi = wp_step(new_tp)
            if abs(new_tp - theta_prime) < 1e-10 and abs(new_phi - phi) < 1e-10:
                return new_tp, new_phi
            theta_prime, phi = new_tp, new_phi
        raise NoConvergence("alternating optimization did not settle")

    # the coordinate steps are each globally minimizing along their own
    # axis, but the pair can still settle into a side basin; a few mixing
    # angle seeds keep the search honest at negligible cost
    seeds = [bs2] if bs2 is not None else [0.5 * math.pi, math.pi / 6.0, 5.0 * math.pi / 6.0]
    fallback = False
    best = None
    for seed in seeds:
        try:
            tp_c, phi_c = alternate(seed)
            value = _safe_delta_phi(
                lambda: _scheme_sensitivity(scheme, m, fm, BsAngles(theta, tp_c), phi_c, lo_phase)
            )
        except (NoConvergence, ZeroDerivative):
            continue
        if best is None or value < best[0] * (1.0 - 1e-12):
            best = (value, tp_c, phi_c)
    if best is None or not math.isfinite(best[0]):
        theta_prime, phi = _grid_fallback(scheme, m, fm, theta, lo_phase, bs2, working_point)
        fallback = True
    else:
        _, theta_prime, phi = best
        audit = _coarse_audit(
            scheme, m, fm, theta, lo_phase, best[0], theta_prime, phi, bs2, working_point
        )
        if audit is not None:
            theta_prime, phi = audit
            fallback = True

    delta_phi = _scheme_sensitivity(scheme, m, fm, BsAngles(theta, theta_prime), phi, lo_phase)
    hessian_ok = _second_order_ok(scheme, m, fm, theta, theta_prime, phi, lo_phase)
    tau1 = math.cos(0.5 * theta) ** 2
    tau2 = math.cos(0.5 * theta_prime) ** 2
    degenerate = min(tau1, 1.0 - tau1, tau2, 1.0 - tau2) < 1e-9
    return OptimizationReport(
        theta_opt=theta,
        theta_prime_opt=theta_prime,
        phi_opt=phi % TWO_PI,
        phi_local_opt=lo_phase,
        delta_phi_opt=delta_phi,
        hessian_verified=hessian_ok,
        degenerate=degenerate,
        fallback_used=fallback,
    )


def _coarse_audit(
    scheme, m, fm, theta, lo_phase, converged_value, tp0, phi0, bs2, working_point
):
    """Coarse direct scan guarding against basins the alternation missed.

    Some landscapes (inputs with no mean field on one port, say) develop
    needle-shaped false minima next to broad flat valleys; the stationarity
    steps can settle in the needle.  Returns a refined better point, or
    None when the converged one stands.
    """
    tps = [bs2] if bs2 is not None else list(np.linspace(0.03, math.pi - 0.03, 25))
    phis = (
        [working_point % TWO_PI]
        if working_point is not None
        else list(np.linspace(0.0, TWO_PI, 48, endpoint=False))
    )
    best = (converged_value, tp0, phi0)
    for tp in tps:
        for phi in phis:
            value = _safe_delta_phi(
                lambda: _scheme_sensitivity(scheme, m, fm, BsAngles(theta, tp), phi, lo_phase)
            )
            if value < best[0]:
                best = (value, tp, phi)
    if best[0] >= converged_value * (1.0 - 1e-3):
        return None
    _, tp, phi = best
    for _ in range(4):
        if bs2 is None:
            tp = min(
                max(
                    _polish_min(
                        lambda x: _safe_delta_phi(
                            lambda: _scheme_sensitivity(
                                scheme, m, fm, BsAngles(theta, min(max(x, 1e-9), math.pi - 1e-9)), phi, lo_phase
                            )
                        ),
                        tp,
                        0.07,
                    ),
                    1e-9,
                ),
                math.pi - 1e-9,
            )
        if working_point is None:
            phi = _polish_min(
                lambda x: _safe_delta_phi(
                    lambda: _scheme_sensitivity(scheme, m, fm, BsAngles(theta, tp), x, lo_phase)
                ),
                phi,
                0.07,
            )
    return tp, phi % TWO_PI


def _grid_fallback(scheme, m, fm, theta, lo_phase, bs2, working_point):
    """Dense 201x201 scan over (theta', phi) with local golden refinement."""
    tps = [bs2] if bs2 is not None else list(np.linspace(1e-6, math.pi - 1e-6, 201))
    phis = (
        [working_point % TWO_PI]
        if working_point is not None
        else list(np.linspace(0.0, TWO_PI, 201, endpoint=False))
    )
    best = (math.inf, tps[0], phis[0])
    for tp in tps:
        for phi in phis:
            val = _safe_delta_phi(
                lambda: _scheme_sensitivity(scheme, m, fm, BsAngles(theta, tp), phi, lo_phase)
            )
            if val < best[0]:
                best = (val, tp, phi)
    _, tp, phi = best
    for _ in range(4):
        if bs2 is None:
            tp = _golden_min(
                lambda x: _safe_delta_phi(
                    lambda: _scheme_sensitivity(scheme, m, fm, BsAngles(theta, x), phi, lo_phase)
                ),
                max(tp - 0.02, 1e-9),
                min(tp + 0.02, math.pi - 1e-9),
                1e-11,
            )
        if working_point is None:
            phi = _golden_min(
                lambda x: _safe_delta_phi(
                    lambda: _scheme_sensitivity(scheme, m, fm, BsAngles(theta, tp), x, lo_phase)
                ),
                phi - 0.02,
                phi + 0.02,
                1e-11,
            )
    return tp, phi


def _second_order_ok(scheme, m, fm, theta, theta_prime, phi, lo_phase, step: float = 1e-5) -> bool:
    if not step < theta_prime < math.pi - step:
        return False

    def f(tp: float, p: float) -> float:
        return _safe_delta_phi(
            lambda: _scheme_sensitivity(scheme, m, fm, BsAngles(theta, tp), p, lo_phase)
        )

    f00 = f(theta_prime, phi)
    if not math.isfinite(f00):
        return False
    d11 = (f(theta_prime + step, phi) - 2.0 * f00 + f(theta_prime - step, phi)) / step**2
    d22 = (f(theta_prime, phi + step) - 2.0 * f00 + f(theta_prime, phi - step)) / step**2
    d12 = (
        f(theta_prime + step, phi + step)
        - f(theta_prime + step, phi - step)
        - f(theta_prime - step, phi + step)
        + f(theta_prime - step, phi - step)
    ) / (4.0 * step**2)
    return d11 > 0.0 and d22 > 0.0 and d11 * d22 - d12 * d12 > 0.0
