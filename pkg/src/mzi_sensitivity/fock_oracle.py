"""Brute-force two-mode simulator on a truncated Fock basis.

This module is the independent referee for every analytic formula in the
package: states are expanded in the number basis, beam splitters are applied
as exact unitaries block-by-block in the total photon number, phase shifts
as diagonal phases, and all expectations are evaluated by direct
ladder-operator action on the amplitude tensor.

It is deliberately restricted to desk-scale inputs (amplitudes of a few
photons, moderate squeezing); the point is trustworthiness, not speed.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .detection import Scheme
from .errors import CutoffExceeded, ZeroDerivative
from .mzi_core import BsAngles, PhaseConfig
from .states import FieldMoments, InputState, Kind, ModeSpec, SchwingerMoments

__all__ = [
    "OracleConfig",
    "TruncatedState",
    "Observable",
    "build_state",
    "evolve_bs",
    "apply_phases",
    "expectation",
    "variance",
    "mzi_output_state",
    "oracle_mean_n4",
    "oracle_sensitivity",
    "oracle_qfi_single",
    "oracle_field_moments",
    "oracle_schwinger_moments",
]


@dataclass(frozen=True)
class OracleConfig:
    tail_tolerance: float = 1e-10
    max_joint_dimension: int = 4096
    fd_step: float = 1e-5

    def __post_init__(self):
        if not 0.0 < self.tail_tolerance <= 1e-6:
            raise ValueError("tail_tolerance must lie in (0, 1e-6]")
        if self.max_joint_dimension < 1:
            raise ValueError("max_joint_dimension must be positive")
        if self.fd_step <= 0.0:
            raise ValueError("fd_step must be positive")


@dataclass(frozen=True)
class TruncatedState:
    """Normalized amplitude tensor; entry [n0, n1] multiplies |n0>|n1>.

    Treated as immutable: every operation returns a new instance.
    """

    amplitudes: np.ndarray

    @property
    def dim0(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim1(self) -> int:
        return self.amplitudes.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


class Observable(Enum):
    A0 = "a0"
    A1 = "a1"
    N0 = "n0"
    N1 = "n1"
    JX = "jx"
    JY = "jy"
    JZ = "jz"
    N = "n"
    ND = "nd"


# ---------------------------------------------------------------------------
# state construction
# ---------------------------------------------------------------------------

def _mode_amplitudes(spec: ModeSpec, tol: float, max_dim: int) -> np.ndarray:
    """Number-basis amplitudes of one mode, truncated to tail < tol."""
    if spec.kind is Kind.FOCK:
        if spec.fock_n >= max_dim:
            raise CutoffExceeded("Fock occupation exceeds the dimension budget")
        vec = np.zeros(spec.fock_n + 1, dtype=complex)
        vec[spec.fock_n] = 1.0
        return vec
    if spec.kind is Kind.VACUUM:
        return np.array([1.0 + 0.0j])

    alpha = spec.amplitude_mag * cmath.exp(1j * spec.amplitude_phase)
    z = spec.squeeze_mag
    ez = cmath.exp(1j * spec.squeeze_phase)
    ch, sh = math.cosh(z), math.sinh(z)
    # exact ground amplitude of the displaced squeezed state, so the
    # truncated norm measures the discarded tail directly
    seed = math.sqrt(1.0 / ch) * cmath.exp(
        -0.5 * spec.amplitude_mag**2 - 0.5 * alpha.conjugate() ** 2 * ez * math.tanh(z)
    )
    rhs = alpha * ch + alpha.conjugate() * ez * sh

    dim = 16
    while True:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = seed
        for n in range(dim - 1):
            acc = rhs * vec[n]
            if n >= 1:
                acc -= ez * sh * math.sqrt(n) * vec[n - 1]
            vec[n + 1] = acc / (ch * math.sqrt(n + 1))
        weights = np.abs(vec) ** 2
        cumulative = np.cumsum(weights)
        if 1.0 - cumulative[-1] < tol:
            cut = int(np.searchsorted(cumulative, 1.0 - tol)) + 1
            return vec[: min(cut + 2, dim)]
        dim *= 2
        if dim > 4 * max_dim:
            raise CutoffExceeded("mode does not converge within the dimension budget")


def build_state(state: InputState, cfg: OracleConfig = OracleConfig()) -> TruncatedState:
    """Truncated, normalized product state of the two input ports."""
    v0 = _mode_amplitudes(state.port0, cfg.tail_tolerance, cfg.max_joint_dimension)
    v1 = _mode_amplitudes(state.port1, cfg.tail_tolerance, cfg.max_joint_dimension)
    if v0.size * v1.size > cfg.max_joint_dimension:
        raise CutoffExceeded(
            f"joint dimension {v0.size}x{v1.size} exceeds budget {cfg.max_joint_dimension}"
        )
    amp = np.outer(v0, v1)
    return TruncatedState(amp / np.linalg.norm(amp))


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------

@lru_cache(maxsize=512)
def _block_unitary(angle: float, block: int) -> np.ndarray:
    """exp(i*angle*Jx) restricted to the (block+1)-dimensional subspace of
    total photon number ``block``; basis ordered by n0 descending."""
    if block == 0:
        return np.ones((1, 1), dtype=complex)
    # Jx couples |n0, n1> and |n0-1, n1+1> with strength sqrt(n0*(n1+1))/2
    k = np.arange(block)  # index with n0 = block - k
    off = 0.5 * np.sqrt((block - k) * (k + 1.0))
    jx = np.zeros((block + 1, block + 1))
    jx[k, k + 1] = off
    jx[k + 1, k] = off
    evals, evecs = np.linalg.eigh(jx)
    phases = np.exp(1j * angle * evals)
    return (evecs * phases) @ evecs.T


def evolve_bs(state: TruncatedState, angle: float) -> TruncatedState:
    """Apply one beam splitter of mixing angle ``angle`` (exact unitary)."""
    d0, d1 = state.dim0, state.dim1
    size = d0 + d1 - 1
    padded = np.zeros((size, size), dtype=complex)
    padded[:d0, :d1] = state.amplitudes
    out = np.zeros_like(padded)
    # the input support has total photon number <= size - 1, so every
    # occupied anti-diagonal fits completely inside the padded square
    for total in range(size):
        n0 = np.arange(total, -1, -1)
        n1 = total - n0
        out[n0, n1] = _block_unitary(float(angle), total) @ padded[n0, n1]
    return TruncatedState(out)


def apply_phases(state: TruncatedState, phi1: float, phi2: float) -> TruncatedState:
    """Phase shifts on the two arms: |n0,n1> -> e^{-i(phi1 n0 + phi2 n1)}."""
    p0 = np.exp(-1j * phi1 * np.arange(state.dim0))
    p1 = np.exp(-1j * phi2 * np.arange(state.dim1))
    return TruncatedState(state.amplitudes * np.outer(p0, p1))


def mzi_output_state(
    state: InputState, angles: BsAngles, phases: PhaseConfig,
    cfg: OracleConfig = OracleConfig(),
) -> TruncatedState:
    """Full interferometer chain: BS1, arm phases, BS2."""
    ts = build_state(state, cfg)
    ts = evolve_bs(ts, angles.theta)
    ts = apply_phases(ts, phases.phi1, phases.phi2)
    return evolve_bs(ts, angles.theta_prime)


# ---------------------------------------------------------------------------
# expectations
# ---------------------------------------------------------------------------

def _padded(p: np.ndarray, extra: int = 2) -> np.ndarray:
    """Add raising-operator headroom so a^dag actions are not truncated."""
    out = np.zeros((p.shape[0] + extra, p.shape[1] + extra), dtype=complex)
    out[: p.shape[0], : p.shape[1]] = p
    return out


def _apply_a0(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    d0 = p.shape[0]
    out[: d0 - 1, :] = np.sqrt(np.arange(1, d0))[:, None] * p[1:, :]
    return out


def _apply_a1(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    d1 = p.shape[1]
    out[:, : d1 - 1] = np.sqrt(np.arange(1, d1))[None, :] * p[:, 1:]
    return out


def _apply_a0dag(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    d0 = p.shape[0]
    out[1:, :] = np.sqrt(np.arange(1, d0))[:, None] * p[: d0 - 1, :]
    return out


def _apply_a1dag(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    d1 = p.shape[1]
    out[:, 1:] = np.sqrt(np.arange(1, d1))[None, :] * p[:, : d1 - 1]
    return out


def _apply(obs: Observable, p: np.ndarray) -> np.ndarray:
    if obs is Observable.A0:
        return _apply_a0(p)
    if obs is Observable.A1:
        return _apply_a1(p)
    n0 = np.arange(p.shape[0])[:, None]
    n1 = np.arange(p.shape[1])[None, :]
    if obs is Observable.N0:
        return n0 * p
    if obs is Observable.N1:
        return n1 * p
    if obs is Observable.N:
        return (n0 + n1) * p
    if obs is Observable.ND:
        return (n0 - n1) * p
    if obs is Observable.JZ:
        return 0.5 * (n0 - n1) * p
    if obs is Observable.JX:
        return 0.5 * (_apply_a1(_apply_a0dag(p)) + _apply_a1dag(_apply_a0(p)))
    if obs is Observable.JY:
        return (_apply_a1(_apply_a0dag(p)) - _apply_a1dag(_apply_a0(p))) / 2j
    raise ValueError(f"unknown observable {obs}")


def expectation(state: TruncatedState, observable: Observable) -> complex:
    """<O> by direct ladder-operator action."""
    p = _padded(state.amplitudes)
    return complex(np.vdot(p, _apply(observable, p)))


def variance(state: TruncatedState, observable: Observable) -> float:
    """Variance of a Hermitian observable (a0/a1 are not accepted)."""
    if observable in (Observable.A0, Observable.A1):
        raise ValueError("variance is defined here for Hermitian observables only")
    p = _padded(state.amplitudes)
    applied = _apply(observable, p)
    mean = np.vdot(p, applied)
    return float((np.vdot(applied, applied) - abs(mean) ** 2).real)


def _quadrature_stats(state: TruncatedState, phi_local: float) -> tuple[float, float]:
    """Mean and variance of X = (e^{-i phi_local} a0 + h.c.)/2 on slot 0."""
    p = _padded(state.amplitudes)
    x = 0.5 * (
        cmath.exp(-1j * phi_local) * _apply_a0(p) + cmath.exp(1j * phi_local) * _apply_a0dag(p)
    )
    mean = np.vdot(p, x)
    var = (np.vdot(x, x) - abs(mean) ** 2).real
    return float(mean.real), float(var)


# ---------------------------------------------------------------------------
# derived oracle quantities
# ---------------------------------------------------------------------------

def oracle_field_moments(state: InputState, cfg: OracleConfig = OracleConfig()) -> FieldMoments:
    ts = build_state(state, cfg)
    p = _padded(ts.amplitudes)
    m0 = complex(np.vdot(p, _apply_a0(p)))
    m1 = complex(np.vdot(p, _apply_a1(p)))
    a0a0 = complex(np.vdot(p, _apply_a0(_apply_a0(p))))
    a1a1 = complex(np.vdot(p, _apply_a1(_apply_a1(p))))
    n0 = expectation(ts, Observable.N0).real
    n1 = expectation(ts, Observable.N1).real
    return FieldMoments(
        mean_a0=m0,
        mean_a1=m1,
        var_a0=a0a0 - m0 * m0,
        var_a1=a1a1 - m1 * m1,
        cov_n0=n0 - abs(m0) ** 2,
        cov_n1=n1 - abs(m1) ** 2,
    )


def oracle_schwinger_moments(
    state: InputState, cfg: OracleConfig = OracleConfig()
) -> SchwingerMoments:
    ts = build_state(state, cfg)
    p = _padded(ts.amplitudes)
    applied = {obs: _apply(obs, p) for obs in (Observable.JX, Observable.JY, Observable.JZ, Observable.N)}
    means = {obs: np.vdot(p, ap).real for obs, ap in applied.items()}

    def cov(a: Observable, b: Observable) -> float:
        value = 0.5 * (np.vdot(applied[a], applied[b]) + np.vdot(applied[b], applied[a]))
        return float(value.real - means[a] * means[b])

    return SchwingerMoments(
        mean_jx=means[Observable.JX],
        mean_jy=means[Observable.JY],
        mean_jz=means[Observable.JZ],
        mean_n=means[Observable.N],
        var_jx=cov(Observable.JX, Observable.JX),
        var_jy=cov(Observable.JY, Observable.JY),
        var_jz=cov(Observable.JZ, Observable.JZ),
        var_n=cov(Observable.N, Observable.N),
        symcov_xy=cov(Observable.JX, Observable.JY),
        symcov_xz=cov(Observable.JX, Observable.JZ),
        symcov_yz=cov(Observable.JY, Observable.JZ),
        cov_jx_n=cov(Observable.JX, Observable.N),
        cov_jy_n=cov(Observable.JY, Observable.N),
        cov_jz_n=cov(Observable.JZ, Observable.N),
    )


def oracle_mean_n4(
    state: InputState, angles: BsAngles, phases: PhaseConfig,
    cfg: OracleConfig = OracleConfig(),
) -> float:
    out = mzi_output_state(state, angles, phases, cfg)
    return expectation(out, Observable.N0).real


def _output_mean_and_var(scheme, after_bs1: TruncatedState, theta_prime, phi, phi_local):
    out = evolve_bs(apply_phases(after_bs1, 0.0, phi), theta_prime)
    if scheme is Scheme.DIFFERENCE_INTENSITY:
        return expectation(out, Observable.ND).real, variance(out, Observable.ND)
    if scheme is Scheme.SINGLE_MODE_INTENSITY:
        return expectation(out, Observable.N0).real, variance(out, Observable.N0)
    return _quadrature_stats(out, phi_local)


def oracle_sensitivity(
    state: InputState,
    angles: BsAngles,
    phases: PhaseConfig,
    scheme: Scheme,
    cfg: OracleConfig = OracleConfig(),
) -> float:
    """Numeric error-propagation sensitivity.

    The variance is exact on the truncated state; the mean slope uses a
    Richardson-extrapolated central difference with step ``cfg.fd_step``.
    """
    after_bs1 = evolve_bs(build_state(state, cfg), angles.theta)
    theta_prime = angles.theta_prime
    phi, lo = phases.phi, phases.phi_local
    h = cfg.fd_step

    def mean_at(p: float) -> float:
        return _output_mean_and_var(scheme, after_bs1, theta_prime, p, lo)[0]

    _, var = _output_mean_and_var(scheme, after_bs1, theta_prime, phi, lo)
    d_full = (mean_at(phi + h) - mean_at(phi - h)) / (2.0 * h)
    d_half = (mean_at(phi + 0.5 * h) - mean_at(phi - 0.5 * h)) / h
    derivative = (4.0 * d_half - d_full) / 3.0
    if abs(derivative) < 1e-8 * max(1.0, math.sqrt(max(var, 0.0))):
        raise ZeroDerivative("numeric signal slope vanishes at this working point")
    return math.sqrt(max(var, 0.0)) / abs(derivative)


def oracle_qfi_single(
    state: InputState, theta: float, cfg: OracleConfig = OracleConfig()
) -> float:
    """4 Var(n3) after the first beam splitter, evaluated numerically."""
    after_bs1 = evolve_bs(build_state(state, cfg), theta)
    return 4.0 * variance(after_bs1, Observable.N1)
