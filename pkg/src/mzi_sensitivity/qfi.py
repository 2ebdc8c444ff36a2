"""Quantum Fisher information and Cramer-Rao bounds.

For a pure input and commuting phase generators on the internal modes, the
2x2 Fisher matrix in the sum/difference phase variables reduces to photon
number statistics just after the first beam splitter:

    F_ss = Var N,   F_dd = Var(n2 - n3),   F_sd = Cov(N, n2 - n3).

Without an external phase reference the attainable information is the
two-parameter value F_2p = F_dd - F_sd^2/F_ss; with a reference (single
phase shift on the lower arm) it is F_i = F_ss + F_dd - 2 F_sd, which equals
4 Var(n3).  Each bound gives a Cramer-Rao sensitivity 1/sqrt(F).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateFisher
from .mzi_core import internal_mode_moments
from .states import InputState, schwinger_moments

__all__ = ["FisherMatrix", "QfiReport", "QfiKind", "fisher_matrix", "qfi_report", "qfi_vs_theta"]


class QfiKind(Enum):
    TWO_PARAM = "two_param"
    SINGLE_I = "single_i"


@dataclass(frozen=True)
class FisherMatrix:
    f_ss: float
    f_sd: float
    f_dd: float


@dataclass(frozen=True)
class QfiReport:
    """Derived Fisher information values and their Cramer-Rao bounds.

    ``f_ii`` is the difference-difference matrix element itself (the
    symmetric +/- phi/2 convention); it is exposed for completeness but no
    detection path uses it.
    """

    f_2p: float
    f_i: float
    f_ii: float
    qcrb_2p: float
    qcrb_i: float


def fisher_matrix(state: InputState, theta: float) -> FisherMatrix:
    """Fisher matrix of the sum/difference internal phases for pure inputs."""
    rotated = internal_mode_moments(schwinger_moments(state), theta)
    return FisherMatrix(
        f_ss=rotated.var_n,
        f_sd=2.0 * rotated.cov_jz_n,
        f_dd=4.0 * rotated.var_jz,
    )


def _two_param(fm: FisherMatrix) -> float:
    if fm.f_ss == 0.0:
        if fm.f_sd != 0.0:
            raise DegenerateFisher("vanishing F_ss with nonzero F_sd")
        return fm.f_dd
    return fm.f_dd - fm.f_sd**2 / fm.f_ss


def qfi_report(fm: FisherMatrix) -> QfiReport:
    """Scalar information values and Cramer-Rao bounds from the matrix."""
    f_2p = _two_param(fm)
    f_i = fm.f_ss + fm.f_dd - 2.0 * fm.f_sd
    return QfiReport(
        f_2p=f_2p,
        f_i=f_i,
        f_ii=fm.f_dd,
        qcrb_2p=1.0 / math.sqrt(f_2p) if f_2p > 0.0 else math.inf,
        qcrb_i=1.0 / math.sqrt(f_i) if f_i > 0.0 else math.inf,
    )


def qfi_vs_theta(state: InputState, which: QfiKind, grid: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample the selected information value on a transmittance grid.

    Returns ``(tau, value)`` arrays with tau = cos^2(theta/2) spanning
    [0, 1] on ``grid`` points.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    m = schwinger_moments(state)
    taus = np.linspace(0.0, 1.0, grid)
    values = np.empty_like(taus)
    for i, tau in enumerate(taus):
        theta = 2.0 * math.acos(math.sqrt(tau))
        rotated = internal_mode_moments(m, theta)
        fm = FisherMatrix(
            f_ss=rotated.var_n, f_sd=2.0 * rotated.cov_jz_n, f_dd=4.0 * rotated.var_jz
        )
        if which is QfiKind.TWO_PARAM:
            values[i] = _two_param(fm)
        else:
            values[i] = fm.f_ss + fm.f_dd - 2.0 * fm.f_sd
    return taus, values
