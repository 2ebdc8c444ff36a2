#!/usr/bin/env python3
"""Emit the 2-D sensitivity landscape delta_phi(tau2, phi) for one scenario.

Produces the raw grid behind the surface plots: one CSV row per
(second-splitter transmittance, working point) pair, at the QFI-optimal
first splitter.  Example:

    python scripts/sensitivity_landscape.py --scheme difference_intensity \
        --alpha 100 --squeeze 1.2 --points 161 --out landscape.csv
"""
import argparse
import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from mzi_sensitivity.detection import (
    Scheme,
    default_local_oscillator_phase,
    sensitivity_difference,
    sensitivity_homodyne,
    sensitivity_single,
)
from mzi_sensitivity.errors import ZeroDerivative
from mzi_sensitivity.mzi_core import BsAngles, Convention
from mzi_sensitivity.optimize import optimize_bs1
from mzi_sensitivity.states import (
    InputState,
    PmcId,
    apply_pmc,
    coherent,
    field_moments,
    schwinger_moments,
    squeezed_vacuum,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scheme", default="difference_intensity",
                        choices=[s.value for s in Scheme])
    parser.add_argument("--alpha", type=float, default=100.0, help="coherent amplitude, port 1")
    parser.add_argument("--squeeze", type=float, default=1.2, help="squeeze factor, port 0")
    parser.add_argument("--points", type=int, default=121, help="grid points per axis")
    parser.add_argument("--out", default="landscape.csv")
    args = parser.parse_args()

    scheme = Scheme(args.scheme)
    state = apply_pmc(
        InputState(port0=squeezed_vacuum(args.squeeze), port1=coherent(args.alpha)),
        PmcId.COH_SQZ_VAC,
    )
    reference = (
        Convention.EXTERNAL_REFERENCE
        if scheme is Scheme.BALANCED_HOMODYNE
        else Convention.NO_EXTERNAL_REFERENCE
    )
    theta = optimize_bs1(state, reference)
    m = schwinger_moments(state)
    fm = field_moments(state)
    lo = default_local_oscillator_phase(fm)

    rows = ["tau2,phi,delta_phi"]
    for tau2 in np.linspace(0.005, 0.995, args.points):
        theta_prime = 2.0 * math.acos(math.sqrt(tau2))
        for phi in np.linspace(0.0, 2.0 * math.pi, args.points):
            angles = BsAngles(theta, theta_prime)
            try:
                if scheme is Scheme.DIFFERENCE_INTENSITY:
                    value = sensitivity_difference(m, angles, phi).delta_phi
                elif scheme is Scheme.SINGLE_MODE_INTENSITY:
                    value = sensitivity_single(m, angles, phi).delta_phi
                else:
                    value = sensitivity_homodyne(fm, angles, phi, lo).delta_phi
            except ZeroDerivative:
                continue
            rows.append(f"{tau2:.17g},{phi:.17g},{value:.17g}")
    pathlib.Path(args.out).write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"tau1 = {math.cos(theta / 2) ** 2:.6f}; wrote {len(rows) - 1} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
