"""Bundled figure-reproduction scenarios.

Each preset expands to one scenario per plotted curve, with the input
parameters of the corresponding figure.  Two recurring configurations:

* the bright coherent + squeezed vacuum benchmark (|alpha| = 100, r = 1.2,
  phase matched) probed by all three detection schemes (fig3, fig4, fig5);
* the double displaced-squeezed input in the low- (|alpha| = 2.2,
  |beta| = 1.4) and high-intensity (|alpha| = 1000, |beta| = 50) regimes,
  always with r = 1.2 on port 0 and z = 0.6 on port 1, under the three
  phase-matching conditions (fig7 .. fig12).

"Balanced" comparison scenarios pin the first beam splitter to tau = 1/2
while the second one stays scheme-optimized.
"""
from __future__ import annotations

import math

from .cli import Scenario, SweepSpec
from .detection import Scheme
from .mzi_core import Convention
from .states import InputState, PmcId, coherent, fock, squeezed_coherent, squeezed_vacuum

__all__ = ["PRESET_IDS", "resolve_preset"]

PI = math.pi


def _coh_sqzvac() -> InputState:
    return InputState(port0=squeezed_vacuum(1.2), port1=coherent(100.0))


def _sqzcoh_sqzvac() -> InputState:
    return InputState(
        port0=squeezed_vacuum(1.2), port1=squeezed_coherent(50.0, 0.0, 0.6, 0.0)
    )


def _dual(alpha_mag: float, beta_mag: float) -> InputState:
    return InputState(
        port0=squeezed_coherent(beta_mag, 0.0, 1.2, 0.0),
        port1=squeezed_coherent(alpha_mag, 0.0, 0.6, 0.0),
    )


def _coh_fock(n: int) -> InputState:
    return InputState(port0=fock(n), port1=coherent(1000.0))


def _phi_sweep(lo: float, hi: float, points: int = 1001) -> SweepSpec:
    return SweepSpec(variable="phi", start=lo, stop=hi, points=points)


def _tau_sweep(points: int = 501) -> SweepSpec:
    return SweepSpec(variable="tau2", start=0.0, stop=1.0, points=points)


def _scenarios_fig3():
    return [
        (
            "fig3_difference_coh_sqzvac",
            Scenario(
                input=_coh_sqzvac(),
                pmc=PmcId.COH_SQZ_VAC,
                scheme=Scheme.DIFFERENCE_INTENSITY,
                reference=Convention.NO_EXTERNAL_REFERENCE,
                sweep=_phi_sweep(0.0, 2.0 * PI),
                output_path="fig03_difference_coh_sqzvac.csv",
            ),
        )
    ]


def _scenarios_fig4():
    return [
        (
            "fig4_single_coh_sqzvac",
            Scenario(
                input=_coh_sqzvac(),
                pmc=PmcId.COH_SQZ_VAC,
                scheme=Scheme.SINGLE_MODE_INTENSITY,
                reference=Convention.NO_EXTERNAL_REFERENCE,
                sweep=_phi_sweep(0.0, 2.0 * PI),
                output_path="fig04_single_coh_sqzvac.csv",
            ),
        )
    ]


def _scenarios_fig5():
    return [
        (
            "fig5_homodyne_coh_sqzvac",
            Scenario(
                input=_coh_sqzvac(),
                pmc=PmcId.COH_SQZ_VAC,
                scheme=Scheme.BALANCED_HOMODYNE,
                reference=Convention.EXTERNAL_REFERENCE,
                sweep=_phi_sweep(0.9 * PI, 1.1 * PI),
                output_path="fig05_homodyne_coh_sqzvac.csv",
            ),
        )
    ]


def _scenarios_fig6():
    base = dict(
        input=_sqzcoh_sqzvac(),
        pmc=PmcId.SQZ_COH_SQZ_VAC,
        scheme=Scheme.BALANCED_HOMODYNE,
        reference=Convention.EXTERNAL_REFERENCE,
        sweep=_phi_sweep(0.9 * PI, 1.1 * PI, 801),
    )
    return [
        (
            "fig6_homodyne_sqzcoh_sqzvac_unbalanced",
            Scenario(**base, output_path="fig06_homodyne_sqzcoh_sqzvac_unbalanced.csv"),
        ),
        (
            "fig6_homodyne_sqzcoh_sqzvac_balanced",
            Scenario(**base, bs1=0.5, output_path="fig06_homodyne_sqzcoh_sqzvac_balanced.csv"),
        ),
    ]


def _scenarios_fig7():
    out = []
    for pmc in (PmcId.PMC1, PmcId.PMC2, PmcId.PMC3):
        out.append(
            (
                f"fig7_qfi2p_low_coherent_{pmc.value}",
                Scenario(
                    input=_dual(2.2, 1.4),
                    pmc=pmc,
                    scheme=Scheme.DIFFERENCE_INTENSITY,
                    reference=Convention.NO_EXTERNAL_REFERENCE,
                    sweep=_tau_sweep(),
                    output_path=f"fig07_qfi2p_low_coherent_{pmc.value}.csv",
                ),
            )
        )
    return out


def _scenarios_fig8():
    out = []
    for pmc in (PmcId.PMC1, PmcId.PMC2, PmcId.PMC3):
        out.append(
            (
                f"fig8_difference_low_coherent_{pmc.value}",
                Scenario(
                    input=_dual(2.2, 1.4),
                    pmc=pmc,
                    scheme=Scheme.DIFFERENCE_INTENSITY,
                    reference=Convention.NO_EXTERNAL_REFERENCE,
                    sweep=_phi_sweep(0.0, 2.0 * PI),
                    output_path=f"fig08_difference_low_coherent_{pmc.value}.csv",
                ),
            )
        )
    return out


def _scenarios_fig9():
    out = []
    for pmc in (PmcId.PMC1, PmcId.PMC2, PmcId.PMC3):
        out.append(
            (
                f"fig9_qfi_high_coherent_{pmc.value}",
                Scenario(
                    input=_dual(1000.0, 50.0),
                    pmc=pmc,
                    scheme=Scheme.BALANCED_HOMODYNE,
                    reference=Convention.EXTERNAL_REFERENCE,
                    sweep=_tau_sweep(),
                    output_path=f"fig09_qfi_high_coherent_{pmc.value}.csv",
                ),
            )
        )
    return out


def _scenarios_fig10():
    out = []
    for pmc in (PmcId.PMC1, PmcId.PMC2, PmcId.PMC3):
        out.append(
            (
                f"fig10_single_high_coherent_{pmc.value}",
                Scenario(
                    input=_dual(1000.0, 50.0),
                    pmc=pmc,
                    scheme=Scheme.SINGLE_MODE_INTENSITY,
                    reference=Convention.NO_EXTERNAL_REFERENCE,
                    sweep=_phi_sweep(0.9 * PI, 1.1 * PI),
                    output_path=f"fig10_single_high_coherent_{pmc.value}.csv",
                ),
            )
        )
    return out


def _scenarios_fig11():
    common = dict(
        input=_dual(1000.0, 50.0),
        scheme=Scheme.SINGLE_MODE_INTENSITY,
        reference=Convention.NO_EXTERNAL_REFERENCE,
        sweep=_phi_sweep(0.9 * PI, 1.1 * PI),
    )
    return [
        (
            "fig11_extinction_pmc3_unbalanced",
            Scenario(**common, pmc=PmcId.PMC3, output_path="fig11_extinction_pmc3_unbalanced.csv"),
        ),
        (
            "fig11_extinction_pmc1_balanced",
            Scenario(
                **common, pmc=PmcId.PMC1, bs1=0.5,
                output_path="fig11_extinction_pmc1_balanced.csv",
            ),
        ),
        (
            "fig11_extinction_pmc2_balanced",
            Scenario(
                **common, pmc=PmcId.PMC2, bs1=0.5,
                output_path="fig11_extinction_pmc2_balanced.csv",
            ),
        ),
    ]


def _scenarios_fig12():
    common = dict(
        input=_dual(1000.0, 50.0),
        scheme=Scheme.BALANCED_HOMODYNE,
        reference=Convention.EXTERNAL_REFERENCE,
        sweep=_phi_sweep(0.95 * PI, 1.05 * PI, 801),
    )
    out = []
    for pmc in (PmcId.PMC3, PmcId.PMC1):
        out.append(
            (
                f"fig12_homodyne_{pmc.value}_unbalanced",
                Scenario(**common, pmc=pmc, output_path=f"fig12_homodyne_{pmc.value}_unbalanced.csv"),
            )
        )
        out.append(
            (
                f"fig12_homodyne_{pmc.value}_balanced",
                Scenario(
                    **common, pmc=pmc, bs1=0.5,
                    output_path=f"fig12_homodyne_{pmc.value}_balanced.csv",
                ),
            )
        )
    return out


def _scenarios_coh_fock():
    """Coherent + Fock comparison: optimized versus balanced, n = 1 and 3."""
    out = []
    for n in (1, 3):
        common = dict(
            input=_coh_fock(n),
            scheme=Scheme.BALANCED_HOMODYNE,
            reference=Convention.EXTERNAL_REFERENCE,
            sweep=_phi_sweep(0.95 * PI, 1.05 * PI, 801),
        )
        out.append(
            (
                f"coh_fock_n{n}_unbalanced",
                Scenario(**common, output_path=f"coh_fock_n{n}_unbalanced.csv"),
            )
        )
        out.append(
            (
                f"coh_fock_n{n}_balanced",
                Scenario(**common, bs1=0.5, output_path=f"coh_fock_n{n}_balanced.csv"),
            )
        )
    return out


_PRESETS = {
    "fig3": _scenarios_fig3,
    "fig4": _scenarios_fig4,
    "fig5": _scenarios_fig5,
    "fig6": _scenarios_fig6,
    "fig7": _scenarios_fig7,
    "fig8": _scenarios_fig8,
    "fig9": _scenarios_fig9,
    "fig10": _scenarios_fig10,
    "fig11": _scenarios_fig11,
    "fig12": _scenarios_fig12,
    "coh_fock": _scenarios_coh_fock,
}

PRESET_IDS = tuple(sorted(_PRESETS))


def resolve_preset(figure: str) -> list[tuple[str, Scenario]]:
    key = figure.lower()
    if key not in _PRESETS:
        raise ValueError(f"unknown preset {figure!r}; available: {', '.join(PRESET_IDS)}")
    return _PRESETS[key]()
