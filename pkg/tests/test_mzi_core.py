"""Transfer algebra: coefficient identities, unitarity, and the internal
Schwinger rotation."""
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rel_err
from mzi_sensitivity import fock_oracle
from mzi_sensitivity.mzi_core import (
    BsAngles,
    a_coefficients,
    angles_from_transmittances,
    internal_mode_moments,
    k_coefficients,
)
from mzi_sensitivity.qfi import fisher_matrix, qfi_report
from mzi_sensitivity.states import (
    InputState,
    coherent,
    fock,
    schwinger_moments,
    squeezed_vacuum,
    vacuum,
)


def test_balanced_pair_with_zero_phase_swaps_modes():
    ac = a_coefficients(BsAngles(math.pi / 2, math.pi / 2), 0.0, 0.0)
    assert abs(ac.a40) < 1e-15
    assert ac.a41 == pytest.approx(1j)
    assert ac.a50 == pytest.approx(1j)
    assert abs(ac.a51) < 1e-15


def test_zero_angles_give_identity():
    ac = a_coefficients(BsAngles(0.0, 0.0), 0.0, 0.0)
    assert ac.a40 == pytest.approx(1.0)
    assert ac.a51 == pytest.approx(1.0)
    assert ac.a41 == 0.0 and ac.a50 == 0.0


def test_a40_modulus_with_quarter_phase():
    ac = a_coefficients(BsAngles(math.pi / 2, math.pi / 2), 0.0, math.pi / 2)
    k = k_coefficients(BsAngles(math.pi / 2, math.pi / 2), math.pi / 2)
    assert abs(ac.a40) ** 2 == pytest.approx(0.5 * (1.0 + k.kz), rel=1e-12)
    assert abs(ac.a40) ** 2 == pytest.approx(0.5, rel=1e-12)


def test_k_coefficient_examples():
    k = k_coefficients(BsAngles(math.pi / 2, math.pi / 2), math.pi / 2)
    assert (k.kx, k.ky, k.kz) == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)

    k = k_coefficients(BsAngles(1.234, 0.0), 2.345)
    assert k.kx == 0.0
    assert k.ky == pytest.approx(-math.sin(1.234), rel=1e-15)
    assert k.kz == pytest.approx(math.cos(1.234), rel=1e-15)

    k = k_coefficients(BsAngles(math.pi / 3, math.pi / 4), 1.0)
    assert k.kx == pytest.approx(0.5950098395293859, rel=1e-14)
    assert k.kx**2 + k.ky**2 + k.kz**2 == pytest.approx(1.0, abs=1e-12)


def test_angles_from_transmittances_round_trip():
    angles = angles_from_transmittances(0.55, 0.45)
    assert angles.tau1 == pytest.approx(0.55, rel=1e-12)
    assert angles.tau2 == pytest.approx(0.45, rel=1e-12)
    with pytest.raises(ValueError):
        angles_from_transmittances(1.5, 0.5)


def test_k_sum_and_ak_relations_random():
    rng = random.Random(12345)
    for _ in range(100_000):
        theta = rng.uniform(0.0, math.pi)
        theta_p = rng.uniform(0.0, math.pi)
        phi1 = rng.uniform(-10.0, 10.0)
        phi2 = rng.uniform(-10.0, 10.0)
        angles = BsAngles(theta, theta_p)
        k = k_coefficients(angles, phi2 - phi1)
        assert abs(k.kx * k.kx + k.ky * k.ky + k.kz * k.kz - 1.0) < 1e-12
        ac = a_coefficients(angles, phi1, phi2)
        cross = ac.a40 * ac.a41.conjugate()
        cross2 = ac.a50 * ac.a51.conjugate()
        assert abs(abs(ac.a40) ** 2 - 0.5 * (1.0 + k.kz)) < 1e-12
        assert abs(abs(ac.a51) ** 2 - 0.5 * (1.0 + k.kz)) < 1e-12
        assert abs(abs(ac.a50) ** 2 - 0.5 * (1.0 - k.kz)) < 1e-12
        assert abs(abs(ac.a41) ** 2 - 0.5 * (1.0 - k.kz)) < 1e-12
        assert abs(cross.real - 0.5 * k.kx) < 1e-12
        assert abs(cross.imag - 0.5 * k.ky) < 1e-12
        assert abs(cross2.real + 0.5 * k.kx) < 1e-12
        assert abs(cross2.imag + 0.5 * k.ky) < 1e-12


@settings(max_examples=300, deadline=None)
@given(
    theta=st.floats(0.0, math.pi),
    theta_p=st.floats(0.0, math.pi),
    phi1=st.floats(-20.0, 20.0),
    phi2=st.floats(-20.0, 20.0),
)
def test_transfer_identities_property(theta, theta_p, phi1, phi2):
    angles = BsAngles(theta, theta_p)
    k = k_coefficients(angles, phi2 - phi1)
    assert abs(k.kx**2 + k.ky**2 + k.kz**2 - 1.0) < 1e-12
    ac = a_coefficients(angles, phi1, phi2)
    assert abs(abs(ac.a40) ** 2 + abs(ac.a50) ** 2 - 1.0) < 1e-12
    assert abs(abs(ac.a40) ** 2 - 0.5 * (1.0 + k.kz)) < 1e-12


def test_transfer_matrix_unitarity():
    rng = random.Random(5)
    for _ in range(200):
        ac = a_coefficients(
            BsAngles(rng.uniform(0, math.pi), rng.uniform(0, math.pi)),
            rng.uniform(-7, 7),
            rng.uniform(-7, 7),
        )
        matrix = np.array([[ac.a40, ac.a41], [ac.a50, ac.a51]])
        gram = matrix.conj().T @ matrix
        assert np.max(np.abs(gram - np.eye(2))) < 1e-12


# ---------------------------------------------------------------------------
# internal rotation
# ---------------------------------------------------------------------------

def _example_moments():
    return schwinger_moments(
        InputState(port0=squeezed_vacuum(0.5, 0.9), port1=coherent(2.0, 0.4))
    )


def test_rotation_identity_at_zero():
    m = _example_moments()
    rot = internal_mode_moments(m, 0.0)
    for name in m.__dataclass_fields__:
        assert getattr(rot, name) == getattr(m, name)


def test_rotation_by_pi_negates_y_and_z():
    m = _example_moments()
    rot = internal_mode_moments(m, math.pi)
    assert rot.mean_jy == pytest.approx(-m.mean_jy, rel=1e-12, abs=1e-15)
    assert rot.mean_jz == pytest.approx(-m.mean_jz, rel=1e-12, abs=1e-15)
    assert rot.var_jy == pytest.approx(m.var_jy, rel=1e-12)
    assert rot.var_jz == pytest.approx(m.var_jz, rel=1e-12)
    assert rot.symcov_yz == pytest.approx(m.symcov_yz, rel=1e-12, abs=1e-15)
    assert rot.symcov_xy == pytest.approx(-m.symcov_xy, rel=1e-12, abs=1e-15)


def test_rotation_preserves_energy_and_variance_sum():
    m = _example_moments()
    rng = random.Random(11)
    for _ in range(50):
        theta = rng.uniform(0, math.pi)
        rot = internal_mode_moments(m, theta)
        assert rot.mean_n == m.mean_n
        assert rot.var_n == m.var_n
        total = m.var_jx + m.var_jy + m.var_jz
        assert rot.var_jx + rot.var_jy + rot.var_jz == pytest.approx(total, rel=1e-12)


@pytest.mark.parametrize(
    "state",
    [
        InputState(port0=squeezed_vacuum(0.5), port1=coherent(2.0)),
        InputState(port0=fock(2), port1=coherent(1.5, 0.7)),
        InputState(port0=squeezed_vacuum(0.6, 1.3), port1=squeezed_vacuum(0.4, 0.2)),
    ],
)
def test_rotation_sign_pins_single_parameter_information(state, tight_oracle):
    """The rotated-moment route to 4 Var(n3) must match the brute-force value;
    this fixes the rotation axis and sign conventions."""
    for theta in (0.3, 1.2, 2.5):
        rotated = internal_mode_moments(schwinger_moments(state), theta)
        analytic = rotated.var_n + 4.0 * rotated.var_jz - 4.0 * rotated.cov_jz_n
        numeric = fock_oracle.oracle_qfi_single(state, theta, tight_oracle)
        assert rel_err(analytic, numeric) < 1e-8


def test_rotated_variance_matches_oracle(tight_oracle):
    state = InputState(port0=squeezed_vacuum(0.5), port1=coherent(2.0))
    rotated = internal_mode_moments(schwinger_moments(state), math.pi / 2)
    ts = fock_oracle.build_state(state, tight_oracle)
    after = fock_oracle.evolve_bs(ts, math.pi / 2)
    n0 = fock_oracle.variance(after, fock_oracle.Observable.N0)
    n1 = fock_oracle.variance(after, fock_oracle.Observable.N1)
    # Var((n2 - n3)/2) from the rotated moments
    jz_var = fock_oracle.variance(after, fock_oracle.Observable.JZ)
    assert rel_err(rotated.var_jz, jz_var) < 1e-8
    assert n0 >= 0 and n1 >= 0


def test_fisher_identity_consistency():
    """F_ss + F_dd - 2 F_sd equals 4 Var(n3) for random states and angles."""
    rng = random.Random(2024)
    for _ in range(200):
        state = InputState(
            port0=squeezed_vacuum(rng.uniform(0, 1.0), rng.uniform(0, 6.3)),
            port1=coherent(rng.uniform(0, 3.0), rng.uniform(0, 6.3)),
        )
        theta = rng.uniform(0, math.pi)
        fm = fisher_matrix(state, theta)
        report = qfi_report(fm)
        rotated = internal_mode_moments(schwinger_moments(state), theta)
        var_n3 = 0.25 * rotated.var_n + rotated.var_jz - rotated.cov_jz_n
        assert rel_err(report.f_i, 4.0 * var_n3) < 1e-9
