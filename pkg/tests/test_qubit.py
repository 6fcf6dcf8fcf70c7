import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cpbfridge import qubit as qm
from cpbfridge.errors import ConvergenceFailure, DimensionOverflow, TargetBelowMinimum
from cpbfridge.qubit import CouplingGeometry, QubitParams, ResonatorParams

# frozen with mpmath at 30 digits (independent of the package)
F_Q_AT_ZERO = 27424259333.66296
NG_COLD = 0.44184222098508148
NG_HOT = 0.36774155615084990
SIN_COLD = 0.74183976261127596
SIN_HOT = 0.43744531933508311


def test_charge_hamiltonian_two_state_degeneracy():
    q = QubitParams(6.8e9, 3.5e9, 0, 1)
    h = qm.build_charge_hamiltonian(q, 0.5)
    np.testing.assert_array_equal(h, [[6.8e9, -1.75e9], [-1.75e9, 6.8e9]])
    w = np.linalg.eigvalsh(h)
    assert w[1] - w[0] == pytest.approx(3.5e9, rel=1e-14)


def test_charge_hamiltonian_structure(qubit):
    h = qm.build_charge_hamiltonian(qubit, 0.3)
    n = qubit.charge_states
    np.testing.assert_allclose(np.diag(h), 4 * 6.8e9 * (n - 0.3) ** 2)
    np.testing.assert_allclose(np.diag(h, 1), -1.75e9)
    assert np.count_nonzero(np.triu(h, 2)) == 0


def test_six_state_splitting_close_to_two_level(qubit):
    s = qm.charge_spectrum(qubit, 0.5, 2)
    assert s.eigenvalues[0] == 0.0
    assert abs(s.eigenvalues[1] / 3.5e9 - 1) < 0.01


@pytest.mark.parametrize(
    "ng, expected", [(0.5, 3.5e9), (0.0, F_Q_AT_ZERO), (NG_COLD, 4.718e9), (NG_HOT, 8.001e9)]
)
def test_qubit_frequency(ng, expected):
    q = QubitParams()
    assert qm.qubit_frequency(q, ng) == pytest.approx(expected, rel=1e-12)


def test_qubit_frequency_device_gate_value():
    assert qm.qubit_frequency(QubitParams(), 0.4418) == pytest.approx(4.718e9, rel=1e-3)


def test_gate_charge_inversion():
    q = QubitParams()
    assert qm.gate_charge_for_frequency(q, 4.718e9) == pytest.approx(NG_COLD, abs=1e-14)
    assert qm.gate_charge_for_frequency(q, 8.001e9) == pytest.approx(NG_HOT, abs=1e-14)
    assert qm.gate_charge_for_frequency(q, 3.5e9) == 0.5
    assert qm.gate_charge_for_frequency(q, 8.001e9, "above_half") == pytest.approx(1 - NG_HOT, abs=1e-14)


def test_gate_charge_below_floor():
    with pytest.raises(TargetBelowMinimum):
        qm.gate_charge_for_frequency(QubitParams(), 3.4e9)
    with pytest.raises(ValueError):
        qm.gate_charge_for_frequency(QubitParams(), 4e9, "sideways")


@given(st.floats(min_value=3.5e9, max_value=30e9), st.sampled_from(["below_half", "above_half"]))
def test_gate_charge_round_trip(f, branch):
    q = QubitParams()
    ng = qm.gate_charge_for_frequency(q, f, branch)
    assert qm.qubit_frequency(q, ng) == pytest.approx(f, rel=1e-9)


def test_mixing_angle_values():
    q = QubitParams()
    assert qm.mixing_angle(q, 0.5) == pytest.approx(math.pi / 2, abs=1e-15)
    assert math.sin(qm.mixing_angle(q, NG_COLD)) == pytest.approx(SIN_COLD, rel=1e-12)
    assert math.sin(qm.mixing_angle(q, NG_HOT)) == pytest.approx(SIN_HOT, rel=1e-12)


@given(st.floats(min_value=-3, max_value=3))
def test_mixing_angle_identity(ng):
    q = QubitParams()
    th = qm.mixing_angle(q, ng)
    assert 0 < th < math.pi
    assert math.sin(th) * qm.qubit_frequency(q, ng) == pytest.approx(q.ej_over_h, rel=1e-12)


def test_qubit_frequency_minimum_at_degeneracy():
    q = QubitParams()
    ng = np.linspace(0, 1, 2001)
    f = qm.qubit_frequency(q, ng)
    assert f.min() == q.ej_over_h
    assert ng[np.argmin(f)] == 0.5


def test_coupling_geometry_and_bare_coupling():
    geom = CouplingGeometry(460e-18, 2.7e-15, 100e-18, 6e-3, 1.6e-10)
    assert geom.capacitance_ratio == pytest.approx(0.17037037037, rel=1e-10)
    g = qm.bare_coupling(geom, 8e9)
    doubled = CouplingGeometry(920e-18, 2.7e-15, 100e-18, 6e-3, 1.6e-10)
    assert qm.bare_coupling(doubled, 8e9) == pytest.approx(2 * g, rel=1e-12)
    assert qm.bare_coupling(geom, 32e9) == pytest.approx(2 * g, rel=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [dict(ec_over_h=0.0), dict(ej_over_h=-1.0), dict(n_charge_min=1, n_charge_max=1)],
)
def test_qubit_params_invariants(kwargs):
    with pytest.raises(ValueError):
        QubitParams(**kwargs)


def test_resonator_and_geometry_invariants():
    with pytest.raises(ValueError):
        ResonatorParams(0.0, 2.0, 1e6)
    with pytest.raises(ValueError):
        ResonatorParams(5e9, 2.0, 1e6, n_fock=1)
    with pytest.raises(ValueError):
        ResonatorParams(5e9, 2.0, 1e6, role="warm")
    with pytest.raises(ValueError):
        CouplingGeometry(3e-15, 2.7e-15, 1e-16, 1e-3, 1e-10)


@given(st.floats(min_value=-2, max_value=2))
def test_charge_periodicity(ng):
    a = QubitParams(6.8e9, 3.5e9, -3, 3)
    b = QubitParams(6.8e9, 3.5e9, -2, 4)
    wa = np.linalg.eigvalsh(qm.build_charge_hamiltonian(a, ng))
    wb = np.linalg.eigvalsh(qm.build_charge_hamiltonian(b, ng + 1))
    np.testing.assert_allclose(wa, wb, rtol=1e-10, atol=1e-10 * np.abs(wa).max())


@given(st.floats(min_value=0.0, max_value=0.5))
def test_mirror_symmetry(delta):
    q = QubitParams(6.8e9, 3.5e9, -2, 3)
    a = qm.charge_spectrum(q, 0.5 + delta).eigenvalues
    b = qm.charge_spectrum(q, 0.5 - delta).eigenvalues
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10 * a.max())


def test_two_level_consistency(qubit):
    for ng in np.linspace(0.3, 0.7, 41):
        e = qm.charge_spectrum(qubit, ng, 2).eigenvalues[1]
        assert abs(e / qm.qubit_frequency(qubit, ng) - 1) < 0.02


def test_interaction_operator_equals_charge_operator():
    """(1 - 2ng) - cos(th) sz + sin(th) sx is 2(N - ng) written in the eigenbasis."""
    q = QubitParams(6.8e9, 3.5e9, 0, 1)
    for ng in (0.2, 0.4418, 0.5, 0.71):
        _, v = np.linalg.eigh(qm.build_charge_hamiltonian(q, ng))
        v = v * np.sign(v[0])  # any phase choice: compare the basis-independent spectrum
        two_n = 2 * (np.diag([0.0, 1.0]) - ng * np.eye(2))
        np.testing.assert_allclose(
            np.linalg.eigvalsh(qm.qubit_interaction_operator(q, ng)), np.linalg.eigvalsh(v.T @ two_n @ v), atol=1e-12
        )
        expected = v.T @ two_n @ v
        got = qm.qubit_interaction_operator(q, ng)
        np.testing.assert_allclose(np.abs(got), np.abs(expected), atol=1e-12)


def test_full_hamiltonian_decoupled_limit(qubit):
    rc = ResonatorParams(4.718e9, 2, 0.0, n_fock=3, role="cold")
    rh = ResonatorParams(8.001e9, 2, 0.0, n_fock=3, role="hot")
    ng = 0.42
    fq = qm.qubit_frequency(qubit, ng)
    w, _ = qm.eigensolve_hermitian(qm.build_full_hamiltonian(qubit, rc, rh, ng))
    expected = sorted(fq * a + 4.718e9 * b + 8.001e9 * c - fq / 2 for a in (0, 1) for b in range(3) for c in range(3))
    np.testing.assert_allclose(w, expected, rtol=1e-12)


@pytest.mark.parametrize("rotating_wave", [False, True])
def test_full_hamiltonian_hermitian(qubit, bare_resonators, rotating_wave):
    h = qm.build_full_hamiltonian(qubit, *bare_resonators, 0.37, 5e6, rotating_wave=rotating_wave)
    assert h.shape == (50, 50)
    assert np.abs(h - h.conj().T).max() <= 1e-12 * np.abs(h).max()


def test_dimension_cap(qubit, bare_resonators):
    with pytest.raises(DimensionOverflow):
        qm.build_full_hamiltonian(qubit, *bare_resonators, 0.4, max_dim=49)


def test_eigensolver_trivial_cases():
    w, v = qm.eigensolve_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)
    w, _ = qm.eigensolve_hermitian(np.diag([3.0, -1.0, 2.0]))
    np.testing.assert_array_equal(w, [-1.0, 2.0, 3.0])


def test_eigensolver_random_hermitian():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(50, 50)) + 1j * rng.normal(size=(50, 50))
    m = a + a.conj().T
    w, v = qm.eigensolve_hermitian(m)
    norm = np.linalg.norm(m)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-8 * norm)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(50), atol=1e-9)
    assert np.max(np.linalg.norm(m @ v - v * w, axis=0)) <= 1e-9 * norm
    np.testing.assert_allclose(w, np.linalg.eigvalsh(m), atol=1e-10 * norm)


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**32 - 1))
def test_eigensolver_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = a + a.conj().T
    w, _ = qm.eigensolve_hermitian(m)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(m), atol=1e-10 * max(np.linalg.norm(m), 1.0))


def test_eigensolver_rejects_non_hermitian_and_caps_sweeps():
    with pytest.raises(ValueError):
        qm.eigensolve_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    rng = np.random.default_rng(1)
    a = rng.normal(size=(20, 20))
    with pytest.raises(ConvergenceFailure):
        qm.eigensolve_hermitian(a + a.T, max_sweeps=1)


def test_full_spectrum_labels(qubit, bare_resonators):
    spec, _ = qm.full_spectrum(qubit, *bare_resonators, 0.5)
    assert spec.eigenvalues[0] == 0.0
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    assert spec.labels[0] == (0, 0, 0)
    # at degeneracy the lowest excitation is the 3.5 GHz qubit
    assert spec.labels[1] == (1, 0, 0)
