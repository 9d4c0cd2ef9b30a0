import math
import warnings

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
import scipy.linalg

from ptoqs.errors import DimensionError, SpectrumWarning
from ptoqs.measures import (
    blp_functional,
    concurrence_spectrum,
    pseudo_concurrence,
    pseudo_fidelity,
    pseudo_trace_distance,
)
from ptoqs.pt import PAULI_Y, Metric, PTParams, build_metric, pseudo_ground_excited

from conftest import random_density, random_params

EYE2, EYE4 = Metric.identity(2), Metric.identity(4)


# textbook oracles

def trace_distance_oracle(a, b):
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def fidelity_oracle(a, b):
    if a.shape == (2, 2):
        # exact qubit formula
        det = np.linalg.det(a).real * np.linalg.det(b).real
        return float(np.trace(a @ b).real + 2 * np.sqrt(max(det, 0.0)))
    sa = scipy.linalg.sqrtm(a)
    return float(np.real(np.trace(scipy.linalg.sqrtm(sa @ b @ sa)))) ** 2


def wootters_oracle(rho):
    yy = np.kron(PAULI_Y, PAULI_Y)
    mu = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    lam = np.sort(np.sqrt(np.clip(mu.real, 0, None)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def generalized(rng, metric, dim, rank=None):
    """Random generalized state whose rotated image is a density matrix."""
    rho = random_density(rng, dim, rank=rank)
    return metric.g_inv @ rho @ metric.g_mat, rho


# examples

def test_trace_distance_examples(default_params):
    m = build_metric(default_params)
    ground, excited = pseudo_ground_excited(default_params)
    assert pseudo_trace_distance(excited, excited, m) == 0
    assert pseudo_trace_distance(excited, ground, m) == pytest.approx(1, abs=1e-12)
    # oracle: G maps the pair to orthogonal projectors |+-x><+-x|
    rot = [m.g_mat @ x @ m.g_inv for x in (excited, ground)]
    np.testing.assert_allclose(rot[0], np.full((2, 2), 0.5), atol=1e-14)
    assert trace_distance_oracle(*rot) == pytest.approx(1, abs=1e-12)
    assert pseudo_trace_distance(np.diag([1, 0]), np.diag([0, 1]), EYE2) == pytest.approx(1)


def test_trace_distance_dimension_checks():
    with pytest.raises(DimensionError):
        pseudo_trace_distance(np.eye(2), np.eye(4), EYE2)
    with pytest.raises(DimensionError):
        pseudo_trace_distance(np.eye(4), np.eye(4), EYE2)


def test_blp_examples():
    assert blp_functional([1.0, 0.8, 0.3, 0.1]) == 0
    assert blp_functional([1, 0.4, 0.7, 0.2]) == pytest.approx(0.3)
    with pytest.raises(ValueError):
        blp_functional([1.0])


def test_fidelity_examples(default_params):
    m = build_metric(default_params)
    _, excited = pseudo_ground_excited(default_params)
    assert pseudo_fidelity(excited, excited, m) == pytest.approx(1, abs=1e-12)
    assert pseudo_fidelity(np.diag([1, 0]), np.diag([0, 1]), EYE2) == pytest.approx(0, abs=1e-15)
    with pytest.raises(ValueError):
        pseudo_fidelity(np.diag([1.5, -0.5]), np.diag([1, 0]), EYE2)


def test_concurrence_examples(default_params):
    m = build_metric(default_params)
    _, excited = pseudo_ground_excited(default_params)
    # a pure product state: three eigenvalues vanish exactly, the fourth is rounding noise
    assert pseudo_concurrence(np.kron(excited, excited), m) < 1e-8
    np.testing.assert_array_equal(concurrence_spectrum(np.kron(excited, excited), m)[1:], 0)
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    assert pseudo_concurrence(np.outer(bell, bell), EYE2) == pytest.approx(1, abs=1e-12)
    with pytest.raises(DimensionError):
        pseudo_concurrence(np.eye(2) / 2, EYE2)
    with pytest.raises(DimensionError):
        concurrence_spectrum(np.eye(4) / 4, EYE4)


def test_concurrence_nonreal_spectrum_policy(rng, default_params):
    m = build_metric(default_params)
    m2 = m.tensor(2)
    for _ in range(200):
        rho = generalized(rng, m2, 4)[0]
        mu = concurrence_spectrum(rho, m)
        if np.max(np.abs(mu.imag)) > 1e-8 or np.min(mu.real) < -1e-8:
            break
    else:
        pytest.fail("no state with a non-real spectrum found")
    with pytest.warns(SpectrumWarning):
        c = pseudo_concurrence(rho, m)
    assert c >= 0
    with pytest.raises(ValueError):
        pseudo_concurrence(rho, m, strict=True)


# identity-metric equivalence with the textbook definitions

def test_identity_metric_matches_oracles(rng):
    for _ in range(500):
        a, b = random_density(rng, 2), random_density(rng, 2)
        assert abs(pseudo_trace_distance(a, b, EYE2) - trace_distance_oracle(a, b)) <= 1e-12
        assert abs(pseudo_fidelity(a, b, EYE2) - fidelity_oracle(a, b)) <= 1e-10
    # fidelity is not Lipschitz at rank-deficient states, so pure inputs carry
    # sqrt(machine epsilon) of unavoidable uncertainty
    for _ in range(100):
        a, b = random_density(rng, 2, rank=1), random_density(rng, 2)
        assert abs(pseudo_trace_distance(a, b, EYE2) - trace_distance_oracle(a, b)) <= 1e-12
        assert abs(pseudo_fidelity(a, b, EYE2) - np.trace(a @ b).real) <= 1e-7
    for _ in range(500):
        rho = random_density(rng, 4)
        assert abs(pseudo_concurrence(rho, EYE2) - wootters_oracle(rho)) <= 1e-9
    yy = np.kron(PAULI_Y, PAULI_Y)
    for _ in range(100):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        exact = abs(psi.conj() @ yy @ psi.conj())
        assert abs(pseudo_concurrence(np.outer(psi, psi.conj()), EYE2) - exact) <= 1e-12


# properties

_params = st.builds(
    lambda r, s, x: PTParams(r, s, math.asin(max(-0.95, min(0.95, x * s / r)))),
    st.floats(0.05, 2.0), st.floats(0.05, 2.0), st.floats(-0.95, 0.95))


@settings(max_examples=60, deadline=None)
@given(p=_params, seed=st.integers(0, 2**32 - 1))
def test_trace_distance_metric_properties(p, seed):
    rng = np.random.default_rng(seed)
    m = build_metric(p)
    (a, ra), (b, rb), (c, _) = (generalized(rng, m, 2) for _ in range(3))
    dab = pseudo_trace_distance(a, b, m)
    assert abs(dab - pseudo_trace_distance(b, a, m)) <= 1e-12
    assert dab <= pseudo_trace_distance(a, c, m) + pseudo_trace_distance(c, b, m) + 1e-9
    assert -1e-12 <= dab <= 1 + 1e-9
    # frame invariance
    assert abs(dab - trace_distance_oracle(ra, rb)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(p=_params, seed=st.integers(0, 2**32 - 1))
def test_fidelity_frame_invariance(p, seed):
    rng = np.random.default_rng(seed)
    m = build_metric(p)
    (a, ra), (b, rb) = generalized(rng, m, 2), generalized(rng, m, 2)
    f = pseudo_fidelity(a, b, m)
    assert -1e-12 <= f <= 1 + 1e-9
    assert abs(f - fidelity_oracle(ra, rb)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(p=_params, seed=st.integers(0, 2**32 - 1))
def test_trace_distance_two_systems_frame_invariance(p, seed):
    rng = np.random.default_rng(seed)
    m2 = build_metric(p).tensor(2)
    (a, ra), (b, rb) = generalized(rng, m2, 4), generalized(rng, m2, 4)
    assert abs(pseudo_trace_distance(a, b, m2) - trace_distance_oracle(ra, rb)) <= 1e-9


def _rotated_operator_concurrence(rho_rot, m):
    # R expressed in the Hermitian frame: rho' A rho'^* B with the spin flip
    # conjugated by G (x) G on the left and by its entrywise conjugate on the right
    g2, g2_inv = np.kron(m.g_mat, m.g_mat), np.kron(m.g_inv, m.g_inv)
    y = PAULI_Y @ m.eta
    flip = np.kron(y, y)
    a = g2 @ flip @ g2_inv.conj()
    b = g2.conj() @ flip @ g2_inv
    mu = np.linalg.eigvals(rho_rot @ a @ rho_rot.conj() @ b)
    lam = np.sort(np.sqrt(mu.astype(complex)).real)[::-1]
    return max(0.0, lam[0] - lam[1:].sum())


def test_concurrence_frame_invariance(rng):
    for p in random_params(rng, 30):
        m = build_metric(p)
        m2 = m.tensor(2)
        rho = random_density(rng, 4)
        rho_g = m2.g_inv @ rho @ m2.g_mat
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SpectrumWarning)
            c = pseudo_concurrence(rho_g, m)
        assert abs(c - _rotated_operator_concurrence(rho, m)) <= 1e-9
    # rank-deficient states: the support reduction removes rounding noise
    # that the brute-force route still carries, so compare more loosely
    for p in random_params(rng, 30):
        m = build_metric(p)
        m2 = m.tensor(2)
        rho = random_density(rng, 4, rank=int(rng.integers(1, 4)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SpectrumWarning)
            c = pseudo_concurrence(m2.g_inv @ rho @ m2.g_mat, m)
        assert abs(c - _rotated_operator_concurrence(rho, m)) <= 1e-6
