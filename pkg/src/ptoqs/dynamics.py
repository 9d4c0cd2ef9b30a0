"""System-bath models and reduced time evolution.

A two-level system (or a pair of them) is coupled to one truncated bosonic
mode by an excitation-exchange term ``g (S+ (x) a + S- (x) a^dagger)``.  The
bath starts in its Gibbs state and is traced out after unitary evolution.

Two routes give the reduced generalized state ``rho_G(t)``:

* :func:`evolve_pseudo` exponentiates the non-Hermitian generator directly and
  closes the sandwich with the pseudo-adjoint ``U^double-dagger = e^{+i H t}``;
* :func:`evolve_rotated` rotates into the Hermitian frame with ``G``, runs
  ordinary unitary dynamics there and rotates back.

They agree to rounding error; the second is the fast default.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from . import kernels
from .errors import DimensionError, InvariantError, TruncationWarning
from .linalg import (
    dagger,
    hermitian_eigensystem,
    is_hermitian,
    kron,
    matrix_exponential,
    partial_trace_bath,
)
from .pt import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    PAULI_Z,
    Metric,
    build_metric,
    build_pt_hamiltonian,
    elevated_ladder_ops,
    generalized_pauli,
    hermitian_equivalent,
    pseudo_adjoint,
    pseudo_ground_excited,
    pseudo_ladder_ops,
)

LADDERS = ("pauli", "eigen")
TRACE_TOL = 1e-8
TRUNCATION_TOL = 1e-3


@dataclass(frozen=True)
class BathSpec:
    """Single bosonic mode ``H_B = omega_c a^dagger a`` truncated to ``dim`` Fock levels."""

    omega_c: float = 2.0
    dim: int = 10
    temperature: float = 10.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"bath dimension must be an integer >= 2, got {self.dim}")
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        object.__setattr__(self, "dim", int(self.dim))


@dataclass(frozen=True, eq=False)
class CompositeModel:
    """System-bath Hamiltonian in both frames.

    Attributes
    ----------
    h_pseudo : numpy.ndarray or None
        Pseudo-Hermitian generator; ``None`` for Hermitian-system models.
    h_rotated : numpy.ndarray
        Hermitian generator ``(G_lift) h_pseudo (G_lift)^{-1}``.
    n_systems : int
        1 or 2 two-level systems.
    metric : Metric
        Single-system metric (identity for Hermitian models).
    bath : BathSpec
    params : PTParams or None
    ladder : str
        ``"pauli"``, ``"eigen"`` or ``"hermitian"``.
    """

    h_pseudo: object
    h_rotated: np.ndarray
    n_systems: int
    metric: Metric
    bath: BathSpec
    params: object = None
    ladder: str = "hermitian"

    @property
    def dim_system(self):
        return 2**self.n_systems

    @property
    def dims(self):
        return (2,) * self.n_systems, self.bath.dim

    @property
    def system_metric(self):
        """Metric on the full system space (``eta (x) eta`` for two systems)."""
        return self.metric.tensor(self.n_systems)

    @property
    def is_hermitian_system(self):
        return self.h_pseudo is None

    def excited_state(self):
        """Initial excited state: ``rho_G^+`` (per system) or ``|e><e|``."""
        if self.params is None:
            one = np.diag([1.0, 0.0]).astype(complex)
        else:
            one = pseudo_ground_excited(self.params)[1]
        return kron(one, one) if self.n_systems == 2 else one

    def ground_state(self):
        """Initial ground state: ``rho_G^-`` (per system) or ``|g><g|``."""
        if self.params is None:
            one = np.diag([0.0, 1.0]).astype(complex)
        else:
            one = pseudo_ground_excited(self.params)[0]
        return kron(one, one) if self.n_systems == 2 else one


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Reduced system states on a time grid.

    ``states[k]`` is the generalized density matrix at ``times[k]``.
    ``top_fock_population[k]``, when available, is the population of the
    highest retained Fock level in the total state.
    """

    times: np.ndarray
    states: np.ndarray
    top_fock_population: object = None

    def __len__(self):
        return len(self.times)


def bosonic_ops(dim):
    """Truncated ``(a, a^dagger, a^dagger a)`` on ``dim`` Fock levels.

    The truncation makes ``[a, a^dagger]`` equal the identity except for the
    last diagonal entry, which is ``1 - dim``.
    """
    if int(dim) != dim or dim < 2:
        raise ValueError(f"dim must be an integer >= 2, got {dim}")
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    return a, dagger(a), np.diag(np.arange(dim)).astype(complex)


def thermal_state(b):
    """Gibbs state ``e^{-H_B/T} / Tr e^{-H_B/T}`` on the truncated ladder."""
    logw = -b.omega_c * np.arange(b.dim) / b.temperature
    w = np.exp(logw - logw.max())
    return np.diag(w / w.sum()).astype(complex)


def _bath_terms(b):
    a, ad, num = bosonic_ops(b.dim)
    return a, ad, b.omega_c * num, np.eye(b.dim, dtype=complex)


def _system_ladder(p, ladder):
    if ladder == "pauli":
        return elevated_ladder_ops(p)
    if ladder == "eigen":
        return pseudo_ladder_ops(p)
    raise ValueError(f"ladder must be one of {LADDERS}, got {ladder!r}")


def _check_model(h_pseudo, h_rotated, metric, n_systems, bath_dim):
    if not is_hermitian(h_rotated):
        raise InvariantError("rotated generator is not Hermitian")
    if h_pseudo is None:
        return
    lifted = metric.tensor(n_systems).extend(bath_dim)
    scale = max(1.0, float(np.max(np.abs(h_rotated))))
    if np.max(np.abs(lifted.g_mat @ h_pseudo @ lifted.g_inv - h_rotated)) > 1e-10 * scale:
        raise InvariantError("G-rotation of the pseudo-Hermitian generator does not match")
    if np.max(np.abs(pseudo_adjoint(h_pseudo, lifted) - h_pseudo)) > 1e-10 * scale:
        raise InvariantError("generator is not pseudo-Hermitian under the lifted metric")


def build_single_pt_model(p, b, g, ladder="pauli"):
    """One PT-symmetric system coupled to the mode.

    ``h_pseudo = H (x) I_B + I_2 (x) H_B + g (S+ (x) a + S- (x) a^dagger)``
    where ``S+-`` are the ladder operators selected by ``ladder``:
    ``"pauli"`` gives ``sigma+- eta``, ``"eigen"`` gives ``|E2><<E1|`` and
    ``|E1><<E2|``.  The Hermitian frame is assembled term by term from
    ``H' = G H G^{-1}`` and ``G S+- G^{-1}`` and checked against the direct
    rotation.
    """
    g = float(g)
    m = build_metric(p)
    sp, sm = _system_ladder(p, ladder)
    a, ad, hb, ib = _bath_terms(b)
    i2 = np.eye(2, dtype=complex)
    h_pseudo = (kron(build_pt_hamiltonian(p), ib) + kron(i2, hb)
                + g * (kron(sp, a) + kron(sm, ad)))
    rot = lambda op: m.g_mat @ op @ m.g_inv  # noqa: E731
    h_rotated = (kron(hermitian_equivalent(p), ib) + kron(i2, hb)
                 + g * (kron(rot(sp), a) + kron(rot(sm), ad)))
    _check_model(h_pseudo, h_rotated, m, 1, b.dim)
    return CompositeModel(h_pseudo, h_rotated, 1, m, b, p, ladder)


def build_single_hermitian_model(omega_0, b, g):
    """``omega_0 sigma_z (x) I_B + I_2 (x) H_B + g (sigma+ (x) a + sigma- (x) a^dagger)``."""
    a, ad, hb, ib = _bath_terms(b)
    i2 = np.eye(2, dtype=complex)
    h = (float(omega_0) * kron(PAULI_Z, ib) + kron(i2, hb)
         + float(g) * (kron(SIGMA_PLUS, a) + kron(SIGMA_MINUS, ad)))
    _check_model(None, h, None, 1, b.dim)
    return CompositeModel(None, h, 1, Metric.identity(2), b)


def _two_system_generator(h_sys, zz, sp, sm, j, g, b):
    a, ad, hb, ib = _bath_terms(b)
    i2 = np.eye(2, dtype=complex)
    h_s = kron(h_sys, i2) + kron(i2, h_sys) + j * kron(zz, zz)
    s_plus = kron(sp, i2) + kron(i2, sp)
    s_minus = kron(sm, i2) + kron(i2, sm)
    return (kron(h_s, ib) + kron(np.eye(4, dtype=complex), hb)
            + g * (kron(s_plus, a) + kron(s_minus, ad)))


def build_two_pt_model(p, b, g, j, ladder="pauli"):
    """Two PT-symmetric systems with a ``j sigma_G^z (x) sigma_G^z`` interaction.

    Both systems couple collectively to the single mode.  ``sigma_G^z`` is
    ``sigma_z eta``; the Hermitian frame uses ``G sigma_z G`` for it.
    """
    g, j = float(g), float(j)
    m = build_metric(p)
    sp, sm = _system_ladder(p, ladder)
    rot = lambda op: m.g_mat @ op @ m.g_inv  # noqa: E731
    h_pseudo = _two_system_generator(build_pt_hamiltonian(p), generalized_pauli(p, "z"),
                                     sp, sm, j, g, b)
    h_rotated = _two_system_generator(hermitian_equivalent(p), m.g_mat @ PAULI_Z @ m.g_mat,
                                      rot(sp), rot(sm), j, g, b)
    _check_model(h_pseudo, h_rotated, m, 2, b.dim)
    return CompositeModel(h_pseudo, h_rotated, 2, m, b, p, ladder)


def build_two_hermitian_model(omega_0, b, g, j):
    """Two ``omega_0 sigma_z`` qubits with ``j sigma_z (x) sigma_z`` coupling and a shared mode."""
    h = _two_system_generator(float(omega_0) * PAULI_Z, PAULI_Z, SIGMA_PLUS, SIGMA_MINUS,
                              float(j), float(g), b)
    _check_model(None, h, None, 2, b.dim)
    return CompositeModel(None, h, 2, Metric.identity(2), b)


def _prepare(m, rho0, times):
    rho0 = np.asarray(rho0, dtype=complex)
    ds = m.dim_system
    if rho0.shape != (ds, ds):
        raise DimensionError(f"initial state must be {ds}x{ds}, got {rho0.shape}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise ValueError("times must be one-dimensional")
    return rho0, times


def _check_traces(states, label):
    drift = np.max(np.abs(np.trace(states, axis1=1, axis2=2) - 1), initial=0.0)
    if drift > TRACE_TOL:
        raise InvariantError(f"{label}: trace drifted by {drift:.3e}")


def evolve_pseudo(m, rho0, times):
    """Reduced dynamics through the pseudo-unitary ``U = e^{-i h_pseudo t}``.

    ``rho_G(t) = Tr_B[U (rho_G(0) (x) rho_B) e^{+i h_pseudo t}]`` with both
    exponentials computed by Pade scaling-and-squaring at every time point.
    """
    if m.h_pseudo is None:
        raise ValueError("model has no pseudo-Hermitian generator")
    rho0, times = _prepare(m, rho0, times)
    total0 = kron(rho0, thermal_state(m.bath))
    ds, db = m.dim_system, m.bath.dim
    states = np.empty((len(times), ds, ds), dtype=complex)
    for k, t in enumerate(times):
        u = matrix_exponential(-1j * t * m.h_pseudo, method="pade")
        u_sharp = matrix_exponential(1j * t * m.h_pseudo, method="pade")
        states[k] = partial_trace_bath(u @ total0 @ u_sharp, ds, db)
    _check_traces(states, "evolve_pseudo")
    return Trajectory(times, states)


def _reduction_forms(vecs, x_eig, ds, db, hermitian):
    # one form per reduced element <a|rho_S|b>, then one for the top Fock
    # population; a Hermitian state only needs a <= b, the rest by conjugation
    n = vecs.shape[0]
    vr = vecs.reshape(ds, db, n)
    if hermitian:
        rows, cols = np.triu_indices(ds)
    else:
        rows, cols = (idx.ravel() for idx in np.indices((ds, ds)))
    forms = np.einsum("pkm,pkn->pmn", vr[rows], vr[cols].conj()) * x_eig
    top = np.einsum("am,an->mn", vr[:, -1, :], vr[:, -1, :].conj()) * x_eig
    return np.ascontiguousarray(np.concatenate([forms, top[None]], axis=0)), (rows, cols)


def evolve_rotated(m, rho0, times, truncation_tol=TRUNCATION_TOL):
    """Reduced dynamics in the Hermitian frame, rotated back to ``rho_G(t)``.

    The Hermitian generator is diagonalised once; each time point then costs
    one pass of the reduction kernel (see :mod:`ptoqs.kernels`).

    Emits :class:`TruncationWarning` if the highest Fock level's population
    reaches ``truncation_tol`` at any time.
    """
    rho0, times = _prepare(m, rho0, times)
    ds, db = m.dim_system, m.bath.dim
    sm = m.system_metric
    rotated0 = sm.g_mat @ rho0 @ sm.g_inv
    total0 = kron(rotated0, thermal_state(m.bath))
    energies, vecs = hermitian_eigensystem(m.h_rotated)
    x_eig = dagger(vecs) @ total0 @ vecs
    hermitian = is_hermitian(rotated0)
    forms, (rows, cols) = _reduction_forms(vecs, x_eig, ds, db, hermitian)
    phases = np.ascontiguousarray(np.exp(-1j * np.outer(times, energies)))
    values = kernels.quadratic_forms(forms, phases)
    reduced = np.empty((len(times), ds, ds), dtype=complex)
    if hermitian:
        reduced[:, cols, rows] = values[:, :-1].conj()
    reduced[:, rows, cols] = values[:, :-1]
    states = sm.g_inv @ reduced @ sm.g_mat
    top = values[:, -1].real
    _check_traces(states, "evolve_rotated")
    if truncation_tol is not None and len(top) and top.max() >= truncation_tol:
        warnings.warn(
            f"highest Fock level (n={db - 1}) reaches population {top.max():.3g}; "
            "increase the bath dimension for converged results",
            TruncationWarning, stacklevel=2)
    return Trajectory(times, states, top)


def improper_rho_trace(rho_g, m):
    """``Tr(rho_G eta^{-1})``: the trace of the ordinary (non-conserved) ``rho``.

    ``m`` must act on the same space as ``rho_g``.
    """
    rho_g = np.asarray(rho_g, dtype=complex)
    if rho_g.shape != m.eta.shape:
        raise DimensionError(f"state shape {rho_g.shape} does not match metric {m.eta.shape}")
    tr = np.trace(rho_g @ m.eta_inv)
    if abs(tr.imag) > 1e-10:
        raise InvariantError(f"trace of rho has imaginary part {tr.imag:.3e}")
    return float(tr.real)


def time_grid(t_max=25.0, steps=500):
    """Uniform grid of ``steps`` points on ``[0, t_max]``."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not (math.isfinite(t_max) and t_max > 0):
        raise ValueError("t_max must be positive")
    return np.linspace(0.0, t_max, int(steps))


__all__ = [
    "BathSpec", "CompositeModel", "Trajectory",
    "bosonic_ops", "thermal_state", "build_single_pt_model", "build_single_hermitian_model",
    "build_two_pt_model", "build_two_hermitian_model", "evolve_pseudo", "evolve_rotated",
    "improper_rho_trace", "time_grid",
]
