"""PT-symmetric two-level Hamiltonian, its biorthogonal eigensystem and metric.

The Hamiltonian is

    H = [[r e^{i psi},  s e^{i phi}],
         [s e^{-i phi}, r e^{-i psi}]]

and is pseudo-Hermitian, ``eta^{-1} H^dagger eta = H``, for the positive
metric ``eta`` returned by :func:`build_metric`.  ``G = sqrt(eta)`` rotates it
to the Hermitian matrix ``H' = G H G^{-1}``.

Generalized density matrices ``rho_G = rho eta`` are plain 2-D arrays.  A
state ``rho_G`` is valid when ``G rho_G G^{-1}`` is an ordinary density
matrix; see :func:`check_generalized_state`.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import BrokenPTError, DimensionError, InvariantError
from .linalg import as_matrix, dagger, is_hermitian, kron

EP_MARGIN = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
PARITY = PAULI_X

_PAULI = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}


@dataclass(frozen=True)
class PTParams:
    """Real parameters ``(r, s, psi, phi)`` of the PT-symmetric Hamiltonian.

    Construction fails with :class:`BrokenPTError` unless
    ``|r sin psi| / s < 1 - 1e-9`` with ``s > 0`` (unbroken phase, away from
    the exceptional point).
    """

    r: float
    s: float
    psi: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ("r", "s", "psi", "phi"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if self.s <= 0:
            raise BrokenPTError(f"s must be positive, got {self.s}")
        ratio = abs(self.r * math.sin(self.psi)) / self.s
        if ratio > 1.0 - EP_MARGIN:
            raise BrokenPTError(
                f"|r sin(psi)|/s = {ratio:.6g} is not below 1: broken PT phase "
                "or exceptional point")

    @property
    def alpha(self):
        """Angle with ``sin(alpha) = (r/s) sin(psi)``, principal branch."""
        return math.asin(self.r / self.s * math.sin(self.psi))


@dataclass(frozen=True, eq=False)
class PTEigensystem:
    """Biorthonormal eigensystem of ``H``.

    ``right[:, n]`` is the ket ``|E_n>`` and ``left[n, :]`` the bra
    ``<<E_n|``, so that ``left @ right`` is the identity.
    """

    alpha: float
    energies: tuple
    right: np.ndarray
    left: np.ndarray


@dataclass(frozen=True, eq=False)
class Metric:
    """Metric ``eta``, its Hermitian square root ``g_mat`` and ``g_inv = g_mat^{-1}``."""

    eta: np.ndarray
    g_mat: np.ndarray
    g_inv: np.ndarray

    @property
    def dim(self):
        return self.eta.shape[0]

    @property
    def eta_inv(self):
        return self.g_inv @ self.g_inv

    @classmethod
    def identity(cls, dim=2):
        eye = np.eye(dim, dtype=complex)
        return cls(eye, eye.copy(), eye.copy())

    def tensor(self, n):
        """Metric on ``n`` copies of the space: ``eta (x) ... (x) eta``."""
        if n < 1:
            raise ValueError("n must be at least 1")
        eta, g, gi = self.eta, self.g_mat, self.g_inv
        for _ in range(n - 1):
            eta, g, gi = np.kron(eta, self.eta), np.kron(g, self.g_mat), np.kron(gi, self.g_inv)
        return Metric(eta, g, gi)

    def extend(self, bath_dim):
        """Metric lifted by the identity on a ``bath_dim``-dimensional bath factor."""
        eye = np.eye(bath_dim, dtype=complex)
        return Metric(np.kron(self.eta, eye), np.kron(self.g_mat, eye), np.kron(self.g_inv, eye))

    def is_identity(self, tol=0.0):
        return bool(np.max(np.abs(self.eta - np.eye(self.dim))) <= tol)


def _require_phi_zero(p):
    if p.phi != 0.0:
        raise ValueError("the eigensystem and metric are only defined for phi = 0")


def build_pt_hamiltonian(p):
    """The 2 x 2 PT-symmetric Hamiltonian for parameters ``p``."""
    return np.array(
        [[p.r * np.exp(1j * p.psi), p.s * np.exp(1j * p.phi)],
         [p.s * np.exp(-1j * p.phi), p.r * np.exp(-1j * p.psi)]])


def pt_eigensystem(p):
    """Closed-form biorthonormal eigensystem, ``E1 < E2``.

    Both eigenvectors carry the ``1/sqrt(2 cos(alpha))`` normalisation, which
    makes ``<<E_m|E_n> = delta_mn``.  Because ``H`` is symmetric the bra
    ``<<E_n|`` has the same components as the ket ``|E_n>``.
    """
    _require_phi_zero(p)
    a = p.alpha
    norm = 1.0 / math.sqrt(2.0 * math.cos(a))
    half = np.exp(0.5j * a)
    e1 = norm * np.array([-np.conj(half), half])
    e2 = norm * np.array([half, np.conj(half)])
    right = np.column_stack([e1, e2])
    gap = math.sqrt(p.s**2 - (p.r * math.sin(p.psi)) ** 2)
    centre = p.r * math.cos(p.psi)
    return PTEigensystem(
        alpha=a,
        energies=(centre - gap, centre + gap),
        right=right,
        left=right.T.copy(),
    )


def build_metric(p):
    """Closed-form metric ``eta`` and its square root ``G``."""
    _require_phi_zero(p)
    a = p.alpha
    sec, tan = 1.0 / math.cos(a), math.tan(a)
    eta = np.array([[sec, -1j * tan], [1j * tan, sec]])
    c, s = math.cos(a / 2), math.sin(a / 2)
    scale = 1.0 / math.sqrt(math.cos(a))
    g = scale * np.array([[c, -1j * s], [1j * s, c]])
    g_inv = scale * np.array([[c, 1j * s], [-1j * s, c]])
    return Metric(eta, g, g_inv)


def pseudo_adjoint(a, m):
    """``a^double-dagger = eta^{-1} a^dagger eta``.

    ``m`` must already act on the same space as ``a``; use
    :meth:`Metric.tensor` / :meth:`Metric.extend` to lift a single-system
    metric.
    """
    a = as_matrix(a, "a")
    if a.shape != m.eta.shape:
        raise DimensionError(f"operator shape {a.shape} does not match metric {m.eta.shape}")
    return m.eta_inv @ dagger(a) @ m.eta


def hermitian_equivalent(p):
    """``H' = G H G^{-1}``, evaluated as the explicit product."""
    m = build_metric(p)
    return m.g_mat @ build_pt_hamiltonian(p) @ m.g_inv


def pseudo_ground_excited(p):
    """Pseudo-projectors ``(|E1><<E1|, |E2><<E2|)``: ground then excited."""
    es = pt_eigensystem(p)
    return (np.outer(es.right[:, 0], es.left[0]),
            np.outer(es.right[:, 1], es.left[1]))


def pseudo_ladder_ops(p):
    """``(sigma+_G, sigma-_G) = (|E2><<E1|, |E1><<E2|)``."""
    es = pt_eigensystem(p)
    return (np.outer(es.right[:, 1], es.left[0]),
            np.outer(es.right[:, 0], es.left[1]))


def elevated_ladder_ops(p):
    """``(sigma+ eta, sigma- eta)`` with the computational-basis ``sigma+- = (sigma_x +- i sigma_y)/2``.

    These are pseudo-adjoints of each other for any metric, and rotate to
    ``G sigma+- G`` in the Hermitian frame.
    """
    eta = build_metric(p).eta
    return SIGMA_PLUS @ eta, SIGMA_MINUS @ eta


def generalized_pauli(p, axis):
    """``sigma_k eta`` for ``axis`` in ``{"x", "y", "z"}``."""
    try:
        sigma = _PAULI[axis]
    except KeyError:
        raise ValueError(f"axis must be 'x', 'y' or 'z', got {axis!r}") from None
    return sigma @ build_metric(p).eta


def cpt_inner_product(p, m_idx, n_idx):
    """``(CPT |E_m>)^T |E_n>`` with ``C = P eta``; indices are 1-based."""
    if m_idx not in (1, 2) or n_idx not in (1, 2):
        raise ValueError("indices must be 1 or 2")
    es = pt_eigensystem(p)
    c_op = PARITY @ build_metric(p).eta
    bra = c_op @ PARITY @ np.conj(es.right[:, m_idx - 1])
    return complex(bra @ es.right[:, n_idx - 1])


def check_generalized_state(rho_g, metric, trace_tol=1e-10, psd_tol=1e-9):
    """Validate a generalized density matrix and return its Hermitian-frame image.

    ``metric`` must act on the full state space (lift with
    :meth:`Metric.tensor` for multi-system states).

    Raises
    ------
    InvariantError
        If the trace differs from one by more than ``trace_tol``, or
        ``G rho_G G^{-1}`` is not Hermitian positive semidefinite to ``psd_tol``.
    """
    rho_g = as_matrix(rho_g, "rho_g")
    if rho_g.shape != metric.eta.shape:
        raise DimensionError(f"state shape {rho_g.shape} does not match metric {metric.eta.shape}")
    tr = np.trace(rho_g)
    if abs(tr - 1) > trace_tol:
        raise InvariantError(f"trace of generalized state is {tr:.12g}, expected 1")
    rotated = metric.g_mat @ rho_g @ metric.g_inv
    if not is_hermitian(rotated, psd_tol):
        raise InvariantError("rotated state is not Hermitian")
    low = np.linalg.eigvalsh((rotated + dagger(rotated)) / 2)[0]
    if low < -psd_tol:
        raise InvariantError(f"rotated state has negative eigenvalue {low:.3e}")
    return rotated


def product_state(*states):
    """Tensor product of single-system states in the package's left-to-right ordering."""
    if len(states) == 1:
        return as_matrix(states[0])
    return kron(*states)
