"""Information measures for generalized density matrices.

Every measure takes the metric that defines the pseudo inner product and
reduces to its textbook definition when the metric is the identity.
"""

import logging
import warnings

import numpy as np

from .errors import DimensionError, SpectrumWarning
from .linalg import (
    as_matrix,
    dagger,
    general_eigenvalues,
    is_hermitian,
    matrix_sqrt_psd,
    singular_values,
)
from .pt import PAULI_Y

log = logging.getLogger(__name__)

RANGE_TOL = 1e-9
SPECTRUM_TOL = 1e-8


def _check_pair(r1, r2, m):
    r1, r2 = as_matrix(r1, "r1"), as_matrix(r2, "r2")
    if r1.shape != r2.shape:
        raise DimensionError(f"state shapes differ: {r1.shape} vs {r2.shape}")
    if m is not None and r1.shape != m.eta.shape:
        raise DimensionError(f"state shape {r1.shape} does not match metric {m.eta.shape}")
    return r1, r2


def pseudo_trace_distance(r1, r2, m):
    """Trace distance ``1/2 Tr sqrt(Delta^double-dagger Delta)`` with ``Delta = r1 - r2``.

    ``Delta^double-dagger Delta`` is similar to ``Delta'^dagger Delta'`` with
    ``Delta' = G Delta G^{-1}``, so the value is half the sum of singular
    values of ``Delta'``.  ``m`` must act on the full state space.
    """
    r1, r2 = _check_pair(r1, r2, m)
    d = 0.5 * float(np.sum(singular_values(m.g_mat @ (r1 - r2) @ m.g_inv)))
    if d > 1 + RANGE_TOL:
        log.warning("trace distance %.12g exceeds 1", d)
    return d


def blp_functional(d_series):
    """Sum of all increases of a trace-distance series (discrete BLP measure)."""
    d = np.asarray(d_series, dtype=float)
    if d.ndim != 1 or d.size < 2:
        raise ValueError("need a 1-D series of at least two points")
    return float(np.sum(np.clip(np.diff(d), 0.0, None)))


def pseudo_fidelity(rt, r0, m):
    """Fidelity ``(Tr sqrt(sqrt(rt) r0 sqrt(rt)))^2`` of two generalized states.

    Square roots are the principal roots obtained through the Hermitian frame,
    ``sqrt(rho_G) = G^{-1} sqrt(G rho_G G^{-1}) G``, so the result equals the
    Uhlmann fidelity of the rotated pair.  It is evaluated as the squared
    nuclear norm of ``sqrt(rt') sqrt(r0')``.

    Raises
    ------
    ValueError
        If a rotated state is not Hermitian positive semidefinite to 1e-10.
    """
    rt, r0 = _check_pair(rt, r0, m)
    sa = matrix_sqrt_psd(m.g_mat @ rt @ m.g_inv)
    sb = matrix_sqrt_psd(m.g_mat @ r0 @ m.g_inv)
    f = float(np.sum(singular_values(sa @ sb))) ** 2
    if f > 1 + RANGE_TOL:
        log.warning("fidelity %.12g exceeds 1", f)
    return f


def spin_flip(m):
    """``sigma_G^y (x) sigma_G^y`` with ``sigma_G^y = sigma_y eta`` for a single-system metric."""
    y = PAULI_Y @ m.eta
    return np.kron(y, y)


SUPPORT_TOL = 1e-13


def concurrence_spectrum(rho2, m):
    """Eigenvalues of ``R = rho_G (Y (x) Y) rho_G^* (Y (x) Y)``, ``Y = sigma_y eta``.

    When the rotated state ``rho' = (G (x) G) rho_G (G (x) G)^{-1}`` is a
    valid density matrix, ``rho_G`` is factored as ``P Q`` over the support
    of ``rho'`` (eigenvalues above 1e-13) and the nonzero part of the spectrum
    is taken from the ``k x k`` matrix ``Q F P^* Q^* F P``; the remaining
    ``4 - k`` eigenvalues are exactly zero.  This keeps rank-deficient states
    (pure product states in particular) free of the rounding noise that the
    square roots would otherwise amplify.
    """
    rho2 = as_matrix(rho2, "rho2")
    if rho2.shape != (4, 4):
        raise DimensionError(f"concurrence needs a 4x4 state, got {rho2.shape}")
    if m.dim != 2:
        raise DimensionError("concurrence takes the single-system (2x2) metric")
    flip = spin_flip(m)
    lifted = m.tensor(2)
    rotated = lifted.g_mat @ rho2 @ lifted.g_inv
    if is_hermitian(rotated, RANGE_TOL):
        w, v = np.linalg.eigh((rotated + dagger(rotated)) / 2)
        if w[0] >= -RANGE_TOL:
            keep = w > SUPPORT_TOL
            root = np.sqrt(w[keep])
            p_fac = lifted.g_inv @ (v[:, keep] * root)
            q_fac = root[:, None] * dagger(v[:, keep]) @ lifted.g_mat
            small = q_fac @ flip @ p_fac.conj() @ q_fac.conj() @ flip @ p_fac
            mu = general_eigenvalues(small) if small.size else np.empty(0, complex)
            return np.concatenate([mu, np.zeros(4 - mu.size, complex)])
    return general_eigenvalues(rho2 @ flip @ rho2.conj() @ flip)


def _hermitian_frame_lambdas(rho2):
    # singular values of sqrt(rho) S sqrt(rho)^* are the square roots of eig(R)
    root = matrix_sqrt_psd(rho2)
    flip = np.kron(PAULI_Y, PAULI_Y)
    return singular_values(root @ flip @ root.conj())


def pseudo_concurrence(rho2, m, strict=False):
    """Concurrence ``max(0, l1 - l2 - l3 - l4)`` of a two-system generalized state.

    ``l_i`` are the square roots, in decreasing order, of the eigenvalues of
    ``R = rho_G (Y (x) Y) rho_G^* (Y (x) Y)`` with ``Y = sigma_y eta``; the
    complex conjugate is taken entrywise in the computational basis.

    Imaginary parts and negative real parts of ``R``'s eigenvalues up to 1e-8
    are treated as rounding noise.  Beyond that the spectrum is genuinely not
    real and non-negative: the real parts of the principal square roots are
    used and a :class:`SpectrumWarning` is issued, or, with ``strict=True``,
    a ``ValueError`` is raised.

    With an identity metric the ``l_i`` are computed as singular values of
    ``sqrt(rho) (sigma_y (x) sigma_y) sqrt(rho)^*`` instead, which avoids
    the square-root amplification of rounding noise near zero.
    """
    rho2 = as_matrix(rho2, "rho2")
    if m.is_identity():
        if rho2.shape != (4, 4):
            raise DimensionError(f"concurrence needs a 4x4 state, got {rho2.shape}")
        lambdas = _hermitian_frame_lambdas(rho2)
    else:
        mu = concurrence_spectrum(rho2, m)
        bad_imag = float(np.max(np.abs(mu.imag)))
        bad_neg = float(-min(0.0, np.min(mu.real)))
        if bad_imag > SPECTRUM_TOL or bad_neg > SPECTRUM_TOL:
            msg = (f"concurrence spectrum is not real non-negative "
                   f"(max |imag| {bad_imag:.2e}, min real {-bad_neg:.2e})")
            if strict:
                raise ValueError(msg)
            warnings.warn(msg, SpectrumWarning, stacklevel=2)
            lambdas = np.sqrt(mu.astype(complex)).real
        else:
            lambdas = np.sqrt(np.clip(mu.real, 0.0, None))
        lambdas = np.sort(lambdas)[::-1]
    c = max(0.0, float(lambdas[0] - np.sum(lambdas[1:])))
    if c > 1 + RANGE_TOL:
        log.warning("concurrence %.12g exceeds 1", c)
    return c

