"""Dense complex matrix kernel.

Small dense operators only (the largest space handled by the package is
2 x 2 x bath_dim).  Every function is pure and returns new arrays.

Tensor ordering is fixed: the system is always the *left* factor, i.e.
``system (x) bath`` and ``system1 (x) system2 (x) bath``.
"""

import numpy as np

from .errors import DimensionError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D complex128 array.

    Raises
    ------
    DimensionError
        If ``a`` is not two-dimensional.
    ValueError
        If any entry is NaN or infinite.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def _square(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    return m


def dagger(a):
    """Conjugate transpose."""
    return np.conj(np.asarray(a)).T


def is_hermitian(a, tol=HERMITIAN_TOL):
    """True if ``max|a - a^dagger| <= tol * max(1, max|a|)``."""
    a = np.asarray(a)
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    return bool(np.max(np.abs(a - dagger(a)), initial=0.0) <= tol * scale)


def kron(a, b, *more):
    """Kronecker product ``a (x) b (x) ...`` (left factor varies slowest)."""
    out = np.kron(as_matrix(a, "a"), as_matrix(b, "b"))
    for m in more:
        out = np.kron(out, as_matrix(m))
    return out


# Pade coefficients b_0 .. b_m of the [m/m] approximant to exp.
_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}
# Largest 1-norm for which the degree-m approximant is accurate to unit roundoff.
_THETA = ((3, 1.495585217958292e-2), (5, 2.539398330063230e-1),
          (7, 9.504178996162932e-1), (9, 2.097847961257068),
          (13, 5.371920351148152))


def _pade_low(a, m):
    b = _PADE[m]
    ident = np.eye(a.shape[0], dtype=a.dtype)
    a2 = a @ a
    powers = [ident, a2]
    for _ in range(2, (m + 1) // 2):
        powers.append(powers[-1] @ a2)
    u = sum(b[k] * powers[k // 2] for k in range(1, m + 1, 2))
    v = sum(b[k] * powers[k // 2] for k in range(0, m + 1, 2))
    return a @ u, v


def _pade13(a):
    b = _PADE[13]
    ident = np.eye(a.shape[0], dtype=a.dtype)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def _expm_pade(a):
    norm = np.linalg.norm(a, 1)
    for m, theta in _THETA[:-1]:
        if norm <= theta:
            u, v = _pade_low(a, m)
            return np.linalg.solve(v - u, v + u)
    squarings = 0
    theta13 = _THETA[-1][1]
    if norm > theta13:
        squarings = max(0, int(np.ceil(np.log2(norm / theta13))))
    u, v = _pade13(a / 2.0**squarings)
    out = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        out = out @ out
    return out


def _expm_hermitian(a, factor):
    # exp(factor * a) for Hermitian a
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    return (v * np.exp(factor * w)) @ dagger(v)


def matrix_exponential(a, method="auto"):
    """Matrix exponential ``e^a`` of a square complex matrix.

    Parameters
    ----------
    a : array_like
        Square matrix; need not be Hermitian or normal.
    method : {"auto", "pade", "eigh"}
        ``"pade"`` forces scaling-and-squaring with a degree <= 13 Pade
        approximant.  ``"eigh"`` requires ``a`` to be Hermitian or
        anti-Hermitian and uses its eigendecomposition.  ``"auto"`` takes the
        eigendecomposition path when one of those symmetries holds to
        1e-12 and falls back to Pade otherwise.

    Returns
    -------
    numpy.ndarray
    """
    a = _square(a, "a")
    if method not in ("auto", "pade", "eigh"):
        raise ValueError(f"unknown method {method!r}")
    if a.shape[0] == 0:
        return a.copy()
    if method != "pade":
        if is_hermitian(a):
            return _expm_hermitian(a, 1.0)
        if is_hermitian(1j * a):
            return _expm_hermitian(1j * a, -1j)
        if method == "eigh":
            raise ValueError("method='eigh' needs a Hermitian or anti-Hermitian matrix")
    return _expm_pade(a)


def _fix_phases(vecs):
    # first component with |v| > 1e-12 made real positive, column by column
    vecs = vecs.copy()
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            pivot = col[idx[0]]
            vecs[:, k] = col * (abs(pivot) / pivot)
    return vecs


def hermitian_eigensystem(a):
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : numpy.ndarray
        Real, ascending.
    eigenvectors : numpy.ndarray
        Unitary matrix whose columns are the eigenvectors; the first
        non-negligible component of each column is real and positive.

    Raises
    ------
    ValueError
        If ``a`` deviates from hermiticity by more than 1e-12 (relative to
        its largest entry).
    """
    a = _square(a, "a")
    if not is_hermitian(a):
        raise ValueError("hermitian_eigensystem needs a Hermitian matrix")
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    return w, _fix_phases(v)


def general_eigenvalues(a):
    """All eigenvalues of a square matrix, with algebraic multiplicity.

    LAPACK's Hessenberg QR is used; failure to converge surfaces as
    :class:`numpy.linalg.LinAlgError`.
    """
    return np.linalg.eigvals(_square(a, "a"))


def matrix_sqrt_psd(a, tol=PSD_TOL):
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are treated as rounding noise and clipped.

    Raises
    ------
    ValueError
        If ``a`` is not Hermitian to ``tol`` or has an eigenvalue below ``-tol``.
    """
    a = _square(a, "a")
    if not is_hermitian(a, tol):
        raise ValueError("matrix_sqrt_psd needs a Hermitian matrix")
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    if w.size and w[0] < -tol:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {w[0]:.3e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)


def partial_trace_bath(m, dim_system, dim_bath):
    """Trace out the right-hand (bath) factor of a ``system (x) bath`` operator."""
    m = _square(m, "m")
    n = dim_system * dim_bath
    if m.shape[0] != n:
        raise DimensionError(
            f"operator of size {m.shape[0]} does not factor as {dim_system} x {dim_bath}")
    return np.einsum("ikjk->ij", m.reshape(dim_system, dim_bath, dim_system, dim_bath))


def singular_values(a):
    """Singular values, descending."""
    return np.linalg.svd(as_matrix(a, "a"), compute_uv=False)
