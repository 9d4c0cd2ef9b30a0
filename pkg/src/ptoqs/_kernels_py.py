"""NumPy implementation of the reduced-propagation kernel (fallback backend)."""

import numpy as np


def quadratic_forms(forms, phases):
    """``out[t, p] = sum_{m,n} phases[t, m] forms[p, m, n] conj(phases[t, n])``."""
    forms = np.ascontiguousarray(forms, dtype=np.complex128)
    phases = np.ascontiguousarray(phases, dtype=np.complex128)
    n_forms, n, n2 = forms.shape
    if n2 != n or phases.shape[1] != n:
        raise ValueError("forms must be (P, n, n) and phases (T, n)")
    half = forms.reshape(n_forms * n, n) @ phases.conj().T
    return np.einsum("pmt,tm->tp", half.reshape(n_forms, n, -1), phases)
