"""Backend selection for the hot propagation kernel.

The compiled extension ``ptoqs._kernels`` is used when it was built and
imports cleanly; otherwise the NumPy implementation is used.  Setting the
environment variable ``PTOQS_PURE_PYTHON=1`` forces the NumPy path.
"""

import os

from . import _kernels_py

python_quadratic_forms = _kernels_py.quadratic_forms

try:
    from ._kernels import quadratic_forms as compiled_quadratic_forms
except ImportError:  # extension not built
    compiled_quadratic_forms = None

if compiled_quadratic_forms is not None and os.environ.get("PTOQS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    BACKEND = "compiled"
    quadratic_forms = compiled_quadratic_forms
else:
    BACKEND = "python"
    quadratic_forms = python_quadratic_forms

__all__ = ["BACKEND", "quadratic_forms", "python_quadratic_forms", "compiled_quadratic_forms"]
