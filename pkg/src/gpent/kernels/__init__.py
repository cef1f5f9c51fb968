"""Optimizer kernels with a compiled backend and a NumPy fallback.

The compiled extension is used when it was built; setting the environment
variable ``GPENT_PURE_PYTHON=1`` forces the fallback. ``BACKEND`` names the
active implementation.
"""
import os

from . import _pykernels as python

compiled = None
if not os.environ.get("GPENT_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

log_divided_differences = _impl.log_divided_differences
khatri_rao = _impl.khatri_rao
khatri_rao_grad = _impl.khatri_rao_grad
relent_objective = _impl.relent_objective

__all__ = ["BACKEND", "compiled", "python", "log_divided_differences", "khatri_rao", "khatri_rao_grad", "relent_objective"]
