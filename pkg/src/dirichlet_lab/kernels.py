"""Backend selection for the inner-loop kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback.  Set ``DIRICHLET_LAB_BACKEND=python`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("DIRICHLET_LAB_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

dirichlet_kernel = _impl.dirichlet_kernel
cot_sin_weight = _impl.cot_sin_weight
trig_moments = _impl.trig_moments
trig_series = _impl.trig_series


def available_backends():
    """Map backend name to kernel module for every backend importable here."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
