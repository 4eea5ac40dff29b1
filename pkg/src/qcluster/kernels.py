"""Backend selection for the hot kernels.

The compiled extension ``qcluster._ckernels`` is used when it imports;
otherwise the numpy versions in ``qcluster._pykernels`` are. Setting
``QCLUSTER_BACKEND=python`` forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("QCLUSTER_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        pass

swap_test_p0 = _impl.swap_test_p0
kernel_p0 = _impl.kernel_p0
jacobi_eigh = _impl.jacobi_eigh


def available_backends() -> dict:
    """Map backend name to kernel module for every backend that imports."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
