"""Hot kernels, backed by the compiled extension when it was built.

``BACKEND`` is ``"cython"`` or ``"python"``. Set ``CSCKIT_PURE_PYTHON=1`` to
force the fallback (used by the benchmark and the cross-backend tests).
"""

import os

from . import _pykernels as python

BACKEND = "python"
compiled = None

if not os.environ.get("CSCKIT_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else python
if compiled is not None:
    BACKEND = "cython"

hj_chain_counts = _impl.hj_chain_counts
hj_chain_counts_box = _impl.hj_chain_counts_box
quat_closure = _impl.quat_closure
laurent_eval = _impl.laurent_eval

__all__ = [
    "BACKEND",
    "compiled",
    "python",
    "hj_chain_counts",
    "hj_chain_counts_box",
    "quat_closure",
    "laurent_eval",
]
