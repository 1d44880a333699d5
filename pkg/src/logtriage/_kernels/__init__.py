"""Split-search kernel backend selection.

The compiled extension is preferred when it imported cleanly; the numpy
fallback is always available. Set TRIAGE_PURE_PYTHON=1 to force the
fallback (the benchmark and the backend-equivalence tests use this).
Both backends are bit-for-bit interchangeable; see _pykernels.
"""

import os

from . import _pykernels

_impl = _pykernels
if os.environ.get("TRIAGE_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

best_classification_split = _impl.best_classification_split
best_regression_split = _impl.best_regression_split


def backend_name() -> str:
    return "compiled" if _impl.__name__.endswith("_ckernels") else "pure-python"


def using_compiled() -> bool:
    return backend_name() == "compiled"
