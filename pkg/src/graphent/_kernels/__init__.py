"""Kernel backend selection.

The compiled extension is used when importable; the numpy fallback is always
available. Set ``GRAPHENT_PURE=1`` to force the fallback.
"""

import os

from . import pure

if os.environ.get("GRAPHENT_PURE"):
    _impl = pure
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND
param_count = _impl.param_count
three_tangle = _impl.three_tangle
mixing_isometry = _impl.mixing_isometry
member_stats = _impl.member_stats
objective_three_tangle = _impl.objective_three_tangle
