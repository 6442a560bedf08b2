"""Kernel backend selection: compiled extension if available, numpy otherwise.

Set LIMITLAB_FORCE_PYTHON_KERNELS=1 to force the fallback (used by the
benchmark and by tests that compare the two backends).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("LIMITLAB_FORCE_PYTHON_KERNELS"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

orbit_stats = _impl.orbit_stats
# the all-offsets sums are vectorized circular diffs, which numpy runs faster
# than the scalar loop (see benchmarks/bench_kernels.py); the compiled win is
# the orbit walk, whose DFS also keeps O(L) matrices instead of whole levels
offset_power_sums = _kernels_py.offset_power_sums
free_level_counts = _kernels_py.free_level_counts
