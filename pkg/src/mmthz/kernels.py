"""Hot-kernel dispatch: compiled ``_speedups`` when available, numpy otherwise.

Set ``MMTHZ_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

import numpy as np

from . import _fallback

if os.environ.get("MMTHZ_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "python"


def backends():
    """Available kernel implementations, keyed by name."""
    out = {"python": _fallback}
    try:
        from . import _speedups
        out["compiled"] = _speedups
    except ImportError:
        pass
    return out


def _pick(impl):
    if impl is None:
        return _impl
    if isinstance(impl, str):
        try:
            return backends()[impl]
        except KeyError:
            raise ValueError(f"kernel backend {impl!r} is not available") from None
    return impl


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def rect_blocked(trial, cx, cy, half_l, half_w, cos_a, sin_a, d, n_trials,
                 clear_receiver=True, impl=None):
    impl = _pick(impl)
    return impl.rect_blocked(_i64(trial), _f64(cx), _f64(cy), _f64(half_l), _f64(half_w),
                             _f64(cos_a), _f64(sin_a), float(d), int(n_trials),
                             bool(clear_receiver))


def disc_blocked(trial, cx, cy, radius, d, n_trials, clear_receiver=True, impl=None):
    impl = _pick(impl)
    return impl.disc_blocked(_i64(trial), _f64(cx), _f64(cy), float(radius), float(d),
                             int(n_trials), bool(clear_receiver))


def grouped_argmax(group, values, n_groups, impl=None):
    impl = _pick(impl)
    return impl.grouped_argmax(_i64(group), _f64(values), int(n_groups))


def segmented_lsq(cnt, s, ss, k_segments, tol=0.0, impl=None):
    impl = _pick(impl)
    return impl.segmented_lsq(_f64(cnt), _f64(s), _f64(ss), int(k_segments), float(tol))
