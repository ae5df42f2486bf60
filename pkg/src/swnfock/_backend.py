"""Select the compiled kernels when built, the pure-Python ones otherwise."""

from . import _pycore

try:
    from . import _core as _compiled
except ImportError:  # extension not built
    _compiled = None

_impl = _compiled if _compiled is not None else _pycore


def backend_name() -> str:
    return "cython" if _impl is _compiled else "python"


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]


def use_backend(name: str) -> None:
    global _impl
    if name == "python":
        _impl = _pycore
    elif name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled extension swnfock._core is not built")
        _impl = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


def log_sum(w, vol) -> complex:
    return _impl.log_sum(w, vol)


def log_terms(w, vol):
    return _impl.log_terms(w, vol)


def series_coeffs(w, t, c: float, M: int):
    return _impl.series_coeffs(w, t, float(c), int(M))
