"""Kernel selection: prefer the Cython-compiled extension, fall back to
the interpreted module.  Set R2WB_PURE=1 to force the pure-Python path."""

import os

if os.environ.get("R2WB_PURE"):
    from . import core as _impl
    KERNEL = "pure"
else:
    try:
        from . import _core_c as _impl  # type: ignore[attr-defined]
        KERNEL = "compiled"
    except ImportError:
        from . import core as _impl
        KERNEL = "pure"

globals().update({k: v for k, v in vars(_impl).items() if not k.startswith("__")})

_mk = _impl._mk
K_ZERO = _impl.K_ZERO
K_SUM = _impl.K_SUM
K_W = _impl.K_W
K_TH = _impl.K_TH
K_UPS = _impl.K_UPS
log_lead = _impl.log_lead
coeff_max = _impl.coeff_max
th = _impl.th
