"""Select the kernel implementation at import time.

The compiled ``_kernels`` extension is preferred.  Setting the environment
variable ``ILTMOMENTS_PURE=1`` forces the numpy fallback.
"""

from __future__ import annotations

import os

from . import _fallback

NAME = "numpy"
kernels = _fallback

if os.environ.get("ILTMOMENTS_PURE", "") != "1":
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        kernels = _compiled
        NAME = "cython"

k0k1 = kernels.k0k1
xk1 = kernels.xk1
symanzik_eval = kernels.symanzik_eval
simplex_integrand = kernels.simplex_integrand
sector_integrand = kernels.sector_integrand
