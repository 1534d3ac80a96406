"""Decay bounds for spectral projectors of banded Hermitian matrices.

Thin wrapper over the C++ core: matrix generation with prescribed spectrum
and bandwidth, exact projector decay measurement, and every bound family
(B1/B2/B3, the quadrature sign bound, the spectrum-aware ell family, the
inverse-function families, and the Hasson/Fuchs asymptotic rates).
"""

try:
    from gapline._gapline import *  # noqa: F401,F403  (installed layout)
    from gapline import _gapline as _core
except ImportError:  # development build: module directly on sys.path
    from _gapline import *  # noqa: F401,F403
    import _gapline as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = "1.0.0"
