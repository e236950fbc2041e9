"""Simplified TDMR channel model: linear 2-D interference, edge-jitter noise,
exact densities, symmetric mutual information and exact ML detection."""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
    from ._core import __version__  # noqa: F401
except ImportError:  # build-tree layout: _core.so next to this package on sys.path
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
