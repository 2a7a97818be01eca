"""Moments, kernels, and counting experiments for lattice exponential sums."""

try:
    from ._weyl import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # build-tree layout: _weyl.so sits next to the package dir
    from _weyl import *  # noqa: F401,F403

__version__ = "0.1.0"
