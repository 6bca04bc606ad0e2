"""NIG autoregressive model toolkit.

Thin python wrapper around the C++ core: simulation, EM parameter
estimation, and the diagnostic workflow for AR(1) series with
normal-inverse-Gaussian innovations.
"""

try:
    from ._nigar import *  # noqa: F401,F403  (installed package layout)
    from ._nigar import __doc__ as _core_doc  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _nigar import *  # noqa: F401,F403

__version__ = "0.1.0"
