"""Blockade structures: ground-state languages, graph automorphisms, spectra.

Thin wrapper around the C++ core. Graphs are passed as (n, edges, weights),
configurations and languages as bit strings.
"""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
    from . import _core as _impl
except ImportError:  # build-tree layout: extension module on sys.path
    from _core import *  # noqa: F401,F403
    import _core as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
