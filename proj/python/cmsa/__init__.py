"""Code-mixed sentiment analysis toolkit (python bindings)."""

try:
    from ._cmsa import *  # noqa: F401,F403
    from ._cmsa import __doc__ as _ext_doc  # noqa: F401
except ImportError:  # build-tree layout: extension sits next to this package
    from _cmsa import *  # noqa: F401,F403

__version__ = "0.1.0"
