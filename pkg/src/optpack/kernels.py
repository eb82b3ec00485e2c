"""Select the box-evaluation kernel at import time.

The compiled extension and the pure Python module implement the same
contract (see boxkernel_py); whichever is available wins, compiled first.
"""

try:
    from ._boxkernel import eval_box

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    from .boxkernel_py import eval_box

    BACKEND = "python"

__all__ = ["eval_box", "BACKEND"]
