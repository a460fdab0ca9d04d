"""Error-correction metrics for coherent and noncoherent network coding."""

from .errors import NetcodeError

__version__ = "0.1.0"

__all__ = ["NetcodeError", "__version__"]
