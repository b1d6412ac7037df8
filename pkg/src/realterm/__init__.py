"""Topology of links of real terminal 3-fold singularities."""

from .jet import Jet
from .normal_form import SingularityClass, classify

__version__ = "0.1.0"
__all__ = ["Jet", "SingularityClass", "classify", "__version__"]
