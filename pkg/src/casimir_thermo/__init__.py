"""Casimir thermodynamics of weakly coupled bodies at finite temperature.

Closed-form free energy, entropy, internal energy and force for two bodies
in massless scalar fields in 1+1, 2+1 and 3+1 dimensions and in the
electromagnetic field, each checked against a brute-force oracle.
"""

from .geometry import RibbonPair, SpherePair, p_factor
from .scalar2d import Disk, PlanarBodyPair, Rectangle
from .thermo import (DEFAULT_NUMERICS, NATURAL_UNITS, ConvergenceError,
                     NumericsPolicy, ThermoPoint, UnitSystem)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DEFAULT_NUMERICS", "Disk", "NATURAL_UNITS",
    "NumericsPolicy", "PlanarBodyPair", "Rectangle", "RibbonPair",
    "SpherePair", "ThermoPoint", "UnitSystem", "p_factor",
]
