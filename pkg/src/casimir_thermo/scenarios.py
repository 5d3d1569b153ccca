"""Built-in parameter sets: the four figure captions plus a 2+1D benchmark.

Caption lengths are in nm; in natural units they are read as pure numbers
in a common length unit. Figure 1 gives no susceptibility, so both ribbons
get chi = 1, and every ribbon pair starts at a = 0.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import RibbonPair, SpherePair
from .scalar2d import PlanarBodyPair


@dataclass(frozen=True)
class Grid:
    """Sweep axis; ``axis="Z"`` means Z = 4 pi R T for sphere pairs."""

    lo: float
    hi: float
    steps: int
    spacing: str = "log"
    axis: str = "T"

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not 0.0 < self.lo <= self.hi:
            raise ValueError("grid needs 0 < lo <= hi")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.axis not in ("T", "Z"):
            raise ValueError(f"unknown axis {self.axis!r}")

    def values(self):
        if self.steps == 1:
            return np.array([self.lo])
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.steps)
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class Scenario:
    name: str
    field: str
    geometry: object
    grid: Grid
    description: str = ""


def _ribbons(name, w1, gap, w2, chi1, chi2, note):
    return Scenario(name, "scalar1d", RibbonPair.from_widths(w1, gap, w2, chi1, chi2),
                    Grid(0.01, 10.0, 200), note)


def _spheres(name, a, b, R, chi1, chi2, field, grid, note):
    return Scenario(name, field, SpherePair(a, b, R, chi1, chi2), grid, note)


FIG4_PRODUCTS = (1, 6, 20, 50)


def fig4(chi_product=1.0):
    """Fig. 4 geometry; the product chi1 chi2 is carried by chi1."""
    if not chi_product >= 0:
        raise ValueError("chi product must be non-negative")
    tag = f"{chi_product:g}"
    return _spheres(f"fig4-chi{tag}", 1.0, 2.0, 10.0, float(chi_product), 1.0, "em",
                    Grid(0.1, 5.0, 200, "linear", "Z"),
                    f"EM spheres a=1 b=2 R=10, chi1*chi2={tag}, Z = 4 pi R T")


def _builtin():
    out = [
        _ribbons("fig1-blue", 2, 8, 4, 1.0, 1.0, "ribbons b-a=2 c-b=8 d-c=4, chi=1"),
        _ribbons("fig1-red", 2, 8, 8, 1.0, 1.0, "ribbons b-a=2 c-b=8 d-c=8, chi=1"),
        _ribbons("fig1-green", 10, 8, 8, 1.0, 1.0, "ribbons b-a=10 c-b=8 d-c=8, chi=1"),
        _ribbons("fig2-blue", 1, 4, 1, 11.68, 2.6, "ribbons 1/4/1, chi 11.68 and 2.6"),
        _ribbons("fig2-red", 1, 4, 1, 11.68, 1000.0, "ribbons 1/4/1, chi 11.68 and 1000"),
        _ribbons("fig2-green", 1, 4, 1, 11.68, 6000.0, "ribbons 1/4/1, chi 11.68 and 6000"),
        _ribbons("fig2-orange", 1, 4, 1, 2.0, 3.0, "ribbons 1/4/1, chi 2 and 3"),
        _spheres("fig3-blue", 1.0, 2.0, 10.0, 11.68, 2.6, "scalar3d",
                 Grid(0.001, 10.0, 200), "scalar spheres a=1 b=2 R=10"),
        _spheres("fig3-red", 1.0, 2.0, 20.0, 11.68, 2.6, "scalar3d",
                 Grid(0.001, 10.0, 200), "scalar spheres a=1 b=2 R=20"),
    ]
    out += [fig4(p) for p in FIG4_PRODUCTS]
    out.append(Scenario("disk2d", "scalar2d", PlanarBodyPair.disks(1.0, 1.0, 1.0),
                        Grid(0.1, 1.0, 20), "two unit disks, gap 1, chi=1"))
    return {s.name: s for s in out}


BUILTIN = _builtin()


def get_scenario(name, chi_product=None):
    """Look up a scenario; ``fig4`` takes its chi product from the argument."""
    if name == "fig4":
        return fig4(1.0 if chi_product is None else chi_product)
    if name not in BUILTIN:
        raise KeyError(f"unknown scenario {name!r}; try one of {sorted(BUILTIN)}")
    if chi_product is not None:
        if BUILTIN[name].field != "em":
            raise ValueError("--chi-product applies to EM scenarios only")
        return fig4(chi_product)
    return BUILTIN[name]


def temperature_of(scenario_grid, geometry, x):
    if scenario_grid.axis == "Z":
        return x / (4.0 * math.pi * geometry.R)
    return float(x)
