"""Chromatic Lagrangians of cubic planar graphs: framed seeds, mutations,
wavefunctions, Ooguri-Vafa and DT integrality, deformed foams, and numerical
checks of the non-compact quantum dilogarithm."""

from .cubicmap import CubicMap, FaceCycle, build_named
from .qseries import QRat, XSeries
from .seeds import FramedSeed, Mutate, FramingShift, Rescale, RelabelEdges, standard_necklace_seed
from .wavefn import OVTable, canoe_wavefunction, ov_factorize, run_path, solve_q_difference
from .quiverdt import SymQuiver, disk_invariants, dt_series
from .foam import DeformedFoam, h1_presentation, phase_and_framings

__version__ = "0.1.0"

__all__ = [
    "CubicMap",
    "FaceCycle",
    "build_named",
    "QRat",
    "XSeries",
    "FramedSeed",
    "Mutate",
    "FramingShift",
    "Rescale",
    "RelabelEdges",
    "standard_necklace_seed",
    "OVTable",
    "canoe_wavefunction",
    "ov_factorize",
    "run_path",
    "solve_q_difference",
    "SymQuiver",
    "disk_invariants",
    "dt_series",
    "DeformedFoam",
    "h1_presentation",
    "phase_and_framings",
]
