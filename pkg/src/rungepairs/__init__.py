"""Runge pairs of axially symmetric planar domains and their quaternionic hulls."""

from .corpus import CorpusConfig, XorShift64Star, generate_corpus
from .domain import (Annulus, Disc, Line, Plane, Point, Polyline, Rect, Strip, SymmetricDomainGrid,
                     difference, intersection, load_spec, parse_spec_text, rasterize, union)
from .errors import RungePairsError
from .homology import betti_report, h3_presentation, induced_h1_map, induced_h3_map, split_sequence_check
from .planar import GridCycle, H1Class, class_from_cycle, cycle_from_class, label_components
from .quaternion import ImaginaryUnit, Quaternion
from .runge import obstruction_lower_bound, pole_push, quaternionic_approx, runge_decide
from .stem import ComplexRational, RationalStem

__version__ = "0.1.0"

__all__ = [
    "Annulus", "ComplexRational", "CorpusConfig", "Disc", "GridCycle", "H1Class", "ImaginaryUnit",
    "Line", "Plane", "Point", "Polyline", "Quaternion", "RationalStem", "Rect", "RungePairsError",
    "Strip", "SymmetricDomainGrid", "XorShift64Star", "betti_report", "class_from_cycle",
    "cycle_from_class", "difference", "generate_corpus", "h3_presentation", "induced_h1_map",
    "induced_h3_map", "intersection", "label_components", "load_spec", "obstruction_lower_bound",
    "parse_spec_text", "pole_push", "quaternionic_approx", "rasterize",
    "runge_decide", "split_sequence_check", "union",
]
