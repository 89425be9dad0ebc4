"""khovacable: exact Khovanov bicomplexes for colored Jones polynomials of cables."""

from .diagram import Crossing, DiagramError, FramedLinkDiagram, ParseError, parse_diagram
from .laurent import LaurentPoly

__all__ = [
    "Crossing",
    "DiagramError",
    "FramedLinkDiagram",
    "LaurentPoly",
    "ParseError",
    "parse_diagram",
]
