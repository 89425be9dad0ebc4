"""Convention knobs that the paper's prose leaves to the picture.

Each flag selects between two readings that are indistinguishable from the
text alone; the identity test suite (pairing d^2 = 0, chain maps, bicomplex
anticommutation) pins which choices validate, and reports record them.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Conventions:
    """Validated defaults; alternates kept available for the test suite.

    strand_order: which parallel copy is strand 1 ("leftmost" relative to the
        original orientation, or "rightmost").
    above_lines: in the pairing sign, whether lines with smaller or larger
        component index count as lying above the new pair's line.
    a_bridge: at a crossing of the contracted pair with a single other
        strand, whether the forced smoothing closes the corridor on the side
        behind or ahead of that strand, relative to the orientation of the
        pair's lower-indexed strand.
    """

    strand_order: str = "leftmost"
    above_lines: str = "smaller"
    a_bridge: str = "behind"

    def __post_init__(self):
        if self.strand_order not in ("leftmost", "rightmost"):
            raise ValueError("strand_order must be 'leftmost' or 'rightmost'")
        if self.above_lines not in ("smaller", "larger"):
            raise ValueError("above_lines must be 'smaller' or 'larger'")
        if self.a_bridge not in ("behind", "ahead"):
            raise ValueError("a_bridge must be 'behind' or 'ahead'")


DEFAULT_CONVENTIONS = Conventions()
