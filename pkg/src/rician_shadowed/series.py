"""Series truncation policy shared by the scalar and matrix hypergeometric code."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SeriesPolicy:
    """Termination control for hypergeometric series.

    A series stops once ``consecutive_small_terms`` successive terms (or
    weight-groups, for matrix-argument series) are each smaller than
    ``rel_tolerance`` times the running sum.  Single-term tests are unsafe
    because term magnitudes can dip and recover before the tail sets in.
    """

    rel_tolerance: float = 1e-12
    max_terms: int = 10_000
    consecutive_small_terms: int = 3

    def __post_init__(self) -> None:
        if not self.rel_tolerance > 0:
            raise ValueError("rel_tolerance > 0 required")
        if self.max_terms < 1:
            raise ValueError("max_terms >= 1 required")
        if self.consecutive_small_terms < 2:
            raise ValueError("consecutive_small_terms >= 2 required")


#: Default policy for scalar series.
DEFAULT_POLICY = SeriesPolicy()

#: Default policy for matrix-argument series; ``max_terms`` counts weight
#: groups (total partition weight), and groups are tested pairwise.
MATRIX_POLICY = SeriesPolicy(rel_tolerance=1e-12, max_terms=120, consecutive_small_terms=2)
