"""Integer partitions indexing the matrix-argument hypergeometric series."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache


@dataclass(frozen=True)
class Partition:
    """A partition k1 >= k2 >= ... >= kl > 0 of its weight."""

    parts: tuple[int, ...]
    weight: int = field(init=False)

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError("partition parts must be positive integers")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("partition parts must be non-increasing")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "weight", sum(parts))

    def __len__(self) -> int:
        return len(self.parts)


@lru_cache(maxsize=4096)
def enumerate_partitions(k: int, max_parts: int) -> tuple[Partition, ...]:
    """All partitions of k into at most max_parts parts.

    Deterministic order: descending lexicographic by parts, e.g. for k=4,
    {4}, {3,1}, {2,2}, {2,1,1}, {1,1,1,1}.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if max_parts < 1:
        raise ValueError("max_parts must be positive")
    if k == 0:
        return (Partition(()),)

    out: list[Partition] = []

    def rec(remaining: int, max_first: int, slots: int, prefix: tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if slots == 0:
            return
        for first in range(min(remaining, max_first), 0, -1):
            rec(remaining - first, first, slots - 1, prefix + (first,))

    rec(k, k, max_parts, ())
    return tuple(out)
