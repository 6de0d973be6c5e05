"""Integer partitions in a fixed canonical order.

Within one weight partitions are listed lexicographically from the largest
part down, so ``partitions_of(4)`` is ``(4), (3,1), (2,2), (2,1,1), (1,1,1,1)``.
Across weights the smaller weight comes first.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache, total_ordering
from typing import Iterable

from .errors import UsageError


@total_ordering
class Partition:
    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if parts and parts[-1] <= 0:
            raise UsageError(f"partition parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def sort_key(self):
        return (self.weight, tuple(-p for p in self.parts))

    def __lt__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __bool__(self):
        return bool(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(sum(1 for p in self.parts if p > i) for i in range(self.parts[0]))

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def merge(self, other: "Partition") -> "Partition":
        return Partition(self.parts + other.parts)


EMPTY = Partition()


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in canonical order."""
    if n < 0:
        raise UsageError("cannot partition a negative integer")
    return tuple(Partition(p) for p in _partitions(n, n))
