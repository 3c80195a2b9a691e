"""Block-coded maps over a profile family.

For each index the compression map sends the k-th source block onto the k-th
target block by proportional rounding; its fibers are integer intervals of
size one or two, computed analytically (no scanning). Pointwise dominated
pairs get blockwise translations, and the block collapse map witnesses that a
block-constant set reduces to itself nontrivially.
"""

from __future__ import annotations

import threading

from .blocks import SourceBlocks, TargetBlocks
from .profiles import ProfileFamily


class ReductionPreconditionError(ValueError):
    """Translation needs the source block no longer than the destination one."""

    def __init__(self, k: int, len_i: int, len_j: int) -> None:
        super().__init__(
            "block %d: source length %d exceeds destination length %d"
            % (k, len_i, len_j)
        )
        self.k = k
        self.len_i = len_i
        self.len_j = len_j


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class CodedFamily:
    """A profile family together with its block geometry and coded maps."""

    def __init__(self, family: ProfileFamily) -> None:
        self.family = family
        self.targets = TargetBlocks()
        self._sources: dict[int, SourceBlocks] = {}
        self._lock = threading.Lock()

    def source(self, i: int) -> SourceBlocks:
        blocks = self._sources.get(i)
        if blocks is None:
            with self._lock:
                blocks = self._sources.get(i)
                if blocks is None:
                    blocks = SourceBlocks(self.family.profile(i))
                    self._sources[i] = blocks
        return blocks

    def h_apply(self, i: int, x: int) -> int:
        """Image of x under the i-th compression map."""
        src = self.source(i)
        k, r = src.locate(x)
        return self.targets.endpoint(k) + (r * self.targets.size(k)) // src.length(k)

    def h_fibers(self, i: int, y: int) -> list[int]:
        """All preimages of y under the i-th compression map (one or two)."""
        k = self.targets.locate(y)
        q = y - self.targets.endpoint(k)
        m = self.targets.size(k)
        ln = self.source(i).length(k)
        b = self.source(i).endpoint(k)
        lo = _ceil_div(q * ln, m)
        hi = _ceil_div((q + 1) * ln, m)
        return [b + r for r in range(lo, hi)]

    def least_preimage(self, i: int, y: int) -> int:
        """Smallest preimage of y; injective in y."""
        k = self.targets.locate(y)
        q = y - self.targets.endpoint(k)
        ln = self.source(i).length(k)
        return self.source(i).endpoint(k) + _ceil_div(q * ln, self.targets.size(k))

    def positive_reduction(self, i: int, j: int, x: int) -> int:
        """Blockwise translation from the i-th to the j-th source partition.

        Defined at x only when the destination block is at least as long as
        the source block containing x.
        """
        src_i = self.source(i)
        k, r = src_i.locate(x)
        len_i = src_i.length(k)
        len_j = self.source(j).length(k)
        if len_i > len_j:
            raise ReductionPreconditionError(k, len_i, len_j)
        return self.source(j).endpoint(k) + r

    def collapse(self, x: int) -> int:
        """The left endpoint of the target block containing x."""
        return self.targets.endpoint(self.targets.locate(x))


_COLLAPSE_TARGETS = TargetBlocks()


def collapse_map(x: int) -> int:
    """Send every element of a target block to the block's left endpoint."""
    return _COLLAPSE_TARGETS.endpoint(_COLLAPSE_TARGETS.locate(x))
