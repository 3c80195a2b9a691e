"""Factorial block geometry.

Target blocks partition the naturals into runs of length k!; each profile
stretches them into source blocks of length floor(u(k) * k!). Endpoint caches
grow on demand (the stage construction can reference very large block indices,
so precomputing to a fixed bound would be wrong); block location is a binary
search over the cached monotone endpoints. Cache extension is serialized by a
lock; reads of an already materialized prefix are safe from concurrent callers.
"""

from __future__ import annotations

import threading
from bisect import bisect_right
from fractions import Fraction
from typing import Callable

from .numerics import ONE, TWO


def source_len(u_k: Fraction, k: int) -> int:
    """floor(u_k * k!) for a density 1 < u_k < 2, computed exactly."""
    if not ONE < u_k < TWO:
        raise ValueError("profile value %s outside the open interval (1, 2)" % (u_k,))
    fact = 1
    for m in range(2, k + 1):
        fact *= m
    return (u_k.numerator * fact) // u_k.denominator


class TargetBlocks:
    """Endpoints a_0 = 0, a_{k+1} = a_k + k! and the blocks [a_k, a_{k+1})."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._fact = [1]      # k! for each cached k
        self._ends = [0, 1]   # a_0 .. a_{K+1} with K = len(_fact) - 1

    def _extend(self, k: int | None = None, beyond: int | None = None) -> None:
        with self._lock:
            while (k is not None and len(self._ends) <= k + 1) or (
                beyond is not None and self._ends[-1] <= beyond
            ):
                nxt = len(self._fact)
                self._fact.append(self._fact[-1] * nxt)
                self._ends.append(self._ends[-1] + self._fact[-1])

    def endpoint(self, k: int) -> int:
        if k >= len(self._ends):
            self._extend(k=k)
        return self._ends[k]

    def size(self, k: int) -> int:
        """|I_k| = k!."""
        if k >= len(self._fact):
            self._extend(k=k)
        return self._fact[k]

    def block(self, k: int) -> tuple[int, int]:
        """Half-open interval [a_k, a_{k+1})."""
        return self.endpoint(k), self.endpoint(k + 1)

    def locate(self, x: int) -> int:
        """The unique k with a_k <= x < a_{k+1}."""
        if x < 0:
            raise ValueError("block location needs a natural number")
        if self._ends[-1] <= x:
            self._extend(beyond=x)
        return bisect_right(self._ends, x) - 1


class SourceBlocks:
    """Per-profile endpoints b_0 = 0, b_{k+1} = b_k + floor(u(k) * k!)."""

    def __init__(self, profile: Callable[[int], Fraction]) -> None:
        self._profile = profile
        self._lock = threading.Lock()
        self._fact = [1]
        self._lens: list[int] = []
        self._ends = [0]

    def _extend(self, k: int | None = None, beyond: int | None = None) -> None:
        with self._lock:
            while (k is not None and len(self._lens) <= k) or (
                beyond is not None and self._ends[-1] <= beyond
            ):
                m = len(self._lens)
                if m >= len(self._fact):
                    self._fact.append(self._fact[-1] * m)
                u = self._profile(m)
                if not ONE < u < TWO:
                    raise ValueError(
                        "profile value %s at block %d outside (1, 2)" % (u, m)
                    )
                ln = (u.numerator * self._fact[m]) // u.denominator
                self._lens.append(ln)
                self._ends.append(self._ends[-1] + ln)

    def length(self, k: int) -> int:
        """|K_k| = floor(u(k) * k!)."""
        if k >= len(self._lens):
            self._extend(k=k)
        return self._lens[k]

    def endpoint(self, k: int) -> int:
        if k >= len(self._ends):
            self._extend(k=k - 1)
        return self._ends[k]

    def block(self, k: int) -> tuple[int, int]:
        """Half-open interval [b_k, b_{k+1})."""
        return self.endpoint(k), self.endpoint(k + 1)

    def locate(self, x: int) -> tuple[int, int]:
        """The unique (k, r) with x = b_k + r and 0 <= r < |K_k|."""
        if x < 0:
            raise ValueError("block location needs a natural number")
        if self._ends[-1] <= x:
            self._extend(beyond=x)
        k = bisect_right(self._ends, x) - 1
        return k, x - self._ends[k]
