"""Independent brute-force oracles used to freeze expected values.

Everything here recomputes from first principles (direct sums, literal scans,
tuple arithmetic) so the implementations under test never check themselves.
"""

from __future__ import annotations

import random
from math import gcd


def frac_norm(num: int, den: int) -> tuple[int, int]:
    if den == 0:
        raise ZeroDivisionError
    if den < 0:
        num, den = -num, -den
    g = gcd(abs(num), den)
    return (num // g, den // g) if g else (0, 1)


def frac_add(a, b):
    return frac_norm(a[0] * b[1] + b[0] * a[1], a[1] * b[1])


def frac_sub(a, b):
    return frac_norm(a[0] * b[1] - b[0] * a[1], a[1] * b[1])


def frac_mul(a, b):
    return frac_norm(a[0] * b[0], a[1] * b[1])


def frac_div(a, b):
    if b[0] == 0:
        raise ZeroDivisionError
    return frac_norm(a[0] * b[1], a[1] * b[0])


def rationals_between_one_and_two(count: int) -> list[tuple[int, int]]:
    """Reduced fractions in (1, 2) listed by (denominator, numerator)."""
    out: list[tuple[int, int]] = []
    den = 2
    while len(out) < count:
        for num in range(den + 1, 2 * den):
            if gcd(num, den) == 1:
                out.append((num, den))
        den += 1
    return out[:count]


def factorial(k: int) -> int:
    out = 1
    for m in range(2, k + 1):
        out *= m
    return out


def target_endpoints(k_max: int) -> list[int]:
    """a_0..a_{k_max+1} by direct summation."""
    ends = [0]
    for k in range(k_max + 1):
        ends.append(ends[-1] + factorial(k))
    return ends


def source_lengths(u, k_max: int) -> list[int]:
    """floor(u(k) * k!) per block, u given as a Fraction-like value function."""
    return [
        (u(k).numerator * factorial(k)) // u(k).denominator for k in range(k_max + 1)
    ]


def source_endpoints(u, k_max: int) -> list[int]:
    ends = [0]
    for ln in source_lengths(u, k_max):
        ends.append(ends[-1] + ln)
    return ends


def compression_table(u, k: int) -> dict[int, int]:
    """Per-element images of the k-th source block under proportional rounding."""
    ends = source_endpoints(u, k)
    a = target_endpoints(k)
    m = factorial(k)
    ln = ends[k + 1] - ends[k]
    return {ends[k] + r: a[k] + (r * m) // ln for r in range(ln)}


def domination_brute(u_i, u_j, selector, frontier: int, limit: int = 4000) -> int:
    """Least selected block past the frontier beating the opposing prefix sum."""
    lens_j: list[int] = []
    total = 0
    t = 0
    while True:
        k = selector(t)
        t += 1
        if t > limit:
            raise AssertionError("oracle search ran away")
        while len(lens_j) <= k:
            m = len(lens_j)
            lens_j.append((u_j(m).numerator * factorial(m)) // u_j(m).denominator)
        if k <= frontier:
            continue
        len_i = (u_i(k).numerator * factorial(k)) // u_i(k).denominator
        if len_i > sum(lens_j[: k + 1]):
            return k


def random_poset_matrix(n: int, rng: random.Random) -> list[list[bool]]:
    """Reflexive transitive closure of a random DAG on 0..n-1."""
    rel = [[a == b for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.4:
                rel[a][b] = True
    for c in range(n):
        for a in range(n):
            if rel[a][c]:
                for b in range(n):
                    if rel[c][b]:
                        rel[a][b] = True
    return rel
