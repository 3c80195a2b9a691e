"""The stage construction of the diagonal set.

Requirements (program index, scheduled pair) are enumerated by Cantor pairing
over the pair ranks. Each stage finds a source block past the frontier that is
longer than the entire opposing prefix, runs the scheduled program over it, and
either records a non-totality witness, a collision, or diagonalizes: the chosen
block gets membership value 1 and everything else up to the image block gets 0.
Bits are only ever assigned beyond the frontier, so nothing is ever rewritten.

Per-element runs are confined to inputs not exceeding the step budget; all
larger inputs of a block follow one control path (see machine.tail_behavior),
so the branch decision and its least witnesses are computed exactly without
scanning factorial-sized blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .machine import (
    OutOfBudget,
    TailHalts,
    decode,
    run_program,
    tail_behavior,
)
from .maps import CodedFamily
from .numerics import cantor_pair, cantor_unpair
from .profiles import GapCertificate

BRANCH_NON_TOTAL = "non_total_under_budget"
BRANCH_NON_INJECTIVE = "non_injective"
BRANCH_DIAGONALIZED = "diagonalized"


class FrontierUndefined(Exception):
    """Membership queried beyond the constructed prefix; run more stages."""

    def __init__(self, block: int, frontier: int) -> None:
        super().__init__(
            "block %d undefined: frontier is %d, insufficient stages" % (block, frontier)
        )
        self.block = block
        self.frontier = frontier


class DominationCeilingError(RuntimeError):
    """Candidate ceiling reached; the gap hypothesis looks violated."""


@dataclass(frozen=True)
class Requirement:
    e: int
    i: int
    j: int


@dataclass(frozen=True)
class StageRecord:
    stage: int
    e: int
    i: int
    j: int
    k: int
    branch: str
    budget: int
    m_after: int
    x: int | None = None
    x2: int | None = None
    y: int | None = None
    ell: int | None = None

    def to_json(self) -> dict:
        def dec(v):
            return None if v is None else str(v)

        return {
            "stage": self.stage,
            "e": self.e,
            "i": self.i,
            "j": self.j,
            "k": self.k,
            "branch": self.branch,
            "x": dec(self.x),
            "x2": dec(self.x2),
            "y": dec(self.y),
            "ell": dec(self.ell),
            "budget": self.budget,
            "M_after": self.m_after,
        }

    @staticmethod
    def from_json(obj: dict) -> "StageRecord":
        def num(v):
            return None if v is None else int(v)

        return StageRecord(
            stage=obj["stage"],
            e=obj["e"],
            i=obj["i"],
            j=obj["j"],
            k=obj["k"],
            branch=obj["branch"],
            budget=obj["budget"],
            m_after=obj["M_after"],
            x=num(obj.get("x")),
            x2=num(obj.get("x2")),
            y=num(obj.get("y")),
            ell=num(obj.get("ell")),
        )


class ConstructionState:
    """Frontier plus the sparse table of blocks explicitly set to 1.

    Blocks at or below the frontier default to 0; blocks beyond it are
    undefined and querying them raises rather than guessing.
    """

    def __init__(self) -> None:
        self.frontier = -1
        self.ones: set[int] = set()
        self.stage = 0

    def block_bit(self, k: int) -> int:
        if k > self.frontier:
            raise FrontierUndefined(k, self.frontier)
        return 1 if k in self.ones else 0


class RequirementSchedule:
    """The fixed enumeration of requirements over a gap certificate."""

    def __init__(self, cert: GapCertificate) -> None:
        self._cert = cert
        self._pairs: list[tuple[int, int]] = []
        self._next_code = 0

    def pair(self, rank: int) -> tuple[int, int]:
        """The rank-th scheduled pair, scanning pair codes in increasing order."""
        while len(self._pairs) <= rank:
            i, j = cantor_unpair(self._next_code)
            self._next_code += 1
            if self._cert.in_D(i, j):
                self._pairs.append((i, j))
        return self._pairs[rank]

    def rank_of(self, i: int, j: int) -> int:
        """Position of a scheduled pair in the enumeration."""
        if not self._cert.in_D(i, j):
            raise ValueError("pair (%d, %d) is not scheduled" % (i, j))
        target = cantor_pair(i, j)
        rank = 0
        while True:
            a, b = self.pair(rank)
            if (a, b) == (i, j):
                return rank
            if cantor_pair(a, b) > target:
                raise AssertionError("pair enumeration skipped its own member")
            rank += 1

    def requirement(self, n: int) -> Requirement:
        e, rank = cantor_unpair(n)
        i, j = self.pair(rank)
        return Requirement(e, i, j)

    def stage_of(self, e: int, i: int, j: int) -> int:
        """The stage number at which requirement (e, i, j) is scheduled."""
        return cantor_pair(e, self.rank_of(i, j))


def window_stage_count(
    schedule: RequirementSchedule, pairs: Iterable[tuple[int, int]], e_bound: int
) -> int:
    """Stages needed so every (e < e_bound, pair) requirement has run."""
    needed = 0
    for i, j in pairs:
        rank = schedule.rank_of(i, j)
        needed = max(needed, cantor_pair(e_bound - 1, rank) + 1)
    return needed


def domination_search(
    coded: CodedFamily,
    cert: GapCertificate,
    i: int,
    j: int,
    frontier: int,
    *,
    max_candidates: int = 10**6,
) -> int:
    """Least selected block past the frontier longer than the opposing prefix."""
    src_i = coded.source(i)
    src_j = coded.source(j)
    for t in range(max_candidates):
        k = cert.s(i, j, t)
        if k <= frontier:
            continue
        if src_i.length(k) > src_j.endpoint(k + 1):
            return k
    raise DominationCeilingError(
        "no dominating block for pair (%d, %d) within %d candidates" % (i, j, max_candidates)
    )


def _evaluate_block(program, lo: int, hi: int, budget: int, threshold: int):
    """Three-way branch decision for one source block.

    Returns ('non_total', x), ('non_injective', x1, x2) or
    ('diagonalized', x, y). Inputs above the budget are covered by the uniform
    tail, so at most budget + 1 individual runs happen. Witnesses are the least
    ones, matching a full in-order scan of the block.
    """
    prefix_hi = min(hi, budget + 1)
    values: list[int] = []
    seen: dict[int, int] = {}
    first_divergence = None
    first_collision = None
    for x in range(lo, prefix_hi):
        outcome = run_program(program, x, budget)
        if isinstance(outcome, OutOfBudget):
            first_divergence = x
            break
        v = outcome.value
        if first_collision is None:
            if v in seen:
                first_collision = (seen[v], x)
            else:
                seen[v] = x
        values.append(v)

    tail = None
    tail_lo = max(lo, budget + 1)
    if first_divergence is None and hi > tail_lo:
        behavior = tail_behavior(program, budget)
        if isinstance(behavior, TailHalts):
            tail = behavior
        else:
            first_divergence = tail_lo
    if first_divergence is not None:
        return (BRANCH_NON_TOTAL, first_divergence)

    if first_collision is None and tail is not None:
        crossings = [
            (v - tail.offset, x1)
            for v, x1 in seen.items()
            if tail_lo <= v - tail.offset < hi
        ]
        if crossings:
            x2, x1 = min(crossings)
            first_collision = (x1, x2)
    if first_collision is not None:
        return (BRANCH_NON_INJECTIVE, first_collision[0], first_collision[1])

    for x, v in zip(range(lo, prefix_hi), values):
        if v >= threshold:
            return (BRANCH_DIAGONALIZED, x, v)
    if tail is not None:
        x = max(tail_lo, threshold - tail.offset)
        if x < hi:
            return (BRANCH_DIAGONALIZED, x, x + tail.offset)
    raise ArithmeticError(
        "pigeonhole violated: a total injective map stayed inside the dominated range"
    )


def run_stage(
    state: ConstructionState,
    req: Requirement,
    coded: CodedFamily,
    cert: GapCertificate,
    budget: int,
) -> StageRecord:
    """Execute one stage and update the state; bits are only added, never changed."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not cert.in_D(req.i, req.j):
        raise ValueError("requirement pair (%d, %d) is not scheduled" % (req.i, req.j))
    k = domination_search(coded, cert, req.i, req.j, state.frontier)
    src_i = coded.source(req.i)
    src_j = coded.source(req.j)
    lo, hi = src_i.block(k)
    threshold = src_j.endpoint(k + 1)
    if not src_i.length(k) > threshold:
        raise AssertionError("domination search returned a non-dominating block")

    program = decode(req.e)
    result = _evaluate_block(program, lo, hi, budget, threshold)
    stage = state.stage
    if result[0] == BRANCH_NON_TOTAL:
        record = StageRecord(
            stage, req.e, req.i, req.j, k, BRANCH_NON_TOTAL, budget, k, x=result[1]
        )
        state.frontier = k
    elif result[0] == BRANCH_NON_INJECTIVE:
        record = StageRecord(
            stage, req.e, req.i, req.j, k, BRANCH_NON_INJECTIVE, budget, k,
            x=result[1], x2=result[2],
        )
        state.frontier = k
    else:
        x, y = result[1], result[2]
        ell, _ = src_j.locate(y)
        if ell <= k:
            raise AssertionError("diagonal image landed at or before the chosen block")
        record = StageRecord(
            stage, req.e, req.i, req.j, k, BRANCH_DIAGONALIZED, budget, ell,
            x=x, y=y, ell=ell,
        )
        state.ones.add(k)
        state.frontier = ell
    state.stage += 1
    return record


@dataclass
class Transcript:
    scenario: dict
    records: list[StageRecord] = field(default_factory=list)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json()) + "\n" for r in self.records)

    def write_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.to_jsonl())

    @staticmethod
    def read_jsonl(path, scenario: dict | None = None) -> "Transcript":
        records = []
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    records.append(StageRecord.from_json(json.loads(line)))
        return Transcript(scenario or {}, records)


def run_construction(
    coded: CodedFamily,
    cert: GapCertificate,
    stages: int,
    budget: int,
    *,
    scenario: dict | None = None,
    schedule: RequirementSchedule | None = None,
) -> tuple[Transcript, ConstructionState]:
    """Run requirements 0..stages-1 in order and return the audit transcript."""
    if stages < 1:
        raise ValueError("need at least one stage")
    schedule = schedule or RequirementSchedule(cert)
    state = ConstructionState()
    transcript = Transcript(scenario or {})
    for n in range(stages):
        req = schedule.requirement(n)
        before = state.frontier
        record = run_stage(state, req, coded, cert, budget)
        if state.frontier <= before:
            raise AssertionError("frontier failed to increase")
        transcript.records.append(record)
    return transcript, state


def reconstruct_state(records: Iterable[StageRecord]) -> ConstructionState:
    """Rebuild the membership state from a transcript alone."""
    state = ConstructionState()
    for record in records:
        if record.branch == BRANCH_DIAGONALIZED:
            state.ones.add(record.k)
        state.frontier = record.m_after
        state.stage += 1
    return state


def eval_A(state: ConstructionState, coded: CodedFamily, n: int) -> int:
    """Membership bit of n in the constructed set (0/1), frontier permitting."""
    return state.block_bit(coded.targets.locate(n))


def eval_C(state: ConstructionState, coded: CodedFamily, i: int, x: int) -> int:
    """Membership bit of x in the i-th coded set: the bit of its compressed image."""
    return eval_A(state, coded, coded.h_apply(i, x))
