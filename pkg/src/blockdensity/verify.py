"""Certificate checking over transcripts and constructed prefixes.

Positive claims (reductions, equivalences) are certified exactly: per-block
integer identities cover the whole requested range, and an element-by-element
scan additionally covers a bounded prefix. Negative claims are explicitly
budget-qualified: a defeat bundle says that no scheduled program below the
index bound is a total injective reduction on the constructed prefix within
the step budget, never more. INCOMPLETE names what is missing (stages or
records); FAIL means a check was run and refuted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .construction import (
    BRANCH_DIAGONALIZED,
    BRANCH_NON_INJECTIVE,
    BRANCH_NON_TOTAL,
    ConstructionState,
    FrontierUndefined,
    RequirementSchedule,
    StageRecord,
    Transcript,
    eval_A,
    eval_C,
    run_construction,
    window_stage_count,
)
from .machine import Halted, OutOfBudget, decode, run_program
from .maps import CodedFamily
from .posets import FinitePoset, PaddedFiniteOrder
from .profiles import poset_family

PASS = "PASS"
FAIL = "FAIL"
INCOMPLETE = "INCOMPLETE"


@dataclass
class Certificate:
    kind: str
    subject: dict
    verdict: str = PASS
    checks: list[dict] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def ok(self, name: str, detail: dict | None = None) -> None:
        self.checks.append({"check": name, "ok": True, **(detail or {})})

    def fail(self, name: str, detail: dict | None = None) -> None:
        self.checks.append({"check": name, "ok": False, **(detail or {})})
        self.verdict = FAIL

    def incomplete(self, name: str, detail: dict | None = None) -> None:
        self.checks.append({"check": name, "ok": False, **(detail or {})})
        if self.verdict != FAIL:
            self.verdict = INCOMPLETE

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "subject": self.subject,
            "checks": self.checks,
            "diagnostics": self.diagnostics,
        }


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def check_positive_reduction(
    coded: CodedFamily,
    state: ConstructionState,
    i: int,
    j: int,
    n_limit: int,
    *,
    element_scan: int = 100_000,
) -> Certificate:
    """Certify the blockwise translation as a one-one reduction on [0, n_limit).

    Blockwise integer identities cover the full range exactly; the first
    element_scan inputs are additionally checked one by one.
    """
    cert = Certificate(
        "PositiveReduction",
        {"i": i, "j": j, "n_limit": str(n_limit), "element_scan": element_scan},
    )
    if n_limit <= 0:
        cert.fail("range", {"reason": "empty range"})
        return cert
    if i == j:
        cert.ok("identity_pair")
        return cert
    src_i = coded.source(i)
    src_j = coded.source(j)
    k_hi, _ = src_i.locate(n_limit - 1)
    if k_hi > state.frontier:
        cert.incomplete(
            "frontier",
            {"needed_block": k_hi, "frontier": state.frontier,
             "hint": "run stages until the frontier reaches the needed block"},
        )
        return cert
    for k in range(k_hi + 1):
        len_i = src_i.length(k)
        len_j = src_j.length(k)
        if len_i > len_j:
            cert.fail(
                "pointwise_domination",
                {"k": k, "len_i": str(len_i), "len_j": str(len_j)},
            )
            return cert
        # Translation stays inside the destination block and, with the next
        # block starting strictly later, stays injective across blocks.
        if not src_j.endpoint(k) + len_i <= src_j.endpoint(k + 1):
            cert.fail("image_containment", {"k": k})
            return cert
        bit = state.block_bit(k)
        lo, hi = src_i.block(k)
        for x in (lo, hi - 1):
            fx = coded.positive_reduction(i, j, x)
            if eval_C(state, coded, i, x) != bit or eval_C(state, coded, j, fx) != bit:
                cert.fail("block_bit_endpoints", {"k": k, "x": str(x)})
                return cert
    cert.ok("blockwise_exact", {"blocks": k_hi + 1})

    prev = -1
    for x in range(min(n_limit, element_scan)):
        fx = coded.positive_reduction(i, j, x)
        if fx <= prev:
            cert.fail("element_injectivity", {"x": str(x)})
            return cert
        prev = fx
        if eval_C(state, coded, i, x) != eval_C(state, coded, j, fx):
            cert.fail("element_commutes", {"x": str(x)})
            return cert
    cert.ok("element_scan", {"scanned": min(n_limit, element_scan)})
    return cert


def check_bfo_equivalence(
    coded: CodedFamily,
    state: ConstructionState,
    i: int,
    n_limit: int,
    *,
    element_scan: int = 100_000,
) -> Certificate:
    """Certify the two-way coupling between the base set and coded set i.

    Fibers of the compression map stay within size two, the least-preimage
    map is injective, and base membership equals coded membership of the
    least preimage, over [0, n_limit).
    """
    cert = Certificate(
        "BfoEquivalence",
        {"i": i, "n_limit": str(n_limit), "element_scan": element_scan},
    )
    if n_limit <= 0:
        cert.fail("range", {"reason": "empty range"})
        return cert
    src = coded.source(i)
    k_hi = coded.targets.locate(n_limit - 1)
    if k_hi > state.frontier:
        cert.incomplete(
            "frontier",
            {"needed_block": k_hi, "frontier": state.frontier,
             "hint": "run stages until the frontier reaches the needed block"},
        )
        return cert
    prev_preimage = -1
    for k in range(k_hi + 1):
        m = coded.targets.size(k)
        ln = src.length(k)
        if not m <= ln < 2 * m:
            cert.fail("length_band", {"k": k, "len": str(ln), "size": str(m)})
            return cert
        a_k = coded.targets.endpoint(k)
        b_k = src.endpoint(k)
        first = coded.least_preimage(i, a_k)
        last = coded.least_preimage(i, a_k + m - 1)
        if first != b_k or not b_k <= last < src.endpoint(k + 1):
            cert.fail("preimage_containment", {"k": k})
            return cert
        if first <= prev_preimage:
            cert.fail("preimage_monotone_boundary", {"k": k})
            return cert
        prev_preimage = last
        # The fiber over target offset q is an integer interval of length
        # ln/m, which sits in [1, 2) by the length band; sampled offsets guard
        # the arithmetic.
        step = max(1, m // 7)
        offsets = sorted({0, m - 1, *range(0, m, step)})
        for q in offsets:
            y = a_k + q
            fiber = coded.h_fibers(i, y)
            if not 1 <= len(fiber) <= 2:
                cert.fail("fiber_bound_sampled", {"k": k, "y": str(y)})
                return cert
            if any(coded.h_apply(i, x) != y for x in fiber):
                cert.fail("fiber_membership", {"k": k, "y": str(y)})
                return cert
    cert.ok("blockwise_exact", {"blocks": k_hi + 1})

    prev = -1
    for y in range(min(n_limit, element_scan)):
        fiber = coded.h_fibers(i, y)
        if not 1 <= len(fiber) <= 2:
            cert.fail("element_fiber_bound", {"y": str(y)})
            return cert
        r = coded.least_preimage(i, y)
        if r != fiber[0] or r <= prev:
            cert.fail("element_preimage_injective", {"y": str(y)})
            return cert
        prev = r
        if coded.h_apply(i, r) != y:
            cert.fail("element_preimage_section", {"y": str(y)})
            return cert
        if eval_A(state, coded, y) != eval_C(state, coded, i, r):
            cert.fail("element_base_equals_coded", {"y": str(y)})
            return cert
    cert.ok("element_scan", {"scanned": min(n_limit, element_scan)})
    return cert


def check_diag_witness(
    coded: CodedFamily, state: ConstructionState, record: StageRecord
) -> Certificate:
    """Recheck one diagonalization record from scratch."""
    if record.branch != BRANCH_DIAGONALIZED:
        raise ValueError("diagonal witness check needs a diagonalized record")
    cert = Certificate(
        "DiagWitness",
        {"stage": record.stage, "e": record.e, "i": record.i, "j": record.j},
    )
    src_i = coded.source(record.i)
    src_j = coded.source(record.j)
    k, _ = src_i.locate(record.x)
    if k != record.k:
        cert.fail("witness_block", {"expected": record.k, "located": k})
        return cert
    outcome = run_program(decode(record.e), record.x, record.budget)
    if not isinstance(outcome, Halted) or outcome.value != record.y:
        cert.fail("rerun_value", {"x": str(record.x)})
        return cert
    cert.ok("rerun_value")
    ell, _ = src_j.locate(record.y)
    if ell != record.ell or ell <= record.k:
        cert.fail("image_block", {"expected": record.ell, "located": ell})
        return cert
    cert.ok("image_block")
    try:
        hx = coded.h_apply(record.i, record.x)
        hy = coded.h_apply(record.j, record.y)
        if coded.targets.locate(hx) != record.k or coded.targets.locate(hy) != record.ell:
            cert.fail("compressed_targets")
            return cert
        if eval_A(state, coded, hx) != 1 or eval_A(state, coded, hy) != 0:
            cert.fail("membership_split")
            return cert
    except FrontierUndefined as exc:
        cert.incomplete("frontier", {"needed_block": exc.block, "frontier": exc.frontier})
        return cert
    cert.ok("membership_split", {"value_at_witness": 1, "value_at_image": 0})
    return cert


def _check_defeat_record(
    coded: CodedFamily, state: ConstructionState, record: StageRecord
) -> tuple[bool, str]:
    """Validate whichever branch a defeat record claims."""
    program = decode(record.e)
    if record.branch == BRANCH_NON_TOTAL:
        outcome = run_program(program, record.x, record.budget)
        if not isinstance(outcome, OutOfBudget):
            return False, "claimed divergence reruns to a halt"
        k, _ = coded.source(record.i).locate(record.x)
        if k != record.k:
            return False, "divergence witness outside the chosen block"
        return True, ""
    if record.branch == BRANCH_NON_INJECTIVE:
        out1 = run_program(program, record.x, record.budget)
        out2 = run_program(program, record.x2, record.budget)
        if not (isinstance(out1, Halted) and isinstance(out2, Halted)):
            return False, "collision witnesses fail to halt"
        if record.x == record.x2 or out1.value != out2.value:
            return False, "claimed collision reruns to distinct values"
        return True, ""
    if record.branch == BRANCH_DIAGONALIZED:
        sub = check_diag_witness(coded, state, record)
        return sub.verdict == PASS, "" if sub.verdict == PASS else "diagonal recheck failed"
    return False, "unknown branch"


def check_defeat_bundle(
    coded: CodedFamily,
    state: ConstructionState,
    transcript: Transcript,
    schedule: RequirementSchedule,
    i: int,
    j: int,
    e_bound: int,
) -> Certificate:
    """One defeat record per program index below the bound, each revalidated.

    The conclusion is bounded: no program with index below e_bound is a total
    injective reduction on the constructed prefix within the recorded budget.
    """
    cert = Certificate(
        "DefeatBundle",
        {"i": i, "j": j, "e_bound": e_bound},
        diagnostics={
            "claim": "no scheduled program with index below %d is a one-one "
                     "reduction on the constructed prefix within its step budget"
                     % e_bound
        },
    )
    defeated = 0
    for e in range(e_bound):
        stage = schedule.stage_of(e, i, j)
        if stage >= len(transcript.records):
            cert.incomplete(
                "record_present",
                {"e": e, "needed_stage": stage, "stages_run": len(transcript.records),
                 "hint": "run at least %d stages" % (stage + 1)},
            )
            continue
        record = transcript.records[stage]
        if (record.e, record.i, record.j) != (e, i, j):
            cert.fail("schedule_mismatch", {"stage": stage})
            continue
        valid, reason = _check_defeat_record(coded, state, record)
        if valid:
            defeated += 1
        else:
            cert.fail("defeat_record", {"e": e, "stage": stage, "reason": reason})
    if defeated == e_bound:
        cert.ok("all_defeats", {"count": defeated})
    cert.diagnostics["defeated"] = defeated
    return cert


def check_embedding_matrix(
    poset: FinitePoset,
    *,
    alpha,
    beta,
    e_bound: int,
    stages: int | None,
    budget: int,
    k_max: int = 12,
    element_scan: int = 20_000,
    run=None,
) -> Certificate:
    """Certify that reduction evidence reproduces the poset relation exactly.

    Cells with a relation get positive reduction certificates; cells without
    one get defeat bundles over the program-index window. The verdict matrix
    must equal the input relation matrix cell for cell.
    """
    n = poset.n
    cert = Certificate(
        "EmbeddingMatrix",
        {"n": n, "rows": poset.rows(), "e_bound": e_bound, "budget": budget},
    )
    if run is None:
        family, gap_cert = poset_family(PaddedFiniteOrder(poset), alpha, beta)
        coded = CodedFamily(family)
        schedule = RequirementSchedule(gap_cert)
        negative = [(a, b) for a in range(n) for b in range(n) if not poset.leq(a, b)]
        needed = window_stage_count(schedule, negative, e_bound) if negative else 1
        total = max(stages or 0, needed)
        transcript, state = run_construction(
            coded, gap_cert, total, budget, schedule=schedule
        )
    else:
        coded, gap_cert, schedule, transcript, state = run
        negative = [(a, b) for a in range(n) for b in range(n) if not poset.leq(a, b)]
        needed = window_stage_count(schedule, negative, e_bound) if negative else 1
        if len(transcript.records) < needed:
            cert.incomplete(
                "stages", {"needed": needed, "run": len(transcript.records)}
            )
            return cert

    verdict_matrix: list[list[bool | None]] = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if poset.leq(a, b):
                limit = coded.source(a).endpoint(k_max)
                sub = check_positive_reduction(
                    coded, state, a, b, limit, element_scan=element_scan
                )
                verdict_matrix[a][b] = sub.verdict == PASS
                if sub.verdict != PASS:
                    cert.fail("positive_cell", {"a": a, "b": b, "verdict": sub.verdict})
            else:
                sub = check_defeat_bundle(
                    coded, state, transcript, schedule, a, b, e_bound
                )
                verdict_matrix[a][b] = not (sub.verdict == PASS)
                if sub.verdict != PASS:
                    cert.fail("negative_cell", {"a": a, "b": b, "verdict": sub.verdict})
    matches = all(
        verdict_matrix[a][b] == poset.leq(a, b) for a in range(n) for b in range(n)
    )
    if matches:
        cert.ok("matrix_equals_relation")
    else:
        cert.fail("matrix_equals_relation", {
            "matrix": [["1" if v else "0" for v in row] for row in verdict_matrix]
        })
    cert.diagnostics["stages_run"] = len(transcript.records)
    return cert


def check_transcript_replay(
    coded: CodedFamily,
    gap_cert,
    transcript: Transcript,
    budget: int,
) -> Certificate:
    """Re-run the schedule and demand a bit-identical transcript."""
    cert = Certificate("TranscriptReplay", {"stages": len(transcript.records)})
    replay, _ = run_construction(
        coded, gap_cert, len(transcript.records), budget
    )
    if replay.to_jsonl() == transcript.to_jsonl():
        cert.ok("bit_exact")
    else:
        for idx, (a, b) in enumerate(zip(replay.records, transcript.records)):
            if a != b:
                cert.fail("bit_exact", {"first_divergence_stage": idx})
                break
        else:
            cert.fail("bit_exact", {"reason": "record count differs"})
    return cert
