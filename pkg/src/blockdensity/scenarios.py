"""Scenario configs and the end-to-end pipeline.

A scenario names a profile family, runs the stage construction far enough to
cover its program-index window, and emits a certificate report. Certificates
are computed from the transcript-reconstructed state, so every verdict
re-derives from the written files alone. Reports carry no timestamps; the same
config produces byte-identical outputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .construction import (
    BRANCH_DIAGONALIZED,
    RequirementSchedule,
    Transcript,
    eval_A,
    reconstruct_state,
    run_construction,
    window_stage_count,
)
from .machine import identity_index
from .maps import CodedFamily
from .numerics import enum_rationals_12, rat_parse, rat_str
from .posets import FinitePoset, PaddedFiniteOrder, UniversalPoset, embed_finite
from .profiles import (
    combined_family,
    constant_family,
    oscillating_family,
    poset_family,
)
from .verify import (
    FAIL,
    INCOMPLETE,
    PASS,
    Certificate,
    check_bfo_equivalence,
    check_defeat_bundle,
    check_diag_witness,
    check_embedding_matrix,
    check_positive_reduction,
)

KINDS = ("rationals", "antichain", "combined", "poset", "universal")

DEFAULT_ALPHA = Fraction(5, 4)
DEFAULT_BETA = Fraction(7, 4)
DEFAULT_BUDGET = 10**5
DEFAULT_E = 50
DEFAULT_KMAX = 12


@dataclass
class ScenarioConfig:
    kind: str
    count: int = 4
    alpha: Fraction = DEFAULT_ALPHA
    beta: Fraction = DEFAULT_BETA
    poset_rows: list[str] = field(default_factory=list)
    stages: int | None = None
    budget: int = DEFAULT_BUDGET
    e_bound: int = DEFAULT_E
    k_max: int = DEFAULT_KMAX
    element_scan: int = 20_000

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ValueError("kind must be one of %s, got %r" % (", ".join(KINDS), self.kind))
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not Fraction(1) < self.alpha < self.beta < Fraction(2):
            raise ValueError("need 1 < alpha < beta < 2")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.e_bound < 1:
            raise ValueError("E (program-index window) must be at least 1")
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if self.stages is not None and self.stages < 1:
            raise ValueError("stages must be at least 1 when given")
        if self.kind == "poset":
            if not self.poset_rows:
                raise ValueError("poset scenario needs a relation matrix")
            FinitePoset.from_rows(self.poset_rows)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "count": self.count,
            "alpha": rat_str(self.alpha),
            "beta": rat_str(self.beta),
            "poset": list(self.poset_rows),
            "stages": self.stages,
            "budget": self.budget,
            "E": self.e_bound,
            "k_max": self.k_max,
            "element_scan": self.element_scan,
        }

    @staticmethod
    def from_json(obj: dict) -> "ScenarioConfig":
        config = ScenarioConfig(
            kind=obj.get("kind", ""),
            count=int(obj.get("count", 4)),
            alpha=rat_parse(obj.get("alpha", "5/4")),
            beta=rat_parse(obj.get("beta", "7/4")),
            poset_rows=list(obj.get("poset", [])),
            stages=None if obj.get("stages") is None else int(obj["stages"]),
            budget=int(obj.get("budget", DEFAULT_BUDGET)),
            e_bound=int(obj.get("E", DEFAULT_E)),
            k_max=int(obj.get("k_max", DEFAULT_KMAX)),
            element_scan=int(obj.get("element_scan", 20_000)),
        )
        config.validate()
        return config


def build_family(config: ScenarioConfig):
    """The profile family and gap certificate a config names."""
    if config.kind == "rationals":
        return constant_family(config.count)
    if config.kind == "antichain":
        return oscillating_family(config.alpha, config.beta)
    if config.kind == "combined":
        return combined_family(config.count, config.alpha, config.beta)
    if config.kind == "poset":
        poset = FinitePoset.from_rows(config.poset_rows)
        return poset_family(PaddedFiniteOrder(poset), config.alpha, config.beta)
    raise ValueError("scenario kind %r runs no construction" % config.kind)


def _scheduled_pairs(config: ScenarioConfig, cert) -> list[tuple[int, int]]:
    """Scheduled pairs the scenario certifies defeats for."""
    if config.kind == "rationals":
        span = range(config.count)
    elif config.kind == "antichain":
        span = range(config.count)
    elif config.kind == "combined":
        span = range(config.count)
    elif config.kind == "poset":
        span = range(len(config.poset_rows))
    else:
        return []
    return [(a, b) for a in span for b in span if a != b and cert.in_D(a, b)]


def required_stages(config: ScenarioConfig, cert, schedule: RequirementSchedule) -> int:
    pairs = _scheduled_pairs(config, cert)
    needed = window_stage_count(schedule, pairs, config.e_bound) if pairs else 1
    return max(config.stages or 0, needed)


def _identity_device_certificate(config, transcript, state) -> Certificate:
    """Every identity-index stage must diagonalize, splitting the prefix."""
    e_id = identity_index()
    cert = Certificate("IdentityDevice", {"e_id": e_id})
    records = [r for r in transcript.records if r.e == e_id]
    if not records:
        cert.incomplete("identity_scheduled", {"hint": "run more stages"})
        return cert
    bad = [r.stage for r in records if r.branch != BRANCH_DIAGONALIZED]
    if bad:
        cert.fail("identity_always_diagonalizes", {"stages": bad})
    else:
        cert.ok("identity_always_diagonalizes", {"count": len(records)})
    ones = len(state.ones)
    zeros = state.frontier + 1 - ones
    if ones >= 1 and zeros >= 1:
        cert.ok("prefix_split", {"one_blocks": ones, "zero_blocks": zeros})
    else:
        cert.fail("prefix_split", {"one_blocks": ones, "zero_blocks": zeros})
    return cert


def _collapse_certificate(config, coded, state) -> Certificate:
    """Block collapse is a self-reduction of the constructed prefix."""
    k_hi = min(state.frontier, 9)
    cert = Certificate("CollapseAutoreduction", {"k_hi": k_hi})
    if k_hi < 2:
        cert.incomplete("frontier", {"frontier": state.frontier})
        return cert
    limit = coded.targets.endpoint(k_hi + 1)
    for x in range(limit):
        if eval_A(state, coded, coded.collapse(x)) != eval_A(state, coded, x):
            cert.fail("self_reduction", {"x": str(x)})
            return cert
    cert.ok("self_reduction", {"scanned": limit})
    moved = []
    for k in range(2, k_hi + 1):
        lo, hi = coded.targets.block(k)
        if any(coded.collapse(x) != x for x in (lo + 1, hi - 1)):
            moved.append(k)
    if len(moved) == k_hi - 1:
        cert.ok("not_eventually_identity", {"blocks": moved})
    else:
        cert.fail("not_eventually_identity", {"blocks": moved})
    return cert


def _construction_certificates(config, coded, gap_cert, schedule, transcript):
    """The certificate suite for one run, derived from the transcript alone."""
    state = reconstruct_state(transcript.records)
    certs: list[Certificate] = []

    if config.kind == "poset":
        poset = FinitePoset.from_rows(config.poset_rows)
        certs.append(
            check_embedding_matrix(
                poset,
                alpha=config.alpha,
                beta=config.beta,
                e_bound=config.e_bound,
                stages=len(transcript.records),
                budget=config.budget,
                k_max=config.k_max,
                element_scan=config.element_scan,
                run=(coded, gap_cert, schedule, transcript, state),
            )
        )
    else:
        if config.kind == "rationals":
            indices = list(range(config.count))
            chain_pairs = [
                (a, b)
                for a in indices
                for b in indices
                if a != b and enum_rationals_12(a) < enum_rationals_12(b)
            ]
        elif config.kind == "combined":
            indices = list(range(config.count))
            evens = [i for i in indices if i % 2 == 0]
            chain_pairs = [
                (a, b)
                for a in evens
                for b in evens
                if a != b and enum_rationals_12(a // 2) < enum_rationals_12(b // 2)
            ]
        else:
            indices = list(range(config.count))
            chain_pairs = []

        for a, b in chain_pairs:
            limit = coded.source(a).endpoint(config.k_max)
            certs.append(
                check_positive_reduction(
                    coded, state, a, b, limit, element_scan=config.element_scan
                )
            )
        for a, b in _scheduled_pairs(config, gap_cert):
            certs.append(
                check_defeat_bundle(
                    coded, state, transcript, schedule, a, b, config.e_bound
                )
            )
        for i in indices:
            limit = coded.targets.endpoint(config.k_max)
            certs.append(
                check_bfo_equivalence(
                    coded, state, i, limit, element_scan=config.element_scan
                )
            )
        if config.kind == "combined":
            certs.append(_identity_device_certificate(config, transcript, state))
            certs.append(_collapse_certificate(config, coded, state))

    for record in transcript.records:
        if record.branch == BRANCH_DIAGONALIZED:
            certs.append(check_diag_witness(coded, state, record))
    return certs


def _universal_certificates(config: ScenarioConfig) -> list[Certificate]:
    """Embed sample posets into the staged generic order and compare matrices."""
    samples: list[FinitePoset] = []
    if config.poset_rows:
        samples.append(FinitePoset.from_rows(config.poset_rows))
    samples.extend(
        FinitePoset.from_rows(rows)
        for rows in (
            ["1"],
            ["11", "01"],
            ["10", "01"],
            ["111", "011", "001"],
            ["101", "011", "001"],
            ["1000", "0100", "0010", "0001"],
        )
    )
    universe = UniversalPoset()
    certs = []
    for poset in samples:
        cert = Certificate("UniversalEmbedding", {"rows": poset.rows()})
        try:
            images = embed_finite(poset, universe)
        except AssertionError as exc:
            cert.fail("embed", {"reason": str(exc)})
            certs.append(cert)
            continue
        induced = [
            [universe.leq(images[a], images[b]) for b in range(poset.n)]
            for a in range(poset.n)
        ]
        if induced == [list(row) for row in poset.rel]:
            cert.ok("induced_matrix_equal", {"images": images})
        else:
            cert.fail("induced_matrix_equal", {"images": images})
        certs.append(cert)
    return certs


def report_exit_code(certs: list[Certificate]) -> int:
    verdicts = {c.verdict for c in certs}
    if FAIL in verdicts:
        return 1
    if INCOMPLETE in verdicts:
        return 2
    return 0


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    certificates: list[Certificate]
    transcript: Transcript | None
    exit_code: int


def run_scenario(config: ScenarioConfig, outdir: str | Path | None = None) -> ScenarioResult:
    """Run the full pipeline; optionally write config, transcript and report."""
    config.validate()
    if config.kind == "universal":
        certs = _universal_certificates(config)
        transcript = None
    else:
        family, gap_cert = build_family(config)
        coded = CodedFamily(family)
        schedule = RequirementSchedule(gap_cert)
        stages = required_stages(config, gap_cert, schedule)
        transcript, _ = run_construction(
            coded,
            gap_cert,
            stages,
            config.budget,
            scenario=config.to_json(),
            schedule=schedule,
        )
        certs = _construction_certificates(config, coded, gap_cert, schedule, transcript)
    code = report_exit_code(certs)
    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "config.json").write_text(
            json.dumps(config.to_json(), indent=2) + "\n", encoding="utf-8"
        )
        if transcript is not None:
            transcript.write_jsonl(outdir / "transcript.jsonl")
        write_report(certs, outdir / "report.jsonl")
    return ScenarioResult(config, certs, transcript, code)


def write_report(certs: list[Certificate], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for cert in certs:
            handle.write(json.dumps(cert.to_json()) + "\n")


def verify_transcript(config: ScenarioConfig, transcript_path: str | Path):
    """Replay a written transcript and recompute its certificate suite."""
    config.validate()
    if config.kind == "universal":
        raise ValueError("universal scenarios write no transcript")
    family, gap_cert = build_family(config)
    coded = CodedFamily(family)
    schedule = RequirementSchedule(gap_cert)
    transcript = Transcript.read_jsonl(transcript_path, config.to_json())
    replay_cert = Certificate("TranscriptReplay", {"stages": len(transcript.records)})
    replay, _ = run_construction(
        coded, gap_cert, max(1, len(transcript.records)), config.budget,
        scenario=config.to_json(), schedule=schedule,
    )
    if replay.to_jsonl() == transcript.to_jsonl():
        replay_cert.ok("bit_exact")
    else:
        replay_cert.fail("bit_exact")
    certs = [replay_cert]
    certs.extend(
        _construction_certificates(config, coded, gap_cert, schedule, transcript)
    )
    return certs
