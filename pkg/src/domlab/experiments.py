"""Batch experiment drivers: calibrate, sample, classify, map, verify, report.

Trials are sequential and each consumes its own derived RNG stream (stream
id = 4*trial for graph bits, 4*trial+1 for H selection, 4*trial+2 for
randomized witness search), so reports are byte-identical for a given
config and master seed.  Wall-clock timings are deliberately kept out of
all persisted artifacts for the same reason.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path

from .graph import generate_gnp, to_mask
from .mapping import (
    Direction,
    MappingCertificate,
    apply_mapping,
    find_forward_witness,
    find_reverse_witness,
    local_soundness,
    verify_certificate,
)
from .moments import (
    ModelParams,
    calibrate_p,
    corollary_bounds,
    expected_N,
    expected_N2,
    expected_X,
    expected_X2,
    moment_report,
    prob_single_neighbor,
    round_ln_n,
)
from .oracle import enumerate_graph_space
from .rng import RngStream
from .solver import InstanceTag, classify_sweep, sweep_k_sets

H_FIRST_NC = "FIRST_NC"
H_RANDOM_NC = "RANDOM_NC"
K_EXPLICIT = "EXPLICIT"
K_ROUND_LN_N = "ROUND_LN_N"


@dataclass
class ExperimentConfig:
    params: ModelParams
    trials: int
    master_seed: int
    h_selection: str = H_FIRST_NC
    k_rule: str = K_EXPLICIT
    out_csv: Path | None = None
    out_summary: Path | None = None
    out_certs: Path | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.h_selection not in (H_FIRST_NC, H_RANDOM_NC):
            raise ValueError(f"unknown h_selection {self.h_selection!r}")
        if self.k_rule not in (K_EXPLICIT, K_ROUND_LN_N):
            raise ValueError(f"unknown k_rule {self.k_rule!r}")
        if self.h_size > self.params.n - self.k - 2:
            raise ValueError(
                f"H of size {self.h_size} leaves no room for S, v, w "
                f"(need <= n - k - 2 = {self.params.n - self.k - 2})"
            )

    @property
    def k(self) -> int:
        if self.k_rule == K_ROUND_LN_N:
            return round_ln_n(self.params.n)
        return self.params.k

    @property
    def h_size(self) -> int:
        return math.ceil(self.params.n**self.params.c)


def _graph_stream(seed: int, trial: int) -> RngStream:
    return RngStream(seed, 4 * trial)


def _h_stream(seed: int, trial: int) -> RngStream:
    return RngStream(seed, 4 * trial + 1)


def _mean_se(values: list[float]) -> tuple[float, float | None]:
    t = len(values)
    mean = math.fsum(values) / t
    if t < 2:
        return mean, None
    var = math.fsum((x - mean) ** 2 for x in values) / (t - 1)
    return mean, math.sqrt(var / t)


def _binom_se(phat: float, t: int) -> float | None:
    if t < 2:
        return None
    return math.sqrt(phat * (1.0 - phat) / t)


def _write_text(path: Path | None, text: str) -> None:
    if path is not None:
        Path(path).write_text(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# sandwich experiment: empirical Pr(X>0) against the two-sided moment bounds

SANDWICH_CSV_HEADER = ["trial", "graph_stream", "x_count", "near_count"]


@dataclass
class SandwichReport:
    n: int
    k: int
    delta: float
    p_star: float
    trials: int
    mean_x: float
    se_x: float | None
    mean_n: float
    se_n: float | None
    pr_x_pos: float
    pr_unique: float
    se_pr: float | None
    expected_x: float
    expected_n: float
    pz_lower: float
    markov_upper: float
    unique_lower: float
    degenerate: bool
    mean_x_ok: bool | None
    mean_n_ok: bool | None
    pr_ok: bool | None
    trial_rows: list[list] = field(repr=False, default_factory=list)

    def passed(self) -> bool:
        checks = (self.mean_x_ok, self.mean_n_ok, self.pr_ok)
        return all(c is not False for c in checks)

    def summary_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "trial_rows"}
        d["passed"] = self.passed()
        return d


def run_sandwich_experiment(config: ExperimentConfig) -> SandwichReport:
    """Sample calibrated graphs and confront Pr(X>0), E[X], E[N] with theory.

    Statistical checks use 4-standard-error bands; with a single trial the
    bands are degenerate and no check is asserted.
    """
    base = config.params
    k = config.k
    p_star = calibrate_p(base.n, k, base.delta)
    params = ModelParams(n=base.n, k=k, p=p_star, delta=base.delta, c=base.c)
    rep = moment_report(params)

    xs: list[float] = []
    ns: list[float] = []
    rows: list[list] = []
    for t in range(config.trials):
        g = generate_gnp(params.n, p_star, _graph_stream(config.master_seed, t))
        counts = sweep_k_sets(g, k).counts
        xs.append(float(counts.dominating))
        ns.append(float(counts.near))
        rows.append([t, 4 * t, counts.dominating, counts.near])

    trials = config.trials
    mean_x, se_x = _mean_se(xs)
    mean_n, se_n = _mean_se(ns)
    pr_pos = sum(1 for x in xs if x > 0) / trials
    pr_unique = sum(1 for x in xs if x == 1) / trials
    se_pr = _binom_se(pr_pos, trials)

    expected_x = rep.e_x.to_float()
    expected_n = rep.e_n.to_float()
    pz_lower = rep.pz_lower.to_float()
    _, _, markov_upper = corollary_bounds(base.delta)

    degenerate = se_x is None or se_pr is None
    if degenerate:
        mean_x_ok = mean_n_ok = pr_ok = None
    else:
        mean_x_ok = abs(mean_x - expected_x) <= 4.0 * se_x
        mean_n_ok = abs(mean_n - expected_n) <= 4.0 * se_n
        pr_ok = pz_lower - 4.0 * se_pr <= pr_pos <= markov_upper + 4.0 * se_pr

    report = SandwichReport(
        n=params.n,
        k=k,
        delta=base.delta,
        p_star=p_star,
        trials=trials,
        mean_x=mean_x,
        se_x=se_x,
        mean_n=mean_n,
        se_n=se_n,
        pr_x_pos=pr_pos,
        pr_unique=pr_unique,
        se_pr=se_pr,
        expected_x=expected_x,
        expected_n=expected_n,
        pz_lower=pz_lower,
        markov_upper=markov_upper,
        unique_lower=corollary_bounds(base.delta)[0],
        degenerate=degenerate,
        mean_x_ok=mean_x_ok,
        mean_n_ok=mean_n_ok,
        pr_ok=pr_ok,
        trial_rows=rows,
    )
    _write_text(config.out_csv, _csv_text(SANDWICH_CSV_HEADER, rows))
    _write_text(config.out_summary, _json_text(report.summary_dict()))
    return report


# ---------------------------------------------------------------------------
# irreducibility experiment: classify, swap, verify, tally certificate flags

IRRED_CSV_HEADER = [
    "trial",
    "graph_stream",
    "class",
    "x_count",
    "near_count",
    "s_outside_h",
    "witness_found",
    "direction",
    "degree_preserved",
    "h_unchanged",
    "flipped",
    "local_sound",
    "hash_before",
    "hash_after",
]


@dataclass
class MappingTally:
    eligible: int = 0        # instances of the right class with S (and v) outside H
    witness_found: int = 0
    applied: int = 0
    degree_ok: int = 0
    h_ok: int = 0
    flipped: int = 0
    local_ok: int = 0

    def rate(self, count: int) -> float | None:
        return count / self.applied if self.applied else None

    def flipped_ci(self) -> tuple[float, float] | None:
        """95% normal-approximation CI for the flipped fraction."""
        if not self.applied:
            return None
        phat = self.flipped / self.applied
        half = 1.96 * math.sqrt(max(phat * (1.0 - phat), 0.0) / self.applied)
        return (max(phat - half, 0.0), min(phat + half, 1.0))

    def summary_dict(self) -> dict:
        return {
            "eligible": self.eligible,
            "witness_found": self.witness_found,
            "applied": self.applied,
            "degree_ok": self.degree_ok,
            "h_ok": self.h_ok,
            "flipped": self.flipped,
            "local_ok": self.local_ok,
            "witness_rate": self.witness_found / self.eligible if self.eligible else None,
            "flipped_rate": self.rate(self.flipped),
            "flipped_ci95": self.flipped_ci(),
        }


@dataclass
class TrialRecord:
    trial: int
    graph_stream: int
    tag: InstanceTag
    x_count: int
    near_count: int
    s_outside_h: bool | None = None
    witness_found: bool | None = None
    certificate: MappingCertificate | None = None
    local_sound: bool | None = None
    wall_time_s: float = 0.0  # in-memory only; never serialized

    def csv_row(self) -> list:
        cert = self.certificate
        return [
            self.trial,
            self.graph_stream,
            self.tag.value,
            self.x_count,
            self.near_count,
            self.s_outside_h,
            self.witness_found,
            cert.direction.value if cert else None,
            cert.degree_preserved if cert else None,
            cert.h_unchanged if cert else None,
            cert.flipped if cert else None,
            self.local_sound,
            cert.hash_before if cert else None,
            cert.hash_after if cert else None,
        ]


@dataclass
class IrreducibilityReport:
    n: int
    k: int
    delta: float
    c: float
    p_star: float
    h_size: int
    trials: int
    class_counts: dict
    s_outside_rate: float | None
    forward: MappingTally
    reverse: MappingTally
    predicted_single_neighbor: float
    predicted_witness_exists: float
    records: list[TrialRecord] = field(repr=False, default_factory=list)

    def all_certificates_sound(self) -> bool:
        """The exact-at-any-n guarantees: degrees, H, and local soundness."""
        for tally in (self.forward, self.reverse):
            if tally.applied and not (
                tally.degree_ok == tally.h_ok == tally.local_ok == tally.applied
            ):
                return False
        return True

    def summary_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "delta": self.delta,
            "c": self.c,
            "p_star": self.p_star,
            "h_size": self.h_size,
            "trials": self.trials,
            "class_counts": dict(sorted(self.class_counts.items())),
            "s_outside_rate": self.s_outside_rate,
            "forward": self.forward.summary_dict(),
            "reverse": self.reverse.summary_dict(),
            "predicted_single_neighbor": self.predicted_single_neighbor,
            "predicted_witness_exists": self.predicted_witness_exists,
            "all_certificates_sound": self.all_certificates_sound(),
        }


def _select_h(config: ExperimentConfig, trial: int) -> int:
    """H vertex mask for one trial: first ceil(n^c) vertices, or a random
    ceil(n^c)-subset when h_selection is RANDOM_NC."""
    size = config.h_size
    if config.h_selection == H_FIRST_NC:
        return (1 << size) - 1
    rng = _h_stream(config.master_seed, trial)
    verts = rng.shuffled(list(range(config.params.n)))[:size]
    return to_mask(verts)


def run_irreducibility_experiment(config: ExperimentConfig) -> IrreducibilityReport:
    """Per trial: classify; on UNIQUE_DOM forward-map, on NO_DOM_WITH_NEAR
    reverse-map (when the relevant vertices avoid H); verify certificates."""
    base = config.params
    k = config.k
    p_star = calibrate_p(base.n, k, base.delta)
    params = ModelParams(n=base.n, k=k, p=p_star, delta=base.delta, c=base.c)
    single = prob_single_neighbor(params)

    class_counts: dict[str, int] = {tag.value: 0 for tag in InstanceTag}
    forward = MappingTally()
    reverse = MappingTally()
    records: list[TrialRecord] = []
    s_outside_hits = 0
    s_outside_total = 0

    for t in range(config.trials):
        g = generate_gnp(params.n, p_star, _graph_stream(config.master_seed, t))
        h_bits = _select_h(config, t)
        sweep = sweep_k_sets(g, k)
        cls = classify_sweep(sweep)
        class_counts[cls.tag.value] += 1
        rec = TrialRecord(
            trial=t,
            graph_stream=4 * t,
            tag=cls.tag,
            x_count=sweep.counts.dominating,
            near_count=sweep.counts.near,
        )

        if cls.tag is InstanceTag.UNIQUE_DOM:
            s = cls.witness_set
            rec.s_outside_h = (s & h_bits) == 0
            s_outside_total += 1
            if rec.s_outside_h:
                s_outside_hits += 1
                forward.eligible += 1
                quad = find_forward_witness(g, s, h_bits)
                rec.witness_found = quad is not None
                if quad is not None:
                    forward.witness_found += 1
                    g2, cert = apply_mapping(
                        g, quad, Direction.FORWARD, s_bits=s, h_bits=h_bits
                    )
                    cert = verify_certificate(g, g2, cert, k)
                    rec.certificate = cert
                    rec.local_sound = local_soundness(g2, cert)
                    _tally(forward, cert, rec.local_sound)
        elif cls.tag is InstanceTag.NO_DOM_WITH_NEAR:
            s, v = cls.witness_set, cls.witness_vertex
            rec.s_outside_h = ((s | 1 << v) & h_bits) == 0
            s_outside_total += 1
            if rec.s_outside_h:
                s_outside_hits += 1
                reverse.eligible += 1
                wit = find_reverse_witness(g, s, v, h_bits)
                rec.witness_found = wit is not None
                if wit is not None:
                    reverse.witness_found += 1
                    u, z, w = wit
                    g2, cert = apply_mapping(
                        g, (u, v, z, w), Direction.REVERSE, s_bits=s, h_bits=h_bits
                    )
                    cert = verify_certificate(g, g2, cert, k)
                    rec.certificate = cert
                    rec.local_sound = local_soundness(g2, cert)
                    _tally(reverse, cert, rec.local_sound)
        records.append(rec)

    report = IrreducibilityReport(
        n=params.n,
        k=k,
        delta=base.delta,
        c=base.c,
        p_star=p_star,
        h_size=config.h_size,
        trials=config.trials,
        class_counts=class_counts,
        s_outside_rate=s_outside_hits / s_outside_total if s_outside_total else None,
        forward=forward,
        reverse=reverse,
        predicted_single_neighbor=single.single_given_dominated,
        predicted_witness_exists=1.0 - single.no_witness,
        records=records,
    )
    _write_text(
        config.out_csv, _csv_text(IRRED_CSV_HEADER, [r.csv_row() for r in records])
    )
    _write_text(config.out_summary, _json_text(report.summary_dict()))
    if config.out_certs is not None:
        lines = [
            json.dumps(r.certificate.to_record(), sort_keys=True)
            for r in records
            if r.certificate is not None
        ]
        Path(config.out_certs).write_text("\n".join(lines) + ("\n" if lines else ""))
    return report


def _tally(tally: MappingTally, cert: MappingCertificate, local_ok: bool) -> None:
    tally.applied += 1
    tally.degree_ok += bool(cert.degree_preserved)
    tally.h_ok += bool(cert.h_unchanged)
    tally.flipped += bool(cert.flipped)
    tally.local_ok += bool(local_ok)


# ---------------------------------------------------------------------------
# formula audit: closed forms against the exhaustive graph-space oracle

AUDIT_PS = (0.2, 0.4, 0.5, 0.7)


@dataclass(frozen=True)
class AuditRow:
    n: int
    k: int
    p: float
    err_x: float
    err_x2: float
    err_n: float
    err_n2: float

    def max_err(self) -> float:
        return max(self.err_x, self.err_x2, self.err_n, self.err_n2)


@dataclass
class AuditReport:
    rows: list[AuditRow]
    max_err: float

    def summary_dict(self) -> dict:
        return {
            "points": len(self.rows),
            "max_err": self.max_err,
            "rows": [row.__dict__ for row in self.rows],
        }


def _rel(formula: float, oracle: float) -> float:
    if oracle == 0.0:
        return 0.0 if formula == 0.0 else math.inf
    return abs(formula - oracle) / abs(oracle)


def audit_point(n: int, k: int, p: float) -> AuditRow:
    """Relative errors of the four closed-form expectations at one point."""
    rep = enumerate_graph_space(n, k, p)
    params = ModelParams(n=n, k=k, p=p)
    return AuditRow(
        n=n,
        k=k,
        p=p,
        err_x=_rel(expected_X(params).to_float(), rep.e_x),
        err_x2=_rel(expected_X2(params).to_float(), rep.e_x2),
        err_n=_rel(expected_N(params).to_float(), rep.e_n),
        err_n2=_rel(expected_N2(params).to_float(), rep.e_n2),
    )


def run_formula_audit(
    n_max: int = 7,
    ks: tuple[int, ...] | None = None,
    ps: tuple[float, ...] = AUDIT_PS,
) -> AuditReport:
    """Grid audit: all k for each n <= min(n_max, 6), every p in `ps`; when
    n_max >= 7 and ks is None, one n=7 spot check at (k=3, p=0.4)."""
    rows: list[AuditRow] = []
    for n in range(1, min(n_max, 6) + 1):
        for k in ks if ks is not None else range(1, n + 1):
            if k > n:
                continue
            for p in ps:
                rows.append(audit_point(n, k, p))
    if n_max >= 7:
        if ks is None:
            rows.append(audit_point(7, 3, 0.4))
        else:
            for k in ks:
                if k <= 7:
                    for p in ps:
                        rows.append(audit_point(7, k, p))
    return AuditReport(rows=rows, max_err=max(r.max_err() for r in rows))
