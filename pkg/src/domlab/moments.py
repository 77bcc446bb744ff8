"""Closed-form expectations for dominating-set counts in G(n,p), in log domain.

Everything here is an exact finite-n formula (no asymptotics): the expected
number of dominating k-sets E[X] and its second moment, the expected number
of near-dominating k-sets E[N] (sets leaving exactly one vertex undominated)
and its second moment via the overlap decomposition sum(i) Phi(i) * W(i),
plus calibration of the edge probability so that E[X] hits a target delta.

All evaluation uses (sign, log-magnitude) scalars: binomials via log-gamma,
1 - (1-p)^k via expm1/log1p chains, so n = 10^5 poses no under/overflow.
The exhaustive small-n graph-space oracle (oracle module) is the arbiter
for every formula implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .logreal import LogReal, format_decimal, log1mexp, log_binomial, log_sum

DEFAULT_DELTA = 0.5
DEFAULT_C = 0.5


@dataclass(frozen=True)
class ModelParams:
    """Instance of the random model: G(n,p) probed with k-sets.

    delta is the calibration target for E[X]; c the induced-subgraph size
    exponent (|H| = ceil(n^c)) used by the mapping experiments.
    """

    n: int
    k: int
    p: float
    delta: float = DEFAULT_DELTA
    c: float = DEFAULT_C

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k={self.k} outside 1..{self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0,1]")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0,1)")
        if not 0.0 < self.c < 1.0:
            raise ValueError("c must lie in (0,1)")


def round_ln_n(n: int) -> int:
    """The integer set size used when k is tied to ln n."""
    return max(1, round(math.log(n)))


def _log_q(p: float, k: int) -> float:
    """ln (1-p)^k, with the p=1 and k=0 boundaries handled exactly."""
    if k == 0:
        return 0.0
    if p >= 1.0:
        return float("-inf")
    return k * math.log1p(-p)


def _one_minus_q(p: float, k: int) -> LogReal:
    """1 - (1-p)^k as a LogReal (exact zero at p=0, exact one at p=1)."""
    return LogReal.from_log(log1mexp(_log_q(p, k)))


def _zeta_parts(p: float, k: int, i: int) -> tuple[float, float, float]:
    """(a, b, zeta) with a = 1-(1-p)^k, b = 1-(1-p)^(k-i).

    zeta = 1 - 2(1-p)^k + (1-p)^(2k-i) is the probability that a vertex
    outside both sets has a neighbor in each; the cancellation-free form
    (a - b) + a*b keeps it accurate (and exact a^2 at i=0).
    """
    a = -math.expm1(_log_q(p, k))
    b = -math.expm1(_log_q(p, k - i))
    zeta = (a - b) + a * b
    return a, b, max(zeta, 0.0)


def expected_X(params: ModelParams) -> LogReal:
    """E[X] = C(n,k) * (1-(1-p)^k)^(n-k), the mean dominating k-set count."""
    n, k = params.n, params.k
    return log_binomial(n, k) * _one_minus_q(params.p, k).pow_int(n - k)


def F_i(params: ModelParams, i: int) -> LogReal:
    """Second-moment contribution from ordered pairs of dominating k-sets
    sharing exactly i vertices; E[X^2] = sum of F_i over i = 0..k."""
    n, k, p = params.n, params.k, params.p
    if not 0 <= i <= k:
        raise ValueError(f"overlap i={i} outside 0..{k}")
    coef = log_binomial(n, i) * log_binomial(n - i, k - i) * log_binomial(n - k, k - i)
    if coef.is_zero():
        return LogReal.zero()  # void configuration: no pair has this overlap
    m = n - 2 * k + i
    _, _, zeta = _zeta_parts(p, k, i)
    base1 = _one_minus_q(p, k)
    return coef * base1.pow_int(2 * (k - i)) * LogReal.from_float(zeta).pow_int(m)


def expected_X2(params: ModelParams) -> LogReal:
    """Second moment of the dominating k-set count."""
    return log_sum([F_i(params, i) for i in range(params.k + 1)])


def expected_N(params: ModelParams) -> LogReal:
    """E[N] = C(n,k) * (n-k) * (1-p)^k * (1-(1-p)^k)^(n-k-1)."""
    n, k, p = params.n, params.k, params.p
    if k == n:
        return LogReal.zero()
    return (
        log_binomial(n, k)
        * LogReal.from_float(n - k)
        * LogReal.from_log(_log_q(p, k))
        * _one_minus_q(p, k).pow_int(n - k - 1)
    )


@dataclass(frozen=True)
class WTerms:
    """Joint near-domination probability for two k-sets with overlap i.

    mu = (1-p)^k; theta = 1-(1-p)^(k-i); varpi = (1-p)^(2k-i);
    m = n-2k+i; zeta = 1-2*mu+varpi.  p1..p4 are the four placements of the
    two undominated vertices (one per set); w = p1 + 2*p2 + p3 + p4.
    """

    i: int
    mu: float
    theta: float
    varpi: float
    m: int
    zeta: float
    p1: LogReal
    p2: LogReal
    p3: LogReal
    p4: LogReal
    w: LogReal


def w_terms(params: ModelParams, i: int) -> WTerms:
    """Case-by-case assembly of W(i); void configurations (m < 0) give w = 0."""
    n, k, p = params.n, params.k, params.p
    if not 0 <= i <= k:
        raise ValueError(f"overlap i={i} outside 0..{k}")
    lq = _log_q(p, k)
    mu = math.exp(lq)
    a, theta, zeta = _zeta_parts(p, k, i)  # a = 1 - mu
    varpi = math.exp(_log_q(p, 2 * k - i))
    m = n - 2 * k + i
    zero = LogReal.zero()
    if m < 0:
        return WTerms(i, mu, theta, varpi, m, zeta, zero, zero, zero, zero, zero)

    lr_mu = LogReal.from_log(lq)
    lr_a = LogReal.from_log(log1mexp(lq))
    lr_theta = LogReal.from_log(log1mexp(_log_q(p, k - i)))
    lr_varpi = LogReal.from_log(_log_q(p, 2 * k - i))
    lr_zeta = LogReal.from_float(zeta)
    d = k - i

    # each case: integer coefficient first; zero coefficient means no
    # placement exists and negative powers are never reached
    p1 = zero
    if d >= 1:
        p1 = (
            LogReal.from_float(d * d)
            * lr_mu.pow_int(2)
            * lr_a.pow_int(2 * d - 2)
            * lr_zeta.pow_int(m)
        )
    p2 = zero
    if d >= 1 and m >= 1:
        p2 = (
            LogReal.from_float(d * m)
            * lr_mu.pow_int(2)
            * lr_theta
            * lr_a.pow_int(2 * d - 1)
            * lr_zeta.pow_int(m - 1)
        )
    p3 = zero
    if m >= 1:
        p3 = (
            LogReal.from_float(m)
            * lr_varpi
            * lr_a.pow_int(2 * d)
            * lr_zeta.pow_int(m - 1)
        )
    p4 = zero
    if m >= 2:
        p4 = (
            LogReal.from_float(m * (m - 1))
            * (lr_mu * lr_theta).pow_int(2)
            * lr_a.pow_int(2 * d)
            * lr_zeta.pow_int(m - 2)
        )
    w = p1 + p2 + p2 + p3 + p4
    return WTerms(i, mu, theta, varpi, m, zeta, p1, p2, p3, p4, w)


def phi(params: ModelParams, i: int) -> LogReal:
    """Number of ordered k-set pairs with overlap i: C(n,i)C(n-i,k-i)C(n-k,k-i)."""
    n, k = params.n, params.k
    if not 0 <= i <= k:
        raise ValueError(f"overlap i={i} outside 0..{k}")
    if n - 2 * k + i < 0:
        return LogReal.zero()
    return log_binomial(n, i) * log_binomial(n - i, k - i) * log_binomial(n - k, k - i)


def expected_N2(params: ModelParams) -> LogReal:
    """Second moment of the near-dominating k-set count: sum of Phi(i)W(i)."""
    return log_sum([phi(params, i) * w_terms(params, i).w for i in range(params.k + 1)])


def asymptotic_epsilon(n: int) -> float:
    """ln ln n / ln n (the lowest-order correction in the seed formula)."""
    return math.log(math.log(n)) / math.log(n)


def asymptotic_p(n: int, k: int | None = None) -> float:
    """Closed-form seed probability p = 1 - (1/e)((1-eps) ln^2 n)^(1/ln n).

    Heuristic initial guess for calibrate_p when k is near ln n; `k` is
    accepted for signature symmetry but does not enter the formula.
    """
    if n < 3:
        raise ValueError("asymptotic seed needs n >= 3")
    ln_n = math.log(n)
    eps = asymptotic_epsilon(n)
    return 1.0 - (1.0 / math.e) * ((1.0 - eps) * ln_n * ln_n) ** (1.0 / ln_n)


def calibrate_p(n: int, k: int, delta: float) -> float:
    """The unique p in (0,1) with E[X](n,k,p) = delta.

    E[X] is continuous and strictly increasing in p from 0 to C(n,k), so
    bisection on the log residual converges; iterate until the residual is
    far below 1e-9 relative or the bracket reaches float resolution.
    """
    if not 1 <= k < n:
        raise ValueError(f"calibration needs 1 <= k < n, got k={k}, n={n}")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not delta < math.comb(n, k):
        raise ValueError(f"no root in (0,1): delta={delta} >= C({n},{k})")
    log_target = math.log(delta)

    def resid(p: float) -> float:
        ex = expected_X(ModelParams(n=n, k=k, p=p))
        return (ex.log_mag if ex.sign > 0 else float("-inf")) - log_target

    lo, hi = 0.0, 1.0
    try:
        seed = asymptotic_p(n)
    except ValueError:
        seed = 0.5
    if 0.0 < seed < 1.0:  # any interior point legally splits the bracket
        if resid(seed) < 0.0:
            lo = seed
        else:
            hi = seed
    best_p, best_r = hi, abs(resid(hi))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        r = resid(mid)
        if abs(r) < best_r:
            best_p, best_r = mid, abs(r)
        if best_r < 1e-13:
            break
        if r < 0.0:
            lo = mid
        else:
            hi = mid
    return best_p


class SingleNeighborProb(NamedTuple):
    """P(exactly one neighbor in S | at least one) and the probability that
    no vertex outside H and S realizes it."""

    single_given_dominated: float
    no_witness: float


def prob_single_neighbor(params: ModelParams) -> SingleNeighborProb:
    """k p (1-p)^(k-1) / (1-(1-p)^k), plus (1-ratio)^(n - ceil(n^c) - k)."""
    p, k = params.p, params.k
    if not 0.0 < p < 1.0:
        raise ValueError("conditioning event degenerate at p in {0,1}")
    ratio = k * p * (1.0 - p) ** (k - 1) / -math.expm1(_log_q(p, k))
    ratio = min(max(ratio, 0.0), 1.0)
    h_size = math.ceil(params.n**params.c)
    exponent = max(params.n - h_size - k, 0)
    return SingleNeighborProb(ratio, (1.0 - ratio) ** exponent)


def corollary_bounds(delta: float) -> tuple[float, float, float]:
    """(unique-solution lower bound, second-moment lower bound, Markov upper):
    delta(1-delta)/(1+delta), delta/(delta+1), delta."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0,1)")
    return delta * (1.0 - delta) / (1.0 + delta), delta / (delta + 1.0), delta


@dataclass(frozen=True)
class MomentReport:
    """All closed-form quantities for one parameter point."""

    params: ModelParams
    e_x: LogReal
    e_x2: LogReal
    e_n: LogReal
    e_n2: LogReal
    pz_lower: LogReal      # E[X]^2 / E[X^2]
    markov_upper: LogReal  # E[X]
    unique_lower: LogReal  # delta(1-delta)/(1+delta)
    ratio_n: LogReal | None  # E[N^2] / E[N]^2, None when E[N] = 0


def moment_report(params: ModelParams) -> MomentReport:
    e_x = expected_X(params)
    e_x2 = expected_X2(params)
    e_n = expected_N(params)
    e_n2 = expected_N2(params)
    pz = e_x * e_x / e_x2 if not e_x2.is_zero() else LogReal.zero()
    ratio_n = e_n2 / (e_n * e_n) if not e_n.is_zero() else None
    return MomentReport(
        params=params,
        e_x=e_x,
        e_x2=e_x2,
        e_n=e_n,
        e_n2=e_n2,
        pz_lower=pz,
        markov_upper=e_x,
        unique_lower=LogReal.from_float(corollary_bounds(params.delta)[0]),
        ratio_n=ratio_n,
    )


_REPORT_FIELDS = (
    "e_x",
    "e_x2",
    "e_n",
    "e_n2",
    "pz_lower",
    "markov_upper",
    "unique_lower",
    "ratio_n",
)


def report_dict(report: MomentReport) -> dict:
    """Structured form: decimal rendering plus the raw (sign, log) pair."""
    p = report.params
    values = {}
    for name in _REPORT_FIELDS:
        val: LogReal | None = getattr(report, name)
        if val is None:
            values[name] = None
        else:
            values[name] = {
                "decimal": format_decimal(val),
                "sign": val.sign,
                "log": val.log_mag,
            }
    return {
        "params": {"n": p.n, "k": p.k, "p": p.p, "delta": p.delta, "c": p.c},
        "values": values,
    }


def report_text(report: MomentReport) -> str:
    """Flat key/value record, one quantity per line."""
    p = report.params
    lines = [f"n = {p.n}", f"k = {p.k}", f"p = {p.p!r}", f"delta = {p.delta!r}", f"c = {p.c!r}"]
    for name in _REPORT_FIELDS:
        val: LogReal | None = getattr(report, name)
        if val is None:
            lines.append(f"{name} = undefined")
        else:
            lines.append(f"{name} = {format_decimal(val)} (sign={val.sign}, log={val.log_mag!r})")
    return "\n".join(lines) + "\n"
