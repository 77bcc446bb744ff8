"""Signed log-domain scalars for formulas that under/overflow float64.

A value x is stored as (sign, ln|x|) with sign in {-1, 0, +1}; sign 0 pairs
with log magnitude -inf.  Products and integer powers are exact log
additions; sums go through signed log-sum-exp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_NEG_INF = float("-inf")
_LN2 = math.log(2.0)


def log1mexp(x: float) -> float:
    """log(1 - exp(x)) for x <= 0, accurate near both ends."""
    if x >= 0.0:
        if x == 0.0:
            return _NEG_INF
        raise ValueError("log1mexp needs x <= 0")
    if x > -_LN2:
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))


@dataclass(frozen=True)
class LogReal:
    sign: int
    log_mag: float

    @staticmethod
    def zero() -> "LogReal":
        return LogReal(0, _NEG_INF)

    @staticmethod
    def one() -> "LogReal":
        return LogReal(1, 0.0)

    @staticmethod
    def from_float(x: float) -> "LogReal":
        if x == 0.0:
            return LogReal.zero()
        if x > 0:
            return LogReal(1, math.log(x))
        return LogReal(-1, math.log(-x))

    @staticmethod
    def from_log(log_mag: float, sign: int = 1) -> "LogReal":
        if log_mag == _NEG_INF or sign == 0:
            return LogReal.zero()
        return LogReal(sign, log_mag)

    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        """Decimal value; underflows to 0.0 / overflows to +-inf silently."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_mag)
        except OverflowError:
            return self.sign * math.inf

    def __neg__(self) -> "LogReal":
        return LogReal(-self.sign, self.log_mag)

    def __abs__(self) -> "LogReal":
        return LogReal(abs(self.sign), self.log_mag)

    def __mul__(self, other: "LogReal") -> "LogReal":
        s = self.sign * other.sign
        if s == 0:
            return LogReal.zero()
        return LogReal(s, self.log_mag + other.log_mag)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        if self.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * other.sign, self.log_mag - other.log_mag)

    def __add__(self, other: "LogReal") -> "LogReal":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        a, b = self, other
        if a.sign == b.sign:
            hi, lo = (a, b) if a.log_mag >= b.log_mag else (b, a)
            return LogReal(a.sign, hi.log_mag + math.log1p(math.exp(lo.log_mag - hi.log_mag)))
        # opposite signs: subtract magnitudes
        if a.log_mag == b.log_mag:
            return LogReal.zero()
        hi, lo = (a, b) if a.log_mag > b.log_mag else (b, a)
        return LogReal(hi.sign, hi.log_mag + log1mexp(lo.log_mag - hi.log_mag))

    def __sub__(self, other: "LogReal") -> "LogReal":
        return self + (-other)

    def pow_int(self, e: int) -> "LogReal":
        """Integer power with the convention 0^0 = 1; e must be >= 0."""
        if e < 0:
            raise ValueError("pow_int needs e >= 0")
        if e == 0:
            return LogReal.one()
        if self.sign == 0:
            return LogReal.zero()
        s = self.sign if (self.sign > 0 or e % 2 == 1) else 1
        return LogReal(s, self.log_mag * e)

    # ordering compares signed values
    def __lt__(self, other: "LogReal") -> bool:
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self.log_mag < other.log_mag
        return self.log_mag > other.log_mag

    def __le__(self, other: "LogReal") -> bool:
        return self < other or self == other


def log_sum(terms: list[LogReal]) -> LogReal:
    """Fixed-order fold of a term list (deterministic reduction)."""
    acc = LogReal.zero()
    for t in terms:
        acc = acc + t
    return acc


def log_binomial(n: int, k: int) -> LogReal:
    """C(n, k) as a LogReal; zero outside 0 <= k <= n."""
    if k < 0 or k > n or n < 0:
        return LogReal.zero()
    return LogReal(1, math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))


def rel_err(a: LogReal, b: LogReal) -> float:
    """|a - b| / |b|, computed in the log domain; inf when b = 0 != a."""
    diff = a - b
    if diff.sign == 0:
        return 0.0
    if b.sign == 0:
        return math.inf
    return math.exp(diff.log_mag - b.log_mag)


def format_decimal(x: LogReal, digits: int = 12) -> str:
    """Scientific-notation rendering with `digits` significant digits."""
    if x.sign == 0:
        return "0"
    exp10 = x.log_mag / math.log(10.0)
    e = math.floor(exp10)
    mant = 10.0 ** (exp10 - e)
    # renormalize mantissa rounding that lands on 10.0
    s = f"{mant:.{digits - 1}f}"
    if s.startswith("10"):
        mant /= 10.0
        e += 1
        s = f"{mant:.{digits - 1}f}"
    prefix = "-" if x.sign < 0 else ""
    return f"{prefix}{s}e{e:+03d}"
