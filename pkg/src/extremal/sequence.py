"""Extremal sequences generated from a pair of symmetric unimodular seed matrices.

The sequence ``y_{-1} = B^{-1}, y_0 = I, y_1 = A`` is continued by the bracket
recurrence ``y_k = [y_{k-1}, y_{k-1}, y_{k-3}]``; every new point is checked
against the product recurrence ``y_k = ± y_{k-1} S y_{k-2}`` (``S = AB`` for
odd ``k``, ``BA`` for even ``k``).  Points from ``k = 2`` on are stored
sign-normalised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from mpmath import iv

from .errors import (Commuting, IdentityFailure, NotSymmetric, NotUnimodular,
                     PositivityFailure, PrecisionExhausted)
from .intervals import Interval, bit_size, iv_rational, precision
from .triples import (J, Matrix, Triple, bracket, det3, det_triple, is_symmetric, l_value,
                      mat_det, mat_mul, mat_prod, mat_trace, norm_sup, unimodular_inverse)

GOLDEN = (1 + math.sqrt(5)) / 2
DEFAULT_REFINEMENT_CAP = 32


@dataclass(frozen=True)
class SeedPair:
    A: Matrix
    B: Matrix
    det_a: int
    det_b: int
    trace_jab: int
    label: str = ""

    @property
    def AB(self) -> Matrix:
        return mat_mul(self.A, self.B)

    @property
    def BA(self) -> Matrix:
        return mat_mul(self.B, self.A)


def _as_matrix(m) -> Matrix:
    (p, q), (r, s) = m
    return ((int(p), int(q)), (int(r), int(s)))


def validate_seed(A, B, label="") -> SeedPair:
    """Check the hypotheses of the construction and return a :class:`SeedPair`.

    A and B must be symmetric, in GL2(Z), non-commuting; A must have
    non-negative entries and AB positive entries.
    """
    A, B = _as_matrix(A), _as_matrix(B)
    for name, m in (("A", A), ("B", B)):
        if not is_symmetric(m):
            raise NotSymmetric(f"{name} = {m} is not symmetric")
    det_a, det_b = mat_det(A), mat_det(B)
    for name, d in (("A", det_a), ("B", det_b)):
        if abs(d) != 1:
            raise NotUnimodular(f"det {name} = {d}; seed matrices must lie in GL2(Z)")
    trace_jab = mat_trace(mat_prod(J, A, B))
    if trace_jab == 0:
        raise Commuting("AB = BA (trace(JAB) = 0); the seed matrices must not commute")
    if any(c < 0 for row in A for c in row):
        raise PositivityFailure(f"A = {A} has a negative entry")
    if any(c <= 0 for row in mat_mul(A, B) for c in row):
        raise PositivityFailure(f"AB = {mat_mul(A, B)} has a non-positive entry")
    return SeedPair(A, B, det_a, det_b, trace_jab, label)


def fibonacci_seed(a: int, b: int) -> SeedPair:
    """Seed whose limit is the continued fraction ``[0, a, b, a, a, b, ...]``."""
    return validate_seed(((a, 1), (1, 0)), ((b, 1), (1, 0)), label=f"fib({a},{b})")


class ExtremalSequence:
    """Lazily extended sequence ``y_{-1}, y_0, y_1, ...`` with cached norms.

    Single writer: ``extend`` appends; points already produced never change.
    """

    def __init__(self, seed: SeedPair, check_recurrences: bool = True):
        self.seed = seed
        self.check_recurrences = check_recurrences
        self._points = [Triple.from_matrix(unimodular_inverse(seed.B)),
                        Triple(1, 0, 1),
                        Triple.from_matrix(seed.A)]

    @classmethod
    def fibonacci(cls, a: int, b: int, **kwargs) -> ExtremalSequence:
        return cls(fibonacci_seed(a, b), **kwargs)

    @property
    def computed(self) -> int:
        """Largest index already materialised."""
        return len(self._points) - 2

    def extend(self, k: int) -> Triple:
        """Return ``y_k``, computing (and cross-checking) any missing points."""
        if k < -1:
            raise IndexError(f"sequence starts at k = -1, got {k}")
        while self.computed < k:
            self._points.append(self._next_point())
        return self._points[k + 1]

    point = extend
    __getitem__ = extend

    def _next_point(self) -> Triple:
        k = self.computed + 1
        y = self._points
        prev, prev2, prev3 = y[k], y[k - 1], y[k - 2]   # y_{k-1}, y_{k-2}, y_{k-3}
        new = bracket(prev, prev, prev3).normalized()
        if self.check_recurrences:
            alt = product_recurrence(self.seed, k, prev, prev2).normalized()
            if alt != new:
                raise IdentityFailure(f"recurrences disagree at k = {k}: {new} vs {alt}")
        return new

    def norm(self, k: int) -> int:
        """``Y_k = ||y_k||``."""
        return norm_sup(self.extend(k))

    def det(self, k: int) -> int:
        return det_triple(self.extend(k))

    def d(self, k: int) -> int:
        """``d_k = det(y_k, y_{k+1}, y_{k+2})``."""
        return det3(self.extend(k), self.extend(k + 1), self.extend(k + 2))

    def points(self, start: int, stop: int):
        return [self.extend(k) for k in range(start, stop + 1)]

    def enclosure(self, level: int, cap: int = DEFAULT_REFINEMENT_CAP) -> XiEnclosure:
        if level < 2:
            raise ValueError("enclosures exist from level 2 on")
        if level > cap:
            raise PrecisionExhausted(f"level {level} exceeds refinement cap {cap}")
        self.extend(level)
        return XiEnclosure(self, level, cap)

    def __repr__(self):
        return f"ExtremalSequence({self.seed.label or self.seed.A}, computed={self.computed})"


def product_recurrence(seed: SeedPair, k: int, prev: Triple, prev2: Triple) -> Triple:
    """``y_{k-1} S y_{k-2}`` with ``S = AB`` (k odd) or ``BA`` (k even)."""
    s = seed.AB if k % 2 else seed.BA
    return Triple.from_matrix(mat_prod(prev.as_matrix(), s, prev2.as_matrix()))


@dataclass(frozen=True)
class XiEnclosure:
    """The nested interval with endpoints ``y_{k,1}/y_{k,0}`` and ``y_{k,2}/y_{k,1}``."""

    seq: ExtremalSequence = field(repr=False)
    level: int
    cap: int = DEFAULT_REFINEMENT_CAP

    @property
    def point(self) -> Triple:
        return self.seq.extend(self.level)

    @cached_property
    def _ends(self):
        y = self.point
        first, second = (y.x1, y.x0), (y.x2, y.x1)
        # a/b < c/d  <=>  a d < c b  (all denominators positive)
        if first[0] * second[1] <= second[0] * first[1]:
            return first, second
        return second, first

    @cached_property
    def lo(self) -> Fraction:
        return Fraction(*self._ends[0])

    @cached_property
    def hi(self) -> Fraction:
        return Fraction(*self._ends[1])

    @property
    def width(self) -> Fraction:
        y = self.point
        return Fraction(1, abs(y.x0 * y.x1))

    @property
    def bits(self) -> int:
        """Binary digits needed to resolve this enclosure (about ``-log2 width``)."""
        y = self.point
        return bit_size(y.x0) + bit_size(y.x1) + 8

    def to_iv(self):
        """Outward-rounded ``iv.mpf`` containing the enclosure (current precision)."""
        (p, q), (r, s) = self._ends
        lo = iv_rational(p, q)
        hi = iv_rational(r, s)
        return iv.mpf((lo.a, hi.b))

    def interval(self, bits=None) -> Interval:
        with precision(bits or self.bits + 16):
            return Interval.from_iv(self.to_iv())

    def refine(self, steps: int = 1) -> XiEnclosure:
        return self.seq.enclosure(self.level + steps, self.cap)

    def contains(self, other: XiEnclosure) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __float__(self):
        return float(self.lo + self.hi) / 2 if self.level < 12 else self.interval(128).mid


def xi_enclosure(seq: ExtremalSequence, eps, cap: int = DEFAULT_REFINEMENT_CAP) -> XiEnclosure:
    """Smallest-level enclosure of width at most ``eps``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    level = 2
    while True:
        if level > cap:
            raise PrecisionExhausted(f"width {eps} not reached below refinement cap {cap}")
        y = seq.extend(level)
        if abs(y.x0 * y.x1) * eps >= 1:
            return XiEnclosure(seq, level, cap)
        level += 1


def refine_until(xi: XiEnclosure, evaluate, accept):
    """Evaluate at successively finer enclosures until ``accept(value)`` holds.

    Returns ``(value, enclosure_used)``; raises :class:`PrecisionExhausted`
    once the enclosure cap is reached.
    """
    while True:
        value = evaluate(xi)
        if accept(value):
            return value, xi
        xi = xi.refine()


# -- continued fractions -------------------------------------------------------

def certified_quotients(lo: Fraction, hi: Fraction, n: int) -> list[int]:
    """Leading partial quotients shared by every real number in ``[lo, hi]``."""
    out = []
    while len(out) < n:
        a = math.floor(lo)
        if math.floor(hi) != a:
            break
        out.append(a)
        if lo == a:
            break
        lo, hi = 1 / (hi - a), 1 / (lo - a)
    return out


def cf_expand(xi: XiEnclosure, n: int) -> list[int]:
    """First ``n`` partial quotients of the enclosed number, certified."""
    if n < 1:
        raise ValueError("n must be at least 1")
    while True:
        quotients = certified_quotients(xi.lo, xi.hi, n)
        if len(quotients) >= n:
            return quotients[:n]
        xi = xi.refine()


def convergents(quotients):
    """Yield ``(p_i, q_i)`` for the partial quotients ``[a_0, a_1, ...]``."""
    p_prev, p = 1, quotients[0]
    q_prev, q = 0, 1
    yield p, q
    for a in quotients[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


# -- certified checks and reports ------------------------------------------------

class ThreeTermCheck(NamedTuple):
    ok: bool
    residual: Triple

    def __bool__(self):
        return self.ok


def verify_three_term(seq: ExtremalSequence, k: int, y_next: Triple | None = None) -> ThreeTermCheck:
    """Exact check of ``d(k-2,k-1,k) y_{k+1} = d(k-2,k-1,k+1) y_k + d(k-1,k,k+1) y_{k-2}``.

    Both sides are linear in ``y_{k+1}``, so its global sign is irrelevant.
    ``y_next`` overrides ``y_{k+1}`` (used to exercise the failure path).
    """
    if k < 3:
        raise ValueError("the three-term relation is checked for k >= 3")
    a, b, c = seq.extend(k - 2), seq.extend(k - 1), seq.extend(k)
    nxt = seq.extend(k + 1) if y_next is None else y_next
    residual = det3(a, b, c) * nxt - det3(a, b, nxt) * c - det3(b, c, nxt) * a
    return ThreeTermCheck(residual.is_zero(), residual)


def decimal_digits(n: int) -> int:
    """Number of decimal digits of ``|n|`` (1 for zero), without ``str``."""
    n = abs(n)
    if n < 10:
        return 1
    d = int(n.bit_length() * math.log10(2))
    while 10 ** d <= n:
        d += 1
    while 10 ** (d - 1) > n:
        d -= 1
    return d


@dataclass(frozen=True)
class GrowthRow:
    k: int
    digits: int
    q: Interval            # Y_k / Y_{k-1}^gamma
    l_times_norm: Interval  # L(y_k) * Y_k
    det: int
    d: int


@dataclass
class GrowthReport:
    rows: list
    c1: float          # upper bound of Y_k / (Y_{k-2} Y_{k-1}) over 4 <= k <= k_max
    q3: Interval
    c2: float
    bounds_hold: bool  # c2^{-1/gamma} <= q_k <= c2 for every 3 <= k <= k_max
    strict_growth: bool  # Y_{k-2} Y_{k-1} < Y_k for 4 <= k <= k_max

    def row(self, k):
        return next(r for r in self.rows if r.k == k)


def _log_norm(seq, k):
    return iv.log(iv.mpf(seq.norm(k)))



def growth_report(seq: ExtremalSequence, k_max: int, cap: int = DEFAULT_REFINEMENT_CAP) -> GrowthReport:
    if k_max < 4:
        raise ValueError("k_max must be at least 4")
    seq.extend(k_max + 2)
    rows = []
    # c1 and c2 are taken as upward-rounded floats: any larger constant is
    # equally valid in the growth argument, so rounding up keeps the check sound.
    with precision(192):
        gamma = (1 + iv.sqrt(5)) / 2
        logs = {k: _log_norm(seq, k) for k in range(0, k_max + 1)}
        log_q = {k: Interval.from_iv(logs[k] - gamma * logs[k - 1], 64) for k in range(1, k_max + 1)}
        log_c1 = max(Interval.from_iv(logs[k] - logs[k - 1] - logs[k - 2], 64).upper
                     for k in range(4, k_max + 1))
        q_intervals = {k: Interval.from_iv(iv.exp(log_q[k].to_iv()), 64) for k in log_q}
    q3 = log_q[3]
    log_c2 = max(GOLDEN * log_c1, q3.upper, -GOLDEN * q3.lower)
    log_c2 = math.nextafter(log_c2, math.inf)
    bounds = all(log_q[k].upper <= log_c2 and log_q[k].lower >= -log_c2 / GOLDEN
                 for k in range(3, k_max + 1))
    c1, c2 = math.exp(log_c1), math.exp(log_c2)
    q3_interval = q_intervals[3]
    strict = all(seq.norm(k - 2) * seq.norm(k - 1) < seq.norm(k) for k in range(4, k_max + 1))
    for k in range(1, k_max + 1):
        y = seq.extend(k)
        xi = seq.enclosure(min(max(k + 2, 2), cap), cap)
        lval = l_value(y, xi)
        with precision(xi.bits + 64):
            prod = Interval.from_iv(lval.to_iv() * norm_sup(y), 64)
        rows.append(GrowthRow(k, decimal_digits(norm_sup(y)), q_intervals[k], prod,
                              det_triple(y), seq.d(k)))
    return GrowthReport(rows, c1, q3_interval, c2, bounds, strict)
