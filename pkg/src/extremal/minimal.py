"""Brute-force minimal points of a real number xi, and the related 2-D first minimum.

The scan over ``x0 = 1..x_max`` runs in floating point with a rigorous error
allowance; only values that could be running minima are re-evaluated with
certified intervals, so the list of records is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import iv

from .errors import PrecisionExhausted
from .intervals import Interval, bit_size, distance_to_integer, iv_max, iv_min, precision
from .sequence import XiEnclosure, cf_expand, convergents
from .triples import Triple, det3, plucker

DEFAULT_X_MAX_CAP = 10 ** 7
_CHUNK = 1 << 20
_SPLIT_BITS = 26


@dataclass(frozen=True)
class MinimalPointRecord:
    point: Triple
    l_interval: Interval

    @property
    def x0(self) -> int:
        return self.point.x0


def _split(value: Fraction):
    """``value ≈ head + tail`` with ``head`` on 26 bits, so ``x0 * head`` is exact."""
    scale = 2 ** (_SPLIT_BITS - max(0, math.frexp(float(value))[1]))
    head = Fraction(round(value * scale), scale)
    return float(head), float(value - head)


def _frac_distance(xs, head, tail):
    prod = xs * head
    t = prod - np.rint(prod)
    f = t + xs * tail
    return np.abs(f - np.rint(f))


def _tight(xi: XiEnclosure, scale: int, bits: int = 60) -> XiEnclosure:
    """Refine until ``scale * width(xi) <= 2^-bits``."""
    while xi.width * scale > Fraction(1, 2 ** bits):
        xi = xi.refine()
    return xi


def _xi_parts(xi: XiEnclosure):
    mid = (xi.lo + xi.hi) / 2
    return _split(mid), _split(mid * mid)


def _certified_record(x0: int, xi: XiEnclosure):
    with precision(xi.bits + 2 * bit_size(x0) + 64):
        t = xi.to_iv()
        n1, d1 = distance_to_integer(x0 * t)
        n2, d2 = distance_to_integer(x0 * t * t)
        if n1 is None or n2 is None:
            return None
        return MinimalPointRecord(Triple(x0, n1, n2), Interval.from_iv(iv_max(d1, d2), 128))


def _candidates(xi: XiEnclosure, x_max: int):
    """``x0`` values whose float L is within the error allowance of a new minimum."""
    (h1, t1), (h2, t2) = _xi_parts(xi)
    # |L_float - L| <= 2^-50 + x0 * 2^-78 for x0 < 2^27; doubled to cover a
    # nearest-integer misselection next to a half-integer.
    eps = 2 * (2.0 ** -50 + x_max * 2.0 ** -78)
    carry = math.inf
    out = []
    for start in range(1, x_max + 1, _CHUNK):
        xs = np.arange(start, min(start + _CHUNK, x_max + 1), dtype=np.float64)
        lv = np.maximum(_frac_distance(xs, h1, t1), _frac_distance(xs, h2, t2))
        before = np.minimum.accumulate(np.concatenate(([carry], lv)))[:-1]
        out.extend(int(i) + start for i in np.nonzero(lv <= before + 2 * eps)[0])
        carry = min(carry, float(lv.min()))
    return out


def minimal_points(xi: XiEnclosure, x_max: int, cap: int = DEFAULT_X_MAX_CAP):
    """Minimal points ``x`` with ``1 <= x0 <= x_max``, ordered by ``x0``.

    Each record's ``(x1, x2)`` are the certified nearest integers to
    ``(x0 xi, x0 xi^2)`` and its L is certified to be strictly below that of
    every earlier record.
    """
    if x_max < 1:
        raise ValueError("x_max must be at least 1")
    if x_max > cap:
        raise ValueError(f"x_max = {x_max} exceeds the scan cap {cap}")
    if x_max >= 2 ** 27:
        raise ValueError("float prefilter is only sound for x_max < 2^27")
    xi = _tight(xi, x_max)
    records: list[MinimalPointRecord] = []
    for x0 in _candidates(xi, x_max):
        while True:
            rec = _certified_record(x0, xi)
            if rec is not None:
                if not records or rec.l_interval.is_below(records[-1].l_interval):
                    records.append(rec)
                    break
                if records[-1].l_interval.is_below(rec.l_interval):
                    break
            # ambiguous nearest integer or overlapping L enclosures
            xi = xi.refine()
            if records:
                records[-1] = _certified_record(records[-1].x0, xi) or records[-1]
    return records


@dataclass(frozen=True)
class IndependentTriples:
    indices: list       # i such that x_{i-1}, x_i, x_{i+1} are independent
    points: list        # the extracted subsequence x_{i_1}, x_{i_2}, ...


def independent_triples(records) -> IndependentTriples:
    pts = [r.point if isinstance(r, MinimalPointRecord) else r for r in records]
    idx = [i for i in range(1, len(pts) - 1) if det3(pts[i - 1], pts[i], pts[i + 1]) != 0]
    return IndependentTriples(idx, [pts[i] for i in idx])


@dataclass(frozen=True)
class Lemma41Row:
    i: int
    height: int
    saturated: bool
    ratio: Interval  # H(V_i) / (||x_{i+1}|| L(x_i))


def lemma41_stats(records, xi: XiEnclosure | None = None):
    """Height of the plane spanned by consecutive minimal points, against
    ``||x_{i+1}|| L(x_i)``.  ``xi`` is unused when records carry L intervals."""
    if len(records) < 2:
        raise ValueError("need at least two records")
    rows = []
    for i in range(len(records) - 1):
        x, y = records[i], records[i + 1]
        pl = plucker(x.point, y.point)
        norm = max(abs(c) for c in y.point)
        with precision(bit_size(pl.height, norm) + 128):
            ratio = iv.mpf(pl.height) / (norm * x.l_interval.to_iv())
            rows.append(Lemma41Row(i, pl.height, pl.is_saturated_basis, Interval.from_iv(ratio, 64)))
    return rows


# -- first minimum of |x0| <= X, |x0 xi - x1| <= 1/X ------------------------------

def _value_iv(x0, x1, X: Fraction, t):
    lhs = iv.mpf(abs(x0)) / iv.mpf(X.numerator) * X.denominator
    rhs = abs(x0 * t - x1) * X.numerator / X.denominator
    return iv_max(lhs, rhs)


def first_minimum(xi: XiEnclosure, X) -> Interval:
    """Certified enclosure of the first minimum ``lambda(X)`` of the body
    ``{|x0| <= X, |x0 xi - x1| <= 1/X}``.

    Candidates are ``(0, 1)`` and ``(x0, nearest(x0 xi))`` for
    ``1 <= x0 <= X``: any ``|x0| > X`` already gives a value above 1, and
    Minkowski's theorem bounds ``lambda`` by 1.
    """
    X = Fraction(X)
    if X < 1:
        raise ValueError("X must be at least 1")
    n = math.floor(X)
    if n >= 2 ** 27:
        raise ValueError("X too large for the float prefilter")
    xi = _tight(xi, n * max(1, math.ceil(X)))
    (h1, t1), _ = _xi_parts(xi)
    Xf = float(X)
    xs = np.arange(1, n + 1, dtype=np.float64)
    vals = np.maximum(xs / Xf, Xf * _frac_distance(xs, h1, t1))
    eps = 4 * (Xf * (2.0 ** -50 + n * 2.0 ** -78) + 2.0 ** -50)
    best = min(float(vals.min()), Xf)
    cands = [int(i) + 1 for i in np.nonzero(vals <= best + eps)[0]]
    while True:
        with precision(xi.bits + 2 * bit_size(n, X.numerator, X.denominator) + 64):
            t = xi.to_iv()
            found = [_value_iv(0, 1, X, t)]
            for x0 in cands:
                x1, _ = distance_to_integer(x0 * t)
                if x1 is None:
                    break
                found.append(_value_iv(x0, x1, X, t))
            else:
                best = found[0]
                for v in found[1:]:
                    best = iv_min(best, v)
                return Interval.from_iv(best, 128)
        xi = xi.refine()


def first_minimum_trend(seq, ks, s: float, cap=DEFAULT_X_MAX_CAP):
    """Rows ``(k, Y_k, lambda(Y_k), lambda(Y_k) (log Y_k)^s)`` for ``Y_k <= cap``."""
    rows = []
    xi = seq.enclosure(4)
    for k in ks:
        X = seq.norm(k)
        if X > cap:
            break
        lam = first_minimum(xi, X)
        rows.append((k, X, lam, lam.mid * math.log(X) ** s))
    return rows


def rational_floor(xi: XiEnclosure, q_max: int, n_quotients: int = 200):
    """Minimum of ``q^2 |xi - p/q|`` over convergents with ``2 <= q <= q_max``.

    Returns ``(value_interval, (p, q))``.
    """
    quotients = cf_expand(xi, n_quotients)
    best = None
    for p, q in convergents(quotients):
        if q > q_max:
            break
        if q < 2:
            continue
        xi_fine = _tight(xi, q * q)
        with precision(xi_fine.bits + 4 * bit_size(q) + 64):
            val = abs(q * xi_fine.to_iv() - p) * q
            if best is None or val.b < best[0].b:
                best = (val, (p, q))
    if best is None:
        raise PrecisionExhausted("no convergent in range")
    with precision(128):
        return Interval.from_iv(best[0], 64), best[1]
