"""Quadratic approximants Q_k, cubic fractional parts and the monic cubic construction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import iv, libmp

from .errors import DegenerateHeight, IdentityFailure, PrecisionExhausted
from .intervals import Interval, bit_size, distance_to_integer, iv_min, log_interval, precision
from .polys import AlgebraicApproximant, IntPoly, certify_root, cofactor_poly, root_near_xi
from .sequence import DEFAULT_REFINEMENT_CAP, GOLDEN, ExtremalSequence, XiEnclosure, decimal_digits, xi_enclosure

GAMMA2 = GOLDEN + 1.0


def qk_poly(seq: ExtremalSequence, k: int) -> IntPoly:
    """``Q_k(T) = det[[1, T, T^2], y_k, y_{k+1}]``."""
    if k < 1:
        raise ValueError("Q_k is defined for k >= 1")
    return cofactor_poly(seq[k], seq[k + 1])


def a_poly(seq: ExtremalSequence, k: int) -> IntPoly:
    """``A(T) = det[[1, T, T^2], y_{k-1}, y_{k+1}]``."""
    return cofactor_poly(seq[k - 1], seq[k + 1])


def a_law_holds(seq: ExtremalSequence, k: int) -> bool:
    """``d_{k-1} Q_{k+1} + d_k A == 0`` coefficient-wise."""
    return (qk_poly(seq, k + 1) * seq.d(k - 1) + a_poly(seq, k) * seq.d(k)).is_zero()


def _fine_enclosure(seq: ExtremalSequence, k: int) -> XiEnclosure:
    """An enclosure fine enough to resolve quantities of size ``Y_{k+2}^{-1}``."""
    level = max(4, k + 3)
    return seq.enclosure(level, max(DEFAULT_REFINEMENT_CAP, level))


def exponent(alpha: AlgebraicApproximant, xi: XiEnclosure, rel_bits: int = 40) -> Interval:
    """Certified ``-log|xi - alpha| / log H(alpha)``."""
    if alpha.height < 2:
        raise DegenerateHeight(f"H(alpha) = {alpha.height}; the exponent needs H >= 2")
    enc = alpha.enclosure
    while True:
        prec = xi.bits + 64
        with precision(prec):
            dist = abs(xi.to_iv() - enc.interval.to_iv())
            lo, hi = dist._mpi_
            if libmp.mpf_gt(lo, libmp.fzero):
                gap = libmp.mpf_sub(hi, lo, 64, libmp.round_ceiling)
                if libmp.mpf_le(libmp.mpf_shift(gap, rel_bits), lo):
                    e = -log_interval(dist) / iv.log(iv.mpf(alpha.height))
                    return Interval.from_iv(e, 64)
            alpha_width = libmp.mpf_sub(enc.hi, enc.lo, 64, libmp.round_ceiling)
        if libmp.mpf_gt(libmp.mpf_shift(alpha_width, rel_bits + 2), lo) and libmp.mpf_gt(lo, libmp.fzero):
            enc = enc.refine(rel_bits + 8)
        else:
            xi = xi.refine()


def distance(alpha: AlgebraicApproximant, xi: XiEnclosure) -> Interval:
    with precision(xi.bits + 64):
        return Interval.from_iv(abs(xi.to_iv() - alpha.interval.to_iv()), 64)


# -- Prop 8.1 style growth laws and the Thm 1.2 witness ---------------------------

@dataclass(frozen=True)
class QkRow:
    k: int
    poly: IntPoly = field(repr=False)
    degree: int
    height_ratio: float          # H(Q_k) / Y_{k-1}
    derivative_ratio: Interval   # |Q_k'(xi)| / Y_{k-1}
    value_ratio: Interval        # |Q_k(xi)| Y_{k+2}
    log_value: Interval          # log |Q_k(xi)|


def _ratio(num: int, den: int) -> float:
    shift = max(0, max(num.bit_length(), den.bit_length()) - 900)
    return (num >> shift) / (den >> shift)


def qk_row(seq: ExtremalSequence, k: int) -> QkRow:
    q = qk_poly(seq, k)
    xi = _fine_enclosure(seq, k)
    y_prev, y_next2 = seq.norm(k - 1), seq.norm(k + 2)
    with precision(xi.bits + 3 * bit_size(*q.coeffs, y_next2) + 64):
        t = xi.to_iv()
        val = abs(q(t))
        der = abs(q.derivative()(t))
        value_ratio = Interval.from_iv(val * y_next2, 64)
        derivative_ratio = Interval.from_iv(der / y_prev, 64)
        log_value = Interval.from_iv(log_interval(val), 64)
    return QkRow(k, q, q.degree, _ratio(q.height, y_prev), derivative_ratio, value_ratio, log_value)


def qk_ratios(seq: ExtremalSequence, ks) -> list[QkRow]:
    return [qk_row(seq, k) for k in ks]


def detect_k0(seq: ExtremalSequence, k_max: int) -> int | None:
    """First ``k`` where ``Q_k`` is an irreducible quadratic."""
    from .polys import is_square
    for k in range(1, k_max + 1):
        q = qk_poly(seq, k)
        if q.degree == 2 and not is_square(q.discriminant()):
            return k
    return None


@dataclass(frozen=True)
class WitnessRow:
    log10_x: int
    k: int
    constant: float   # |Q_k(xi)| X^{gamma^2}, rounded up


def approximation_witness(seq: ExtremalSequence, log10_grid, k_max: int) -> list[WitnessRow]:
    """For each ``X = 10^j`` the best ``Q_k`` with ``H(Q_k) <= X`` and the
    constant ``C`` in ``|Q_k(xi)| <= C X^{-gamma^2}``."""
    rows = [qk_row(seq, k) for k in range(1, k_max + 1)]
    out = []
    for j in log10_grid:
        X = 10 ** j
        ok = [r for r in rows if r.poly.height <= X]
        if not ok:
            continue
        best = min(ok, key=lambda r: r.log_value.upper)
        with precision(128):
            log_c = best.log_value.to_iv() + iv.mpf(GAMMA2) * j * iv.log(10)
            c = Interval.from_iv(iv.exp(log_c), 53).upper
        out.append(WitnessRow(j, best.k, c))
    return out


# -- exhaustive quadratic spectrum --------------------------------------------------

@dataclass(frozen=True)
class SpectrumEntry:
    poly: IntPoly
    root: Interval
    distance: Interval
    height: int
    exponent: Interval | None
    is_alpha_k: bool


@dataclass(frozen=True)
class SpectrumReport:
    h_max: int
    entries: list          # closest roots to xi, nearest first
    floor: Interval        # min |xi - alpha| H(alpha)^4 over alpha not an alpha_k
    floor_entry: SpectrumEntry
    excluded: list         # the alpha_k with H(alpha_k) <= h_max


def _isqrt_exact_mask(d):
    s = np.floor(np.sqrt(d.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        s = np.where(s * s > d, s - 1, s)
        s = np.where((s + 1) * (s + 1) <= d, s + 1, s)
    return s * s == d


def _enumerate(h: int, xf: float):
    """Yield per-leading-coefficient arrays ``(a, b, c, root, err)``."""
    eps = 2.0 ** -52
    rng = np.arange(-h, h + 1, dtype=np.int64)
    bb, cc = (m.ravel() for m in np.meshgrid(rng, rng, indexing="ij"))
    for a in range(0, h + 1):
        if a == 0:
            mask = (bb > 0) & (np.gcd(bb, cc) == 1)
            b, c = bb[mask], cc[mask]
            root = -c / b
            yield np.zeros_like(b), b, c, root, 4 * eps * (1 + np.abs(root))
            continue
        disc = bb * bb - 4 * a * cc
        mask = (disc > 0) & (np.gcd(np.gcd(bb, cc), a) == 1)
        b, c, d = bb[mask], cc[mask], disc[mask]
        keep = ~_isqrt_exact_mask(d)
        b, c, d = b[keep], c[keep], d[keep]
        sq = np.sqrt(d.astype(np.float64))
        q = -(b + np.where(b >= 0, 1.0, -1.0) * sq) / 2
        r1, r2 = q / a, c / q
        for root in (r1, r2):
            err = 16 * eps * (a + np.abs(b) + np.abs(c)) * (1 + root * root) / sq + 4 * eps * np.abs(root)
            yield np.full_like(b, a), b, c, root, err


def _poly_key(a, b, c):
    return IntPoly.of(int(c), int(b), int(a)).primitive().coeffs


def _alpha_k_list(xi: XiEnclosure, h_max: int):
    seq = xi.seq
    out = []
    k = 1
    while True:
        q = qk_poly(seq, k)
        if q.height > 4 * h_max + 4:
            break
        alpha = root_near_xi(q, xi)
        if alpha.height <= h_max:
            out.append((k, alpha))
        k += 1
    return out


def quadratic_spectrum(xi: XiEnclosure, h_max: int, top: int = 10) -> SpectrumReport:
    """All algebraic numbers of degree <= 2 and height <= ``h_max``, ranked by
    distance to ``xi``, plus the certified floor of ``|xi - alpha| H^4`` over
    those that are not roots ``alpha_k`` of the approximants ``Q_k``."""
    if not 1 <= h_max <= 200:
        raise ValueError("h_max must lie in [1, 200]")
    xi = xi_enclosure(xi.seq, Fraction(1, 2 ** 80), max(xi.cap, xi.level))
    xf = float(xi)
    excluded = _alpha_k_list(xi, h_max)
    excl = [(alpha.poly.coeffs, alpha.interval.mid) for _, alpha in excluded]

    near, floor_cands = [], []
    best_hi = math.inf
    for a, b, c, root, err in _enumerate(h_max, xf):
        if len(root) == 0:
            continue
        dist = np.abs(root - xf)
        height = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.abs(c)).astype(np.float64)
        h4 = height ** 4
        is_ex = np.zeros(len(root), dtype=bool)
        for coeffs, mid in excl:
            cc, bb, aa = (list(coeffs) + [0, 0, 0])[:3]
            is_ex |= (a == aa) & (b == bb) & (c == cc) & (np.abs(root - mid) < 1e-9)
        val_lo = np.maximum(dist - err, 0) * h4
        val_hi = (dist + err) * h4
        live = ~is_ex
        if live.any():
            best_hi = min(best_hi, float(val_hi[live].min()))
        sel = np.nonzero(live & (val_lo <= best_hi))[0]
        floor_cands.extend((int(a[i]), int(b[i]), int(c[i]), float(root[i]), float(val_lo[i])) for i in sel)
        idx = np.argsort(dist)[:top]
        near.extend((float(dist[i]), int(a[i]), int(b[i]), int(c[i]), float(root[i]), bool(is_ex[i])) for i in idx)
    floor_cands = [f for f in floor_cands if f[4] <= best_hi]
    near.sort()

    def certify(a, b, c, approx, is_alpha):
        p = IntPoly.of(c, b, a)
        if a == 0:
            alpha = certify_root(p, approx, 1.0)
        else:
            sep = math.sqrt(b * b - 4 * a * c) / a
            alpha = certify_root(p, approx, sep / 3)
        dist_iv = distance(alpha, xi)
        e = exponent(alpha, xi) if alpha.height >= 2 else None
        return SpectrumEntry(alpha.poly, alpha.interval, dist_iv, alpha.height, e, is_alpha)

    entries = [certify(a, b, c, r, ex) for _, a, b, c, r, ex in near[:top]]
    floor = floor_entry = None
    for a, b, c, r, _ in floor_cands:
        ent = certify(a, b, c, r, False)
        with precision(128):
            v = ent.distance.to_iv() * ent.height ** 4
            if floor is None or libmp.mpf_lt(v._mpi_[0], floor._mpi_[0]):
                floor_entry = ent
            floor = v if floor is None else iv_min(floor, v)
    return SpectrumReport(h_max, entries, Interval.from_iv(floor, 64), floor_entry, [a for _, a in excluded])


# -- cubic fractional parts and the monic cubic ------------------------------------

@dataclass(frozen=True)
class CubicCriterionRecord:
    k: int
    d_k: int
    ell: int
    n: dict                # j -> nearest integer to y_{j,0} xi^3 / ell, j in {k-1, k, k+1}
    frac: Interval         # distance of y_{k,0} xi^3 / ell to the nearest integer
    delta: Interval        # -log(frac upper endpoint) / log Y_k
    digits: int            # decimal digits of Y_k


def default_ell(seq: ExtremalSequence) -> int:
    return abs(seq.seed.trace_jab)


def _nearest_cube(seq: ExtremalSequence, j: int, ell: int, tol: float):
    """Certified nearest integer to ``y_{j,0} xi^3 / ell`` and the distance to it."""
    y0 = seq[j].x0
    xi = xi_enclosure(seq, Fraction(1, max(1, 8 * y0) * int(1 / tol + 1)), max(DEFAULT_REFINEMENT_CAP, j + 8))
    while True:
        with precision(xi.bits + 2 * bit_size(y0) + 64):
            t = xi.to_iv()
            x = t * t * t * y0 / ell
            n, d = distance_to_integer(x)
            if n is not None:
                frac = Interval.from_iv(d, 64)
                if frac.width <= tol:
                    return n, frac
        xi = xi.refine()


def cubic_frac(seq: ExtremalSequence, k: int, ell: int | None = None, tol: float = 1e-6) -> CubicCriterionRecord:
    ell = default_ell(seq) if ell is None else ell
    if ell <= 0:
        raise ValueError("ell must be a positive integer")
    n = {}
    frac = None
    for j in (k - 1, k, k + 1):
        n[j], f = _nearest_cube(seq, j, ell, tol)
        if j == k:
            frac = f
    y = seq.norm(k)
    with precision(128):
        hi = iv.mpf(frac.upper)
        if not libmp.mpf_gt(hi._mpi_[0], libmp.fzero):
            raise PrecisionExhausted("fractional part not bounded away from zero")
        delta = Interval.from_iv(-iv.log(hi) / _log_int(y), 64)
    return CubicCriterionRecord(k, seq.d(k), ell, n, frac, delta, decimal_digits(y))


def _log_int(n: int):
    """``iv`` enclosure of ``log n`` for a huge positive integer."""
    shift = max(0, n.bit_length() - 200)
    lo, hi = n >> shift, (n >> shift) + (1 if shift else 0)
    return iv.log(iv.mpf((lo, hi))) + shift * iv.log(2)


def cubic_monitor(rec: CubicCriterionRecord, y_norm: int) -> Interval:
    """``log10(<y_{k,0} xi^3> * Y_k^{1/gamma^3})``; the product itself overflows floats."""
    with precision(128):
        v = (log_interval(rec.frac.to_iv()) + _log_int(y_norm) / (iv.mpf(GOLDEN) ** 3)) / iv.log(10)
        return Interval.from_iv(v, 64)


@dataclass(frozen=True)
class CubicConstruction:
    k: int
    poly: IntPoly
    alpha: AlgebraicApproximant
    theta: Interval
    identity_constant: int
    m: int
    record: CubicCriterionRecord

    def __iter__(self):
        yield self.poly
        yield self.alpha
        yield self.theta


def cubic_identity(seq: ExtremalSequence, k: int):
    """Signed polynomials ``(s_j * poly_j)`` with ``sum y_{j,0} s_j poly_j`` constant.

    Over ``(y_{k-1}, y_k, y_{k+1})`` the combination is
    ``y_{k-1,0} B - y_{k,0} A + y_{k+1,0} C = det(y_{k-1}, y_k, y_{k+1})``.
    """
    A, B, C = a_poly(seq, k), qk_poly(seq, k), qk_poly(seq, k - 1)
    terms = {k - 1: B, k: -A, k + 1: C}
    total = IntPoly(())
    for j, poly in terms.items():
        total = total + poly * seq[j].x0
    if total.degree > 0 or total.coeff(0) != seq.d(k - 1):
        raise IdentityFailure(f"constant identity fails at k = {k}: {total}")
    return terms, total.coeff(0)


def cubic_integer_poly(seq: ExtremalSequence, k: int, ell: int | None = None) -> CubicConstruction:
    """Monic cubic ``P`` with a root very close to ``xi``, and its exponent."""
    if k < 2:
        raise ValueError("the cubic construction needs k >= 2")
    terms, const = cubic_identity(seq, k)
    ell = default_ell(seq) if ell is None else ell
    if ell % const:
        raise ValueError(f"d_(k-1) = {const} does not divide ell = {ell}")
    m = ell // const
    rec = cubic_frac(seq, k, ell)
    combo = IntPoly(())
    for j, poly in terms.items():
        combo = combo + poly * rec.n[j]
    P = IntPoly.of(0, 0, 0, 1) - combo * m
    if P.degree != 3 or P.lead != 1:
        raise IdentityFailure(f"P is not a monic cubic at k = {k}: {P}")
    xi = seq.enclosure(max(4, k + 2), max(DEFAULT_REFINEMENT_CAP, k + 8))
    alpha = root_near_xi(P, xi)
    theta = exponent(alpha, xi) if alpha.height >= 2 else None
    return CubicConstruction(k, P, alpha, theta, const, m, rec)


def theta_prediction(delta: float) -> float:
    return (GAMMA2 - delta) / (1 - delta)


def theta_upper_bound(delta: float) -> float:
    return (GAMMA2 + delta / GOLDEN) / (1 - delta)


@dataclass(frozen=True)
class SurveyRow:
    k: int
    digits: int
    frac: Interval
    delta: Interval
    theta: Interval | None
    height_p: int
    root: Interval
    theta_predicted: float
    theta_upper: float
    theta_floor: float


@dataclass(frozen=True)
class SurveyReport:
    rows: list
    theta_min: float
    theta_max: float
    delta_min: float
    delta_max: float


def survey_row(seq: ExtremalSequence, k: int) -> SurveyRow:
    c = cubic_integer_poly(seq, k)
    d = c.record.delta.mid
    return SurveyRow(k, c.record.digits, c.record.frac, c.record.delta, c.theta, c.alpha.height,
                     c.alpha.interval, theta_prediction(d), theta_upper_bound(d), GAMMA2 + 1)


def exponent_survey(seq: ExtremalSequence, k_range) -> SurveyReport:
    rows = [survey_row(seq, k) for k in k_range]
    thetas = [r.theta.mid for r in rows if r.theta is not None]
    deltas = [r.delta.mid for r in rows]
    return SurveyReport(rows, min(thetas, default=math.nan), max(thetas, default=math.nan),
                        min(deltas, default=math.nan), max(deltas, default=math.nan))


def histogram(values, bins: int = 5, lo: float = 0.0, hi: float = 0.5) -> list[int]:
    counts, _ = np.histogram(np.asarray(values, dtype=float), bins=bins, range=(lo, hi))
    return [int(c) for c in counts]
