"""Integer polynomials of degree at most three and certified real-root isolation.

Roots are bracketed by exact sign evaluation at dyadic rational points, and
uniqueness inside a bracket comes from an interval enclosure of the
derivative that excludes zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import mpmath
from mpmath import iv, libmp

from .errors import NoRealRoot, PrecisionExhausted
from .intervals import Interval, bit_size, precision


@dataclass(frozen=True)
class IntPoly:
    """``c[0] + c[1] T + ... ``; trailing zero coefficients are stripped."""

    coeffs: tuple

    def __post_init__(self):
        c = [int(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def of(cls, *coeffs) -> IntPoly:
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    @property
    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def primitive(self) -> IntPoly:
        """Content removed and leading coefficient made positive."""
        g = self.content
        if g == 0:
            return self
        if self.lead < 0:
            g = -g
        return IntPoly(tuple(c // g for c in self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(tuple(other * c for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> IntPoly:
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __call__(self, t):
        """Horner evaluation; works for ints, Fractions, mpf and iv.mpf."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def sign_at_dyadic(self, man: int, exp: int) -> int:
        """Exact sign of ``p(man * 2^exp)`` using integers only."""
        d = self.degree
        if d < 0:
            return 0
        if exp >= 0:
            v = self(man << exp)
        else:
            # 2^(e d) p(man / 2^e) = sum c_i man^i 2^(e (d - i)) with e = -exp
            e = -exp
            v = sum(c * man ** i << (e * (d - i)) for i, c in enumerate(self.coeffs))
        return (v > 0) - (v < 0)

    def sign_at(self, x: Fraction) -> int:
        x = Fraction(x)
        d = self.degree
        v = sum(c * x.numerator ** i * x.denominator ** (d - i) for i, c in enumerate(self.coeffs))
        return (v > 0) - (v < 0)

    def discriminant(self) -> int:
        d = self.degree
        if d == 2:
            c, b, a = self.coeffs
            return b * b - 4 * a * c
        if d == 3:
            d0, c, b, a = self.coeffs
            return b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d0 - 27 * a * a * d0 * d0 + 18 * a * b * c * d0
        raise ValueError("discriminant implemented for degree 2 and 3 only")

    def divide_exact(self, other: IntPoly) -> IntPoly:
        """Quotient of an exact division over Q, required to land in Z[T]."""
        rem = [Fraction(c) for c in self.coeffs]
        q = [Fraction(0)] * max(1, len(rem) - len(other.coeffs) + 1)
        for i in range(len(rem) - len(other.coeffs), -1, -1):
            f = rem[i + other.degree] / other.lead
            q[i] = f
            for j, b in enumerate(other.coeffs):
                rem[i + j] -= f * b
        if any(rem) or any(f.denominator != 1 for f in q):
            raise ValueError(f"{other} does not divide {self} in Z[T]")
        return IntPoly(tuple(int(f) for f in q))

    def render(self, var="T") -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            mag = abs(c)
            body = f"{mag}" if (mag != 1 or i == 0) else ""
            body = f"{body}*{mono}" if body and mono else (body or mono)
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {b}" for s, b in terms[1:])

    def __repr__(self):
        return f"IntPoly({self.render()})"


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def cofactor_poly(u, v) -> IntPoly:
    """``det[[1, T, T^2], u, v]`` expanded along the first row."""
    return IntPoly.of(u[1] * v[2] - u[2] * v[1],
                      -(u[0] * v[2] - u[2] * v[0]),
                      u[0] * v[1] - u[1] * v[0])


# -- root isolation -----------------------------------------------------------

def _approx_real_roots(p: IntPoly, prec: int):
    """Real roots of ``p`` at precision ``prec`` (float-quality approximations)."""
    with mpmath.workprec(prec):
        if p.degree == 1:
            return [mpmath.mpf(-p.coeffs[0]) / p.coeffs[1]]
        if p.degree == 2:
            c, b, a = (mpmath.mpf(v) for v in p.coeffs)
            disc = b * b - 4 * a * c
            if disc < 0:
                return []
            s = mpmath.sqrt(disc)
            q = -(b + s) / 2 if b >= 0 else -(b - s) / 2
            roots = [q / a]
            if q != 0:
                roots.append(c / q)
            return roots
        roots = mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=400, extraprec=prec, error=False)
        scale = max(1, max(abs(r) for r in roots))
        return [mpmath.re(r) for r in roots if abs(mpmath.im(r)) <= scale * mpmath.mpf(2) ** (-prec // 2)]


def _newton(p: IntPoly, r, prec: int, steps: int = 60):
    dp = p.derivative()
    with mpmath.workprec(prec):
        r = mpmath.mpf(r)
        tol = mpmath.mpf(2) ** (-prec + 8)
        for _ in range(steps):
            der = dp(r)
            if der == 0:
                break
            step = p(r) / der
            r -= step
            if abs(step) <= tol * max(1, abs(r)):
                break
        return r


def _dyadic(x):
    """``(man, exp)`` of an mpf or a raw mpf tuple."""
    sign, man, exp, _ = x if isinstance(x, tuple) else x._mpf_
    return (-man if sign else man), exp


def _bracket(p: IntPoly, r, eta):
    """Try ``[r - eta, r + eta]`` as a sign-change bracket; exact signs."""
    lo, hi = r - eta, r + eta
    s_lo, s_hi = p.sign_at_dyadic(*_dyadic(lo)), p.sign_at_dyadic(*_dyadic(hi))
    if s_lo * s_hi < 0:
        return lo, hi, s_lo
    return None


def _derivative_excludes_zero(p: IntPoly, lo, hi, prec: int) -> bool:
    with precision(prec):
        box = iv.mpf((lo, hi))
        val = p.derivative()(box)
        a, b = val._mpi_
        return libmp.mpf_gt(a, libmp.fzero) or libmp.mpf_lt(b, libmp.fzero)


@dataclass(frozen=True)
class RootEnclosure:
    """Dyadic bracket ``[lo, hi]`` holding exactly one root of ``poly``."""

    poly: IntPoly
    lo: tuple       # raw mpf
    hi: tuple
    sign_lo: int    # sign of poly at lo (opposite at hi); 0 for an exact root

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def refine(self, steps: int = 1) -> RootEnclosure:
        """Bisection with exact sign evaluation at the dyadic midpoint."""
        enc = self
        for _ in range(steps):
            if enc.sign_lo == 0:
                return enc
            mid = libmp.mpf_shift(libmp.mpf_add(enc.lo, enc.hi), -1)
            s = enc.poly.sign_at_dyadic(*_dyadic(mid))
            if s == 0:
                enc = RootEnclosure(enc.poly, mid, mid, 0)
            elif s == enc.sign_lo:
                enc = RootEnclosure(enc.poly, mid, enc.hi, enc.sign_lo)
            else:
                enc = RootEnclosure(enc.poly, enc.lo, mid, enc.sign_lo)
        return enc


def isolate_root(p: IntPoly, approx, radius, prec: int, check_unique: bool = True) -> RootEnclosure | None:
    """Certify a root near ``approx``.

    Returns a tight sign-change bracket around a root of ``p`` within
    ``radius`` of ``approx``, or None on failure.  With ``check_unique`` the
    derivative must also be nonzero on ``[approx - radius, approx + radius]``,
    so the bracketed root is the only one there.
    """
    r = _newton(p, approx, prec)
    with mpmath.workprec(prec):
        centre, radius = mpmath.mpf(approx), mpmath.mpf(radius)
        if abs(r - centre) > radius:
            return None
        if check_unique and not _derivative_excludes_zero(p, centre - radius, centre + radius, prec):
            return None
        if p.sign_at_dyadic(*_dyadic(r)) == 0:
            return RootEnclosure(p, r._mpf_, r._mpf_, 0)
        eta = min(max(abs(r), 1) * mpmath.mpf(2) ** (-prec + 16), radius)
        br = _bracket(p, r, eta)
        if br is None:
            return None
        lo, hi, s_lo = br
        return RootEnclosure(p, lo._mpf_, hi._mpf_, s_lo)


# -- irreducible factor ---------------------------------------------------------

def _rational_roots(p: IntPoly, prec: int):
    roots = set()
    lead = abs(p.lead)
    for r in _approx_real_roots(p, prec):
        cand = Fraction(*libmp.to_rational(r._mpf_))
        cand = cand.limit_denominator(lead)
        if p.sign_at(cand) == 0:
            roots.add(cand)
    return sorted(roots)


def irreducible_factor(p: IntPoly, root: RootEnclosure) -> IntPoly:
    """Primitive irreducible factor of ``p`` (degree <= 3) vanishing at ``root``."""
    if p.degree < 1:
        raise ValueError("constant polynomial")
    if p.degree > 3:
        raise ValueError("irreducibility test is capped at degree 3")
    if p.degree == 1:
        return p.primitive()
    if p.degree == 2 and not is_square(p.discriminant()):
        return p.primitive()
    prec = 4 * bit_size(*p.coeffs) + 128
    rationals = _rational_roots(p, prec)
    lo, hi = _raw_fraction(root.lo), _raw_fraction(root.hi)
    rest = p
    for q in rationals:
        lin = IntPoly.of(-q.numerator, q.denominator)
        if lo <= q <= hi:
            return lin
        while True:
            try:
                rest = rest.divide_exact(lin)
            except ValueError:
                break
    return rest.primitive()


def _raw_fraction(raw) -> Fraction:
    return Fraction(*libmp.to_rational(raw))


# -- approximants -----------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicApproximant:
    source: IntPoly                 # polynomial the root was isolated from
    poly: IntPoly                   # primitive irreducible factor
    enclosure: RootEnclosure = field(repr=False)

    @property
    def height(self) -> int:
        return self.poly.height

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def interval(self) -> Interval:
        return self.enclosure.interval

    def to_iv(self):
        return self.interval.to_iv()


def _poly_gcd(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive gcd over Q via the Euclidean algorithm on Fraction coefficients."""
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]
    while b:
        while len(a) >= len(b):
            f = a[-1] / b[-1]
            shift = len(a) - len(b)
            for j, c in enumerate(b):
                a[shift + j] -= f * c
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    den = math.lcm(*(c.denominator for c in a))
    return IntPoly(tuple(int(c * den) for c in a)).primitive()


def squarefree_part(p: IntPoly) -> IntPoly:
    if p.degree < 2 or p.discriminant() != 0:
        return p
    g = _poly_gcd(p, p.derivative())
    return p.divide_exact(g) if g.degree > 0 else p


def real_root_count(p: IntPoly) -> int:
    """Number of distinct real roots of a squarefree polynomial of degree <= 3."""
    if p.degree == 1:
        return 1
    disc = p.discriminant()
    if p.degree == 2:
        return 2 if disc > 0 else 0
    return 3 if disc > 0 else 1


def isolate_all(p: IntPoly, prec: int, approx=None):
    """Disjoint certified enclosures of every real root of a squarefree ``p``."""
    n = real_root_count(p)
    if approx is None:
        approx = _approx_real_roots(p, 2 * bit_size(*p.coeffs) + 128)
    if len(approx) != n:
        return None
    approx = sorted(approx)
    with mpmath.workprec(prec):
        gaps = [approx[i + 1] - approx[i] for i in range(n - 1)]
        out = []
        for i, r in enumerate(approx):
            near = ([gaps[i - 1]] if i else []) + ([gaps[i]] if i < n - 1 else [])
            radius = min(near) / 3 if near else max(abs(r), 1)
            enc = isolate_root(p, r, radius, prec, check_unique=False)
            if enc is None:
                return None
            out.append(enc)
    # n disjoint sign changes for n distinct real roots: one root in each
    for e, f in zip(out, out[1:]):
        if not libmp.mpf_lt(e.hi, f.lo):
            return None
    return out


def root_near_xi(p: IntPoly, xi, max_tries: int | None = None) -> AlgebraicApproximant:
    """The real root of ``p`` closest to ``xi`` with a certified enclosure.

    ``xi`` is an enclosure of the real number (``to_iv``, ``bits``, ``refine``),
    refined until the nearest root is certified and its distance to ``xi``
    is bounded away from zero.
    """
    if p.degree < 1:
        raise ValueError("constant polynomial has no root")
    if p.degree > 3:
        raise ValueError("root isolation is capped at degree 3")
    sf = squarefree_part(p)
    if real_root_count(sf) == 0:
        raise NoRealRoot(p.discriminant())
    approx = _approx_real_roots(sf, 2 * bit_size(*sf.coeffs) + 128)
    tries = 0
    while True:
        prec = xi.bits + 3 * bit_size(*sf.coeffs) + 96
        encs = isolate_all(sf, prec, approx)
        if encs is not None:
            with precision(prec):
                t = xi.to_iv()
                dists = [abs(t - e.interval.to_iv()) for e in encs]
            best = min(range(len(encs)), key=lambda i: libmp.to_float(dists[i]._mpi_[1]))
            lo_best, hi_best = dists[best]._mpi_
            if libmp.mpf_gt(lo_best, libmp.fzero) and all(
                    libmp.mpf_lt(hi_best, d._mpi_[0]) for j, d in enumerate(dists) if j != best):
                enc = encs[best]
                return AlgebraicApproximant(p, irreducible_factor(p, enc), enc)
        tries += 1
        if max_tries is not None and tries >= max_tries:
            raise PrecisionExhausted(f"could not isolate the root of {p} nearest xi")
        xi = xi.refine()


def certify_root(p: IntPoly, approx: float, radius: float, prec: int = 256) -> AlgebraicApproximant:
    """Certified root near a float approximation (for enumerated polynomials)."""
    for extra in range(4):
        enc = isolate_root(p, approx, radius, prec << extra)
        if enc is not None:
            return AlgebraicApproximant(p, irreducible_factor(p, enc), enc)
    raise PrecisionExhausted(f"could not isolate root of {p} near {approx}")
