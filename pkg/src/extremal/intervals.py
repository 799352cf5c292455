"""Certified real enclosures on top of mpmath's outward-rounded interval arithmetic.

All transient computation happens in ``mpmath.iv`` at an explicitly chosen
binary precision.  Results that leave a computation are frozen into
:class:`Interval`, whose endpoints are exact dyadic rationals and therefore
independent of the global mpmath precision.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import mpmath
from mpmath import iv, libmp

_HALF = libmp.from_rational(1, 2, 10)


@contextmanager
def precision(bits):
    """Temporarily set the working precision (in bits) of ``mpmath.iv``."""
    saved = iv.prec
    iv.prec = max(int(bits), 64)
    try:
        yield
    finally:
        iv.prec = saved


def bit_size(*values):
    """Largest bit length among integer arguments (at least 1)."""
    return max([1] + [abs(int(v)).bit_length() for v in values])


def iv_rational(num, den=1):
    """Outward-rounded enclosure of ``num / den`` at the current precision."""
    if den == 1:
        return iv.mpf(num)
    return iv.mpf(num) / iv.mpf(den)


def iv_max(x, y):
    """Enclosure of ``max(s, t)`` for ``s`` in ``x`` and ``t`` in ``y``."""
    (xa, xb), (ya, yb) = x._mpi_, y._mpi_
    lo = xa if libmp.mpf_ge(xa, ya) else ya
    hi = xb if libmp.mpf_ge(xb, yb) else yb
    return iv.make_mpf((lo, hi))


def iv_min(x, y):
    (xa, xb), (ya, yb) = x._mpi_, y._mpi_
    lo = xa if libmp.mpf_le(xa, ya) else ya
    hi = xb if libmp.mpf_le(xb, yb) else yb
    return iv.make_mpf((lo, hi))


def _raw_to_fraction(raw):
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with dyadic-rational endpoints.

    Endpoints are stored in mpmath's raw ``mpf`` tuple form so that huge
    intervals can be carried around without ever normalising a Fraction.
    """

    lo_raw: tuple
    hi_raw: tuple

    @classmethod
    def from_iv(cls, value, bits=None):
        """Freeze an ``iv.mpf``; optionally round outward to ``bits`` of mantissa."""
        a, b = value._mpi_
        if bits is not None:
            a = libmp.mpf_pos(a, bits, libmp.round_floor)
            b = libmp.mpf_pos(b, bits, libmp.round_ceiling)
        return cls(a, b)

    @classmethod
    def point(cls, value: int):
        raw = libmp.from_int(int(value))
        return cls(raw, raw)

    @cached_property
    def lo(self) -> Fraction:
        return _raw_to_fraction(self.lo_raw)

    @cached_property
    def hi(self) -> Fraction:
        return _raw_to_fraction(self.hi_raw)

    @property
    def lower(self) -> float:
        return libmp.to_float(self.lo_raw, rnd=libmp.round_floor)

    @property
    def upper(self) -> float:
        return libmp.to_float(self.hi_raw, rnd=libmp.round_ceiling)

    @property
    def mid(self) -> float:
        return libmp.to_float(libmp.mpf_add(self.lo_raw, self.hi_raw, 80), rnd='n') / 2

    @property
    def width(self) -> float:
        """Width rounded upward to a float."""
        return libmp.to_float(libmp.mpf_sub(self.hi_raw, self.lo_raw, 64, libmp.round_ceiling),
                              rnd=libmp.round_ceiling)

    def width_mpf(self):
        return mpmath.mpf(libmp.mpf_sub(self.hi_raw, self.lo_raw, 64, libmp.round_ceiling))

    def to_iv(self):
        """The exact interval as an ``iv.mpf`` (endpoints are not rounded)."""
        return iv.make_mpf((self.lo_raw, self.hi_raw))

    def contains(self, other) -> bool:
        if isinstance(other, Interval):
            return (libmp.mpf_le(self.lo_raw, other.lo_raw)
                    and libmp.mpf_ge(self.hi_raw, other.hi_raw))
        return self.lo <= other <= self.hi

    def is_disjoint(self, other: Interval) -> bool:
        return libmp.mpf_lt(self.hi_raw, other.lo_raw) or libmp.mpf_lt(other.hi_raw, self.lo_raw)

    def is_below(self, other: Interval) -> bool:
        """Every point of ``self`` is strictly smaller than every point of ``other``."""
        return libmp.mpf_lt(self.hi_raw, other.lo_raw)

    def render(self, digits=12):
        return f"{self.lower:.{digits}g}", f"{self.upper:.{digits}g}"

    def __repr__(self):
        lo, hi = self.render()
        return f"Interval([{lo}, {hi}])"


def nearest_integer(x):
    """The integer nearest to every point of ``x`` (an ``iv.mpf``), or None.

    None means the enclosure contains a half-integer, so the caller has to
    tighten it before the decision can be certified.
    """
    a, b = x._mpi_
    shifted_a = libmp.mpf_add(a, _HALF, 0)
    shifted_b = libmp.mpf_add(b, _HALF, 0)
    n_a = libmp.to_int(libmp.mpf_floor(shifted_a))
    n_b = libmp.to_int(libmp.mpf_floor(shifted_b))
    if n_a != n_b or libmp.mpf_eq(libmp.mpf_floor(shifted_a), shifted_a):
        return None
    return int(n_a)


def distance_to_integer(x):
    """Return ``(n, d)`` with ``n`` the certified nearest integer and ``d``
    an ``iv.mpf`` enclosure of ``|x - n|``; ``(None, None)`` if ambiguous."""
    n = nearest_integer(x)
    if n is None:
        return None, None
    return n, abs(x - n)


def log_interval(x):
    """Enclosure of ``log x`` for a strictly positive ``iv.mpf``."""
    if not libmp.mpf_gt(x._mpi_[0], libmp.fzero):
        raise ValueError("logarithm of an interval that is not strictly positive")
    return iv.log(x)


def log2_floor(n: int) -> float:
    """Cheap float estimate of ``log2 |n|`` that never overflows."""
    n = abs(int(n))
    bits = n.bit_length()
    if bits <= 1000:
        return math.log2(n)
    return math.log2(n >> (bits - 64)) + (bits - 64)
