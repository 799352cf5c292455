"""Exact algebra of integer triples viewed as symmetric 2x2 matrices.

A point ``x = (x0, x1, x2)`` of Z^3 is identified with ``[[x0, x1], [x1, x2]]``.
Everything here is exact integer arithmetic except :func:`l_value`, which
returns a certified enclosure.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DependentRows, NotCoplanar
from .intervals import Interval, bit_size, iv_max, precision

Matrix = tuple  # ((a, b), (c, d)) with integer entries

J = ((0, 1), (-1, 0))
IDENTITY = ((1, 0), (0, 1))


@dataclass(frozen=True, slots=True)
class Triple:
    x0: int
    x1: int
    x2: int

    def __iter__(self):
        yield self.x0
        yield self.x1
        yield self.x2

    def __getitem__(self, i):
        return (self.x0, self.x1, self.x2)[i]

    def __add__(self, other):
        return Triple(self.x0 + other.x0, self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other):
        return Triple(self.x0 - other.x0, self.x1 - other.x1, self.x2 - other.x2)

    def __neg__(self):
        return Triple(-self.x0, -self.x1, -self.x2)

    def __mul__(self, c):
        return Triple(c * self.x0, c * self.x1, c * self.x2)

    __rmul__ = __mul__

    def as_matrix(self) -> Matrix:
        return ((self.x0, self.x1), (self.x1, self.x2))

    @classmethod
    def from_matrix(cls, m: Matrix) -> Triple:
        if m[0][1] != m[1][0]:
            raise ValueError(f"matrix {m} is not symmetric")
        return cls(m[0][0], m[0][1], m[1][1])

    def is_zero(self) -> bool:
        return self.x0 == 0 and self.x1 == 0 and self.x2 == 0

    def normalized(self) -> Triple:
        """Representative of ``±self`` whose first nonzero coordinate is positive."""
        for c in self:
            if c:
                return self if c > 0 else -self
        return self

    def content(self) -> int:
        return gcd(self.x0, self.x1, self.x2)

    def __repr__(self):
        return f"Triple({self.x0}, {self.x1}, {self.x2})"


# -- 2x2 integer matrices ----------------------------------------------------

def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def mat_prod(*ms: Matrix) -> Matrix:
    out = IDENTITY
    for m in ms:
        out = mat_mul(out, m)
    return out


def mat_det(m: Matrix) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def abs_det(m: Matrix) -> int:
    """``|det m|``; kept separate from :func:`norm_sup` on purpose."""
    return abs(mat_det(m))


def mat_trace(m: Matrix) -> int:
    return m[0][0] + m[1][1]


def mat_neg(m: Matrix) -> Matrix:
    return ((-m[0][0], -m[0][1]), (-m[1][0], -m[1][1]))


def mat_transpose(m: Matrix) -> Matrix:
    return ((m[0][0], m[1][0]), (m[0][1], m[1][1]))


def is_symmetric(m: Matrix) -> bool:
    return m[0][1] == m[1][0]


def unimodular_inverse(m: Matrix) -> Matrix:
    d = mat_det(m)
    if d not in (1, -1):
        raise ValueError(f"det {d} is not a unit")
    return ((d * m[1][1], -d * m[0][1]), (-d * m[1][0], d * m[0][0]))


def as_matrix(x) -> Matrix:
    return x.as_matrix() if isinstance(x, Triple) else x


# -- the operations ------------------------------------------------------------

def det_triple(x: Triple) -> int:
    return x.x0 * x.x2 - x.x1 * x.x1


def det3(x: Triple, y: Triple, z: Triple) -> int:
    """Determinant of the 3x3 matrix with rows ``x``, ``y``, ``z``."""
    return (x.x0 * (y.x1 * z.x2 - y.x2 * z.x1)
            - x.x1 * (y.x0 * z.x2 - y.x2 * z.x0)
            + x.x2 * (y.x0 * z.x1 - y.x1 * z.x0))


def trace_form(x: Triple, y: Triple, z: Triple) -> int:
    """``trace(J x J z J y)``, which coincides with ``det3(x, y, z)``."""
    return mat_trace(mat_prod(J, x.as_matrix(), J, z.as_matrix(), J, y.as_matrix()))


def bracket(x: Triple, y: Triple, z: Triple) -> Triple:
    """The symmetric product ``[x, y, z] = -x J z J y``.

    Only defined when ``det3(x, y, z) == 0``; otherwise the product is not
    symmetric and :class:`NotCoplanar` is raised.
    """
    d = det3(x, y, z)
    if d != 0:
        raise NotCoplanar(d)
    return Triple.from_matrix(mat_neg(mat_prod(x.as_matrix(), J, z.as_matrix(), J, y.as_matrix())))


def norm_sup(x: Triple) -> int:
    return max(abs(x.x0), abs(x.x1), abs(x.x2))


def l_value(x: Triple, xi, bits=None) -> Interval:
    """Certified enclosure of ``L(x) = max(|x0 xi - x1|, |x0 xi^2 - x2|)``.

    ``xi`` is anything exposing ``to_iv()`` and ``bits`` (an enclosure of the
    real number).  The result is only as tight as ``xi``; refine ``xi`` to
    tighten it.
    """
    prec = (bits or xi.bits) + 2 * bit_size(*x) + 32
    with precision(prec):
        t = xi.to_iv()
        first = abs(x.x0 * t - x.x1)
        second = abs(x.x0 * t * t - x.x2)
        return Interval.from_iv(iv_max(first, second))


@dataclass(frozen=True, slots=True)
class SubspacePlucker:
    """The 2x2 minors ``m_ij = x_i y_j - x_j y_i`` of the matrix with rows x, y."""

    m01: int
    m02: int
    m12: int

    def __iter__(self):
        yield self.m01
        yield self.m02
        yield self.m12

    def __neg__(self):
        return SubspacePlucker(-self.m01, -self.m02, -self.m12)

    @property
    def height(self) -> int:
        return max(abs(self.m01), abs(self.m02), abs(self.m12))

    @property
    def content(self) -> int:
        return gcd(self.m01, self.m02, self.m12)

    @property
    def is_saturated_basis(self) -> bool:
        """The rows form a basis of ``V ∩ Z^3`` iff the minors are coprime."""
        return self.content == 1


def plucker(x: Triple, y: Triple) -> SubspacePlucker:
    p = SubspacePlucker(x.x0 * y.x1 - x.x1 * y.x0,
                        x.x0 * y.x2 - x.x2 * y.x0,
                        x.x1 * y.x2 - x.x2 * y.x1)
    if p.m01 == 0 and p.m02 == 0 and p.m12 == 0:
        raise DependentRows(f"{x} and {y} are linearly dependent")
    return p


def subspace_height(x: Triple, y: Triple) -> int:
    return plucker(x, y).height


# index patterns (r, s, t, u) in {0,1,2} with s - r = u - t > 0
MINOR_PATTERNS = [(r, s, t, u) for r in range(3) for s in range(3) for t in range(3) for u in range(3)
                  if s - r == u - t and s > r]


def bracket_ratios(x: Triple, y: Triple, z: Triple, xi) -> dict:
    """Ratios LHS / RHS of the three determinant estimates for ``x, y, z``.

    Keys ``i`` (worst 2x2 minor), ``ii`` (3x3 determinant), ``iii_norm`` and
    ``iii_L`` (for ``w = [x, x, y]``, only when ``det3(x, x, y) == 0``, which
    always holds).  Values are certified intervals.
    """
    w = bracket(x, x, y)
    lx, ly, lz, lw = (l_value(v, xi) for v in (x, y, z, w))
    nx, ny, nz, nw = (norm_sup(v) for v in (x, y, z, w))
    prec = xi.bits + 4 * bit_size(nx, ny, nz, nw) + 64
    with precision(prec):
        Lx, Ly, Lz, Lw = (v.to_iv() for v in (lx, ly, lz, lw))
        pair = nx * Ly + ny * Lx
        minor = max(abs(x[r] * y[u] - x[s] * y[t]) for r, s, t, u in MINOR_PATTERNS)
        out = {
            "i": minor / pair,
            "ii": abs(det3(x, y, z)) / (nx * Ly * Lz + ny * Lx * Lz + nz * Lx * Ly),
            "iii_norm": nw / (nx * nx * Ly + ny * Lx * Lx),
            "iii_L": Lw / (pair * Lx),
        }
        return {k: Interval.from_iv(v, 64) for k, v in out.items()}
