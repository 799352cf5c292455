"""Reference computations written without the package, used as test oracles.

Everything here is deliberately naive: plain lists, Leibniz determinants,
``Fraction`` arithmetic and brute force.
"""
from fractions import Fraction
from itertools import permutations
from math import floor


def perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for p in permutations(range(n)):
        term = perm_sign(p)
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def chain(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = matmul(out, m)
    return out


J = [[0, 1], [-1, 0]]


def sym(x):
    return [[x[0], x[1]], [x[1], x[2]]]


def bracket_oracle(x, y, z):
    """``-x J z J y`` as a plain 2x2 list (not necessarily symmetric)."""
    m = chain(sym(x), J, sym(z), J, sym(y))
    return [[-v for v in row] for row in m]


def trace(m):
    return m[0][0] + m[1][1]


def normalize(t):
    t = tuple(t)
    for c in t:
        if c:
            return t if c > 0 else tuple(-v for v in t)
    return t


def fib_sequence_oracle(a, b, k_max):
    """``y_{-1}, ..., y_{k_max}`` for seed (a, b), via ``y_k = y_{k-1} S y_{k-2}``.

    ``S = AB`` for odd k and ``BA`` for even k; returns a dict k -> triple.
    """
    A = [[a, 1], [1, 0]]
    B = [[b, 1], [1, 0]]
    binv = [[0, 1], [1, -b]]
    AB, BA = matmul(A, B), matmul(B, A)
    mats = {-1: binv, 0: [[1, 0], [0, 1]], 1: A}
    for k in range(2, k_max + 1):
        s = AB if k % 2 else BA
        mats[k] = chain(mats[k - 1], s, mats[k - 2])
    return {k: normalize((m[0][0], m[0][1], m[1][1])) for k, m in mats.items()}


def fibonacci_word_oracle(n):
    """First ``n`` letters of the fixed point of a -> ab, b -> a."""
    w = "a"
    while len(w) < n:
        w = "".join("ab" if c == "a" else "a" for c in w)
    return w[:n]


def cf_of_fraction(x: Fraction, n: int):
    out = []
    while len(out) < n:
        a = floor(x)
        out.append(a)
        if x == a:
            break
        x = 1 / (x - a)
    return out


def xi_fraction(a, b, level=14):
    """A rational within about ``10^-300`` of ``xi_{a,b}`` (a deep level endpoint)."""
    y = fib_sequence_oracle(a, b, level)[level]
    return Fraction(y[1], y[0])


def nearest(x: Fraction) -> int:
    return floor(x + Fraction(1, 2))


def minimal_points_oracle(xi: Fraction, x_max: int):
    """Running strict minima of L over ``x0 = 1..x_max``, exact over a rational xi."""
    xi2 = xi * xi
    best = None
    out = []
    for x0 in range(1, x_max + 1):
        x1, x2 = nearest(x0 * xi), nearest(x0 * xi2)
        val = max(abs(x0 * xi - x1), abs(x0 * xi2 - x2))
        if best is None or val < best:
            best = val
            out.append(((x0, x1, x2), val))
    return out


def first_minimum_oracle(xi: Fraction, X: Fraction):
    """``min max(|x0|/X, X |x0 xi - x1|)`` over a generous search box."""
    best = Fraction(1)  # (0, 1)
    bound = 2 * floor(X) + 2
    for x0 in range(1, bound + 1):
        for x1 in (floor(x0 * xi), floor(x0 * xi) + 1):
            best = min(best, max(Fraction(x0) / X, X * abs(x0 * xi - x1)))
    return best


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_add(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def symbolic_cofactor(u, v):
    """``det [[1, T, T^2], u, v]`` with polynomial entries, expanded by Leibniz."""
    rows = [[[1], [0, 1], [0, 0, 1]], [[c] for c in u], [[c] for c in v]]
    total = [0]
    for p in permutations(range(3)):
        term = [perm_sign(p)]
        for i in range(3):
            term = poly_mul(term, rows[i][p[i]])
        total = poly_add(total, term)
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return total


def quadratic_roots(a, b, c):
    """Real roots of ``a T^2 + b T + c`` in floating point (``a`` may be zero)."""
    import math
    if a == 0:
        return [-c / b] if b else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    s = math.sqrt(disc)
    return sorted({(-b - s) / (2 * a), (-b + s) / (2 * a)})


def spectrum_oracle(xi: float, h: int, alpha_k):
    """Float brute force over primitive ``a T^2 + b T + c`` with ``H <= h``.

    ``alpha_k`` is a set of ``(a, b, c, root)`` to exclude from the floor.
    Returns ``(sorted distances of all roots, floor of |xi - alpha| H^4)``.
    """
    from math import gcd, isqrt
    dists, floor = [], float("inf")
    seen = set()
    for a in range(0, h + 1):
        for b in range(-h, h + 1):
            for c in range(-h, h + 1):
                if (a, b) == (0, 0) or (a == 0 and b < 0) or gcd(gcd(a, b), c) != 1:
                    continue
                if a and b * b - 4 * a * c >= 0 and isqrt(b * b - 4 * a * c) ** 2 == b * b - 4 * a * c:
                    continue  # reducible: its roots are rationals counted at a = 0
                for r in quadratic_roots(a, b, c):
                    key = (a, b, c, round(r, 12))
                    if key in seen:
                        continue
                    seen.add(key)
                    d = abs(xi - r)
                    dists.append(d)
                    if not any((a, b, c) == ex[:3] and abs(r - ex[3]) < 1e-9 for ex in alpha_k):
                        floor = min(floor, d * max(abs(a), abs(b), abs(c)) ** 4)
    return sorted(dists), floor
