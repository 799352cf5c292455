"""Measure the empirical constants recorded in ``tests/fixtures/constants.json``.

Every constant is a measured extreme, widened by ``MARGIN`` in the safe
direction and rounded to four significant digits, so later runs compare
against a slightly looser bound than the one observed.
"""
from __future__ import annotations

import math

from . import __version__
from .approximants import (a_poly, cubic_frac, default_ell, qk_ratios, cubic_monitor,
                           qk_poly, quadratic_spectrum, approximation_witness)
from .minimal import lemma41_stats, minimal_points, rational_floor
from .sequence import ExtremalSequence, growth_report
from .triples import bracket_ratios

MARGIN = 1.1


def _up(x: float) -> float:
    return float(f"{x * MARGIN:.4g}") if x > 0 else float(f"{x / MARGIN:.4g}")


def _down(x: float) -> float:
    return float(f"{x / MARGIN:.4g}") if x > 0 else float(f"{x * MARGIN:.4g}")


def _spread(lo: float, hi: float) -> float:
    """Smallest ``C`` with every observed ratio inside ``[1/C, C]``."""
    return _up(max(hi, 1 / lo))


def bracket_ratio_max(seq, k_max: int) -> dict:
    """Largest upper end of each determinant-estimate ratio over consecutive
    sequence points, and over ``w = [y_{k-1}, y_{k-1}, y_{k-3}]``."""
    xi = seq.enclosure(k_max + 2)
    worst: dict = {}
    for k in range(3, k_max):
        for x, y, z in ((seq[k - 1], seq[k], seq[k + 1]), (seq[k - 1], seq[k - 3], seq[k])):
            for key, val in bracket_ratios(x, y, z, xi).items():
                worst[key] = max(worst.get(key, 0.0), float(val.upper))
    return worst


def measure_constants(a: int = 1, b: int = 2, k_max: int = 25, x_max: int = 10 ** 5,
                      h_max: int = 60, q_max: int = 10 ** 5) -> dict:
    seq = ExtremalSequence.fibonacci(a, b)
    out: dict = {"seed": [a, b], "version": __version__}

    report = growth_report(seq, k_max)
    out["c1"] = _up(report.c1)
    out["c2"] = _up(report.c2)

    ly = [r.l_times_norm.mid for r in report.rows if r.k >= 3]
    out["ly_C"] = _spread(min(ly), max(ly))
    out["bracket_C"] = _up(max(bracket_ratio_max(seq, k_max).values()))

    recs = minimal_points(seq.enclosure(8), x_max)
    ratios = [r.ratio.mid for r in lemma41_stats(recs)]
    out["plane_height_C"] = _spread(min(ratios), max(ratios))

    floor, _ = rational_floor(seq.enclosure(8), q_max)
    out["rational_floor_C"] = _down(floor.lower)

    rows = qk_ratios(seq, range(5, k_max + 1))
    out["qk_C"] = _spread(min(min(r.height_ratio, r.derivative_ratio.lower, r.value_ratio.lower) for r in rows),
                              max(max(r.height_ratio, r.derivative_ratio.upper, r.value_ratio.upper) for r in rows))

    wit = approximation_witness(seq, range(1, 61), 20)
    out["witness_C"] = _up(max(w.constant for w in wit))

    spec = quadratic_spectrum(seq.enclosure(4), h_max)
    out["c3_floor"] = _down(spec.floor.lower)
    out["c3_h_max"] = h_max

    ell = default_ell(seq)
    mon = [cubic_monitor(cubic_frac(seq, k, 1), seq.norm(k)).lower for k in range(2, k_max + 1)]
    out["cubic_log10_floor"] = _down(min(mon)) if min(mon) > 0 else math.floor(min(mon) * 100) / 100
    out["ell"] = ell
    assert all((qk_poly(seq, k + 1) * seq.d(k - 1) + a_poly(seq, k) * seq.d(k)).is_zero()
               for k in range(2, 10))
    return out
