"""Interval-set and energy tests.

Fourier coefficients of indicator functions have closed forms on single
intervals; the quadrature oracle below cross-checks the analytic energy
path with a midpoint rule, which is exact for trigonometric polynomials
of degree below the grid size.
"""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from lacuna import (
    DyadicPoint,
    IntervalSet,
    InvalidInputError,
    TrigPolynomial,
    WalshPolynomial,
    energy_on_set,
    interval_fourier,
)


def oracle_interval_fourier(intervals, k):
    """Direct antiderivative of e^{2 pi i k x} over a union of intervals."""
    if k == 0:
        return sum(float(b) - float(a) for a, b in intervals)
    total = 0j
    for a, b in intervals:
        w = 2j * math.pi * k
        total += (cmath.exp(w * float(b)) - cmath.exp(w * float(a))) / w
    return total


def oracle_trig_energy(poly, intervals, n=2**17):
    """Midpoint quadrature of |S|^2 over the set.  The mask endpoints are
    grid-aligned, so the error is the usual O(h^2) midpoint residual."""
    u = (np.arange(n) + 0.5) / n
    vals = np.zeros(n, dtype=complex)
    for freq, c in poly.coefficients.items():
        vals += complex(c) * np.exp(2j * np.pi * freq * u)
    mask = np.zeros(n, dtype=bool)
    for a, b in intervals:
        mask |= (u >= float(a)) & (u < float(b))
    return float(np.sum(np.abs(vals[mask]) ** 2) / n)


# --- interval set algebra -------------------------------------------------


def test_canonicalization_merges_and_sorts():
    E = IntervalSet([(Fraction(1, 2), Fraction(3, 4)), (0, Fraction(1, 2))])
    assert E.intervals == ((Fraction(0), Fraction(3, 4)),)
    assert E.measure == Fraction(3, 4)


def test_invalid_intervals_rejected():
    with pytest.raises(InvalidInputError):
        IntervalSet([(Fraction(1, 2), Fraction(1, 4))])
    with pytest.raises(InvalidInputError):
        IntervalSet([(Fraction(-1, 4), Fraction(1, 4))])
    with pytest.raises(InvalidInputError):
        IntervalSet([(0, Fraction(3, 2))])


def test_complement_and_involution():
    E = IntervalSet([(0, Fraction(4, 5))])
    C = E.complement()
    assert C.intervals == ((Fraction(4, 5), Fraction(1)),)
    assert C.complement().intervals == E.intervals
    assert E.measure + C.measure == 1


def test_translate_wraps_around():
    E = IntervalSet([(0, Fraction(4, 5))])
    T = E.translate(Fraction(1, 4))
    assert T.intervals == (
        (Fraction(0), Fraction(1, 20)),
        (Fraction(1, 4), Fraction(1)),
    )
    assert T.measure == E.measure


def test_arg_string_roundtrip():
    E = IntervalSet([(0, Fraction(1, 4)), (Fraction(1, 2), Fraction(9, 10))])
    assert IntervalSet.parse(E.to_arg_string()).intervals == E.intervals
    with pytest.raises(InvalidInputError):
        IntervalSet.parse("1/2")


def test_intersect():
    E = IntervalSet([(0, Fraction(1, 2))])
    F = IntervalSet([(Fraction(1, 4), Fraction(3, 4))])
    G = E.intersect(F)
    assert G.intervals == ((Fraction(1, 4), Fraction(1, 2)),)
    assert E.intersect(IntervalSet([])).measure == 0


def test_dyadic_translate_is_pointwise_digit_flip():
    """Flipping digit k agrees with XOR by 2^-k on a fine sample grid."""
    E = IntervalSet([(0, Fraction(1, 4)), (Fraction(3, 8), Fraction(1, 2))])
    for k in (1, 2, 3):
        T = E.dyadic_translate(k)
        assert T.measure == E.measure
        scale = 6
        denom = 1 << scale
        mask = 1 << (scale - k)
        for i in range(denom):
            x = Fraction(2 * i + 1, 2 * denom)  # cell midpoints, never on edges
            shifted = Fraction(i ^ mask, denom) + Fraction(1, 2 * denom)
            in_E = any(a <= x < b for a, b in E.intervals)
            in_T = any(a <= shifted < b for a, b in T.intervals)
            assert in_E == in_T, (k, x)


def test_dyadic_translate_is_involution():
    E = IntervalSet([(Fraction(1, 8), Fraction(5, 8)), (Fraction(3, 4), Fraction(13, 16))])
    for k in (1, 2, 4):
        assert E.dyadic_translate(k).dyadic_translate(k).intervals == E.intervals
    with pytest.raises(InvalidInputError):
        E.dyadic_translate(0)


# --- indicator Fourier coefficients --------------------------------------


def test_interval_fourier_zero_mode_is_measure():
    E = IntervalSet([(0, Fraction(2, 7)), (Fraction(1, 2), Fraction(5, 8))])
    assert interval_fourier(E, 0) == pytest.approx(float(E.measure), abs=1e-15)


def test_interval_fourier_full_circle_vanishes():
    E = IntervalSet([(0, 1)])
    for k in (1, -3, 17):
        assert abs(interval_fourier(E, k)) < 1e-15


def test_interval_fourier_half_circle():
    E = IntervalSet([(0, Fraction(1, 2))])
    got = interval_fourier(E, 1)
    assert got == pytest.approx(1j / math.pi, abs=1e-15)


def test_interval_fourier_matches_antiderivative():
    E = IntervalSet([(Fraction(1, 7), Fraction(2, 5)), (Fraction(3, 4), Fraction(9, 10))])
    for k in range(-6, 7):
        want = oracle_interval_fourier(E.intervals, k)
        assert interval_fourier(E, k) == pytest.approx(want, abs=1e-13)


def test_interval_fourier_conjugate_symmetry():
    E = IntervalSet([(Fraction(1, 3), Fraction(2, 3))])
    for k in (1, 2, 5):
        assert interval_fourier(E, -k) == pytest.approx(
            interval_fourier(E, k).conjugate(), abs=1e-15
        )


def test_fourier_bessel_inequality():
    E = IntervalSet([(0, Fraction(7, 8))])
    C = E.complement()
    total = sum(abs(interval_fourier(C, k)) ** 2 for k in range(-200, 201))
    assert total <= float(C.measure) + 1e-12


# --- energy on sets -------------------------------------------------------


def test_trig_energy_full_circle_is_parseval():
    poly = TrigPolynomial({4: 1.5, -16: 2j, 64: -0.5 + 0.25j})
    E = IntervalSet([(0, 1)])
    want = sum(abs(c) ** 2 for c in poly.coefficients.values())
    assert energy_on_set(poly, E) == pytest.approx(want, abs=1e-12)


def test_trig_energy_single_frequency():
    poly = TrigPolynomial({7: 2 - 1j})
    E = IntervalSet([(Fraction(1, 5), Fraction(4, 7))])
    want = abs(2 - 1j) ** 2 * float(E.measure)
    assert energy_on_set(poly, E) == pytest.approx(want, abs=1e-12)


def test_trig_energy_two_frequencies_half_circle():
    # |e^{2 pi i x} + e^{4 pi i x}|^2 integrates to 1 on [0, 1/2): the
    # cross term 2cos(2 pi x) cancels over the half period
    poly = TrigPolynomial({1: 1, 2: 1})
    E = IntervalSet([(0, Fraction(1, 2))])
    assert energy_on_set(poly, E) == pytest.approx(1.0, abs=1e-12)


def test_trig_energy_matches_quadrature():
    rng = np.random.default_rng(7)
    freqs = [4, -4, 16, -16, 20, -12]
    for _ in range(5):
        coeffs = {
            f: complex(rng.standard_normal(), rng.standard_normal()) for f in freqs
        }
        poly = TrigPolynomial(coeffs)
        E = IntervalSet([(Fraction(1, 16), Fraction(3, 8)), (Fraction(1, 2), Fraction(13, 16))])
        want = oracle_trig_energy(poly, E.intervals)
        assert energy_on_set(poly, E) == pytest.approx(want, abs=1e-8)


def test_trig_energy_complement_identity():
    poly = TrigPolynomial({4: 1.0, 16: -0.5, 64: 0.25j})
    E = IntervalSet([(Fraction(1, 7), Fraction(5, 7))])
    total = sum(abs(c) ** 2 for c in poly.coefficients.values())
    got = energy_on_set(poly, E) + energy_on_set(poly, E.complement())
    assert got == pytest.approx(total, abs=1e-10)


def test_walsh_energy_with_non_dyadic_endpoints():
    poly = WalshPolynomial({6: Fraction(3, 2), 2: Fraction(-1, 2)})
    E = IntervalSet([(Fraction(1, 3), Fraction(4, 5))])
    # exact piecewise oracle: the polynomial is constant on dyadic cells
    scale = poly.max_scale
    denom = 1 << scale
    total = Fraction(0)
    for i in range(denom):
        a, b = Fraction(i, denom), Fraction(i + 1, denom)
        lo = max(a, Fraction(1, 3))
        hi = min(b, Fraction(4, 5))
        if lo < hi:
            v = poly.evaluate(DyadicPoint(i, scale))
            total += Fraction(v) ** 2 * (hi - lo)
    assert energy_on_set(poly, E) == pytest.approx(float(total), abs=1e-12)


def test_walsh_energy_full_circle_is_parseval():
    poly = WalshPolynomial({0: 0.25, 6: 1.5, 10: -2.0})
    E = IntervalSet([(0, 1)])
    want = sum(c**2 for c in (0.25, 1.5, -2.0))
    assert energy_on_set(poly, E) == pytest.approx(want, abs=1e-12)


def test_energy_rejects_unknown_polynomial():
    E = IntervalSet([(0, 1)])
    with pytest.raises(InvalidInputError):
        energy_on_set({"not": "a poly"}, E)
