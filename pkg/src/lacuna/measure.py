"""Exact algebra of finite unions of half-open intervals in [0, 1).

Endpoints are `fractions.Fraction` end to end; floating point enters
only in the complex exponentials of `interval_fourier`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError, ResourceError

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _coerce_endpoint(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise InvalidInputError(f"bad interval endpoint {x!r}")


@dataclass(frozen=True)
class IntervalSet:
    """Sorted disjoint half-open intervals [a_i, b_i) inside [0, 1).

    Construction canonicalizes: intervals are sorted, overlapping or
    touching pieces are merged, empty pieces dropped.  The empty set is
    the zero-interval value and the full circle is the single interval
    [0, 1).
    """

    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, intervals=()):
        cleaned = []
        for a, b in intervals:
            a = _coerce_endpoint(a)
            b = _coerce_endpoint(b)
            if not (_ZERO <= a and b <= _ONE):
                raise InvalidInputError(f"interval [{a}, {b}) leaves [0, 1)")
            if a > b:
                raise InvalidInputError(f"interval [{a}, {b}) is reversed")
            if a < b:
                cleaned.append((a, b))
        cleaned.sort()
        merged: list[list[Fraction]] = []
        for a, b in cleaned:
            if merged and a <= merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1][1] = b
            else:
                merged.append([a, b])
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in merged))

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls(((_ZERO, _ONE),))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """Parse "0/1:4/5,9/10:1/1" style interval lists."""
        text = text.strip()
        if not text:
            return cls.empty()
        pieces = []
        for chunk in text.split(","):
            try:
                a_str, b_str = chunk.split(":")
                pieces.append((Fraction(a_str.strip()), Fraction(b_str.strip())))
            except (ValueError, ZeroDivisionError) as exc:
                raise InvalidInputError(f"bad interval chunk {chunk!r}") from exc
        return cls(pieces)

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), _ZERO)

    def contains(self, x) -> bool:
        x = _coerce_endpoint(x)
        return any(a <= x < b for a, b in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo = max(a, c)
                hi = min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet(out)

    def complement(self) -> "IntervalSet":
        out = []
        cursor = _ZERO
        for a, b in self.intervals:
            if cursor < a:
                out.append((cursor, a))
            cursor = b
        if cursor < _ONE:
            out.append((cursor, _ONE))
        return IntervalSet(out)

    def translate(self, s) -> "IntervalSet":
        """Shift by s modulo 1, splitting the piece that wraps."""
        s = _coerce_endpoint(s) % 1
        out = []
        for a, b in self.intervals:
            a2, b2 = a + s, b + s
            if b2 <= _ONE:
                out.append((a2, b2))
            elif a2 >= _ONE:
                out.append((a2 - 1, b2 - 1))
            else:
                out.append((a2, _ONE))
                out.append((_ZERO, b2 - 1))
        return IntervalSet(out)

    def dyadic_translate(self, k: int) -> "IntervalSet":
        """Flip the k-th binary digit of every point (an involution).

        On each scale-k cell pair the map is a plain translation by
        +-2^-k, so interval endpoints stay rational and the measure is
        preserved.
        """
        if not isinstance(k, int) or k < 1:
            raise InvalidInputError("digit position must be a positive integer")
        step = Fraction(1, 2**k)
        out = []
        for a, b in self.intervals:
            lo_cell = a // step
            while a < b:
                cell_end = (lo_cell + 1) * step
                hi = min(b, cell_end)
                delta = step if lo_cell % 2 == 0 else -step
                out.append((a + delta, hi + delta))
                a = cell_end
                lo_cell += 1
        return IntervalSet(out)

    def to_json_list(self) -> list:
        return [
            [a.numerator, a.denominator, b.numerator, b.denominator]
            for a, b in self.intervals
        ]

    @classmethod
    def from_json_list(cls, data) -> "IntervalSet":
        return cls(
            (Fraction(an, ad), Fraction(bn, bd)) for an, ad, bn, bd in data
        )

    def to_arg_string(self) -> str:
        """Inverse of parse: the --set flag format a:b,c:d."""
        return ",".join(f"{a}:{b}" for a, b in self.intervals)


def interval_fourier(E: IntervalSet, k: int) -> complex:
    """Exact closed form of the integral of e^{2 pi i k x} over E.

    For k == 0 this is the measure.  Phases are reduced modulo 1 in
    exact rational arithmetic before exponentiation, so large k times
    fine endpoints lose no accuracy.
    """
    if k == 0:
        return complex(float(E.measure), 0.0)
    total = 0j
    denom = 2j * cmath.pi * k
    for a, b in E.intervals:
        pa = (k * a) % 1
        pb = (k * b) % 1
        total += cmath.exp(2j * cmath.pi * float(pb)) - cmath.exp(
            2j * cmath.pi * float(pa)
        )
    return total / denom


def _trig_energy(coefficients: dict, E: IntervalSet) -> float:
    cache: dict[int, complex] = {}

    def phi(d: int) -> complex:
        if d not in cache:
            cache[d] = interval_fourier(E, d)
        return cache[d]

    items = sorted(coefficients.items())
    total = 0j
    for t, ct in items:
        for s, cs in items:
            total += complex(ct) * complex(cs).conjugate() * phi(t - s)
    return total.real


def _walsh_energy(cell_values, scale: int, E: IntervalSet) -> float:
    if scale > 20:
        raise ResourceError("cell-exact energy is capped at scale 20")
    step = Fraction(1, 2**scale)
    total = 0.0
    for a, b in E.intervals:
        cell = int(a // step)
        while a < b:
            cell_end = (cell + 1) * step
            hi = min(b, cell_end)
            total += float(cell_values[cell]) ** 2 * float(hi - a)
            a = cell_end
            cell += 1
    return total


def energy_on_set(S, E: IntervalSet) -> float:
    """Integral of |S|^2 over E.

    Trigonometric polynomials use the bilinear expansion against exact
    interval Fourier integrals; Walsh polynomials integrate their
    piecewise-constant cells against exact cell/E overlaps.
    """
    # imported here to avoid a module cycle with trig/walsh plumbing
    from .trig import TrigPolynomial
    from .walsh import WalshPolynomial

    if isinstance(S, TrigPolynomial):
        return _trig_energy(S.coefficients, E)
    if isinstance(S, WalshPolynomial):
        if not S.coefficients:
            return 0.0
        return _walsh_energy(S.cell_values(), S.max_scale, E)
    raise InvalidInputError("energy_on_set expects a trig or Walsh polynomial")
