"""Exact dyadic-point arithmetic, Rademacher/Walsh evaluation, the
signed shift-sum identity, shifted-set search, and coefficient recovery.

No floating point is used on the group side: points are dyadic
rationals, XOR is digit-wise, and shift sums are plain integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import InvalidInputError, InvalidOrderError, ResourceError
from .measure import IntervalSet


@dataclass(frozen=True, eq=False)
class DyadicPoint:
    """numerator / 2**scale in [0, 1); equality is value equality."""

    numerator: int
    scale: int

    def __post_init__(self) -> None:
        if self.scale < 0 or not 0 <= self.numerator < (1 << self.scale):
            raise InvalidInputError(
                f"dyadic point needs 0 <= numerator < 2**scale, "
                f"got {self.numerator}/2**{self.scale}"
            )

    def _canonical(self) -> tuple[int, int]:
        num, sc = self.numerator, self.scale
        if num == 0:
            return 0, 0
        while num % 2 == 0:
            num //= 2
            sc -= 1
        return num, sc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DyadicPoint):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(self._canonical())

    def __float__(self) -> float:
        return self.numerator / (1 << self.scale)

    def __repr__(self) -> str:
        return f"DyadicPoint({self.numerator}/2**{self.scale})"

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.scale)

    @classmethod
    def zero(cls) -> "DyadicPoint":
        return cls(0, 0)

    @classmethod
    def from_fraction(cls, value) -> "DyadicPoint":
        fr = Fraction(value)
        if not 0 <= fr < 1:
            raise InvalidInputError(f"point {fr} is outside [0, 1)")
        den = fr.denominator
        scale = den.bit_length() - 1
        if 1 << scale != den:
            raise InvalidInputError(f"{fr} is not a dyadic rational")
        return cls(fr.numerator, scale)

    @classmethod
    def parse(cls, text: str) -> "DyadicPoint":
        try:
            return cls.from_fraction(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"bad dyadic point {text!r}") from exc

    def at_scale(self, scale: int) -> "DyadicPoint":
        if scale >= self.scale:
            return DyadicPoint(self.numerator << (scale - self.scale), scale)
        shift = self.scale - scale
        if self.numerator % (1 << shift):
            raise InvalidInputError(f"{self!r} is not representable at scale {scale}")
        return DyadicPoint(self.numerator >> shift, scale)

    def digit(self, k: int) -> int:
        """k-th binary digit (k >= 1), terminating-expansion convention."""
        if k < 1:
            raise InvalidInputError("digit position must be >= 1")
        if k > self.scale:
            return 0
        return (self.numerator >> (self.scale - k)) & 1

    def xor(self, other: "DyadicPoint") -> "DyadicPoint":
        """Digit-wise XOR (the dyadic group operation)."""
        scale = max(self.scale, other.scale)
        a = self.at_scale(scale).numerator
        b = other.at_scale(scale).numerator
        return DyadicPoint(a ^ b, scale)

    def xor_pow2(self, k: int) -> "DyadicPoint":
        """Flip digit k, i.e. XOR with 2**-k."""
        if k < 1:
            raise InvalidInputError("digit position must be >= 1")
        scale = max(self.scale, k)
        num = self.at_scale(scale).numerator ^ (1 << (scale - k))
        return DyadicPoint(num, scale)


def rademacher(n: int, x: DyadicPoint) -> int:
    """(-1)**(n-th binary digit of x); right-continuous at dyadic points."""
    if n < 1:
        raise InvalidInputError("Rademacher index must be >= 1")
    return -1 if x.digit(n) else 1


@dataclass(frozen=True)
class WalshIndex:
    """Dyadic-sum frequency m = 2**k_1 + ... + 2**k_s, k_1 > ... > k_s >= 1."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = self.exponents
        if not exps:
            raise InvalidInputError("index needs at least one exponent")
        if any(k < 1 for k in exps):
            raise InvalidInputError("exponents must be >= 1")
        if any(exps[i] <= exps[i + 1] for i in range(len(exps) - 1)):
            raise InvalidInputError("exponents must be strictly decreasing")

    @property
    def value(self) -> int:
        return sum(1 << k for k in self.exponents)

    @property
    def order(self) -> int:
        return len(self.exponents)

    @classmethod
    def from_value(cls, m: int) -> "WalshIndex":
        if m < 2 or m % 2:
            raise InvalidInputError(
                f"index value must be even and >= 2, got {m} "
                "(binary ones must sit at positions >= 1)"
            )
        exps = tuple(k for k in range(m.bit_length() - 1, 0, -1) if (m >> k) & 1)
        return cls(exps)


def walsh_eval(m: WalshIndex, x: DyadicPoint) -> int:
    """Product of rademacher(k, x) over the exponents of m."""
    parity = 0
    for k in m.exponents:
        parity ^= x.digit(k)
    return -1 if parity else 1


def _exponents_of(m: int) -> tuple[int, ...]:
    if m == 0:
        return ()
    return WalshIndex.from_value(m).exponents


def _reversed_mask(m: int, scale: int) -> int:
    # cell index bit (scale - k) corresponds to binary digit k of the point
    mask = 0
    for k in _exponents_of(m):
        mask |= 1 << (scale - k)
    return mask


def _fwht(values: np.ndarray) -> np.ndarray:
    """In-place fast Walsh-Hadamard transform, natural (Hadamard) order."""
    n = values.size
    h = 1
    while h < n:
        view = values.reshape(-1, 2 * h)
        left = view[:, :h]
        right = view[:, h:]
        tmp = left - right
        left += right
        right[:] = tmp
        h *= 2
    return values


@dataclass(frozen=True)
class WalshPolynomial:
    """Finite real combination of Walsh functions, keyed by index value.

    Keys are 0 (the constant) or even integers whose binary ones sit at
    positions >= 1.  Zero coefficients are dropped.  The polynomial is
    piecewise constant on the 2**max_scale cells of [0, 1).
    """

    coefficients: Mapping[int, float]

    def __init__(self, coefficients: Mapping[int, float]):
        cleaned = {}
        for m, a in coefficients.items():
            if m != 0:
                _exponents_of(int(m))  # validates the key
            if a:
                cleaned[int(m)] = a
        object.__setattr__(self, "coefficients", cleaned)

    @property
    def max_scale(self) -> int:
        exps = [m.bit_length() - 1 for m in self.coefficients if m]
        return max(exps) if exps else 0

    def evaluate(self, x: DyadicPoint) -> float:
        total = 0.0
        for m, a in self.coefficients.items():
            parity = 0
            for k in _exponents_of(m):
                parity ^= x.digit(k)
            total += -a if parity else a
        return total

    def cell_values(self, scale: int | None = None) -> np.ndarray:
        """Values on the 2**scale cells (default max_scale), via the
        fast transform."""
        if scale is None:
            scale = self.max_scale
        elif scale < self.max_scale:
            raise InvalidInputError("scale is coarser than the polynomial support")
        if scale > 24:
            raise ResourceError("cell enumeration is capped at scale 24")
        arr = np.zeros(1 << scale, dtype=np.float64)
        for m, a in self.coefficients.items():
            arr[_reversed_mask(m, scale)] += a
        return _fwht(arr)

    def norm2(self) -> float:
        return float(np.sqrt(sum(float(a) ** 2 for a in self.coefficients.values())))

    def to_json_dict(self) -> dict:
        return {
            "coefficients": [
                {"value_m": m, "coeff": self.coefficients[m]}
                for m in sorted(self.coefficients)
            ]
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "WalshPolynomial":
        return cls({int(c["value_m"]): float(c["coeff"]) for c in data["coefficients"]})


def synthesize(coefficients: Mapping[int, float]) -> WalshPolynomial:
    """Build a polynomial from an index-value -> coefficient map."""
    return WalshPolynomial(dict(coefficients))


def shift_sum(n: WalshIndex, m: WalshIndex, alpha: DyadicPoint) -> int:
    """Signed sum of w_n over the 2**l XOR-shifts of alpha by m's digits.

    Exact integer arithmetic; the value is 0 unless n == m, in which
    case it is +-2**l.  Orders of n and m must agree.
    """
    l = m.order
    if n.order != l:
        raise InvalidOrderError(
            f"index orders differ: {n.order} vs {l}; the identity needs equal orders"
        )
    total = 0
    for bits in range(1 << l):
        point = alpha
        parity = 0
        for j, k in enumerate(m.exponents):
            if (bits >> j) & 1:
                point = point.xor_pow2(k)
                parity ^= 1
        w = walsh_eval(n, point)
        total += -w if parity else w
    return total


def shift_sum_bulk(
    ns: Sequence[WalshIndex], m: WalshIndex, alphas: Sequence[DyadicPoint]
) -> np.ndarray:
    """shift_sum for many n and alpha at once; shape (len(alphas), len(ns)).

    Vectorized over int64 bit masks, so all exponents and alpha scales
    must stay below 63.
    """
    scale = max(
        [m.exponents[0]]
        + [n.exponents[0] for n in ns]
        + [a.scale for a in alphas]
    )
    if scale > 62:
        raise ResourceError("bulk shift sums are capped at scale 62; go scalar")
    a_bits = np.array([a.at_scale(scale).numerator for a in alphas], dtype=np.int64)
    n_masks = np.array([_reversed_mask(n.value, scale) for n in ns], dtype=np.int64)
    sub_masks = np.zeros(1 << m.order, dtype=np.int64)
    sub_signs = np.zeros(1 << m.order, dtype=np.int64)
    for bits in range(1 << m.order):
        mask = 0
        for j, k in enumerate(m.exponents):
            if (bits >> j) & 1:
                mask |= 1 << (scale - k)
        sub_masks[bits] = mask
        sub_signs[bits] = -1 if bin(bits).count("1") % 2 else 1
    shifted = a_bits[:, None] ^ sub_masks[None, :]
    hits = np.bitwise_count(
        shifted[:, :, None].astype(np.uint64) & n_masks[None, None, :].astype(np.uint64)
    ).astype(np.int64)
    walsh_signs = 1 - 2 * (hits & 1)
    return np.einsum("s,asn->an", sub_signs, walsh_signs)


def find_alpha(
    E: IntervalSet, exponents: Sequence[int]
) -> DyadicPoint | None:
    """Point whose 2**l digit-flip shifts all stay inside E, if one exists.

    Runs the intersection recursion E_{j+1} = E_j meet (E_j shifted by
    digit k_{j+1}); when the final set is nonempty the leftmost
    sufficiently fine dyadic point of it is returned, otherwise None.
    A nonempty result is guaranteed when |E| > 1 - 2**-l.
    """
    exps = tuple(exponents)
    if not exps or any(k < 1 for k in exps) or any(
        exps[i] <= exps[i + 1] for i in range(len(exps) - 1)
    ):
        raise InvalidInputError("exponents must be strictly decreasing and >= 1")
    current = E
    for k in exps:
        current = current.intersect(current.dyadic_translate(k))
    if current.is_empty():
        return None
    a, b = current.intervals[0]
    scale = max(exps[0], _endpoint_scale(a), _endpoint_scale(b)) + 1
    while True:
        step = Fraction(1, 1 << scale)
        num = -((-a) // step)  # ceil(a / step)
        candidate = num * step
        if candidate < b:
            point = DyadicPoint(int(num), scale)
            break
        scale += 1
    for bits in range(1 << len(exps)):
        shifted = point
        for j, k in enumerate(exps):
            if (bits >> j) & 1:
                shifted = shifted.xor_pow2(k)
        if not E.contains(shifted.as_fraction()):
            raise RuntimeError("internal: shifted point escaped the source set")
    return point


def _endpoint_scale(x: Fraction) -> int:
    den = x.denominator
    scale = den.bit_length() - 1
    if 1 << scale == den:
        return scale
    return den.bit_length()


def recover_coefficient(
    S: WalshPolynomial | Callable[[DyadicPoint], float],
    m: WalshIndex,
    alpha: DyadicPoint,
) -> float:
    """Read off the coefficient of w_m from point values of S.

    Exact for polynomials supported on indices of order exactly
    m.order: all other terms cancel in the signed shift sum.  Mixed
    lower orders do not cancel in general, and indices containing all
    of m's exponents plus extras never arise at equal order.
    """
    def value_at(p: DyadicPoint) -> float:
        if isinstance(S, WalshPolynomial):
            return S.evaluate(p)
        return float(S(p))

    numer = 0.0
    for bits in range(1 << m.order):
        point = alpha
        parity = 0
        for j, k in enumerate(m.exponents):
            if (bits >> j) & 1:
                point = point.xor_pow2(k)
                parity ^= 1
        v = value_at(point)
        numer += -v if parity else v
    denom = shift_sum(m, m, alpha)
    return numer / denom
