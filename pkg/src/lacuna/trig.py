"""Trigonometric and Walsh polynomial numerics.

Grid synthesis via the FFT, L^p norms (exact where the structure
permits, quadrature otherwise), cosine-product expansion, Riesz
products with exact dyadic-rational coefficients, the modulation
projection factor, and Walsh-sign decoration of chaos sums.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    AliasingError,
    InvalidInputError,
    InvalidSupportError,
    ResourceError,
    UndefinedRatioError,
)
from .lacunary import ChaosIndexSet
from .walsh import DyadicPoint, WalshPolynomial, rademacher


@dataclass(frozen=True)
class TrigPolynomial:
    """Sparse finite map frequency -> coefficient.

    Coefficients may be complex numbers or `Fraction`s; the exact
    rational kind survives the symbolic operations (cosine products,
    Riesz expansion, projection) and is coerced to complex only at
    grid synthesis time.  Zero coefficients are dropped.
    """

    coefficients: Mapping[int, complex]

    def __init__(self, coefficients: Mapping[int, complex]):
        cleaned = {int(m): c for m, c in coefficients.items() if c != 0}
        object.__setattr__(self, "coefficients", cleaned)

    @property
    def degree(self) -> int:
        if not self.coefficients:
            return 0
        return max(abs(m) for m in self.coefficients)

    def norm2(self) -> float:
        return float(np.sqrt(sum(abs(complex(c)) ** 2 for c in self.coefficients.values())))

    def __len__(self) -> int:
        return len(self.coefficients)

    def scaled(self, factor) -> "TrigPolynomial":
        return TrigPolynomial({m: c * factor for m, c in self.coefficients.items()})

    def to_json_dict(self) -> dict:
        out = []
        for m in sorted(self.coefficients):
            c = complex(self.coefficients[m])
            out.append({"freq": m, "re": c.real, "im": c.imag})
        return {"coefficients": out}

    @classmethod
    def from_json_dict(cls, data: dict) -> "TrigPolynomial":
        return cls(
            {
                int(c["freq"]): complex(float(c["re"]), float(c.get("im", 0.0)))
                for c in data["coefficients"]
            }
        )


@dataclass(frozen=True)
class GridEvaluation:
    """Values of a polynomial on the equispaced grid j/size."""

    size: int
    values: np.ndarray

    def point(self, j: int) -> float:
        return j / self.size


def evaluate_grid(S: TrigPolynomial, N: int) -> GridEvaluation:
    """Synthesize S on the N-point uniform grid with an inverse FFT.

    Requires N > 2 * degree so that frequencies do not alias and the
    grid determines the polynomial.
    """
    if N <= 2 * S.degree:
        raise AliasingError(
            f"grid of {N} points cannot resolve degree {S.degree}; need N > 2*degree"
        )
    spectrum = np.zeros(N, dtype=np.complex128)
    for m, c in S.coefficients.items():
        spectrum[m % N] += complex(c)
    values = np.fft.ifft(spectrum) * N
    return GridEvaluation(size=N, values=values)


def grid_to_coefficients(grid: GridEvaluation, freqs: Sequence[int]) -> dict[int, complex]:
    """Recover coefficients at the given frequencies from grid values."""
    spectrum = np.fft.fft(grid.values) / grid.size
    return {m: complex(spectrum[m % grid.size]) for m in freqs}


def lp_norm_trig(S: TrigPolynomial, p: float, oversample: int = 8) -> float:
    """L^p norm over [0, 1) by uniform-grid quadrature.

    The grid has oversample * (2*degree + 1) points; p == 2 bypasses the
    grid and returns the exact Parseval value.
    """
    if p < 1:
        raise InvalidInputError("p must be >= 1")
    if oversample < 4:
        raise InvalidInputError("oversample must be >= 4")
    if not S.coefficients:
        return 0.0
    if p == 2:
        return S.norm2()
    N = oversample * (2 * S.degree + 1)
    values = evaluate_grid(S, N).values
    return float(np.mean(np.abs(values) ** p) ** (1.0 / p))


def lp_norm_walsh(S: WalshPolynomial, p: float) -> float:
    """Exact L^p norm of a Walsh polynomial via its cell values."""
    if p < 1:
        raise InvalidInputError("p must be >= 1")
    if not S.coefficients:
        return 0.0
    cells = S.cell_values()
    return float(np.mean(np.abs(cells) ** p) ** (1.0 / p))


def khintchine_ratio(S, p: float) -> float:
    """||S||_p / ||S||_2 for a trig or Walsh polynomial."""
    if isinstance(S, TrigPolynomial):
        denom = S.norm2()
        if denom == 0.0:
            raise UndefinedRatioError("ratio of the zero polynomial is undefined")
        return lp_norm_trig(S, p) / denom
    if isinstance(S, WalshPolynomial):
        denom = S.norm2()
        if denom == 0.0:
            raise UndefinedRatioError("ratio of the zero polynomial is undefined")
        return lp_norm_walsh(S, p) / denom
    raise InvalidInputError("khintchine_ratio expects a trig or Walsh polynomial")


def _check_three_lacunary(freqs: Sequence[int]) -> bool:
    ordered = sorted(freqs)
    return all(
        Fraction(ordered[i + 1], ordered[i]) > 3 for i in range(len(ordered) - 1)
    )


def cos_product_expand(freqs: Sequence[int]) -> TrigPolynomial:
    """Exact exponential-basis expansion of prod_j cos(2 pi n_j x).

    Coefficients are dyadic rationals 2**-s summed over coinciding
    signed combinations; for a 3-lacunary frequency list all 2**s
    combinations are distinct and every coefficient is exactly 2**-s.
    """
    freqs = list(freqs)
    if not freqs:
        raise InvalidInputError("need at least one frequency")
    if any(not isinstance(n, int) or n <= 0 for n in freqs):
        raise InvalidInputError("frequencies must be positive integers")
    if len(set(freqs)) != len(freqs):
        raise InvalidInputError("frequencies must be distinct")
    half = Fraction(1, 2)
    coeffs: dict[int, Fraction] = {0: Fraction(1)}
    for n in freqs:
        nxt: dict[int, Fraction] = {}
        for m, c in coeffs.items():
            for mm in (m + n, m - n):
                nxt[mm] = nxt.get(mm, Fraction(0)) + c * half
        coeffs = nxt
    return TrigPolynomial(coeffs)


def riesz_product(freqs: Sequence[int], signs: Sequence[int]) -> TrigPolynomial:
    """Exact expansion of prod_j (1 + eps_j cos(2 pi n_j x)).

    The frequency list must be 3-lacunary, which keeps every signed
    combination distinct: the constant coefficient is then exactly 1
    and the product is a nonnegative unit-mass weight.
    """
    freqs = list(freqs)
    signs = list(signs)
    if len(freqs) != len(signs):
        raise InvalidInputError("freqs and signs must have equal length")
    if any(s not in (-1, 1) for s in signs):
        raise InvalidInputError("signs must be +1 or -1")
    if any(not isinstance(n, int) or n <= 0 for n in freqs):
        raise InvalidInputError("frequencies must be positive integers")
    if len(freqs) > 20:
        raise ResourceError("Riesz expansion is capped at 20 factors")
    if 3 ** len(freqs) > 10_000_000:
        raise ResourceError(
            f"expansion would carry 3**{len(freqs)} terms; shrink the factor list"
        )
    if not _check_three_lacunary(freqs):
        raise InvalidInputError("Riesz product requires a 3-lacunary frequency list")
    half = Fraction(1, 2)
    coeffs: dict[int, Fraction] = {0: Fraction(1)}
    for n, eps in zip(freqs, signs):
        nxt = dict(coeffs)
        for m, c in coeffs.items():
            for mm in (m + n, m - n):
                nxt[mm] = nxt.get(mm, Fraction(0)) + c * eps * half
        coeffs = nxt
    return TrigPolynomial(coeffs)


def modulation_projection(m: int, freqs: Sequence[int]) -> Fraction:
    """Factor gamma with integral(e^{2 pi i m(x+u)} prod cos(2 pi n_j u) du)
    equal to gamma * e^{2 pi i m x}.

    Computed symbolically by frequency matching in the exact cosine
    expansion: 2**-s when m is a signed combination of the s
    frequencies, else 0.  The clean dichotomy relies on a 3-lacunary
    frequency list; other lists are accepted with a warning, and the
    matched (possibly accumulated) coefficient is returned as is.
    """
    if not _check_three_lacunary(freqs):
        warnings.warn(
            "frequency list is not 3-lacunary; the projection factor may "
            "accumulate several signed combinations",
            stacklevel=2,
        )
    expansion = cos_product_expand(freqs)
    value = expansion.coefficients.get(int(m), Fraction(0))
    return Fraction(value)


def decorate_with_walsh_signs(
    S: TrigPolynomial, index_set: ChaosIndexSet, t: DyadicPoint
) -> TrigPolynomial:
    """Multiply each coefficient by the Rademacher product of its index set.

    Every frequency of S must have exactly one representation in
    ``index_set``; the sign is the product of rademacher(j, t) over the
    representation's 1-based sequence positions j.  Applying the map
    twice with the same t restores S.
    """
    out = {}
    for m, c in S.coefficients.items():
        reps = index_set.entries.get(m)
        if reps is None:
            raise InvalidSupportError(f"frequency {m} is not in the index set")
        if len(reps) != 1:
            raise InvalidSupportError(
                f"frequency {m} has {len(reps)} representations; need exactly one"
            )
        sign = 1
        for idx in reps[0].indices:
            sign *= rademacher(idx + 1, t)
        out[m] = c * sign
    return TrigPolynomial(out)
