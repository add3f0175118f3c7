"""Numerical search for extremal Khintchine ratios.

Maximizes the L^p over L^2 norm ratio of chaos polynomials with a
projected gradient ascent on the unit coefficient sphere, fits the
growth exponent of the best ratio against p, and probes the blow-up
of the ratio when the underlying sequence sits at the critical
lacunarity threshold.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    InsufficientDataError,
    InvalidInputError,
    InvalidOrderError,
    InvalidSupportError,
    LacunaError,
    ResourceError,
    UndefinedGradientError,
)
from .lacunary import (
    ChaosIndexSet,
    LacunarySequence,
    counterexample_sequence,
    critical_lambda_bracket,
    dyadic_sequence,
    enumerate_index_set,
)
from .walsh import _fwht, _reversed_mask

EPS_REG = 1e-14
MAX_PROBE_TERM = 1_000_000


@dataclass(frozen=True)
class ExtremalConfig:
    restarts: int = 3
    max_iter: int = 150
    step: float = 0.5
    seed: int = 0
    oversample: int = 8

    def validate(self) -> None:
        if self.restarts < 1 or self.max_iter < 1:
            raise InvalidInputError("restarts and max_iter must be positive")
        if not self.step > 0:
            raise InvalidInputError("step must be positive")
        if self.oversample < 4:
            raise InvalidInputError("oversample below 4 risks aliasing")

    def to_json_dict(self) -> dict:
        return {
            "restarts": self.restarts,
            "max_iter": self.max_iter,
            "step": self.step,
            "seed": self.seed,
            "oversample": self.oversample,
        }


@dataclass(frozen=True)
class ExtremalResult:
    coefficients: dict
    ratio: float
    p: float
    iterations: int
    converged: bool
    kind: str

    def to_json_dict(self) -> dict:
        if self.kind == "walsh":
            coeffs = [
                {"value_m": m, "coeff": float(c)}
                for m, c in sorted(self.coefficients.items())
            ]
        else:
            coeffs = [
                {"freq": m, "re": float(np.real(c)), "im": float(np.imag(c))}
                for m, c in sorted(self.coefficients.items())
            ]
        return {
            "p": self.p,
            "ratio": self.ratio,
            "iterations": self.iterations,
            "converged": self.converged,
            "kind": self.kind,
            "coefficients": coeffs,
        }


@dataclass(frozen=True)
class ChaosFamily:
    """Support descriptor for the extremal search.

    kind "walsh" spans the order-l dyadic chaos over exponents
    1..exponent_budget; kind "trig" spans the positive l-wise sums of
    the supplied sequence.
    """

    kind: str
    order: int
    exponent_budget: int | None = None
    sequence: LacunarySequence | None = None

    def index_set(self) -> ChaosIndexSet:
        if self.kind == "walsh":
            if self.exponent_budget is None or self.exponent_budget < self.order:
                raise InvalidInputError(
                    "exponent budget must cover at least the chaos order"
                )
            seq = dyadic_sequence(self.exponent_budget)
            return enumerate_index_set(seq, self.order, "dyadic")
        if self.kind == "trig":
            if self.sequence is None:
                raise InvalidInputError("trig family needs a sequence")
            return enumerate_index_set(self.sequence, self.order, "positive")
        raise InvalidInputError(f"unknown family kind {self.kind!r}")


def walsh_family(l: int, exponent_budget: int) -> ChaosFamily:
    return ChaosFamily(kind="walsh", order=l, exponent_budget=exponent_budget)


def trig_family(seq: LacunarySequence, l: int) -> ChaosFamily:
    return ChaosFamily(kind="trig", order=l, sequence=seq)


class _TrigSpace:
    """Grid evaluation of trig polynomials on a fixed frequency list."""

    def __init__(self, freqs: Sequence[int], oversample: int):
        self.freqs = list(freqs)
        degree = max(abs(m) for m in self.freqs)
        self.size = oversample * (2 * degree + 1)
        self.complex_coeffs = True
        self._bins = [m % self.size for m in self.freqs]

    def values(self, vec: np.ndarray) -> np.ndarray:
        spectrum = np.zeros(self.size, dtype=complex)
        for b, c in zip(self._bins, vec):
            spectrum[b] += c
        return np.fft.ifft(spectrum) * self.size

    def adjoint_mean(self, weights: np.ndarray) -> np.ndarray:
        hat = np.fft.fft(weights) / self.size
        return hat[self._bins]


class _WalshSpace:
    """Exact cell evaluation of Walsh polynomials via the fast transform."""

    def __init__(self, values_m: Sequence[int]):
        self.freqs = list(values_m)
        scale = max(m.bit_length() - 1 for m in self.freqs)
        if scale > 24:
            raise ResourceError(f"walsh scale {scale} exceeds the 2^24 cell budget")
        self.scale = scale
        self.size = 1 << scale
        self.complex_coeffs = False
        self._masks = np.array(
            [_reversed_mask(m, scale) for m in self.freqs], dtype=np.int64
        )

    def values(self, vec: np.ndarray) -> np.ndarray:
        cells = np.zeros(self.size, dtype=float)
        cells[self._masks] = vec
        _fwht(cells)
        return cells

    def adjoint_mean(self, weights: np.ndarray) -> np.ndarray:
        work = weights.astype(float, copy=True)
        _fwht(work)
        return work[self._masks] / self.size


def _make_space(values, dyadic: bool, oversample: int):
    if dyadic:
        return _WalshSpace(values)
    return _TrigSpace(values, oversample)


def _objective(space, vec: np.ndarray, p: float) -> float:
    v = space.values(vec)
    a = np.abs(v) ** 2 + EPS_REG
    return float(np.mean(a ** (p / 2)))


def _raw_gradient(space, vec: np.ndarray, p: float) -> np.ndarray:
    v = space.values(vec)
    a = np.abs(v) ** 2 + EPS_REG
    weights = (a ** ((p - 2) / 2)) * v
    return p * space.adjoint_mean(weights)


def _true_ratio(space, vec: np.ndarray, p: float) -> float:
    v = np.abs(space.values(vec))
    mean_sq = float(np.mean(v**2))
    mean_p = float(np.mean(v**p))
    return mean_p ** (1.0 / p) / mean_sq**0.5


def ratio_gradient(
    coeffs: dict, index_set: ChaosIndexSet, p: float, grid_oversample: int = 8
) -> dict:
    """Gradient of F(c) = mean (|S_c|^2 + eps)^(p/2) over the grid.

    The returned complex entry at m packs dF/dRe(c_m) + i dF/dIm(c_m);
    for dyadic supports the coefficients are real and so is the
    gradient.  Entries cover every index-set frequency, with absent
    coefficients treated as zero.
    """
    if p <= 2:
        raise InvalidInputError("p must exceed 2")
    values = index_set.values()
    if not values:
        raise InvalidInputError("empty index set")
    extra = set(coeffs) - set(values)
    if extra:
        raise InvalidSupportError(f"coefficients outside the index set: {sorted(extra)}")
    if all(c == 0 for c in coeffs.values()) or not coeffs:
        raise UndefinedGradientError("gradient is undefined at the zero vector")
    space = _make_space(values, index_set.is_dyadic, grid_oversample)
    if space.complex_coeffs:
        vec = np.array([complex(coeffs.get(m, 0.0)) for m in values])
    else:
        vec = np.array([float(coeffs.get(m, 0.0)) for m in values])
    grad = _raw_gradient(space, vec, p)
    return {m: g for m, g in zip(values, grad)}


def _ascend(space, vec: np.ndarray, p: float, config: ExtremalConfig):
    vec = vec / np.linalg.norm(vec)
    val = _objective(space, vec, p)
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        grad = _raw_gradient(space, vec, p)
        radial = np.real(np.vdot(vec, grad))
        tangent = grad - radial * vec
        if np.linalg.norm(tangent) < 1e-14:
            converged = True
            break
        step = config.step
        cand = None
        cand_val = val
        while step > 1e-12:
            trial = vec + step * tangent
            trial = trial / np.linalg.norm(trial)
            trial_val = _objective(space, trial, p)
            if trial_val > val:
                cand, cand_val = trial, trial_val
                break
            step *= 0.5
        if cand is None:
            converged = True
            break
        gain = (cand_val - val) / val
        vec, val = cand, cand_val
        if gain < 1e-10:
            converged = True
            break
    return vec, it, converged


def _equal_start(space) -> np.ndarray:
    n = len(space.freqs)
    if space.complex_coeffs:
        return np.full(n, 1.0 / n**0.5, dtype=complex)
    return np.full(n, 1.0 / n**0.5, dtype=float)


def _random_start(space, seed_pair) -> np.ndarray:
    rng = np.random.default_rng(seed_pair)
    n = len(space.freqs)
    if space.complex_coeffs:
        vec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        vec = rng.standard_normal(n)
    return vec / np.linalg.norm(vec)


def _maximize_over_values(values, dyadic: bool, p: float, config: ExtremalConfig):
    if p <= 2:
        raise InvalidInputError("p must exceed 2")
    config.validate()
    values = sorted(values)
    if not values:
        raise InvalidInputError("empty index set")
    kind = "walsh" if dyadic else "trig"
    if len(values) == 1:
        # a single frequency has constant modulus, so the ratio is 1 by
        # definition and no search is needed
        coeff = 1.0 if dyadic else complex(1.0)
        return ExtremalResult(
            coefficients={values[0]: coeff},
            ratio=1.0,
            p=float(p),
            iterations=0,
            converged=True,
            kind=kind,
        )
    space = _make_space(values, dyadic, config.oversample)
    equal = _equal_start(space)
    best_vec = equal
    best_ratio = _true_ratio(space, equal, p)
    best_iters = 0
    best_conv = True
    for r in range(config.restarts):
        start = equal if r == 0 else _random_start(space, (config.seed, r))
        vec, iters, conv = _ascend(space, start, p, config)
        ratio = _true_ratio(space, vec, p)
        if ratio > best_ratio:
            best_vec, best_ratio = vec, ratio
            best_iters, best_conv = iters, conv
    if space.complex_coeffs:
        coefficients = {m: complex(c) for m, c in zip(values, best_vec)}
    else:
        coefficients = {m: float(c) for m, c in zip(values, best_vec)}
    return ExtremalResult(
        coefficients=coefficients,
        ratio=float(best_ratio),
        p=float(p),
        iterations=best_iters,
        converged=best_conv,
        kind=kind,
    )


def maximize_ratio(index_set, p: float, config: ExtremalConfig | None = None):
    """Best found L^p/L^2 ratio over unit coefficient vectors.

    Projected gradient ascent on the unit sphere with backtracking line
    search, restarted from the all-equal vector and from seeded Gaussian
    draws.  The all-equal vector itself is kept as a candidate, so the
    returned ratio never falls below that certified warm start.
    """
    if isinstance(index_set, ChaosFamily):
        index_set = index_set.index_set()
    if not isinstance(index_set, ChaosIndexSet):
        raise InvalidInputError("expected a ChaosIndexSet or ChaosFamily")
    config = config or ExtremalConfig()
    return _maximize_over_values(index_set.values(), index_set.is_dyadic, p, config)


@dataclass(frozen=True)
class GrowthReport:
    slope: float
    residual: float
    probe_slope: float
    p_values: tuple
    ratios: tuple
    probe_ratios: tuple
    config: ExtremalConfig = field(default_factory=ExtremalConfig)

    def to_json_dict(self) -> dict:
        return {
            "p": list(self.p_values),
            "ratio": list(self.ratios),
            "probe_ratio": list(self.probe_ratios),
            "slope": self.slope,
            "residual": self.residual,
            "probe_slope": self.probe_slope,
            "seed": self.config.seed,
            "config": self.config.to_json_dict(),
        }

    def to_csv_rows(self) -> list:
        return [(float(p), float(r)) for p, r in zip(self.p_values, self.ratios)]


def _fit_line(xs, ys) -> tuple[float, float]:
    coeff = np.polyfit(xs, ys, 1)
    pred = np.polyval(coeff, xs)
    residual = float(np.sqrt(np.mean((np.asarray(ys) - pred) ** 2)))
    return float(coeff[0]), residual


def growth_exponent(
    family, p_list: Sequence[float], config: ExtremalConfig | None = None
) -> GrowthReport:
    """Fit log(best ratio) against log(p).

    The headline slope comes from the optimized ratios.  A secondary
    slope tracks the all-equal probe vector, the classical near-extremal
    shape, to show how much of the growth the search itself adds.
    """
    p_list = list(p_list)
    if len(p_list) < 4:
        raise InvalidInputError("need at least 4 exponents for a slope fit")
    if any(p <= 2 for p in p_list):
        raise InvalidInputError("all exponents must exceed 2")
    config = config or ExtremalConfig()
    config.validate()
    if isinstance(family, ChaosFamily):
        index_set = family.index_set()
    elif isinstance(family, ChaosIndexSet):
        index_set = family
    else:
        raise InvalidInputError("expected a ChaosFamily or ChaosIndexSet")
    values = index_set.values()
    if not values:
        raise InvalidInputError("empty index set")
    used_p = []
    ratios = []
    probe_ratios = []
    probe_space = None
    for p in p_list:
        try:
            result = _maximize_over_values(values, index_set.is_dyadic, p, config)
            if len(values) == 1:
                probe = 1.0
            else:
                if probe_space is None:
                    probe_space = _make_space(
                        values, index_set.is_dyadic, config.oversample
                    )
                probe = _true_ratio(probe_space, _equal_start(probe_space), p)
        except LacunaError:
            continue
        used_p.append(float(p))
        ratios.append(result.ratio)
        probe_ratios.append(probe)
    if len(used_p) < 2:
        raise InsufficientDataError("fewer than 2 exponents optimized successfully")
    logs_p = np.log(used_p)
    slope, residual = _fit_line(logs_p, np.log(ratios))
    probe_slope, _ = _fit_line(logs_p, np.log(probe_ratios))
    return GrowthReport(
        slope=slope,
        residual=residual,
        probe_slope=probe_slope,
        p_values=tuple(used_p),
        ratios=tuple(ratios),
        probe_ratios=tuple(probe_ratios),
        config=config,
    )


def near_critical_sequence(l: int, length: int, bump: float = 0.0) -> LacunarySequence:
    """Scaled stand-in for the critical-ratio construction: geometric-ish
    growth one integer step above ratio (critical + bump), started at 3^l
    so that small signed sums stay distinct."""
    if l < 2:
        raise InvalidOrderError("order must be >= 2")
    if length < 1:
        raise InvalidInputError("length must be positive")
    _, hi = critical_lambda_bracket(l, bits=64)
    lam_hat = float(hi) + bump
    terms = [3**l]
    while len(terms) < length:
        terms.append(int(lam_hat * terms[-1]) + 1)
    return LacunarySequence(tuple(terms), lam=Fraction(lam_hat))


@dataclass(frozen=True)
class BlowupRow:
    budget: int
    ratio_critical: float
    ratio_control: float

    def to_json_dict(self) -> dict:
        return {
            "budget": self.budget,
            "ratio_critical": self.ratio_critical,
            "ratio_control": self.ratio_control,
        }


@dataclass(frozen=True)
class BlowupReport:
    order: int
    p: float
    rows: tuple
    critical_nondecreasing: bool
    control_spread: float
    degraded: bool

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "p": self.p,
            "rows": [r.to_json_dict() for r in self.rows],
            "critical_nondecreasing": self.critical_nondecreasing,
            "control_spread": self.control_spread,
            "degraded": self.degraded,
        }


def _budget_values(seq: LacunarySequence, l: int, max_budget: int) -> list:
    length = l + 2
    while True:
        values = enumerate_index_set(seq.prefix(min(length, len(seq.terms))), l).values()
        if len(values) >= max_budget or length >= len(seq.terms):
            break
        length += 1
    if len(values) < max_budget:
        raise ResourceError(
            f"budget {max_budget} exceeds the {len(values)} enumerable frequencies"
        )
    return sorted(values, key=abs)


def blowup_probe(
    l: int, p: float, degree_list: Sequence[int], seed: int = 0
) -> BlowupReport:
    """Ratio trend at the critical lacunarity threshold.

    For each budget the search keeps that many signed l-wise sums
    (smallest magnitudes first) and maximizes the ratio over them; the
    same budgets run on a comfortably lacunary control at ratio
    critical + 0.2.  The trend is reported, never asserted: divergence
    at the threshold is a limit statement.
    """
    if l < 2:
        raise InvalidOrderError("order must be >= 2")
    if p <= 2:
        raise InvalidInputError("p must exceed 2")
    budgets = sorted(set(int(b) for b in degree_list))
    if not budgets or budgets[0] < 1:
        raise InvalidInputError("degree budgets must be positive")
    config = ExtremalConfig(restarts=2, max_iter=80, step=0.5, seed=seed)
    exact_seq, _ = counterexample_sequence(l, 3**l)
    degraded = False
    if max(exact_seq.terms) > MAX_PROBE_TERM:
        warnings.warn(
            "exact critical construction needs frequencies beyond the grid "
            "budget; degrading to a scaled congruent sequence",
            RuntimeWarning,
        )
        degraded = True
        length = 4 * l + 16
        crit_seq = near_critical_sequence(l, length, bump=0.0)
    else:
        crit_seq = exact_seq
    control_seq = near_critical_sequence(l, 4 * l + 16, bump=0.2)
    crit_values = _budget_values(crit_seq, l, budgets[-1])
    control_values = _budget_values(control_seq, l, budgets[-1])
    rows = []
    for budget in budgets:
        r_crit = _maximize_over_values(crit_values[:budget], False, p, config).ratio
        r_ctrl = _maximize_over_values(control_values[:budget], False, p, config).ratio
        rows.append(
            BlowupRow(budget=budget, ratio_critical=r_crit, ratio_control=r_ctrl)
        )
    ratios_crit = [r.ratio_critical for r in rows]
    nondecreasing = all(
        b >= a - 1e-9 for a, b in zip(ratios_crit, ratios_crit[1:])
    )
    ctrl = [r.ratio_control for r in rows]
    return BlowupReport(
        order=l,
        p=float(p),
        rows=tuple(rows),
        critical_nondecreasing=bool(nondecreasing),
        control_spread=float(max(ctrl) - min(ctrl)),
        degraded=degraded,
    )
