"""Inverse Parseval checks on interval sets and finite-truncation
experiments under general row-finite summation matrices.

The energy of a chaos polynomial over a near-full set is compared
against an explicit lower constant times the coefficient mass; the
experiment driver replays that bound row by row for a summation
matrix, which is how the finite data certifies the coefficient
conclusions that the limit statements promise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    BoundViolationError,
    InvalidInputError,
    InvalidOrderError,
    InvalidRowError,
    InvalidSupportError,
)
from .lacunary import (
    LacunarySequence,
    _check_witness_exceeds_critical,
    empirical_mixed_bound,
    representations,
)
from .measure import IntervalSet, energy_on_set
from .trig import TrigPolynomial
from .walsh import WalshIndex, WalshPolynomial


def alpha_threshold(l: int, d: int) -> float:
    """Measure threshold 1 - 1/(d * 2**(l+1)) for the trig-side bound."""
    if not isinstance(l, int) or l < 2:
        raise InvalidOrderError("order must be >= 2")
    if not isinstance(d, int) or d < 1:
        raise InvalidInputError("representation bound d must be a positive integer")
    return 1.0 - 1.0 / (d * 2 ** (l + 1))


def _alpha_threshold_exact(l: int, d: int) -> Fraction:
    return 1 - Fraction(1, d * 2 ** (l + 1))


@dataclass(frozen=True)
class TrigContext:
    """Positive-sum chaos over a lacunary sequence, with the mixed
    representation bound d (computed from the sequence window when not
    supplied)."""

    sequence: LacunarySequence
    order: int
    d: int | None = None

    def resolved_d(self) -> int:
        if self.d is not None:
            return self.d
        return empirical_mixed_bound(self.sequence, self.order)


@dataclass(frozen=True)
class WalshContext:
    """Dyadic chaos of orders 1..order."""

    order: int


@dataclass(frozen=True)
class InverseParsevalReport:
    energy: float
    coefficient_mass: float
    threshold: float
    lower_constant: float
    passed: bool
    measure_ok: bool
    notes: tuple[str, ...] = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "energy": self.energy,
            "coefficient_mass": self.coefficient_mass,
            "threshold": self.threshold,
            "lower_constant": self.lower_constant,
            "pass": self.passed,
            "measure_ok": self.measure_ok,
            "notes": list(self.notes),
        }


def _validate_trig_support(S: TrigPolynomial, context: TrigContext) -> None:
    for m in S.coefficients:
        if not representations(context.sequence, m, context.order, "positive"):
            raise InvalidSupportError(
                f"frequency {m} is not a positive sum of at most "
                f"{context.order} sequence terms"
            )


def _validate_walsh_support(S: WalshPolynomial, order: int) -> None:
    for m in S.coefficients:
        if m == 0 or WalshIndex.from_value(m).order > order:
            raise InvalidSupportError(
                f"index {m} is not a dyadic sum of 1..{order} powers"
            )


def inverse_parseval_check(S, E: IntervalSet, context) -> InverseParsevalReport:
    """Check energy(S over E) > c * coefficient mass.

    The lower constant is |E| - 1/2 in the trig context (measure
    threshold 1 - 1/(d*2^(l+1))) and |E| - l^(-1/4) in the Walsh
    context (threshold 1 - 2^(-4l): the Walsh margin constant needs
    the complement smaller than 2^(-4l), which is stricter than the
    trig-side threshold).  ``passed`` requires both the measure
    condition and the strict energy inequality.
    """
    notes: list[str] = []
    if isinstance(context, TrigContext):
        if not isinstance(S, TrigPolynomial):
            raise InvalidInputError("trig context expects a TrigPolynomial")
        l = context.order
        _validate_trig_support(S, context)
        if not _check_witness_exceeds_critical(context.sequence.lam, l + 1):
            notes.append(
                "sequence witness does not exceed the order-%d critical ratio; "
                "the lower bound is not guaranteed" % (l + 1)
            )
        d = context.resolved_d()
        if context.d is None:
            notes.append(f"d={d} measured over the sequence window")
        threshold = _alpha_threshold_exact(l, d)
        lower_constant = float(E.measure) - 0.5
        mass = sum(abs(complex(c)) ** 2 for c in S.coefficients.values())
    elif isinstance(context, WalshContext):
        if not isinstance(S, WalshPolynomial):
            raise InvalidInputError("walsh context expects a WalshPolynomial")
        l = context.order
        if l < 2:
            raise InvalidOrderError("order must be >= 2")
        _validate_walsh_support(S, l)
        threshold = 1 - Fraction(1, 2 ** (4 * l))
        lower_constant = float(E.measure) - l**-0.25
        mass = sum(float(c) ** 2 for c in S.coefficients.values())
        notes.append(
            "walsh threshold 1-2^-%d in force (margin constant l^-1/4)" % (4 * l)
        )
    else:
        raise InvalidInputError("context must be TrigContext or WalshContext")
    if mass == 0:
        notes.append("zero polynomial: the strict inequality is vacuously absent")
    energy = energy_on_set(S, E)
    measure_ok = E.measure > threshold
    passed = bool(measure_ok and energy > lower_constant * mass)
    return InverseParsevalReport(
        energy=energy,
        coefficient_mass=float(mass),
        threshold=float(threshold),
        lower_constant=lower_constant,
        passed=passed,
        measure_ok=bool(measure_ok),
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class SummationMatrix:
    """Row-finite summation matrix with a uniform entry bound.

    Rows are finite maps m -> t_{n,m}.  The indicator kind marks
    membership in a growing family of sets; the column-limit condition
    (entries tending to 1 down each column) can only be inspected on
    the declared prefix, so it is reported, never enforced.
    """

    rows: tuple
    bound: float
    kind: str

    def universe(self) -> list[int]:
        cols: set[int] = set()
        for row in self.rows:
            cols.update(row)
        return sorted(cols)

    def column_report(self) -> dict[int, float]:
        """Final-row value per column; near 1 suggests condition 3) holds."""
        if not self.rows:
            return {}
        last = self.rows[-1]
        return {m: float(last.get(m, 0.0)) for m in self.universe()}

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "bound": self.bound,
            "rows": [
                sorted([[m, float(t)] for m, t in row.items()]) for row in self.rows
            ],
        }


def build_summation_matrix(
    kind: str,
    order: Sequence[int] | None = None,
    sets: Sequence[Sequence[int]] | None = None,
    rows: Sequence[Mapping[int, float]] | None = None,
    bound: float = 1.0,
) -> SummationMatrix:
    """Construct and validate a summation matrix.

    kinds:
      - "prefix-of-rearrangement": indicator rows of the first n
        elements of ``order`` (a duplicate-free listing);
      - "nested-sets": indicator rows of an increasing family ``sets``;
      - "custom": explicit ``rows``, each a finite map with entries
        bounded by ``bound`` in absolute value.
    """
    if bound <= 0 or not math.isfinite(bound):
        raise InvalidInputError("bound must be positive and finite")
    built: list[dict[int, float]] = []
    if kind == "prefix-of-rearrangement":
        if order is None:
            raise InvalidInputError("prefix kind needs an order listing")
        order = list(order)
        if len(set(order)) != len(order):
            raise InvalidInputError("order listing must be duplicate-free")
        if bound < 1:
            raise BoundViolationError("indicator entries are 1 > bound")
        for n in range(1, len(order) + 1):
            built.append({int(m): 1.0 for m in order[:n]})
    elif kind == "nested-sets":
        if sets is None:
            raise InvalidInputError("nested kind needs the set family")
        family = [sorted(set(int(m) for m in s)) for s in sets]
        for i in range(len(family) - 1):
            if not set(family[i]) <= set(family[i + 1]):
                raise InvalidInputError(
                    f"set {i} is not contained in set {i + 1}; family must grow"
                )
        if bound < 1:
            raise BoundViolationError("indicator entries are 1 > bound")
        for s in family:
            built.append({m: 1.0 for m in s})
    elif kind == "custom":
        if rows is None:
            raise InvalidInputError("custom kind needs explicit rows")
        for i, row in enumerate(rows):
            if not isinstance(row, Mapping):
                raise InvalidRowError(f"row {i} is not a finite map")
            cleaned = {}
            for m, t in row.items():
                t = float(t)
                if not math.isfinite(t):
                    raise InvalidRowError(f"row {i} has a non-finite entry at {m}")
                if abs(t) > bound:
                    raise BoundViolationError(
                        f"row {i} entry {t} at column {m} exceeds bound {bound}"
                    )
                if t != 0.0:
                    cleaned[int(m)] = t
            built.append(cleaned)
    else:
        raise InvalidInputError(f"unknown matrix kind {kind!r}")
    matrix_kind = "indicator" if kind != "custom" else "custom"
    return SummationMatrix(rows=tuple(built), bound=float(bound), kind=matrix_kind)


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    energy: float
    mass: float
    bound: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "energy": self.energy,
            "mass": self.mass,
            "bound": self.bound,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class ExperimentReport:
    threshold: float
    lower_constant: float
    hypothesis_met: bool
    zero_mode: bool
    rows: tuple[ExperimentRow, ...]
    implied_mass_bound: float | None

    def to_json_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "lower_constant": self.lower_constant,
            "hypothesis_met": self.hypothesis_met,
            "hypothesis": "met" if self.hypothesis_met else "not met",
            "zero_mode": self.zero_mode,
            "implied_mass_bound": self.implied_mass_bound,
            "rows": [r.to_json_dict() for r in self.rows],
        }


def inverse_bound_experiment(
    coeffs: Mapping[int, complex],
    matrix: SummationMatrix,
    E: IntervalSet,
    context,
    n_max: int | None = None,
    zero_mode: bool = False,
) -> ExperimentReport:
    """Replay the inverse Parseval bound for each matrix row.

    Row n forms S_n = sum_m t_{n,m} c_m e_m, measures its energy over
    E and compares with c * sum |t_{n,m} c_m|^2.  When the measure
    hypothesis fails the rows are still produced but the report is
    flagged "not met" rather than failed.  In zero mode the point of
    the rows is the converse reading: masked mass is at most
    energy / c, so vanishing energies force vanishing coefficients.
    """
    if isinstance(context, TrigContext):
        probe = TrigPolynomial(dict(coeffs))
        _validate_trig_support(probe, context)
        lower_constant = float(E.measure) - 0.5
        threshold = _alpha_threshold_exact(context.order, context.resolved_d())

        def make_poly(masked):
            return TrigPolynomial(masked)

        def mass_of(masked):
            return sum(abs(complex(c)) ** 2 for c in masked.values())

    elif isinstance(context, WalshContext):
        probe = WalshPolynomial({m: float(c) for m, c in coeffs.items()})
        _validate_walsh_support(probe, context.order)
        lower_constant = float(E.measure) - context.order**-0.25
        threshold = 1 - Fraction(1, 2 ** (4 * context.order))

        def make_poly(masked):
            return WalshPolynomial(masked)

        def mass_of(masked):
            return sum(float(c) ** 2 for c in masked.values())

    else:
        raise InvalidInputError("context must be TrigContext or WalshContext")

    hypothesis_met = E.measure > threshold
    count = len(matrix.rows) if n_max is None else min(n_max, len(matrix.rows))
    records = []
    for n in range(1, count + 1):
        row = matrix.rows[n - 1]
        masked = {m: t * coeffs[m] for m, t in row.items() if m in coeffs and t != 0}
        energy = energy_on_set(make_poly(masked), E) if masked else 0.0
        mass = mass_of(masked)
        bound = lower_constant * mass
        records.append(
            ExperimentRow(
                n=n,
                energy=energy,
                mass=mass,
                bound=bound,
                passed=bool(energy > bound),
            )
        )
    implied = None
    if lower_constant > 0 and records:
        implied = max(r.energy for r in records) / lower_constant
    return ExperimentReport(
        threshold=float(threshold),
        lower_constant=lower_constant,
        hypothesis_met=bool(hypothesis_met),
        zero_mode=zero_mode,
        rows=tuple(records),
        implied_mass_bound=implied,
    )
