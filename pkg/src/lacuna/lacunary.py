"""Integer combinatorics of lacunary sequences.

Critical growth ratios, signed l-wise sum index sets, representation
counting, head partitions, and a near-critical sequence builder whose
signed sums cover a full integer range.

All rational comparisons (lacunarity witnesses, head-block bounds) are
exact: ratios are handled with `fractions.Fraction`, never floats.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    InsufficientTermsError,
    InvalidInputError,
    InvalidOrderError,
    InvalidSequenceError,
    PreconditionError,
    ResourceError,
)

VARIANTS = (
    "signed",
    "signed-star",
    "positive",
    "positive-star",
    "dyadic",
    "dyadic-star",
)

_BISECTION_STEPS = 200


def _as_fraction(x) -> Fraction:
    """Exact conversion; floats convert via their binary expansion."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise InvalidInputError(f"cannot interpret {x!r} as an exact rational")


def _critical_poly_float(l: int, x: float) -> float:
    # x^{l-1} - (x^{l-2} + ... + x + 1), monotone increasing on [1, 2]
    acc = 0.0
    for j in range(l - 1):
        acc += x**j
    return x ** (l - 1) - acc


def _critical_poly_exact(l: int, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for j in range(l - 1):
        acc += x**j
    return x ** (l - 1) - acc


def _critical_poly_deriv_float(l: int, x: float) -> float:
    acc = 0.0
    for j in range(1, l - 1):
        acc += j * x ** (j - 1)
    return (l - 1) * x ** (l - 2) - acc


def critical_lambda(l: int, tol: float = 1e-10) -> float:
    """Critical lacunarity ratio for order ``l`` signed sums.

    The value is the unique root in (1, 2] of
    ``x**(l-1) == x**(l-2) + ... + x + 1``.

    Parameters
    ----------
    l : int
        Sum order, at least 2.  For ``l == 2`` the equation degenerates
        to ``x == 1`` and exactly 1.0 is returned.
    tol : float
        Residual guard (must be positive).  Bisection runs to float
        resolution regardless and a Newton polish then lands on the
        correctly rounded double, so tol only rejects nonsense inputs.

    Returns
    -------
    float
    """
    if not isinstance(l, int) or l < 2:
        raise InvalidOrderError("order must be >= 2")
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    if l == 2:
        return 1.0
    lo, hi = 1.0, 2.0
    mid = lo
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _critical_poly_float(l, mid) < 0:
            lo = mid
        else:
            hi = mid
    x = mid
    for _ in range(6):
        deriv = _critical_poly_deriv_float(l, x)
        if deriv <= 0:
            break
        nxt = x - _critical_poly_float(l, x) / deriv
        if nxt == x or not 1.0 < nxt < 2.0:
            break
        x = nxt
    return x


def critical_lambda_bracket(l: int, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Dyadic rational bracket (lo, hi) with lo <= lambda_l <= hi.

    The bracket width is 2**-bits (zero for ``l == 2``, where the value
    is exactly 1).  Useful when floors of huge multiples of lambda_l
    must be certified.
    """
    if not isinstance(l, int) or l < 2:
        raise InvalidOrderError("order must be >= 2")
    if bits < 1:
        raise InvalidInputError("bits must be positive")
    if l == 2:
        return Fraction(1), Fraction(1)
    lo, hi = Fraction(1), Fraction(2)
    for _ in range(bits):
        mid = (lo + hi) / 2
        if _critical_poly_exact(l, mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def validate_lacunary(terms: Iterable[int], lam) -> dict:
    """Check ``n_{k+1}/n_k > lam`` for every consecutive pair, exactly.

    Returns a report dict ``{"ok": bool, "first_violation": ...}`` where
    the violation entry holds the 0-based pair index and the pair
    itself.  Structural problems (empty input, non-positive or
    non-increasing terms) raise ``InvalidSequenceError`` instead of
    being reported.
    """
    terms = list(terms)
    if not terms:
        raise InvalidSequenceError("sequence must be nonempty")
    if any(not isinstance(t, int) or t <= 0 for t in terms):
        raise InvalidSequenceError("terms must be positive integers")
    for i in range(len(terms) - 1):
        if terms[i + 1] <= terms[i]:
            raise InvalidSequenceError(
                f"terms must be strictly increasing, got {terms[i]} then {terms[i + 1]}"
            )
    lam = _as_fraction(lam)
    for i in range(len(terms) - 1):
        if Fraction(terms[i + 1], terms[i]) <= lam:
            return {
                "ok": False,
                "first_violation": {"index": i, "pair": (terms[i], terms[i + 1])},
            }
    return {"ok": True, "first_violation": None}


@dataclass(frozen=True)
class LacunarySequence:
    """Strictly increasing positive integers with an exact ratio witness.

    ``lam`` is stored as a `Fraction`; every consecutive ratio is
    required to exceed it.  The interesting regime is ``lam > 1`` but
    any positive witness is accepted (the degenerate critical value for
    order 2 is exactly 1).
    """

    terms: tuple[int, ...]
    lam: Fraction

    def __init__(self, terms: Iterable[int], lam):
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "lam", _as_fraction(lam))
        if self.lam <= 0:
            raise InvalidSequenceError("lacunarity witness must be positive")
        report = validate_lacunary(self.terms, self.lam)
        if not report["ok"]:
            pair = report["first_violation"]["pair"]
            raise InvalidSequenceError(
                f"ratio {pair[1]}/{pair[0]} does not exceed witness {self.lam}"
            )

    def __len__(self) -> int:
        return len(self.terms)

    def prefix(self, n: int) -> "LacunarySequence":
        return LacunarySequence(self.terms[:n], self.lam)

    @property
    def reachable_sum(self) -> int:
        return sum(self.terms)


def geometric_sequence(ratio: int, length: int, lam=None) -> LacunarySequence:
    """Terms ratio, ratio^2, ..., ratio^length with a default witness ratio-1."""
    if ratio < 2 or length < 1:
        raise InvalidInputError("need ratio >= 2 and length >= 1")
    if lam is None:
        lam = Fraction(ratio - 1)
    return LacunarySequence(tuple(ratio**k for k in range(1, length + 1)), lam)


def dyadic_sequence(max_exponent: int) -> LacunarySequence:
    """Powers of two 2, 4, ..., 2**max_exponent."""
    if max_exponent < 1:
        raise InvalidInputError("max_exponent must be >= 1")
    return LacunarySequence(tuple(2**k for k in range(1, max_exponent + 1)), Fraction(1))


@dataclass(frozen=True)
class SignedRepresentation:
    """One signed sum eps_1*n_{k_1} + ... + eps_s*n_{k_s}.

    ``indices`` are strictly decreasing 0-based positions into the
    parent sequence; ``head`` is the signed leading term
    ``signs[0] * terms[indices[0]]``.
    """

    indices: tuple[int, ...]
    signs: tuple[int, ...]
    value: int
    head: int

    def __post_init__(self):
        if len(self.indices) != len(self.signs) or not self.indices:
            raise InvalidInputError("indices and signs must be nonempty, same length")
        if any(s not in (-1, 1) for s in self.signs):
            raise InvalidInputError("signs must be +1 or -1")
        if any(
            self.indices[i] <= self.indices[i + 1] for i in range(len(self.indices) - 1)
        ):
            raise InvalidInputError("indices must be strictly decreasing")

    @property
    def order(self) -> int:
        return len(self.indices)

    @classmethod
    def build(cls, terms, indices, signs) -> "SignedRepresentation":
        indices = tuple(indices)
        signs = tuple(signs)
        value = sum(s * terms[i] for i, s in zip(indices, signs))
        head = signs[0] * terms[indices[0]]
        return cls(indices, signs, value, head)


def _normalize_variant(variant: str) -> tuple[str, bool]:
    if variant not in VARIANTS:
        raise InvalidInputError(
            f"unknown variant {variant!r}, expected one of {', '.join(VARIANTS)}"
        )
    star = variant.endswith("-star")
    return (variant[: -len("-star")] if star else variant), star


def _require_dyadic_ladder(seq: LacunarySequence) -> None:
    expected = tuple(2**k for k in range(1, len(seq.terms) + 1))
    if seq.terms != expected:
        raise InvalidSequenceError(
            "dyadic variants require the base sequence 2, 4, ..., 2^n"
        )


@dataclass(frozen=True)
class ChaosIndexSet:
    """All values of (signed) l-wise sums over a sequence prefix.

    ``entries`` maps each reachable value to the tuple of all its
    representations; star variants union the orders 1..l.
    """

    variant: str
    order: int
    sequence: LacunarySequence
    entries: Mapping[int, tuple[SignedRepresentation, ...]]

    def values(self) -> list[int]:
        return sorted(self.entries)

    def __contains__(self, m: int) -> bool:
        return m in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_dyadic(self) -> bool:
        return self.variant.startswith("dyadic")

    def to_json_dict(self) -> dict:
        return {
            "variant": self.variant,
            "order": self.order,
            "sequence": list(self.sequence.terms),
            "entries": [
                {
                    "value": v,
                    "representations": [
                        {"indices": list(r.indices), "signs": list(r.signs)}
                        for r in self.entries[v]
                    ],
                }
                for v in self.values()
            ],
        }


_REP_SORT_KEY = lambda r: (r.order, r.indices, r.signs)  # noqa: E731


def enumerate_index_set(
    seq: LacunarySequence,
    l: int,
    variant: str = "signed",
    prefix_len: int | None = None,
) -> ChaosIndexSet:
    """Exhaustively enumerate every value reachable from a sequence prefix.

    Parameters
    ----------
    seq : LacunarySequence
    l : int
        Sum order (exact order for plain variants, maximum for -star).
    variant : str
        One of ``signed``, ``positive``, ``dyadic`` or their ``-star``
        forms.  Dyadic variants additionally require ``seq`` to be the
        ladder 2, 4, ..., 2^n.
    prefix_len : int, optional
        How many leading terms participate; defaults to the whole
        sequence.

    Returns
    -------
    ChaosIndexSet
        With ALL representations of every value, not just one witness.
    """
    base, star = _normalize_variant(variant)
    if not isinstance(l, int) or l < 1:
        raise InvalidOrderError("order must be >= 1")
    if prefix_len is None:
        prefix_len = len(seq.terms)
    if prefix_len > len(seq.terms) or prefix_len < 1:
        raise InvalidInputError("prefix_len must be in 1..len(seq)")
    if l > prefix_len:
        raise InsufficientTermsError(
            f"order {l} exceeds available prefix of {prefix_len} terms"
        )
    if base == "dyadic":
        _require_dyadic_ladder(seq)
    prefix = seq.prefix(prefix_len)
    terms = prefix.terms
    sign_choices = (1, -1) if base == "signed" else (1,)
    orders = range(1, l + 1) if star else (l,)
    collected: dict[int, list[SignedRepresentation]] = {}
    for s in orders:
        for combo in itertools.combinations(range(prefix_len), s):
            indices = combo[::-1]
            for signs in itertools.product(sign_choices, repeat=s):
                rep = SignedRepresentation.build(terms, indices, signs)
                collected.setdefault(rep.value, []).append(rep)
    entries = {
        v: tuple(sorted(reps, key=_REP_SORT_KEY)) for v, reps in collected.items()
    }
    return ChaosIndexSet(variant=variant, order=l, sequence=prefix, entries=entries)


def representations(
    seq: LacunarySequence, m: int, l: int, variant: str = "signed"
) -> list[SignedRepresentation]:
    """All representations of ``m`` using at most ``l`` terms.

    The search is exhaustive (depth-first with a largest-remaining-sum
    prune); an empty list is a valid answer.  ``variant`` selects the
    sign discipline; star suffixes are accepted and equivalent here
    since orders 1..l are always explored.
    """
    base, _ = _normalize_variant(variant)
    if not isinstance(l, int) or l < 1:
        raise InvalidOrderError("order must be >= 1")
    if base == "dyadic":
        _require_dyadic_ladder(seq)
    terms = seq.terms
    n = len(terms)
    prefix_sums = [0] * (n + 1)
    for i, t in enumerate(terms):
        prefix_sums[i + 1] = prefix_sums[i] + t

    def top_sum(i: int, k: int) -> int:
        # sum of the k largest terms among positions 0..i
        k = min(k, i + 1)
        return prefix_sums[i + 1] - prefix_sums[i + 1 - k]

    sign_choices = (1, -1) if base == "signed" else (1,)
    found: list[SignedRepresentation] = []

    def walk(i: int, slots: int, target: int, chosen: list[tuple[int, int]]):
        if target == 0 and chosen:
            idx = tuple(c[0] for c in chosen)
            sg = tuple(c[1] for c in chosen)
            found.append(SignedRepresentation.build(terms, idx, sg))
        if slots == 0 or i < 0:
            return
        if abs(target) > top_sum(i, slots):
            return
        for j in range(i, -1, -1):
            for sign in sign_choices:
                chosen.append((j, sign))
                walk(j - 1, slots - 1, target - sign * terms[j], chosen)
                chosen.pop()

    walk(n - 1, l, m, [])
    return sorted(found, key=_REP_SORT_KEY)


def _check_witness_exceeds_critical(lam: Fraction, order: int) -> bool:
    # lam > lambda_order  <=>  sum_{t=1..order-1} lam^{-t} < 1, exactly.
    tail = Fraction(0)
    for t in range(1, order):
        tail += lam**-t
    return tail < 1


def mixed_representation_count(seq: LacunarySequence, m: int, l: int) -> int:
    """Count representations ``m = sum_{A} n_j - sum_{B} n_k``.

    A and B are disjoint index sets of size at most ``l`` each; the
    empty pair counts once for ``m == 0``.  Emits a warning when the
    sequence witness does not exceed the order-(l+1) critical ratio,
    where no uniform bound is promised.
    """
    if not isinstance(l, int) or l < 1:
        raise InvalidOrderError("order must be >= 1")
    if not _check_witness_exceeds_critical(seq.lam, l + 1):
        warnings.warn(
            "lacunarity witness does not exceed the order-%d critical ratio; "
            "mixed representation counts may grow with the prefix" % (l + 1),
            stacklevel=2,
        )
    terms = seq.terms
    n = len(terms)
    prefix_sums = [0] * (n + 1)
    for i, t in enumerate(terms):
        prefix_sums[i + 1] = prefix_sums[i] + t

    def top_sum(i: int, k: int) -> int:
        k = min(k, i + 1)
        return prefix_sums[i + 1] - prefix_sums[i + 1 - k]

    def walk(i: int, pos_left: int, neg_left: int, target: int) -> int:
        count = 1 if target == 0 else 0
        if i < 0:
            return count
        if target > top_sum(i, pos_left) or target < -top_sum(i, neg_left):
            return count
        for j in range(i, -1, -1):
            if pos_left:
                count += walk(j - 1, pos_left - 1, neg_left, target - terms[j])
            if neg_left:
                count += walk(j - 1, pos_left, neg_left - 1, target + terms[j])
        return count

    return walk(n - 1, l, l, m)


def mixed_count_table(seq: LacunarySequence, l: int) -> dict[int, int]:
    """Exhaustive value -> mixed-representation-count map for the whole window."""
    if not isinstance(l, int) or l < 1:
        raise InvalidOrderError("order must be >= 1")
    n = len(seq.terms)
    states = 0
    for s in range(l + 1):
        for t in range(l + 1):
            if s + t <= n:
                states += _choose(n, s) * _choose(n - s, t)
    if states > 5_000_000:
        raise ResourceError(
            f"mixed enumeration needs {states} sign patterns; shrink the prefix"
        )
    table: dict[int, int] = {}
    for pos_size in range(l + 1):
        for pos in itertools.combinations(range(n), pos_size):
            rest = [i for i in range(n) if i not in pos]
            base_val = sum(seq.terms[i] for i in pos)
            for neg_size in range(l + 1):
                for neg in itertools.combinations(rest, neg_size):
                    v = base_val - sum(seq.terms[i] for i in neg)
                    table[v] = table.get(v, 0) + 1
    return table


def _choose(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def empirical_mixed_bound(seq: LacunarySequence, l: int) -> int:
    """Largest mixed representation count over the full reachable window."""
    table = mixed_count_table(seq, l)
    return max(table.values())


@dataclass(frozen=True)
class HeadPartitionReport:
    """Partition of an index set by the signed leading term.

    Block keys are signed 1-based sequence positions ``j``: block ``+j``
    holds the values whose canonical representation leads with
    ``+n_j``, block ``-j`` with ``-n_j``.  ``a`` and ``b`` are the
    exact rational bounds such that every member m of block ``+-j``
    satisfies ``a*n_j < |m| < b*n_j`` (with equality semantics for
    pure order-1 sets, where a == b == 1).
    """

    order: int
    a: Fraction
    b: Fraction
    blocks: Mapping[int, tuple[int, ...]]
    ambiguous: tuple[int, ...]
    containment_ok: bool
    violations: tuple[int, ...] = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "a": str(self.a),
            "b": str(self.b),
            "blocks": {str(j): list(vals) for j, vals in sorted(self.blocks.items())},
            "ambiguous": list(self.ambiguous),
            "containment_ok": self.containment_ok,
            "violations": list(self.violations),
        }


def head_partition(
    index_set: ChaosIndexSet, seq: LacunarySequence | None = None
) -> HeadPartitionReport:
    """Group every value of an index set by its signed leading term.

    Values are assigned to the block of their canonical (first, in the
    deterministic enumeration order) representation; the two-sided
    containment is then asserted for EVERY representation, so the
    report certifies the full head-dominance property.  Values whose
    representations disagree on the head are listed as ambiguous.

    Raises ``PreconditionError`` when the sequence witness does not
    exceed the critical ratio for the set's order (the lower bound
    ``a`` would not be positive).
    """
    if seq is None:
        seq = index_set.sequence
    l = index_set.order
    lam = seq.lam
    a = Fraction(1)
    b = Fraction(1)
    for j in range(1, l):
        a -= lam**-j
        b += lam**-j
    if l >= 2 and a <= 0:
        raise PreconditionError(
            f"witness {lam} is at or below the order-{l} critical ratio; "
            "head blocks are not separated"
        )
    blocks: dict[int, list[int]] = {}
    ambiguous: list[int] = []
    violations: list[int] = []
    for value in index_set.values():
        reps = index_set.entries[value]
        keys = {r.signs[0] * (r.indices[0] + 1) for r in reps}
        if len(keys) > 1:
            ambiguous.append(value)
        canonical = reps[0]
        blocks.setdefault(canonical.signs[0] * (canonical.indices[0] + 1), []).append(
            value
        )
        for r in reps:
            lead = seq.terms[r.indices[0]]
            if l == 1:
                ok = abs(value) == lead
            else:
                ok = a * lead < abs(value) < b * lead
            if not ok:
                violations.append(value)
    return HeadPartitionReport(
        order=l,
        a=a,
        b=b,
        blocks={j: tuple(vals) for j, vals in blocks.items()},
        ambiguous=tuple(sorted(set(ambiguous))),
        containment_ok=not violations,
        violations=tuple(sorted(set(violations))),
    )


def counterexample_sequence(l: int, m_max: int) -> tuple[LacunarySequence, dict]:
    """Critically lacunary sequence whose order-l signed sums cover a range.

    For every m in [3**l, m_max] a group of l terms is emitted:
    ``n_k(m) = floor(10**(m*l) * lambda_l**k) + 3**k`` for k < l and
    ``n_l(m) = m + n_{l-1}(m) + ... + n_1(m)``, so that
    ``m = n_l(m) - n_{l-1}(m) - ... - n_1(m)`` exactly.

    The floors are certified with a dyadic rational bracket of
    lambda_l whose width is small against the floor arguments, and the
    merged sequence's lacunarity is verified pair by pair against the
    bracket's upper end.  Returns the sequence and a coverage report.
    """
    if not isinstance(l, int) or l < 2:
        raise InvalidOrderError("order must be >= 2")
    lo_m = 3**l
    if m_max < lo_m:
        raise InvalidInputError(f"m_max must be at least 3**l = {lo_m}")
    if l * m_max > 3000:
        raise ResourceError(
            "terms would exceed 10**3000; shrink m_max (big integers stay exact "
            "but arithmetic time grows quadratically)"
        )

    bits = int(3.33 * l * m_max) + 2 * l + 16
    for _attempt in range(4):
        lo, hi = critical_lambda_bracket(l, bits)
        groups: dict[int, list[int]] = {}
        certified = True
        for m in range(lo_m, m_max + 1):
            scale = 10 ** (m * l)
            group = []
            for k in range(1, l):
                f_lo = scale * lo.numerator**k // lo.denominator**k
                f_hi = scale * hi.numerator**k // hi.denominator**k
                if f_lo != f_hi:
                    certified = False
                    break
                group.append(f_lo + 3**k)
            if not certified:
                break
            group.append(m + sum(group))
            groups[m] = group
        if certified:
            break
        bits *= 2
    else:
        raise ResourceError("could not certify floors at the tried bracket widths")

    merged: list[int] = []
    for m in range(lo_m, m_max + 1):
        merged.extend(groups[m])
    first_violation = None
    for i in range(len(merged) - 1):
        a, bterm = merged[i], merged[i + 1]
        if l == 2:
            ok = bterm > a
        else:
            # ratio >= hi > lambda_l certifies strict criticality
            ok = bterm * hi.denominator >= hi.numerator * a
        if not ok:
            first_violation = {"index": i, "pair": (a, bterm)}
            break
    lacunary_ok = first_violation is None

    positions = {t: i for i, t in enumerate(merged)}
    witnesses = {}
    missing = []
    for m in range(lo_m, m_max + 1):
        group = groups[m]
        value = group[-1] - sum(group[:-1])
        indices = [positions[t] for t in reversed(group)]
        signs = [1] + [-1] * (l - 1)
        if value != m or any(
            indices[i] <= indices[i + 1] for i in range(len(indices) - 1)
        ):
            missing.append(m)
        else:
            witnesses[m] = {"indices": indices, "signs": signs}

    seq = LacunarySequence(merged, lo if l > 2 else Fraction(1))
    report = {
        "order": l,
        "m_min": lo_m,
        "m_max": m_max,
        "bracket_bits": bits,
        "lambda_bracket": [str(lo), str(hi)],
        "lacunary_ok": lacunary_ok,
        "first_violation": first_violation,
        "coverage_ok": not missing,
        "missing": missing,
        "witnesses": witnesses,
    }
    return seq, report
