"""Lacunary-core tests.

Derived expectations are produced by independent oracles defined at the
top of this file (brute-force enumeration, closed-form roots, scipy
bisection) before being compared with the library.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import brentq

from lacuna import (
    InsufficientTermsError,
    InvalidInputError,
    InvalidOrderError,
    InvalidSequenceError,
    LacunarySequence,
    PreconditionError,
    ResourceError,
    counterexample_sequence,
    critical_lambda,
    critical_lambda_bracket,
    dyadic_sequence,
    empirical_mixed_bound,
    enumerate_index_set,
    geometric_sequence,
    head_partition,
    mixed_count_table,
    mixed_representation_count,
    representations,
    validate_lacunary,
)

GOLDEN = (1 + math.sqrt(5)) / 2


def oracle_critical(l: int) -> float:
    """Independent root of x^(l-1) = x^(l-2) + ... + 1 via scipy."""

    def f(x):
        return x ** (l - 1) - sum(x**j for j in range(l - 1))

    return brentq(f, 1.0 + 1e-9, 2.0, xtol=1e-15, rtol=8.9e-16)


def oracle_signed_sums(terms, l, exact_order=True):
    """All values of eps_1 n_{k_1} + ... with distinct indices, brute force."""
    orders = [l] if exact_order else range(1, l + 1)
    values = {}
    for s in orders:
        for combo in itertools.combinations(range(len(terms)), s):
            for signs in itertools.product((1, -1), repeat=s):
                v = sum(e * terms[i] for e, i in zip(signs, combo))
                values.setdefault(v, []).append((combo, signs))
    return values


# --- critical constants ---------------------------------------------------


def test_critical_lambda_degenerate_order_two():
    assert critical_lambda(2) == 1.0


def test_critical_lambda_golden_and_tribonacci():
    assert critical_lambda(3) == pytest.approx(GOLDEN, abs=1e-14)
    # tribonacci constant: the real root of x^3 = x^2 + x + 1
    roots = np.roots([1, -1, -1, -1])
    tribonacci = float(max(r.real for r in roots if abs(r.imag) < 1e-12))
    assert critical_lambda(4) == pytest.approx(tribonacci, abs=1e-13)


def test_critical_lambda_against_scipy_oracle():
    for l in range(3, 13):
        assert critical_lambda(l) == pytest.approx(oracle_critical(l), abs=1e-12)


def test_critical_lambda_monotone_below_two():
    values = [critical_lambda(l) for l in range(2, 13)]
    for a, b in zip(values, values[1:]):
        assert a < b
    assert all(v < 2 for v in values)


def test_critical_lambda_rejects_low_order():
    with pytest.raises(InvalidOrderError):
        critical_lambda(1)
    with pytest.raises(InvalidInputError):
        critical_lambda(3, tol=0.0)


def test_critical_bracket_contains_root():
    for l, bits in ((3, 30), (4, 64), (7, 80)):
        lo, hi = critical_lambda_bracket(l, bits)
        assert hi - lo <= Fraction(1, 2**bits)
        root = oracle_critical(l)
        assert float(lo) <= root <= float(hi) or abs(float(lo) - root) < 1e-14
    assert critical_lambda_bracket(2) == (Fraction(1), Fraction(1))


# --- validation and sequence type ----------------------------------------


def test_validate_lacunary_pass_and_fail():
    assert validate_lacunary([4, 16, 64], 3)["ok"] is True
    report = validate_lacunary([2, 4, 8], 3)
    assert report["ok"] is False
    assert report["first_violation"]["pair"] == (2, 4)
    assert report["first_violation"]["index"] == 0


def test_validate_lacunary_bad_inputs():
    with pytest.raises(InvalidSequenceError):
        validate_lacunary([5, 5, 25], 1.5)
    with pytest.raises(InvalidSequenceError):
        validate_lacunary([], 2)
    with pytest.raises(InvalidSequenceError):
        validate_lacunary([0, 3], 2)


def test_sequence_constructor_enforces_witness():
    seq = LacunarySequence((4, 16, 64), lam=Fraction(3))
    assert seq.prefix(2).terms == (4, 16)
    with pytest.raises(InvalidSequenceError):
        LacunarySequence((4, 8), lam=Fraction(3))
    # the witness comparison is exact: ratio 3 is not > 3
    with pytest.raises(InvalidSequenceError):
        LacunarySequence((3, 9), lam=Fraction(3))


# --- enumeration ----------------------------------------------------------


def test_enumerate_signed_pairs_matches_brute_force():
    seq = LacunarySequence((4, 16, 64), lam=Fraction(3))
    iset = enumerate_index_set(seq, 2, "signed")
    oracle = oracle_signed_sums((4, 16, 64), 2)
    assert sorted(iset.values()) == sorted(oracle)
    assert sorted(abs(v) for v in iset.values()) == sorted(
        [12, 12, 20, 20, 48, 48, 60, 60, 68, 68, 80, 80]
    )
    for m, reps in iset.entries.items():
        assert len(reps) == 1
        assert reps[0].value == m


def test_enumerate_dyadic_smallest_values():
    iset = enumerate_index_set(dyadic_sequence(4), 2, "dyadic")
    assert sorted(iset.values())[:6] == [6, 10, 12, 18, 20, 24]


def test_enumerate_positive_pairs():
    seq = LacunarySequence((1, 2, 4), lam=Fraction(1, 2))
    iset = enumerate_index_set(seq, 2, "positive")
    assert sorted(iset.values()) == [3, 5, 6]


def test_enumerate_star_union_and_counts():
    seq = geometric_sequence(4, 5)
    star = enumerate_index_set(seq, 3, "signed-star")
    joined = set()
    for s in (1, 2, 3):
        joined |= set(enumerate_index_set(seq, s, "signed").values())
    assert set(star.values()) == joined
    # exhaustiveness: total stored representations for the exact-order
    # signed variant is 2^l * C(n, l)
    exact = enumerate_index_set(seq, 3, "signed")
    total = sum(len(r) for r in exact.entries.values())
    assert total == 2**3 * math.comb(5, 3)


def test_enumerate_insufficient_terms():
    seq = geometric_sequence(4, 3)
    with pytest.raises(InsufficientTermsError):
        enumerate_index_set(seq, 4, "signed")
    with pytest.raises(InvalidInputError):
        enumerate_index_set(seq, 2, "no-such-variant")


# --- representations ------------------------------------------------------


def test_representations_unique_on_three_lacunary():
    seq = geometric_sequence(4, 4)
    reps = representations(seq, 12, 2)
    assert len(reps) == 1
    assert reps[0].indices == (1, 0)
    assert reps[0].signs == (1, -1)
    assert reps[0].head == 16


def test_representations_zero_empty_on_three_lacunary():
    seq = geometric_sequence(4, 4)
    assert representations(seq, 0, 4) == []


def test_representations_collision_below_three():
    # ratio 2 is not 3-lacunary: 2 = 2 = 4 - 2 shows uniqueness needs > 3
    seq = geometric_sequence(2, 4, lam=Fraction(3, 2))
    reps = representations(seq, 2, 2)
    assert len(reps) == 2
    shapes = {(r.indices, r.signs) for r in reps}
    assert ((0,), (1,)) in shapes
    assert ((1, 0), (1, -1)) in shapes


def test_representations_exhaustive_window_uniqueness():
    """Over a 3-lacunary prefix every reachable value has exactly one
    at-most-l signed representation."""
    seq = geometric_sequence(4, 8)
    for l in (2, 3):
        star = enumerate_index_set(seq, l, "signed-star")
        for m, reps in star.entries.items():
            assert len(reps) == 1, f"value {m} has {len(reps)} representations"
        assert representations(seq, 0, l) == []


def test_positive_star_unique_above_next_critical():
    # positive-sum uniqueness needs lambda > lambda_{l+1}; ratio 4
    # clears the order-3 constant
    seq = geometric_sequence(4, 7)
    star = enumerate_index_set(seq, 2, "positive-star")
    for m, reps in star.entries.items():
        assert len(reps) == 1, m


# --- mixed counts ---------------------------------------------------------


def oracle_mixed_count(terms, m, l):
    count = 0
    n = len(terms)
    for s in range(l + 1):
        for t in range(l + 1):
            for plus in itertools.combinations(range(n), s):
                rest = [i for i in range(n) if i not in plus]
                for minus in itertools.combinations(rest, t):
                    v = sum(terms[i] for i in plus) - sum(terms[i] for i in minus)
                    if v == m:
                        count += 1
    return count


def test_mixed_count_matches_brute_force():
    seq = geometric_sequence(4, 3)
    for m in (0, 12, 20, 84, 7, -48):
        assert mixed_representation_count(seq, m, 2) == oracle_mixed_count(
            (4, 16, 64), m, 2
        )


def test_mixed_count_zero_and_unreachable():
    seq = geometric_sequence(4, 3)
    assert mixed_representation_count(seq, 0, 2) == 1
    assert mixed_representation_count(seq, 10**9, 2) == 0


def test_mixed_count_warns_below_critical():
    seq = geometric_sequence(2, 4, lam=Fraction(3, 2))
    with pytest.warns(UserWarning):
        mixed_representation_count(seq, 6, 2)


def test_empirical_bound_is_max_of_table():
    seq = geometric_sequence(4, 6)
    table = mixed_count_table(seq, 2)
    bound = empirical_mixed_bound(seq, 2)
    assert bound == max(table.values())
    assert bound == 1  # signed-digit uniqueness for the base-4 ladder
    assert all(v <= bound for v in table.values())


def test_mixed_table_resource_guard():
    seq = geometric_sequence(2, 24, lam=Fraction(3, 2))
    with pytest.raises(ResourceError):
        mixed_count_table(seq, 6)


# --- head partition -------------------------------------------------------


def test_head_partition_order_two_bounds():
    seq = geometric_sequence(4, 3)
    iset = enumerate_index_set(seq, 2, "signed")
    report = head_partition(iset)
    assert report.a == Fraction(2, 3)
    assert report.b == Fraction(4, 3)
    assert report.containment_ok
    assert report.ambiguous == ()
    # 20 and 12 both carry head +16, the j=+2 block
    assert 20 in report.blocks[2]
    assert 12 in report.blocks[2]
    assert Fraction(32, 3) < 20 < Fraction(64, 3)
    assert Fraction(32, 3) < 12 < Fraction(64, 3)


def test_head_partition_blocks_partition_the_set():
    seq = geometric_sequence(4, 5)
    iset = enumerate_index_set(seq, 3, "signed")
    report = head_partition(iset)
    seen = []
    for members in report.blocks.values():
        seen.extend(members)
    assert sorted(seen) == sorted(iset.values())
    assert len(seen) == len(set(seen))


def test_head_partition_order_one_equality():
    seq = geometric_sequence(4, 4)
    iset = enumerate_index_set(seq, 1, "signed")
    report = head_partition(iset)
    assert report.containment_ok
    for j, members in report.blocks.items():
        for m in members:
            assert abs(m) == seq.terms[abs(j) - 1]


def test_head_partition_rejects_subcritical():
    iset = enumerate_index_set(dyadic_sequence(4), 2, "dyadic")
    with pytest.raises(PreconditionError):
        head_partition(iset)


# --- counterexample construction -----------------------------------------


def test_counterexample_order_two_single_m():
    seq, report = counterexample_sequence(2, 9)
    assert seq.terms == (10**18 + 3, 10**18 + 12)
    assert report["coverage_ok"]
    assert report["lacunary_ok"]
    assert report["witnesses"][9]["signs"] == [1, -1]
    n2, n1 = seq.terms[1], seq.terms[0]
    assert n2 - n1 == 9


def test_counterexample_order_two_window():
    seq, report = counterexample_sequence(2, 20)
    assert report["m_min"] == 9 and report["m_max"] == 20
    assert report["missing"] == []
    terms = seq.terms
    assert all(a < b for a, b in zip(terms, terms[1:]))
    values = set()
    for i, j in itertools.combinations(range(len(terms)), 2):
        values.add(terms[j] - terms[i])
    for m in range(9, 21):
        assert m in values


def test_counterexample_order_three():
    seq, report = counterexample_sequence(3, 30)
    assert report["coverage_ok"] and report["lacunary_ok"]
    lo = Fraction(report["lambda_bracket"][0])
    for a, b in zip(seq.terms, seq.terms[1:]):
        assert Fraction(b, a) > lo


def test_counterexample_guards():
    with pytest.raises(InvalidInputError):
        counterexample_sequence(2, 5)
    with pytest.raises(InvalidOrderError):
        counterexample_sequence(1, 10)
    with pytest.raises(ResourceError):
        counterexample_sequence(2, 2000)


# --- randomized window sanity --------------------------------------------


def test_random_prefixes_roundtrip_representations():
    rng = np.random.default_rng(20240817)
    for _ in range(25):
        length = int(rng.integers(2, 6))
        base = int(rng.integers(4, 9))
        seq = geometric_sequence(base, length)
        l = int(rng.integers(1, min(3, length) + 1))
        iset = enumerate_index_set(seq, l, "signed")
        m = int(rng.choice(sorted(iset.values())))
        found = representations(seq, m, l)
        assert any(r.value == m for r in found)
        oracle = oracle_signed_sums(seq.terms, l, exact_order=False)
        assert len(found) == len(oracle[m])
