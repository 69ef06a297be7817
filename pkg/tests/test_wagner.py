"""Tests for the congruence filter."""

import pytest

from helpzc.arith import divisors
from helpzc.chartables import cyclic_table, load_bundle, resolve_bundle_path
from helpzc.constraints import ConstraintError, PATuple, pa_vector
from helpzc.wagner import wagner_test


def bundle(name):
    return load_bundle(resolve_bundle_path(name))


def full_trivial_tuple(table, c):
    """Complete tuple of a unit mimicking the group element in class c."""
    k = table.classes[c].element_order
    levels = []
    for e in divisors(k):
        if e == 1:
            continue
        ci = table.class_of_power(c, k // e)
        levels.append((e, pa_vector(table, e, {ci: 1})))
    return PATuple(k, tuple(levels))


def c6_tuple(eps_by_class, u2_class=2, u3_class=3):
    t = cyclic_table(6).ordinary
    return PATuple(
        6,
        (
            (2, pa_vector(t, 2, {u3_class: 1})),
            (3, pa_vector(t, 3, {u2_class: 1})),
            (6, pa_vector(t, 6, eps_by_class)),
        ),
    )


def test_trivial_tuples_pass_everywhere():
    for name in ("s3", "s4", "a5", "sl23", "m11"):
        t = bundle(name).ordinary
        for c, cl in enumerate(t.classes):
            if cl.element_order > 1:
                assert wagner_test(t, full_trivial_tuple(t, c))
    t = cyclic_table(12).ordinary
    for c in range(1, 12):
        assert wagner_test(t, full_trivial_tuple(t, c))


def test_derived_counterexample_on_c6():
    # classes: g1 (order 6), g2, g4 (order 3), g3 (order 2), g5 (order 6);
    # cubing sends g1, g3, g5 to g3, so the p=3 congruence reads
    # 0 + 3 + 0 = 3 against eps_{g3}(u^3) = 1, and 3 != 1 mod 3
    t = cyclic_table(6).ordinary
    tup = c6_tuple({1: 0, 3: 3, 5: 0, 2: -1, 4: -1})
    assert sum(v for _, v in tup.top.entries) == 1
    assert wagner_test(t, tup) is False


def test_passing_nontrivial_values():
    t = cyclic_table(6).ordinary
    # shift by multiples of the moduli: p=2 sums must match mod 2,
    # p=3 sums mod 3; this one passes both
    tup = c6_tuple({1: 1, 2: -6, 4: 6})
    assert wagner_test(t, tup) is True


def test_prime_power_orders_are_vacuous():
    t = cyclic_table(4).ordinary
    tup = PATuple(
        4,
        (
            (2, pa_vector(t, 2, {2: 1})),
            (4, pa_vector(t, 4, {1: 3, 3: -2})),
        ),
    )
    assert wagner_test(t, tup) is True
    t8 = cyclic_table(8).ordinary
    tup8 = full_trivial_tuple(t8, 1)
    weird = PATuple(
        8, tuple((e, pa) for e, pa in tup8.levels if e != 8)
    ).with_top(pa_vector(t8, 8, {1: 5, 3: -4, 5: 0, 7: 0}))
    assert wagner_test(t8, weird) is True


def test_missing_level_raises():
    t = cyclic_table(6).ordinary
    incomplete = PATuple(
        6,
        (
            (3, pa_vector(t, 3, {2: 1})),
            (6, pa_vector(t, 6, {1: 1})),
        ),
    )
    with pytest.raises(ConstraintError, match="missing"):
        wagner_test(t, incomplete)
    no_top = PATuple(6, ((2, pa_vector(t, 2, {3: 1})),))
    with pytest.raises(ConstraintError, match="missing"):
        wagner_test(t, no_top)


def test_swap_of_power_symmetric_classes():
    # 5a and 5b of A5 have mirrored power maps, so swapping them in every
    # level cannot change the outcome
    a5 = bundle("a5").ordinary
    i2a, i5a, i5b = (a5.index_of(n) for n in ("2a", "5a", "5b"))
    swap = {i5a: i5b, i5b: i5a}

    def swapped(pa):
        return pa_vector(
            a5, pa.order, {swap.get(i, i): v for i, v in pa.entries}
        )

    cases = [
        {i2a: 1, i5a: 2, i5b: -2},
        {i2a: -1, i5a: 2},
        {i2a: 3, i5a: -1, i5b: -1},
        {i2a: 1},
    ]
    for level5 in ({i5a: 1}, {i5b: 1}, {i5a: 2, i5b: -1}):
        for top in cases:
            tup = PATuple(
                10,
                (
                    (2, pa_vector(a5, 2, {i2a: 1})),
                    (5, pa_vector(a5, 5, level5)),
                    (10, pa_vector(a5, 10, top)),
                ),
            )
            mirrored = PATuple(
                10,
                tuple((e, swapped(pa)) for e, pa in tup.levels),
            )
            assert wagner_test(a5, tup) == wagner_test(a5, mirrored)


def test_rejects_order_ten_sum_mismatch():
    # u^5 trivial on 2a forces eps_2a(u) odd after squaring classes are
    # grouped; breaking the mod 5 congruence must be detected
    a5 = bundle("a5").ordinary
    i2a, i5a, i5b = (a5.index_of(n) for n in ("2a", "5a", "5b"))
    tup = PATuple(
        10,
        (
            (2, pa_vector(a5, 2, {i2a: 1})),
            (5, pa_vector(a5, 5, {i5a: 1})),
            (10, pa_vector(a5, 10, {i2a: 1, i5a: 1, i5b: -1})),
        ),
    )
    # p=5: x^5 sends 2a -> 2a, 5a/5b -> 1a; sum over preimages of 2a is 1,
    # level value is 1: passes; p=2: x^2 sends 2a -> 1a, 5a -> 5b, 5b -> 5a;
    # class 5b collects eps_5a = 1 vs level eps_5b = 0: 1 != 0 mod 2
    assert wagner_test(a5, tup) is False


def test_rejects_order_twelve_candidates_with_odd_order_four_mass():
    # the two classic order-12 candidates for M11: both satisfy every
    # classwise congruence for p = 2 and p = 3, and only the aggregate
    # order-4 sum (eps_4a = 1, odd) rejects them
    m11 = bundle("m11").ordinary
    i2a, i3a, i4a, i6a = (m11.index_of(n) for n in ("2a", "3a", "4a", "6a"))
    proper = (
        (2, pa_vector(m11, 2, {i2a: 1})),
        (3, pa_vector(m11, 3, {i3a: 1})),
        (4, pa_vector(m11, 4, {i4a: 1})),
        (6, pa_vector(m11, 6, {i3a: 3, i6a: -2})),
    )
    for top in ({i2a: -1, i4a: 1, i6a: 1}, {i2a: 1, i4a: 1, i6a: -1}):
        tup = PATuple(12, proper + ((12, pa_vector(m11, 12, top)),))
        assert wagner_test(m11, tup) is False
