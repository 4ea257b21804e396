"""Local layer rules, norm solvability verdicts, Hilbert symbols."""

import random

import pytest

from normforge.errors import MissingTrace, NormforgeError
from normforge.finitefield import FiniteField
from normforge.local import (
    LocalPrime,
    LocalVerdict,
    archimedean_check,
    conservation_total,
    extend_by_radical,
    hilbert_symbol,
    local_norm_solvable,
    radical_children,
)
from normforge.numberfield import NumberField
from normforge.polyq import UniPoly


def make_lp(p, e=1, f=1):
    return LocalPrime(p, e, f)


def test_rule_ramified():
    # p = 7, v(u) = 1, q = 3: one child with e tripled (total tame ramification)
    lp = make_lp(7)
    lp.track("u", 1, FiniteField(7).element(3))
    kids = extend_by_radical(lp, "u", 3)
    assert len(kids) == 1 and kids[0].e == 3 and kids[0].f == 1
    assert conservation_total(kids, lp) == 3


def test_rule_inert():
    # p = 7, v(u) = 0, u = 5 mod 7, q = 3: 5 is not a cube (cubes are 1, 6)
    assert sorted({pow(a, 3, 7) for a in range(1, 7)}) == [1, 6]
    lp = make_lp(7)
    lp.track("u", 0, FiniteField(7).element(5))
    kids = extend_by_radical(lp, "u", 3)
    assert len(kids) == 1 and kids[0].f == 3 and kids[0].e == 1
    assert conservation_total(kids, lp) == 3


def test_rule_split():
    lp = make_lp(7)
    lp.track("u", 0, FiniteField(7).element(6))  # 6 = 3^3 mod 7
    kids = extend_by_radical(lp, "u", 3)
    assert len(kids) == 3 and all(k.e == 1 and k.f == 1 for k in kids)
    assert conservation_total(kids, lp) == 3


def test_rule_guard_split():
    # p = 2, u = 17, q = 2: v(16) = 4 >= 3 = 3 v_2(2)
    lp = make_lp(2)
    lp.track("u", 0, None)
    lp.track("um1", 4)
    kids = extend_by_radical(lp, "u", 2, u_minus_one_key="um1")
    assert len(kids) == 2 and all(k.e == 1 and k.f == 1 for k in kids)


def test_rule_wild_indeterminate():
    lp = make_lp(3)
    lp.track("u", 0, None)
    lp.track("um1", 1)
    kids = extend_by_radical(lp, "u", 3, u_minus_one_key="um1")
    assert len(kids) == 1 and kids[0].indeterminate


def test_missing_trace():
    lp = make_lp(7)
    with pytest.raises(MissingTrace):
        extend_by_radical(lp, "ghost", 3)


def test_radical_children_without_xi():
    # x^5 - u at p with 5 not dividing p^f - 1: one root plus orbits
    lp = make_lp(3)  # 3^1 - 1 = 2, 5 does not divide
    lp.track("u", 0, FiniteField(3).element(2))
    kids = radical_children(lp, "u", 5, xi_q=False)
    sizes = sorted((k.e, k.f) for k in kids)
    assert sizes == [(1, 1), (1, 4)]  # ord(3 mod 5) = 4
    assert conservation_total(kids, lp) == 5


def test_norm_solvable_inert_parity():
    lp = make_lp(3)
    F3 = FiniteField(3)
    lp.track("c", 0, F3.element(2))  # -1 = 2 is not a square mod 3
    for v_rhs, expected in [(1, LocalVerdict.UNSOLVABLE), (2, LocalVerdict.SOLVABLE),
                            (0, LocalVerdict.SOLVABLE), (-3, LocalVerdict.UNSOLVABLE)]:
        lp.track("rhs", v_rhs, F3.element(1))
        verdict = local_norm_solvable(lp, "rhs", "c", 2)
        assert verdict.kind == expected


def test_norm_solvable_split_any_rhs():
    lp = make_lp(7)
    F7 = FiniteField(7)
    lp.track("c", 0, F7.element(6))  # 6 is a cube mod 7
    lp.track("rhs", 5, F7.element(3))
    assert local_norm_solvable(lp, "rhs", "c", 3).kind == LocalVerdict.SOLVABLE


def test_norm_solvable_depends_on_class_only():
    # perturbing rhs by q-th powers of the uniformizer never changes the verdict
    rng = random.Random(1)
    lp = make_lp(3)
    F3 = FiniteField(3)
    lp.track("c", 0, F3.element(2))
    for _ in range(20):
        v = rng.randint(-6, 6)
        lp.track("rhs", v, F3.element(1))
        base = local_norm_solvable(lp, "rhs", "c", 2).kind
        lp.track("rhs", v + 2 * rng.randint(-3, 3), F3.element(1))
        assert local_norm_solvable(lp, "rhs", "c", 2).kind == base


def test_tame_ramified_norm_rule():
    # layer from c with v(c) = 1 at p = 5, q = 2: N(sqrt(c)) = -c
    lp = make_lp(5)
    F5 = FiniteField(5)
    lp.track("c", 1, F5.element(1))  # c = 5: unit part 1
    # rhs = 5: v = 1: strip one norm factor: unit part 1 / (-1) = -1 = 4: square mod 5
    lp.track("rhs", 1, F5.element(1))
    assert local_norm_solvable(lp, "rhs", "c", 2).kind == LocalVerdict.SOLVABLE
    # rhs = 2 * 5: stripped unit 2/(-1) = -2 = 3: non-square mod 5
    lp.track("rhs", 1, F5.element(2))
    assert local_norm_solvable(lp, "rhs", "c", 2).kind == LocalVerdict.UNSOLVABLE


def test_archimedean_check():
    Q = NumberField.rationals()
    assert archimedean_check(Q, Q.element(17), Q.element(-3), 2).kind == LocalVerdict.SOLVABLE
    assert archimedean_check(Q, Q.element(-1), Q.element(-3), 2).kind == LocalVerdict.UNSOLVABLE
    assert archimedean_check(Q, Q.element(-1), Q.element(-3), 3).kind == LocalVerdict.SOLVABLE
    K3 = NumberField(UniPoly([1, 1, 1]))
    assert archimedean_check(K3, K3.element(-1), K3.element(-3), 2).kind == LocalVerdict.SOLVABLE


def test_hilbert_symbol_values_and_product_formula():
    assert hilbert_symbol(-1, 9, 2) == 1
    assert hilbert_symbol(-1, 3, 2) == -1
    assert hilbert_symbol(-1, -3, "inf") == -1
    rng = random.Random(17)
    for _ in range(60):
        a = rng.choice([-1, 1]) * rng.randint(1, 60)
        b = rng.choice([-1, 1]) * rng.randint(1, 60)
        places = {2, 3, 5, 7, "inf"}
        from normforge.intfunc import factorint

        for n in (abs(a), abs(b)):
            places.update(factorint(n))
        prod = 1
        for v in places:
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1  # the product formula over all ramified places


from hypothesis import given, settings
from hypothesis import strategies as st

nonzero = st.integers(-50, 50).filter(lambda n: n != 0)


@settings(max_examples=60, deadline=None)
@given(nonzero, nonzero, nonzero, st.sampled_from([2, 3, 5, 7, "inf"]))
def test_hilbert_symbol_bilinear(a, a2, b, place):
    lhs = hilbert_symbol(a * a2, b, place)
    rhs = hilbert_symbol(a, b, place) * hilbert_symbol(a2, b, place)
    assert lhs == rhs


def test_verdict_requires_reason():
    with pytest.raises(NormforgeError):
        LocalVerdict(LocalVerdict.UNSOLVABLE, "")
