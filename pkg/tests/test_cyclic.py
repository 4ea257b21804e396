"""Gaussian periods, Frobenius degrees, composita, the Kummer generator."""

import pytest

from normforge.cyclic import (
    compositum_degree_data,
    find_auxiliary_ell,
    frobenius_residue_degree,
    gaussian_period_subfield,
    kummer_generator,
    nonsplit_sublayer,
    subgroup_of_index,
)
from normforge.errors import HypothesisFail, RamifiedCase, SearchExhausted
from normforge.intfunc import primes_up_to
from normforge.numberfield import NumberField, splitting_type, valuation
from normforge.polyq import UniPoly, real_root_isolate


def test_find_auxiliary_ell_worked():
    assert find_auxiliary_ell(3, 1) == 7  # 7 = 1 mod 3, cubes mod 7 are {1, 6}
    assert find_auxiliary_ell(2, 1) == 5  # squares mod 5 are {1, 4}
    assert find_auxiliary_ell(2, 2) == 5  # 5 = 1 mod 4 and 2 is a non-residue
    assert pow(3, 2, 7) != 1 and pow(2, 2, 5) != 1
    with pytest.raises(SearchExhausted):
        find_auxiliary_ell(3, 1, bound=5)


def test_gaussian_period_worked_examples():
    h = gaussian_period_subfield(7, 3)
    assert h.period_poly == UniPoly([-1, -2, 1, 1])
    assert h.subgroup == (1, 6)
    h2 = gaussian_period_subfield(5, 2)
    assert h2.period_poly == UniPoly([-1, 1, 1])
    assert h2.subgroup == (1, 4)
    marker = gaussian_period_subfield(11, 1)
    assert marker.period_poly == UniPoly([1, 1])  # full period sums to -1


def test_period_fields_totally_real_when_minus_one_in_subgroup():
    for ell in primes_up_to(100):
        if ell < 3:
            continue
        for d in range(2, 7):
            if (ell - 1) % d != 0:
                continue
            if ell - 1 in subgroup_of_index(ell, d):
                h = gaussian_period_subfield(ell, d)
                assert h.totally_real
                assert len(real_root_isolate(h.period_poly)) == d


def test_frobenius_worked_examples():
    assert frobenius_residue_degree(7, 3, 3) == 3
    assert frobenius_residue_degree(5, 2, 2) == 2
    assert frobenius_residue_degree(7, 3, 2) == 3
    with pytest.raises(RamifiedCase):
        frobenius_residue_degree(7, 3, 7)


def test_frobenius_agrees_with_splitting_type():
    from normforge.errors import NonMonogenicAtP

    for ell in [p for p in primes_up_to(50) if p > 2]:
        for d in (2, 3, 4):
            if (ell - 1) % d != 0:
                continue
            h = gaussian_period_subfield(ell, d)
            field = h.number_field()
            for p in primes_up_to(20):
                if p == ell:
                    continue
                try:
                    primes = splitting_type(field, p)
                except NonMonogenicAtP:
                    continue
                f_pred = frobenius_residue_degree(ell, d, p)
                assert {P.f_deg for P in primes} == {f_pred}
                assert len(primes) == d // f_pred
                assert all(P.e == 1 for P in primes)


def test_compositum_worked_examples():
    H73 = gaussian_period_subfield(7, 3)
    G5 = NumberField(UniPoly([-1, -1, 1]), name="Q(sqrt5)")
    assert compositum_degree_data(G5, H73) == (3, 3)
    assert compositum_degree_data(H73.number_field(), H73) == (1, 1)
    assert compositum_degree_data(NumberField.rationals(), H73) == (3, 3)
    # a genuine partial intersection: H = degree-4 subfield of Q(xi_13),
    # G = its quadratic subfield: [GH : G] = 2
    H134 = gaussian_period_subfield(13, 4)
    G132 = gaussian_period_subfield(13, 2).number_field()
    assert compositum_degree_data(G132, H134) == (2, 2)


def test_nonsplit_sublayer_worked():
    Q = NumberField.rationals()
    H52 = gaussian_period_subfield(5, 2)
    P2, = splitting_type(Q, 2)
    assert nonsplit_sublayer(P2, H52, 2) == (1, 2)
    H73 = gaussian_period_subfield(7, 3)
    P3, = splitting_type(Q, 3)
    assert nonsplit_sublayer(P3, H73, 3) == (1, 3)
    # f already at the full power: hypothesis violated
    G = H52.number_field()
    P2g, = splitting_type(G, 2)  # 2 inert: f = 2 = q^r
    with pytest.raises(HypothesisFail):
        nonsplit_sublayer(P2g, H52, 2)


def test_kummer_generator_properties():
    a, hdata = kummer_generator(7, 3)
    K = a.field  # Q(zeta_3)
    assert K.degree == 2
    assert a.norm() == 343  # norm 7^3: unit at every prime except 7
    Q3, = splitting_type(K, 3)
    assert valuation(K, Q3, a) == 0
    # a is a genuine Kummer generator: x^3 - a is irreducible over Q as a
    # degree-6 absolute polynomial (resultant construction)
    from normforge.polyq import resultant
    from normforge.zfactor import is_irreducible_over_q

    apoly = a.poly()
    # char poly of a = Res_x(f(x), y - a(x)) as polynomial in y, by interpolation
    pts = []
    from fractions import Fraction

    for k in range(3):
        y0 = Fraction(k)
        pts.append((y0, resultant(K.poly, UniPoly([y0]) - apoly)))
    from normforge.kpoly import _lagrange_interpolate

    charpoly = _lagrange_interpolate(pts)
    # substitute y -> x^3 to get the absolute polynomial of a^(1/3)
    absolute = charpoly.compose(UniPoly([0, 0, 0, 1]))
    assert absolute.degree == 6
    assert is_irreducible_over_q(absolute)


def test_makereal_generators_totally_nonnegative():
    """Quadratic compositum layers built from totally real period fields have
    totally positive Kummer generators (the Gauss-sum square a = ell)."""
    from normforge.numberfield import omega_membership

    for ell in (5, 13, 17):
        a, hdata = kummer_generator(ell, 2)
        assert hdata.totally_real
        assert a.as_rational() == ell  # the classical Gauss sum square
        assert omega_membership(a.field, a, 2)


def test_cyclic_field_json():
    h = gaussian_period_subfield(7, 3)
    data = h.to_json()
    assert data["ell"] == 7 and data["degree"] == 3
    assert data["period_poly"] == ["-1", "-2", "1", "1"]
    assert data["totally_real"] is True
