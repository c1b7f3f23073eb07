"""Graded algebra descriptions, expectations, and the ladder normal form."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gsr.algebra import (
    RationalFunction,
    casimir_poly,
    custom_spec,
    dynamical_spec,
    group_algebra_spec,
    in_span,
    quantum_disk_spec,
    sl2_normal_form,
    su2_spec,
    su11_spec,
    weyl_normal_form,
    weyl_normal_form_poly,
    weyl_spec,
)
from gsr.groups import GroupSpec
from gsr.scalars import Scalar
from gsr.words import EMPTY_WORD, NCPolynomial, word

from helpers import s3_group, s3_spec


def poly_model_apply(spec, p, j: int) -> dict:
    """Exact action on x^j in the differentiation model a = d/dx, a* = x.

    The model satisfies a a* - a* a = 1 with all-rational matrix elements,
    so it decides equality modulo the relation ideal without square roots.
    """
    p = spec.normalize(p)
    out: dict = {}
    for w, c in p.terms.items():
        vec = {j: Scalar.rational(1)}
        for name, _ in reversed(w):
            nxt: dict = {}
            for k, amp in vec.items():
                if name == "a":
                    if k > 0:
                        nxt[k - 1] = nxt.get(k - 1, Scalar.rational(0)) + amp * k
                else:
                    nxt[k + 1] = nxt.get(k + 1, Scalar.rational(0)) + amp
            vec = nxt
        for k, amp in vec.items():
            out[k] = out.get(k, Scalar.rational(0)) + amp * c
    return {k: v for k, v in out.items() if not v.is_zero()}


def test_degree_and_homogeneity():
    spec = weyl_spec()
    assert spec.degree_of(word("a", "a", "a*")) == 1
    assert spec.degree_of(word("a*", "a*")) == -2
    assert spec.degree_of(word("a", "a**")) == 2  # double star cancels
    rel = spec.parse("aa* - a*a - 1")
    assert spec.check_homogeneity(rel) == (True, 0)
    assert spec.check_homogeneity(spec.parse("a + 1")) == (False, None)
    assert spec.check_homogeneity(NCPolynomial.zero()) == (True, None)


def test_normalize_resolves_stars_with_phases():
    su11 = su11_spec()
    p = NCPolynomial.monomial(word("E*"))
    assert su11.normalize(p) == NCPolynomial.monomial(word("F"), -1)
    su2 = su2_spec()
    assert su2.normalize(p) == NCPolynomial.monomial(word("F"))
    q = NCPolynomial.monomial(word("E"), Scalar.gaussian(0, 1))
    assert su11.involute(q) == NCPolynomial.monomial(word("F"), Scalar.gaussian(0, 1))


def test_involute_is_involutive_on_relations():
    for spec in (weyl_spec(), su2_spec(), su11_spec()):
        for rel in spec.relations:
            assert spec.involute(spec.involute(rel)) == spec.normalize(rel)
            assert in_span(spec.involute(rel), spec.relations)


def test_conditional_expectation_by_degree():
    spec = weyl_spec()
    p = spec.parse("1 + a + a^2 + a*a")
    even = spec.group.subgroup((2,))
    assert spec.conditional_expectation(p, even) == spec.parse("1 + a^2 + a*a")
    assert spec.unit_expectation(p) == spec.parse("1 + a*a")
    G, _, H = s3_group()
    with pytest.raises(ValueError):
        spec.conditional_expectation(p, H)


def test_weyl_normal_form_frozen_cases():
    spec = weyl_spec()
    one = Scalar.rational(1)

    def nf(text):
        return weyl_normal_form(spec, spec.parse(text))

    assert nf("aa*") == {0: [one, one]}
    assert nf("a*a") == {0: [Scalar.rational(0), one]}
    assert nf("a^2a*^2") == {0: [Scalar.rational(2), Scalar.rational(3), one]}
    assert nf("a*^2a^2") == {0: [Scalar.rational(0), Scalar.rational(-1), one]}
    assert nf("a^2a*") == {1: [one, one]}
    assert nf("aa* - a*a - 1") == {}


def test_weyl_normal_form_only_for_canonical_family():
    qosc = dynamical_spec(RationalFunction([1, Fraction(1, 4)]))
    with pytest.raises(ValueError):
        weyl_normal_form(qosc, qosc.parse("aa*"))


words_st = st.lists(
    st.tuples(st.sampled_from(["a", "a*"]), st.integers(min_value=-3, max_value=3)),
    min_size=1,
    max_size=4,
)


@given(st.lists(words_st, min_size=1, max_size=3))
def test_weyl_normal_form_round_trip_against_model(word_lists):
    """The reassembled normal form acts identically in the differentiation model."""
    spec = weyl_spec()
    p = NCPolynomial.zero()
    for letters in word_lists:
        w = tuple((n, False) for n, _ in letters)
        c = sum(k for _, k in letters) or 1
        p = p + NCPolynomial.monomial(w, c)
    q = weyl_normal_form_poly(spec, weyl_normal_form(spec, p))
    for j in range(5):
        assert poly_model_apply(spec, p, j) == poly_model_apply(spec, q, j)


def test_finite_average_expectation_sign_flip():
    spec = weyl_spec()
    ident = {"a": ("a", 1), "a*": ("a*", 1)}
    flip = {"a": ("a", -1), "a*": ("a*", -1)}
    p = spec.parse("1 + a + a^2 + a*")
    avg = spec.finite_average_expectation(p, [ident, flip])
    assert avg == spec.parse("1 + a^2")
    even = spec.group.subgroup((2,))
    assert avg == spec.conditional_expectation(p, even)


def test_finite_average_expectation_quarter_rotation():
    spec = weyl_spec()
    i = Scalar.gaussian(0, 1)
    autos = [
        {"a": ("a", i**k), "a*": ("a*", (-i) ** k)} for k in range(4)
    ]
    p = spec.parse("1 + a + a^3 + a^4 + a*a")
    avg = spec.finite_average_expectation(p, autos)
    assert avg == spec.parse("1 + a^4 + a*a")


def test_finite_average_rejects_non_star_maps():
    spec = weyl_spec()
    i = Scalar.gaussian(0, 1)
    with pytest.raises(ValueError):
        spec.finite_average_expectation(
            spec.parse("a"), [{"a": ("a", i), "a*": ("a*", i)}]
        )
    with pytest.raises(ValueError):
        spec.finite_average_expectation(
            spec.parse("a"), [{"a": ("a*", 1), "a*": ("a", 1)}]
        )
    with pytest.raises(ValueError):
        spec.finite_average_expectation(spec.parse("a"), [])


def test_in_span_exact():
    spec = weyl_spec()
    rel = spec.parse("aa* - a*a - 1")
    assert in_span(rel, spec.relations)
    assert in_span(rel.scale(Fraction(-3, 2)), spec.relations)
    assert not in_span(spec.parse("aa* - a*a"), spec.relations)
    assert in_span(NCPolynomial.zero(), [])


def test_rational_function_evaluation_and_poles():
    f = RationalFunction([6], [0, 1])  # 6/t
    assert f(2) == 3
    assert f(Fraction(1, 2)) == 12
    with pytest.raises(ZeroDivisionError):
        f(0)
    with pytest.raises(ZeroDivisionError):
        RationalFunction([1], [0])
    g = RationalFunction([2, 2], [2])  # normalizes to 1 + t
    assert g.num == (1, 1)
    assert g.den == (1,)
    assert g.is_polynomial()


def test_rational_function_preimages_exact():
    f = RationalFunction([1, 1])  # 1 + t
    assert [v.as_fraction() for v in f.preimages(Scalar.rational(5))] == [4]
    sq = RationalFunction([0, 0, 1])  # t^2
    roots = sq.preimages(Scalar.rational(4))
    assert [r.as_fraction() for r in roots] == [-2, 2]
    irr = sq.preimages(Scalar.rational(3))
    assert all(r.exact for r in irr)
    assert irr[1] * irr[1] == 3
    assert irr[0] == -irr[1]
    assert sq.preimages(Scalar.rational(-1)) == []
    cubic = RationalFunction([0, -2, 0, 1])  # t^3 - 2t
    roots = cubic.preimages(Scalar.rational(0))
    assert len(roots) == 3
    assert roots[1] == 0 and roots[1].exact
    assert abs(float(roots[2]) - 2 ** 0.5) < 1e-12


def test_quantum_disk_parameter_domain():
    with pytest.raises(ValueError):
        quantum_disk_spec(0, 1)
    with pytest.raises(ValueError):
        quantum_disk_spec(2, 0)
    spec = quantum_disk_spec(Fraction(1, 2), Fraction(1, 2))
    assert spec.family == "quantum_disk"
    assert spec.payload["mu"] == Fraction(1, 2)
    f = spec.payload["f"]
    assert f(0) == 0
    assert f(1) == 1  # fixed point at 1 for every parameter pair


def test_sl2_relations_and_casimir_centrality():
    spec = su2_spec()
    C = casimir_poly()
    E = NCPolynomial.monomial(word("E"))
    F = NCPolynomial.monomial(word("F"))
    H = NCPolynomial.monomial(word("H"))
    for g in (E, F, H):
        assert sl2_normal_form(C * g - g * C).is_zero()
    for rel in spec.relations:
        assert sl2_normal_form(rel).is_zero()
    assert not sl2_normal_form(E * F - F * E).is_zero()


def test_group_algebra_spec_requires_normal_subgroup():
    G, ordered, H = s3_group()
    assert sorted(H.members) == [0, 3, 4]
    spec = group_algebra_spec(G, H)
    assert spec.group.order == 2
    assert spec.degree_of(word("g1")) == spec.payload["labels"][1]
    flip = G.subgroup((1,))  # order-2 subgroup from a transposition
    with pytest.raises(ValueError):
        group_algebra_spec(G, flip)


def test_group_algebra_fold():
    G, ordered, H, spec = s3_spec()
    p = NCPolynomial.monomial(word("g3", "g3"))
    assert spec.fold(p) == NCPolynomial.monomial(word("g4"))
    q = NCPolynomial.monomial(word("g3", "g3", "g3"))
    assert spec.fold(q) == NCPolynomial.one()
    r = NCPolynomial.monomial(word("g1", "g1*"))  # g h with h = g^-1
    assert spec.fold(r) == NCPolynomial.one()


def test_custom_spec_star_and_relations():
    spec = custom_spec(
        generators={"u": 1, "v": -1},
        star_map={"u": "v", "v": "u"},
        relations=[],
        group=GroupSpec("free_abelian", rank=1),
    )
    assert spec.normalize(NCPolynomial.monomial(word("u*"))) == NCPolynomial.monomial(
        word("v")
    )
    assert spec.degree_of(word("u", "v")) == 0
