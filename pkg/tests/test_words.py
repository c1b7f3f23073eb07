"""Free words, the involution, and the polynomial parser."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gsr.scalars import Scalar
from gsr.words import (
    EMPTY_WORD,
    NCPolynomial,
    involute_word,
    letter,
    parse_poly,
    word,
)


def test_word_builder_resolves_trailing_stars():
    assert word("a", "a*") == (("a", False), ("a", True))
    assert word("a**") == (("a", False),)  # even star count cancels
    assert word("a***") == (("a", True),)
    assert letter("E", True) == ("E", True)


def test_involute_word_reverses_and_flips():
    w = word("a", "a", "b*")
    assert involute_word(w) == (("b", False), ("a", True), ("a", True))
    assert involute_word(involute_word(w)) == w
    assert involute_word(EMPTY_WORD) == EMPTY_WORD


def test_polynomial_arithmetic_prunes_zeros():
    p = NCPolynomial.from_names("a") + NCPolynomial.from_names("a", coeff=-1)
    assert p.is_zero()
    q = NCPolynomial.from_names("a", "b") * NCPolynomial.from_names("c")
    assert q.terms == {word("a", "b", "c"): Scalar.rational(1)}
    assert (q - q).is_zero()
    assert (2 * q).terms[word("a", "b", "c")] == 2


def test_polynomial_involution_is_antimultiplicative():
    p = NCPolynomial.monomial(word("a"), Scalar.gaussian(0, 1))
    q = NCPolynomial.from_names("b", coeff=Fraction(1, 2))
    lhs = (p * q).involute()
    rhs = q.involute() * p.involute()
    assert lhs == rhs
    assert lhs.terms == {word("b*", "a*"): Scalar.gaussian(0, Fraction(-1, 2))}


def test_parse_poly_canonical_relation():
    p = parse_poly("aa* - a*a - 1", ["a"])
    assert p.terms == {
        word("a", "a*"): Scalar.rational(1),
        word("a*", "a"): Scalar.rational(-1),
        EMPTY_WORD: Scalar.rational(-1),
    }


def test_parse_poly_powers_and_fractions():
    p = parse_poly("1/2 a^3 + 2b*^2", ["a", "b"])
    assert p.terms == {
        word("a", "a", "a"): Scalar.rational(Fraction(1, 2)),
        word("b*", "b*"): Scalar.rational(2),
    }


def test_parse_poly_longest_name_wins():
    p = parse_poly("ab - 3", ["a", "ab", "b"])
    assert p.terms == {word("ab"): Scalar.rational(1), EMPTY_WORD: Scalar.rational(-3)}


def test_parse_poly_rejects_unknown_symbols():
    with pytest.raises(ValueError):
        parse_poly("a + q", ["a"])
    with pytest.raises(ValueError):
        parse_poly("a^", ["a"])


names = st.lists(st.sampled_from(["a", "a*", "b"]), min_size=0, max_size=5)


@given(names, names)
def test_involution_reverses_products(u, v):
    p = NCPolynomial.from_names(*u)
    q = NCPolynomial.from_names(*v)
    assert (p * q).involute() == q.involute() * p.involute()
    assert p.involute().involute() == p
