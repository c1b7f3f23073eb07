"""Enveloping-algebra characters: membership, definedness, evaluation routes."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from gsr.algebra import casimir_poly, su2_spec, su11_spec
from gsr.characters import (
    Sl2Character,
    sl2_act,
    sl2_definedness,
    sl2_eval,
    sl2_eval_pbw,
    sl2_membership,
    stabilizer_and_orbit,
)
from gsr.words import NCPolynomial, word


def test_su2_membership_spin_witnesses():
    assert sl2_membership(Sl2Character(0, 0, "su2")).witness == 0
    assert sl2_membership(Sl2Character(3, 1, "su2")).witness == 0
    assert sl2_membership(Sl2Character(3, -1, "su2")).witness == 1
    r = sl2_membership(Sl2Character(8, 0, "su2"))
    assert r.verdict and r.witness == 1 and r.series == "spin"
    # s = n(n+2) with t = -n gives the lowest weight of the (n+1)-dim module
    for n in range(7):
        r = sl2_membership(Sl2Character(n * (n + 2), -n, "su2"))
        assert r.verdict and r.witness == n


def test_su2_membership_rejections():
    r = sl2_membership(Sl2Character(1, 0, "su2"))  # 1+s not a perfect square
    assert not r.verdict and r.violation == ("forward", 2)
    r = sl2_membership(Sl2Character(3, 0, "su2"))  # parity mismatch
    assert not r.verdict
    r = sl2_membership(Sl2Character(0, 5, "su2"))  # u < |t| + 1
    assert not r.verdict


def test_su11_region_table():
    cases = {
        (Fraction(0), Fraction(0)): ("trivial", ("X0", 0)),
        (Fraction(-1), Fraction(0)): ("principal", ("X1", 0)),
        (Fraction(-1), Fraction(1)): ("supplementary", ("X2", 0)),
        (Fraction(8), Fraction(4)): ("discrete", ("X3", 0)),
        (Fraction(0), Fraction(-2)): ("discrete", ("X4", -1)),
    }
    for (s, t), (series, witness) in cases.items():
        r = sl2_membership(Sl2Character(s, t, "su11"))
        assert r.verdict, (s, t)
        assert r.series == series
        assert r.witness == witness


def test_su11_rejections_with_violations():
    r = sl2_membership(Sl2Character(1, 1, "su11"))
    assert not r.verdict and r.violation == ("backward", 1)
    r = sl2_membership(Sl2Character(24, 1, "su11"))
    assert not r.verdict


def test_weights_have_closed_forms():
    principal = Sl2Character(-1, 0, "su11")
    for j in range(-6, 6):
        assert principal.weight(j) == Fraction((2 * j + 1) ** 2, 4)
    supplementary = Sl2Character(-1, 1, "su11")
    for j in range(-6, 6):
        assert supplementary.weight(j) == (j + 1) ** 2
    discrete_up = Sl2Character(8, 4, "su11")
    for j in range(-6, 6):
        assert discrete_up.weight(j) == (j + 1) * (j + 4)
    discrete_down = Sl2Character(0, -2, "su11")
    for j in range(-6, 6):
        assert discrete_down.weight(j) == j * (j - 1)


def test_definedness_windows():
    assert sl2_definedness(Sl2Character(-1, 0, "su11")) == (None, None)
    assert sl2_definedness(Sl2Character(-1, 1, "su11")) == (0, None)
    assert sl2_definedness(Sl2Character(8, 4, "su11")) == (0, None)
    assert sl2_definedness(Sl2Character(0, -2, "su11")) == (None, 0)
    assert sl2_definedness(Sl2Character(8, 0, "su2")) == (-1, 1)
    assert sl2_definedness(Sl2Character(0, 0, "su2")) == (0, 0)


def test_membership_matches_norm_product_scan():
    """Brute-force oracle: positivity iff every chi(a_n* a_n) is nonnegative."""
    svals = [Fraction(v) for v in (-2, -1, 0, 1, 3, 8, 15, 24)] + [
        Fraction(1, 4), Fraction(-1, 2), Fraction(35, 4)
    ]
    tvals = [Fraction(v) for v in range(-4, 5)] + [Fraction(1, 2), Fraction(-3, 2)]
    for algebra in ("su2", "su11"):
        for s, t in itertools.product(svals, tvals):
            c = Sl2Character(s, t, algebra)
            brute = all(c.norm_sq(n) >= 0 for n in range(-25, 26))
            assert sl2_membership(c).verdict == brute, (algebra, s, t)


def test_sl2_act_respects_definedness():
    spin = Sl2Character(8, 0, "su2")
    shifted = sl2_act(spin, 1)
    assert shifted == Sl2Character(8, 2, "su2")
    assert sl2_act(spin, 2) is None
    assert sl2_act(spin, -2) is None
    disc = Sl2Character(8, 4, "su11")
    assert sl2_act(disc, -1) is None
    assert sl2_act(disc, 3) == Sl2Character(8, 10, "su11")
    with pytest.raises(ValueError):
        sl2_act(Sl2Character(1, 0, "su2"), 0)


def test_eval_routes_agree_and_see_the_casimir():
    specs = {"su2": su2_spec(), "su11": su11_spec()}
    chars = [
        Sl2Character(8, 0, "su2"),
        Sl2Character(3, 1, "su2"),
        Sl2Character(-1, 0, "su11"),
        Sl2Character(8, 4, "su11"),
        Sl2Character(Fraction(1, 4), Fraction(1, 2), "su2"),
    ]
    polys = [
        casimir_poly(),
        NCPolynomial.from_names("E", "F"),
        NCPolynomial.from_names("F", "E"),
        NCPolynomial.from_names("H", "H"),
        NCPolynomial.from_names("E", "E", "F", "F"),
        NCPolynomial.from_names("E", "H", "F") + NCPolynomial.from_names("H", coeff=Fraction(1, 3)),
        NCPolynomial.from_names("F", "H", "E", "H"),
        NCPolynomial.from_names("E") + NCPolynomial.from_names("F", "E", "E"),
    ]
    for c in chars:
        spec = specs[c.algebra]
        assert sl2_eval(c, casimir_poly(), spec) == c.s
        for p in polys:
            assert sl2_eval(c, p, spec) == sl2_eval_pbw(c, p, spec), (c, p)


def test_eval_star_words_give_norms():
    spec = su11_spec()
    up = Sl2Character(8, 4, "su11")
    for n in range(0, 4):
        w = NCPolynomial.monomial(word(*(["E"] * n)))
        assert sl2_eval(up, spec.involute(w) * w, spec) == up.norm_sq(n)
    assert up.norm_sq(-1) == 0  # wall below the lowest weight
    bi = Sl2Character(-1, 0, "su11")
    for n in range(1, 4):
        w = NCPolynomial.monomial(word(*(["F"] * n)))
        assert sl2_eval(bi, spec.involute(w) * w, spec) == bi.norm_sq(-n)


def test_stabilizer_report_for_sl2():
    report = stabilizer_and_orbit(Sl2Character(8, 0, "su2"), depth=5)
    assert report.stabilizer.is_trivial()
    assert report.definedness == "-1 <= n <= 1"
    assert [n for n, _ in report.orbit] == [-1, 0, 1]
    with pytest.raises(ValueError):
        stabilizer_and_orbit(Sl2Character(1, 0, "su2"))
