"""Orbit growth, classification, walk evaluation, and the cone check."""

from __future__ import annotations

from fractions import Fraction

import pytest

from gsr.algebra import RationalFunction
from gsr.characters import (
    PeriodicExtensionCharacter,
    dyn_classify,
    dyn_eval_word,
    dyn_extend_orbit,
    dyn_walk_value,
    stabilizer_and_orbit,
    weyl_cone_check,
)
from gsr.scalars import Scalar
from gsr.words import word

from helpers import period2_orbit, qosc_orbit, weyl_orbit


def test_weyl_orbit_frozen_values():
    orbit = weyl_orbit(2, back=3, fwd=6)
    assert {k: v.as_fraction() for k, v in orbit.values.items()} == {
        -3: 5, -2: 4, -1: 3, 0: 2, 1: 1, 2: 0,
    }
    assert orbit.M == 3
    assert orbit.K is None
    assert orbit.defect is None
    assert orbit.x(5) == 0  # beyond the forward wall
    assert orbit.weight(-1) == Scalar.radical(1, 3)
    with pytest.raises(ValueError):
        orbit.x(-4)  # beyond the explored backward range
    cls = dyn_classify(orbit)
    assert (cls.kind, cls.M) == ("fock", 3)
    assert str(cls) == "fock(M=3)"


def test_backward_wall_sets_K_without_storing_zero():
    f = RationalFunction([-1, 1])  # x_{k-1} = x_k - 1
    orbit = dyn_extend_orbit(f, 2, back_steps=5, fwd_steps=2)[0]
    assert orbit.K == -2
    assert -2 not in orbit.values
    assert orbit.values[-1].as_fraction() == 1
    assert orbit.values[1].as_fraction() == 3
    assert orbit.x(-2) == 0 and orbit.x(-7) == 0
    assert orbit.is_defined(-1) and not orbit.is_defined(-2)
    cls = dyn_classify(orbit)
    assert (cls.kind, cls.K) == ("anti_fock", -2)


def test_qosc_fock_orbit_geometric_sums():
    orbit = qosc_orbit()
    assert orbit.M == 1
    assert orbit.values[0].as_fraction() == 0  # wall zero is stored
    expect = {-1: Fraction(1), -2: Fraction(5, 4), -3: Fraction(21, 16), -4: Fraction(85, 64)}
    for k, v in expect.items():
        assert orbit.values[k].as_fraction() == v
    assert dyn_classify(orbit).kind == "fock"
    assert orbit.is_exact()


def test_period_two_orbit_and_stabilizer():
    orbit = period2_orbit()
    assert orbit.detect_period() == 2
    for k in range(orbit.lo, orbit.hi + 1):
        expect = Fraction(1, 4) if k % 2 == 0 else Fraction(3, 4)
        assert orbit.values[k].as_fraction() == expect
    cls = dyn_classify(orbit)
    assert (cls.kind, cls.period) == ("bilateral_periodic", 2)
    report = stabilizer_and_orbit(orbit, depth=4)
    assert report.stabilizer.modulus == 2
    assert report.definedness == "-inf < n < +inf"
    shifted = orbit.act(2)
    overlap = set(shifted.values) & set(orbit.values)
    assert overlap
    assert all(shifted.values[k] == orbit.values[k] for k in overlap)
    assert orbit.act(1).values[0] != orbit.values[0]
    assert orbit.act(1).act(1).same_character(orbit.act(2))


def test_branch_policy_enumerates_forward_roots():
    f = RationalFunction([0, 0, 1])  # t^2
    all_orbits = dyn_extend_orbit(f, 16, back_steps=0, fwd_steps=2,
                                  branch_policy="all")
    assert [o.branch for o in all_orbits] == [(0, 0), (0, 1), (1,)]
    principal, negative, dead = all_orbits
    assert {k: v.as_fraction() for k, v in principal.values.items()} == {0: 16, 1: 4, 2: 2}
    assert principal.defect is None
    assert negative.values[2].as_fraction() == -2
    assert negative.defect == "negative_forward_value"
    assert dead.values[1].as_fraction() == -4
    assert dead.M is None
    assert dead.defect == "negative_forward_value"
    only = dyn_extend_orbit(f, 16, back_steps=0, fwd_steps=2)
    assert len(only) == 1 and only[0].branch == (0, 0)


def test_forward_stop_without_real_root():
    f = RationalFunction([1, 0, 1])  # 1 + t^2, minimum value 1
    orbit = dyn_extend_orbit(f, Fraction(1, 2), back_steps=1, fwd_steps=3)[0]
    assert orbit.defect == "forward_stop_without_real_root"
    assert orbit.M is None
    assert orbit.values[-1].as_fraction() == Fraction(5, 4)


def test_negative_seed_is_stored_but_defective():
    orbit = weyl_orbit(-1, back=4, fwd=2)
    assert orbit.defect == "negative_seed"
    assert orbit.K == -1  # f(-1) = 0 gives an immediate backward wall
    assert {k: v.as_fraction() for k, v in orbit.values.items()} == {0: -1, 1: -2, 2: -3}
    assert not orbit.in_positive_dual()
    with pytest.raises(ValueError):
        dyn_classify(orbit)
    with pytest.raises(ValueError):
        orbit.act(0)
    # the Hermitian form is still evaluable: chi((a^k)* a^k) alternates sign
    assert dyn_walk_value(orbit, word("a*", "a")).as_fraction() == -1
    assert dyn_walk_value(orbit, word("a*", "a*", "a", "a")).as_fraction() == 2


def test_walk_values_on_the_weyl_orbit():
    orbit = weyl_orbit(2, back=3, fwd=6)
    assert dyn_eval_word(orbit, word("a*", "a")) == 2  # chi(a* a) = x_0
    assert dyn_eval_word(orbit, word("a", "a*")) == 3  # chi(a a*) = f(x_0)
    assert dyn_eval_word(orbit, word("a*", "a*", "a", "a")) == 2  # x_0 x_1
    assert dyn_eval_word(orbit, word("a", "a", "a*", "a*")) == 12  # x_-1 x_-2
    with pytest.raises(ValueError):
        dyn_eval_word(orbit, word("a"))  # degree 1 is not in the domain
    # a word whose walk crosses a stored zero vanishes exactly
    zorbit = weyl_orbit(0, back=3, fwd=2)
    assert dyn_eval_word(zorbit, word("a*", "a")) == 0
    assert dyn_eval_word(zorbit, word("a", "a*")) == 1
    # walks off the explored window raise rather than guessing
    with pytest.raises(ValueError):
        dyn_eval_word(orbit, word("a", "a", "a", "a", "a*", "a*", "a*", "a*"))


def test_walk_value_of_odd_degree_words():
    orbit = weyl_orbit(2, back=3, fwd=6)
    assert dyn_walk_value(orbit, word("a")) == Scalar.radical(1, 2)
    assert dyn_walk_value(orbit, word("a", "a")) == Scalar.radical(1, 2)  # sqrt(x0 x1)
    assert dyn_walk_value(orbit, word("a*")) == Scalar.radical(1, 3)


def test_periodic_extension_character():
    orbit = period2_orbit()
    i = Scalar.gaussian(0, 1)
    ext = PeriodicExtensionCharacter(orbit, 2, i)
    val = ext.eval_word(word("a", "a"))
    assert val == i * Scalar.radical(Fraction(1, 4), 3)
    back = ext.eval_word(word("a*", "a*"))
    assert back == -i * Scalar.radical(Fraction(1, 4), 3)
    assert ext.eval_word(word("a*", "a")) == Fraction(1, 4)
    with pytest.raises(ValueError):
        ext.eval_word(word("a"))
    with pytest.raises(ValueError):
        PeriodicExtensionCharacter(orbit, 2, Scalar.rational(2))


def test_fock_stabilizer_report():
    orbit = weyl_orbit(2, back=10, fwd=6)
    report = stabilizer_and_orbit(orbit, depth=5)
    assert report.stabilizer.is_trivial()
    assert report.definedness == "-inf < n < 3"
    shifts = [g for g, _ in report.orbit]
    assert shifts == list(range(-5, 3))


def test_weyl_cone_check_table():
    assert weyl_cone_check(0) == ("positive", None)
    assert weyl_cone_check(1) == ("positive", None)
    assert weyl_cone_check(2) == ("positive", None)
    assert weyl_cone_check(3) == ("positive", None)
    assert weyl_cone_check(-1) == ("violated", 1)
    assert weyl_cone_check(Fraction(1, 2)) == ("violated", 2)
    assert weyl_cone_check(Fraction(3, 2)) == ("violated", 3)
    assert weyl_cone_check(2.0) == ("positive", None)
    assert weyl_cone_check(2.5) == ("violated", 4)
    with pytest.raises(ValueError):
        weyl_cone_check(Scalar.gaussian(0, 1))
