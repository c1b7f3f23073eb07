"""Shared builders for the test suite."""

from __future__ import annotations

from fractions import Fraction

from gsr.algebra import dynamical_spec, group_algebra_spec, RationalFunction
from gsr.characters import FiniteGroupCharacter, dyn_extend_orbit
from gsr.groups import GroupSpec, Subgroup, group_from_permutations
from gsr.scalars import Scalar

# permutations of {0,1,2}: identity, the two 3-cycles, the three transpositions
S3_PERMS = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]
EVEN_PERMS = {(0, 1, 2), (1, 2, 0), (2, 0, 1)}


def s3_group():
    """(G, ordered perms, A3 subgroup) for the symmetric group on 3 points."""
    G, ordered = group_from_permutations(S3_PERMS)
    even = tuple(i for i, p in enumerate(ordered) if p in EVEN_PERMS)
    return G, ordered, Subgroup(G, even)


def s3_spec():
    G, ordered, H = s3_group()
    return G, ordered, H, group_algebra_spec(G, H)


def omega_character(G: GroupSpec, H: Subgroup, k: int = 1) -> FiniteGroupCharacter:
    """Cyclic character of the order-3 subgroup sending a 3-cycle to exp(2*pi*i*k/3)."""
    spec = group_algebra_spec(G, H)
    gen = min(h for h in H.members if h != G.identity())
    w = Scalar.root_of_unity(k, 3)
    values = {G.identity(): Scalar.rational(1), gen: w, G.mul(gen, gen): w * w}
    return FiniteGroupCharacter(spec, values)


def trivial_character(G: GroupSpec, H: Subgroup) -> FiniteGroupCharacter:
    spec = group_algebra_spec(G, H)
    return FiniteGroupCharacter(spec, {h: Scalar.rational(1) for h in H.members})


def weyl_orbit(seed, back=10, fwd=6):
    f = RationalFunction([1, 1])
    return dyn_extend_orbit(f, seed, back_steps=back, fwd_steps=fwd)[0]


def qosc_orbit(q=Fraction(1, 4), seed=0, back=8, fwd=3):
    f = RationalFunction([1, q])
    return dyn_extend_orbit(f, seed, back_steps=back, fwd_steps=fwd)[0]


def period2_orbit(seed=Fraction(1, 4), back=6, fwd=6):
    """Orbit of x_{k-1} = 1 - x_k, alternating seed and 1 - seed."""
    f = RationalFunction([1, -1])
    return dyn_extend_orbit(f, seed, back_steps=back, fwd_steps=fwd)[0]


def period2_spec():
    return dynamical_spec(RationalFunction([1, -1]))


def qosc_spec(q=Fraction(1, 4)):
    return dynamical_spec(RationalFunction([1, q]))
