"""Acceptance gate: one pass/fail line per criterion.

Each test exercises one shipping criterion end to end and prints a single
``PASS criterion N: ...`` / ``FAIL criterion N: ...`` line.  Residual
tolerances come from the library default (1e-10, overridable through the
GSR_TOLERANCE environment variable); exact checks compare scalars directly.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from gsr.algebra import weyl_spec
from gsr.characters import (
    FiniteGroupCharacter,
    Sl2Character,
    dyn_classify,
    stabilizer_and_orbit,
)
from gsr.groups import Subgroup
from gsr.imprimitivity import (
    build_induced_system,
    reconstruct_inducing_rep,
    verify_system,
)
from gsr.induction import (
    InducedRep,
    dyn_periodic_rep,
    finite_group_induce,
    induce_character,
    mackey_cocycle,
    su2_spin_rep,
)
from gsr.matrices import OperatorMatrix
from gsr.scalars import Scalar
from gsr.verify import (
    casimir_check,
    commutant_dimension,
    equivalence_check,
    inducibility_gram,
    relation_residual,
    vir_gram_positivity,
    well_behaved_check,
)
from gsr.virasoro import DensityParams, density_rep, fqs_parameters
from gsr.words import NCPolynomial

from helpers import (
    omega_character,
    period2_orbit,
    qosc_orbit,
    s3_group,
    s3_spec,
    trivial_character,
    weyl_orbit,
)
from test_induction import brute_s3_irrep_characters
from test_partial_action import partial_action_trials

F = Fraction


def _finish(num: int, text: str, failures: list) -> None:
    verdict = "PASS" if not failures else "FAIL"
    print(f"{verdict} criterion {num}: {text}")
    assert not failures, f"criterion {num}: {failures}"


def test_criterion_01_fock_weights_at_dimension_200():
    failures = []
    for lam in (0, 1, 2, 5, 10):
        t0 = time.perf_counter()
        orbit = weyl_orbit(lam, back=205, fwd=lam + 2)
        rep = induce_character(orbit, window=(lam - 199, lam + 1))
        if rep.dim != 200:
            failures.append(f"lam={lam}: dim {rep.dim}")
            continue
        star = rep.op("a*")
        for j in rep.basis[1:]:
            sq = star.entry(j - 1, j) * star.entry(j - 1, j)
            if sq != lam - j + 1:  # k+1 with k = lam - j steps below the wall
                failures.append(f"lam={lam}: weight at {j} is {sq}")
                break
        report = relation_residual(rep)
        if report.status != "pass" or report.residual != 0.0:
            failures.append(f"lam={lam}: relation residual {report.residual}")
        elapsed = time.perf_counter() - t0
        if elapsed >= 1.0:
            failures.append(f"lam={lam}: took {elapsed:.2f}s")
    _finish(1, "Weyl induction reproduces the Fock weights exactly at dimension 200",
            failures)


def test_criterion_02_inducibility_dichotomy():
    failures = []
    elements = ["1", "a", "a^2", "a^3", "a^4", "a^5"]
    for lam in (F(-1), F(0), F(1, 2), F(1), F(3, 2), F(2), F(3)):
        orbit = weyl_orbit(lam, back=2, fwd=7)
        report = inducibility_gram(orbit, elements)
        expected = lam.denominator == 1 and lam >= 0
        if report.mode != "exact":
            failures.append(f"lam={lam}: mode {report.mode}")
        if report.psd is not expected:
            failures.append(f"lam={lam}: psd {report.psd}, expected {expected}")
        if lam == -1 and report.matrix[1][1] != -1:
            failures.append(f"<a,a> at lam=-1 is {report.matrix[1][1]}")
    _finish(2, "Gram of {1,a,...,a^5} is PSD exactly iff the seed is in N_0",
            failures)


def test_criterion_03_su2_inductions_match_spin_matrices():
    failures = []
    for n in range(7):
        rep = induce_character(Sl2Character(n * (n + 2), -n, "su2"),
                               window=(-30, 30))
        spin = su2_spin_rep(F(n, 2))
        if rep.dim != n + 1:
            failures.append(f"n={n}: dim {rep.dim}")
            continue
        if commutant_dimension(rep.ops).dimension != 1:
            failures.append(f"n={n}: reducible")
        for g in ("E", "F", "H"):
            for i, bi in enumerate(rep.basis):
                for j, bj in enumerate(rep.basis):
                    e1 = rep.op(g).entry(bi, bj)
                    e2 = spin.op(g).entry(spin.basis[i], spin.basis[j])
                    if e1 * e1 != e2 * e2:
                        failures.append(f"n={n}: {g}[{i},{j}] mismatch")
        cas = casimir_check(rep, n * (n + 2))
        if cas.status != "pass" or cas.residual != 0.0:
            failures.append(f"n={n}: casimir residual {cas.residual}")
    _finish(3, "su2 inductions match the closed-form spin matrices with scalar commutant",
            failures)


def test_criterion_04_su11_truncations():
    failures = []
    samples = [
        ("flat point", Sl2Character(F(0), F(0), "su11")),
        ("continuous interior", Sl2Character(F(-1), F(0), "su11")),
        ("continuous boundary", Sl2Character(F(-1), F(1), "su11")),
        ("lowest-weight discrete", Sl2Character(F(8), F(4), "su11")),
        ("highest-weight discrete", Sl2Character(F(0), F(-2), "su11")),
    ]
    for name, c in samples:
        rep = induce_character(c, window=(-40, 40))
        rel = relation_residual(rep)
        if not rel.ok:
            failures.append(f"{name}: relation residual {rel.residual}")
        cas = casimir_check(rep, c.s)
        if not cas.ok:
            failures.append(f"{name}: casimir residual {cas.residual}")
    if Sl2Character(F(8), F(4), "su11").weight(-1) != 0:
        failures.append("lowest-weight wall weight is not exactly zero")
    if Sl2Character(F(0), F(-2), "su11").weight(0) != 0:
        failures.append("highest-weight wall weight is not exactly zero")
    _finish(4, "su11 window truncations have vanishing relation and Casimir residuals",
            failures)


def test_criterion_05_orbit_classification():
    failures = []

    t0 = time.perf_counter()
    fock = dyn_classify(weyl_orbit(2))
    if str(fock) != "fock(M=3)":
        failures.append(f"t+1 seed 2 classified as {fock}")
    if time.perf_counter() - t0 >= 0.1:
        failures.append("Fock case took over 100 ms")

    t0 = time.perf_counter()
    orbit = period2_orbit()
    periodic = dyn_classify(orbit)
    if (periodic.kind, periodic.period) != ("bilateral_periodic", 2):
        failures.append(f"1-t seed 1/4 classified as {periodic}")
    stab = stabilizer_and_orbit(orbit).stabilizer
    if stab.modulus != 2:
        failures.append(f"stabilizer modulus {stab.modulus}")
    if time.perf_counter() - t0 >= 0.1:
        failures.append("periodic case took over 100 ms")

    t0 = time.perf_counter()
    q = F(1, 2)
    geo = qosc_orbit(q=q, seed=0, back=8, fwd=3)
    if dyn_classify(geo).kind != "fock":
        failures.append(f"qt+1 seed 0 classified as {dyn_classify(geo)}")
    for k in range(1, 9):
        if geo.x(-k) != sum(q ** j for j in range(k)):
            failures.append(f"geometric weight at -{k} is {geo.x(-k)}")
            break
    if time.perf_counter() - t0 >= 0.1:
        failures.append("geometric case took over 100 ms")

    _finish(5, "one-ladder orbits classify correctly in under 100 ms", failures)


def test_criterion_06_twisted_periodic_family():
    failures = []
    orbit = period2_orbit()
    reps = [dyn_periodic_rep(orbit, Scalar.root_of_unity(k, 8)) for k in range(8)]
    for k, rep in enumerate(reps):
        if not rep.matrix(rep.spec.relations[0]).is_zero():
            failures.append(f"z^{k}: relation violated")
        if commutant_dimension(rep.ops).dimension != 1:
            failures.append(f"z^{k}: reducible")
    for i in range(8):
        for j in range(i + 1, 8):
            report = equivalence_check(reps[i], reps[j])
            if report.status != "fail":
                failures.append(f"z^{i} vs z^{j}: {report.status}")
            elif report.witness.get("word") != "a a":
                failures.append(f"z^{i} vs z^{j}: witness {report.witness}")
    if not mackey_cocycle(orbit, depth=3).trivial:
        failures.append("obstruction not reported trivial")
    _finish(6, "the eight twisted period-2 reps are exact, irreducible, and pairwise distinct",
            failures)


def _random_group_element(spec, rng) -> NCPolynomial:
    i_unit = Scalar.root_of_unity(1, 4)
    while True:
        terms = {}
        for g in range(6):
            c = Scalar.rational(rng.randint(-3, 3)) \
                + Scalar.rational(rng.randint(-3, 3)) * i_unit
            if not c.is_zero():
                terms[((f"g{g}", False),)] = c
        if terms:
            return NCPolynomial(terms)


def test_criterion_07_finite_group_machine():
    failures = []
    G, ordered, H = s3_group()
    triv, sign, two = brute_s3_irrep_characters(G, ordered)

    ind = finite_group_induce(G, H, omega_character(G, H))
    if ind.dim != 2 or commutant_dimension(ind.ops).dimension != 1:
        failures.append("induced omega rep is not 2-dim irreducible")
    for i in range(6):
        if ind.op(f"g{i}").trace() != two[i]:
            failures.append(f"omega trace at g{i}")
    flat = finite_group_induce(G, H, trivial_character(G, H))
    if commutant_dimension(flat.ops).dimension != 2:
        failures.append("induced trivial rep does not split in two")
    for i in range(6):
        if flat.op(f"g{i}").trace() != triv[i] + sign[i]:
            failures.append(f"trivial+sign trace at g{i}")

    # conditional expectation onto the even subalgebra: strong and faithful
    spec = s3_spec()[3]
    characters = []
    for k in range(3):
        w = Scalar.root_of_unity(k, 3)
        characters.append(FiniteGroupCharacter(
            spec, {0: Scalar.rational(1), 3: w, 4: w * w}))
    rng = random.Random(20240814)
    conj_b = spec.involute(NCPolynomial.monomial((("g3", False),)))
    b_poly = NCPolynomial.monomial((("g3", False),))
    for trial in range(100):
        a = _random_group_element(spec, rng)
        square = spec.fold(spec.involute(a) * a)
        expected_norm = Scalar.rational(0)
        for c in a.terms.values():
            expected_norm = expected_norm + c.conjugate() * c
        cond = spec.unit_expectation(square)
        # strong: the three even characters see a nonnegative real value
        for k, chi in enumerate(characters):
            v = chi.eval_poly(cond)
            if not v.is_real() or v.sign() < 0:
                failures.append(f"trial {trial}: character {k} value {v}")
                break
        # faithful: the identity coefficient is the full coefficient norm
        id_coeff = cond.terms.get((), Scalar.rational(0)) \
            + cond.terms.get((("g0", False),), Scalar.rational(0))
        if id_coeff != expected_norm or id_coeff.sign() <= 0:
            failures.append(f"trial {trial}: identity coefficient {id_coeff}")
        # bimodule: even elements pass through the projection untouched
        lhs = spec.unit_expectation(spec.fold(b_poly * square * conj_b))
        rhs = spec.fold(b_poly * cond * conj_b)
        if lhs != rhs:
            failures.append(f"trial {trial}: bimodule identity broken")
        if failures:
            break
    _finish(7, "S3/A3 induction matches the character table and the expectation "
               "is strong and faithful", failures)


def _finite_dim_corpus():
    corpus = []
    for n in range(7):
        rep = induce_character(Sl2Character(n * (n + 2), -n, "su2"),
                               window=(-30, 30))
        H = Subgroup(rep.spec.group, ())
        corpus.append((f"su2 n={n}", rep, H, max(4, n)))
    orbit = period2_orbit()
    for k in range(8):
        rep = dyn_periodic_rep(orbit, Scalar.root_of_unity(k, 8))
        corpus.append((f"periodic z^{k}", rep, Subgroup(rep.spec.group, (2,)), 4))
    G, ordered, H = s3_group()
    corpus.append(("S3 omega", finite_group_induce(G, H, omega_character(G, H)), H, 4))
    corpus.append(("S3 trivial", finite_group_induce(G, H, trivial_character(G, H)), H, 4))
    return corpus


def test_criterion_08_imprimitivity_round_trip():
    failures = []
    for name, rep, H, word_len in _finite_dim_corpus():
        system = build_induced_system(rep, H)
        report = verify_system(system)
        if report.status != "pass" or report.residual != 0.0:
            failures.append(f"{name}: system residual {report.residual}")
            continue
        rec = reconstruct_inducing_rep(system, max_word_len=word_len)
        again = rec.induce()
        if equivalence_check(rep, again).status != "pass":
            failures.append(f"{name}: round trip inequivalent")
    _finish(8, "imprimitivity systems verify and reconstruct back to their "
               "inducing characters", failures)


def test_criterion_09_well_behavedness():
    failures = []
    bounded = [(name, rep) for name, rep, _, _ in _finite_dim_corpus()]
    bounded.append(("fock truncation",
                    induce_character(weyl_orbit(2), window=(-5, 3))))
    for name, rep in bounded:
        report = well_behaved_check(rep)
        if not report.ok:
            failures.append(f"{name}: {report.witness}")
    # corrupted covariance fixture: the one-step image lands two atoms up
    spec = weyl_spec()
    basis = (0, 1, 2)
    a = OperatorMatrix(basis, basis, {
        (2, 0): Scalar.rational(2).sqrt(),
        (0, 1): Scalar.rational(3).sqrt(),
    })
    broken = InducedRep(spec, None, basis, {"a": a, "a*": a.adjoint()}, basis,
                        meta={"family": "dynamical"})
    if well_behaved_check(broken).status != "fail":
        failures.append("corrupted fixture not rejected")
    _finish(9, "well-behavedness passes the bounded corpus and rejects the "
               "corrupted fixture", failures)


def test_criterion_10_virasoro_density_and_unitary_points():
    failures = []
    rep = density_rep(DensityParams(0, F(1, 2)), window=(-50, 50), k_range=5)
    interior = [n for n in rep.basis if abs(n) <= 44]
    report = relation_residual(rep, interior=interior)
    if not report.ok:
        failures.append(f"bracket residual {report.residual}")

    points = fqs_parameters(3)
    half = sorted(p.a for p in points if p.z == F(1, 2))
    if half != [F(0), F(1, 16), F(1, 2)]:
        failures.append(f"z=1/2 lowest weights {half}")
    for a in (F(0), F(1, 16), F(1, 2)):
        for level in (1, 2):
            verdict = vir_gram_positivity(a, F(1, 2), level)
            if verdict.status != "pass":
                failures.append(f"a={a} level {level}: {verdict.status}")
    _finish(10, "the density rep brackets vanish and the exact parameter points "
                "are Gram-PSD", failures)


def test_criterion_11_partial_action_axioms():
    failures = []
    count = partial_action_trials(1000)
    if count != 1000:
        failures.append(f"only {count} instances checked")
    _finish(11, "1000 randomized shift-action instances satisfy the "
                "partial-action axioms", failures)