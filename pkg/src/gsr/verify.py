"""Verification oracles: residuals, commutants, equivalence, positivity checks."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import GradedAlgebraSpec, dynamical_spec, su2_spec, su11_spec
from .characters import (
    DynOrbit,
    FiniteGroupCharacter,
    PeriodicExtensionCharacter,
    Sl2Character,
    dyn_eval_word,
    sl2_eval,
)
from .matrices import OperatorMatrix
from .scalars import Scalar
from .virasoro import vir_level_gram
from .words import NCPolynomial

DEFAULT_TOLERANCE = 1e-10


def default_tolerance() -> float:
    env = os.environ.get("GSR_TOLERANCE")
    return float(env) if env else DEFAULT_TOLERANCE


@dataclass
class VerificationReport:
    check: str
    status: str  # "pass" | "fail" | "inconclusive"
    residual: float
    witness: object = None
    tolerance: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def _matrix_residual(m: OperatorMatrix) -> tuple:
    """(residual, worst entry key): max-abs for exact entries, Frobenius otherwise."""
    if not m.entries:
        return 0.0, None
    key = max(m.entries, key=lambda k: abs(complex(m.entries[k])))
    if all(v.exact for v in m.entries.values()):
        return abs(complex(m.entries[key])), key
    return m.frobenius(), key


def _ops_of(rep) -> dict:
    if isinstance(rep, dict):
        return rep
    return rep.ops


# ---------------------------------------------------------------------------
# character evaluation dispatch
# ---------------------------------------------------------------------------


def character_value(character, p, spec: GradedAlgebraSpec | None = None) -> Scalar:
    """Value of a degree-zero-supported polynomial under the character.

    Terms outside the character's domain subalgebra are projected away first
    (that is the conditional expectation onto it).
    """
    if isinstance(p, tuple):
        p = NCPolynomial.monomial(p)
    if isinstance(character, DynOrbit):
        spec = spec or dynamical_spec(character.f)
        p = spec.unit_expectation(spec.normalize(p))
        total = Scalar.rational(0)
        for w, c in p.terms.items():
            total = total + c * dyn_eval_word(character, w)
        return total
    if isinstance(character, PeriodicExtensionCharacter):
        spec = spec or dynamical_spec(character.orbit.f)
        p = spec.normalize(p)
        m = character.period
        total = Scalar.rational(0)
        for w, c in p.terms.items():
            if spec.degree_of(w) % m == 0:
                total = total + c * character.eval_word(w)
        return total
    if isinstance(character, Sl2Character):
        spec = spec or (su2_spec() if character.algebra == "su2" else su11_spec())
        return sl2_eval(character, spec.unit_expectation(spec.normalize(p)), spec)
    if isinstance(character, FiniteGroupCharacter):
        return character.eval_poly(p)
    if callable(character):
        if spec is not None:
            p = spec.normalize(p)
        return Scalar.coerce(character(p))
    raise TypeError(f"cannot evaluate {type(character).__name__}")


def _spec_for(character, spec=None) -> GradedAlgebraSpec:
    if spec is not None:
        return spec
    if isinstance(character, DynOrbit):
        return dynamical_spec(character.f)
    if isinstance(character, PeriodicExtensionCharacter):
        return dynamical_spec(character.orbit.f)
    if isinstance(character, Sl2Character):
        return su2_spec() if character.algebra == "su2" else su11_spec()
    if isinstance(character, FiniteGroupCharacter):
        return character.spec
    raise TypeError("an algebra description is required for this character")


# ---------------------------------------------------------------------------
# relation and Casimir residuals
# ---------------------------------------------------------------------------


def relation_residual(rep, spec: GradedAlgebraSpec | None = None,
                      interior=None, tolerance: float | None = None) -> VerificationReport:
    """Max norm of the defining relations and adjointness on interior columns."""
    spec = spec or rep.spec
    if spec is None:
        raise ValueError("no algebra description available")
    interior = tuple(interior if interior is not None else rep.interior)
    if not interior:
        raise ValueError("empty interior: nothing to verify")
    tol = default_tolerance() if tolerance is None else tolerance

    worst = 0.0
    witness = None
    for idx, rel in enumerate(spec.relations):
        diff = rep.matrix(rel).restrict_columns(interior)
        res, key = _matrix_residual(diff)
        if res > worst:
            worst, witness = res, {"relation": idx, "entry": key, "column": key[1]}
    for name in rep.ops:
        star = spec.involute(NCPolynomial.monomial(((name, False),)))
        diff = (rep.matrix(star) - rep.op(name).adjoint()).restrict_columns(interior)
        res, key = _matrix_residual(diff)
        if res > worst:
            worst, witness = res, {"adjoint": name, "entry": key, "column": key[1]}
    status = "pass" if worst <= tol else "fail"
    return VerificationReport("relation_residual", status, worst, witness, tol)


def casimir_check(rep, s, tolerance: float | None = None) -> VerificationReport:
    """Residual of 4FE + H(H+2) - s on interior columns."""
    tol = default_tolerance() if tolerance is None else tolerance
    s = Scalar.coerce(s)
    E, F, H = rep.op("E"), rep.op("F"), rep.op("H")
    ident = OperatorMatrix.identity(rep.basis)
    cas = (F * E).scale(4) + H * H + H.scale(2) - ident.scale(s)
    diff = cas.restrict_columns(tuple(rep.interior))
    res, key = _matrix_residual(diff)
    status = "pass" if res <= tol else "fail"
    return VerificationReport("casimir", status, res, {"entry": key} if key else None, tol)


# ---------------------------------------------------------------------------
# commutants and equivalence
# ---------------------------------------------------------------------------


@dataclass
class CommutantReport:
    dimension: int
    irreducible: bool


def commutant_dimension(matrices) -> CommutantReport:
    """Dimension of {T : T commutes with every matrix and its adjoint}."""
    ops = _ops_of(matrices) if not isinstance(matrices, (list, tuple)) else None
    mats = list(ops.values()) if ops is not None else list(matrices)
    if not mats:
        raise ValueError("empty matrix family")
    rows = mats[0].rows
    if any(m.rows != rows or m.cols != rows for m in mats):
        raise ValueError("matrices must be square over a common basis")
    n = len(rows)
    eye = np.eye(n)
    blocks = []
    for m in mats:
        a = m.to_numpy()
        for mat in (a, a.conj().T):
            blocks.append(np.kron(eye, mat.T) - np.kron(mat, eye))
    stacked = np.vstack(blocks)
    svals = np.linalg.svd(stacked, compute_uv=False)
    top = svals[0] if len(svals) else 0.0
    cutoff = max(top, 1.0) * 1e-9
    rank = int((svals > cutoff).sum())
    dim = n * n - rank
    return CommutantReport(dim, dim == 1)


def _word_iter(names, max_len):
    for length in range(1, max_len + 1):
        yield from itertools.product(names, repeat=length)


def equivalence_check(rep1, rep2, max_word_len: int = 6,
                      tolerance: float | None = None) -> VerificationReport:
    """Trace comparison on short words, then an explicit intertwiner solve."""
    tol = default_tolerance() if tolerance is None else tolerance
    ops1, ops2 = _ops_of(rep1), _ops_of(rep2)
    names = sorted(ops1)
    if sorted(ops2) != names:
        raise ValueError("generator names differ")
    some = next(iter(ops1.values()))
    d1 = len(some.rows)
    d2 = len(next(iter(ops2.values())).rows)
    if d1 != d2:
        return VerificationReport("equivalence", "fail", float(abs(d1 - d2)),
                                  "dim", tol)
    a1 = {g: ops1[g].to_numpy() for g in names}
    a2 = {g: ops2[g].to_numpy() for g in names}

    scale = max([1.0] + [float(np.abs(m).max()) for m in a1.values()]
                + [float(np.abs(m).max()) for m in a2.values()])
    trace_tol = tol * (1 + scale**max_word_len)
    frontier = [((), np.eye(d1, dtype=complex), np.eye(d2, dtype=complex))]
    for _ in range(max_word_len):
        nxt = []
        for word, m1, m2 in frontier:
            for g in names:
                w = word + (g,)
                p1, p2 = a1[g] @ m1, a2[g] @ m2
                if abs(np.trace(p1) - np.trace(p2)) > trace_tol:
                    return VerificationReport(
                        "equivalence", "fail",
                        float(abs(np.trace(p1) - np.trace(p2))),
                        {"word": " ".join(w)}, tol)
                nxt.append((w, p1, p2))
        frontier = nxt

    # traces agree; look for an invertible intertwiner T pi1 = pi2 T
    eye = np.eye(d1)
    blocks = []
    for g in names:
        for m1, m2 in ((a1[g], a2[g]),
                       (a1[g].conj().T, a2[g].conj().T)):
            blocks.append(np.kron(eye, m1.T) - np.kron(m2, eye))
    stacked = np.vstack(blocks)
    u, svals, vh = np.linalg.svd(stacked)
    top = svals[0] if len(svals) else 0.0
    cutoff = max(top, 1.0) * 1e-9
    rank = int((svals > cutoff).sum())
    null = vh[rank:].conj()
    if len(null) == 0:
        return VerificationReport("equivalence", "inconclusive", 0.0,
                                  "no intertwiner despite matching traces", tol)
    rng = np.random.default_rng(20240811)
    candidates = [null[i] for i in range(len(null))]
    for _ in range(10):
        coeffs = rng.standard_normal(len(null)) + 1j * rng.standard_normal(len(null))
        candidates.append(coeffs @ null)
    for vec in candidates:
        T = vec.reshape(d1, d1)
        smin = np.linalg.svd(T, compute_uv=False)[-1]
        if smin > 1e-8 * max(1.0, np.abs(T).max()):
            uu, _, vvh = np.linalg.svd(T)
            unitary = uu @ vvh
            res = max(
                float(np.abs(unitary @ a1[g] - a2[g] @ unitary).max())
                for g in names
            )
            if res <= max(tol, 1e-9) * (1 + scale):
                return VerificationReport("equivalence", "pass", res,
                                          {"intertwiner": unitary}, tol)
    return VerificationReport("equivalence", "inconclusive", 0.0,
                              "degenerate intertwiner solve", tol)


# ---------------------------------------------------------------------------
# well-behavedness at finite dimension
# ---------------------------------------------------------------------------


def _atom_split(bmats: list, tol: float) -> list:
    """Joint eigenspaces of commuting normal matrices: (label tuple, columns)."""
    n = bmats[0].shape[0]
    rng = np.random.default_rng(11)
    combo = np.zeros((n, n), dtype=complex)
    for m in bmats:
        c1, c2 = rng.standard_normal(2)
        combo += c1 * (m + m.conj().T) / 2 + c2 * (m - m.conj().T) / 2j
    _, vecs = np.linalg.eigh(combo)
    labels = []
    for j in range(n):
        v = vecs[:, j]
        labels.append(tuple(complex(np.round(v.conj() @ m @ v, 8)) for m in bmats))
    atoms = {}
    for j, lab in enumerate(labels):
        atoms.setdefault(lab, []).append(j)
    out = []
    for lab, cols in sorted(atoms.items(), key=lambda kv: repr(kv[0])):
        out.append((lab, vecs[:, cols]))
    return out


def well_behaved_check(rep, spec: GradedAlgebraSpec | None = None,
                       tolerance: float | None = None) -> VerificationReport:
    """Joint-eigenspace covariance of the degree-zero part at finite dimension."""
    spec = spec or rep.spec
    tol = default_tolerance() if tolerance is None else tolerance
    family = rep.meta.get("family") or (spec.family if spec else None)
    ops_np = {g: m.to_numpy() for g, m in rep.ops.items()}
    n = len(rep.basis)

    if family in ("dynamical", "weyl", "quantum_disk"):
        bmats = [ops_np["a*"] @ ops_np["a"]]
        f = (spec or rep.spec).payload["f"]

        def expected(gen, label):
            if gen == "a*":
                try:
                    return (complex(f(Scalar.from_float(label[0]))),)
                except ZeroDivisionError:
                    return None
            return "solve"  # any x' with f(x') = label[0]

        def solves(gen, label, got):
            if gen != "a":
                return False
            try:
                return abs(complex(f(Scalar.from_float(got[0]))) - label[0]) <= 1e-6
            except ZeroDivisionError:
                return False

    elif family in ("su2", "su11"):
        cas = 4 * ops_np["F"] @ ops_np["E"] + ops_np["H"] @ (ops_np["H"] + 2 * np.eye(n))
        bmats = [ops_np["H"], cas]

        def expected(gen, label):
            shift = {"E": 2, "F": -2, "H": 0}[gen]
            return (label[0] + shift, label[1])

        def solves(gen, label, got):
            return False

    elif family == "group_algebra":
        if spec is None:
            raise ValueError("group covariance needs the algebra description")
        G = spec.payload["base_group"]
        labels_map = spec.payload["labels"]
        members = sorted(spec.payload["subgroup"].members)
        bmats = [ops_np[f"g{h}"] for h in members]
        section = {}
        for g in G.elements():
            section.setdefault(labels_map[g], g)

        def expected(gen, label):
            i = int(gen[1:])
            k = section[labels_map[i]]
            pos = {h: idx for idx, h in enumerate(members)}
            return tuple(label[pos[G.mul(G.mul(G.inv(k), h), k)]] for h in members)

        def solves(gen, label, got):
            return False

    else:
        raise ValueError(f"no degree-zero covariance rule for family {family!r}")

    scale = max(1.0, max(float(np.abs(m).max()) for m in ops_np.values()))
    for i, m in enumerate(bmats):
        if float(np.abs(m @ m.conj().T - m.conj().T @ m).max()) > tol * scale**2 * 10:
            raise ValueError("degree-zero matrix is not normal")
        for m2 in bmats[i + 1:]:
            if float(np.abs(m @ m2 - m2 @ m).max()) > tol * scale**2 * 10:
                raise ValueError("degree-zero matrices do not commute")

    atoms = _atom_split(bmats, tol)
    projections = [(lab, cols @ cols.conj().T) for lab, cols in atoms]

    worst = 0.0
    witness = None
    bound = tol * scale * 10
    for gen, mat in ops_np.items():
        for lab, proj in projections:
            image = mat @ proj
            norm = float(np.abs(image).max())
            if norm <= bound:
                continue
            overlaps = [float(np.abs(p @ image).max()) for _, p in projections]
            best = int(np.argmax(overlaps))
            target_lab, target_proj = projections[best]
            leak = float(np.abs(image - target_proj @ image).max())
            if leak > bound:
                if leak > worst:
                    worst = leak
                    witness = {"generator": gen, "atom": lab, "leak": leak}
                continue
            want = expected(gen, lab)
            if want == "solve":
                if not solves(gen, lab, target_lab):
                    worst = max(worst, norm)
                    witness = {"generator": gen, "atom": lab, "landed": target_lab}
            elif want is None:
                worst = max(worst, norm)
                witness = {"generator": gen, "atom": lab,
                           "landed": target_lab, "expected": "undefined"}
            else:
                err = max(abs(complex(a) - complex(b)) for a, b in zip(want, target_lab))
                if err > 1e-6:
                    worst = max(worst, norm)
                    witness = {"generator": gen, "atom": lab,
                               "landed": target_lab, "expected": want}
    status = "pass" if worst <= bound else "fail"
    return VerificationReport("well_behaved", status, worst, witness, bound)


# ---------------------------------------------------------------------------
# Gram positivity
# ---------------------------------------------------------------------------


class _ExactDemotion(Exception):
    pass


def _exact_ldl_psd(gram: list) -> tuple:
    """Exact PSD test by congruence elimination; (psd, witness direction)."""
    n = len(gram)
    m = [[Scalar.coerce(x) for x in row] for row in gram]
    basis = [[Scalar.rational(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def chk(x: Scalar) -> Scalar:
        if not x.exact:
            raise _ExactDemotion
        return x

    for k in range(n):
        d = m[k][k]
        if not d.is_real():
            raise ValueError("matrix is not hermitian")
        if d.sign() < 0:
            return False, list(basis[k])
        if d.is_zero():
            for j in range(k + 1, n):
                b = m[k][j]
                if not b.is_zero():
                    # [[0, b], [b*, c]] block: pick w with 2 Re(w* b) = -(c + 1)
                    c = m[j][j]
                    w = chk(-(c + Scalar.rational(1))
                            * (b.conjugate() * Scalar.rational(2)).inverse())
                    vec = [chk(basis[j][i] + w * basis[k][i]) for i in range(n)]
                    return False, vec
            continue
        for i in range(k + 1, n):
            factor = chk(m[i][k] * d.inverse())
            if factor.is_zero():
                continue
            for j in range(k, n):
                m[i][j] = chk(m[i][j] - factor * m[k][j])
            for j in range(n):
                basis[i][j] = chk(basis[i][j] - factor * basis[k][j])
        for j in range(k + 1, n):
            m[k][j] = Scalar.rational(0)
    return True, None


def _psd_verdict(entries: list) -> tuple:
    """(psd, witness, mode) for a Hermitian matrix of Scalars."""
    if all(x.exact for row in entries for x in row):
        try:
            psd, wit = _exact_ldl_psd(entries)
            return psd, wit, "exact"
        except _ExactDemotion:
            pass
    arr = np.array([[complex(x) for x in row] for row in entries])
    scale = float(np.abs(arr).max()) if arr.size else 0.0
    vals, vecs = np.linalg.eigh((arr + arr.conj().T) / 2)
    if vals.size and vals[0] < -1e-9 * (1 + scale):
        return False, vecs[:, 0], "float"
    return True, None, "float"


@dataclass
class GramReport:
    elements: list
    matrix: tuple
    psd: bool
    witness: object
    mode: str


def inducibility_gram(character, elements, spec: GradedAlgebraSpec | None = None) -> GramReport:
    """Gram matrix of candidate inducing vectors under the character form."""
    spec = _spec_for(character, spec)
    polys = []
    for el in elements:
        if isinstance(el, str):
            polys.append(spec.parse(el))
        elif isinstance(el, tuple):
            polys.append(NCPolynomial.monomial(el))
        else:
            polys.append(el)
    gram = []
    for pi in polys:
        row = []
        for pj in polys:
            row.append(character_value(character, spec.involute(pj) * pi, spec))
        gram.append(row)
    # hermitian layout: G[i][j] = <a_i (x) 1, a_j (x) 1> = chi(p(a_j^* a_i))
    matrix = tuple(tuple(row) for row in gram)
    psd, wit, mode = _psd_verdict([list(r) for r in matrix])
    return GramReport(list(elements), matrix, psd, wit, mode)


def vir_gram_positivity(a, z, level: int,
                        tolerance: float | None = None) -> VerificationReport:
    """PSD verdict for the level Gram form at lowest weight a, central value z."""
    if level not in (1, 2, 3):
        raise ValueError("level must be 1, 2 or 3")
    tol = default_tolerance() if tolerance is None else tolerance
    a_s, z_s = Scalar.coerce(a), Scalar.coerce(z)
    if not (a_s.is_real() and z_s.is_real()):
        raise ValueError("weight and central value must be real")
    if a_s.is_rational() and z_s.is_rational():
        af, zf = a_s.as_fraction(), z_s.as_fraction()
    else:
        af, zf = Fraction(float(a_s)), Fraction(float(z_s))
    parts, gram = vir_level_gram(af, zf, level)
    entries = [[Scalar.rational(x) for x in row] for row in gram]
    psd, wit, _ = _psd_verdict(entries)
    if psd:
        return VerificationReport("vir_gram_positivity", "pass", 0.0,
                                  {"level": level, "partitions": parts,
                                   "gram": gram}, tol)
    arr = wit if isinstance(wit, np.ndarray) else np.array([complex(x) for x in wit])
    g = np.array([[float(x) for x in row] for row in gram])
    val = float(np.real(arr.conj() @ g @ arr))
    return VerificationReport("vir_gram_positivity", "fail", abs(val),
                              {"level": level, "partitions": parts,
                               "gram": gram, "direction": arr}, tol)


# ---------------------------------------------------------------------------
# compatibility condition sampling
# ---------------------------------------------------------------------------


def condition_sample_check(spec: GradedAlgebraSpec, character,
                           max_len: int = 4, max_pairs: int | None = None,
                           tolerance: float | None = None) -> VerificationReport:
    """chi(c*d) chi(d*c) = chi(c*c) chi(d*d) on sampled equal-degree pairs."""
    tol = default_tolerance() if tolerance is None else tolerance
    buckets = {}
    for w in _word_iter(spec.gen_names, max_len):
        key = tuple(((g, False) for g in w))
        deg = spec.degree_of(key)
        buckets.setdefault(deg, []).append(key)
    per_bucket = None
    if max_pairs is not None:
        per_bucket = max(1, max_pairs // max(1, len(buckets)))

    def val(p) -> Scalar:
        return character_value(character, p, spec)

    checked = 0
    for deg in sorted(buckets, key=repr):
        words = buckets[deg]
        pairs = itertools.combinations_with_replacement(words, 2)
        if per_bucket is not None:
            pairs = itertools.islice(pairs, per_bucket)
        for c, d in pairs:
            cp = NCPolynomial.monomial(c)
            dp = NCPolynomial.monomial(d)
            cs, ds = spec.involute(cp), spec.involute(dp)
            lhs = val(cs * dp) * val(ds * cp)
            rhs = val(cs * cp) * val(ds * dp)
            checked += 1
            if lhs.exact and rhs.exact:
                if lhs != rhs:
                    return VerificationReport(
                        "condition_sample", "fail",
                        abs(complex(lhs) - complex(rhs)),
                        {"c": c, "d": d}, tol)
            elif abs(complex(lhs) - complex(rhs)) > tol * (1 + abs(complex(rhs))):
                return VerificationReport(
                    "condition_sample", "fail",
                    abs(complex(lhs) - complex(rhs)),
                    {"c": c, "d": d}, tol)
    return VerificationReport("condition_sample", "pass", 0.0,
                              {"pairs": checked}, tol)
