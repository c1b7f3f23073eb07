"""Induced representations as explicit sparse matrices.

Basis vectors correspond to shift-definedness labels of the inducing
character intersected with a truncation window; matrix elements come from
the character applied to section-conjugated generators, normalized by the
section norms.  Interior labels are those whose columns are unaffected by
truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    GradedAlgebraSpec,
    dynamical_spec,
    group_algebra_spec,
    su2_spec,
    su11_spec,
)
from .characters import (
    DynOrbit,
    FiniteGroupCharacter,
    PeriodicExtensionCharacter,
    Sl2Character,
    dyn_classify,
    dyn_eval_word,
    sl2_definedness,
    sl2_eval,
    sl2_membership,
    stabilizer_and_orbit,
)
from .groups import GroupSpec, Subgroup
from .matrices import OperatorMatrix
from .scalars import Scalar
from .words import NCPolynomial, WordKey

DEFAULT_WINDOW = (-50, 50)


@dataclass
class InducedRep:
    """Explicit matrices of the generators over a labeled basis window."""

    spec: GradedAlgebraSpec | None
    character: object
    basis: tuple
    ops: dict  # generator name -> OperatorMatrix
    interior: tuple
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def op(self, name: str) -> OperatorMatrix:
        return self.ops[name]

    def matrix(self, p: NCPolynomial) -> OperatorMatrix:
        """Matrix of a polynomial in the generators (stars resolved first)."""
        if self.spec is None:
            raise ValueError("representation carries no algebra description")
        p = self.spec.normalize(p)
        total = OperatorMatrix.zero(self.basis)
        ident = OperatorMatrix.identity(self.basis)
        for w, c in p.terms.items():
            acc = ident
            for name, _ in w:
                acc = acc * self.ops[name]
            total = total + acc.scale(c)
        return total

    def word_matrix(self, w: WordKey) -> OperatorMatrix:
        return self.matrix(NCPolynomial.monomial(w))


# ---------------------------------------------------------------------------
# canonical sections
# ---------------------------------------------------------------------------


def dyn_section(g: int) -> WordKey:
    """Canonical degree-g monomial for one-ladder families."""
    if g >= 0:
        return (("a", False),) * g
    return (("a*", False),) * (-g)


def sl2_section(g: int) -> WordKey:
    if g >= 0:
        return (("E", False),) * g
    return (("F", False),) * (-g)


def _involuted(spec: GradedAlgebraSpec, w: WordKey) -> NCPolynomial:
    return spec.involute(NCPolynomial.monomial(w))


# ---------------------------------------------------------------------------
# the general induction engine
# ---------------------------------------------------------------------------


def induce_character(character, spec: GradedAlgebraSpec | None = None,
                     window: tuple = DEFAULT_WINDOW) -> InducedRep:
    """Induce a positive character to explicit generator matrices."""
    if isinstance(character, DynOrbit):
        return _induce_dyn(character, spec, window)
    if isinstance(character, Sl2Character):
        return _induce_sl2(character, spec, window)
    if isinstance(character, FiniteGroupCharacter):
        return _induce_group(character)
    raise TypeError(f"cannot induce from {type(character).__name__}")


def _induce_dyn(orbit: DynOrbit, spec, window) -> InducedRep:
    if orbit.defect is not None:
        raise ValueError(f"character is not positive ({orbit.defect})")
    if spec is None:
        spec = dynamical_spec(orbit.f)
    elif spec.payload.get("f") != orbit.f:
        raise ValueError("orbit recursion does not match the algebra description")
    lo, hi = window
    basis = [g for g in range(lo, hi) if orbit.is_defined(g)]
    if not basis:
        raise ValueError("window contains no definedness labels")
    bset = set(basis)

    norms = {}
    for g in basis:
        w = dyn_section(g)
        poly = _involuted(spec, w) * NCPolynomial.monomial(w)
        (term_word,) = poly.terms
        norms[g] = dyn_eval_word(orbit, term_word)

    ops = {}
    for gen, h in (("a", 1), ("a*", -1)):
        entries = {}
        for g in basis:
            gp = g + h
            if gp not in bset:
                continue  # outside window (truncated) or outside definedness (zero)
            word_poly = (
                _involuted(spec, dyn_section(gp))
                * NCPolynomial.monomial(((gen, False),))
                * NCPolynomial.monomial(dyn_section(g))
            )
            (term_word,) = word_poly.terms
            val = dyn_eval_word(orbit, term_word)
            val = val / (norms[gp] * norms[g]).sqrt()
            if not val.is_zero():
                entries[(gp, g)] = val
        ops[gen] = OperatorMatrix(basis, basis, entries)

    interior = tuple(
        g
        for g in basis
        if all((g + h in bset) or not orbit.is_defined(g + h) for h in (1, -1))
    )
    return InducedRep(
        spec=spec,
        character=orbit,
        basis=tuple(basis),
        ops=ops,
        interior=interior,
        meta={"window": tuple(window), "family": spec.family,
              "gen_degrees": {"a": 1, "a*": -1}},
    )


def _induce_sl2(c: Sl2Character, spec, window) -> InducedRep:
    report = sl2_membership(c)
    if not report.verdict:
        raise ValueError(f"character is not positive (violation {report.violation})")
    if spec is None:
        spec = su2_spec() if c.algebra == "su2" else su11_spec()
    elif spec.family != c.algebra:
        raise ValueError("character convention does not match the algebra description")
    dlo, dhi = sl2_definedness(c)
    lo, hi = window
    if dlo is not None:
        lo = max(lo, dlo)
    if dhi is not None:
        hi = min(hi, dhi + 1)
    basis = list(range(lo, hi))
    if not basis:
        raise ValueError("window contains no definedness labels")
    bset = set(basis)

    def defined(n: int) -> bool:
        return (dlo is None or n >= dlo) and (dhi is None or n <= dhi)

    norms = {}
    for g in basis:
        w = sl2_section(g)
        poly = _involuted(spec, w) * NCPolynomial.monomial(w)
        norms[g] = sl2_eval(c, poly, spec)

    ops = {}
    for gen, h in (("E", 1), ("F", -1), ("H", 0)):
        entries = {}
        for g in basis:
            gp = g + h
            if gp not in bset:
                continue
            word_poly = (
                _involuted(spec, sl2_section(gp))
                * NCPolynomial.monomial(((gen, False),))
                * NCPolynomial.monomial(sl2_section(g))
            )
            val = sl2_eval(c, word_poly, spec)
            val = val / (norms[gp] * norms[g]).sqrt()
            if not val.is_zero():
                entries[(gp, g)] = val
        ops[gen] = OperatorMatrix(basis, basis, entries)

    interior = tuple(
        g
        for g in basis
        if all((g + h in bset) or not defined(g + h) for h in (1, -1))
    )
    return InducedRep(
        spec=spec,
        character=c,
        basis=tuple(basis),
        ops=ops,
        interior=interior,
        meta={"window": tuple(window), "family": c.algebra, "series": report.series,
              "gen_degrees": {"E": 1, "F": -1, "H": 0}},
    )


def _induce_group(character: FiniteGroupCharacter) -> InducedRep:
    spec = character.spec
    G: GroupSpec = spec.payload["base_group"]
    labels_map = spec.payload["labels"]
    Q = spec.group
    basis = list(Q.elements())

    # canonical section element per quotient label
    section = {}
    for g in G.elements():
        section.setdefault(labels_map[g], g)

    ops = {}
    for i in G.elements():
        h_deg = labels_map[i]
        entries = {}
        for q in basis:
            qp = Q.mul(h_deg, q)
            word = G.mul(G.mul(G.inv(section[qp]), i), section[q])
            val = character.eval_element(word)
            if not val.is_zero():
                entries[(qp, q)] = val
        ops[f"g{i}"] = OperatorMatrix(basis, basis, entries)

    return InducedRep(
        spec=spec,
        character=character,
        basis=tuple(basis),
        ops=ops,
        interior=tuple(basis),
        meta={"family": "group_algebra",
              "gen_degrees": {f"g{i}": labels_map[i] for i in G.elements()}},
    )


# ---------------------------------------------------------------------------
# closed-form builders (independent routes for cross-checking)
# ---------------------------------------------------------------------------


def dyn_shift_rep(orbit: DynOrbit, window: tuple = DEFAULT_WINDOW,
                  spec: GradedAlgebraSpec | None = None) -> InducedRep:
    """Weighted shift with lambda_k = sqrt(x_k) directly from the orbit."""
    if spec is None:
        spec = dynamical_spec(orbit.f)
    lo, hi = window
    basis = [k for k in range(lo, hi) if orbit.is_defined(k)]
    if not basis:
        raise ValueError("window contains no definedness labels")
    bset = set(basis)
    up = {}
    down = {}
    for k in basis:
        if k + 1 in bset:
            lam = orbit.weight(k)
            if not lam.is_zero():
                up[(k + 1, k)] = lam
        if k - 1 in bset:
            lam = orbit.weight(k - 1)
            if not lam.is_zero():
                down[(k - 1, k)] = lam
    ops = {
        "a": OperatorMatrix(basis, basis, up),
        "a*": OperatorMatrix(basis, basis, down),
    }
    interior = tuple(
        k
        for k in basis
        if all((k + h in bset) or not orbit.is_defined(k + h) for h in (1, -1))
    )
    return InducedRep(
        spec=spec,
        character=orbit,
        basis=tuple(basis),
        ops=ops,
        interior=interior,
        meta={"window": tuple(window), "family": spec.family, "route": "closed_form",
              "gen_degrees": {"a": 1, "a*": -1}},
    )


def dyn_periodic_rep(orbit: DynOrbit, z, spec: GradedAlgebraSpec | None = None) -> InducedRep:
    """m-dimensional twisted cyclic shift attached to a periodic orbit."""
    cls = dyn_classify(orbit)
    if cls.kind != "bilateral_periodic":
        raise ValueError(f"orbit is {cls.kind}, not periodic")
    m = cls.period
    z = Scalar.coerce(z)
    ext = PeriodicExtensionCharacter(orbit, m, z)  # validates |z| = 1
    if spec is None:
        spec = dynamical_spec(orbit.f)
    basis = list(range(m))
    up = {}
    for r in range(m - 1):
        lam = orbit.weight(r)
        if not lam.is_zero():
            up[(r + 1, r)] = lam
    lam = orbit.weight(m - 1)
    if not lam.is_zero():
        up[(0, m - 1)] = z * lam
    a = OperatorMatrix(basis, basis, up)
    ops = {"a": a, "a*": a.adjoint()}
    return InducedRep(
        spec=spec,
        character=ext,
        basis=tuple(basis),
        ops=ops,
        interior=tuple(basis),
        meta={"period": m, "twist": z, "family": spec.family,
              "gen_degrees": {"a": 1, "a*": -1}},
    )


def su2_spin_rep(l) -> InducedRep:
    """Spin-l matrices on labels m = -l..l (closed form)."""
    l = Fraction(l)
    if l < 0 or (2 * l).denominator != 1:
        raise ValueError("spin must be a nonnegative half-integer")
    labels = [-l + k for k in range(int(2 * l) + 1)]
    spec = su2_spec()
    e_entries = {}
    f_entries = {}
    h_entries = {}
    for m in labels:
        h_entries[(m, m)] = Scalar.rational(2 * m)
        if m + 1 in labels:
            e_entries[(m + 1, m)] = Scalar.rational((l - m) * (l + m + 1)).sqrt()
        if m - 1 in labels:
            f_entries[(m - 1, m)] = Scalar.rational((l - m + 1) * (l + m)).sqrt()
    ops = {
        "E": OperatorMatrix(labels, labels, e_entries),
        "F": OperatorMatrix(labels, labels, f_entries),
        "H": OperatorMatrix(labels, labels, h_entries),
    }
    character = Sl2Character(int(2 * l) * (int(2 * l) + 2), -int(2 * l), "su2")
    return InducedRep(
        spec=spec,
        character=character,
        basis=tuple(labels),
        ops=ops,
        interior=tuple(labels),
        meta={"spin": l, "route": "closed_form",
              "gen_degrees": {"E": 1, "F": -1, "H": 0}},
    )


def sl2_truncated_rep(c: Sl2Character, window: tuple = DEFAULT_WINDOW) -> InducedRep:
    """Band matrices from the closed weight products (independent route).

    Signs follow the canonical-section inner products: in the su11
    convention the raising entries on negative labels and the lowering
    entries on positive labels pick up a minus sign.
    """
    report = sl2_membership(c)
    if not report.verdict:
        raise ValueError(f"character is not positive (violation {report.violation})")
    spec = su2_spec() if c.algebra == "su2" else su11_spec()
    dlo, dhi = sl2_definedness(c)
    lo, hi = window
    if dlo is not None:
        lo = max(lo, dlo)
    if dhi is not None:
        hi = min(hi, dhi + 1)
    basis = list(range(lo, hi))
    if not basis:
        raise ValueError("window contains no definedness labels")
    bset = set(basis)

    def defined(n: int) -> bool:
        return (dlo is None or n >= dlo) and (dhi is None or n <= dhi)

    e_entries = {}
    f_entries = {}
    h_entries = {}
    for g in basis:
        h_entries[(g, g)] = Scalar.rational(c.t + 2 * g)
        w = c.weight(g)
        if g + 1 in bset and w != 0:
            root = Scalar.rational(w).sqrt()
            if c.algebra == "su11" and g < 0:
                root = -root
            e_entries[(g + 1, g)] = root
        wm = c.weight(g - 1)
        if g - 1 in bset and wm != 0:
            root = Scalar.rational(wm).sqrt()
            if c.algebra == "su11" and g >= 1:
                root = -root
            f_entries[(g - 1, g)] = root
    ops = {
        "E": OperatorMatrix(basis, basis, e_entries),
        "F": OperatorMatrix(basis, basis, f_entries),
        "H": OperatorMatrix(basis, basis, h_entries),
    }
    interior = tuple(
        g
        for g in basis
        if all((g + h in bset) or not defined(g + h) for h in (1, -1))
    )
    return InducedRep(
        spec=spec,
        character=c,
        basis=tuple(basis),
        ops=ops,
        interior=interior,
        meta={"window": tuple(window), "family": c.algebra,
              "series": report.series, "route": "closed_form",
              "gen_degrees": {"E": 1, "F": -1, "H": 0}},
    )


# ---------------------------------------------------------------------------
# finite groups
# ---------------------------------------------------------------------------


def finite_group_induce(G: GroupSpec, H: Subgroup, rho) -> InducedRep:
    """Induce a subgroup representation to the full finite group algebra.

    rho may be a FiniteGroupCharacter, a map h -> Scalar, or a map
    h -> OperatorMatrix over a common inner basis.
    """
    if G.kind != "finite":
        raise ValueError("finite induction expects a finite group")
    if H.group is not G and not H.group.same_group(G):
        raise ValueError("subgroup does not live in the given group")

    if isinstance(rho, FiniteGroupCharacter):
        values = rho.values
    elif rho and all(not isinstance(v, OperatorMatrix) for v in rho.values()):
        values = {h: Scalar.coerce(v) for h, v in rho.items()}
    else:
        values = None

    members = sorted(H.members)
    reps = []
    seen = set()
    for g in G.elements():
        c = H.coset_of(g)
        if c not in seen:
            seen.add(c)
            reps.append(c)  # coset_of returns the minimal element, a valid rep
    rep_of = {g: H.coset_of(g) for g in G.elements()}

    if values is not None:
        if set(values) != set(members):
            raise ValueError("representation values must cover the subgroup")
        basis = list(reps)
        ops = {}
        for i in G.elements():
            entries = {}
            for k in basis:
                x = G.mul(i, k)
                kp = rep_of[x]
                h = G.mul(G.inv(kp), x)
                val = values[h]
                if not val.is_zero():
                    entries[(kp, k)] = val
            ops[f"g{i}"] = OperatorMatrix(basis, basis, entries)
        spec = group_algebra_spec(G, H) if H.is_normal() else None
        return InducedRep(
            spec=spec,
            character=rho,
            basis=tuple(basis),
            ops=ops,
            interior=tuple(basis),
            meta={"family": "group_algebra", "index": len(reps),
                  "gen_degrees": {f"g{i}": i for i in G.elements()},
                  "base_group": G, "base_subgroup": H},
        )

    # matrix-valued rho
    inner = None
    mats = {}
    for h, m in rho.items():
        if not isinstance(m, OperatorMatrix):
            raise TypeError("mixed scalar/matrix representation values")
        if inner is None:
            inner = m.rows
        if m.rows != inner or m.cols != inner:
            raise ValueError("representation matrices must share one basis")
        mats[h] = m
    if set(mats) != set(members):
        raise ValueError("representation values must cover the subgroup")
    basis = [(k, v) for k in reps for v in inner]
    ops = {}
    for i in G.elements():
        entries = {}
        for k in reps:
            x = G.mul(i, k)
            kp = rep_of[x]
            h = G.mul(G.inv(kp), x)
            for (r, cc), val in mats[h].entries.items():
                entries[((kp, r), (k, cc))] = val
        ops[f"g{i}"] = OperatorMatrix(basis, basis, entries)
    spec = group_algebra_spec(G, H) if H.is_normal() else None
    return InducedRep(
        spec=spec,
        character=rho,
        basis=tuple(basis),
        ops=ops,
        interior=tuple(basis),
        meta={"family": "group_algebra", "index": len(reps), "inner_dim": len(inner),
              "gen_degrees": {f"g{i}": i for i in G.elements()},
              "base_group": G, "base_subgroup": H},
    )


def direct_sum(*reps: InducedRep) -> InducedRep:
    """Block-diagonal sum over relabeled bases (i, label)."""
    if not reps:
        raise ValueError("need at least one summand")
    names = set(reps[0].ops)
    if any(set(r.ops) != names for r in reps):
        raise ValueError("summands must share generator names")
    basis = tuple((i, l) for i, r in enumerate(reps) for l in r.basis)
    interior = tuple((i, l) for i, r in enumerate(reps) for l in r.interior)
    ops = {}
    for name in sorted(names):
        entries = {}
        for i, r in enumerate(reps):
            for (rr, cc), v in r.ops[name].entries.items():
                entries[((i, rr), (i, cc))] = v
        ops[name] = OperatorMatrix(basis, basis, entries)
    spec = reps[0].spec
    if any(r.spec is not spec for r in reps[1:]):
        spec = None
    meta = {"summands": len(reps)}
    degrees = [r.meta.get("gen_degrees") for r in reps]
    if degrees[0] is not None and all(d == degrees[0] for d in degrees):
        meta["gen_degrees"] = dict(degrees[0])
    return InducedRep(
        spec=spec,
        character=tuple(r.character for r in reps),
        basis=basis,
        ops=ops,
        interior=interior,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# Mackey cocycles
# ---------------------------------------------------------------------------


@dataclass
class MackeyCocycle:
    tau: dict  # (h, k) -> Scalar on sampled stabilizer pairs
    sections: dict  # stabilizer element -> section description
    trivial: bool
    extension: object  # witness extension character when trivial
    stabilizer: Subgroup


def mackey_cocycle(character, depth: int = 3) -> MackeyCocycle:
    """Cocycle of a character over its stabilizer, with a triviality witness."""
    report = stabilizer_and_orbit(character, depth=depth)
    stab = report.stabilizer

    if isinstance(character, DynOrbit):
        if stab.is_trivial():
            return MackeyCocycle({}, {}, True, None, stab)
        m = stab.modulus
        sample = [p * m for p in range(-depth, depth + 1)]
        tau = {}
        sections = {}
        norms = {}
        for g in sample:
            w = dyn_section(g)
            sections[g] = w
            spec = dynamical_spec(character.f)
            poly = _involuted(spec, w) * NCPolynomial.monomial(w)
            (term_word,) = poly.terms
            norms[g] = dyn_eval_word(character, term_word)
        spec = dynamical_spec(character.f)
        for h in sample:
            for k in sample:
                if h + k not in norms:
                    continue
                wh, wk, whk = dyn_section(h), dyn_section(k), dyn_section(h + k)
                poly = (
                    _involuted(spec, wh)
                    * _involuted(spec, wk)
                    * NCPolynomial.monomial(whk)
                )
                (term_word,) = poly.terms
                num = dyn_eval_word(character, term_word)
                den = (norms[h] * norms[k] * norms[h + k]).sqrt()
                tau[(h, k)] = num / den
        ext = PeriodicExtensionCharacter(character, m, Scalar.rational(1))
        return MackeyCocycle(tau, sections, True, ext, stab)

    if isinstance(character, Sl2Character):
        return MackeyCocycle({}, {}, True, None, stab)

    if isinstance(character, FiniteGroupCharacter):
        spec = character.spec
        G: GroupSpec = spec.payload["base_group"]
        labels_map = spec.payload["labels"]
        section = {}
        for g in G.elements():
            section.setdefault(labels_map[g], g)
        smembers = sorted(stab.members)
        tau = {}
        for h in smembers:
            for k in smembers:
                hk = stab.group.mul(h, k)
                word = G.mul(
                    G.mul(G.inv(section[hk]), G.mul(section[h], section[k])),
                    G.identity(),
                )
                tau[(h, k)] = character.eval_element(word)
        # constructive extension over the stabilizer preimage
        preimage = [g for g in G.elements() if labels_map[g] in stab.members]
        ext = _extend_group_character(character, G, preimage, labels_map, stab)
        return MackeyCocycle(
            tau,
            {q: section[q] for q in smembers},
            ext is not None,
            ext,
            stab,
        )

    raise TypeError(f"unsupported character type {type(character).__name__}")


def _extend_group_character(character, G, preimage, labels_map, stab):
    """Search for a multiplicative extension of chi to the stabilizer preimage.

    Candidates multiply chi on the subgroup part by a character of the
    stabilizer quotient; each candidate is checked for multiplicativity.
    """
    smembers = sorted(stab.members)
    Q = stab.group
    # all characters of the (small) stabilizer subgroup, brute force
    n = len(smembers)
    roots = [Scalar.root_of_unity(j, n) for j in range(n)]

    def all_characters():
        # backtracking over value assignments per element
        assign = {Q.identity(): Scalar.rational(1)}

        def backtrack(todo):
            if not todo:
                yield dict(assign)
                return
            q = todo[0]
            for r in roots:
                assign[q] = r
                if all(
                    Q.mul(q, p) not in assign
                    or p not in assign
                    or assign[Q.mul(q, p)] == assign[q] * assign[p]
                    for p in list(assign)
                ):
                    ok = True
                    for p in list(assign):
                        qp = Q.mul(q, p)
                        pq = Q.mul(p, q)
                        if qp in assign and assign[qp] != assign[q] * assign[p]:
                            ok = False
                            break
                        if pq in assign and assign[pq] != assign[p] * assign[q]:
                            ok = False
                            break
                    if ok:
                        yield from backtrack(todo[1:])
                del assign[q]

        rest = [q for q in smembers if q != Q.identity()]
        yield from backtrack(rest)

    section = {}
    for g in G.elements():
        section.setdefault(labels_map[g], g)

    for mu in all_characters():
        cand = {}
        ok = True
        for g in preimage:
            q = labels_map[g]
            h = G.mul(G.inv(section[q]), g)
            val = character.eval_element(h)
            if val.is_zero():
                ok = False
                break
            cand[g] = val * mu[q]
        if not ok:
            continue
        if all(
            cand[G.mul(x, y)] == cand[x] * cand[y]
            for x in preimage
            for y in preimage
        ):
            return cand
    return None
