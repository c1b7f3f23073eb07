"""Systems of imprimitivity: construction, verification, conjugation,
reconstruction of the inducing representation, and bounded decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .characters import (
    DynOrbit,
    FiniteGroupCharacter,
    PeriodicExtensionCharacter,
    Sl2Character,
)
from .groups import Subgroup
from .induction import (
    InducedRep,
    dyn_periodic_rep,
    finite_group_induce,
    induce_character,
)
from .matrices import OperatorMatrix
from .scalars import Scalar
from .verify import VerificationReport, default_tolerance
from .words import NCPolynomial


class DegenerateSystemError(ValueError):
    def __init__(self, coset, message):
        super().__init__(message)
        self.coset = coset


@dataclass
class ImprimitivitySystem:
    """Representation together with coset-labeled orthogonal projections."""

    rep: InducedRep
    H: Subgroup
    projections: dict  # canonical coset label -> OperatorMatrix
    meta: dict = field(default_factory=dict)

    def coset_labels(self) -> list:
        return sorted(self.projections)

    def projection(self, t) -> OperatorMatrix:
        p = self.projections.get(t)
        if p is None:
            return OperatorMatrix.zero(self.rep.basis)
        return p

    def gen_degrees(self) -> dict:
        degs = self.rep.meta.get("gen_degrees")
        if degs is None and self.rep.spec is not None:
            degs = self.rep.spec.generators
        if degs is None:
            raise ValueError("representation does not expose generator degrees")
        return degs

    def shifted_coset(self, h, t):
        return self.H.coset_of(self.H.group.mul(h, t))


def _label_element(rep: InducedRep, label):
    if rep.meta.get("inner_dim") is not None:
        return label[0]
    if rep.meta.get("summands") is not None:
        return label[1]
    return label


def build_induced_system(rep: InducedRep, H: Subgroup) -> ImprimitivitySystem:
    """Coordinate projections grouped by the coset of each basis label."""
    cosets = {}
    for label in rep.basis:
        try:
            t = H.coset_of(_label_element(rep, label))
        except (TypeError, ValueError) as exc:
            raise ValueError(
                f"rep lacks coset-compatible basis labels ({label!r})") from exc
        cosets.setdefault(t, []).append(label)
    one = Scalar.rational(1)
    projections = {
        t: OperatorMatrix(rep.basis, rep.basis, {(l, l): one for l in labels})
        for t, labels in cosets.items()
    }
    return ImprimitivitySystem(rep, H, projections, meta={"built": "induced"})


def verify_system(sys: ImprimitivitySystem,
                  tolerance: float | None = None) -> VerificationReport:
    """Projection axioms plus covariance on interior columns."""
    tol = default_tolerance() if tolerance is None else tolerance
    rep = sys.rep
    interior = tuple(rep.interior)
    worst = 0.0
    witness = None

    def norm(diff: OperatorMatrix) -> float:
        if not diff.entries:
            return 0.0
        if all(v.exact for v in diff.entries.values()):
            return diff.max_abs()
        return diff.frobenius()

    def charge(value: float, tag):
        nonlocal worst, witness
        if value > worst:
            worst, witness = value, tag

    labels = sys.coset_labels()
    total = OperatorMatrix.zero(rep.basis)
    for t in labels:
        E = sys.projections[t]
        charge(norm(E * E - E), {"axiom": "idempotent", "coset": t})
        charge(norm(E.adjoint() - E), {"axiom": "self-adjoint", "coset": t})
        total = total + E
    for i, t1 in enumerate(labels):
        for t2 in labels[i + 1:]:
            charge(norm(sys.projections[t1] * sys.projections[t2]),
                   {"axiom": "orthogonal", "cosets": (t1, t2)})
    charge(norm(total - OperatorMatrix.identity(rep.basis)),
           {"axiom": "complete"})

    degs = sys.gen_degrees()
    for gen, mat in rep.ops.items():
        h = degs[gen]
        for t in labels:
            lhs = sys.projection(sys.shifted_coset(h, t)) * mat
            rhs = mat * sys.projections[t]
            diff = (lhs - rhs).restrict_columns(interior)
            charge(norm(diff), {"axiom": "covariance", "generator": gen, "coset": t})

    status = "pass" if worst <= tol else "fail"
    return VerificationReport("imprimitivity_system", status, worst, witness, tol)


def conjugate_system(sys: ImprimitivitySystem, f) -> ImprimitivitySystem:
    """Relabel the projections over the conjugated subgroup: E^f(kfHf^-1) = E(kfH)."""
    grp = sys.H.group
    H2 = sys.H.conjugate(f)
    projections = {}
    for s, E in sys.projections.items():
        t = H2.coset_of(grp.mul(s, grp.inv(f)))
        if t in projections:
            raise ValueError("conjugation produced colliding coset labels")
        projections[t] = E
    meta = dict(sys.meta)
    meta["conjugated_by"] = f
    return ImprimitivitySystem(sys.rep, H2, projections, meta)


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------


@dataclass
class ReconstructedRep:
    """Compression of the representation to the range of the identity-coset
    projection, together with the re-identified inducing character."""

    system: ImprimitivitySystem
    labels: tuple
    character: object
    meta: dict = field(default_factory=dict)

    def matrix(self, p: NCPolynomial) -> OperatorMatrix:
        """Compression of a degree-in-H polynomial to Ran E(H)."""
        return self.system.rep.matrix(p).restrict(self.labels, self.labels)

    def op(self, name: str) -> OperatorMatrix:
        return self.system.rep.op(name).restrict(self.labels, self.labels)

    def induce(self, window=None) -> InducedRep:
        rep = self.system.rep
        c = self.character
        if c is None:
            raise ValueError("no inducing character was identified")
        if isinstance(c, PeriodicExtensionCharacter):
            return dyn_periodic_rep(c.orbit, c.z, rep.spec)
        if isinstance(c, (DynOrbit, Sl2Character)):
            win = window or rep.meta.get("window")
            return induce_character(c, rep.spec, win)
        if isinstance(c, FiniteGroupCharacter):
            return induce_character(c)
        if isinstance(c, dict):
            return finite_group_induce(rep.meta["base_group"],
                                       rep.meta["base_subgroup"], c)
        raise TypeError(f"cannot re-induce from {type(c).__name__}")


def _projection_support(E: OperatorMatrix) -> list:
    return sorted({r for (r, c) in E.entries if r == c},
                  key=lambda l: repr(l))


def reconstruct_inducing_rep(sys: ImprimitivitySystem,
                             max_word_len: int = 4) -> ReconstructedRep:
    """Compress to Ran E(H) after checking non-degeneracy coset by coset."""
    rep = sys.rep
    grp = sys.H.group
    id_coset = sys.H.coset_of(grp.identity())
    E_id = sys.projections.get(id_coset)
    ran = _projection_support(E_id) if E_id is not None else []
    if not ran:
        raise DegenerateSystemError(
            id_coset, f"identity-coset projection is zero (coset {id_coset!r})")

    order = {l: i for i, l in enumerate(rep.basis)}
    ran = sorted(ran, key=order.get)
    n = len(rep.basis)
    ops_np = {g: m.to_numpy() for g, m in rep.ops.items()}
    degs = sys.gen_degrees()

    # breadth-first span of pi(words) Ran E(H), bucketed by the coset of the
    # word degree; frontier is kept linearly independent per degree
    buckets = {}
    frontier = {}

    def add(deg, vec) -> bool:
        basis_list = frontier.setdefault(deg, [])
        w = vec.copy()
        for b in basis_list:
            w = w - (b.conj() @ w) * b
        nrm = float(np.linalg.norm(w))
        if nrm < 1e-9 * max(1.0, float(np.linalg.norm(vec))):
            return False
        basis_list.append(w / nrm)
        buckets.setdefault(sys.H.coset_of(deg), []).append(vec)
        return True

    for l in ran:
        v = np.zeros(n, dtype=complex)
        v[order[l]] = 1.0
        add(grp.identity(), v)
    current = dict(frontier)
    for _ in range(max_word_len):
        nxt = {}
        for deg, vecs in current.items():
            for g, mat in ops_np.items():
                ndeg = grp.mul(degs[g], deg)
                for v in vecs:
                    w = mat @ v
                    if float(np.linalg.norm(w)) < 1e-12:
                        continue
                    if add(ndeg, w):
                        nxt.setdefault(ndeg, []).append(w / np.linalg.norm(w))
        if not nxt:
            break
        current = nxt

    for t in sys.coset_labels():
        expected = len(_projection_support(sys.projections[t]))
        if expected == 0:
            continue
        got = buckets.get(t)
        rank = np.linalg.matrix_rank(np.column_stack(got)) if got else 0
        if rank < expected:
            raise DegenerateSystemError(
                t, f"coset {t!r} is not generated from Ran E(H) "
                   f"(rank {rank} < {expected})")

    character = _extract_character(sys, ran)
    return ReconstructedRep(sys, tuple(ran), character,
                            meta={"identity_coset": id_coset})


class ReconstructionMismatch(ValueError):
    pass


def _extract_character(sys: ImprimitivitySystem, ran: list):
    """Re-identify the inducing character from the compressed matrices."""
    rep = sys.rep
    char = rep.character

    def compressed(poly: NCPolynomial) -> Scalar:
        m = rep.matrix(poly).restrict(ran, ran)
        return m.entry(ran[0], ran[0])

    if isinstance(char, DynOrbit):
        if len(ran) != 1 or ran[0] != 0:
            raise ReconstructionMismatch("expected Ran E(H) spanned by label 0")
        seed = compressed(NCPolynomial.from_names("a*", "a"))
        if not _scalar_close(seed, char.x(0)):
            raise ReconstructionMismatch(
                f"compressed seed {seed} differs from the orbit value {char.x(0)}")
        return char

    if isinstance(char, PeriodicExtensionCharacter):
        m = char.period
        if sys.H.group.kind != "free_abelian" or sys.H.modulus != m:
            raise ReconstructionMismatch("subgroup does not match the period")
        word = NCPolynomial.from_names(*(["a"] * m))
        val = compressed(word)
        prod = Scalar.rational(1)
        for k in range(m):
            prod = prod * char.orbit.weight(k)
        z = val / prod
        return PeriodicExtensionCharacter(char.orbit, m, z)

    if isinstance(char, Sl2Character):
        if len(ran) != 1 or ran[0] != 0:
            raise ReconstructionMismatch("expected Ran E(H) spanned by label 0")
        t = compressed(NCPolynomial.from_names("H"))
        if not _scalar_close(t, Scalar.rational(char.t)):
            raise ReconstructionMismatch(
                f"compressed weight {t} differs from {char.t}")
        return char

    if isinstance(char, FiniteGroupCharacter):
        spec = char.spec
        members = sorted(spec.payload["subgroup"].members)
        values = {}
        for h in members:
            values[h] = compressed(NCPolynomial.from_names(f"g{h}"))
        rebuilt = FiniteGroupCharacter(spec, values)
        if not rebuilt.same_character(char):
            raise ReconstructionMismatch("compressed subgroup values differ")
        return rebuilt

    if isinstance(char, dict):
        G = rep.meta.get("base_group")
        H = rep.meta.get("base_subgroup")
        if G is None or H is None:
            return None
        members = sorted(H.members)
        if rep.meta.get("inner_dim") is None:
            values = {}
            for h in members:
                values[h] = compressed(NCPolynomial.from_names(f"g{h}"))
            return values
        inner = sorted({l[1] for l in ran}, key=repr)
        mats = {}
        for h in members:
            sub = rep.op(f"g{h}").restrict(ran, ran)
            entries = {(r[1], c[1]): v for (r, c), v in sub.entries.items()}
            mats[h] = OperatorMatrix(inner, inner, entries)
        return mats

    return None


def _scalar_close(a: Scalar, b: Scalar, tol: float = 1e-9) -> bool:
    if a.exact and b.exact:
        return a == b
    return abs(complex(a) - complex(b)) <= tol * (1 + abs(complex(b)))


# ---------------------------------------------------------------------------
# bounded decomposition
# ---------------------------------------------------------------------------


def decompose_bounded_system(sys: ImprimitivitySystem) -> list:
    """Greedy split into subsystems generated by one coset projection each."""
    rep = sys.rep
    if tuple(rep.interior) != tuple(rep.basis):
        raise ValueError("system is a truncation of an unbounded one")
    for t, E in sys.projections.items():
        if any(r != c or v != Scalar.rational(1) for (r, c), v in E.entries.items()):
            raise ValueError("decomposition requires coordinate projections")

    adjacency = {l: set() for l in rep.basis}
    for m in rep.ops.values():
        for (r, c) in m.entries:
            adjacency[r].add(c)
            adjacency[c].add(r)

    remaining = set(rep.basis)
    order = {l: i for i, l in enumerate(rep.basis)}
    out = []
    for t in sys.coset_labels():
        supp = [l for l in _projection_support(sys.projections[t]) if l in remaining]
        if not supp:
            continue
        component = set()
        stack = list(supp)
        while stack:
            l = stack.pop()
            if l in component:
                continue
            component.add(l)
            stack.extend(adjacency[l] - component)
        if not component <= remaining:
            raise ValueError("projection support straddles an earlier subsystem")
        labels = tuple(sorted(component, key=order.get))
        sub_rep = InducedRep(
            spec=rep.spec,
            character=rep.character,
            basis=labels,
            ops={g: m.restrict(labels, labels) for g, m in rep.ops.items()},
            interior=labels,
            meta=dict(rep.meta, generating_coset=t),
        )
        sub_proj = {}
        for s, E in sys.projections.items():
            se = E.restrict(labels, labels)
            if not se.is_zero():
                sub_proj[s] = se
        out.append((ImprimitivitySystem(sub_rep, sys.H, sub_proj,
                                        meta=dict(sys.meta, generating_coset=t)), t))
        remaining -= component
    if remaining:
        raise ValueError(f"labels {sorted(remaining, key=repr)!r} lie outside "
                         "every coset projection")
    return out
