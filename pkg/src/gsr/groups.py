"""Grading groups: free abelian Z^d and finite groups given by tables.

Elements of a rank-1 free abelian group are plain ints; higher ranks use int
tuples. Finite group elements are ids 0..n-1 into a multiplication table that
is validated (associativity, identity, inverses) at construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "free_abelian" | "finite"
    rank: int = 1
    table: tuple[tuple[int, ...], ...] | None = None
    identity_index: int = 0

    def __post_init__(self):
        if self.kind == "finite":
            if self.table is None:
                raise ValueError("finite group needs a multiplication table")
            object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
            self._validate_table()
        elif self.kind == "free_abelian":
            if self.rank < 1:
                raise ValueError("free abelian rank must be >= 1")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    def _validate_table(self):
        t = self.table
        n = len(t)
        if any(len(row) != n for row in t):
            raise ValueError("multiplication table is not square")
        if any(x < 0 or x >= n for row in t for x in row):
            raise ValueError("table entries out of range")
        e = self.identity_index
        if any(t[e][g] != g or t[g][e] != g for g in range(n)):
            raise ValueError("identity index is not a two-sided identity")
        for g in range(n):
            if not any(t[g][h] == e and t[h][g] == e for h in range(n)):
                raise ValueError(f"element {g} has no two-sided inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if t[t[a][b]][c] != t[a][t[b][c]]:
                        raise ValueError("multiplication table is not associative")

    # --- element operations -------------------------------------------------

    def identity(self):
        if self.kind == "finite":
            return self.identity_index
        return 0 if self.rank == 1 else (0,) * self.rank

    def mul(self, g, h):
        if self.kind == "finite":
            return self.table[g][h]
        if self.rank == 1:
            return g + h
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        if self.kind == "finite":
            for h in range(len(self.table)):
                if self.table[g][h] == self.identity_index:
                    return h
            raise ValueError(f"no inverse for {g}")
        if self.rank == 1:
            return -g
        return tuple(-a for a in g)

    def power(self, g, n: int):
        out = self.identity()
        x = g if n >= 0 else self.inv(g)
        for _ in range(abs(n)):
            out = self.mul(out, x)
        return out

    def elements(self):
        if self.kind != "finite":
            raise ValueError("infinite group has no element list")
        return list(range(len(self.table)))

    @property
    def order(self) -> int:
        if self.kind != "finite":
            raise ValueError("infinite group")
        return len(self.table)

    def is_abelian(self) -> bool:
        if self.kind == "free_abelian":
            return True
        n = len(self.table)
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(n) for b in range(a))

    def check_element(self, g):
        if self.kind == "finite":
            if not isinstance(g, int) or not (0 <= g < len(self.table)):
                raise ValueError(f"{g!r} is not an element id of this group")
        elif self.rank == 1:
            if not isinstance(g, int):
                raise ValueError(f"{g!r} is not an integer degree")
        else:
            if not (isinstance(g, tuple) and len(g) == self.rank
                    and all(isinstance(a, int) for a in g)):
                raise ValueError(f"{g!r} is not a rank-{self.rank} degree")
        return g

    def subgroup(self, generators) -> "Subgroup":
        return Subgroup(self, tuple(generators))

    def same_group(self, other: "GroupSpec") -> bool:
        if self is other:
            return True
        return (
            self.kind == other.kind
            and self.rank == other.rank
            and self.table == other.table
        )


def _hnf_basis(vectors: list[tuple[int, ...]], rank: int) -> list[list[int]]:
    """Column-style Hermite reduction; returns a triangular basis by pivot row."""
    cols = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []
    for row in range(rank):
        cols = [c for c in cols if any(c)]
        pool = [c for c in cols if c[row] != 0]
        if not pool:
            continue
        while len(pool) > 1:
            pool.sort(key=lambda c: abs(c[row]))
            a, b = pool[0], pool[1]
            q = b[row] // a[row]
            for i in range(rank):
                b[i] -= q * a[i]
            pool = [c for c in pool if c[row] != 0]
        piv = pool[0]
        basis.append(piv)
        cols = [c for c in cols if c is not piv]
        for c in cols:
            if c[row] != 0:
                q = c[row] // piv[row]
                for i in range(rank):
                    c[i] -= q * piv[i]
    return basis


class Subgroup:
    """Subgroup generated by a set; closure is computed, never assumed."""

    def __init__(self, group: GroupSpec, generators: tuple):
        self.group = group
        self.generators = tuple(group.check_element(g) for g in generators)
        if group.kind == "finite":
            members = {group.identity_index}
            frontier = [group.identity_index]
            while frontier:
                g = frontier.pop()
                for s in self.generators:
                    x = group.mul(g, s)
                    if x not in members:
                        members.add(x)
                        frontier.append(x)
            self.members = frozenset(members)
        elif group.rank == 1:
            m = 0
            for g in self.generators:
                m = gcd(m, abs(g))
            self.modulus = m  # subgroup m*Z, 0 meaning the trivial subgroup
        else:
            self.basis = _hnf_basis([tuple(g) for g in self.generators], group.rank)

    def contains(self, g) -> bool:
        grp = self.group
        grp.check_element(g)
        if grp.kind == "finite":
            return g in self.members
        if grp.rank == 1:
            return g % self.modulus == 0 if self.modulus else g == 0
        v = list(g)
        for col in self.basis:
            row = next(i for i in range(grp.rank) if col[i] != 0)
            if v[row] % col[row] == 0:
                q = v[row] // col[row]
                for i in range(grp.rank):
                    v[i] -= q * col[i]
        return not any(v)

    def is_trivial(self) -> bool:
        if self.group.kind == "finite":
            return self.members == {self.group.identity_index}
        if self.group.rank == 1:
            return self.modulus == 0
        return not self.basis

    def coset_of(self, g):
        """Canonical label of the left coset gH."""
        grp = self.group
        grp.check_element(g)
        if grp.kind == "finite":
            return min(grp.mul(g, h) for h in self.members)
        if grp.rank == 1:
            return g % self.modulus if self.modulus else g
        raise NotImplementedError("coset labels for rank >= 2 lattices")

    def coset_labels(self):
        grp = self.group
        if grp.kind == "finite":
            return sorted({self.coset_of(g) for g in grp.elements()})
        if grp.rank == 1 and self.modulus:
            return list(range(self.modulus))
        raise ValueError("infinite coset space; labels come from the basis window")

    def is_normal(self) -> bool:
        grp = self.group
        if grp.kind != "finite":
            return True
        return all(grp.mul(grp.mul(g, h), grp.inv(g)) in self.members
                   for g in grp.elements() for h in self.members)

    def conjugate(self, f) -> "Subgroup":
        grp = self.group
        if grp.kind != "finite":
            return self
        gens = tuple(grp.mul(grp.mul(f, h), grp.inv(f)) for h in self.members)
        return Subgroup(grp, gens)

    def quotient(self) -> tuple[GroupSpec, dict]:
        """Quotient group by a normal subgroup; returns (Q, element -> label id)."""
        grp = self.group
        if grp.kind != "finite":
            if grp.rank == 1 and self.modulus:
                m = self.modulus
                table = tuple(tuple((a + b) % m for b in range(m)) for a in range(m))
                q = GroupSpec("finite", table=table, identity_index=0)
                return q, {"mod": m}
            raise NotImplementedError("quotient only for finite-index subgroups")
        if not self.is_normal():
            raise ValueError("subgroup is not normal; no quotient grading")
        reps = self.coset_labels()
        index = {rep: i for i, rep in enumerate(reps)}
        table = tuple(
            tuple(index[self.coset_of(grp.mul(a, b))] for b in reps) for a in reps
        )
        q = GroupSpec("finite", table=table,
                      identity_index=index[self.coset_of(grp.identity_index)])
        mapping = {g: index[self.coset_of(g)] for g in grp.elements()}
        return q, mapping


def group_from_permutations(perms: list[tuple[int, ...]]) -> tuple[GroupSpec, list]:
    """Finite group generated by permutations (tuples mapping i -> p[i]).

    Returns the GroupSpec and the element list (closure) in id order; the
    identity permutation gets id 0.
    """
    n = len(perms[0])
    ident = tuple(range(n))

    def compose(p, q):  # (p . q)(i) = p[q[i]]
        return tuple(p[q[i]] for i in range(n))

    elems = {ident}
    frontier = [ident]
    while frontier:
        p = frontier.pop()
        for q in perms:
            for r in (compose(p, q), compose(q, p)):
                if r not in elems:
                    elems.add(r)
                    frontier.append(r)
    ordered = [ident] + sorted(e for e in elems if e != ident)
    idx = {p: i for i, p in enumerate(ordered)}
    table = tuple(tuple(idx[compose(a, b)] for b in ordered) for a in ordered)
    return GroupSpec("finite", table=table, identity_index=0), ordered
