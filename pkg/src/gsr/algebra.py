"""Graded *-algebra descriptions and the structural operations on them.

A spec records a grading group, generators with degrees, a star map sending
each generator to (generator, phase), defining relations, and a family tag
with family-specific payload (the recursion function for shift families, the
(mu, q) parameters for the quantum disk, the underlying finite group for
group algebras, the mode cutoff for the density family).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .groups import GroupSpec, Subgroup
from .scalars import Scalar
from .words import EMPTY_WORD, NCPolynomial, WordKey, parse_poly

# ---------------------------------------------------------------------------
# dense univariate polynomial helpers over Fraction (ascending coefficients)
# ---------------------------------------------------------------------------


def _poly_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_eval(coeffs: list, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


def poly_sub(a: list, b: list) -> list:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] += ai
    for j, bj in enumerate(b):
        out[j] -= bj
    return _poly_trim(out)


def poly_scale(a: list, c) -> list:
    return _poly_trim([ai * c for ai in a])


@dataclass(frozen=True)
class RationalFunction:
    """Quotient of two Fraction-coefficient polynomials, ascending order."""

    num: tuple
    den: tuple

    def __init__(self, num, den=(1,)):
        num = tuple(Fraction(c) for c in num)
        den = tuple(Fraction(c) for c in den)
        while num and num[-1] == 0:
            num = num[:-1]
        while den and den[-1] == 0:
            den = den[:-1]
        if not den:
            raise ZeroDivisionError("zero denominator polynomial")
        if len(den) == 1:
            num = tuple(c / den[0] for c in num)
            den = (Fraction(1),)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    def __call__(self, x):
        """Evaluate at a Fraction or Scalar; raises ZeroDivisionError at poles."""
        if isinstance(x, (int, Fraction)):
            d = poly_eval(list(self.den), Fraction(x))
            if d == 0:
                raise ZeroDivisionError(f"pole of recursion function at {x}")
            return poly_eval(list(self.num), Fraction(x)) / d
        x = Scalar.coerce(x)
        num = Scalar.rational(0)
        for c in reversed(self.num):
            num = num * x + Scalar.rational(c)
        den = Scalar.rational(0)
        for c in reversed(self.den):
            den = den * x + Scalar.rational(c)
        if den.is_zero():
            raise ZeroDivisionError(f"pole of recursion function at {x}")
        return num / den

    def preimages(self, y: Scalar) -> list:
        """Real solutions t of f(t) = y, exact where the degree allows it.

        Returns Scalars sorted increasingly.  Linear and quadratic equations
        with rational data are solved exactly; higher degrees fall back to
        isolated real roots (rational ones kept exact).
        """
        y = Scalar.coerce(y)
        if y.is_rational():
            yf = y.as_fraction()
            cs = poly_sub(list(self.num), poly_scale(list(self.den), yf))
            return _real_roots_fraction(cs)
        # irrational target: numeric fallback on the float equation
        import numpy as np

        yv = complex(y)
        if abs(yv.imag) > 1e-12:
            return []
        coeffs = [float(c) for c in self.num]
        dens = [float(c) for c in self.den]
        m = max(len(coeffs), len(dens))
        coeffs += [0.0] * (m - len(coeffs))
        dens += [0.0] * (m - len(dens))
        eq = [c - yv.real * d for c, d in zip(coeffs, dens)]
        while eq and abs(eq[-1]) < 1e-14:
            eq.pop()
        if len(eq) <= 1:
            return []
        roots = np.roots(list(reversed(eq)))
        out = [Scalar.from_float(r.real) for r in roots if abs(r.imag) < 1e-9]
        return sorted(set(out), key=float)


def _real_roots_fraction(cs: list) -> list:
    """Real roots of a Fraction-coefficient polynomial as Scalars, ascending."""
    cs = _poly_trim(list(cs))
    if len(cs) <= 1:
        return []
    if len(cs) == 2:
        return [Scalar.rational(-cs[0] / cs[1])]
    if len(cs) == 3:
        c0, c1, c2 = cs
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return []
        half = Scalar.rational(Fraction(-c1, 2 * c2))
        rad = Scalar.radical(Fraction(1, 2 * c2), disc)
        if rad.sign() < 0:
            rad = -rad
        roots = [half - rad, half + rad]
        return sorted(set(roots), key=float)
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(cs))
    out = []
    for r in sympy.real_roots(sympy.Poly(expr, t)):
        if r.is_rational:
            out.append(Scalar.rational(Fraction(int(r.p), int(r.q))))
        else:
            out.append(Scalar.from_float(float(r.evalf(30))))
    return sorted(set(out), key=float)


# ---------------------------------------------------------------------------
# the spec proper
# ---------------------------------------------------------------------------


@dataclass
class GradedAlgebraSpec:
    family: str
    group: GroupSpec
    generators: dict  # name -> degree (a group element)
    star_map: dict  # name -> (name, Scalar phase)
    relations: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    # --- words ---------------------------------------------------------------

    @property
    def gen_names(self) -> list:
        return list(self.generators)

    def normalize_word(self, w: WordKey):
        """Resolve star flags through the star map; returns (word, phase)."""
        phase = Scalar.rational(1)
        out = []
        for name, star in w:
            if name not in self.generators:
                raise KeyError(f"unknown generator {name!r}")
            if star:
                img, c = self.star_map[name]
                phase = phase * c
                out.append((img, False))
            else:
                out.append((name, False))
        return tuple(out), phase

    def normalize(self, p: NCPolynomial) -> NCPolynomial:
        out: dict = {}
        for w, c in p.terms.items():
            nw, phase = self.normalize_word(w)
            cc = c * phase
            out[nw] = out.get(nw, Scalar.rational(0)) + cc
        return NCPolynomial(out)

    def parse(self, text: str) -> NCPolynomial:
        return self.normalize(parse_poly(text, self.gen_names))

    def involute(self, p: NCPolynomial) -> NCPolynomial:
        return self.normalize(p.involute())

    def degree_of(self, w: WordKey):
        """Degree of a word in the grading group (stars invert)."""
        g = self.group.identity()
        for name, star in w:
            if name not in self.generators:
                raise KeyError(f"unknown generator {name!r}")
            d = self.generators[name]
            if star:
                d = self.group.inv(d)
            g = self.group.mul(g, d)
        return g

    def check_homogeneity(self, p: NCPolynomial):
        """(is_homogeneous, common_degree_or_None) for a polynomial."""
        deg = None
        for w in p.terms:
            d = self.degree_of(w)
            if deg is None:
                deg = d
            elif d != deg:
                return False, None
        return True, deg

    def homogeneous_component(self, p: NCPolynomial, degree) -> NCPolynomial:
        return NCPolynomial(
            {w: c for w, c in p.terms.items() if self.degree_of(w) == degree}
        )

    # --- expectations ---------------------------------------------------------

    def conditional_expectation(self, p: NCPolynomial, sub: Subgroup) -> NCPolynomial:
        """Project onto the span of words whose degree lies in the subgroup."""
        if not sub.group.same_group(self.group):
            raise ValueError("subgroup does not live in the grading group")
        return NCPolynomial(
            {w: c for w, c in p.terms.items() if sub.contains(self.degree_of(w))}
        )

    def unit_expectation(self, p: NCPolynomial) -> NCPolynomial:
        """Projection onto the degree-identity component (the base subalgebra)."""
        return self.homogeneous_component(p, self.group.identity())

    def apply_auto(self, p: NCPolynomial, auto: dict) -> NCPolynomial:
        """Apply a generator substitution name -> (name, phase) to a polynomial."""
        p = self.normalize(p)
        out: dict = {}
        for w, c in p.terms.items():
            phase = c
            letters = []
            for name, _ in w:
                img, ph = auto[name]
                phase = phase * Scalar.coerce(ph)
                letters.append((img, False))
            nw = tuple(letters)
            out[nw] = out.get(nw, Scalar.rational(0)) + phase
        return NCPolynomial(out)

    def _check_star_auto(self, auto: dict) -> None:
        for name in self.generators:
            if name not in auto:
                raise ValueError(f"automorphism does not cover generator {name!r}")
            lhs = self.apply_auto(
                NCPolynomial.monomial(((name, True),)), auto
            )
            rhs = self.involute(
                self.apply_auto(NCPolynomial.monomial(((name, False),)), auto)
            )
            if lhs != rhs:
                raise ValueError(f"substitution is not a *-map at generator {name!r}")
        for rel in self.relations:
            img = self.apply_auto(rel, auto)
            if not in_span(img, self.relations):
                raise ValueError("substitution does not preserve the relation ideal")

    def finite_average_expectation(self, p: NCPolynomial, autos: list) -> NCPolynomial:
        """Average over a finite family of grading-compatible *-automorphisms."""
        if not autos:
            raise ValueError("empty automorphism family")
        norm_autos = []
        for auto in autos:
            auto = {k: (v if isinstance(v, tuple) else (v, 1)) for k, v in auto.items()}
            auto = {k: (n, Scalar.coerce(c)) for k, (n, c) in auto.items()}
            self._check_star_auto(auto)
            norm_autos.append(auto)
        total = NCPolynomial.zero()
        for auto in norm_autos:
            total = total + self.apply_auto(p, auto)
        return total.scale(Fraction(1, len(norm_autos)))

    # --- group-algebra folding -------------------------------------------------

    def fold(self, p: NCPolynomial) -> NCPolynomial:
        """Multiply out group-element letters (group algebras only)."""
        if self.family != "group_algebra":
            return self.normalize(p)
        G: GroupSpec = self.payload["base_group"]
        p = self.normalize(p)
        out: dict = {}
        for w, c in p.terms.items():
            g = G.identity()
            for name, _ in w:
                g = G.mul(g, int(name[1:]))
            nw = EMPTY_WORD if g == G.identity() else ((f"g{g}", False),)
            out[nw] = out.get(nw, Scalar.rational(0)) + c
        return NCPolynomial(out)


def in_span(p: NCPolynomial, basis: list) -> bool:
    """Exact membership of p in the linear span of the basis polynomials."""
    rows = [dict(b.terms) for b in basis if not b.is_zero()]
    target = dict(p.terms)
    pivots = []
    reduced = []
    for row in rows:
        row = dict(row)
        for pw, prow in zip(pivots, reduced):
            if pw in row:
                factor = row[pw]
                for w, c in prow.items():
                    row[w] = row.get(w, Scalar.rational(0)) - factor * c
                row = {w: c for w, c in row.items() if not c.is_zero()}
        if not row:
            continue
        pw = min(row)
        inv = row[pw].inverse()
        row = {w: c * inv for w, c in row.items()}
        pivots.append(pw)
        reduced.append(row)
    for pw, prow in zip(pivots, reduced):
        if pw in target:
            factor = target[pw]
            for w, c in prow.items():
                target[w] = target.get(w, Scalar.rational(0)) - factor * c
            target = {w: c for w, c in target.items() if not c.is_zero()}
    return not target


# ---------------------------------------------------------------------------
# rewriting and the shift-family normal form
# ---------------------------------------------------------------------------


def rewrite_fixpoint(p: NCPolynomial, rules: dict) -> NCPolynomial:
    """Exhaustively apply adjacent-pair rewriting rules (must terminate).

    Intermediate terms with equal words are merged so shared rewriting paths
    are walked once.
    """
    pending = dict(p.terms)
    out: dict = {}
    while pending:
        w, c = pending.popitem()
        if c.is_zero():
            continue
        for i in range(len(w) - 1):
            key = (w[i][0], w[i + 1][0])
            if key in rules:
                for rw, rc in rules[key].terms.items():
                    nw = w[:i] + rw + w[i + 2 :]
                    pending[nw] = pending.get(nw, Scalar.rational(0)) + c * rc
                break
        else:
            out[w] = out.get(w, Scalar.rational(0)) + c
    return NCPolynomial(out)


WEYL_RULES = {
    ("a", "a*"): NCPolynomial(
        {(("a*", False), ("a", False)): Scalar.rational(1), EMPTY_WORD: Scalar.rational(1)}
    )
}

SL2_RULES = {
    ("E", "F"): NCPolynomial(
        {(("F", False), ("E", False)): Scalar.rational(1), (("H", False),): Scalar.rational(1)}
    ),
    ("E", "H"): NCPolynomial(
        {(("H", False), ("E", False)): Scalar.rational(1), (("E", False),): Scalar.rational(-2)}
    ),
    ("H", "F"): NCPolynomial(
        {(("F", False), ("H", False)): Scalar.rational(1), (("F", False),): Scalar.rational(-2)}
    ),
}


def _falling_factorial(s: int) -> list:
    """Coefficients of N(N-1)...(N-s+1), ascending, as Fractions."""
    out = [Fraction(1)]
    for j in range(s):
        out = poly_mul(out, [Fraction(-j), Fraction(1)])
    return out


def _poly_shift(coeffs: list, shift: Fraction) -> list:
    """Coefficients of p(N + shift) from those of p(N)."""
    out = [Fraction(0)]
    power = [Fraction(1)]
    base = [shift, Fraction(1)]
    for c in coeffs:
        out = poly_sub(out, poly_scale(power, -c))
        power = poly_mul(power, base)
    return _poly_trim(out)


def weyl_normal_form(spec: GradedAlgebraSpec, p: NCPolynomial) -> dict:
    """Resolve a ladder-pair polynomial into {shift d: coefficients in N}.

    The value at key d >= 0 is the ascending coefficient list (Scalars) of
    f_d with the term contributing a^d f_d(N); key d < 0 contributes
    (a*)^{|d|} f_d(N).  N denotes a*a.
    """
    if spec.family not in ("weyl",):
        raise ValueError("normal form is defined for the canonical-pair family")
    p = spec.normalize(p)
    ordered = rewrite_fixpoint(p, WEYL_RULES)
    out: dict = {}
    for w, c in ordered.terms.items():
        s = sum(1 for name, _ in w if name == "a*")
        r = len(w) - s
        if any(name == "a" for name, _ in w[:s]) or any(
            name == "a*" for name, _ in w[s:]
        ):
            raise AssertionError("rewriting did not reach star-left order")
        d = r - s
        m = min(r, s)
        coeffs = _falling_factorial(m)
        if d > 0:
            coeffs = _poly_shift(coeffs, Fraction(-d))
        acc = out.setdefault(d, {})
        for j, cf in enumerate(coeffs):
            acc[j] = acc.get(j, Scalar.rational(0)) + c * Scalar.rational(cf)
    final = {}
    for d, acc in out.items():
        top = max(acc) if acc else 0
        coeffs = [acc.get(j, Scalar.rational(0)) for j in range(top + 1)]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if coeffs:
            final[d] = coeffs
    return final


def weyl_normal_form_poly(spec: GradedAlgebraSpec, nf: dict) -> NCPolynomial:
    """Reassemble a normal form back into a polynomial (for round trips)."""
    A = NCPolynomial.monomial((("a", False),))
    As = NCPolynomial.monomial((("a*", False),))
    N = As * A
    total = NCPolynomial.zero()
    for d, coeffs in nf.items():
        fN = NCPolynomial.zero()
        Np = NCPolynomial.one()
        for c in coeffs:
            fN = fN + Np.scale(c)
            Np = Np * N
        head = NCPolynomial.one()
        step = A if d >= 0 else As
        for _ in range(abs(d)):
            head = head * step
        total = total + head * fN
    return total


def sl2_normal_form(p: NCPolynomial) -> NCPolynomial:
    """Rewrite an enveloping-algebra polynomial into F-then-H-then-E order."""
    return rewrite_fixpoint(p, SL2_RULES)


# ---------------------------------------------------------------------------
# family constructors
# ---------------------------------------------------------------------------


def _shift_relation(f: RationalFunction) -> NCPolynomial:
    A = NCPolynomial.monomial((("a", False),))
    As = NCPolynomial.monomial((("a*", False),))
    N = As * A
    pN = NCPolynomial.zero()
    qN = NCPolynomial.zero()
    Np = NCPolynomial.one()
    for i in range(max(len(f.num), len(f.den))):
        if i < len(f.num):
            pN = pN + Np.scale(f.num[i])
        if i < len(f.den):
            qN = qN + Np.scale(f.den[i])
        Np = Np * N
    return A * As * qN - pN


def dynamical_spec(f: RationalFunction, family: str = "dynamical", payload=None) -> GradedAlgebraSpec:
    """Shift algebra with one ladder pair and recursion aa* = f(a*a)."""
    spec = GradedAlgebraSpec(
        family=family,
        group=GroupSpec("free_abelian", rank=1),
        generators={"a": 1, "a*": -1},
        star_map={"a": ("a*", Scalar.rational(1)), "a*": ("a", Scalar.rational(1))},
        payload={"f": f, **(payload or {})},
    )
    spec.relations = [_shift_relation(f)]
    return spec


def weyl_spec() -> GradedAlgebraSpec:
    return dynamical_spec(RationalFunction([1, 1]), family="weyl")


def quantum_disk_spec(mu, q) -> GradedAlgebraSpec:
    """Quantum-disk shift algebra; parameters pinned to [0,1]x[0,1] minus (0,1)."""
    mu, q = Fraction(mu), Fraction(q)
    if not (0 <= mu <= 1 and 0 <= q <= 1):
        raise ValueError("parameters must lie in the unit square")
    if mu == 0 and q == 1:
        raise ValueError("parameter pair (0, 1) is excluded")
    f = RationalFunction([1 - q - mu, q + mu], [1 - mu, mu])
    return dynamical_spec(f, family="quantum_disk", payload={"mu": mu, "q": q})


def _sl2_spec(family: str, estar_sign: int) -> GradedAlgebraSpec:
    sgn = Scalar.rational(estar_sign)
    spec = GradedAlgebraSpec(
        family=family,
        group=GroupSpec("free_abelian", rank=1),
        generators={"E": 1, "F": -1, "H": 0},
        star_map={"E": ("F", sgn), "F": ("E", sgn), "H": ("H", Scalar.rational(1))},
    )
    E = NCPolynomial.monomial((("E", False),))
    F = NCPolynomial.monomial((("F", False),))
    H = NCPolynomial.monomial((("H", False),))
    spec.relations = [
        H * E - E * H - E.scale(2),
        H * F - F * H + F.scale(2),
        E * F - F * E - H,
    ]
    return spec


def su2_spec() -> GradedAlgebraSpec:
    return _sl2_spec("su2", 1)


def su11_spec() -> GradedAlgebraSpec:
    return _sl2_spec("su11", -1)


def casimir_poly() -> NCPolynomial:
    """2(EF + FE) + H^2 as a polynomial."""
    E = NCPolynomial.monomial((("E", False),))
    F = NCPolynomial.monomial((("F", False),))
    H = NCPolynomial.monomial((("H", False),))
    return (E * F + F * E).scale(2) + H * H


def virasoro_density_spec(k_range: int) -> GradedAlgebraSpec:
    """Mode algebra with brackets [L_n, L_m] = (m-n) L_{n+m} + central cubic term."""
    if k_range < 1:
        raise ValueError("mode cutoff must be at least 1")
    names = [f"L{k}" for k in range(-k_range, k_range + 1)] + ["C"]
    gens = {f"L{k}": k for k in range(-k_range, k_range + 1)}
    gens["C"] = 0
    star = {f"L{k}": (f"L{-k}", Scalar.rational(1)) for k in range(-k_range, k_range + 1)}
    star["C"] = ("C", Scalar.rational(1))
    spec = GradedAlgebraSpec(
        family="virasoro_density",
        group=GroupSpec("free_abelian", rank=1),
        generators=gens,
        star_map=star,
        payload={"k_range": k_range},
    )

    def L(k):
        return NCPolynomial.monomial(((f"L{k}", False),))

    C = NCPolynomial.monomial((("C", False),))
    rels = []
    for n in range(-k_range, k_range + 1):
        for m in range(-k_range, k_range + 1):
            if n >= m:
                continue
            if abs(n + m) > k_range:
                continue
            r = L(n) * L(m) - L(m) * L(n) - L(n + m).scale(m - n)
            if n + m == 0:
                r = r - C.scale(Fraction(m**3 - m, 12))
            rels.append(r)
        rels.append(L(n) * C - C * L(n))
    spec.relations = rels
    return spec


def group_algebra_spec(G: GroupSpec, normal_subgroup: Subgroup) -> GradedAlgebraSpec:
    """Group algebra of a finite group graded by the quotient modulo the subgroup."""
    if G.kind != "finite":
        raise ValueError("group algebra construction expects a finite group")
    if not normal_subgroup.is_normal():
        raise ValueError("grading requires a normal subgroup")
    quotient, labels = normal_subgroup.quotient()
    gens = {f"g{i}": labels[i] for i in G.elements()}
    star = {f"g{i}": (f"g{G.inv(i)}", Scalar.rational(1)) for i in G.elements()}
    spec = GradedAlgebraSpec(
        family="group_algebra",
        group=quotient,
        generators=gens,
        star_map=star,
        payload={
            "base_group": G,
            "subgroup": normal_subgroup,
            "labels": labels,
        },
    )
    rels = []
    for i in G.elements():
        for j in G.elements():
            prod = G.mul(i, j)
            target = (
                NCPolynomial.one()
                if prod == G.identity()
                else NCPolynomial.monomial(((f"g{prod}", False),))
            )
            rels.append(
                NCPolynomial.monomial(((f"g{i}", False), (f"g{j}", False))) - target
            )
    rels.append(NCPolynomial.monomial(((f"g{G.identity()}", False),)) - NCPolynomial.one())
    spec.relations = rels
    return spec


def custom_spec(generators: dict, star_map: dict, relations=None, group=None) -> GradedAlgebraSpec:
    """Free construction: caller supplies degrees, star pairs and relations."""
    group = group or GroupSpec("free_abelian", rank=1)
    star = {}
    for name, v in star_map.items():
        if isinstance(v, tuple):
            star[name] = (v[0], Scalar.coerce(v[1]))
        else:
            star[name] = (v, Scalar.rational(1))
    spec = GradedAlgebraSpec(
        family="custom",
        group=group,
        generators=dict(generators),
        star_map=star,
        relations=list(relations or []),
    )
    return spec
