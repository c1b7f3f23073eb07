"""Characters of the degree-zero subalgebra and the partial shift action.

Three families are covered: orbit characters of one-ladder shift algebras
(values x_k >= 0 along a recursion x_{k-1} = f(x_k)), characters (s, t) of
the commutative subalgebra of the two enveloping-algebra conventions, and
characters of abelian subgroup algebras inside finite group algebras.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import GradedAlgebraSpec, RationalFunction
from .groups import GroupSpec, Subgroup
from .scalars import Scalar
from .words import WordKey

EPS_ZERO = 1e-9

_Z = GroupSpec("free_abelian", rank=1)


def _fraction_sqrt(q: Fraction):
    """Exact square root of a nonnegative Fraction, or None."""
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def _snap(x: Scalar, eps: float) -> Scalar:
    """Collapse float noise to exact zero; exact scalars pass through."""
    if x.exact:
        return x
    if abs(complex(x)) <= eps:
        return Scalar.rational(0)
    return x


def _is_negative(x: Scalar, eps: float) -> bool:
    if x.exact:
        return x.is_real() and x.sign() < 0
    z = complex(x)
    return z.real < -eps


# ---------------------------------------------------------------------------
# shift-family orbits
# ---------------------------------------------------------------------------


@dataclass
class OrbitClass:
    kind: str  # finite_dim | fock | anti_fock | bilateral_periodic | bilateral_aperiodic
    K: int | None = None
    M: int | None = None
    period: int | None = None
    horizon: int | None = None

    def __str__(self) -> str:
        if self.kind == "finite_dim":
            return f"finite_dim(K={self.K}, M={self.M})"
        if self.kind == "fock":
            return f"fock(M={self.M})"
        if self.kind == "anti_fock":
            return f"anti_fock(K={self.K})"
        if self.kind == "bilateral_periodic":
            return f"bilateral_periodic(m={self.period})"
        return f"bilateral_aperiodic(horizon={self.horizon})"


@dataclass
class DynOrbit:
    """Nonnegative orbit x_k of the recursion x_{k-1} = f(x_k), seeded at k=0.

    Stored values occupy a contiguous explored range; a finite M means the
    forward weights vanish from position M-1 on (x_{M-1} = 0 is stored), a
    finite K means the backward value at position K is zero (not stored).
    A non-None defect marks an orbit that fails positivity and therefore
    does not define a positive character.
    """

    f: RationalFunction
    values: dict
    K: int | None = None  # None = no backward wall found
    M: int | None = None  # None = no forward wall found
    branch: tuple = ()
    defect: str | None = None
    eps: float = EPS_ZERO

    @property
    def lo(self) -> int:
        return min(self.values)

    @property
    def hi(self) -> int:
        return max(self.values)

    def x(self, k: int) -> Scalar:
        """Squared weight at position k; exact zero beyond a wall."""
        if self.M is not None and k >= self.M:
            return Scalar.rational(0)
        if self.K is not None and k <= self.K:
            return Scalar.rational(0)
        if k in self.values:
            return self.values[k]
        raise ValueError(f"position {k} exits the explored orbit window")

    def weight(self, k: int) -> Scalar:
        """lambda_k = sqrt(x_k)."""
        return self.x(k).sqrt()

    def is_exact(self) -> bool:
        return all(v.exact for v in self.values.values())

    def in_positive_dual(self) -> bool:
        return self.defect is None

    def is_defined(self, g: int) -> bool:
        """Whether the shifted character exists (g inside the open wall window)."""
        if self.defect is not None:
            return False
        if self.M is not None and g >= self.M:
            return False
        if self.K is not None and g <= self.K:
            return False
        return True

    def act(self, g: int) -> "DynOrbit | None":
        """Shift the character by g when defined; None otherwise."""
        if self.defect is not None:
            raise ValueError(f"orbit is not a positive character ({self.defect})")
        if not self.is_defined(g):
            return None
        return DynOrbit(
            f=self.f,
            values={k - g: v for k, v in self.values.items()},
            K=None if self.K is None else self.K - g,
            M=None if self.M is None else self.M - g,
            branch=self.branch,
            defect=None,
            eps=self.eps,
        )

    def same_character(self, other: "DynOrbit") -> bool:
        if self.K != other.K or self.M != other.M or self.f != other.f:
            return False
        if set(self.values) != set(other.values):
            return False
        return all(self.values[k] == other.values[k] for k in self.values)

    def detect_period(self) -> int | None:
        """Minimal period of the stored values, or None."""
        if self.K is not None or self.M is not None:
            return None
        lo, hi = self.lo, self.hi
        span = hi - lo + 1
        for m in range(1, span // 2 + 1):
            ok = True
            for k in range(lo, hi - m + 1):
                a, b = self.values[k], self.values[k + m]
                if a.exact and b.exact:
                    if a != b:
                        ok = False
                        break
                elif abs(complex(a) - complex(b)) > self.eps:
                    ok = False
                    break
            if ok:
                return m
        return None


def dyn_extend_orbit(
    f: RationalFunction,
    seed,
    back_steps: int,
    fwd_steps: int,
    branch_policy: str = "principal",
    eps: float = EPS_ZERO,
) -> list:
    """Grow the orbit of a real seed under x_{k-1} = f(x_k).

    Backward positions come from direct evaluation; forward positions from
    real roots of f(t) = x_k (largest root first).  One orbit per forward
    root sequence is returned under branch_policy='all'; the principal
    policy keeps only the largest-root choice at every step.  Negative
    values are stored but mark the orbit as defective, so it still defines
    a Hermitian form while failing positivity.
    """
    seed = _snap(Scalar.coerce(seed), eps)
    if not seed.is_real():
        raise ValueError("orbit seed must be real")
    seed_defect = "negative_seed" if _is_negative(seed, eps) else None

    # backward side is branch-free; negative values are stored but flagged,
    # so that Hermitian forms stay evaluable on non-positive characters
    back_values: dict = {}
    K = None
    defect = seed_defect
    cur = seed
    for step in range(1, back_steps + 1):
        try:
            nxt = _snap(f(cur), eps)
        except ZeroDivisionError as exc:
            raise ValueError(f"recursion hit a pole going backward: {exc}") from exc
        if nxt.is_zero():
            K = -step
            break
        if _is_negative(nxt, eps) and defect is None:
            defect = "negative_backward_value"
        back_values[-step] = nxt
        cur = nxt

    def forward_roots(x: Scalar) -> list:
        roots = [_snap(r, eps) for r in f.preimages(x)]
        uniq: dict = {}
        for r in sorted(roots, key=float, reverse=True):
            key = round(float(r), 12)
            uniq.setdefault(key, r)
        return list(uniq.values())  # descending, principal first

    # forward side: depth-first over root choices
    results = []
    stack = [({0: seed}, 0, (), None, None)]  # values, tip, branch, M, fdefect
    while stack:
        fwd_values, tip, branch, M, fdefect = stack.pop()
        if M is not None or tip >= fwd_steps:
            results.append((fwd_values, M, branch, fdefect))
            continue
        x = fwd_values[tip]
        if x.is_zero():
            results.append((fwd_values, tip + 1, branch, fdefect))
            continue
        try:
            roots = forward_roots(x)
        except ZeroDivisionError as exc:
            raise ValueError(f"recursion hit a pole going forward: {exc}") from exc
        if not roots:
            results.append((fwd_values, None, branch,
                            fdefect or "forward_stop_without_real_root"))
            continue
        if branch_policy == "principal":
            roots = roots[:1]
        for idx in range(len(roots) - 1, -1, -1):
            nv = dict(fwd_values)
            nv[tip + 1] = roots[idx]
            nd = fdefect
            if nd is None and _is_negative(roots[idx], eps):
                nd = "negative_forward_value"
            stack.append((nv, tip + 1, branch + (idx,), None, nd))

    orbits = []
    for fwd_values, M, branch, fdefect in sorted(results, key=lambda r: r[2]):
        values = dict(back_values)
        values.update(fwd_values)
        orbits.append(
            DynOrbit(
                f=f,
                values=values,
                K=K,
                M=M,
                branch=branch,
                defect=defect or fdefect,
                eps=eps,
            )
        )
    return orbits


def dyn_classify(orbit: DynOrbit) -> OrbitClass:
    """Window-shape classification of a consistent orbit."""
    if orbit.defect is not None:
        raise ValueError(f"orbit is not a positive character ({orbit.defect})")
    if orbit.K is not None and orbit.M is not None:
        return OrbitClass("finite_dim", K=orbit.K, M=orbit.M)
    if orbit.M is not None:
        return OrbitClass("fock", M=orbit.M)
    if orbit.K is not None:
        return OrbitClass("anti_fock", K=orbit.K)
    m = orbit.detect_period()
    if m is not None:
        return OrbitClass("bilateral_periodic", period=m)
    return OrbitClass("bilateral_aperiodic", horizon=orbit.hi)


def _walk_counts(w: WordKey) -> tuple:
    """Positions visited by the right-to-left ladder walk and the end offset."""
    counts: dict = {}
    pos = 0
    for name, star in reversed(tuple(w)):
        if name == "a":
            lowering = star
        elif name == "a*":
            lowering = not star
        else:
            raise ValueError(f"letter {name!r} is not a ladder generator")
        if lowering:
            counts[pos - 1] = counts.get(pos - 1, 0) + 1
            pos -= 1
        else:
            counts[pos] = counts.get(pos, 0) + 1
            pos += 1
    return counts, pos


def dyn_eval_word(orbit: DynOrbit, w: WordKey) -> Scalar:
    """Character value on a degree-zero ladder word via the weight walk."""
    _, degree = _walk_counts(w)
    if degree != 0:
        raise ValueError("character evaluation needs a degree-zero word")
    return dyn_walk_value(orbit, w)


def dyn_walk_value(orbit: DynOrbit, w: WordKey) -> Scalar:
    """Weight-walk product for a word of any degree (used by extensions)."""
    counts, _ = _walk_counts(w)
    value = Scalar.rational(1)
    odd = Scalar.rational(1)
    has_odd = False
    for k, c in counts.items():
        xk = orbit.x(k)
        if xk.is_zero():
            return Scalar.rational(0)
        value = value * xk ** (c // 2)
        if c % 2:
            odd = odd * xk
            has_odd = True
    if has_odd:
        value = value * odd.sqrt()
    return value


@dataclass
class PeriodicExtensionCharacter:
    """Extension of a periodic orbit character to its stabilizer.

    On a word of degree p*m the value is the weight-walk product times z^p,
    where z is a chosen unit-modulus twist.
    """

    orbit: DynOrbit
    period: int
    z: Scalar

    def __post_init__(self):
        self.z = Scalar.coerce(self.z)
        m = self.z * self.z.conjugate()
        unit = (m - Scalar.rational(1)).is_zero() if m.exact else abs(
            abs(complex(self.z)) - 1.0
        ) <= 1e-9
        if not unit:
            raise ValueError("twist must have unit modulus")

    def eval_word(self, w: WordKey) -> Scalar:
        counts, degree = _walk_counts(w)
        if degree % self.period:
            raise ValueError("word degree is not a multiple of the stabilizer period")
        p = degree // self.period
        value = dyn_walk_value(self.orbit, w)
        return value * self.z**p


# ---------------------------------------------------------------------------
# enveloping-algebra characters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sl2Character:
    """Character of the degree-zero subalgebra pinned by s (Casimir) and t (H)."""

    s: Fraction
    t: Fraction
    algebra: str  # "su2" | "su11"

    def __post_init__(self):
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "t", Fraction(self.t))
        if self.algebra not in ("su2", "su11"):
            raise ValueError("algebra must be su2 or su11")

    def h(self, n: int) -> Fraction:
        return self.t + 2 * n

    def weight(self, j: int) -> Fraction:
        """Squared ladder weight between positions j and j+1 (family sign)."""
        hj = self.t + 2 * j
        w = (self.s - hj * (hj + 2)) / 4
        return w if self.algebra == "su2" else -w

    def norm_sq(self, n: int) -> Fraction:
        """chi(a_n* a_n) for the canonical raising/lowering section."""
        if n >= 0:
            out = Fraction(1)
            for j in range(n):
                out *= self.weight(j)
            return out
        out = Fraction(1)
        for j in range(1, -n + 1):
            out *= self.weight(-j)
        return out


def _weight_zero_positions(c: Sl2Character) -> list:
    """Integer positions j with weight(j) = 0, found exactly."""
    u2 = 1 + c.s
    u = _fraction_sqrt(u2)
    if u is None:
        return []
    out = []
    for tau in (u, -u):
        j2 = tau - 1 - c.t
        if j2 % 2 == 0:
            out.append(int(j2 / 2))
    return sorted(set(out))


def sl2_definedness(c: Sl2Character) -> tuple:
    """(lo, hi) bounds of the shift-definedness set, None meaning unbounded."""
    zeros = _weight_zero_positions(c)
    fwd = [j for j in zeros if j >= 0]
    bwd = [j for j in zeros if j <= -1]
    hi = min(fwd) if fwd else None
    lo = max(bwd) + 1 if bwd else None
    return lo, hi


@dataclass
class Sl2Membership:
    verdict: bool
    witness: object = None  # su2: integer n; su11: (set tag, k)
    series: str | None = None
    violation: tuple | None = None  # (direction, k) with a negative product


def _scan_violation(c: Sl2Character) -> tuple:
    """Smallest k with a negative norm product, direction-tagged."""
    u = math.sqrt(max(float(1 + c.s), 0.0))
    bound = int(u) + int(abs(float(c.t))) + 4
    pf = Fraction(1)
    pb = Fraction(1)
    for k in range(1, bound + 1):
        pf *= c.weight(k - 1)
        if pf < 0:
            return ("forward", k)
        pb *= c.weight(-k)
        if pb < 0:
            return ("backward", k)
    raise AssertionError("no violation found for a non-member character")


def sl2_membership(c: Sl2Character) -> Sl2Membership:
    """Decide positivity of the character, with witness or violated index."""
    if c.algebra == "su2":
        u = _fraction_sqrt(1 + c.s)
        if (
            c.t.denominator == 1
            and u is not None
            and u.denominator == 1
            and u >= abs(c.t) + 1
            and (u - c.t - 1) % 2 == 0
        ):
            n = int((u - 1 - c.t) // 2)
            return Sl2Membership(True, witness=n, series="spin")
        return Sl2Membership(False, violation=_scan_violation(c))
    tag = _su11_region(c.s, c.t)
    if tag is not None:
        name, k = tag
        series = {
            "X0": "trivial",
            "X1": "principal",
            "X2": "supplementary",
            "X3": "discrete",
            "X4": "discrete",
        }[name]
        return Sl2Membership(True, witness=(name, k), series=series)
    return Sl2Membership(False, violation=_scan_violation(c))


def _su11_region(s: Fraction, t: Fraction):
    """Exact region tag (name, k) for a positive character, else None."""
    if s == 0 and t == 0:
        return ("X0", 0)
    k0 = math.floor(t / 2)
    bnd = (t - 2 * k0) * (t - 2 * (k0 + 1))
    if s < bnd:
        return ("X1", k0)
    if s == bnd:
        if t > 2 * k0:
            return ("X2", k0)
        # t = 2*k0 exactly: boundary point belongs to a wall family
        if k0 >= 1:
            return ("X3", k0 - 1)
        if k0 <= -1:
            return ("X4", k0)
        return None  # k0 = 0 is the (0,0) point handled above
    u = _fraction_sqrt(1 + s)
    if u is None:
        return None
    for tau in (u, -u):
        k2 = t - 1 - tau
        if k2 % 2 != 0:
            continue
        k = Fraction(k2, 2)
        if k.denominator != 1:
            continue
        k = int(k)
        if k >= 0 and t >= 2 * k + 2:
            return ("X3", k)
        if k <= -1 and t <= 2 * k:
            return ("X4", k)
    return None


def sl2_act(c: Sl2Character, n: int) -> Sl2Character | None:
    """Shift the character by n when the norm product is nonzero."""
    report = sl2_membership(c)
    if not report.verdict:
        raise ValueError(f"character is not positive (violation {report.violation})")
    lo, hi = sl2_definedness(c)
    if (lo is not None and n < lo) or (hi is not None and n > hi):
        return None
    return Sl2Character(c.s, c.t + 2 * n, c.algebra)


def _ladder_factor(c: Sl2Character, p: int) -> Fraction:
    """Lowering factor at position p in the formal weight module."""
    d0 = (c.s - c.t * (c.t - 2)) / 4
    return d0 - p * c.t - p * (p - 1)


def sl2_eval(c: Sl2Character, p, spec: GradedAlgebraSpec) -> Scalar:
    """chi o p_B on a polynomial, via the formal weight-module walk.

    E raises the position, H scales by t+2*position, F scales by the
    lowering factor and drops; only walks returning to position 0 survive
    the expectation.
    """
    p_norm = spec.normalize(p)
    total = Scalar.rational(0)
    for w, coeff in p_norm.terms.items():
        pos = 0
        fac = Fraction(1)
        for name, _ in reversed(w):
            if name == "E":
                pos += 1
            elif name == "H":
                fac *= c.t + 2 * pos
            elif name == "F":
                fac *= _ladder_factor(c, pos)
                pos -= 1
            else:
                raise ValueError(f"letter {name!r} is not an enveloping generator")
        if pos == 0:
            total = total + coeff * Scalar.rational(fac)
    return total


def sl2_eval_pbw(c: Sl2Character, p, spec: GradedAlgebraSpec) -> Scalar:
    """chi o p_B by full reordering to F..H..E words (slow dual route).

    Degree-zero ordered words F^a H^b E^a evaluate to chi(F^a E^a) (t+2a)^b;
    terms of nonzero degree are annihilated by the expectation.
    """
    from .algebra import sl2_normal_form

    ordered = sl2_normal_form(spec.normalize(p))
    total = Scalar.rational(0)
    for w, coeff in ordered.terms.items():
        names = [name for name, _ in w]
        nf = sum(1 for n in names if n == "F")
        nh = sum(1 for n in names if n == "H")
        ne = len(names) - nf - nh
        if names != ["F"] * nf + ["H"] * nh + ["E"] * ne:
            raise AssertionError("rewriting did not reach ordered form")
        if nf != ne:
            continue
        val = Fraction(1)
        for j in range(1, nf + 1):
            hj = c.t + 2 * (j - 1)
            val *= (c.s - hj * (hj + 2)) / 4
        val *= (c.t + 2 * nf) ** nh
        total = total + coeff * Scalar.rational(val)
    return total


# ---------------------------------------------------------------------------
# finite-group characters
# ---------------------------------------------------------------------------


@dataclass
class FiniteGroupCharacter:
    """Unit-modulus multiplicative character on the graded subgroup algebra."""

    spec: GradedAlgebraSpec
    values: dict  # subgroup element id -> Scalar

    def __post_init__(self):
        if self.spec.family != "group_algebra":
            raise ValueError("finite characters require a group-algebra build")
        G: GroupSpec = self.spec.payload["base_group"]
        H: Subgroup = self.spec.payload["subgroup"]
        members = sorted(H.members)
        if not all(G.mul(a, b) == G.mul(b, a) for a in members for b in members):
            raise ValueError("base subalgebra is not commutative")
        self.values = {h: Scalar.coerce(v) for h, v in self.values.items()}
        if set(self.values) != set(members):
            raise ValueError("character values must cover the subgroup exactly")
        if self.values[G.identity()] != Scalar.rational(1):
            raise ValueError("character must send the identity to 1")
        for h in members:
            if not (self.values[h] * self.values[h].conjugate() - Scalar.rational(1)).is_zero():
                raise ValueError("character values must have unit modulus")
            for k in members:
                if self.values[G.mul(h, k)] != self.values[h] * self.values[k]:
                    raise ValueError("character is not multiplicative")

    def section(self, q) -> int:
        """Smallest base-group element in the coset labeled q."""
        labels = self.spec.payload["labels"]
        for g in self.spec.payload["base_group"].elements():
            if labels[g] == q:
                return g
        raise ValueError(f"no coset labeled {q!r}")

    def act(self, q) -> "FiniteGroupCharacter":
        """Conjugated character chi^q(h) = chi(k^-1 h k) for a section k."""
        G: GroupSpec = self.spec.payload["base_group"]
        k = self.section(q)
        kin = G.inv(k)
        out = {h: self.values[G.mul(G.mul(kin, h), k)] for h in self.values}
        return FiniteGroupCharacter(self.spec, out)

    def same_character(self, other: "FiniteGroupCharacter") -> bool:
        return set(self.values) == set(other.values) and all(
            self.values[h] == other.values[h] for h in self.values
        )

    def eval_element(self, g: int) -> Scalar:
        """chi o p_B on a base-group element: 0 off the subgroup."""
        return self.values.get(g, Scalar.rational(0))

    def eval_poly(self, p) -> Scalar:
        folded = self.spec.fold(p)
        G: GroupSpec = self.spec.payload["base_group"]
        total = Scalar.rational(0)
        for w, c in folded.terms.items():
            g = G.identity() if not w else int(w[0][0][1:])
            total = total + c * self.eval_element(g)
        return total


# ---------------------------------------------------------------------------
# stabilizers, orbits, and the cone check
# ---------------------------------------------------------------------------


@dataclass
class StabilizerOrbitReport:
    family: str
    stabilizer: Subgroup
    orbit: list  # (group element, character)
    definedness: str


def stabilizer_and_orbit(character, depth: int = 10) -> StabilizerOrbitReport:
    """Stabilizer subgroup, reachable characters, and the definedness set."""
    if isinstance(character, DynOrbit):
        cls = dyn_classify(character)
        if cls.kind == "bilateral_periodic":
            stab = Subgroup(_Z, (cls.period,))
        else:
            stab = Subgroup(_Z, ())
        lo = character.K + 1 if character.K is not None else -depth
        hi = character.M - 1 if character.M is not None else depth
        sample = []
        for g in range(max(lo, -depth), min(hi, depth) + 1):
            shifted = character.act(g)
            if shifted is not None:
                sample.append((g, shifted))
        left = "-inf" if character.K is None else str(character.K)
        right = "+inf" if character.M is None else str(character.M)
        return StabilizerOrbitReport("dyn", stab, sample, f"{left} < n < {right}")
    if isinstance(character, Sl2Character):
        report = sl2_membership(character)
        if not report.verdict:
            raise ValueError("character is not positive")
        lo, hi = sl2_definedness(character)
        stab = Subgroup(_Z, ())
        sample = []
        for n in range(max(lo, -depth) if lo is not None else -depth,
                       (min(hi, depth) if hi is not None else depth) + 1):
            shifted = sl2_act(character, n)
            if shifted is not None:
                sample.append((n, shifted))
        left = "-inf" if lo is None else str(lo)
        right = "+inf" if hi is None else str(hi)
        return StabilizerOrbitReport("sl2", stab, sample, f"{left} <= n <= {right}")
    if isinstance(character, FiniteGroupCharacter):
        Q = character.spec.group
        stabilizing = [
            q for q in Q.elements() if character.act(q).same_character(character)
        ]
        stab = Subgroup(Q, tuple(stabilizing))
        sample = [(q, character.act(q)) for q in Q.elements()]
        return StabilizerOrbitReport(
            "group", stab, sample, "all of the grading group"
        )
    raise TypeError(f"unsupported character type {type(character).__name__}")


def weyl_cone_check(lam) -> tuple:
    """('positive', None) iff every falling factorial of lam is >= 0.

    Checks lam(lam-1)...(lam-k+1) for k = 1..ceil(lam)+1; nonnegative for all
    k exactly when lam is a nonnegative integer.
    """
    lam = Scalar.coerce(lam)
    if not lam.is_real():
        raise ValueError("cone check expects a real value")
    if lam.exact and lam.is_rational():
        lf = lam.as_fraction()
        kmax = max(1, math.ceil(lf) + 1)
        prod = Fraction(1)
        for k in range(1, kmax + 1):
            prod *= lf - (k - 1)
            if prod < 0:
                return ("violated", k)
        return ("positive", None)
    x = float(lam)
    if abs(x - round(x)) <= EPS_ZERO:
        x = float(round(x))
    kmax = max(1, math.ceil(x) + 1)
    prod = 1.0
    for k in range(1, kmax + 1):
        prod *= x - (k - 1)
        if prod < -EPS_ZERO:
            return ("violated", k)
        if abs(prod) <= EPS_ZERO:
            prod = 0.0
    return ("positive", None)
