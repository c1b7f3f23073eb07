"""Mode-algebra density matrices and lowest-weight Gram forms.

The bracket convention is [L_n, L_m] = (m-n) L_{n+m} + delta_{n,-m} (m^3-m)/12 C,
so L_k raises the L_0 eigenvalue by k and [L_{-k}, L_k] = 2k L_0 + (k^3-k)/12 C.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import virasoro_density_spec
from .induction import InducedRep
from .matrices import OperatorMatrix
from .scalars import Scalar


@dataclass(frozen=True)
class DensityParams:
    """Density-family parameters: real offset a, twist lam on the critical line."""

    a: Scalar
    lam: Scalar

    def __post_init__(self):
        a = Scalar.coerce(self.a)
        lam = Scalar.coerce(self.lam)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "lam", lam)
        if not a.is_real():
            raise ValueError("offset a must be real")
        re_twice = lam + lam.conjugate()
        if re_twice.exact:
            if re_twice != Scalar.rational(1):
                raise ValueError("Re(lam) must equal 1/2")
        elif abs(complex(re_twice) - 1) > 1e-12:
            raise ValueError("Re(lam) must equal 1/2")


def density_rep(params, window: tuple = (-50, 50), k_range: int = 5) -> InducedRep:
    """Banded L_k matrices acting by L_k w_n = (n + a + k*lam) w_{n+k}; C = 0."""
    if not isinstance(params, DensityParams):
        params = DensityParams(*params)
    lo, hi = window
    if hi <= lo:
        raise ValueError("window is empty")
    basis = list(range(lo, hi))
    spec = virasoro_density_spec(k_range)
    ops = {}
    for k in range(-k_range, k_range + 1):
        entries = {}
        for n in basis:
            if lo <= n + k < hi:
                val = Scalar.rational(n) + params.a + Scalar.rational(k) * params.lam
                if not val.is_zero():
                    entries[(n + k, n)] = val
        ops[f"L{k}"] = OperatorMatrix(basis, basis, entries)
    ops["C"] = OperatorMatrix.zero(basis)
    interior = tuple(range(lo + k_range, hi - k_range))
    return InducedRep(
        spec=spec,
        character=params,
        basis=tuple(basis),
        ops=ops,
        interior=interior,
        meta={
            "window": tuple(window),
            "k_range": k_range,
            "family": "virasoro_density",
            "gen_degrees": {name: (0 if name == "C" else int(name[1:])) for name in ops},
        },
    )


@dataclass(frozen=True)
class FqsPoint:
    n: int
    p: int
    q: int
    z: Fraction
    a: Fraction


def fqs_parameters(n_max: int) -> list:
    """Discrete-series candidates (z_n, a_n^{(p,q)}), exact rationals."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    out = []
    for n in range(2, n_max + 1):
        z = 1 - Fraction(6, n * (n + 1))
        for q in range(1, n):
            for p in range(0, q):
                a = Fraction((n * p + q) ** 2 - 1, 4 * n * (n + 1))
                out.append(FqsPoint(n, p, q, z, a))
    return out


# ---------------------------------------------------------------------------
# lowest-weight module straightening
# ---------------------------------------------------------------------------


def _act(n: int, mono: tuple, a: Fraction, z: Fraction) -> dict:
    """L_n applied to the ordered monomial L_{k1}...L_{km} v (k1 >= ... >= 1)."""
    if not mono:
        if n > 0:
            return {(n,): Fraction(1)}
        if n == 0:
            return {(): a}
        return {}
    k = mono[0]
    rest = mono[1:]
    if n >= k:
        return {(n,) + mono: Fraction(1)}
    out = {}
    # L_n L_k = L_k L_n + (k - n) L_{n+k} + delta_{n,-k} (k^3 - k)/12 z
    for m1, c1 in _act(n, rest, a, z).items():
        for m2, c2 in _act(k, m1, a, z).items():
            out[m2] = out.get(m2, Fraction(0)) + c1 * c2
    for m1, c1 in _act(n + k, rest, a, z).items():
        out[m1] = out.get(m1, Fraction(0)) + (k - n) * c1
    if n == -k:
        out[rest] = out.get(rest, Fraction(0)) + Fraction(k**3 - k, 12) * z
    return {m: c for m, c in out.items() if c}


def _lower(n: int, state: dict, a: Fraction, z: Fraction) -> dict:
    out = {}
    for mono, c in state.items():
        for m2, c2 in _act(n, mono, a, z).items():
            out[m2] = out.get(m2, Fraction(0)) + c * c2
    return {m: c for m, c in out.items() if c}


def level_partitions(level: int) -> list:
    """Descending partitions of the level, largest part first."""

    def gen(n, cap):
        if n == 0:
            yield ()
            return
        for k in range(min(n, cap), 0, -1):
            for rest in gen(n - k, k):
                yield (k,) + rest

    return list(gen(level, level))


def vir_level_gram(a, z, level: int) -> tuple:
    """Gram matrix of the level-`level` raised vectors over a lowest-weight vector.

    Returns (partitions, matrix) with exact Fraction entries; the pairing is
    <L_p v, L_q v> with L_0 v = a v and central value z.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    a = Fraction(a) if not isinstance(a, Fraction) else a
    z = Fraction(z) if not isinstance(z, Fraction) else z
    parts = level_partitions(level)
    gram = []
    for p in parts:
        row = []
        for q in parts:
            state = {q: Fraction(1)}
            for pi in p:
                state = _lower(-pi, state, a, z)
            row.append(state.get((), Fraction(0)))
        gram.append(tuple(row))
    return parts, tuple(gram)
