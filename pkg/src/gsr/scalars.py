"""Exact-first scalar arithmetic.

A :class:`Scalar` is either exact — a value u + v*sqrt(d) with u, v Gaussian
rationals and d a nonnegative rational radicand — or an approximate complex
float. Exact values stay exact under *, /, conjugation and same-radicand sums;
a sum that would need two independent radicands demotes to approx (the
provenance flag records this). Square roots of nonnegative rationals are
always exact, which is what keeps weighted-shift entries like sqrt(3)/2 and
roots of unity like (1+i)/sqrt(2) exact end to end.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Union

_ZERO = Fraction(0)
_ONE = Fraction(1)

RationalLike = Union[int, str, Fraction]


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact; use Scalar.from_float")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _square_part(n: int) -> tuple[int, int]:
    """n = s**2 * d with d square-reduced; returns (s, d). n must be >= 0."""
    if n in (0, 1):
        return 1, n
    s = 1
    d = n
    p = 2
    while p * p <= d and p <= 1000:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        p += 1 if p == 2 else 2
    # catch a leftover perfect square beyond the trial bound
    r = math.isqrt(d)
    if r * r == d:
        return s * r, 1
    return s, d


def _is_square(q: Fraction) -> Fraction | None:
    """Return sqrt(q) if q is the square of a rational, else None."""
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


# Gaussian-rational helpers; a Gaussian rational is a (re, im) Fraction pair.

def _gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gscale(a, q: Fraction):
    return (a[0] * q, a[1] * q)


def _gconj(a):
    return (a[0], -a[1])


def _gneg(a):
    return (-a[0], -a[1])


def _ginv(a):
    n = a[0] * a[0] + a[1] * a[1]
    if n == 0:
        raise ZeroDivisionError("division by zero Scalar")
    return (a[0] / n, -a[1] / n)


def _gzero(a) -> bool:
    return a[0] == 0 and a[1] == 0


def _gfloat(a) -> complex:
    return complex(a[0]) + 1j * complex(a[1])


class Scalar:
    """Immutable exact-or-float scalar; see module docstring."""

    __slots__ = ("u", "v", "d", "exact", "_approx")

    def __init__(self, u=( _ZERO, _ZERO), v=(_ZERO, _ZERO), d=_ONE, *,
                 exact=True, approx=None):
        if exact:
            d = Fraction(d)
            if d < 0:
                raise ValueError("radicand must be nonnegative")
            # normalize: pull square factors out of the radicand
            if not _gzero(v) and d != 0:
                sn, dn = _square_part(d.numerator)
                sd, dd = _square_part(d.denominator)
                if (sn, sd) != (1, 1):
                    v = _gscale(v, Fraction(sn, sd))
                    d = Fraction(dn, dd)
            if _gzero(v) or d == 0:
                v, d = (_ZERO, _ZERO), _ONE
            elif d == 1:
                u, v, d = _gadd(u, v), (_ZERO, _ZERO), _ONE
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
            object.__setattr__(self, "d", d)
            object.__setattr__(self, "exact", True)
            object.__setattr__(self, "_approx", None)
        else:
            object.__setattr__(self, "u", (_ZERO, _ZERO))
            object.__setattr__(self, "v", (_ZERO, _ZERO))
            object.__setattr__(self, "d", _ONE)
            object.__setattr__(self, "exact", False)
            object.__setattr__(self, "_approx", complex(approx))

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    @property
    def approx(self) -> complex:
        # Computed lazily so exact arithmetic never converts intermediates
        # (which can exceed float range) to floating point.
        z = self._approx
        if z is None:
            z = _gfloat(self.u) + _gfloat(self.v) * math.sqrt(self.d) if not _gzero(self.v) else _gfloat(self.u)
            object.__setattr__(self, "_approx", z)
        return z

    # --- constructors -----------------------------------------------------

    @classmethod
    def rational(cls, x: RationalLike) -> "Scalar":
        return cls(u=(_as_fraction(x), _ZERO))

    @classmethod
    def gaussian(cls, re: RationalLike, im: RationalLike = 0) -> "Scalar":
        return cls(u=(_as_fraction(re), _as_fraction(im)))

    @classmethod
    def radical(cls, coeff: RationalLike, radicand: RationalLike) -> "Scalar":
        """coeff * sqrt(radicand), both rational, radicand >= 0."""
        r = _as_fraction(radicand)
        if r < 0:
            raise ValueError("radicand must be nonnegative")
        return cls(v=(_as_fraction(coeff), _ZERO), d=r)

    @classmethod
    def from_float(cls, z) -> "Scalar":
        return cls(exact=False, approx=complex(z))

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction, str)):
            return cls.rational(x)
        if isinstance(x, (float, complex)):
            return cls.from_float(x)
        raise TypeError(f"cannot coerce {x!r} to Scalar")

    @classmethod
    def root_of_unity(cls, num: int, den: int) -> "Scalar":
        """exp(2*pi*i*num/den); exact whenever den divides 8 or 12."""
        num %= den
        g = math.gcd(num, den) or 1
        num, den = num // g, den // g
        table = {
            (0, 1): cls.rational(1),
            (1, 2): cls.rational(-1),
            (1, 4): cls.gaussian(0, 1),
            (3, 4): cls.gaussian(0, -1),
            (1, 8): cls(v=(Fraction(1, 2), Fraction(1, 2)), d=Fraction(2)),
            (3, 8): cls(v=(Fraction(-1, 2), Fraction(1, 2)), d=Fraction(2)),
            (5, 8): cls(v=(Fraction(-1, 2), Fraction(-1, 2)), d=Fraction(2)),
            (7, 8): cls(v=(Fraction(1, 2), Fraction(-1, 2)), d=Fraction(2)),
            (1, 3): cls(u=(Fraction(-1, 2), _ZERO), v=(_ZERO, Fraction(1, 2)), d=Fraction(3)),
            (2, 3): cls(u=(Fraction(-1, 2), _ZERO), v=(_ZERO, Fraction(-1, 2)), d=Fraction(3)),
            (1, 6): cls(u=(Fraction(1, 2), _ZERO), v=(_ZERO, Fraction(1, 2)), d=Fraction(3)),
            (5, 6): cls(u=(Fraction(-1, 2), _ZERO), v=(_ZERO, Fraction(1, 2)), d=Fraction(3)),
        }
        val = table.get((num, den))
        if val is not None:
            return val
        if den == 12:
            half = Fraction(1, 2)
            c, s = {
                1: (half, half), 5: (-half, half), 7: (-half, -half), 11: (half, -half),
            }.get(num, (None, None))
            if c is not None:
                # cos = ±sqrt(3)/2, sin = ±1/2 at num in {1,5,7,11}
                return cls(u=(_ZERO, s), v=(c, _ZERO), d=Fraction(3))
        return cls.from_float(cmath.exp(2j * cmath.pi * num / den))

    # --- predicates & accessors -------------------------------------------

    def is_zero(self) -> bool:
        if self.exact:
            return _gzero(self.u) and _gzero(self.v)
        return self.approx == 0

    def is_rational(self) -> bool:
        return self.exact and _gzero(self.v) and self.u[1] == 0

    def is_real(self) -> bool:
        if self.exact:
            return self.u[1] == 0 and self.v[1] == 0
        return self.approx.imag == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not an exact real rational")
        return self.u[0]

    def __complex__(self) -> complex:
        return self.approx

    def __float__(self) -> float:
        z = self.approx
        if z.imag != 0:
            raise ValueError(f"{self} is not real")
        return z.real

    # --- arithmetic --------------------------------------------------------

    def _demoted(self) -> "Scalar":
        return Scalar(exact=False, approx=self.approx)

    def __add__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        if not (self.exact and other.exact):
            return Scalar(exact=False, approx=self.approx + other.approx)
        if _gzero(self.v):
            return Scalar(u=_gadd(self.u, other.u), v=other.v, d=other.d)
        if _gzero(other.v):
            return Scalar(u=_gadd(self.u, other.u), v=self.v, d=self.d)
        if self.d == other.d:
            return Scalar(u=_gadd(self.u, other.u), v=_gadd(self.v, other.v), d=self.d)
        rho = _is_square(other.d / self.d)
        if rho is not None:
            return Scalar(u=_gadd(self.u, other.u),
                          v=_gadd(self.v, _gscale(other.v, rho)), d=self.d)
        return Scalar(exact=False, approx=self.approx + other.approx)

    def __radd__(self, other) -> "Scalar":
        return Scalar.coerce(other) + self

    def __neg__(self) -> "Scalar":
        if not self.exact:
            return Scalar(exact=False, approx=-self.approx)
        return Scalar(u=_gneg(self.u), v=_gneg(self.v), d=self.d)

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        if not (self.exact and other.exact):
            return Scalar(exact=False, approx=self.approx * other.approx)
        u1, v1, d1 = self.u, self.v, self.d
        u2, v2, d2 = other.u, other.v, other.d
        if _gzero(v1):
            return Scalar(u=_gmul(u1, u2), v=_gmul(u1, v2), d=d2)
        if _gzero(v2):
            return Scalar(u=_gmul(u1, u2), v=_gmul(u2, v1), d=d1)
        if d1 == d2:
            return Scalar(u=_gadd(_gmul(u1, u2), _gscale(_gmul(v1, v2), d1)),
                          v=_gadd(_gmul(u1, v2), _gmul(u2, v1)), d=d1)
        rho = _is_square(d2 / d1)
        if rho is not None:
            v2d1 = _gscale(v2, rho)  # v2*sqrt(d2) == v2*rho*sqrt(d1)
            return Scalar(u=_gadd(_gmul(u1, u2), _gscale(_gmul(v1, v2d1), d1)),
                          v=_gadd(_gmul(u1, v2d1), _gmul(u2, v1)), d=d1)
        if _gzero(u1) and _gzero(u2):
            return Scalar(v=_gmul(v1, v2), d=d1 * d2)
        return Scalar(exact=False, approx=self.approx * other.approx)

    def __rmul__(self, other) -> "Scalar":
        return Scalar.coerce(other) * self

    def inverse(self) -> "Scalar":
        if not self.exact:
            return Scalar(exact=False, approx=1 / self.approx)
        if self.is_zero():
            raise ZeroDivisionError("division by zero Scalar")
        if _gzero(self.v):
            return Scalar(u=_ginv(self.u))
        # 1/(u + v sqrt d) = (u - v sqrt d) / (u^2 - v^2 d)
        n = _gsub(_gmul(self.u, self.u), _gscale(_gmul(self.v, self.v), self.d))
        if _gzero(n):
            # can only happen when u = v = 0, excluded above
            raise ZeroDivisionError("division by zero Scalar")
        ninv = _ginv(n)
        return Scalar(u=_gmul(self.u, ninv), v=_gneg(_gmul(self.v, ninv)), d=self.d)

    def __truediv__(self, other) -> "Scalar":
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            raise TypeError("Scalar powers must be integers")
        if n < 0:
            return self.inverse() ** (-n)
        out = None
        base = self
        while True:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if not n:
                break
            base = base * base
        return Scalar.rational(1) if out is None else out

    def conjugate(self) -> "Scalar":
        if not self.exact:
            return Scalar(exact=False, approx=self.approx.conjugate())
        return Scalar(u=_gconj(self.u), v=_gconj(self.v), d=self.d)

    def abs2(self) -> "Scalar":
        """|s|^2; exact when s is exact."""
        return self * self.conjugate()

    def sqrt(self) -> "Scalar":
        """Exact for nonnegative real rationals, approx otherwise."""
        if self.is_rational():
            q = self.u[0]
            if q >= 0:
                return Scalar(v=(Fraction(1, q.denominator), _ZERO),
                              d=Fraction(q.numerator * q.denominator))
        return Scalar(exact=False, approx=cmath.sqrt(self.approx))

    # --- ordering (real values) --------------------------------------------

    def sign(self) -> int:
        """Sign of a real scalar value; exact for exact inputs."""
        if not self.is_real():
            raise ValueError(f"{self} is not real")
        if not self.exact:
            return (self.approx.real > 0) - (self.approx.real < 0)
        a, b = self.u[0], self.v[0]
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
        if sa == sb:
            return sa
        # opposite signs: compare a^2 with b^2 d (cannot tie: d is not a square)
        return sa if a * a > b * b * self.d else sb

    def _cmp(self, other) -> int:
        other = Scalar.coerce(other)
        diff = self - other
        if diff.exact:
            return diff.sign()
        x, y = self.approx, other.approx
        if x.imag != 0 or y.imag != 0:
            raise ValueError("ordering is defined for real scalars only")
        return (x.real > y.real) - (x.real < y.real)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # --- equality / hashing / repr -----------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Scalar, int, Fraction, float, complex, str)):
            return NotImplemented
        other = Scalar.coerce(other)
        if self.exact and other.exact:
            diff = self - other
            if diff.exact:
                return diff.is_zero()
            return False  # independent radicands never cancel
        return self.approx == other.approx

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self.exact:
            if _gzero(self.v):
                return hash(("scalar", self.u))
            return hash(("scalar", self.u, self.v, self.d))
        return hash(("scalar~", self.approx))

    def __repr__(self) -> str:
        if not self.exact:
            return f"Scalar~({self.approx})"
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self.exact:
            return str(self.approx)

        def gstr(g):
            re, im = g
            if im == 0:
                return str(re)
            if re == 0:
                return f"{im}i"
            op = "+" if im > 0 else "-"
            return f"({re}{op}{abs(im)}i)"

        if _gzero(self.v):
            return gstr(self.u)
        rad = f"sqrt({self.d})"
        vs = gstr(self.v)
        part = rad if vs == "1" else (f"-{rad}" if vs == "-1" else f"{vs}*{rad}")
        if _gzero(self.u):
            return part
        return f"{gstr(self.u)}+{part}" if not part.startswith("-") else f"{gstr(self.u)}{part}"


ZERO = Scalar.rational(0)
ONE = Scalar.rational(1)
I = Scalar.gaussian(0, 1)


def abs_key(s: Scalar) -> float:
    """Float magnitude, for choosing max-residual witnesses."""
    return abs(s.approx)
