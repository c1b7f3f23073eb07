"""Words and noncommutative polynomials over a generator alphabet.

A letter is a (generator name, star flag) pair; a word is a tuple of letters.
Star flags are transient: algebra specs resolve them through their star map
(e.g. a* is itself a generator for shift families, E* is +/-F for the
enveloping-algebra families), after which polynomials contain unstarred
letters only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import Scalar

Letter = tuple[str, bool]
WordKey = tuple[Letter, ...]


def letter(name: str, star: bool = False) -> Letter:
    return (name, star)


def word(*names: str) -> WordKey:
    """Word from generator names; a trailing '*' on a name sets the star flag."""
    out = []
    for n in names:
        stars = len(n) - len(n.rstrip("*"))
        base = n[: len(n) - stars] if stars else n
        out.append((base, stars % 2 == 1))
    return tuple(out)


EMPTY_WORD: WordKey = ()


def involute_word(w: WordKey) -> WordKey:
    return tuple((name, not star) for name, star in reversed(w))


@dataclass
class NCPolynomial:
    """Sparse map word -> Scalar coefficient; zero coefficients are pruned."""

    terms: dict

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in terms.items():
                c = Scalar.coerce(c)
                if not c.is_zero():
                    clean[tuple(w)] = clean.get(tuple(w), Scalar.rational(0)) + c
        self.terms = {w: c for w, c in clean.items() if not c.is_zero()}

    # --- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "NCPolynomial":
        return cls({})

    @classmethod
    def one(cls) -> "NCPolynomial":
        return cls({EMPTY_WORD: Scalar.rational(1)})

    @classmethod
    def monomial(cls, w: WordKey, coeff=1) -> "NCPolynomial":
        return cls({tuple(w): Scalar.coerce(coeff)})

    @classmethod
    def from_names(cls, *names: str, coeff=1) -> "NCPolynomial":
        return cls.monomial(word(*names), coeff)

    # --- ring operations ------------------------------------------------------

    def __add__(self, other: "NCPolynomial") -> "NCPolynomial":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Scalar.rational(0)) + c
        return NCPolynomial(out)

    def __neg__(self) -> "NCPolynomial":
        return NCPolynomial({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCPolynomial") -> "NCPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "NCPolynomial":
        if isinstance(other, NCPolynomial):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    c = c1 * c2
                    out[w] = out.get(w, Scalar.rational(0)) + c
            return NCPolynomial(out)
        return self.scale(other)

    def __rmul__(self, other) -> "NCPolynomial":
        return self.scale(other)

    def scale(self, c) -> "NCPolynomial":
        c = Scalar.coerce(c)
        return NCPolynomial({w: cc * c for w, cc in self.terms.items()})

    def involute(self) -> "NCPolynomial":
        """Antilinear anti-homomorphic star at the free level."""
        return NCPolynomial(
            {involute_word(w): c.conjugate() for w, c in self.terms.items()}
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            ws = "".join(f"{n}{'*' if s else ''}" for n, s in w) or "1"
            bits.append(f"({c})·{ws}")
        return " + ".join(bits)


GradedWord = WordKey  # degree caching lives in the algebra spec


def parse_poly(text: str, names: list[str]) -> NCPolynomial:
    """Parse 'aa* - a*a - 1' style expressions over the given generator names.

    Juxtaposition multiplies, '*' after a name is the involution, '^k' is an
    integer power, coefficients are integers or rationals p/q.
    """
    ordered = sorted(names, key=len, reverse=True)
    i, n = 0, len(text)
    result = NCPolynomial.zero()
    sign = 1
    started = False

    def skip_ws(j):
        while j < n and text[j] in " \t":
            j += 1
        return j

    i = skip_ws(i)
    while i < n:
        if text[i] in "+-":
            sign = 1 if text[i] == "+" else -1
            i = skip_ws(i + 1)
            started = True
            continue
        # one term: optional coefficient then factors
        coeff = Fraction(sign)
        sign = 1
        letters = []
        matched_any = False
        while i < n and text[i] not in "+-":
            i = skip_ws(i)
            if i >= n or text[i] in "+-":
                break
            if text[i].isdigit():
                j = i
                while j < n and (text[j].isdigit() or text[j] == "/"):
                    j += 1
                coeff *= Fraction(text[i:j])
                i = j
                matched_any = True
                continue
            for name in ordered:
                if text.startswith(name, i):
                    j = i + len(name)
                    star = False
                    if j < n and text[j] == "*":
                        star = True
                        j += 1
                    power = 1
                    if j < n and text[j] == "^":
                        k = j + 1
                        while k < n and text[k].isdigit():
                            k += 1
                        power = int(text[j + 1:k])
                        j = k
                    letters.extend([(name, star)] * power)
                    i = j
                    matched_any = True
                    break
            else:
                raise ValueError(f"cannot parse {text!r} at position {i}")
        if not matched_any and started:
            raise ValueError(f"dangling sign in {text!r}")
        result = result + NCPolynomial({tuple(letters): Scalar.rational(coeff)})
        started = True
    return result
