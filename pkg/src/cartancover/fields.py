"""Exact ground fields: the rationals and prime fields GF(p).

Rational scalars are ``fractions.Fraction`` values (unbounded integers,
always in lowest terms with positive denominator, so equality is exact).
Prime-field scalars are ``Fp`` values holding a least residue in [0, p).
Both representations are canonical per value, which makes equality of
derived objects (matrices, subspaces, polynomials) decidable bitwise.

A field object knows how to coerce, parse, render and order its scalars;
all linear algebra in the package is generic over this interface.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def is_prime(n: int) -> bool:
    """Trial-division primality test; instances are desk scale."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Fp:
    """An element of GF(p), stored as the least residue."""

    __slots__ = ("val", "p")

    def __init__(self, val: int, p: int):
        self.val = val % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                return None
            return other.val
        if isinstance(other, int):
            return other % self.p
        return None

    def __add__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return Fp(self.val + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return Fp(self.val - v, self.p)

    def __rsub__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return Fp(v - self.val, self.p)

    def __mul__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return Fp(self.val * v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return Fp(self.val * pow(v, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        if self.val == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return Fp(v * pow(self.val, self.p - 2, self.p), self.p)

    def __neg__(self):
        return Fp(-self.val, self.p)

    def __pow__(self, n: int):
        if n < 0:
            return (Fp(1, self.p) / self) ** (-n)
        return Fp(pow(self.val, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __hash__(self):
        # consistent with int equality above
        return hash(self.val)

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"Fp({self.val}, {self.p})"

    def __str__(self):
        return str(self.val)


class Rationals:
    """The field of rational numbers."""

    kind = "Q"
    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, bool):
            raise ParseError("booleans are not rational scalars")
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise ParseError(f"cannot interpret {x!r} as a rational number")

    def parse(self, s: str) -> Fraction:
        s = s.strip()
        if not _RATIONAL_RE.match(s):
            raise ParseError(f"malformed rational {s!r}; expected 'a' or 'a/b'")
        num, _, den = s.partition("/")
        if den:
            if int(den) == 0:
                raise ParseError(f"malformed rational {s!r}: zero denominator")
            return Fraction(int(num), int(den))
        return Fraction(int(num))

    def render(self, v) -> str:
        return str(v)

    def element_key(self, v):
        return v

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The field GF(p) for a prime p."""

    kind = "Fp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ParseError(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p

    def zero(self):
        return Fp(0, self.p)

    def one(self):
        return Fp(1, self.p)

    def coerce(self, x) -> Fp:
        if isinstance(x, bool):
            raise ParseError("booleans are not prime-field scalars")
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ParseError(f"scalar from GF({x.p}) used in GF({self.p})")
            return x
        if isinstance(x, int):
            return Fp(x, self.p)
        if isinstance(x, str):
            return self.parse(x)
        raise ParseError(f"cannot interpret {x!r} as an element of GF({self.p})")

    def parse(self, s: str) -> Fp:
        s = s.strip()
        if not re.match(r"^[+-]?\d+$", s):
            raise ParseError(f"malformed GF({self.p}) residue {s!r}")
        return Fp(int(s), self.p)

    def render(self, v) -> str:
        return str(v.val)

    def element_key(self, v):
        return v.val

    def elements(self):
        return [Fp(i, self.p) for i in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_json(obj) -> Rationals | PrimeField:
    """Build a field from the instance-file descriptor."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("field descriptor must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "Q":
        return QQ
    if kind == "Fp":
        if "p" not in obj or not isinstance(obj["p"], int):
            raise ParseError("prime field descriptor needs an integer 'p'")
        return PrimeField(obj["p"])
    raise ParseError(f"unknown field kind {kind!r}")


def field_to_json(field) -> dict:
    if isinstance(field, Rationals):
        return {"kind": "Q"}
    return {"kind": "Fp", "p": field.p}


def field_label(field) -> str:
    return "Q" if isinstance(field, Rationals) else f"F{field.p}"
