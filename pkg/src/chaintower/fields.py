"""Ground fields: prime fields F_p and arbitrary-precision rationals.

Scalars over a prime field are Python ints reduced to [0, p); scalars over
the rationals are fractions.Fraction values (always in lowest terms with a
positive denominator, which Fraction guarantees). Canonical strings are
str() of those representatives: "7", "0", "3/2", "-3/2".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadField

MAX_MODULUS = 2**31


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field descriptor: kind "prime" (with modulus) or "rational"."""

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "prime":
            if not isinstance(self.p, int) or not (2 <= self.p < MAX_MODULUS):
                raise BadField(f"modulus out of range [2, 2^31): {self.p!r}")
            if not _is_prime(self.p):
                raise BadField(f"modulus {self.p} is not prime")
        elif self.kind == "rational":
            if self.p is not None:
                raise BadField("rational field takes no modulus")
        else:
            raise BadField(f"unknown field kind: {self.kind!r}")

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    def parse(self, s: str | int | Fraction):
        """Coerce a canonical string (or int/Fraction) to a scalar."""
        if self.kind == "prime":
            if isinstance(s, Fraction):
                if s.denominator != 1:
                    raise BadField(f"non-integer scalar {s} over F_{self.p}")
                return int(s) % self.p
            return int(s) % self.p
        if isinstance(s, float):
            raise BadField("floats are not exact scalars")
        return Fraction(s)

    def fmt(self, x) -> str:
        """Canonical string form of a scalar."""
        return str(x)

    def inv(self, x):
        """Multiplicative inverse of a nonzero scalar."""
        if self.kind == "prime":
            return pow(int(x), -1, self.p)
        return Fraction(1) / x

    def label(self) -> str:
        return f"prime:{self.p}" if self.kind == "prime" else "rational"


RATIONAL = FieldSpec("rational")
F101 = FieldSpec("prime", 101)


def field_from_label(label: str) -> FieldSpec:
    """Parse a field label: "prime:101" or "rational"."""
    if label == "rational":
        return RATIONAL
    if label.startswith("prime:"):
        body = label.split(":", 1)[1]
        try:
            p = int(body)
        except ValueError:
            raise BadField(f"bad modulus in field label: {label!r}") from None
        return FieldSpec("prime", p)
    raise BadField(f"unknown field label: {label!r}")
