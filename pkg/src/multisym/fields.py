"""Exact scalar arithmetic over Q and prime fields F_p.

Rational elements are plain :class:`fractions.Fraction` values. Prime field
elements are :class:`Residue` instances holding the least nonnegative residue.
Both support ``+ - * / **``, equality, hashing and a total order, so the rest
of the package can treat coordinates generically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(p: int) -> bool:
    """Miller-Rabin with the first 12 prime bases; exact for p < 3.3e24."""
    if p < 2:
        return False
    for b in _MR_BASES:
        if p % b == 0:
            return p == b
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@total_ordering
class Residue:
    """An element of F_p, stored as its residue in ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def inverse(self) -> "Residue":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.p)
        return Residue(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Residue(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.p) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        # pow(0, 0, p) == 1, the empty-product convention
        return Residue(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.value < o

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


FieldElement = Union[Fraction, Residue]


@dataclass(frozen=True)
class FieldSpec:
    """Names a coefficient field: ``FieldSpec()`` is Q, ``FieldSpec(p)`` is F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        text = text.strip().lower()
        if text == "rational":
            return cls.rational()
        if text.startswith("fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"bad field {text!r}") from None
            return cls.prime(p)
        raise ValueError(f"bad field {text!r}; expected 'rational' or 'fp:<p>'")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __str__(self):
        return "rational" if self.p is None else f"fp:{self.p}"

    def element(self, x) -> FieldElement:
        """Map an int, Fraction, Residue or text like ``"3/4"`` into this field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Residue):
            if self.p != x.p:
                raise ValueError(f"{x!r} is not an element of {self}")
            return x
        if self.p is None:
            return Fraction(x)
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
        return Residue(x.numerator, self.p) / x.denominator

    def zero(self) -> FieldElement:
        return self.element(0)

    def one(self) -> FieldElement:
        return self.element(1)

    def contains(self, x) -> bool:
        if self.p is None:
            return isinstance(x, Fraction)
        return isinstance(x, Residue) and x.p == self.p

    def format(self, x: FieldElement) -> str:
        return str(x)


def char_ok_for(field: FieldSpec, n: int) -> bool:
    """True iff char(K) = 0 or char(K) > n."""
    if n < 1:
        raise ValueError("n must be positive")
    c = field.characteristic
    return c == 0 or c > n


def pow_nonneg(x: FieldElement, e: int) -> FieldElement:
    """``x**e`` for ``e >= 0``; ``0**0 == 1``."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return x ** e
