"""Exact arithmetic in real quadratic extensions of the rationals.

A :class:`QuadNum` stores a number ``a + b*sqrt(disc)`` with rational
coefficients and a square-free integer discriminant ``disc >= 2``.  All
operations (including ordering, floor and division) are exact; no floating
point is ever consulted for a decision.  Values with ``b == 0`` normalise to
a discriminant-free form and interoperate freely with :class:`~fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import isqrt
from typing import Union

__all__ = [
    "MixedDiscriminants",
    "QuadNum",
    "Scalar",
    "ZeroValue",
    "format_scalar",
    "is_square_free",
    "parse_scalar",
    "scalar_floor",
    "scalar_mod",
    "scalar_sign",
    "scalar_sqrt",
    "sqrt_disc",
]


class MixedDiscriminants(ArithmeticError):
    """Two genuinely irrational operands live in different quadratic fields."""


class ZeroValue(ArithmeticError):
    """A value required to be nonzero is exactly zero."""


_RationalLike = Union[int, Fraction]


def is_square_free(n: int) -> bool:
    """Return True when ``n >= 2`` has no repeated prime factor."""
    if n < 2:
        return False
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def _floor_sqrt(value: Fraction) -> int:
    """Exact floor of the square root of a nonnegative rational."""
    if value < 0:
        raise ValueError("square root of a negative rational")
    return isqrt(value.numerator * value.denominator) // value.denominator


@total_ordering
class QuadNum:
    """An exact element ``a + b*sqrt(disc)`` of a real quadratic field."""

    __slots__ = ("a", "b", "disc")

    a: Fraction
    b: Fraction
    disc: int | None

    def __init__(
        self,
        a: _RationalLike = 0,
        b: _RationalLike = 0,
        disc: int | None = None,
    ) -> None:
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            disc = None
        else:
            if disc is None:
                raise ValueError("a discriminant is required when b != 0")
            if not is_square_free(disc):
                raise ValueError(f"discriminant must be square-free and >= 2, got {disc}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "disc", disc)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("QuadNum is immutable")

    # -- structure ---------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadNum":
        """The Galois conjugate ``a - b*sqrt(disc)``."""
        return QuadNum(self.a, -self.b, self.disc)

    def __repr__(self) -> str:
        return f"QuadNum({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.disc))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __float__(self) -> float:
        if self.b == 0:
            return float(self.a)
        root = isqrt(self.disc * 10**60)  # type: ignore[operator]
        return float(self.a) + float(self.b) * root / 10**30

    # -- coercion ----------------------------------------------------------

    def _split(self, other: object) -> tuple[Fraction, Fraction, int | None] | None:
        if isinstance(other, QuadNum):
            if other.b != 0 and self.b != 0 and other.disc != self.disc:
                raise MixedDiscriminants(
                    f"cannot mix sqrt({self.disc}) with sqrt({other.disc})"
                )
            return other.a, other.b, other.disc
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0), None
        return None

    def _promote(self, a: Fraction, b: Fraction, disc: int | None) -> "QuadNum":
        return QuadNum(a, b, disc if b != 0 else None)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: object) -> "QuadNum":
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        oa, ob, od = parts
        b = self.b + ob
        return self._promote(self.a + oa, b, self.disc if self.b != 0 else od)

    __radd__ = __add__

    def __neg__(self) -> "QuadNum":
        return QuadNum(-self.a, -self.b, self.disc)

    def __sub__(self, other: object) -> "QuadNum":
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        oa, ob, od = parts
        b = self.b - ob
        return self._promote(self.a - oa, b, self.disc if self.b != 0 else od)

    def __rsub__(self, other: object) -> "QuadNum":
        return (-self).__add__(other)

    def __mul__(self, other: object) -> "QuadNum":
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        oa, ob, od = parts
        disc = self.disc if self.b != 0 else od
        d = Fraction(disc) if disc is not None else Fraction(0)
        a = self.a * oa + self.b * ob * d
        b = self.a * ob + self.b * oa
        return self._promote(a, b, disc)

    __rmul__ = __mul__

    def _inverse(self) -> "QuadNum":
        if not self:
            raise ZeroDivisionError("division by zero")
        if self.b == 0:
            return QuadNum(1 / self.a)
        norm = self.a * self.a - self.b * self.b * self.disc  # nonzero: disc square-free
        return QuadNum(self.a / norm, -self.b / norm, self.disc)

    def __truediv__(self, other: object) -> "QuadNum":
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        oa, ob, od = parts
        return self.__mul__(QuadNum(oa, ob, od)._inverse())

    def __rtruediv__(self, other: object) -> "QuadNum":
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        oa, ob, od = parts
        return QuadNum(oa, ob, od).__mul__(self._inverse())

    def __pow__(self, exponent: int) -> "QuadNum":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self._inverse() ** (-exponent)
        result = QuadNum(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __abs__(self) -> "QuadNum":
        return -self if self.sign() < 0 else self

    # -- exact ordering ----------------------------------------------------

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1} of ``a + b*sqrt(disc)``."""
        if self.b == 0:
            a = self.a
            return (a > 0) - (a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        sa = 1 if self.a > 0 else -1
        sb = 1 if self.b > 0 else -1
        if sa == sb:
            return sa
        # Opposite signs: compare |a| with |b|*sqrt(disc) via squares; equality
        # is impossible because disc is square-free.
        if self.a * self.a > self.b * self.b * self.disc:
            return sa
        return sb

    def __eq__(self, other: object) -> bool:
        try:
            parts = self._split(other)
        except MixedDiscriminants:
            return False
        if parts is None:
            return NotImplemented
        oa, ob, _ = parts
        return self.a == oa and self.b == ob

    def __lt__(self, other: object) -> bool:
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        oa, ob, od = parts
        return (self - QuadNum(oa, ob, od)).sign() < 0

    def floor(self) -> int:
        """Exact integer floor."""
        if self.b == 0:
            return self.a.numerator // self.a.denominator
        root_floor = _floor_sqrt(self.b * self.b * self.disc)
        estimate = (self.a.numerator // self.a.denominator) + (
            root_floor if self.b > 0 else -root_floor - 1
        )
        while self.__lt__(estimate):
            estimate -= 1
        while not self.__lt__(estimate + 1):
            estimate += 1
        return estimate

    def __mod__(self, other: object) -> "QuadNum":
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        modulus = QuadNum(*parts[:2], parts[2])
        if not modulus:
            raise ZeroDivisionError("modulo by zero")
        quotient = (self / modulus).floor()
        return self - modulus * quotient


Scalar = Union[Fraction, QuadNum]


def sqrt_disc(disc: int) -> QuadNum:
    """The exact square root of a square-free integer ``disc >= 2``."""
    return QuadNum(0, 1, disc)


def scalar_sign(value: Scalar | int) -> int:
    if isinstance(value, QuadNum):
        return value.sign()
    return (value > 0) - (value < 0)


def scalar_floor(value: Scalar | int) -> int:
    if isinstance(value, QuadNum):
        return value.floor()
    value = Fraction(value)
    return value.numerator // value.denominator


def scalar_mod(value: Scalar | int, modulus: Scalar | int) -> Scalar:
    """Floored remainder, promoting across the rational/quadratic boundary."""
    if isinstance(value, QuadNum):
        return value % modulus
    if isinstance(modulus, QuadNum):
        return QuadNum(Fraction(value)) % modulus
    return Fraction(value) % Fraction(modulus)


def _rational_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    num = isqrt(value.numerator)
    den = isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def scalar_sqrt(value: Scalar | int, disc: int | None = None) -> Scalar | None:
    """The exact nonnegative square root of ``value`` inside Q or Q(sqrt(disc)).

    Returns None when ``value`` is negative or has no square root in the
    field tagged by ``disc`` (None meaning the rationals).
    """
    if isinstance(value, QuadNum) and value.is_rational:
        value = value.a
    if not isinstance(value, QuadNum):
        value = Fraction(value)
        if value < 0:
            return None
        root = _rational_sqrt(value)
        if root is not None:
            return root
        if disc is not None:
            root = _rational_sqrt(value / disc)
            if root is not None:
                return QuadNum(0, root, disc)
        return None
    if disc is not None and value.disc != disc:
        return None
    if value.sign() < 0:
        return None
    # Solve (p + q*sqrt(D))^2 = a + b*sqrt(D): p^2 + D q^2 = a and 2pq = b.
    d = value.disc
    norm = value.a * value.a - d * value.b * value.b
    norm_root = _rational_sqrt(norm) if norm >= 0 else None
    if norm_root is None:
        return None
    for half in ((value.a + norm_root) / 2, (value.a - norm_root) / 2):
        p = _rational_sqrt(half) if half >= 0 else None
        if p is None or p == 0:
            continue
        q = value.b / (2 * p)
        candidate = QuadNum(p, q, d)
        if candidate * candidate == value and candidate.sign() > 0:
            return candidate
    return None


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(value: Scalar | int) -> str:
    """Canonical text form: ``p/q`` or ``p/q+r/s*sqrt(D)`` (sign-folded)."""
    if isinstance(value, (int, Fraction)):
        return _format_rational(Fraction(value))
    if value.b == 0:
        return _format_rational(value.a)
    sign = "+" if value.b > 0 else "-"
    return (
        f"{_format_rational(value.a)}{sign}"
        f"{_format_rational(abs(value.b))}*sqrt({value.disc})"
    )


def parse_scalar(text: str) -> Scalar:
    """Parse the canonical text form produced by :func:`format_scalar`."""
    raw = text.strip().replace(" ", "")
    if not raw:
        raise ValueError("empty scalar")
    if "sqrt" not in raw:
        return Fraction(raw)
    # Split a leading rational part from the sqrt term at the last +/- that
    # is not a leading sign and not inside the sqrt(...) argument.
    split_at = -1
    for index in range(1, raw.index("sqrt")):
        if raw[index] in "+-":
            split_at = index
    if split_at == -1:
        rational_text, sqrt_text = "0", raw
    else:
        rational_text, sqrt_text = raw[:split_at], raw[split_at:]
    sign = Fraction(1)
    if sqrt_text[0] in "+-":
        if sqrt_text[0] == "-":
            sign = Fraction(-1)
        sqrt_text = sqrt_text[1:]
    if "*" in sqrt_text:
        coeff_text, root_text = sqrt_text.split("*", 1)
        coeff = Fraction(coeff_text)
    else:
        coeff, root_text = Fraction(1), sqrt_text
    if not (root_text.startswith("sqrt(") and root_text.endswith(")")):
        raise ValueError(f"malformed scalar {text!r}")
    disc = int(root_text[len("sqrt(") : -1])
    return QuadNum(Fraction(rational_text), sign * coeff, disc)
