"""Exact scalar rings: ``Fraction`` and rational q-polynomials truncated at a fixed q-order.

Rationals are plain :class:`fractions.Fraction` values. :class:`QScalar` is the
truncated ring Q[q]/(q^{M+1}) used for q-deformed genera.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

from .errors import DomainError, UsageError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class QScalar:
    """A polynomial in q with rational coefficients, truncated above ``q_order``.

    The coefficient tuple always has length ``q_order + 1``; trailing zeros are kept.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if not coeffs:
            raise UsageError("QScalar needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("QScalar is immutable")

    @property
    def q_order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, q_order: int) -> "QScalar":
        return cls([Fraction(value)] + [Fraction(0)] * q_order)

    @classmethod
    def q_power(cls, n: int, q_order: int) -> "QScalar":
        coeffs = [Fraction(0)] * (q_order + 1)
        if n <= q_order:
            coeffs[n] = Fraction(1)
        return cls(coeffs)

    def _coerce(self, other) -> "QScalar | None":
        if isinstance(other, QScalar):
            if other.q_order != self.q_order:
                raise UsageError(f"q-order mismatch: {self.q_order} vs {other.q_order}")
            return other
        if isinstance(other, (int, Rational)):
            return QScalar.constant(other, self.q_order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QScalar(a + b for a, b in zip(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return QScalar(-a for a in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QScalar(a - b for a, b in zip(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return QScalar(a * other for a in self.coeffs)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.q_order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * o.coeffs[j]
        return QScalar(out)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise DomainError(f"{self} is not a unit (zero constant term in q)")
        n = self.q_order
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / c0
        for k in range(1, n + 1):
            s = sum(self.coeffs[i] * out[k - i] for i in range(1, k + 1))
            out[k] = -s / c0
        return QScalar(out)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise DomainError("division by zero")
            return QScalar(a / other for a in self.coeffs)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        out = QScalar.constant(1, self.q_order)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, QScalar):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def mod_q(self) -> Fraction:
        return self.coeffs[0]

    def __repr__(self):
        return f"QScalar({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not any(self.coeffs[1:]):
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        return "(" + " + ".join(terms).replace("+ -", "- ") + ")"


Scalar = Union[Fraction, QScalar]


def q_order_of(c) -> int | None:
    return c.q_order if isinstance(c, QScalar) else None


def coerce(c, q_order: int | None) -> Scalar:
    """Bring ``c`` into the ring named by ``q_order`` (``None`` means the rationals)."""
    if q_order is None:
        if isinstance(c, QScalar):
            raise UsageError("cannot coerce a q-scalar into the rationals")
        return Fraction(c)
    if isinstance(c, QScalar):
        if c.q_order != q_order:
            raise UsageError(f"q-order mismatch: {c.q_order} vs {q_order}")
        return c
    return QScalar.constant(c, q_order)


def one(q_order: int | None) -> Scalar:
    return coerce(1, q_order)


def zero(q_order: int | None) -> Scalar:
    return coerce(0, q_order)


def is_unit(c) -> bool:
    if isinstance(c, QScalar):
        return c.coeffs[0] != 0
    return c != 0


def invert(c) -> Scalar:
    if isinstance(c, QScalar):
        return c.inverse()
    if c == 0:
        raise DomainError("division by zero")
    return 1 / Fraction(c)


def mod_q(c) -> Fraction:
    return c.mod_q() if isinstance(c, QScalar) else Fraction(c)


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"`` or an integer; decimals are rejected."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise UsageError(f"expected a rational string like '3/4', got {text!r}")
    m = _RATIONAL_RE.match(text)
    if not m:
        raise UsageError(f"not an exact rational: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise UsageError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(c) -> str:
    return str(Fraction(c))


def scalar_to_json(c):
    if isinstance(c, QScalar):
        return [format_rational(a) for a in c.coeffs]
    return format_rational(c)


def scalar_from_json(data) -> Scalar:
    if isinstance(data, list):
        return QScalar(parse_rational(a) for a in data)
    return parse_rational(data)
