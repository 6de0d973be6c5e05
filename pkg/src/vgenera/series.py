"""Truncated formal power series in one variable ``x`` over an exact scalar ring.

Every series carries its truncation order explicitly; binary operations refuse
operands of different orders instead of silently extending or truncating.
The genus triad (logarithm -> e-series -> characteristic series) lives here too.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .errors import DomainError, UsageError, ValidationError
from .scalars import (
    QScalar,
    Scalar,
    coerce,
    invert,
    is_unit,
    mod_q,
    one,
    q_order_of,
    scalar_from_json,
    scalar_to_json,
    zero,
)


class TruncatedSeries:
    """``sum(coeffs[n] * x**n for n <= order)``, known modulo ``x**(order + 1)``."""

    __slots__ = ("coeffs", "q_order")

    def __init__(self, coeffs: Iterable, q_order: int | None = None):
        coeffs = list(coeffs)
        if q_order is None:
            for c in coeffs:
                if isinstance(c, QScalar):
                    q_order = c.q_order
                    break
        coeffs = tuple(coerce(c, q_order) for c in coeffs)
        if not coeffs:
            raise UsageError("a truncated series needs order >= 0")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "q_order", q_order)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # constructors

    @classmethod
    def zero(cls, order: int, q_order: int | None = None) -> "TruncatedSeries":
        return cls([zero(q_order)] * (order + 1), q_order)

    @classmethod
    def constant(cls, c, order: int, q_order: int | None = None) -> "TruncatedSeries":
        return cls([c] + [zero(q_order)] * order, q_order)

    @classmethod
    def x(cls, order: int, q_order: int | None = None) -> "TruncatedSeries":
        """The series ``x`` itself (which is 0 at order 0)."""
        coeffs = [zero(q_order)] * (order + 1)
        if order >= 1:
            coeffs[1] = one(q_order)
        return cls(coeffs, q_order)

    # basic structure

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Scalar:
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self.coeffs]}, q_order={self.q_order})"

    def __str__(self):
        terms = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if n == 0 else ("x" if n == 1 else f"x^{n}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(x^{self.order + 1})"

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise UsageError(f"cannot extend a series of order {self.order} to order {order}")
        return TruncatedSeries(self.coeffs[: order + 1], self.q_order)

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c != 0:
                return n
        return None

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def mod_q(self) -> "TruncatedSeries":
        return TruncatedSeries([mod_q(c) for c in self.coeffs])

    def map(self, fn) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs])

    def derivative(self) -> "TruncatedSeries":
        """Formal derivative; the result has order one less (order 0 for a constant)."""
        if self.order == 0:
            return TruncatedSeries.zero(0, self.q_order)
        return TruncatedSeries([n * self.coeffs[n] for n in range(1, self.order + 1)], self.q_order)

    # arithmetic

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise UsageError(f"expected a TruncatedSeries, got {type(other).__name__}")
        if self.order != other.order:
            raise UsageError(f"series order mismatch: {self.order} vs {other.order}")
        if self.q_order != other.q_order:
            raise UsageError(f"scalar ring mismatch: q_order {self.q_order} vs {other.q_order}")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.q_order)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.q_order)

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.q_order)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction, QScalar)):
            return TruncatedSeries([a * other for a in self.coeffs], self.q_order)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QScalar)):
            return TruncatedSeries([other * a for a in self.coeffs], self.q_order)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_div(self, other)
        if isinstance(other, (int, Fraction, QScalar)):
            inv = invert(other)
            return TruncatedSeries([a * inv for a in self.coeffs], self.q_order)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise UsageError("negative powers: use series_div")
        out = TruncatedSeries.constant(one(self.q_order), self.order, self.q_order)
        base = self
        while n:
            if n & 1:
                out = series_mul(out, base)
            n >>= 1
            if n:
                base = series_mul(base, base)
        return out

    def __call__(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        return series_compose(self, inner)

    # serialization

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "q_order": self.q_order if self.q_order is not None else 0,
            "coeffs": [scalar_to_json(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        coeffs = [scalar_from_json(c) for c in data["coeffs"]]
        if len(coeffs) != data["order"] + 1:
            raise ValidationError(f"series JSON: 'order' {data['order']} disagrees with {len(coeffs)} coefficients")
        q_order = None
        if coeffs and isinstance(coeffs[0], QScalar):
            q_order = coeffs[0].q_order
            if data.get("q_order", q_order) != q_order:
                raise ValidationError("series JSON: 'q_order' disagrees with coefficient length")
        return cls(coeffs, q_order)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    a._check(b)
    n = a.order
    out = [zero(a.q_order)] * (n + 1)
    bc = b.coeffs
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j in range(n + 1 - i):
            bj = bc[j]
            if bj != 0:
                out[i + j] = out[i + j] + ai * bj
    return TruncatedSeries(out, a.q_order)


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Return ``c`` with ``c * b == a``.

    If ``b`` vanishes to order ``k > 0`` then ``a`` must vanish to order at least
    ``k`` as well; both are shifted down by ``x**k`` and the quotient has order
    ``a.order - k``.
    """
    a._check(b)
    k = b.valuation()
    if k is None:
        raise DomainError("division by the zero series")
    lead = b.coeffs[k]
    if not is_unit(lead):
        raise DomainError(f"leading coefficient {lead} of the divisor is not invertible")
    if k:
        va = a.valuation()
        if va is not None and va < k:
            raise DomainError(f"dividend vanishes to order {va} < divisor's order {k}")
    an = a.coeffs[k:]
    bn = b.coeffs[k:]
    inv = invert(lead)
    n = len(an) - 1
    out = []
    for m in range(n + 1):
        s = an[m]
        for i in range(1, m + 1):
            if bn[i] != 0:
                s = s - bn[i] * out[m - i]
        out.append(s * inv)
    return TruncatedSeries(out, a.q_order)


def series_compose(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """``a(b(x))``; requires ``b(0) == 0``."""
    a._check(b)
    if b.coeffs[0] != 0:
        raise DomainError("inner series of a composition must have zero constant term")
    out = TruncatedSeries.constant(a.coeffs[-1], a.order, a.q_order)
    for c in reversed(a.coeffs[:-1]):
        out = series_mul(out, b)
        out = TruncatedSeries((c + out.coeffs[0],) + out.coeffs[1:], a.q_order)
    return out


def series_reverse(a: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of ``a = x + ...`` by Newton iteration.

    Each step ``b -> b - (a(b) - x) / a'(b)`` at least doubles the number of
    correct coefficients, so the loop ends after about log2(order) rounds.
    """
    n = a.order
    if n < 1 or a.coeffs[0] != 0 or a.coeffs[1] != 1:
        raise DomainError("reversion needs a series of the form x + O(x^2)")
    x = TruncatedSeries.x(n, a.q_order)
    # pad a' back to order n; the top coefficient never reaches the correction
    da = a.derivative()
    da = TruncatedSeries(da.coeffs + (zero(a.q_order),), a.q_order)
    b = x
    for _ in range(n.bit_length() + 2):
        residual = series_compose(a, b) - x
        if residual.valuation() is None:
            return b
        b = b - series_div(residual, series_compose(da, b))
    if series_compose(a, b) != x:
        raise DomainError("Newton reversion failed to converge")
    return b


def _exp_coeffs(order: int, scale: Fraction = Fraction(1)) -> list[Fraction]:
    return [scale**n / factorial(n) for n in range(order + 1)]


def _sinh_half_doubled(order: int) -> list[Fraction]:
    return [
        Fraction(1, 4 ** ((n - 1) // 2) * factorial(n)) if n % 2 else Fraction(0)
        for n in range(order + 1)
    ]


BUILTIN_SERIES = ("tanh", "arctanh", "two_sinh_half", "todd_Q", "witten_e")


def builtin_series(name: str, order: int, q_order: int = 0) -> TruncatedSeries:
    """Named exact series.

    ``todd_Q`` is the Todd characteristic series ``x / (1 - exp(-x))``; the other
    entries are e-series or logarithms. ``witten_e`` is
    ``2 sinh(x/2) * prod_{1<=n<=q_order} (1 - q^n e^x)(1 - q^n e^-x)(1 + q^n)^-2``
    with coefficients in Q[q]/(q^{q_order+1}).
    """
    if name not in BUILTIN_SERIES:
        raise UsageError(f"unknown builtin series {name!r}; expected one of {', '.join(BUILTIN_SERIES)}")
    if order < 0 or q_order < 0:
        raise UsageError("orders must be non-negative")
    if name != "witten_e" and q_order != 0:
        raise UsageError(f"builtin {name!r} has rational coefficients; q_order must be 0")
    if name == "arctanh":
        return TruncatedSeries([Fraction(1, n) if n % 2 else Fraction(0) for n in range(order + 1)])
    if name == "two_sinh_half":
        return TruncatedSeries(_sinh_half_doubled(order))
    if name == "tanh":
        sinh = TruncatedSeries([Fraction(1, factorial(n)) if n % 2 else Fraction(0) for n in range(order + 1)])
        cosh = TruncatedSeries([Fraction(0) if n % 2 else Fraction(1, factorial(n)) for n in range(order + 1)])
        return series_div(sinh, cosh)
    if name == "todd_Q":
        # one extra order because dividing by 1 - e^-x shifts by x
        denom = TruncatedSeries([Fraction(0)] + [-c for c in _exp_coeffs(order + 1, Fraction(-1))[1:]])
        return series_div(TruncatedSeries.x(order + 1), denom)
    return _witten_e(order, q_order)


def _witten_e(order: int, q_order: int) -> TruncatedSeries:
    e = TruncatedSeries(_sinh_half_doubled(order), q_order)
    exp_p = _exp_coeffs(order)
    exp_m = _exp_coeffs(order, Fraction(-1))
    for n in range(1, q_order + 1):
        qn = QScalar.q_power(n, q_order)
        for exp_c in (exp_p, exp_m):
            factor = TruncatedSeries([QScalar.constant(1, q_order) - qn * exp_c[0]] + [-qn * c for c in exp_c[1:]], q_order)
            e = series_mul(e, factor)
        norm = (QScalar.constant(1, q_order) + qn) ** 2
        e = e / norm
    return e


def f_from_e(e: TruncatedSeries, oriented: bool = True) -> TruncatedSeries:
    """Characteristic series ``x / e(x)``; the result has order ``e.order - 1``.

    In oriented (Pontryagin) mode ``e`` must be odd. Chern-variable genera such as
    Todd skip the parity check.
    """
    if e.order < 1 or e.coeffs[0] != 0 or e.coeffs[1] != 1:
        raise ValidationError("an e-series must have the form x + O(x^2)")
    if oriented and not e.is_odd():
        raise ValidationError("an oriented genus needs an odd e-series (e(-x) = -e(x))")
    return series_div(TruncatedSeries.x(e.order, e.q_order), e)


def log_from_cp_values(values: Sequence) -> TruncatedSeries:
    """``x + sum_{n>=1} values[n-1] * x^(2n+1) / (2n+1)`` where values are the genus on CP^2, CP^4, ..."""
    order = 2 * len(values) + 1
    q_order = None
    for v in values:
        if isinstance(v, QScalar):
            q_order = v.q_order
            break
    coeffs = [zero(q_order)] * (order + 1)
    coeffs[1] = one(q_order)
    for n, v in enumerate(values, start=1):
        coeffs[2 * n + 1] = coerce(v, q_order) / (2 * n + 1)
    return TruncatedSeries(coeffs, q_order)


def e_from_log(log: TruncatedSeries) -> TruncatedSeries:
    return series_reverse(log)


def normalize_leading(e: TruncatedSeries) -> TruncatedSeries:
    """Divide an odd series ``c x + ...`` by the unit ``c`` so that it starts with ``x``."""
    if e.order < 1 or e.coeffs[0] != 0 or not is_unit(e.coeffs[1]):
        raise DomainError("series must vanish at 0 with an invertible linear coefficient")
    return e / e.coeffs[1]
