"""Sparse commutative polynomials over exact scalars, graded by symbol degree.

A monomial is a tuple of ``(symbol, exponent)`` pairs sorted by
``symbol.sort_key()``. Symbols are hashable objects with ``degree``,
``sort_key()`` and ``name``. All generators live in even degree in our
applications, so plain commutativity is the right sign rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .scalars import QScalar

Monomial = tuple


@dataclass(frozen=True)
class Variable:
    """A free graded generator with a display name."""

    name: str
    degree: int

    def sort_key(self):
        return (0, self.name)


@lru_cache(maxsize=1 << 16)
def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for s, e in b:
        merged[s] = merged.get(s, 0) + e
    return tuple(sorted(merged.items(), key=lambda t: t[0].sort_key()))


@lru_cache(maxsize=1 << 16)
def monomial_degree(m: Monomial) -> int:
    return sum(s.degree * e for s, e in m)


def _monomial_key(m: Monomial):
    return (monomial_degree(m), tuple((s.sort_key(), -e) for s, e in m))


def normalize_monomial(pairs: Iterable) -> Monomial:
    merged = {}
    for s, e in pairs:
        if e < 0:
            raise ValueError("negative exponents are not allowed")
        if e:
            merged[s] = merged.get(s, 0) + e
    return tuple(sorted(merged.items(), key=lambda t: t[0].sort_key()))


class GradedPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, c) -> "GradedPoly":
        return cls({(): c})

    @classmethod
    def gen(cls, symbol, exponent: int = 1) -> "GradedPoly":
        return cls({((symbol, exponent),): Fraction(1)} if exponent else {(): Fraction(1)})

    @classmethod
    def from_terms(cls, items: Iterable) -> "GradedPoly":
        """Build from ``(coeff, [(symbol, exponent), ...])`` pairs."""
        out = {}
        for c, pairs in items:
            m = normalize_monomial(pairs)
            out[m] = out.get(m, 0) + c
        return cls(out)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QScalar)):
            other = GradedPoly.constant(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[m] for m, c in self.terms.items())

    __hash__ = None

    def copy(self) -> "GradedPoly":
        return GradedPoly(dict(self.terms))

    def __add__(self, other):
        if isinstance(other, (int, Fraction, QScalar)):
            other = GradedPoly.constant(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                out[m] = out[m] + c
            else:
                out[m] = c
        return GradedPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QScalar)):
            other = GradedPoly.constant(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def mul(self, other: "GradedPoly", max_degree: int | None = None) -> "GradedPoly":
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = monomial_product(ma, mb)
                if max_degree is not None and monomial_degree(m) > max_degree:
                    continue
                c = ca * cb
                if m in out:
                    out[m] = out[m] + c
                else:
                    out[m] = c
        return GradedPoly(out)

    def __mul__(self, other):
        if isinstance(other, GradedPoly):
            return self.mul(other)
        if isinstance(other, (int, Fraction, QScalar)):
            return GradedPoly({m: c * other for m, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QScalar)):
            return GradedPoly({m: other * c for m, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, n: int):
        out = GradedPoly.constant(Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    # grading

    def degrees(self) -> list[int]:
        return sorted({monomial_degree(m) for m in self.terms})

    def homogeneous(self, degree: int) -> "GradedPoly":
        return GradedPoly({m: c for m, c in self.terms.items() if monomial_degree(m) == degree})

    def truncate(self, max_degree: int) -> "GradedPoly":
        return GradedPoly({m: c for m, c in self.terms.items() if monomial_degree(m) <= max_degree})

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def symbols(self) -> set:
        return {s for m in self.terms for s, _ in m}

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _monomial_key(t[0]))

    # structural maps

    def map_monomials(self, fn: Callable) -> "GradedPoly":
        """``fn(monomial) -> (factor, new_monomial)`` or ``None`` to drop the term."""
        out = {}
        for m, c in self.terms.items():
            r = fn(m)
            if r is None:
                continue
            factor, nm = r
            v = c * factor
            out[nm] = out[nm] + v if nm in out else v
        return GradedPoly(out)

    def rename(self, fn: Callable) -> "GradedPoly":
        return self.map_monomials(lambda m: (1, normalize_monomial((fn(s), e) for s, e in m)))

    def substitute(self, values: Mapping) -> "GradedPoly":
        """Replace the given symbols by scalars."""

        def sub(m):
            factor = Fraction(1)
            keep = []
            for s, e in m:
                if s in values:
                    factor = factor * values[s] ** e
                else:
                    keep.append((s, e))
            return factor, tuple(keep)

        return self.map_monomials(sub)

    # rendering

    def render(self, mul_sign: str = "·") -> str:
        if not self.terms:
            return "0"
        out = ""
        for i, (m, c) in enumerate(self.sorted_terms()):
            negative = not isinstance(c, QScalar) and c < 0
            body = _render_term(abs(c) if negative else c, m, mul_sign)
            if i == 0:
                out = ("-" if negative else "") + body
            else:
                out += (" - " if negative else " + ") + body
        return out

    def __repr__(self):
        return f"GradedPoly({self.render()})"

    __str__ = render


def render_monomial(m: Monomial, mul_sign: str = "·") -> str:
    return mul_sign.join(s.name if e == 1 else f"{s.name}^{e}" for s, e in m)


def _render_term(c, m: Monomial, mul_sign: str) -> str:
    mono = render_monomial(m, mul_sign)
    if not mono:
        return str(c)
    if isinstance(c, QScalar):
        text = str(c)
        if not text.startswith("("):
            text = f"({text})"
        return f"{text}{mul_sign}{mono}"
    if c == 1:
        return mono
    if Fraction(c).denominator == 1:
        return f"{c}{mul_sign}{mono}"
    return f"({c}){mul_sign}{mono}"
