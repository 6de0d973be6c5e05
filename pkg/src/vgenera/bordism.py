"""Characteristic numbers of CP^n and their products, and the rational bordism ring.

Manifolds enter only through their characteristic-number maps
``J -> <p_J, [N]>`` (or Chern numbers ``<c_J, [N]>``). Bordism classes are
polynomials in the generators ``[CP^n]``; the oriented ring uses the even ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, prod
from typing import Mapping

from .errors import InvariantViolation, UsageError
from .multiseq import CHERN, PONTRYAGIN, VARIABLES, MultiplicativeSequence, degree_unit
from .partitions import EMPTY, Partition, partitions_of
from .scalars import zero


@dataclass(frozen=True, eq=False)
class PontryaginCharacter:
    """Characteristic numbers of a closed manifold of real dimension ``dimension``.

    Missing keys mean 0. In Pontryagin mode a dimension not divisible by 4
    forces the zero map.
    """

    dimension: int
    variables: str = PONTRYAGIN
    numbers: Mapping[Partition, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.variables not in VARIABLES:
            raise UsageError(f"unknown variable family {self.variables!r}")
        if self.dimension < 0:
            raise UsageError("dimension must be non-negative")
        w = self.weight
        clean = {}
        for J, v in self.numbers.items():
            J = J if isinstance(J, Partition) else Partition(J)
            v = Fraction(v)
            if v == 0:
                continue
            if w is None or J.weight != w:
                raise UsageError(f"partition {J} does not index a number of a {self.dimension}-manifold")
            clean[J] = v
        object.__setattr__(self, "numbers", dict(sorted(clean.items())))

    @property
    def weight(self) -> int | None:
        unit = degree_unit(self.variables)
        return self.dimension // unit if self.dimension % unit == 0 else None

    def __getitem__(self, J) -> Fraction:
        J = J if isinstance(J, Partition) else Partition(J)
        return self.numbers.get(J, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, PontryaginCharacter):
            return NotImplemented
        return (self.dimension, self.variables, self.numbers) == (other.dimension, other.variables, other.numbers)

    def is_zero(self) -> bool:
        return not self.numbers

    def __add__(self, other: "PontryaginCharacter") -> "PontryaginCharacter":
        _check_same(self, other)
        keys = set(self.numbers) | set(other.numbers)
        return PontryaginCharacter(self.dimension, self.variables, {J: self[J] + other[J] for J in keys})

    def scale(self, c) -> "PontryaginCharacter":
        return PontryaginCharacter(self.dimension, self.variables, {J: c * v for J, v in self.numbers.items()})

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "variables": self.variables,
            "numbers": [{"partition": list(J.parts), "value": str(v)} for J, v in self.numbers.items()],
        }


def _check_same(a: PontryaginCharacter, b: PontryaginCharacter):
    if a.variables != b.variables:
        raise UsageError(f"variable family mismatch: {a.variables} vs {b.variables}")
    if a.dimension != b.dimension:
        raise UsageError(f"dimension mismatch: {a.dimension} vs {b.dimension}")


def point_character(variables: str = PONTRYAGIN) -> PontryaginCharacter:
    return PontryaginCharacter(0, variables, {EMPTY: 1})


@lru_cache(maxsize=None)
def cpn_character(n: int, variables: str = PONTRYAGIN) -> PontryaginCharacter:
    """Characteristic numbers of CP^n from its total class ``(1 + x^2)^(n+1)`` or ``(1 + x)^(n+1)``."""
    if n < 1:
        raise UsageError("CP^n needs n >= 1")
    if variables == PONTRYAGIN:
        if n % 2:
            return PontryaginCharacter(2 * n, variables)
        weight = n // 2
    else:
        weight = n
    numbers = {J: prod(comb(n + 1, j) for j in J) for J in partitions_of(weight)}
    return PontryaginCharacter(2 * n, variables, numbers)


def _split_number(J: Partition, a: PontryaginCharacter, b: PontryaginCharacter, wa: int) -> Fraction:
    # p_j(M x N) = sum_{s+t=j} p_s(M) p_t(N); keep the splits landing in the top degree of M
    total = Fraction(0)
    for split in product(*(range(j + 1) for j in J)):
        if sum(split) != wa:
            continue
        va = a[Partition(s for s in split if s)]
        if va == 0:
            continue
        total += va * b[Partition(j - s for j, s in zip(J, split) if j - s)]
    return total


def character_product(a: PontryaginCharacter, b: PontryaginCharacter) -> PontryaginCharacter:
    """Characteristic numbers of ``M x N`` by the Whitney sum formula."""
    if a.variables != b.variables:
        raise UsageError(f"variable family mismatch: {a.variables} vs {b.variables}")
    dim = a.dimension + b.dimension
    out = PontryaginCharacter(dim, a.variables)
    if a.is_zero() or b.is_zero():
        return out
    wa = a.weight
    return PontryaginCharacter(dim, a.variables, {J: _split_number(J, a, b, wa) for J in partitions_of(out.weight)})


Generators = tuple  # sorted (descending) tuple of n for the factors [CP^n]


def _monomial_degree(key: Generators) -> int:
    return 2 * sum(key)


@dataclass(frozen=True, eq=False)
class BordismElement:
    """A homogeneous Q-linear combination of products of the ``[CP^n]``.

    ``terms`` maps a descending tuple such as ``(4, 2, 2)`` (for
    ``[CP^4][CP^2]^2``) to its coefficient; ``()`` is the point.
    """

    terms: Mapping[Generators, Fraction]
    degree: int

    def __post_init__(self):
        clean = {}
        for key, c in self.terms.items():
            key = tuple(sorted((int(k) for k in key), reverse=True))
            if key and key[-1] < 1:
                raise UsageError("generators are CP^n with n >= 1")
            c = Fraction(c)
            if c == 0:
                continue
            if _monomial_degree(key) != self.degree:
                raise UsageError(f"monomial {format_generators(key)} has degree {_monomial_degree(key)}, element has {self.degree}")
            clean[key] = clean.get(key, 0) + c
        object.__setattr__(self, "terms", {k: v for k, v in sorted(clean.items(), key=_gen_sort) if v != 0})

    @classmethod
    def generator(cls, n: int) -> "BordismElement":
        return cls({(n,): 1}, 2 * n)

    @classmethod
    def zero(cls, degree: int) -> "BordismElement":
        return cls({}, degree)

    @classmethod
    def point(cls) -> "BordismElement":
        return cls({(): 1}, 0)

    def __eq__(self, other):
        if not isinstance(other, BordismElement):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, BordismElement):
            return NotImplemented
        if other.degree != self.degree:
            raise UsageError(f"cannot add elements of degrees {self.degree} and {other.degree}")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BordismElement(out, self.degree)

    def __neg__(self):
        return BordismElement({k: -c for k, c in self.terms.items()}, self.degree)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return BordismElement({k: c * other for k, c in self.terms.items()}, self.degree)
        if not isinstance(other, BordismElement):
            return NotImplemented
        out = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = tuple(sorted(ka + kb, reverse=True))
                out[k] = out.get(k, 0) + ca * cb
        return BordismElement(out, self.degree + other.degree)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = BordismElement.point()
        for _ in range(n):
            out = out * self
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for i, (k, c) in enumerate(self.terms.items()):
            mono = format_generators(k)
            a = abs(c)
            body = mono if (a == 1 and mono) else (f"{a}*{mono}" if mono else str(a))
            if i == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __repr__(self):
        return f"BordismElement({self}, degree={self.degree})"

    def to_json(self) -> dict:
        return {"degree": self.degree, "terms": [{"generators": list(k), "coeff": str(c)} for k, c in self.terms.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "BordismElement":
        return cls({tuple(t["generators"]): Fraction(t["coeff"]) for t in data["terms"]}, data["degree"])


def _gen_sort(item):
    key = item[0]
    return (_monomial_degree(key), tuple(-k for k in key))


def format_generators(key: Generators) -> str:
    counts = {}
    for n in key:
        counts[n] = counts.get(n, 0) + 1
    return "*".join(f"CP{n}" if e == 1 else f"CP{n}^{e}" for n, e in sorted(counts.items(), reverse=True))


@lru_cache(maxsize=None)
def monomial_character(key: Generators, variables: str = PONTRYAGIN) -> PontryaginCharacter:
    out = point_character(variables)
    for n in key:
        out = character_product(out, cpn_character(n, variables))
    return out


def element_character(e: BordismElement, variables: str = PONTRYAGIN) -> PontryaginCharacter:
    total = PontryaginCharacter(e.degree, variables)
    for key, c in e.terms.items():
        total = total + monomial_character(key, variables).scale(c)
    return total


def elements_equal(a: BordismElement, b: BordismElement) -> bool:
    """Equality in the rational oriented bordism ring, decided by Pontryagin numbers."""
    if a.degree != b.degree:
        return False
    return element_character(a) == element_character(b)


def generator_basis(degree: int) -> tuple[list[Partition], list[Generators], list[list[Fraction]]]:
    """Rows ``p_J`` (J of weight degree/4), columns the monomials in ``[CP^2], [CP^4], ...``."""
    if degree % 4:
        raise UsageError(f"oriented bordism is rationally zero in degree {degree}")
    w = degree // 4
    rows = list(partitions_of(w))
    cols = [tuple(2 * p for p in lam) for lam in partitions_of(w)]
    chars = [monomial_character(k) for k in cols]
    return rows, cols, [[ch[J] for ch in chars] for J in rows]


def determinant(matrix: list[list[Fraction]]) -> Fraction:
    m = [list(map(Fraction, row)) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        pivot = next((r for r in range(i, n) if m[r][i] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != i:
            m[i], m[pivot] = m[pivot], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            if f:
                for c in range(i, n):
                    m[r][c] -= f * m[i][c]
    return det


def solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan over Q; raises ``InvariantViolation`` on a singular matrix."""
    n = len(matrix)
    m = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for i in range(n):
        pivot = next((r for r in range(i, n) if m[r][i] != 0), None)
        if pivot is None:
            raise InvariantViolation("characteristic-number matrix is singular")
        m[i], m[pivot] = m[pivot], m[i]
        inv = 1 / m[i][i]
        m[i] = [v * inv for v in m[i]]
        for r in range(n):
            if r != i and m[r][i] != 0:
                f = m[r][i]
                m[r] = [a - f * b for a, b in zip(m[r], m[i])]
    return [row[n] for row in m]


def express_in_generator_basis(c: PontryaginCharacter) -> dict[Generators, Fraction]:
    """The unique combination of monomials in the even ``[CP^2k]`` with characteristic numbers ``c``."""
    if c.variables != PONTRYAGIN:
        raise UsageError("generator-basis expansion is defined for Pontryagin numbers")
    if c.dimension % 4:
        raise UsageError(f"dimension {c.dimension} is not divisible by 4")
    rows, cols, matrix = generator_basis(c.dimension)
    coeffs = solve_exact(matrix, [c[J] for J in rows])
    return {k: v for k, v in zip(cols, coeffs) if v != 0}


def genus_eval(ms: MultiplicativeSequence, c: PontryaginCharacter):
    """``<K(p_1, ..., p_k), [N]>``."""
    if ms.variables != c.variables:
        raise UsageError(f"genus uses {ms.variables} variables but the manifold data are {c.variables} numbers")
    w = c.weight
    if w is None:
        return zero(ms.q_order)
    K = ms.K(w)
    total = zero(ms.q_order)
    for J, v in c.numbers.items():
        k = K.get(J)
        if k is not None:
            total = total + k * v
    return total


def evaluate_element(ms: MultiplicativeSequence, e: BordismElement):
    return genus_eval(ms, element_character(e, ms.variables))


# --- expression parser ----------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<gen>CP(?P<n>\d+))|(?P<op>[-+*^]))")


class ExpressionError(UsageError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ExpressionError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup if m.lastgroup != "n" else "gen")
        if m.group("num"):
            tokens.append(("num", m.group("num"), start))
        elif m.group("gen"):
            tokens.append(("gen", m.group("n"), start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    return tokens


def parse_element(text: str) -> BordismElement:
    """Parse e.g. ``"3*CP2^2 - 2*CP4"`` or ``"1/2*CP2*CP4"``; the result must be homogeneous."""
    tokens = _tokenize(text)
    if not tokens:
        raise ExpressionError("empty expression", 0)
    i = 0
    monomials = []  # (coeff, generators, position)

    def peek():
        return tokens[i] if i < len(tokens) else ("end", "", len(text))

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        coeff = Fraction(sign)
        gens = []
        start = peek()[2]
        expect_factor = True
        while expect_factor:
            kind, val, pos = peek()
            if kind == "num":
                i += 1
                coeff *= Fraction(val)
            elif kind == "gen":
                i += 1
                n = int(val)
                if n < 1:
                    raise ExpressionError("CP0 is not a generator", pos)
                exp = 1
                if peek()[:2] == ("op", "^"):
                    i += 1
                    k2, v2, p2 = peek()
                    if k2 != "num" or "/" in v2:
                        raise ExpressionError("expected an integer exponent", p2)
                    i += 1
                    exp = int(v2)
                gens.extend([n] * exp)
            else:
                raise ExpressionError(f"expected a number or CP<n>, got {val or 'end of input'!r}", pos)
            if peek()[:2] == ("op", "*"):
                i += 1
            else:
                expect_factor = False
        monomials.append((coeff, tuple(sorted(gens, reverse=True)), start))
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise ExpressionError(f"unexpected {val!r}", pos)
    degree = _monomial_degree(monomials[0][1])
    terms = {}
    for coeff, key, pos in monomials:
        if _monomial_degree(key) != degree:
            raise ExpressionError(f"inhomogeneous expression: degree {_monomial_degree(key)} vs {degree}", pos)
        terms[key] = terms.get(key, 0) + coeff
    return BordismElement(terms, degree)
