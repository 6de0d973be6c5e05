"""Formal fibration calculus for vertical genera.

The cohomology of a total space is modelled as a free algebra over the base:
fibre generators ``p_k^pi`` (degree 4k) for each declared fibration, times
base symbols ``p_J(pi)`` (degree 4|J| - q) that stand for push-forwards.
The Umkehr map sends a fibre monomial to the product of the partition-indexed
base symbols it determines, one per fibration, and is linear over the base.

Base symbols are free: ``p_(1,1)(pi)`` is not ``p_(1)(pi)^2``. Symbols of
negative degree vanish, as does the push-forward of 1 (fibre dimension >= 1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, UsageError, ValidationError
from .multiseq import CHERN, PONTRYAGIN, VARIABLES, MultiplicativeSequence, degree_unit
from .partitions import Partition
from .polynomial import GradedPoly, monomial_degree
from .scalars import QScalar, scalar_from_json, scalar_to_json

_ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class FormalFibration:
    """A vertically oriented fibration with fibre dimension ``fibre_dim``; ``sign`` is its orientation."""

    id: str
    fibre_dim: int
    sign: int = 1
    variables: str = PONTRYAGIN

    def __post_init__(self):
        if not isinstance(self.id, str) or not _ID_RE.match(self.id):
            raise ValidationError(f"fibration id: {self.id!r} is not an identifier")
        if not isinstance(self.fibre_dim, int) or self.fibre_dim < 1:
            raise ValidationError(f"fibration {self.id}: fibre_dim must be a positive integer")
        if self.sign not in (1, -1):
            raise ValidationError(f"fibration {self.id}: sign must be +1 or -1")
        if self.variables not in VARIABLES:
            raise ValidationError(f"fibration {self.id}: unknown variables {self.variables!r}")

    @property
    def unit(self) -> int:
        return degree_unit(self.variables)

    def generator(self, k: int) -> GradedPoly:
        return GradedPoly.gen(FibreGenerator(self.id, k, self.unit))

    def symbol(self, J) -> "VerticalSymbol":
        return VerticalSymbol(self.id, J if isinstance(J, Partition) else Partition(J), self.fibre_dim, self.unit)

    def to_json(self) -> dict:
        out = {"id": self.id, "fibre_dim": self.fibre_dim, "sign": self.sign}
        if self.variables != PONTRYAGIN:
            out["variables"] = self.variables
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "FormalFibration":
        unknown = set(data) - {"id", "fibre_dim", "sign", "variables"}
        if unknown:
            raise ValidationError(f"fibration: unknown field(s) {sorted(unknown)}")
        if "id" not in data or "fibre_dim" not in data:
            raise ValidationError("fibration: 'id' and 'fibre_dim' are required")
        return cls(data["id"], int(data["fibre_dim"]), int(data.get("sign", 1)), data.get("variables", PONTRYAGIN))

    @classmethod
    def parse(cls, text: str, variables: str = PONTRYAGIN) -> "FormalFibration":
        """Parse the CLI form ``id=pi1,q=2,sign=-1``."""
        fields = {}
        for item in text.split(","):
            if "=" not in item:
                raise ValidationError(f"fibration: expected key=value, got {item!r}")
            k, v = (s.strip() for s in item.split("=", 1))
            fields[k] = v
        unknown = set(fields) - {"id", "q", "sign"}
        if unknown or "id" not in fields or "q" not in fields:
            raise ValidationError(f"fibration: expected id=<s>,q=<n>[,sign=<+-1>], got {text!r}")
        try:
            q = int(fields["q"])
            sign = int(fields.get("sign", "1"))
        except ValueError as exc:
            raise ValidationError(f"fibration: {exc}") from None
        return cls(fields["id"], q, sign, variables)


@dataclass(frozen=True)
class FibreGenerator:
    """``p_k`` of the vertical tangent bundle of one fibration (``c_k`` in Chern mode)."""

    fibration: str
    k: int
    unit: int = 4

    @property
    def degree(self) -> int:
        return self.unit * self.k

    @property
    def name(self) -> str:
        letter = "p" if self.unit == 4 else "c"
        return f"{letter}_{self.k}^{{{self.fibration}}}"

    def sort_key(self):
        return (0, self.fibration, self.k)


@dataclass(frozen=True)
class VerticalSymbol:
    """The base class ``p_J(pi) = pi_!(p_J(T_pi))``."""

    fibration: str
    partition: Partition
    fibre_dim: int
    unit: int = 4

    @property
    def degree(self) -> int:
        return self.unit * self.partition.weight - self.fibre_dim

    @property
    def name(self) -> str:
        letter = "p" if self.unit == 4 else "c"
        return f"{letter}[{','.join(map(str, self.partition))}]({self.fibration})"

    def sort_key(self):
        return (1, self.fibration, self.partition.sort_key())


FibreClass = GradedPoly
BaseClass = GradedPoly


def base_normalize(v: GradedPoly, base_dim: int | None = None) -> GradedPoly:
    """Drop monomials containing a negative-degree symbol, or above ``base_dim``."""

    def keep(m):
        if any(isinstance(s, VerticalSymbol) and s.degree < 0 for s, _ in m):
            return None
        if base_dim is not None and monomial_degree(m) > base_dim:
            return None
        return 1, m

    return v.map_monomials(keep)


def base_symbol(pi: FormalFibration, J, base_dim: int | None = None) -> BaseClass:
    return base_normalize(GradedPoly.gen(pi.symbol(J)), base_dim)


def _check_distinct(fibs: Sequence[FormalFibration]):
    ids = [f.id for f in fibs]
    if len(set(ids)) != len(ids):
        raise UsageError(f"fibration ids must be distinct: {ids}")
    units = {f.unit for f in fibs}
    if len(units) > 1:
        raise UsageError("cannot mix Pontryagin and Chern fibrations")


def total_vertical_pontryagin(pi: FormalFibration, max_degree: int) -> FibreClass:
    """``1 + p_1^pi + p_2^pi + ...`` up to degree ``max_degree``."""
    if max_degree < 0:
        raise UsageError("max_degree must be >= 0")
    out = GradedPoly.constant(Fraction(1))
    for k in range(1, max_degree // pi.unit + 1):
        out = out + pi.generator(k)
    return out


def total_class(fibs: Sequence[FormalFibration], max_degree: int) -> FibreClass:
    """Total class of the fibre product: the product of the individual total classes."""
    _check_distinct(fibs)
    out = GradedPoly.constant(Fraction(1))
    for pi in fibs:
        out = out.mul(total_vertical_pontryagin(pi, max_degree), max_degree)
    return out


def fibre_product_total(pi: FormalFibration, pi2: FormalFibration, max_degree: int) -> FibreClass:
    if pi.id == pi2.id:
        raise UsageError(f"fibre product of {pi.id!r} with itself needs a second id")
    return total_class([pi, pi2], max_degree)


def umkehr(fibs: Sequence[FormalFibration], v: FibreClass, base_dim: int | None = None) -> BaseClass:
    """Integration over the fibre of the fibre product of ``fibs``.

    Monomial by monomial: base symbols pass through (projection formula); the
    fibre part of each fibration becomes ``sign * p_J(pi)`` with J read off
    from the exponents. A fibration contributing no generator sends the term
    to 0.
    """
    _check_distinct(fibs)
    by_id = {f.id: f for f in fibs}
    sign = 1
    for f in fibs:
        sign *= f.sign

    def push(m):
        parts = {fid: [] for fid in by_id}
        base = []
        for s, e in m:
            if isinstance(s, FibreGenerator):
                if s.fibration not in by_id:
                    raise UsageError(f"fibre generator {s.name} belongs to no fibration being integrated")
                parts[s.fibration].extend([s.k] * e)
            else:
                base.append((s, e))
        for fid, ks in parts.items():
            if not ks:
                return None
            base.append((by_id[fid].symbol(Partition(ks)), 1))
        return sign, tuple(sorted(_merge(base), key=lambda t: t[0].sort_key()))

    return base_normalize(v.map_monomials(push), base_dim)


def _merge(pairs):
    merged = {}
    for s, e in pairs:
        merged[s] = merged.get(s, 0) + e
    return merged.items()


def vertical_class(pi: FormalFibration, J, base_dim: int | None = None) -> BaseClass:
    """``p_J`` of the bordism class of ``pi``: ``sign(pi) * p_J(pi)``."""
    return base_symbol(pi, J, base_dim) * pi.sign


def reverse_orientation(pi: FormalFibration) -> FormalFibration:
    return replace(pi, sign=-pi.sign)


def kappa_of_total(ms: MultiplicativeSequence, t: FibreClass, max_degree: int) -> FibreClass:
    """``sum_m K_m(t_1, ..., t_m)`` where ``t_k`` is the degree-(unit*k) part of ``t``."""
    unit = degree_unit(ms.variables)
    if t.constant_term() != 1:
        raise DomainError("a total class must have constant term 1")
    if any(d % unit for d in t.degrees()):
        raise UsageError(f"total class has components outside degrees divisible by {unit}")
    w = max_degree // unit
    if w > ms.max_weight:
        raise UsageError(f"multiplicative sequence reaches weight {ms.max_weight}; degree {max_degree} needs {w}")
    components = [t.homogeneous(unit * k) for k in range(1, w + 1)]
    parts = ms.apply(components, w, unit=GradedPoly.constant(Fraction(1)))
    out = GradedPoly()
    for p in parts:
        out = out + p
    return out


def fibre_degree_bound(fibs: Sequence[FormalFibration], max_degree: int) -> int:
    return max_degree + sum(f.fibre_dim for f in fibs)


def vertical_genus(
    ms: MultiplicativeSequence,
    fibs: Sequence[FormalFibration],
    max_degree: int,
    base_dim: int | None = None,
) -> BaseClass:
    """``(fibre product)_!( kappa(p(T)) )`` truncated to base degrees ``<= max_degree``."""
    if not fibs:
        raise UsageError("a vertical genus needs at least one fibration")
    _check_distinct(fibs)
    if fibs[0].unit != degree_unit(ms.variables):
        raise UsageError(f"genus uses {ms.variables} variables but fibrations use {fibs[0].variables}")
    bound = fibre_degree_bound(fibs, max_degree)
    kappa = kappa_of_total(ms, total_class(fibs, bound), bound)
    out = umkehr(fibs, kappa, base_dim)
    return out.truncate(max_degree)


def vertical_genus_linear(
    ms: MultiplicativeSequence,
    combination: Iterable[tuple[object, Sequence[FormalFibration]]],
    max_degree: int,
    base_dim: int | None = None,
) -> BaseClass:
    """Vertical genus of a formal Q-combination of fibre products (disjoint unions)."""
    out = GradedPoly()
    for coeff, fibs in combination:
        out = out + vertical_genus(ms, fibs, max_degree, base_dim) * coeff
    return out


def cup(a: BaseClass, b: BaseClass, max_degree: int | None = None, base_dim: int | None = None) -> BaseClass:
    bound = max_degree if base_dim is None else (base_dim if max_degree is None else min(max_degree, base_dim))
    return a.mul(b, bound)


@dataclass(frozen=True)
class DegreeComparison:
    degree: int
    product: BaseClass  # genus of the fibre product
    cup: BaseClass  # cup product of the individual genera

    @property
    def ok(self) -> bool:
        return self.product == self.cup


@dataclass(frozen=True)
class MultiplicativityReport:
    fibrations: tuple
    max_degree: int
    rows: tuple

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def lines(self) -> list[str]:
        out = []
        for r in self.rows:
            status = "OK" if r.ok else "MISMATCH"
            if r.ok:
                out.append(f"deg {r.degree}: {r.product.render()}  [{status}]")
            else:
                out.append(f"deg {r.degree}: {r.product.render()}  vs  {r.cup.render()}  [{status}]")
        return out


def check_multiplicativity_many(
    ms: MultiplicativeSequence,
    fibs: Sequence[FormalFibration],
    max_degree: int,
    base_dim: int | None = None,
) -> MultiplicativityReport:
    """Compare the genus of the fibre product with the cup product of the genera, degree by degree."""
    _check_distinct(fibs)
    lhs = vertical_genus(ms, fibs, max_degree, base_dim)
    rhs = GradedPoly.constant(Fraction(1))
    for pi in fibs:
        rhs = cup(rhs, vertical_genus(ms, [pi], max_degree, base_dim), max_degree, base_dim)
    degrees = sorted(set(lhs.degrees()) | set(rhs.degrees()))
    rows = tuple(DegreeComparison(d, lhs.homogeneous(d), rhs.homogeneous(d)) for d in degrees)
    return MultiplicativityReport(tuple(f.id for f in fibs), max_degree, rows)


def check_multiplicativity(
    ms: MultiplicativeSequence,
    pi: FormalFibration,
    pi2: FormalFibration,
    max_degree: int,
    base_dim: int | None = None,
) -> MultiplicativityReport:
    return check_multiplicativity_many(ms, [pi, pi2], max_degree, base_dim)


def rename_fibrations(v: GradedPoly, mapping: Mapping[str, str]) -> GradedPoly:
    """Pull back along a base map by renaming fibrations (symbols are free, so this is the whole pull-back)."""

    def sym(s):
        if s.fibration in mapping:
            return replace(s, fibration=mapping[s.fibration])
        return s

    return v.rename(sym)


# --- JSON -----------------------------------------------------------------

_SYMBOL_RE = re.compile(r"^([pc])\[([0-9,]*)\]\(([A-Za-z_][A-Za-z0-9_']*)\)$")
_GEN_RE = re.compile(r"^([pc])_(\d+)\^\{([A-Za-z_][A-Za-z0-9_']*)\}$")


def base_class_to_json(v: GradedPoly) -> list:
    return [
        {"monomial": [[s.name, e] for s, e in m], "coeff": scalar_to_json(c)}
        for m, c in v.sorted_terms()
    ]


def parse_symbol(name: str, fibrations: Mapping[str, FormalFibration]):
    m = _SYMBOL_RE.match(name)
    if m:
        fib = fibrations.get(m.group(3))
        if fib is None:
            raise ValidationError(f"symbol {name!r} refers to an undeclared fibration")
        parts = [int(p) for p in m.group(2).split(",") if p]
        return fib.symbol(parts)
    m = _GEN_RE.match(name)
    if m:
        fib = fibrations.get(m.group(3))
        if fib is None:
            raise ValidationError(f"symbol {name!r} refers to an undeclared fibration")
        return FibreGenerator(fib.id, int(m.group(2)), fib.unit)
    raise ValidationError(f"unrecognised symbol {name!r}")


def base_class_from_json(data: list, fibrations: Iterable[FormalFibration]) -> GradedPoly:
    fibs = {f.id: f for f in fibrations}
    return GradedPoly.from_terms(
        (scalar_from_json(t["coeff"]), [(parse_symbol(n, fibs), int(e)) for n, e in t["monomial"]]) for t in data
    )
