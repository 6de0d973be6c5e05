"""Multiplicative sequences.

A power series ``g(z) = 1 + g_1 z + ...`` determines polynomials ``K_m`` in
abstract weight-graded variables ``b_1, b_2, ...`` through

    prod_i g(beta_i z) = sum_m K_m(b_1, ..., b_m) z^m,   b_j = e_j(beta).

``K_m`` is found by expanding the product in ``m`` formal roots and rewriting
the result in elementary symmetric polynomials, pivoting on the
lexicographically leading monomial. The cohomological degree of ``b_j``
(4j for Pontryagin, 2j for Chern classes) only matters to the callers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Mapping, Sequence

from .errors import InvariantViolation, UsageError, ValidationError
from .partitions import EMPTY, Partition, partitions_of
from .scalars import QScalar, Scalar, is_unit, one, q_order_of, scalar_from_json, scalar_to_json, zero
from .series import (
    TruncatedSeries,
    builtin_series,
    e_from_log,
    f_from_e,
    log_from_cp_values,
    normalize_leading,
)

PONTRYAGIN = "pontryagin"
CHERN = "chern"
VARIABLES = (PONTRYAGIN, CHERN)

# builtin genus -> (variable family, series family)
BUILTIN_GENERA = {
    "signature": PONTRYAGIN,
    "a_hat": PONTRYAGIN,
    "todd": CHERN,
    "witten": PONTRYAGIN,
    "trivial": PONTRYAGIN,
}
_ALIASES = {"L": "signature", "l": "signature", "A_hat": "a_hat", "ahat": "a_hat", "Td": "todd"}

_DEFINITION_FIELDS = ("builtin", "e_series", "f_series", "cp_values", "g_series")


def degree_unit(variables: str) -> int:
    """Cohomological degree of a weight-one variable."""
    return 4 if variables == PONTRYAGIN else 2


@dataclass(frozen=True)
class GenusSpec:
    """One of five equivalent ways to name a genus.

    Exactly one of ``builtin``, ``e_series``, ``f_series``, ``cp_values`` and
    ``g_series`` must be set. Coefficient lists index powers of ``x`` (or ``z``
    for ``g_series``); ``cp_values`` lists the values on CP^2, CP^4, ...
    """

    variables: str = PONTRYAGIN
    builtin: str | None = None
    e_series: tuple | None = None
    f_series: tuple | None = None
    cp_values: tuple | None = None
    g_series: tuple | None = None
    q_order: int = 0

    def __post_init__(self):
        if self.variables not in VARIABLES:
            raise ValidationError(f"variables: expected 'pontryagin' or 'chern', got {self.variables!r}")
        present = [f for f in _DEFINITION_FIELDS if getattr(self, f) is not None]
        if len(present) != 1:
            raise ValidationError(
                f"genus: exactly one of {', '.join(_DEFINITION_FIELDS)} must be given (got {present or 'none'})"
            )
        if self.builtin is not None:
            name = _ALIASES.get(self.builtin, self.builtin)
            if name not in BUILTIN_GENERA:
                raise ValidationError(f"genus: unknown builtin {self.builtin!r}; expected one of {', '.join(BUILTIN_GENERA)}")
            object.__setattr__(self, "builtin", name)
            if BUILTIN_GENERA[name] != self.variables:
                raise ValidationError(f"variables: builtin {name!r} uses {BUILTIN_GENERA[name]} variables")
            if name != "witten" and self.q_order:
                raise ValidationError(f"q_order: builtin {name!r} has rational values; q_order must be 0")
        if self.q_order < 0:
            raise ValidationError("q_order: must be >= 0")
        if self.cp_values is not None and self.variables != PONTRYAGIN:
            raise ValidationError("cp_values: only defined for Pontryagin-variable genera")
        for f in _DEFINITION_FIELDS[1:]:
            v = getattr(self, f)
            if v is not None:
                object.__setattr__(self, f, tuple(v))

    @classmethod
    def named(cls, name: str, q_order: int = 0) -> "GenusSpec":
        name = _ALIASES.get(name, name)
        if name not in BUILTIN_GENERA:
            raise ValidationError(f"genus: unknown builtin {name!r}; expected one of {', '.join(BUILTIN_GENERA)}")
        return cls(variables=BUILTIN_GENERA[name], builtin=name, q_order=q_order if name == "witten" else 0)

    @property
    def name(self) -> str:
        return self.builtin or next(f for f in _DEFINITION_FIELDS if getattr(self, f) is not None)

    def to_json(self) -> dict:
        out = {"variables": self.variables}
        for f in _DEFINITION_FIELDS:
            v = getattr(self, f)
            if v is not None:
                out[f] = v if f == "builtin" else [scalar_to_json(c) for c in v]
        out["q_order"] = self.q_order
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "GenusSpec":
        unknown = set(data) - {"variables", "q_order", *_DEFINITION_FIELDS}
        if unknown:
            raise ValidationError(f"genus: unknown field(s) {sorted(unknown)}")
        kwargs = {"q_order": int(data.get("q_order", 0))}
        if "builtin" in data and "variables" not in data:
            name = _ALIASES.get(data["builtin"], data["builtin"])
            kwargs["variables"] = BUILTIN_GENERA.get(name, PONTRYAGIN)
        else:
            kwargs["variables"] = data.get("variables", PONTRYAGIN)
        for f in _DEFINITION_FIELDS:
            if f in data:
                kwargs[f] = data[f] if f == "builtin" else tuple(scalar_from_json(c) for c in data[f])
        return cls(**kwargs)


@dataclass(frozen=True)
class MultiplicativeSequence:
    """``table[m]`` maps each partition J of m to the coefficient of ``b_J`` in ``K_m``."""

    max_weight: int
    table: tuple
    variables: str = PONTRYAGIN
    q_order: int | None = None

    def K(self, m: int) -> dict[Partition, Scalar]:
        if m > self.max_weight:
            raise UsageError(f"multiplicative sequence only computed to weight {self.max_weight}, need {m}")
        return self.table[m]

    def coeff(self, J: Partition) -> Scalar:
        return self.K(J.weight).get(J, zero(self.q_order))

    def apply(self, components: Sequence, max_weight: int | None = None, unit=None) -> list:
        """Evaluate ``K_0, ..., K_w`` on graded components ``[b_1, ..., b_w]``.

        ``components`` may hold any commutative ring elements supporting ``+``
        and ``*`` with scalars; ``unit`` is that ring's one. Products of
        components are cached by partition prefix.
        """
        w = len(components) if max_weight is None else max_weight
        if w > self.max_weight:
            raise UsageError(f"multiplicative sequence only computed to weight {self.max_weight}, need {w}")
        if unit is None:
            unit = Fraction(1)
        cache = {(): unit}

        def b_prod(parts: tuple):
            if parts not in cache:
                cache[parts] = b_prod(parts[:-1]) * components[parts[-1] - 1]
            return cache[parts]

        out = []
        for m in range(w + 1):
            total = None
            for J, c in self.table[m].items():
                term = b_prod(J.parts) * c
                total = term if total is None else total + term
            out.append(total if total is not None else unit * 0)
        return out

    def to_json(self) -> list:
        return [
            {
                "weight": m,
                "terms": [{"partition": list(J.parts), "coeff": scalar_to_json(c)} for J, c in sorted(self.table[m].items())],
            }
            for m in range(self.max_weight + 1)
        ]

    @classmethod
    def from_json(cls, data: list, variables: str = PONTRYAGIN) -> "MultiplicativeSequence":
        table = []
        q_order = None
        for m, entry in enumerate(data):
            if entry["weight"] != m:
                raise ValidationError("K-table JSON must list weights 0, 1, 2, ... in order")
            row = {}
            for t in entry["terms"]:
                J = Partition(t["partition"])
                if J.weight != m:
                    raise ValidationError(f"partition {J} has the wrong weight for K_{m}")
                c = scalar_from_json(t["coeff"])
                q_order = q_order_of(c) if q_order is None else q_order
                row[J] = c
            table.append(row)
        return cls(len(table) - 1, tuple(table), variables, q_order)

    def render_lines(self, skip_zero: bool = True) -> list[str]:
        lines = []
        for m in range(self.max_weight + 1):
            if skip_zero and m and not self.table[m]:
                continue
            lines.append(f"K_{m} = {format_kappa(self.table[m])}")
        return lines


def _b_monomial(J: Partition) -> str:
    mult = sorted(J.multiplicities().items())
    return "*".join(f"b{j}" if k == 1 else f"b{j}^{k}" for j, k in mult)


def format_kappa(terms: Mapping[Partition, Scalar]) -> str:
    """Render e.g. ``(7*b1^2 - 4*b2)/5760``: positive terms first, shared denominator pulled out."""
    items = sorted(((J, c) for J, c in terms.items() if c != 0), key=lambda t: t[0])
    if not items:
        return "0"
    if any(isinstance(c, QScalar) for _, c in items):
        parts = []
        for J, c in items:
            mono = _b_monomial(J)
            parts.append(str(c) if not mono else f"{c}*{mono}")
        return " + ".join(parts)
    if len(items) == 1:
        J, c = items[0]
        mono = _b_monomial(J)
        if not mono:
            return str(c)
        sign = "-" if c < 0 else ""
        a = abs(c)
        if a == 1:
            return sign + mono
        if a.denominator == 1:
            return f"{sign}{a}*{mono}"
        return f"{sign}({a})*{mono}"
    den = 1
    for _, c in items:
        den = den * c.denominator // _gcd(den, c.denominator)
    items.sort(key=lambda t: t[1] < 0)
    body = ""
    for i, (J, c) in enumerate(items):
        n = c * den
        mono = _b_monomial(J)
        a = abs(n)
        piece = mono if (a == 1 and mono) else (f"{a}*{mono}" if mono else f"{a}")
        if i == 0:
            body = ("-" if n < 0 else "") + piece
        else:
            body += (" - " if n < 0 else " + ") + piece
    return f"({body})/{den}" if den != 1 else body


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def g_from_f(f: TruncatedSeries, variables: str = PONTRYAGIN) -> TruncatedSeries:
    """The series with ``kappa(1 + z) = g(z)``.

    For Pontryagin variables ``b_1 = sum x_i^2``, so ``g(z) = sum a_k z^k``
    where ``f(x) = sum a_k x^(2k)``. For Chern variables ``g = f``.
    """
    if f.coeffs[0] != 1:
        raise ValidationError("a characteristic series must have constant term 1")
    if variables == CHERN:
        return f
    if variables != PONTRYAGIN:
        raise ValidationError(f"unknown variable family {variables!r}")
    if not f.is_even():
        raise ValidationError("Pontryagin-variable genera need an even characteristic series")
    return TruncatedSeries(f.coeffs[0::2], f.q_order)


@lru_cache(maxsize=None)
def _count_01(rows: tuple, cols: tuple) -> int:
    """Number of 0-1 matrices with the given row sums and (sorted, positive) column sums."""
    if not rows:
        return 0 if cols else 1
    r, rest = rows[0], rows[1:]
    if r > len(cols) or sum(rows) != sum(cols):
        return 0
    groups = sorted(Counter(cols).items(), reverse=True)
    total = 0

    def choose(i: int, left: int, mult: int, new_cols: list):
        nonlocal total
        if i == len(groups):
            if left == 0:
                nxt = tuple(sorted((c for c in new_cols if c > 0), reverse=True))
                total += mult * _count_01(rest, nxt)
            return
        value, count = groups[i]
        for k in range(min(count, left) + 1):
            choose(i + 1, left - k, mult * comb(count, k), new_cols + [value - 1] * k + [value] * (count - k))

    choose(0, r, 1, [])
    return total


@lru_cache(maxsize=None)
def elementary_expansion(nu: Partition, nroots: int) -> dict:
    """Coefficients of the monomials ``x^mu`` (mu a partition) in ``e_nu(x_1, ..., x_nroots)``."""
    if nu and nu[0] > nroots:
        return {}
    out = {}
    for mu in partitions_of(nu.weight):
        if len(mu) > nroots:
            continue
        c = _count_01(nu.parts, mu.parts)
        if c:
            out[mu] = c
    return out


def kappa_weight(g: TruncatedSeries, m: int, nroots: int | None = None) -> dict[Partition, Scalar]:
    """``K_m`` as a map partition -> coefficient, computed with ``nroots`` formal roots (default ``m``).

    The degree-m part of ``prod_i g(beta_i)`` is symmetric; its coefficient on
    the monomial ``beta^lambda`` is ``prod_k g_{lambda_k}``. Only coefficients on
    partition-shaped exponents are tracked, which determines a symmetric
    polynomial completely.
    """
    if nroots is None:
        nroots = m
    if nroots < m:
        raise UsageError(f"K_{m} needs at least {m} formal roots, got {nroots}")
    if m > g.order:
        raise UsageError(f"g has order {g.order}; K_{m} needs order >= {m}")
    residue = {}
    for lam in partitions_of(m):
        if len(lam) <= nroots:
            c = prod((g.coeffs[p] for p in lam), start=one(g.q_order))
            if c != 0:
                residue[lam] = c
    K = {}
    for lam in partitions_of(m):  # canonical order == lex-leading first
        c = residue.pop(lam, None)
        if c is None or c == 0:
            continue
        J = lam.conjugate()
        expansion = elementary_expansion(J, nroots)
        if expansion.get(lam) != 1:
            raise InvariantViolation(f"leading monomial of e_{J} is not beta^{lam}")
        K[J] = c
        for mu, n in expansion.items():
            if mu == lam:
                continue
            if mu.sort_key() < lam.sort_key():
                raise InvariantViolation(f"e_{J} has a monomial {mu} above its leading term {lam}")
            residue[mu] = residue.get(mu, zero(g.q_order)) - c * n
    if any(v != 0 for v in residue.values()):
        raise InvariantViolation("symmetric reduction left a non-zero residue")
    return dict(sorted(K.items()))


def kappa_polynomials(
    g: TruncatedSeries, max_weight: int, variables: str = PONTRYAGIN, nroots_extra: int = 0
) -> MultiplicativeSequence:
    """The K-table up to ``max_weight``; ``K_m`` uses ``m + nroots_extra`` roots."""
    if g.coeffs[0] != 1:
        raise ValidationError("g must have constant term 1")
    if max_weight < 0:
        raise UsageError("max_weight must be >= 0")
    if max_weight > g.order:
        raise UsageError(f"g has order {g.order}; a K-table to weight {max_weight} needs order >= {max_weight}")
    table = tuple(kappa_weight(g, m, m + nroots_extra) if m else {EMPTY: one(g.q_order)} for m in range(max_weight + 1))
    return MultiplicativeSequence(max_weight, table, variables, g.q_order)


def cp_values_from_f(f: TruncatedSeries, n_max: int) -> list[Scalar]:
    """``[phi(CP^1), ..., phi(CP^n_max)]`` with ``phi(CP^n) = [x^n] f(x)^(n+1)``."""
    if f.coeffs[0] != 1:
        raise ValidationError("a characteristic series must have constant term 1")
    if n_max > f.order:
        raise UsageError(f"f has order {f.order}; CP^{n_max} needs order >= {n_max}")
    out = []
    power = f
    for n in range(1, n_max + 1):
        power = power * f
        out.append(power.coeffs[n])
    return out


def series_order_for(variables: str, max_weight: int) -> int:
    """Order in ``x`` of the characteristic series needed for weight ``max_weight``."""
    return 2 * max_weight if variables == PONTRYAGIN else max_weight


def characteristic_series(spec: GenusSpec, order: int) -> TruncatedSeries:
    """Resolve any genus description to its characteristic series ``f`` (at least to ``order``)."""
    oriented = spec.variables == PONTRYAGIN
    if spec.builtin is not None:
        name = spec.builtin
        if name == "todd":
            f = builtin_series("todd_Q", order)
        elif name == "trivial":
            f = TruncatedSeries.constant(1, order)
        else:
            series_name = {"signature": "tanh", "a_hat": "two_sinh_half", "witten": "witten_e"}[name]
            if name == "witten":
                e = normalize_leading(builtin_series(series_name, order + 1, spec.q_order))
            else:
                e = builtin_series(series_name, order + 1)
            f = f_from_e(e, oriented)
    elif spec.e_series is not None:
        f = f_from_e(TruncatedSeries(spec.e_series), oriented)
    elif spec.f_series is not None:
        f = TruncatedSeries(spec.f_series)
    elif spec.cp_values is not None:
        f = f_from_e(e_from_log(log_from_cp_values(spec.cp_values)), oriented)
    else:
        g = TruncatedSeries(spec.g_series)
        if oriented:
            coeffs = []
            for c in g.coeffs:
                coeffs.extend([c, zero(g.q_order)])
            f = TruncatedSeries(coeffs[:-1], g.q_order)
        else:
            f = g
    if f.coeffs[0] != 1:
        raise ValidationError("genus: characteristic series must have constant term 1")
    if oriented and not f.is_even():
        raise ValidationError("genus: Pontryagin-variable genera need an even characteristic series")
    if f.order < order:
        raise UsageError(f"genus: definition only determines f to order {f.order}, need {order}")
    return f


def genus_from_spec(spec: GenusSpec, max_weight: int) -> tuple[TruncatedSeries, MultiplicativeSequence]:
    f = characteristic_series(spec, series_order_for(spec.variables, max_weight))
    ms = kappa_polynomials(g_from_f(f, spec.variables), max_weight, spec.variables)
    return f, ms
