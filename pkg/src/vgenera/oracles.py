"""Independent second routes used to cross-check the main engines.

Nothing here is called by the production paths; each function recomputes a
quantity by a different method (Lagrange inversion, literal multivariate
expansion, Newton's power-sum identities, Bernoulli numbers, explicit
cohomology rings of products of projective spaces).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Sequence

from .partitions import Partition, partitions_of
from .series import TruncatedSeries, series_div
from .scalars import one, zero


def lagrange_reverse(a: TruncatedSeries) -> TruncatedSeries:
    """Reversion by Lagrange inversion: ``[x^n] b = (1/n) [x^(n-1)] (x / a)^n``."""
    n = a.order
    h = series_div(TruncatedSeries.x(n, a.q_order), a)  # x / a, order n - 1
    coeffs = [zero(a.q_order), one(a.q_order)] + [zero(a.q_order)] * (n - 1)
    power = h
    for k in range(2, n + 1):
        power = power * h
        coeffs[k] = power.coeffs[k - 1] / k
    return TruncatedSeries(coeffs[: n + 1], a.q_order)


# --- multivariate brute force ----------------------------------------------

def _poly_mul(a: dict, b: dict, max_total: int) -> dict:
    out = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > max_total:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def _elementary(k: int, n: int) -> dict:
    out = {}
    for idx in product((0, 1), repeat=n):
        if sum(idx) == k:
            out[idx] = 1
    return out


def brute_force_kappa(g: TruncatedSeries, m: int, nroots: int) -> dict[Partition, object]:
    """``K_m`` by literally expanding ``prod_i g(beta_i)`` in ``nroots`` variables
    and peeling off products of elementary symmetric polynomials.
    """
    zero_e = (0,) * nroots
    total = {zero_e: one(g.q_order)}
    for i in range(nroots):
        factor = {}
        for k in range(m + 1):
            if g.coeffs[k] != 0:
                e = [0] * nroots
                e[i] = k
                factor[tuple(e)] = g.coeffs[k]
        total = _poly_mul(total, factor, m)
    residue = {e: c for e, c in total.items() if sum(e) == m}
    result = {}
    while residue:
        lead = max(residue)
        c = residue[lead]
        # e_1^(a1-a2) e_2^(a2-a3) ... has leading monomial beta^lead
        J = []
        for j in range(nroots):
            nxt = lead[j + 1] if j + 1 < nroots else 0
            J.extend([j + 1] * (lead[j] - nxt))
        J = Partition(J)
        result[J] = result.get(J, 0) + c
        ep = {zero_e: 1}
        for part in J:
            ep = _poly_mul(ep, _elementary(part, nroots), m)
        for e, v in ep.items():
            residue[e] = residue.get(e, 0) - c * v
            if residue[e] == 0:
                del residue[e]
    return {J: c for J, c in result.items() if c != 0}


# --- Newton identities -----------------------------------------------------

def _bpoly_mul(a: dict, b: dict, max_weight: int) -> dict:
    out = {}
    for ja, ca in a.items():
        for jb, cb in b.items():
            if ja.weight + jb.weight > max_weight:
                continue
            J = ja.merge(jb)
            out[J] = out.get(J, 0) + ca * cb
    return {J: c for J, c in out.items() if c != 0}


def power_sums_in_elementary(max_weight: int) -> list[dict]:
    """``P_k`` as polynomials in ``b_j = e_j`` via Newton's identities."""
    P = [None]
    for k in range(1, max_weight + 1):
        pk = {Partition([k]): Fraction((-1) ** (k - 1) * k)}
        for i in range(1, k):
            term = _bpoly_mul({Partition([i]): Fraction((-1) ** (i - 1))}, P[k - i], max_weight)
            for J, c in term.items():
                pk[J] = pk.get(J, 0) + c
        P.append({J: c for J, c in pk.items() if c != 0})
    return P


def newton_kappa(g: TruncatedSeries, max_weight: int) -> list[dict]:
    """All ``K_m`` via ``log prod g(beta_i) = sum_k l_k P_k`` and exponentiation."""
    n = max_weight
    g = g.truncate(n)
    u = g - TruncatedSeries.constant(1, n, g.q_order)
    log_g = TruncatedSeries.zero(n, g.q_order)
    power = TruncatedSeries.constant(1, n, g.q_order)
    for k in range(1, n + 1):
        power = power * u
        log_g = log_g + power * Fraction((-1) ** (k + 1), k)
    P = power_sums_in_elementary(n)
    L = {}
    for k in range(1, n + 1):
        if log_g.coeffs[k] != 0:
            for J, c in P[k].items():
                L[J] = L.get(J, 0) + log_g.coeffs[k] * c
    exp_L = {Partition(): one(g.q_order)}
    term = {Partition(): one(g.q_order)}
    for k in range(1, n + 1):
        term = {J: c / k for J, c in _bpoly_mul(term, L, n).items()}
        for J, c in term.items():
            exp_L[J] = exp_L.get(J, 0) + c
    return [{J: c for J, c in exp_L.items() if J.weight == m and c != 0} for m in range(n + 1)]


# --- series oracles --------------------------------------------------------

def bernoulli_numbers(n: int) -> list[Fraction]:
    """``B_0, ..., B_n`` with ``B_1 = -1/2``."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B


def todd_series_bernoulli(order: int) -> TruncatedSeries:
    """``x / (1 - e^-x) = sum_n B_n (-x)^n / n!``."""
    B = bernoulli_numbers(order)
    return TruncatedSeries([B[n] * (-1) ** n / factorial(n) for n in range(order + 1)])


def cp_value_by_coefficient(f: TruncatedSeries, n: int):
    """``[x^n] f^(n+1)`` by repeated truncated multiplication at order ``n``."""
    ft = f.truncate(n)
    acc = TruncatedSeries.constant(1, n, f.q_order)
    for _ in range(n + 1):
        acc = acc * ft
    return acc.coeffs[n]


# --- characteristic numbers via explicit cohomology rings ------------------

def product_numbers_by_expansion(dims: Sequence[int], variables: str = "pontryagin") -> dict[Partition, int]:
    """Characteristic numbers of ``CP^{n_1} x ... x CP^{n_r}`` from ``Q[x_i]/(x_i^{n_i+1})``."""
    r = len(dims)
    step = 2 if variables == "pontryagin" else 1

    def mul(a, b):
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if any(x > d for x, d in zip(e, dims)):
                    continue
                out[e] = out.get(e, 0) + ca * cb
        return out

    total = {(0,) * r: 1}
    for i, n in enumerate(dims):
        factor = {}
        for k in range(n + 2):
            if step * k <= n:
                e = [0] * r
                e[i] = step * k
                factor[tuple(e)] = comb(n + 1, k)
        total = mul(total, factor)
    top = sum(dims)
    if top % step:
        return {}
    weight = top // step
    classes = {}
    for e, c in total.items():
        k = sum(e) // step
        classes.setdefault(k, {})[e] = c
    out = {}
    for J in partitions_of(weight):
        acc = {(0,) * r: 1}
        for j in J:
            acc = mul(acc, classes.get(j, {}))
        v = acc.get(tuple(dims), 0)
        if v:
            out[J] = v
    return out
