"""Acceptance checks, shared by ``vgenera verify`` and ``tests/test_acceptance.py``.

Every check is exact; randomized checks draw from ``random.Random(seed)`` so
a fixed seed reproduces the report byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import oracles
from .bordism import (
    BordismElement,
    cpn_character,
    determinant,
    element_character,
    elements_equal,
    evaluate_element,
    express_in_generator_basis,
    generator_basis,
    genus_eval,
)
from .multiseq import (
    BUILTIN_GENERA,
    CHERN,
    PONTRYAGIN,
    GenusSpec,
    MultiplicativeSequence,
    cp_values_from_f,
    g_from_f,
    genus_from_spec,
    kappa_weight,
)
from .partitions import Partition, partitions_of
from .polynomial import GradedPoly
from .series import (
    TruncatedSeries,
    builtin_series,
    e_from_log,
    f_from_e,
    log_from_cp_values,
    normalize_leading,
    series_compose,
    series_div,
    series_reverse,
)
from .vertical import (
    FormalFibration,
    base_symbol,
    check_multiplicativity,
    reverse_orientation,
    umkehr,
    vertical_class,
    vertical_genus,
    vertical_genus_linear,
)

WITTEN_Q_ORDER = 2


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number:2d}. {self.title}: {self.detail}"

    def to_json(self) -> dict:
        return {"id": self.number, "title": self.title, "ok": self.ok, "detail": self.detail}


def builtin_specs() -> list[GenusSpec]:
    return [GenusSpec.named(n, WITTEN_Q_ORDER if n == "witten" else 0) for n in BUILTIN_GENERA]


def random_rational(rng: random.Random, span: int = 9) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def random_reversible_series(rng: random.Random, order: int) -> TruncatedSeries:
    return TruncatedSeries([0, 1] + [random_rational(rng) for _ in range(order - 1)])


def random_element(rng: random.Random, degree: int, variables: str = PONTRYAGIN, terms: int = 3) -> BordismElement:
    """A random homogeneous bordism element built from the generators of the given family."""
    if variables == PONTRYAGIN:
        monos = [tuple(2 * p for p in lam) for lam in partitions_of(degree // 4)]
    else:
        monos = [tuple(lam) for lam in partitions_of(degree // 2)]
    chosen = rng.sample(monos, min(terms, len(monos)))
    return BordismElement({k: random_rational(rng) for k in chosen}, degree)


# --- checks ----------------------------------------------------------------

def check_series_roundtrips(rng, corrupt):
    failures = 0
    for _ in range(50):
        a = random_reversible_series(rng, 20)
        b = series_reverse(a)
        x = TruncatedSeries.x(20)
        if series_compose(a, b) != x or series_compose(b, a) != x:
            failures += 1
    n = 12
    es = {
        "tanh": builtin_series("tanh", n),
        "two_sinh_half": builtin_series("two_sinh_half", n),
        "arctanh": builtin_series("arctanh", n),
        "witten_e": normalize_leading(builtin_series("witten_e", n, WITTEN_Q_ORDER)),
        "x": TruncatedSeries.x(n),
    }
    bad = []
    for name, e in es.items():
        f = f_from_e(e)
        if f * e.truncate(f.order) != TruncatedSeries.x(f.order, e.q_order):
            bad.append(name)
    todd_e = TruncatedSeries([0] + [Fraction((-1) ** (k + 1)) / _fact(k) for k in range(1, n + 1)])
    if builtin_series("todd_Q", n) * todd_e != TruncatedSeries.x(n):
        bad.append("todd_Q")
    ok = failures == 0 and not bad
    return ok, f"{50 - failures}/50 random reversions exact at order 20; f*e = x fails for {bad or 'none'}"


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def check_log_triad(rng, corrupt):
    n = 11
    log = log_from_cp_values([1] * 5)
    e = e_from_log(log)
    f = f_from_e(e)
    x = TruncatedSeries.x(n)
    sinh = TruncatedSeries([Fraction(1, _fact(k)) if k % 2 else 0 for k in range(n + 1)])
    cosh = TruncatedSeries([0 if k % 2 else Fraction(1, _fact(k)) for k in range(n + 1)])
    f_ref = series_div(x * cosh, sinh)
    steps = {
        "l = arctanh": log == builtin_series("arctanh", n),
        "e = tanh": e == builtin_series("tanh", n),
        "f = x/tanh": f == f_ref,
    }
    values = cp_values_from_f(f, 10)
    steps["sigma(CP^2k) = 1"] = all(values[k - 1] == 1 for k in range(2, 11, 2))
    bad = [k for k, v in steps.items() if not v]
    return not bad, "all steps exact to order 11" if not bad else f"failed: {bad}"


def check_k_tables(rng, corrupt):
    b = Partition
    expected = {
        "a_hat": {1: {b([1]): Fraction(-1, 24)}, 2: {b([1, 1]): Fraction(7, 5760), b([2]): Fraction(-4, 5760)}},
        "signature": {1: {b([1]): Fraction(1, 3)}, 2: {b([2]): Fraction(7, 45), b([1, 1]): Fraction(-1, 45)}},
        "todd": {1: {b([1]): Fraction(1, 2)}, 2: {b([1, 1]): Fraction(1, 12), b([2]): Fraction(1, 12)}},
    }
    bad = []
    for name, rows in expected.items():
        spec = GenusSpec.named(name)
        f, ms = genus_from_spec(spec, 4)
        table = [dict(r) for r in ms.table]
        if corrupt and name == "a_hat":
            table[2][b([2])] += Fraction(1, 5760)
        for m, row in rows.items():
            if table[m] != row:
                bad.append(f"{name} K_{m}")
        g = g_from_f(f, spec.variables)
        for m in range(1, 5):
            brute_m = oracles.brute_force_kappa(g, m, m)
            brute_m2 = oracles.brute_force_kappa(g, m, m + 2)
            if not (table[m] == brute_m == brute_m2 == kappa_weight(g, m, m + 2)):
                bad.append(f"{name} K_{m} vs brute force")
        newton = oracles.newton_kappa(g, 4)
        if any(table[m] != newton[m] for m in range(5)):
            bad.append(f"{name} vs Newton identities")
    return not bad, "A-hat, L and Todd tables match, oracles agree with m and m+2 roots" if not bad else f"mismatch: {bad}"


def check_hirzebruch(rng, corrupt):
    bad = []
    for spec in builtin_specs():
        w = 8 if spec.variables == CHERN else 4
        f, ms = genus_from_spec(spec, w)
        values = cp_values_from_f(f, 8)
        for n in range(1, 9):
            g = genus_eval(ms, cpn_character(n, spec.variables))
            if not (g == oracles.cp_value_by_coefficient(f, n) == values[n - 1]):
                bad.append(f"{spec.name} CP^{n}")
    _, sig = genus_from_spec(GenusSpec.named("signature"), 4)
    _, td = genus_from_spec(GenusSpec.named("todd"), 8)
    _, ah = genus_from_spec(GenusSpec.named("a_hat"), 2)
    named = {
        "sigma(CP^2n)=1": all(genus_eval(sig, cpn_character(2 * n)) == 1 for n in range(1, 5)),
        "Td(CP^n)=1": all(genus_eval(td, cpn_character(n, CHERN)) == 1 for n in range(1, 9)),
        "A(CP^2)=-1/8": genus_eval(ah, cpn_character(2)) == Fraction(-1, 8),
        "A(CP^4)=3/128": genus_eval(ah, cpn_character(4)) == Fraction(3, 128),
    }
    bad += [k for k, v in named.items() if not v]
    return not bad, "genus_eval = [x^n] f^(n+1) for every builtin, n <= 8" if not bad else f"failed: {bad}"


def check_ring_homomorphism(rng, corrupt):
    bad = 0
    total = 0
    for spec in builtin_specs():
        unit = 4 if spec.variables == PONTRYAGIN else 2
        _, ms = genus_from_spec(spec, 16 // unit)
        for _ in range(50):
            da = unit * rng.randint(1, 16 // unit - 1)
            db = unit * rng.randint(1, (16 - da) // unit)
            a = random_element(rng, da, spec.variables)
            a2 = random_element(rng, da, spec.variables)
            b = random_element(rng, db, spec.variables)
            mult = evaluate_element(ms, a * b) == evaluate_element(ms, a) * evaluate_element(ms, b)
            add = evaluate_element(ms, a + a2) == evaluate_element(ms, a) + evaluate_element(ms, a2)
            total += 1
            bad += not (mult and add)
    return bad == 0, f"{total - bad}/{total} random pairs multiplicative and additive"


def check_characterization(rng, corrupt):
    dets = {d: determinant(generator_basis(d)[2]) for d in (4, 8, 12, 16)}
    ok_det = all(v != 0 for v in dets.values()) and dets[8] == -45
    agree = 0
    for _ in range(100):
        d = 4 * rng.randint(1, 4)
        a = random_element(rng, d)
        if rng.random() < 0.5:
            b = BordismElement(dict(a.terms), d)
        else:
            b = random_element(rng, d)
        agree += elements_equal(a, b) == (a == b)
    inverse_ok = 0
    for _ in range(50):
        d = 4 * rng.randint(1, 4)
        a = random_element(rng, d, terms=5)
        inverse_ok += BordismElement(express_in_generator_basis(element_character(a)), d) == a
    ok = ok_det and agree == 100 and inverse_ok == 50
    dets_txt = ", ".join(f"deg {d}: {v}" for d, v in dets.items())
    return ok, f"determinants {dets_txt}; equality agrees {agree}/100; basis inversion {inverse_ok}/50"


def check_flagship(rng, corrupt):
    _, ms = genus_from_spec(GenusSpec.named("a_hat"), 4)
    pi, pi2 = FormalFibration("pi1", 2), FormalFibration("pi2", 3)
    target = base_symbol(pi, [1]) * base_symbol(pi2, [1]) * Fraction(1, 576)
    product = vertical_genus(ms, [pi, pi2], 8).homogeneous(3)
    cup = (vertical_genus(ms, [pi], 8) * vertical_genus(ms, [pi2], 8)).homogeneous(3)
    ok = product == target == cup
    return ok, f"deg 3 of A(pi x pi'): {product.render()}"


def check_multiplicativity_grid(rng, corrupt):
    bad = []
    count = 0
    for spec in builtin_specs():
        unit = 4 if spec.variables == PONTRYAGIN else 2
        _, ms = genus_from_spec(spec, (16 + 8) // unit)
        for q in range(1, 5):
            for q2 in range(1, 5):
                pi = FormalFibration("pi1", q, variables=spec.variables)
                pi2 = FormalFibration("pi2", q2, variables=spec.variables)
                count += 1
                if not check_multiplicativity(ms, pi, pi2, 16).ok:
                    bad.append(f"{spec.name} q={q},{q2}")
    return not bad, f"{count - len(bad)}/{count} (genus, q, q') cases multiplicative to degree 16"


def check_orientation(rng, corrupt):
    bad = []
    for spec in builtin_specs():
        unit = 4 if spec.variables == PONTRYAGIN else 2
        _, ms = genus_from_spec(spec, (12 + 6) // unit)
        pi = FormalFibration("pi1", 2, variables=spec.variables)
        pi2 = FormalFibration("pi2", 1, variables=spec.variables)
        rpi = reverse_orientation(pi)
        if reverse_orientation(rpi) != pi:
            bad.append("double reversal")
        for J in [Partition(p) for w in range(4) for p in partitions_of(w)]:
            if vertical_class(rpi, J) != -vertical_class(pi, J):
                bad.append(f"{spec.name} p_{J}")
        if vertical_genus(ms, [rpi], 12) != -vertical_genus(ms, [pi], 12):
            bad.append(f"{spec.name} genus")
        if vertical_genus(ms, [rpi, pi2], 12) != -vertical_genus(ms, [pi, pi2], 12):
            bad.append(f"{spec.name} fibre product")
        if vertical_genus_linear(ms, [(-1, [pi])], 12) != vertical_genus(ms, [rpi], 12):
            bad.append(f"{spec.name} formal difference")
        if vertical_genus_linear(ms, [(1, [pi]), (1, [rpi])], 12):
            bad.append(f"{spec.name} pi + (-pi) != 0")
    return not bad, "all vertical outputs negate; double reversal is the identity" if not bad else f"failed: {bad}"


def random_base_class(rng, fibs, terms=3) -> GradedPoly:
    out = GradedPoly()
    for _ in range(terms):
        mono = GradedPoly.constant(random_rational(rng))
        for _ in range(rng.randint(0, 2)):
            pi = rng.choice(fibs)
            J = rng.choice([p for w in range(1, 4) for p in partitions_of(w)])
            mono = mono * base_symbol(pi, J)
        out = out + mono
    return out


def random_fibre_class(rng, fibs, base_fibs, terms=3) -> GradedPoly:
    out = GradedPoly()
    for _ in range(terms):
        mono = random_base_class(rng, base_fibs, 1)
        for pi in fibs:
            for _ in range(rng.randint(0, 2)):
                mono = mono * pi.generator(rng.randint(1, 3))
        out = out + mono
    return out


def check_projection_formula(rng, corrupt):
    S = [FormalFibration("pi1", 2), FormalFibration("pi2", 3, sign=-1)]
    others = S + [FormalFibration("rho", 1)]
    bad = 0
    for _ in range(100):
        B = random_base_class(rng, others)
        v = random_fibre_class(rng, S, others)
        w = random_fibre_class(rng, S, others)
        a, c = random_rational(rng), random_rational(rng)
        proj = umkehr(S, B * v) == B * umkehr(S, v)
        lin = umkehr(S, v * a + w * c) == umkehr(S, v) * a + umkehr(S, w) * c
        bad += not (proj and lin)
    return bad == 0, f"{100 - bad}/100 random inputs satisfy projection formula and linearity"


def check_witten(rng, corrupt):
    bad = []
    _, ms_a = genus_from_spec(GenusSpec.named("a_hat"), 5)
    f_a = genus_from_spec(GenusSpec.named("a_hat"), 5)[0]
    for qo in range(0, 5):
        f_w, _ = genus_from_spec(GenusSpec.named("witten", qo), 5)
        if f_w.mod_q() != f_a:
            bad.append(f"f mod q, q_order {qo}")
    for order in range(1, 13):
        for qo in range(0, 5):
            if builtin_series("witten_e", order, qo).mod_q() != builtin_series("two_sinh_half", order):
                bad.append(f"witten_e mod q order {order} q_order {qo}")
    f_w, ms_w = genus_from_spec(GenusSpec.named("witten", 2), 1)
    via_k = genus_eval(ms_w, cpn_character(2))
    via_coeff = oracles.cp_value_by_coefficient(f_w, 2)
    if via_k != via_coeff:
        bad.append("CP^2 oracle pair")
    return not bad, f"Witten(CP^2) = {via_k} by both routes; f mod q = A-hat f to order 10" if not bad else f"failed: {bad}"


CHECKS: list[tuple[int, str, Callable]] = [
    (1, "series round-trips", check_series_roundtrips),
    (2, "logarithm triad", check_log_triad),
    (3, "K-tables", check_k_tables),
    (4, "Hirzebruch two-oracle agreement", check_hirzebruch),
    (5, "ring homomorphism", check_ring_homomorphism),
    (6, "Pontryagin numbers characterize bordism", check_characterization),
    (7, "vertical A-hat flagship (1/576)", check_flagship),
    (8, "vertical multiplicativity grid", check_multiplicativity_grid),
    (9, "orientation sign", check_orientation),
    (10, "projection formula", check_projection_formula),
    (11, "Witten genus", check_witten),
]


def run_check(number: int, seed: int = 0, corrupt: bool = False) -> CheckResult:
    for n, title, fn in CHECKS:
        if n == number:
            rng = random.Random(f"{seed}:{n}")
            try:
                ok, detail = fn(rng, corrupt)
            except Exception as exc:  # a crash is a failed check, not a crashed report
                ok, detail = False, f"raised {type(exc).__name__}: {exc}"
            return CheckResult(n, title, bool(ok), detail)
    raise KeyError(number)


def run_checks(seed: int = 0, corrupt: bool = False) -> list[CheckResult]:
    return [run_check(n, seed, corrupt) for n, _, _ in CHECKS]
