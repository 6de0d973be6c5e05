from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_rationals, positive_partitions, rationals
from vgenera.errors import UsageError, ValidationError
from vgenera.multiseq import BUILTIN_GENERA, CHERN, GenusSpec, genus_from_spec
from vgenera.partitions import Partition as P
from vgenera.polynomial import GradedPoly
from vgenera.vertical import (
    FormalFibration,
    base_class_from_json,
    base_class_to_json,
    base_symbol,
    check_multiplicativity,
    check_multiplicativity_many,
    rename_fibrations,
    reverse_orientation,
    total_class,
    umkehr,
    vertical_class,
    vertical_genus,
    vertical_genus_linear,
)

PI1 = FormalFibration("pi1", 2)
PI2 = FormalFibration("pi2", 3)


def ms_for(name, weight):
    return genus_from_spec(GenusSpec.named(name, 2 if name == "witten" else 0), weight)[1]


def fib(i, q, variables, sign=1):
    return FormalFibration(f"pi{i}", q, sign, variables)


def test_flagship_a_hat_product():
    ms = ms_for("a_hat", 4)
    product = vertical_genus(ms, [PI1, PI2], 8)
    expected = base_symbol(PI1, [1]) * base_symbol(PI2, [1]) * F(1, 576)
    assert product.homogeneous(3) == expected
    assert (vertical_genus(ms, [PI1], 8) * vertical_genus(ms, [PI2], 8)).homogeneous(3) == expected
    assert product.homogeneous(3).render() == "(1/576)·p[1](pi1)·p[1](pi2)"


def test_single_fibration_a_hat():
    ms = ms_for("a_hat", 2)
    v = vertical_genus(ms, [PI1], 4)
    assert v == base_symbol(PI1, [1]) * F(-1, 24)
    assert v.render() == "-(1/24)·p[1](pi1)"


def test_degree_six_term_uses_the_second_table_row():
    ms = ms_for("a_hat", 2)
    v = vertical_genus(ms, [PI1], 6).homogeneous(6)
    assert v == base_symbol(PI1, [1, 1]) * F(7, 5760) - base_symbol(PI1, [2]) * F(4, 5760)


def test_trivial_genus_has_zero_vertical_genus():
    assert vertical_genus(ms_for("trivial", 3), [PI1], 10) == 0


@pytest.mark.parametrize("name", BUILTIN_GENERA)
@pytest.mark.parametrize("q", [1, 2, 3, 4])
@pytest.mark.parametrize("q2", [1, 3])
def test_multiplicativity(name, q, q2):
    variables = CHERN if name == "todd" else "pontryagin"
    unit = 2 if name == "todd" else 4
    ms = ms_for(name, (16 + q + q2) // unit)
    report = check_multiplicativity(ms, fib(1, q, variables), fib(2, q2, variables), 16)
    assert report.ok, report.lines()


def test_three_fold_fibre_product_is_multiplicative():
    ms = ms_for("signature", 5)
    fibs = [FormalFibration("a", 1), FormalFibration("b", 2, sign=-1), FormalFibration("c", 4)]
    assert check_multiplicativity_many(ms, fibs, 12).ok


def test_report_lines():
    ms = ms_for("a_hat", 4)
    lines = check_multiplicativity(ms, PI1, PI2, 8).lines()
    assert "deg 3: (1/576)·p[1](pi1)·p[1](pi2)  [OK]" in lines


@pytest.mark.parametrize("name", ["a_hat", "signature", "witten"])
@given(q=st.integers(1, 8), q2=st.integers(1, 8), d=st.integers(0, 14))
def test_grading(name, q, q2, d):
    ms = ms_for(name, (d + q + q2) // 4)
    v = vertical_genus(ms, [fib(1, q, "pontryagin"), fib(2, q2, "pontryagin")], d)
    for deg in v.degrees():
        assert 0 <= deg <= d
        assert (deg + q + q2) % 4 == 0
    for s in v.symbols():
        assert s.degree >= 0


@given(J=positive_partitions, q=st.integers(1, 12))
def test_negative_degree_symbols_vanish(J, q):
    pi = FormalFibration("pi", q)
    assert bool(base_symbol(pi, J)) == (4 * J.weight >= q)


def test_empty_partition_pushes_to_zero():
    assert umkehr([PI1], GradedPoly.constant(5)) == 0
    assert umkehr([PI1, PI2], PI1.generator(1)) == 0


def test_stray_generators_are_rejected():
    with pytest.raises(UsageError):
        umkehr([PI1], PI2.generator(1))


def test_base_dim_truncates():
    ms = ms_for("a_hat", 5)
    full = vertical_genus(ms, [PI1, PI2], 16)
    assert vertical_genus(ms, [PI1, PI2], 16, base_dim=5) == full.truncate(5)
    assert base_symbol(PI1, [2], base_dim=5) == 0


@st.composite
def base_classes(draw, fibs):
    out = GradedPoly()
    for _ in range(draw(st.integers(0, 3))):
        term = GradedPoly.constant(draw(nonzero_rationals))
        for _ in range(draw(st.integers(0, 2))):
            term = term * base_symbol(draw(st.sampled_from(fibs)), draw(positive_partitions))
        out = out + term
    return out


@st.composite
def fibre_classes(draw, fibs, base_fibs):
    out = GradedPoly()
    for _ in range(draw(st.integers(0, 3))):
        term = draw(base_classes(base_fibs))
        for pi in fibs:
            for _ in range(draw(st.integers(0, 2))):
                term = term * pi.generator(draw(st.integers(1, 3)))
        out = out + term
    return out


S = [PI1, FormalFibration("pi2", 3, sign=-1)]
OTHERS = S + [FormalFibration("rho", 1)]


@given(B=base_classes(OTHERS), v=fibre_classes(S, OTHERS))
def test_projection_formula(B, v):
    assert umkehr(S, B * v) == B * umkehr(S, v)


@given(v=fibre_classes(S, OTHERS), w=fibre_classes(S, OTHERS), a=rationals, b=rationals)
def test_umkehr_is_linear(v, w, a, b):
    assert umkehr(S, v * a + w * b) == umkehr(S, v) * a + umkehr(S, w) * b


@pytest.mark.parametrize("name", BUILTIN_GENERA)
def test_orientation_reversal_negates(name):
    variables = CHERN if name == "todd" else "pontryagin"
    unit = 2 if name == "todd" else 4
    ms = ms_for(name, (12 + 3) // unit)
    pi, other = fib(1, 2, variables), fib(2, 1, variables)
    rpi = reverse_orientation(pi)
    assert rpi.sign == -1 and reverse_orientation(rpi) == pi
    for J in [P([1]), P([2]), P([1, 1]), P([2, 1])]:
        assert vertical_class(rpi, J) == -vertical_class(pi, J)
    assert vertical_genus(ms, [rpi], 12) == -vertical_genus(ms, [pi], 12)
    assert vertical_genus(ms, [rpi, other], 12) == -vertical_genus(ms, [pi, other], 12)
    assert vertical_genus_linear(ms, [(1, [pi]), (1, [rpi])], 12) == 0


def test_signs_multiply_over_fibre_products():
    ms = ms_for("a_hat", 4)
    a, b = FormalFibration("a", 2, -1), FormalFibration("b", 3, -1)
    assert vertical_genus(ms, [a, b], 8) == vertical_genus(ms, [reverse_orientation(a), reverse_orientation(b)], 8)


def test_pull_back_by_renaming_commutes_with_the_genus():
    ms = ms_for("signature", 4)
    renamed = rename_fibrations(vertical_genus(ms, [PI1], 10), {"pi1": "sigma"})
    assert renamed == vertical_genus(ms, [FormalFibration("sigma", 2)], 10)


def test_total_class_of_a_fibre_product():
    t = total_class([PI1, PI2], 8)
    assert t.homogeneous(4) == PI1.generator(1) + PI2.generator(1)
    assert t.homogeneous(8) == PI1.generator(2) + PI2.generator(2) + PI1.generator(1) * PI2.generator(1)


def test_chern_fibrations_use_degree_two():
    pi = FormalFibration("pi", 1, variables=CHERN)
    assert pi.generator(1).degrees() == [2]
    assert base_symbol(pi, [1]).degrees() == [1]
    ms = ms_for("todd", 3)
    assert vertical_genus(ms, [pi], 2).homogeneous(1) == base_symbol(pi, [1]) * F(1, 2)


def test_mismatched_variables_are_rejected():
    with pytest.raises(UsageError):
        vertical_genus(ms_for("todd", 3), [PI1], 4)
    with pytest.raises(UsageError):
        vertical_genus(ms_for("a_hat", 3), [PI1, FormalFibration("pi1", 3)], 4)
    with pytest.raises(UsageError):
        vertical_genus(ms_for("a_hat", 3), [], 4)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("id=pi1,q=2", FormalFibration("pi1", 2)),
        ("id=b, q=3, sign=-1", FormalFibration("b", 3, -1)),
    ],
)
def test_parse_fibration(text, expected):
    assert FormalFibration.parse(text) == expected


@pytest.mark.parametrize("text", ["id=pi1", "q=2", "id=pi1,q=0", "id=pi1,q=2,sign=2", "id=1x,q=2", "id=a,q=two", "id=a,q=1,dim=3", "pi1"])
def test_parse_fibration_errors(text):
    with pytest.raises(ValidationError):
        FormalFibration.parse(text)


def test_fibration_json_round_trip():
    for f in [PI1, FormalFibration("x", 7, -1), FormalFibration("c", 1, 1, CHERN)]:
        assert FormalFibration.from_json(f.to_json()) == f
    assert PI1.to_json() == {"id": "pi1", "fibre_dim": 2, "sign": 1}


@given(B=base_classes(OTHERS))
def test_base_class_json_round_trip(B):
    assert base_class_from_json(base_class_to_json(B), OTHERS) == B


def test_base_class_json_shape():
    ms = ms_for("a_hat", 4)
    v = vertical_genus(ms, [PI1, PI2], 3)
    assert base_class_to_json(v) == [{"monomial": [["p[1](pi1)", 1], ["p[1](pi2)", 1]], "coeff": "1/576"}]
