from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bordism_elements, nonzero_rationals
from vgenera import oracles
from vgenera.bordism import (
    BordismElement,
    ExpressionError,
    PontryaginCharacter,
    character_product,
    cpn_character,
    determinant,
    element_character,
    elements_equal,
    evaluate_element,
    express_in_generator_basis,
    generator_basis,
    genus_eval,
    parse_element,
    solve_exact,
)
from vgenera.errors import InvariantViolation, UsageError
from vgenera.multiseq import BUILTIN_GENERA, CHERN, PONTRYAGIN, GenusSpec, genus_from_spec
from vgenera.partitions import Partition as P

GENERA = {n: genus_from_spec(GenusSpec.named(n, 2 if n == "witten" else 0), 8 if n == "todd" else 4)[1] for n in BUILTIN_GENERA}
PONTRYAGIN_GENERA = [n for n in BUILTIN_GENERA if n != "todd"]

# characteristic numbers of the quaternionic projective plane: p1^2 = 4, p2 = 7
HP2 = PontryaginCharacter(8, PONTRYAGIN, {P([2]): 7, P([1, 1]): 4})


def test_cpn_numbers():
    assert cpn_character(2)[P([1])] == 3
    assert cpn_character(4).numbers == {P([2]): 10, P([1, 1]): 25}
    assert cpn_character(3).is_zero()
    assert cpn_character(3, CHERN).numbers == {P([3]): 4, P([2, 1]): 24, P([1, 1, 1]): 64}


@pytest.mark.parametrize("dims", [[2, 2], [2, 4], [2, 2, 2], [4, 4], [6, 2]])
def test_product_numbers_against_cohomology_expansion(dims):
    char = cpn_character(dims[0])
    for d in dims[1:]:
        char = character_product(char, cpn_character(d))
    assert char.numbers == {J: v for J, v in oracles.product_numbers_by_expansion(dims).items() if v}


@pytest.mark.parametrize("dims", [[1, 1], [1, 2], [3, 1], [2, 2], [1, 1, 1, 1]])
def test_chern_product_numbers_against_expansion(dims):
    char = cpn_character(dims[0], CHERN)
    for d in dims[1:]:
        char = character_product(char, cpn_character(d, CHERN))
    assert char.numbers == {J: v for J, v in oracles.product_numbers_by_expansion(dims, CHERN).items() if v}


def test_degree_eight_basis():
    rows, cols, m = generator_basis(8)
    assert rows == [P([2]), P([1, 1])]
    assert determinant(m) == -45


@pytest.mark.parametrize("degree", [4, 8, 12, 16, 20])
def test_generator_matrices_are_invertible(degree):
    rows, cols, m = generator_basis(degree)
    assert len(rows) == len(cols) == len(m)
    assert determinant(m) != 0


def test_singular_system_is_reported():
    with pytest.raises(InvariantViolation):
        solve_exact([[F(1), F(2)], [F(2), F(4)]], [F(1), F(1)])


def test_quaternionic_plane_in_generator_coordinates():
    coords = express_in_generator_basis(HP2)
    assert coords == {(4,): -2, (2, 2): 3}
    assert genus_eval(GENERA["signature"], HP2) == 1
    assert genus_eval(GENERA["a_hat"], HP2) == 0
    assert evaluate_element(GENERA["a_hat"], parse_element("3*CP2^2 - 2*CP4")) == 0


@given(bordism_elements())
def test_express_inverts_character(e):
    assert BordismElement(express_in_generator_basis(element_character(e)), e.degree) == e


@given(bordism_elements(), st.data())
def test_equality_by_characteristic_numbers(a, data):
    b = data.draw(st.one_of(st.just(a), bordism_elements(degree=a.degree)))
    assert elements_equal(a, b) == (a == b)


@pytest.mark.parametrize("name", PONTRYAGIN_GENERA)
@given(data=st.data(), c=nonzero_rationals)
def test_genus_is_a_ring_homomorphism(name, data, c):
    ms = GENERA[name]
    a = data.draw(bordism_elements(degree=data.draw(st.sampled_from([4, 8, 12]))))
    b = data.draw(bordism_elements(degree=data.draw(st.sampled_from(range(4, 17 - a.degree, 4)))))
    a2 = data.draw(bordism_elements(degree=a.degree))
    assert evaluate_element(ms, a * b) == evaluate_element(ms, a) * evaluate_element(ms, b)
    assert evaluate_element(ms, a * c + a2) == evaluate_element(ms, a) * c + evaluate_element(ms, a2)


@given(a=bordism_elements(variables=CHERN), b=bordism_elements(variables=CHERN))
def test_todd_is_a_ring_homomorphism(a, b):
    ms = genus_from_spec(GenusSpec.named("todd"), (a.degree + b.degree) // 2)[1]
    # Td(CP^n) = 1, so the Todd genus of a generator polynomial is its coefficient sum
    assert evaluate_element(ms, a * b) == evaluate_element(ms, a) * evaluate_element(ms, b)
    assert evaluate_element(ms, a) == sum(c for c in a.terms.values())


@pytest.mark.parametrize("name", BUILTIN_GENERA)
@pytest.mark.parametrize("n", range(1, 9))
def test_two_oracle_agreement_on_projective_spaces(name, n):
    spec = GenusSpec.named(name, 2 if name == "witten" else 0)
    f, ms = genus_from_spec(spec, 8 if name == "todd" else 4)
    assert genus_eval(ms, cpn_character(n, spec.variables)) == oracles.cp_value_by_coefficient(f, n)


def test_classical_values():
    assert genus_eval(GENERA["a_hat"], cpn_character(2)) == F(-1, 8)
    assert genus_eval(GENERA["a_hat"], cpn_character(4)) == F(3, 128)
    assert all(genus_eval(GENERA["signature"], cpn_character(2 * k)) == 1 for k in range(1, 5))
    assert all(genus_eval(GENERA["todd"], cpn_character(n, CHERN)) == 1 for n in range(1, 9))


def test_variable_families_do_not_mix():
    with pytest.raises(UsageError):
        genus_eval(GENERA["todd"], cpn_character(2))


def test_element_arithmetic():
    cp2 = BordismElement.generator(2)
    assert (cp2 * cp2 * 3 - BordismElement.generator(4) * 2) == parse_element("3*CP2^2 - 2*CP4")
    assert cp2 - cp2 == BordismElement.zero(4)
    assert cp2**0 == BordismElement.point()
    with pytest.raises(UsageError):
        cp2 + BordismElement.generator(4)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("CP2^2", {(2, 2): 1}),
        (" 3 * CP2 ^ 2 - 2*CP4 ", {(2, 2): 3, (4,): -2}),
        ("1/2*CP2*CP4", {(4, 2): F(1, 2)}),
        ("CP4 - CP4", {}),
        ("-CP2", {(2,): -1}),
    ],
)
def test_parse_element(text, expected):
    e = parse_element(text)
    assert e.terms == expected


@pytest.mark.parametrize(
    "text,position",
    [("", 0), ("CP2 +", 5), ("3*", 2), ("CP2 CP2", 4), ("x", 0), ("CP0", 0), ("CP2 + CP4", 6), ("0.5*CP2", 1)],
)
def test_parse_errors_report_position(text, position):
    with pytest.raises(ExpressionError) as info:
        parse_element(text)
    assert info.value.position == position
    assert f"position {position}" in str(info.value)


@given(bordism_elements())
def test_element_json_round_trip(e):
    assert BordismElement.from_json(e.to_json()) == e


@given(bordism_elements())
def test_printed_form_parses_back(e):
    assert parse_element(str(e)) == e
