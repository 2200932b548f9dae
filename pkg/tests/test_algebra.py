import json
from fractions import Fraction

import pytest

from hochschild.algebra import (AlgElem, AlgebraError, AssociativityError, Automorphism, Bimodule,
                                DegreeError, MixedAlgebraError, SpecParseError, UnitError,
                                apply_automorphism, dump_algebra, identity_automorphism,
                                load_algebra, multiply, twisted_action)
from hochschild.families import (BUILTIN, dilation, dual_numbers, polynomial,
                                 truncated_polynomial)


def _spec(basis, products, unit="1", **extra):
    doc = {"name": "test", "basis": [{"label": l, "degree": d} for l, d in basis],
           "unit": unit, "products": []}
    labels = [l for l, _ in basis]
    for l in labels:
        doc["products"].append({"left": unit, "right": l, "result": [{"label": l, "coeff": "1"}]})
        if l != unit:
            doc["products"].append({"left": l, "right": unit,
                                    "result": [{"label": l, "coeff": "1"}]})
    for left, right, result in products:
        doc["products"].append({"left": left, "right": right,
                                "result": [{"label": r, "coeff": c} for r, c in result]})
    doc.update(extra)
    return json.dumps(doc)


def elem(A, **coeffs):
    return AlgElem(A, {A.index(k.replace("_", "^")): c for k, c in coeffs.items()})


def test_load_dual_numbers_graded():
    A, autos = load_algebra(_spec([("1", 0), ("eps", 1)], []))
    assert A.dim == 2 and autos == {}
    assert A.degrees == (0, 1)


def test_load_truncated_cubic():
    A, _ = load_algebra(_spec([("1", 0), ("x", 1), ("x^2", 2)],
                              [("x", "x", [("x^2", "1")])]))
    assert A.dim == 3


def test_unit_not_neutral():
    text = json.dumps({"name": "bad",
                       "basis": [{"label": "1", "degree": 0}, {"label": "e", "degree": 0}],
                       "unit": "1",
                       "products": [{"left": "e", "right": "e", "result": [{"label": "e", "coeff": 1}]},
                                    {"left": "1", "right": "1", "result": [{"label": "1", "coeff": 1}]},
                                    {"left": "1", "right": "e", "result": [{"label": "e", "coeff": 1}]}]})
    with pytest.raises(UnitError):
        load_algebra(text)


def test_associativity_violation_reports_triple():
    text = _spec([("1", 0), ("a", 0), ("b", 0)],
                 [("a", "a", [("b", "1")]), ("b", "a", [("a", "1")])])
    with pytest.raises(AssociativityError) as info:
        load_algebra(text)
    assert info.value.triple == ("a", "a", "a")


def test_degree_mismatch():
    with pytest.raises(DegreeError):
        load_algebra(_spec([("1", 0), ("x", 1), ("y", 1)], [("x", "x", [("y", "1")])]))


@pytest.mark.parametrize("text", [
    "{not json",
    json.dumps({"name": "x"}),
    json.dumps({"name": "x", "basis": [{"label": "1", "degree": 0}], "unit": "u", "products": []}),
    json.dumps({"name": "x", "basis": [{"label": "1", "degree": 0, "colour": 1}], "unit": "1",
                "products": []}),
])
def test_parse_errors(text):
    with pytest.raises(SpecParseError):
        load_algebra(text)


@pytest.mark.parametrize("name", sorted(BUILTIN))
def test_dump_load_roundtrip(name):
    A = BUILTIN[name]()
    B, _ = load_algebra(dump_algebra(A))
    assert B.labels == A.labels and B.degrees == A.degrees and B.weights == A.weights
    for i in range(A.dim):
        for j in range(A.dim):
            assert B.mul_basis(i, j) == A.mul_basis(i, j)


def test_multiply_examples():
    A = truncated_polynomial(3)
    x, x2 = elem(A, x=1), elem(A, x_2=1)
    assert multiply(x, x) == x2
    assert not multiply(x2, x)
    E = dual_numbers()
    one = E.one()
    eps = AlgElem(E, {E.index("eps"): 1})
    assert multiply(one + eps, one - eps) == one


def test_mixed_algebra_rejected():
    A, B = truncated_polynomial(3), dual_numbers()
    with pytest.raises(MixedAlgebraError):
        multiply(A.one(), B.one())


def test_dilation_examples():
    A = polynomial(1, 6)
    phi = dilation(A, 2)
    phi.validate()
    assert apply_automorphism(phi, elem(A, x_2=1)) == elem(A, x_2=4)
    assert apply_automorphism(phi, A.one()) == A.one()
    ident = identity_automorphism(A)
    a = elem(A, x=3, x_5=-1)
    assert apply_automorphism(ident, a) == a


def test_non_multiplicative_map_rejected():
    A = polynomial(1, 4)
    images = {A.index("x"): {A.index("x"): 2}}  # x -> 2x but x^2 -> x^2
    with pytest.raises(AlgebraError):
        Automorphism(A, images)


def test_twisted_action_examples():
    A = polynomial(1, 6)
    x, one = elem(A, x=1), A.one()
    M = Bimodule(A, dilation(A, 2), dilation(A, 3))
    assert twisted_action(M, x, one, x) == elem(A, x_2=6)
    plain = Bimodule(A)
    a, m, b = elem(A, x=2), elem(A, x=1, x_2=1), elem(A, x_2=-1)
    assert twisted_action(plain, a, m, b) == multiply(multiply(a, m), b)
    assert twisted_action(M, one, m, b) == multiply(m, apply_automorphism(M.right, b))


def test_window_is_a_quotient():
    A = polynomial(1, 3)
    assert not multiply(elem(A, x_2=1), elem(A, x_2=1))
    A.validate()


def test_rational_coefficients_in_spec():
    text = _spec([("1", 0), ("e", 0)], [("e", "e", [("e", "1/1")])])
    A, _ = load_algebra(text)
    assert A.mul_basis(1, 1) == {1: Fraction(1)}


def test_shipped_data_load():
    from hochschild.cli import resolve_algebra
    for name in ("keps", "kx", "kxy", "kx3"):
        A, autos = resolve_algebra(name + ".json")
        assert sorted(autos) == ["dil2", "dil3", "dil5"]
