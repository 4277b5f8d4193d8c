import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantum_steenrod.elements import HTElement
from quantum_steenrod.qsteenrod import QuantumSquares
from quantum_steenrod.specfile import (
    BUILTINS,
    SpecError,
    builtin_text,
    load_spec,
    parse_element,
    parse_spec,
    render_element,
    spec_from_structure,
)
from quantum_steenrod.quantum import cpn_structure, product_p1_structure

HEADER = "[manifold]\nname = test\ntop_degree = 4\n"


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_round_trip(name):
    spec = load_spec(name)
    again = parse_spec(spec.render())
    assert again == spec
    assert again.render() == spec.render()


def test_builtin_cp3_matches_tables():
    eng = QuantumSquares(load_spec("cpn:3").quantum())
    ring = eng.ring
    assert render_element(eng.qs((2,)), ring) == "x^2 h^4 + T"
    assert render_element(eng.qs((3,)), ring) == "x^3 h^6 + T h^4 + x T h^2 + x^2 T"


def test_builtins_agree_with_library_structures():
    for n in range(1, 6):
        spec = load_spec(f"cpn:{n}")
        assert spec.quantum().quantum_constants == cpn_structure(n).quantum_constants
    for name, k in (("p1xp1", 2), ("p1cubed", 3)):
        assert load_spec(name).quantum().quantum_constants == product_p1_structure(k).quantum_constants


def test_spec_from_structure_round_trip():
    spec = spec_from_structure(product_p1_structure(2))
    assert parse_spec(spec.render()) == spec
    assert spec.quantum().quantum_constants == product_p1_structure(2).quantum_constants


def test_m05bar_is_ring_only():
    spec = load_spec("m05bar")
    assert not spec.has_quantum
    with pytest.raises(SpecError):
        spec.quantum()


def test_inhomogeneous_relation_rejected():
    text = HEADER + "[generators]\nx = 2\ny = 2\n[relations]\nx^2 + y\n"
    with pytest.raises(SpecError) as exc:
        parse_spec(text)
    assert exc.value.line == 8  # header is 3 lines, relation follows two generators
    assert "inhomogeneous" in str(exc.value)


@pytest.mark.parametrize(
    "body,line,col,fragment",
    [
        ("[generators]\nx = 2\n[relations]\nx^2 + q\n", 7, 7, "unknown generator"),
        ("[generators]\nx = 2\n[relations]\nx^2 + $\n", 7, 7, "unexpected character"),
        ("[generators]\nx = 2\n[relations]\nx^\n", 7, 3, "exponent"),
        ("[generators]\nx = 2\n[relations]\n3 x^2\n", 7, 1, "coefficient"),
        ("[generators]\nx = two\n", 5, 5, "integer"),
        ("[generators]\nx = 2\nx = 2\n", 6, 1, "duplicate"),
        ("[bogus]\n", 4, 1, "unknown section"),
    ],
)
def test_syntax_errors_have_positions(body, line, col, fragment):
    with pytest.raises(SpecError) as exc:
        parse_spec(HEADER + body)
    assert exc.value.line == line
    assert exc.value.column == col
    assert fragment in str(exc.value)


def test_missing_header_fields():
    with pytest.raises(SpecError):
        parse_spec("[generators]\nx = 2\n")
    with pytest.raises(SpecError):
        parse_spec("[manifold]\nname = a\n")


P1XP1_BY_HAND = """\
# the product of two lines, written out by hand
[manifold]
name = quadric
top_degree = 4
minimal_chern = 2

[generators]
x = 2
y = 2

[relations]
x^2
y^2

[h2]
mu1 = 2 ; x=1
mu2 = 2 ; y=1
mu12 = 4 ; x=1, y=1

[quantum]
x, x = T @ mu1
y, y = T @ mu2
x, x*y = y T @ mu1
y, x*y = x T @ mu2
x*y, x*y = T^2 @ mu12
"""


def test_hand_written_spec_validates():
    spec = parse_spec(P1XP1_BY_HAND)
    eng = QuantumSquares(spec.quantum())
    x, y = HTElement.of((1, 0)), HTElement.of((0, 1))
    assert eng.qs(eng.qstruct.quantum_product(x, y)) == eng.qstruct.quantum_product(eng.qs(x), eng.qs(y))


def test_corrupted_constants_rejected():
    broken = P1XP1_BY_HAND.replace("x*y, x*y = T^2 @ mu12\n", "")
    with pytest.raises(SpecError) as exc:
        parse_spec(broken).quantum()
    assert "validation" in str(exc.value)
    wrong_degree = P1XP1_BY_HAND.replace("x, x = T @ mu1", "x, x = x T @ mu1")
    with pytest.raises(SpecError):
        parse_spec(wrong_degree).quantum()


def test_quantum_line_errors():
    with pytest.raises(SpecError, match="unknown curve class"):
        parse_spec(P1XP1_BY_HAND.replace("@ mu12", "@ nope"))
    with pytest.raises(SpecError, match="duplicate"):
        parse_spec(P1XP1_BY_HAND + "x, x = T @ mu1\n")
    with pytest.raises(SpecError, match="'a, b'"):
        parse_spec(P1XP1_BY_HAND.replace("x, x = T @ mu1", "x x = T @ mu1"))


def test_bad_builtin_names():
    for name in ("cpn:0", "cpn:11", "cpn:x", "nope"):
        with pytest.raises(SpecError):
            builtin_text(name)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["cpn:3", "p1xp1", "p1cubed"]), st.data())
def test_element_render_parse_round_trip(name, data):
    ring = load_spec(name).ring()
    terms = data.draw(st.lists(st.tuples(st.sampled_from(ring.basis_classes), st.integers(0, 4), st.integers(0, 9)),
                               max_size=8))
    a = HTElement(ring.nvars, terms)
    assert parse_element(render_element(a, ring), list(ring.names)) == a
