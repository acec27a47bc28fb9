import pytest

from app.services.complexes import stalk
from app.services.formats import (
    SpecParseError,
    algebra_to_text,
    complex_to_text,
    element_to_text,
    load_complex,
    parse_algebra,
    parse_complex,
    parse_element,
    parse_expression,
)
from app.services.tilting import complete


def test_parse_expression_terms():
    assert parse_expression("2 a b - @1") == [("2", ("a", "b")), ("-1", ("@1",))]
    assert parse_expression("-x + 1/2 x x") == [("-1", ("x",)), ("1/2", ("x", "x"))]
    assert parse_expression("- 3 a") == [("-3", ("a",))]
    with pytest.raises(ValueError):
        parse_expression("   ")
    with pytest.raises(ValueError):
        parse_expression("a + 3")


def test_algebra_text_round_trip(sn2):
    again = parse_algebra(algebra_to_text(sn2), "<again>")
    assert again.labels == sn2.labels
    assert again.name == "sn2"
    assert sn2.field.equal(again.table, sn2.table)


def test_field_override_and_default(sn2_q, qq):
    assert sn2_q.field == qq
    text = "vertices 1\narrow x 1 1\nrelation x x\nbound 2\n"
    assert parse_algebra(text, default_field="7").field.characteristic == 7
    assert parse_algebra("field rational\n" + text).field.characteristic == 0


def test_parse_errors_name_the_line():
    text = "vertices 1 2\narrow a 1 2\narrow b 2 1\nrelation a b + x\nbound 3\n"
    with pytest.raises(SpecParseError) as info:
        parse_algebra(text, "broken.alg")
    assert info.value.line == 4
    assert "'x'" in str(info.value)
    assert "broken.alg:4" in str(info.value)


@pytest.mark.parametrize(
    "text, line",
    [
        ("vertices 1\nwobble 3\nbound 2\n", 2),
        ("vertices 1\narrow x 1\nbound 2\n", 2),
        ("vertices 1\nbound two\n", 2),
        ("vertices 1\n", 0),
    ],
)
def test_malformed_algebra_lines(text, line):
    with pytest.raises(SpecParseError) as info:
        parse_algebra(text)
    assert info.value.line == line


def test_bad_field_descriptor():
    with pytest.raises(SpecParseError, match="not prime"):
        parse_algebra("field 10\nvertices 1\nbound 1\n")


def test_parse_element_and_back(sn2, sn2_q, element):
    F = sn2_q.field
    x = parse_element(sn2_q, "2 a b - @1")
    expected = F.reduce(2 * element(sn2_q, "a b") - element(sn2_q, "@1"))
    assert F.equal(x, expected)
    assert element_to_text(sn2_q, x) == "-@1 + 2 a b"
    assert element_to_text(sn2, parse_element(sn2, "-@1")) == "100 @1"
    assert element_to_text(sn2, sn2.zero()) == "0"
    with pytest.raises(ValueError, match="unknown arrow"):
        parse_element(sn2, "a z")


def test_parse_element_in_a_corner(corner_stalk):
    C = corner_stalk.algebra
    assert C.field.equal(parse_element(C, "a b"), C.basis_vector(1))
    with pytest.raises(ValueError, match="does not lie in the corner"):
        parse_element(C, "a")


def test_load_sample_complex(samples, sn2, two_term):
    assert two_term.terms == {-1: (0,), 0: (1,)}
    X = load_complex(str(samples / "sn2_corner1.cpx"), {"sn2": sn2})
    assert X.algebra.origin.parent is sn2
    assert X.terms == {0: (0,)}


def test_complex_text_round_trip(sn2):
    _, theta = complete(stalk(sn2, [0]), 2)
    text = complex_to_text(theta)
    assert text.startswith("algebra sn2\n")
    again = parse_complex(text, {"sn2": sn2})
    assert again.equals(theta)


def test_corner_complex_round_trip(corner_stalk, sn2):
    text = complex_to_text(corner_stalk)
    assert "corner 1" in text
    again = parse_complex(text, {"sn2": sn2})
    assert again.terms == corner_stalk.terms


@pytest.mark.parametrize(
    "body, message",
    [
        ("term 0 1\nentry 0 0 0 a\n", "outside"),
        ("term -1 1\nterm 0 2\nentry -1 0 0 a\n", "is not in"),
        ("term 0 3\n", "unknown vertex"),
        ("term 0 1\nterm 0 2\n", "listed twice"),
        ("term -1 1\nterm 0 2\nentry -1 0 0 q\n", "bad path expression"),
    ],
)
def test_malformed_complexes(sn2, body, message):
    with pytest.raises(SpecParseError, match=message):
        parse_complex("algebra sn2\n" + body, {"sn2": sn2})


def test_complex_needs_a_known_algebra(sn2):
    with pytest.raises(SpecParseError, match="unknown algebra"):
        parse_complex("algebra other\nterm 0 1\n", {"sn2": sn2})
    with pytest.raises(SpecParseError, match="missing 'algebra'"):
        parse_complex("", {"sn2": sn2})
