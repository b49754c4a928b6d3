import pytest

from grafter import syntax
from grafter.alphabet import Alphabet, shipped_path
from grafter.errors import FormatError, TermSyntaxError, UnknownFootpath
from grafter.syntax import Ctx, Gen, Horiz, Id2, Vert


def test_precedence_tensor_binds_tighter(leibniz):
    a = leibniz.plant("dup ; dup * id ; and * id ; and")
    b = leibniz.plant("dup ; (dup * id) ; (and * id) ; and")
    assert a.code == b.code


def test_hole_token(leibniz):
    p = leibniz.plant("dup ; (?1->1 * id) ; and")
    assert len(p.holes()) == 1 and p.arity == (1, 1)


def test_syntax_error_position(leibniz):
    with pytest.raises(TermSyntaxError) as info:
        leibniz.plant("dup ; ; and")
    assert info.value.pos == 6


def test_bad_character(leibniz):
    with pytest.raises(TermSyntaxError):
        leibniz.plant("dup & and")


def test_cell_terms(leibniz):
    t = leibniz.cell("(dup ; (?1->1 * id) ; and)[D] ; m")
    assert isinstance(t, Vert) and isinstance(t.first, Ctx) and t.second == Gen("m")
    assert isinstance(leibniz.cell("m * id2(id)"), Horiz)
    assert isinstance(leibniz.cell("id2(dup ; and)"), Id2)


def test_unknown_footpath(leibniz):
    with pytest.raises(UnknownFootpath):
        leibniz.cell("m ; frob")


def test_sums(leibniz):
    terms = leibniz.sum("m ; D - 2 Dleft ; m + (Dright ; m - m)")
    assert [c for c, _ in terms] == [1, -2, 1, -1]
    assert leibniz.sum("0") == []
    assert [c for c, _ in leibniz.sum("- (m + m)")] == [-1, -1]


def test_alphabet_line_numbers():
    with pytest.raises(Exception) as info:
        Alphabet.parse("GENERATORS\nx: 1 -> 1\nFOOTPATHS\nf: x ; x ; y => x\n", "demo.alpha")
    assert "demo.alpha:4" in str(info.value)


def test_content_before_section():
    with pytest.raises(FormatError):
        Alphabet.parse("x: 1 -> 1\n")


def test_iso_footpath_gets_inverse(leibniz):
    assert "L_inv" in leibniz.footpaths
    names = {r.name for r in leibniz.cell_relations}
    assert {"L_left_inverse", "L_right_inverse"} <= names


def test_hash_depends_on_generators_only(leibniz):
    other = Alphabet.parse(shipped_path("leibniz.alpha").read_text() + "\nCOMPOSITES\nextra := m ; c\n")
    assert other.hash == leibniz.hash
    assert Alphabet.parse("GENERATORS\nx: 1 -> 1\n").hash != leibniz.hash


def test_extend_adds_relations(leibniz):
    a = Alphabet.shipped("leibniz").extend("PLANT-RELATIONS\nstrict: (and * id) ; and ~ (id * and) ; and\n")
    assert [r.name for r in a.plant_relations] == ["strict"]


def test_check_generator(leibniz):
    syntax.check_generator(leibniz, "and")
