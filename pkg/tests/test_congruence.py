import time

import pytest

from grafter import congruence as cg
from grafter.alphabet import Alphabet
from grafter.errors import ArityMismatch, NotParallel
from grafter.twocell import TwoCellSum

PENTAGON_A = ("((?3->1) * id ; and)[assoc] ; (id * and * id ; ?3->1)[assoc] ; "
              "(id * ?3->1 ; and)[assoc]")
PENTAGON_B = "(and * id * id ; ?3->1)[assoc] ; (id * id * and ; ?3->1)[assoc]"
STRICT_ASSOC = """PLANT-RELATIONS
strict_assoc: (and * id) ; and ~ (id * and) ; and
CELL-RELATIONS
assoc_is_identity: assoc ~ id2((and * id) ; and)
"""
STRICT_MITOSIS = """PLANT-RELATIONS
strict_mitosis: dup ; (dup * id) ~ dup ; (id * dup)
CELL-RELATIONS
mitosis_is_identity: ca ~ id2(dup ; (dup * id))
"""


def _sum(alpha, text):
    return TwoCellSum.parse(text, alpha)


def test_unipotent_adjoint(cartan):
    s = cg.Session(cartan)
    r = s.plant_congruent(cartan.plant("adj ; adj ; adj ; adj"), cartan.plant("id"))
    assert isinstance(r, cg.Related) and len(r.trace) == 2


def test_reflexive_plants(cartan):
    p = cartan.plant("dup ; and")
    r = cg.plant_congruent(cg.Session(cartan), p, p)
    assert isinstance(r, cg.Related) and r.trace == []


def test_arity_mismatch(cartan):
    with pytest.raises(ArityMismatch):
        cg.Session(cartan).plant_congruent(cartan.plant("and"), cartan.plant("dup"))


def test_translators(cartan):
    s = cg.Session(cartan)
    a, b = _sum(cartan, "deltastar ; dstar ; deltastar"), _sum(cartan, "deltastar")
    r = s.equal(a, b)
    assert isinstance(r, cg.Equal) and r.certificate
    assert s.replay(r, a, b)


def test_translator_inverse(cartan):
    s = cg.Session(cartan)
    a, b = _sum(cartan, "dstar ; deltastar"), _sum(cartan, "id2(star ; adj)")
    r = s.equal(a, b)
    assert r and s.replay(r, a, b)


def test_replay_rejects_tampering(cartan):
    s = cg.Session(cartan)
    a, b = _sum(cartan, "deltastar ; dstar ; deltastar"), _sum(cartan, "deltastar")
    r = s.equal(a, b)
    doubled = cg.Equal([(2 * c, inst) for c, inst in r.certificate])
    assert not s.replay(doubled, a, b)


def test_reflexive_cells(leibniz):
    r = cg.equal(cg.Session(leibniz), _sum(leibniz, "m"), _sum(leibniz, "m"))
    assert isinstance(r, cg.Equal) and r.certificate == []


def test_quasi_leibniz(leibniz):
    s = cg.Session(leibniz)
    a = _sum(leibniz, "m ; D - (Dleft ; m + Dright ; m + Dleft ; Dright ; m)")
    zero = TwoCellSum(source=a.source, target=a.target)
    r = s.equal(a, zero)
    assert r and s.replay(r, a, zero)


def test_quasi_leibniz_in_context(leibniz):
    s = cg.Session(leibniz)
    a = _sum(leibniz, "(?1->1 ; dup)[m ; D]")
    b = _sum(leibniz, "(?1->1 ; dup)[Dleft ; m] + (?1->1 ; dup)[Dright ; m] + (?1->1 ; dup)[Dleft ; Dright ; m]")
    r = s.equal(a, b)
    assert r and s.replay(r, a, b)


def test_not_established_is_not_inequality(leibniz):
    s = cg.Session(leibniz, budget=cg.Budget(6, 300))
    r = s.equal(_sum(leibniz, "m ; D"), _sum(leibniz, "Dleft ; m"))
    assert isinstance(r, cg.NotEstablished) and r.exhausted


def test_not_parallel(leibniz):
    with pytest.raises(NotParallel):
        cg.Session(leibniz).equal(_sum(leibniz, "m"), _sum(leibniz, "Delta"))


def test_pentagon_strict():
    alpha = Alphabet.shipped("leibniz").extend(STRICT_ASSOC)
    s = cg.Session(alpha, cell_relations=[r for r in alpha.cell_relations if r.name == "assoc_is_identity"])
    report = s.check_diagram([alpha.cell(PENTAGON_A), alpha.cell(PENTAGON_B)])
    assert len(report) == 1 and isinstance(report[0][2], cg.Equal)


def test_pentagon_free(leibniz):
    s = cg.Session(leibniz, plant_relations=[], cell_relations=[])
    report = s.check_diagram([leibniz.cell(PENTAGON_A), leibniz.cell(PENTAGON_B)])
    assert isinstance(report[0][2], cg.NotEstablished)


def test_strict_mitosis():
    alpha = Alphabet.shipped("leibniz").extend(STRICT_MITOSIS)
    s = cg.Session(alpha, cell_relations=[r for r in alpha.cell_relations if r.name == "mitosis_is_identity"])
    a = _sum(alpha, "(?1->3 ; (and * id) ; and)[ca]")
    b = _sum(alpha, "id2(dup ; (dup * id) ; (and * id) ; and)")
    r = s.equal(a, b)
    assert r and s.replay(r, a, b)
    # without the plant relation the two cells are not even parallel
    with pytest.raises(NotParallel):
        cg.Session(alpha, plant_relations=[], cell_relations=[]).equal(a, b)


def test_paths_small_alphabet():
    alpha = Alphabet.parse("""GENERATORS
id: 1 -> 1 identity
and: 2 -> 1
dup: 1 -> 2
FOOTPATHS
m: dup ; and => id
Delta: id => dup ; and
""")
    strand = alpha.plant("id")
    paths = cg.enumerate_paths(alpha, strand, strand, 2)
    keys = {p.key for p in paths}
    from grafter.twocell import normal_key
    assert normal_key(alpha.cell("Delta ; m"), alpha) in keys
    assert all(len(p.steps) <= 2 for p in paths)


def test_paths_length_zero(leibniz):
    strand = leibniz.plant("id")
    assert [p.steps for p in cg.enumerate_paths(leibniz, strand, strand, 0)] == [()]
    assert cg.enumerate_paths(leibniz, leibniz.plant("dup ; and"), strand, 0) == []


def test_paths_table(leibniz):
    from grafter.twocell import flatten, normal_pasting
    names = ["leibniz_1", "leibniz_2", "leibniz_3", "borowiec_1", "borowiec_2", "stochastic_1", "stochastic_2"]
    tree = leibniz.plant("dup ; (dup * id) ; (and * id) ; and")
    start = time.perf_counter()
    keys = {p.key for p in cg.enumerate_paths(leibniz, tree, leibniz.plant("id"), 4)}
    assert time.perf_counter() - start < 60
    for n in names:
        assert normal_pasting(flatten(leibniz.cell(n), leibniz), leibniz).key in keys


def test_solve_span():
    vs = [{"a": 1, "b": 1}, {"b": 1, "c": -1}]
    assert cg.solve_span(vs, {"a": 1, "c": 1}) == [1, -1]
    assert cg.solve_span(vs, {"a": 1}) is None
    assert cg.solve_span([{"a": 2}], {"a": 1}) is None


def test_budget_env(monkeypatch):
    monkeypatch.setenv("GRAFTER_BUDGET", "5,77")
    assert cg.Budget.default() == cg.Budget(5, 77)
    monkeypatch.setenv("GRAFTER_BUDGET", "123")
    assert cg.Budget.default().max_steps == 123
    monkeypatch.delenv("GRAFTER_BUDGET")
    assert cg.Budget.default() == cg.Budget()
