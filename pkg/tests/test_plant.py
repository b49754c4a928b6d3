import random

import pytest

from grafter import plant as pl
from grafter.errors import ArityMismatch, InvalidPlant, UnknownGenerator
from grafter.grafting import GraftingSpec, k_graftings
from oracles import brute_iso, euler_planar, wheel_planar


def test_parse_generator(leibniz):
    p = leibniz.plant("and")
    assert p.arity == (2, 1) and p.labels == ("and",)


def test_parse_split_join(leibniz):
    p = leibniz.plant("dup ; and")
    assert p.arity == (1, 1)
    assert sorted(p.labels) == ["and", "dup"]


def test_identity_has_no_vertices(leibniz):
    p = leibniz.plant("id")
    assert p.arity == (1, 1) and p.letters == 0


def test_arity_mismatch(leibniz):
    with pytest.raises(ArityMismatch):
        leibniz.plant("and ; and")


def test_unknown_generator(leibniz):
    with pytest.raises(UnknownGenerator):
        leibniz.plant("and ; frob")


def test_split_join_valid(leibniz):
    assert pl.validate(leibniz.plant("dup ; and")).valid


def test_transposition_not_planar():
    # 2->2 with leaf 0 -> root 1 and leaf 1 -> root 0, no vertices
    p = pl.Plant(2, 2, (), (), {("R", 0): ("L", 1), ("R", 1): ("L", 0)})
    report = pl.validate(p)
    assert not report.valid
    assert any("planar" in v for v in report.violations)
    assert not pl.is_planar(p)
    assert not euler_planar(p)


def test_crossed_join_not_planar():
    # the join fed in crossed order beside a through strand
    p = pl.Plant(3, 2, ("and",), ((2, 1),),
                 {("i", 0, 0): ("L", 0), ("i", 0, 1): ("L", 2), ("R", 0): ("o", 0, 0), ("R", 1): ("L", 1)})
    assert not pl.is_planar(p)
    assert not euler_planar(p)


def test_unconnected_input_rejected():
    p = pl.Plant(1, 1, ("and",), ((2, 1),), {("i", 0, 0): ("L", 0), ("R", 0): ("o", 0, 0)})
    report = pl.validate(p)
    assert not report.valid and report.violations[0].startswith("incidence")
    with pytest.raises(InvalidPlant):
        pl.require_valid(p)


def test_codes_same_for_same_diagram(leibniz):
    by_term = leibniz.plant("dup ; and")
    by_graft = k_graftings(GraftingSpec(leibniz.plant("dup"), leibniz.plant("and"), 2))
    assert by_term.code == by_graft.code


def test_concatenations_differ(leibniz):
    assert leibniz.plant("and * dup").code != leibniz.plant("dup * and").code
    assert not pl.iso_eq(leibniz.plant("and * dup"), leibniz.plant("dup * and"))


def test_mirror_graftings_differ(leibniz):
    up, lo = leibniz.plant("dup"), leibniz.plant("and")
    a = k_graftings(GraftingSpec(up, lo, 1, "suffix-prefix"))
    b = k_graftings(GraftingSpec(up, lo, 1, "prefix-suffix"))
    assert a.code != b.code
    assert not brute_iso(a, b)


def test_iso_eq_reflexive_and_matches_brute(leibniz):
    p = leibniz.plant("dup ; (dup * id) ; (and * id) ; and")
    assert pl.iso_eq(p, p)
    q = k_graftings(GraftingSpec(leibniz.plant("dup"), leibniz.plant("and"), 2))
    assert pl.iso_eq(leibniz.plant("dup ; and"), q) and brute_iso(leibniz.plant("dup ; and"), q)


def test_renumbering_invariance(leibniz):
    rng = random.Random(7)
    p = leibniz.plant("dup ; (dup * kill) ; and ; dup ; (id * dup) ; (and * id)")
    for _ in range(20):
        order = list(range(len(p.labels)))
        rng.shuffle(order)
        q = pl.renumbered(p, order)
        assert q.code == p.code
        assert brute_iso(p, q)


def test_code_round_trip(leibniz):
    p = leibniz.plant("(dup * dup) ; (id * and * id) ; (kill * dup * id)")
    q = pl.Plant.from_code(p.code.decode("ascii") if isinstance(p.code, bytes) else p.code)
    assert pl.iso_eq(p, q) and q.arity == p.arity


def test_arity_preserved_by_canonicalization(leibniz):
    p = leibniz.plant("and * dup")
    assert pl.canonical_plant(p).arity == p.arity


def test_planarity_agrees_with_oracles(leibniz):
    from grafter.garden import generate
    for e in generate(leibniz, 3).sorted_entries():
        assert pl.is_planar(e.plant) == euler_planar(e.plant) is True
        assert wheel_planar(e.plant)


def test_random_rewirings_planarity_oracle():
    """Random rewirings of small diagrams: is_planar agrees with the Euler oracle."""
    rng = random.Random(11)
    sigs_pool = [(2, 1), (1, 2), (1, 1), (1, 0)]
    agree = 0
    for _ in range(400):
        k = rng.randint(1, 3)
        sigs = tuple(rng.choice(sigs_pool) for _ in range(k))
        labels = tuple(f"g{a}{b}" for a, b in sigs)
        ins = rng.randint(0, 3)
        ups = [("L", i) for i in range(ins)] + [("o", v, j) for v, (a, b) in enumerate(sigs) for j in range(b)]
        downs = [("i", v, j) for v, (a, b) in enumerate(sigs) for j in range(a)]
        outs = len(ups) - len(downs)
        if outs < 0:
            continue
        downs += [("R", r) for r in range(outs)]
        rng.shuffle(ups)
        p = pl.Plant(ins, outs, labels, sigs, dict(zip(downs, ups)))
        if pl._topological_order(p) is None:
            continue
        assert pl.is_planar(p) == euler_planar(p)
        if pl.is_planar(p):
            assert wheel_planar(p)
        agree += 1
    assert agree > 100


def test_occurrences_and_substitute(leibniz):
    t3 = leibniz.plant("dup ; (dup * id) ; (and * id) ; and")
    split_join = leibniz.plant("dup ; and")
    hits = pl.occurrences(t3, split_join)
    assert len(hits) == 1
    assert pl.substitute(hits[0], split_join).code == t3.code
    assert len(pl.occurrences(t3, leibniz.plant("id"))) == 7


def test_compose_with_identity(leibniz):
    p = leibniz.plant("dup ; (id * kill)")
    assert pl.iso_eq(pl.compose(p, pl.identity(1)), p)
