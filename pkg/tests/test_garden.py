import pytest

from grafter.alphabet import Alphabet
from grafter.errors import AlphabetMismatch, EmptyAlphabet, FormatError
from grafter.garden import GardenStore, generate
from grafter.grafting import graft_all
from oracles import garden_by_brute_iso

# cumulative totals of the Leibniz garden, frozen from garden_by_brute_iso
LEIBNIZ_TOTALS = {1: 4, 2: 31, 3: 244}


@pytest.fixture(scope="module")
def garden3(leibniz):
    return generate(leibniz, 3)


def test_letters_one_is_the_alphabet(leibniz):
    store = generate(leibniz, 1)
    assert len(store) == 4
    assert {e.plant.labels for e in store.sorted_entries()} == {(), ("kill",), ("and",), ("dup",)}


def test_totals(leibniz, garden3):
    assert len(generate(leibniz, 2)) == LEIBNIZ_TOTALS[2]
    assert len(garden3) == LEIBNIZ_TOTALS[3]


def test_single_strand_generator(strand):
    store = generate(strand, 2)
    assert len(store) == 3
    assert len(store.level(2)) == 2


def test_filters(leibniz, garden3):
    endo = garden3.filter(arity=(1, 1), letters=2)
    codes = {p.code for p in endo}
    assert leibniz.plant("dup ; and").code in codes
    assert leibniz.plant("dup ; (id * kill)").code in codes
    assert leibniz.plant("dup ; (kill * id)").code in codes
    assert garden3.filter(letters=0) == []
    assert garden3.filter(lambda e: False) == []


def test_join_census(garden3):
    joins = garden3.filter(arity=(2, 1))
    assert len(joins) >= 7
    assert len(garden3.filter(arity=(2, 1), letters=3)) >= 5


def test_stats_partition(garden3):
    stats = garden3.stats()
    assert sum(stats["by_letters_arity"].values()) == stats["total"] == len(garden3)
    assert sum(stats["by_graftings"].values()) == len(garden3)


def test_threads_same_result(leibniz, garden3):
    assert generate(leibniz, 3, threads=4).dumps() == garden3.dumps()


def test_round_trip(tmp_path, leibniz, garden3):
    path = tmp_path / "g.jsonl"
    garden3.save(path)
    back = GardenStore.load(path, leibniz)
    assert back.stats() == garden3.stats()
    assert back.dumps() == garden3.dumps()


def test_truncated_file(tmp_path, garden3):
    text = garden3.dumps().splitlines()
    with pytest.raises(FormatError):
        GardenStore.loads("\n".join(text[:-1]))
    with pytest.raises(FormatError):
        GardenStore.loads("\n".join(text[:5] + text[-1:]))


def test_alphabet_mismatch(garden3, strand):
    with pytest.raises(AlphabetMismatch):
        GardenStore.loads(garden3.dumps(), strand)


def test_empty_alphabet():
    with pytest.raises(EmptyAlphabet):
        generate(Alphabet.parse("GENERATORS\n"), 2)


def test_totals_match_isomorphism_oracle(leibniz):
    per_level = garden_by_brute_iso(leibniz.generator_plants(), 3, graft_all)
    running = 0
    for n in (1, 2, 3):
        running += per_level[n]
        assert running == LEIBNIZ_TOTALS[n]
