import copy
import json
from math import gcd

import pytest

from helpzc.chartables import (
    BundleError,
    bundle_to_json,
    cyclic_table,
    data_dir,
    load_bundle,
    resolve_bundle_path,
)
from helpzc.cyclotomics import rational

BUNDLED = ["s3.json", "s4.json", "a5.json", "sl23.json", "m11.json"]


def load_named(name):
    return load_bundle(resolve_bundle_path(name))


@pytest.fixture(scope="module")
def bundles():
    return {name: load_named(name) for name in BUNDLED}


def m11_raw():
    with open(resolve_bundle_path("m11.json")) as fh:
        return json.load(fh)


# -- cyclic tables -------------------------------------------------------


def test_cyclic_small():
    c1 = cyclic_table(1).ordinary
    assert len(c1.classes) == 1 and len(c1.characters) == 1
    assert c1.characters[0][0] == 1

    c2 = cyclic_table(2).ordinary
    assert [list(r) for r in c2.characters] == [
        [rational(1), rational(1)],
        [rational(1), rational(-1)],
    ]

    c6 = cyclic_table(6).ordinary
    g = c6.index_of("g1")
    assert c6.power_maps[2][g] == c6.index_of("g2")
    assert c6.power_maps[3][g] == c6.index_of("g3")
    assert cyclic_table(6).is_solvable and cyclic_table(6).is_nilpotent


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclic_roundtrip_and_orthogonality(n):
    # load_bundle re-validates everything, including exact orthogonality
    bundle = cyclic_table(n)
    again = load_bundle(bundle_to_json(bundle))
    assert again.ordinary.group_order == n
    assert again.ordinary.characters == bundle.ordinary.characters


def test_cyclic_bad_order():
    with pytest.raises(ValueError):
        cyclic_table(0)


# -- bundled tables ------------------------------------------------------


def test_bundles_load(bundles):
    assert bundles["a5.json"].ordinary.group_order == 60
    orders = [cl.element_order for cl in bundles["a5.json"].ordinary.classes]
    assert sorted(orders) == [1, 2, 3, 5, 5]

    m11 = bundles["m11.json"].ordinary
    assert len(m11.classes) == 10
    assert m11.index_of("2a") == 1


def test_flags(bundles):
    assert bundles["s4.json"].is_solvable is True
    assert bundles["s4.json"].is_nilpotent is False
    assert bundles["s4.json"].p_solvable_for == {2, 3}
    assert bundles["a5.json"].is_solvable is False
    assert bundles["m11.json"].p_solvable_for == frozenset()


def test_order_facts(bundles):
    a5 = bundles["a5.json"].ordinary
    assert a5.element_orders() == (1, 2, 3, 5)
    assert a5.exponent() == 30
    assert a5.prime_graph_missing_pq() == (6, 10, 15)

    m11 = bundles["m11.json"].ordinary
    assert m11.element_orders() == (1, 2, 3, 4, 5, 6, 8, 11)
    assert m11.exponent() == 1320
    assert m11.prime_graph_missing_pq() == (10, 15, 22, 33, 55)

    assert bundles["s3.json"].ordinary.prime_graph_missing_pq() == (6,)
    assert bundles["s4.json"].ordinary.prime_graph_missing_pq() == (6,)
    assert bundles["sl23.json"].ordinary.prime_graph_missing_pq() == ()
    assert cyclic_table(6).ordinary.prime_graph_missing_pq() == ()


def test_class_of_power(bundles):
    c6 = cyclic_table(6).ordinary
    g = c6.index_of("g1")
    assert c6.class_of_power(g, 2) == c6.index_of("g2")
    assert c6.class_of_power(g, 1) == g
    assert c6.class_of_power(g, 6) == c6.identity_index
    assert c6.class_of_power(g, 4) == c6.index_of("g4")
    assert c6.class_of_power(g, 7) == g

    a5 = bundles["a5.json"].ordinary
    assert a5.class_of_power(a5.index_of("5a"), 2) == a5.index_of("5b")
    assert a5.class_of_power(a5.index_of("5a"), 3) == a5.index_of("5b")
    assert a5.class_of_power(a5.index_of("5a"), 4) == a5.index_of("5a")


def test_classes_of_order_dividing(bundles):
    c6 = cyclic_table(6).ordinary
    assert c6.classes_of_order_dividing(6) == (1, 2, 3, 4, 5)
    assert c6.classes_of_order_dividing(1) == ()

    a5 = bundles["a5.json"].ordinary
    assert a5.classes_of_order_dividing(2) == (a5.index_of("2a"),)
    assert a5.classes_of_order_dividing(6) == (1, 2)
    assert a5.classes_of_order_dividing(30) == (1, 2, 3, 4)


def all_tables(bundles):
    for bundle in bundles.values():
        yield bundle.ordinary
        yield from bundle.brauer
    yield cyclic_table(12).ordinary


def test_power_maps_commute(bundles):
    for t in all_tables(bundles):
        primes = sorted(t.power_maps)
        for p in primes:
            for q in primes:
                for c in range(len(t.classes)):
                    assert (
                        t.power_maps[q][t.power_maps[p][c]]
                        == t.power_maps[p][t.power_maps[q][c]]
                    )


def test_power_maps_match_galois_action(bundles):
    # for p coprime to o(x), chi(x^p) is the Galois image of chi(x) under
    # zeta -> zeta^p; this ties power maps and character values together
    for t in all_tables(bundles):
        for p, pm in t.power_maps.items():
            for c, cl in enumerate(t.classes):
                if gcd(p, cl.element_order) != 1:
                    continue
                for row in t.characters + t.extra_characters:
                    assert row[pm[c]] == row[c].galois(p)


def test_brauer_structure(bundles):
    m11 = bundles["m11.json"]
    assert m11.brauer_primes == (5, 11)
    t5 = m11.brauer_for(5)
    assert t5 is not None and t5.is_brauer and t5.prime == 5
    assert m11.brauer_for(7) is None

    regular = tuple(
        i
        for i, cl in enumerate(m11.ordinary.classes)
        if cl.element_order % 5 != 0
    )
    assert t5.ordinary_index == regular
    assert [cl.name for cl in t5.classes] == [
        m11.ordinary.classes[i].name for i in regular
    ]

    # induced power maps stay on the p-regular classes
    t11 = m11.brauer_for(11)
    a8 = t11.index_of("8a")
    assert t11.class_of_power(a8, 2) == t11.index_of("4a")


def test_degree(bundles):
    m11 = bundles["m11.json"].ordinary
    assert sorted(m11.degree(r) for r in m11.characters) == [
        1, 10, 10, 10, 11, 16, 16, 44, 45, 55,
    ]
    assert sum(m11.degree(r) ** 2 for r in m11.characters) == 7920


# -- rejection of bad input ----------------------------------------------


def corrupt(mutate):
    data = m11_raw()
    mutate(data)
    with pytest.raises(BundleError):
        load_bundle(data)


def test_reject_corrupted_character_value():
    def mutate(d):
        d["ordinary"]["characters"][1][1] = 3  # breaks orthogonality
    corrupt(mutate)


def test_reject_bad_class_sizes():
    def mutate(d):
        d["ordinary"]["classes"][1]["size"] = 166
    corrupt(mutate)


def test_reject_missing_power_map():
    def mutate(d):
        del d["ordinary"]["power_maps"]["11"]
    corrupt(mutate)


def test_reject_power_map_order_mismatch():
    def mutate(d):
        d["ordinary"]["power_maps"]["2"][3] = 3  # 4a^2 must have order 2
    corrupt(mutate)


def test_reject_wrong_brauer_classes():
    def mutate(d):
        d["brauer"][0]["classes"][4] = "5a"  # not 5-regular
    corrupt(mutate)

    def mutate2(d):
        d["brauer"][0]["classes"][4] = "7a"  # unresolved name
    corrupt(mutate2)


def test_reject_duplicate_brauer_prime():
    def mutate(d):
        d["brauer"].append(d["brauer"][0])
    corrupt(mutate)


def test_reject_bad_arity():
    def mutate(d):
        d["ordinary"]["characters"][0] = [1, 1, 1]
    corrupt(mutate)


def test_reject_bad_degree():
    data = bundle_to_json(cyclic_table(2))
    data["ordinary"]["characters"][0] = [0, 0]
    with pytest.raises(BundleError):
        load_bundle(data)


def test_reject_malformed_value():
    def mutate(d):
        d["ordinary"]["characters"][1][1] = "not a number"
    corrupt(mutate)


def test_reject_bad_flags():
    def mutate(d):
        d["flags"] = {"is_solvable": "yes"}
    corrupt(mutate)


def test_error_names_the_table():
    data = m11_raw()
    data["brauer"][0]["classes"][4] = "7a"
    with pytest.raises(BundleError, match=r"M11 mod 5.*7a"):
        load_bundle(data)


# -- serialization and path resolution ------------------------------------


def test_bundle_roundtrip(bundles):
    m11 = bundles["m11.json"]
    again = load_bundle(bundle_to_json(m11))
    assert again.ordinary.characters == m11.ordinary.characters
    assert [t.characters for t in again.brauer] == [t.characters for t in m11.brauer]
    assert again.ordinary.power_maps == m11.ordinary.power_maps


def test_resolve_bundle_path(tmp_path, monkeypatch):
    assert resolve_bundle_path("a5.json").is_file()
    assert resolve_bundle_path("a5") == resolve_bundle_path("a5.json")
    assert resolve_bundle_path("data/a5.json").name == "a5.json"

    with pytest.raises(BundleError, match="no bundle"):
        resolve_bundle_path("nonexistent.json")

    other = tmp_path / "tables"
    other.mkdir()
    copy_path = other / "a5.json"
    copy_path.write_text(resolve_bundle_path("a5.json").read_text())
    monkeypatch.setenv("HELPZC_DATA", str(other))
    assert data_dir() == other
    assert resolve_bundle_path("a5.json") == copy_path


def test_copy_module_is_not_needed_for_immutability(bundles):
    # tables hand out copies/immutables; mutating a parsed dict later must
    # not affect a loaded bundle
    data = m11_raw()
    bundle = load_bundle(data)
    before = bundle.ordinary.characters[1][1]
    data["ordinary"]["characters"][1][1] = 99
    assert bundle.ordinary.characters[1][1] == before
    assert copy.deepcopy(before) == before
