from __future__ import annotations

import itertools

import numpy as np
import pytest

from muwm.errors import BadSpec, OddD
from muwm.search import max_clique
from muwm.spherical import antipodal_classes, orthogonality_graph
from muwm.lattice import (
    Component,
    confirm_weight4,
    d_frames_family,
    d_lattice_decomposition,
    direct_sum_frames,
    frames_for,
    generate_roots,
    irreducible_frames,
    lattices_of_rank,
    max_disjoint_frames,
    max_orthogonal_roots,
    odd_menu_valid,
    parse_spec,
    round_robin,
    symmetry_orbits,
    weight4_maximum,
    weight4_table_value,
)

COUNTS = {"A2": 6, "A4": 20, "A8": 72, "D4": 24, "D5": 40, "D7": 84, "E6": 72, "E7": 126,
          "E8": 240}


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_root_counts_and_inner_products(name):
    R = generate_roots(name)
    assert len(R) == COUNTS[name]
    V = R.roots
    keys = {tuple(v) for v in V.tolist()}
    assert all(tuple(-x for x in k) in keys for k in keys)
    assert set(np.unique(V @ V.T).tolist()) <= {0, 4, -4, 8, -8}
    assert (np.einsum("ij,ij->i", V, V) == 8).all()


def test_sum_counts_add():
    assert len(generate_roots("D4+E7")) == 24 + 126
    assert generate_roots("2E7+E8").rank == 22


def test_parse_spec():
    assert parse_spec("E7+D10") == (Component("E", 7), Component("D", 10))
    assert parse_spec("E7⊥D10") == parse_spec("E7+D10")
    for bad in ["E9", "D3", "X4", "", "E7+"]:
        with pytest.raises(BadSpec):
            parse_spec(bad)


def test_odd_menu():
    assert odd_menu_valid("E7+D10")
    assert odd_menu_valid("2E7+E8")
    assert not odd_menu_valid("E8+D9")
    assert not odd_menu_valid("D4+E7")


@pytest.mark.parametrize("name, size", [("A4", 2), ("D5", 4), ("E6", 4), ("E7", 7)])
def test_max_orthogonal_roots(name, size):
    R = generate_roots(name)
    res = max_orthogonal_roots(R)
    assert res.size == size
    reps, _ = antipodal_classes(R.code())
    # orbit reduction agrees with a plain search over the whole graph
    assert max_clique(orthogonality_graph(reps)).size == size
    W = np.array([reps[i] for i in res.witness])
    assert np.array_equal(W @ W.T, 8 * np.eye(size, dtype=np.int64))


def test_symmetry_orbits_partition():
    R = generate_roots("E7")
    orbits = symmetry_orbits(R)
    flat = sorted(i for o in orbits for i in o)
    assert flat == list(range(len(R) // 2))


@pytest.mark.parametrize("d", range(4, 17, 2))
def test_round_robin_partition(d):
    rounds = round_robin(d)
    assert len(rounds) == d - 1
    edges = [e for r in rounds for e in r]
    assert sorted(edges) == list(itertools.combinations(range(d), 2))
    for r in rounds:
        assert sorted(v for e in r for v in e) == list(range(d))
    dec = d_lattice_decomposition(d)
    assert dec.count == d - 1 and not dec.leftover


def test_round_robin_odd():
    with pytest.raises(OddD):
        round_robin(5)


@pytest.mark.parametrize("name, m", [
    ("A2", 0), ("A3", 0), ("A4", 0), ("A5", 0), ("A6", 0), ("A7", 0), ("A8", 0),
    ("D4", 3), ("D5", 0), ("D6", 5), ("D7", 0), ("D8", 7),
    ("E6", 0), ("E7", 9), ("E8", 15),
])
def test_frame_counts(name, m):
    res = max_disjoint_frames(generate_roots(name))
    assert res.count == m
    assert res.optimal
    res.decomposition.validate()
    if m == 0:
        assert res.clique_number < generate_roots(name).rank


def test_direct_sums():
    assert frames_for("D4+E7").count == 3
    assert frames_for("D6+E7").count == 5
    assert frames_for("E8+E8").count == 15
    parts = [irreducible_frames("D4").decomposition, irreducible_frames("E7").decomposition]
    assert direct_sum_frames(parts).count == 3


@pytest.mark.parametrize("d, m, lat", [(7, 8, "E7"), (8, 14, "E8"), (10, 8, "D10"),
                                       (11, 2, "D4+E7"), (5, 0, None)])
def test_weight4(d, m, lat):
    res = weight4_maximum(d)
    assert res.m == m and res.lattice == lat
    if m:
        assert res.family.size == m
        assert res.family.params.as_tuple() == (d, 4, 4, 4)


def test_weight4_override():
    res = weight4_maximum(16, lattice="E8+E8")
    assert res.m == 14
    with pytest.raises(BadSpec):
        weight4_maximum(16, lattice="E8")


def test_table_values():
    expected = {4: 2, 5: 0, 6: 4, 7: 8, 8: 14, 9: 0, 10: 8, 11: 2, 12: 10, 13: 4, 14: 12,
                15: 8, 16: 14, 17: 8, 19: 8}
    for d, m in expected.items():
        assert weight4_table_value(d)[0] == m


def test_lattices_of_rank_counts():
    # partitions of 4 into components of rank >= 1 with D from 4 and E from 6
    names = {"+".join(c.name for c in lat) for lat in lattices_of_rank(4)}
    assert names == {"A4", "D4", "A1+A3", "A2+A2", "A1+A1+A2", "A1+A1+A1+A1"}


@pytest.mark.parametrize("d", range(4, 14))
def test_confirmation_small(d):
    assert confirm_weight4(d).m == weight4_table_value(d)[0]


def test_d_frames_family():
    fam, code, dec = d_frames_family(6)
    assert fam.size == 5 and fam.params.as_tuple() == (6, 2, 4, 1)
