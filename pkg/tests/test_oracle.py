from fractions import Fraction

import numpy as np
import pytest

from drgibbs import oracle
from drgibbs.fock import mixed_moment_finite
from drgibbs.gibbs import gibbs_distribution, measure_moment
from drgibbs.params import ClassicalParams, intersection_array, spectral_table

J2_4_2 = ClassicalParams(2, 2, 2, 6)


def test_grassmann_counts():
    g = oracle.battery_instance("j2_4_2")
    assert g.n_vertices == 35
    assert int(g.adjacency.sum(axis=1)[0]) == 18
    assert all(int(x) == 18 for x in g.adjacency.sum(axis=1))
    assert oracle.battery_instance("j2_5_2").n_vertices == 155


def test_bilinear_counts():
    g = oracle.battery_instance("bil_2x2_2")
    assert g.n_vertices == 16
    assert all(int(x) == 9 for x in g.adjacency.sum(axis=1))
    g = oracle.battery_instance("bil_2x3_2")
    assert g.n_vertices == 64
    assert all(int(x) == 21 for x in g.adjacency.sum(axis=1))
    assert oracle.build_bilinear(3, 2, 2).n_vertices == 81


def test_size_bound():
    with pytest.raises(ValueError):
        oracle.build_bilinear(3, 3, 3)  # 3^9 > 2000
    with pytest.raises(ValueError):
        oracle.build_grassmann(2, 8, 4)


def test_empirical_intersection_matches_formulas(j2_4_2):
    assert oracle.empirical_intersection(j2_4_2) == intersection_array(J2_4_2)
    bil = oracle.battery_instance("bil_2x2_2")
    assert oracle.empirical_intersection(bil) == intersection_array(
        ClassicalParams(2, 2, 1, 3)
    )


def test_empirical_intersection_degenerate_entries(j2_4_2):
    ia = oracle.empirical_intersection(j2_4_2)
    assert ia.c_seq[0] == 0 and ia.a_seq[0] == 0 and ia.b_seq[0] == ia.k


def test_non_distance_regular_input_rejected():
    # path on 4 vertices: c-counts depend on the pair
    adjacency = np.zeros((4, 4), dtype=np.uint8)
    for u, v in ((0, 1), (1, 2), (2, 3)):
        adjacency[u, v] = adjacency[v, u] = 1
    g = oracle.GraphInstance(4, adjacency, oracle._bfs_distances(adjacency), 3)
    with pytest.raises(ValueError):
        oracle.empirical_intersection(g)


def test_empirical_spectrum(j2_4_2):
    values, mults = oracle.empirical_spectrum(j2_4_2)
    got = sorted(zip(mults, values))
    assert [m for m, _ in got] == sorted([1, 14, 20])
    table = dict(zip(mults, values))
    assert abs(table[1] - 18) < 1e-7
    assert abs(table[14] - 3) < 1e-7
    assert abs(table[20] + 3) < 1e-7
    bil = oracle.battery_instance("bil_2x2_2")
    values, mults = oracle.empirical_spectrum(bil)
    assert sorted(zip(mults, np.round(values, 6))) == [(1, 9.0), (6, -3.0), (9, 1.0)]


def test_empirical_gibbs_moments(j2_4_2):
    t = Fraction(1, 2)
    moments = oracle.empirical_gibbs(j2_4_2, t, 3)
    assert abs(moments[0] - 1) < 1e-12
    assert abs(moments[1]) < 1e-12
    assert abs(moments[2] - 1) < 1e-12
    st = spectral_table(J2_4_2)
    mu = gibbs_distribution(J2_4_2, st, t)
    assert abs(moments[3] - measure_moment(mu, 3)) < 1e-9


def test_empirical_gibbs_vacuum_is_spectral(j2_4_2):
    st = spectral_table(J2_4_2)
    mu = gibbs_distribution(J2_4_2, st, 0)
    moments = oracle.empirical_gibbs(j2_4_2, 0, 4)
    for m in range(5):
        assert abs(moments[m] - measure_moment(mu, m)) < 1e-9


def test_quantum_components_match_primary_module(j2_4_2):
    st = spectral_table(J2_4_2)
    t = Fraction(1, 2)
    words = ["+", "-", "o", "+-", "o+", "+o-", "++--", "+o-o", "oo++"]
    for w in words:
        emp = oracle.empirical_quantum_components(j2_4_2, 0, t, w)
        form = mixed_moment_finite(J2_4_2, st, t, w)
        assert abs(emp - form) < 1e-9, w


def test_quantum_components_base_vertex_independence(j2_4_2):
    t = Fraction(1, 2)
    values = [
        oracle.empirical_quantum_components(j2_4_2, v, t, "+o-")
        for v in (0, 7, 23)
    ]
    assert max(values) - min(values) < 1e-10


def test_quantum_components_annihilate_base(j2_4_2):
    assert oracle.empirical_quantum_components(j2_4_2, 3, Fraction(1, 2), "-") == 0.0


def test_kernel_psd_at_inverse_base(j2_4_2):
    kernel = 0.5 ** j2_4_2.distance.astype(np.float64)
    assert float(np.linalg.eigvalsh(kernel).min()) >= -1e-8


def test_dump_adjacency(j2_4_2):
    lines = oracle.dump_adjacency(j2_4_2).splitlines()
    assert len(lines) == 35 * 18 // 2
    u, v = map(int, lines[0].split())
    assert j2_4_2.adjacency[u, v] == 1


def test_f3_battery_instance():
    rep = oracle.equivalence_report("bil_2x3_3")
    assert rep["ok"] and rep["n_vertices"] == 729
