import itertools
from fractions import Fraction

import pytest

from qanneal.errors import InputError
from qanneal.ilp import compile_ilp, decode_solution
from qanneal.mds import (
    Graph,
    linear_graph,
    mds_analytics,
    mds_qubo_closed_form,
    mds_to_ilp,
    qubit_count,
)
from qanneal.oracle import enumerate_qubo, mds_subset_oracle


def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for choice in itertools.product((0, 1), repeat=len(pairs)):
        yield Graph(n=n, edges=frozenset(p for p, c in zip(pairs, choice) if c))


def test_graph_validation():
    with pytest.raises(InputError):
        Graph(n=2, edges=frozenset({(0, 0)}))
    with pytest.raises(InputError):
        Graph(n=2, edges=frozenset({(0, 2)}))
    g = Graph(n=3, edges=frozenset({(2, 0)}))
    assert g.adjacency()[0, 2] == 1 and g.adjacency()[2, 0] == 1


def test_linear_graph_edges():
    assert linear_graph(2).edges == frozenset({(0, 1)})
    assert linear_graph(3).edges == frozenset({(0, 1), (1, 2)})
    assert len(linear_graph(6).edges) == 5


def test_mds_to_ilp_g2():
    ilp = mds_to_ilp(linear_graph(2))
    assert ilp.constraints.tolist() == [[-1, -1], [-1, -1]]
    assert ilp.offsets.tolist() == [1, 1]
    assert ilp.costs.tolist() == [1, 1]
    assert ilp.bits_x == (1, 1)


def test_star_graph_optimum_is_hub():
    star = Graph(n=4, edges=frozenset({(0, 1), (0, 2), (0, 3)}))
    gamma, sets = mds_subset_oracle(star)
    assert gamma == 1 and sets == [(0,)]
    qubo, enc = compile_ilp(mds_to_ilp(star), penalty=2)
    report = enumerate_qubo(qubo)
    decoded = {
        decode_solution(qubo, enc, psi).x
        for psi in report.ground_configurations()
    }
    assert decoded == {(1, 0, 0, 0)}


def test_closed_form_matches_compiler_energywise():
    # every graph on up to 4 vertices, every bit vector
    for n in (1, 2, 3, 4):
        for g in all_graphs(n):
            compiled, enc = compile_ilp(mds_to_ilp(g), penalty=2)
            closed = mds_qubo_closed_form(g, 2)
            assert (compiled.matrix == closed.matrix).all()
            assert compiled.constant == closed.constant


def test_closed_form_single_vertex():
    g = Graph(n=1, edges=frozenset())
    qubo = mds_qubo_closed_form(g, 2)
    report = enumerate_qubo(qubo)
    enc = compile_ilp(mds_to_ilp(g), penalty=2)[1]
    decoded = {
        decode_solution(qubo, enc, psi).x[0]
        for psi in report.ground_configurations()
    }
    assert decoded == {1}
    assert report.ground_energy == 1


def test_closed_form_g2_degenerate_pair():
    report = enumerate_qubo(mds_qubo_closed_form(linear_graph(2), 2))
    assert report.ground_degeneracy == 2
    assert sorted(report.ground_configurations()) == [(0, 1, 0, 0), (1, 0, 0, 0)]


def test_analytics_examples():
    assert mds_analytics(2) == (1, 2, Fraction(1, 2))
    assert mds_analytics(6) == (2, 1, Fraction(1, 64))
    assert mds_analytics(4) == (2, 4, Fraction(1, 4))
    assert mds_analytics(5) == (2, 3, Fraction(3, 32))


@pytest.mark.parametrize("n", range(1, 13))
def test_analytics_against_subset_oracle(n):
    gamma, count, prob = mds_analytics(n)
    oracle_gamma, sets = mds_subset_oracle(linear_graph(n))
    assert gamma == oracle_gamma
    assert count == len(sets)
    assert prob == Fraction(len(sets), 2**n)


@pytest.mark.parametrize("n", range(2, 10))
def test_linear_graph_qubo_degeneracy(n):
    gamma, count, _ = mds_analytics(n)
    qubo, enc = compile_ilp(mds_to_ilp(linear_graph(n)))
    report = enumerate_qubo(qubo, cap=26)
    assert report.ground_energy == gamma
    xs = {decode_solution(qubo, enc, psi).x for psi in report.ground_configurations()}
    assert len(xs) == count == report.ground_degeneracy


def test_every_graph_up_to_4_vertices_agrees_with_subset_oracle():
    for n in (1, 2, 3, 4):
        for g in all_graphs(n):
            gamma, sets = mds_subset_oracle(g)
            expected = {tuple(sorted(s)) for s in sets}
            for qubo, enc in (
                compile_ilp(mds_to_ilp(g), penalty=2),
                (mds_qubo_closed_form(g, 2), compile_ilp(mds_to_ilp(g), penalty=2)[1]),
            ):
                report = enumerate_qubo(qubo)
                decoded = set()
                for psi in report.ground_configurations():
                    sol = decode_solution(qubo, enc, psi)
                    assert sol.feasible
                    members = tuple(v for v, bit in enumerate(sol.x) if bit)
                    assert g.is_dominating(members)
                    decoded.add(members)
                assert decoded == expected


def test_qubit_count():
    assert qubit_count(linear_graph(2)) == 4
    # middle vertex of the 3-path has degree 2, so its slack takes 2 bits
    assert qubit_count(linear_graph(3)) == 7
    assert qubit_count(Graph(n=1, edges=frozenset())) == 2
    enc = compile_ilp(mds_to_ilp(linear_graph(5)))[1]
    assert qubit_count(linear_graph(5)) == enc.num_bits
