import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qanneal.errors import InfeasibleConstraintError, InputError
from qanneal.ilp import (
    IntegerLinearProgram,
    SlackSpec,
    build_encoding,
    compile_ilp,
    compile_to_qubo,
    decode_solution,
    introduce_slacks,
    penalty_floor,
    rescale_rows,
)
from qanneal.mds import linear_graph, mds_to_ilp


def brute_minima(qubo, num_bits):
    """Independent of the oracle module: plain itertools + Fraction."""
    energies = {
        psi: qubo.energy(psi) for psi in itertools.product((0, 1), repeat=num_bits)
    }
    emin = min(energies.values())
    return emin, sorted(p for p, e in energies.items() if e == emin)


def chi_squared_direct(ilp, enc, penalty, psi):
    """Direct substitution into cost + penalty * ||A x + s + b||^2."""
    x, s = enc.decode(psi)
    value = ilp.objective(x)
    if ilp.num_constraints:
        residual = ilp.constraints @ x + s + ilp.offsets
        value = value + Fraction(penalty) * (residual @ residual)
    return value


def test_slack_widths_g2():
    spec = introduce_slacks(mds_to_ilp(linear_graph(2)))
    assert spec.bits_s == (1, 1)


def test_slack_width_floor_degenerate_row():
    ilp = IntegerLinearProgram(costs=[0], constraints=[[0]], offsets=[0], bits_x=[1])
    assert introduce_slacks(ilp).bits_s == (1,)


def test_slack_width_two_bit_range():
    # max of x - 1 over x in 0..3 is 2, so the slack needs two bits
    ilp = IntegerLinearProgram(costs=[0], constraints=[[-1]], offsets=[1], bits_x=[2])
    assert introduce_slacks(ilp).bits_s == (2,)


def test_unsatisfiable_row_reports_evidence():
    ilp = IntegerLinearProgram(costs=[0], constraints=[[1]], offsets=[1], bits_x=[1])
    with pytest.raises(InfeasibleConstraintError) as err:
        introduce_slacks(ilp)
    assert err.value.row == 0
    assert err.value.max_slack < 0


def test_encoding_mixed_widths():
    ilp = IntegerLinearProgram(costs=[1, 1], constraints=[], offsets=[], bits_x=[1, 2])
    enc = build_encoding(ilp, SlackSpec(bits_s=()))
    assert enc.t_x.tolist() == [[1, 0, 0], [0, 1, 2]]


def test_encoding_single_bit_identity():
    ilp = IntegerLinearProgram(costs=[1, 1, 1], constraints=[], offsets=[], bits_x=[1, 1, 1])
    enc = build_encoding(ilp, SlackSpec(bits_s=()))
    assert (enc.t_x == np.eye(3)).all()


def test_three_bit_decode():
    ilp = IntegerLinearProgram(costs=[1], constraints=[], offsets=[], bits_x=[3])
    enc = build_encoding(ilp, SlackSpec(bits_s=()))
    x, s = enc.decode((1, 0, 1))
    assert x.tolist() == [5]


def test_compile_g2_ground_states():
    ilp = mds_to_ilp(linear_graph(2))
    qubo, enc = compile_ilp(ilp, penalty=2)
    emin, minima = brute_minima(qubo, enc.num_bits)
    assert emin == 1
    assert minima == [(0, 1, 0, 0), (1, 0, 0, 0)]
    assert qubo.energy((1, 1, 1, 1)) == 2
    assert qubo.constant == 4


def test_compile_unconstrained():
    ilp = IntegerLinearProgram(costs=[1], constraints=[], offsets=[], bits_x=[1])
    qubo, enc = compile_ilp(ilp, penalty=1)
    assert qubo.matrix.tolist() == [[1]]
    assert qubo.constant == 0


def test_compile_g3_unique_minimum():
    ilp = mds_to_ilp(linear_graph(3))
    qubo, enc = compile_ilp(ilp, penalty=2)
    _, minima = brute_minima(qubo, enc.num_bits)
    decoded = {decode_solution(qubo, enc, psi).x for psi in minima}
    assert decoded == {(0, 1, 0)}
    assert decode_solution(qubo, enc, minima[0]).objective == 1


def test_compile_rejects_bad_penalty():
    ilp = mds_to_ilp(linear_graph(2))
    enc = build_encoding(ilp, introduce_slacks(ilp))
    with pytest.raises(InputError):
        compile_to_qubo(ilp, enc, 0)


def test_decode_g2_examples():
    qubo, enc = compile_ilp(mds_to_ilp(linear_graph(2)), penalty=2)

    ground = decode_solution(qubo, enc, (1, 0, 0, 0))
    assert (ground.x, ground.s) == ((1, 0), (0, 0))
    assert ground.feasible and ground.objective == 1

    empty = decode_solution(qubo, enc, (0, 0, 0, 0))
    assert empty.x == (0, 0) and not empty.feasible

    excited = decode_solution(qubo, enc, (1, 1, 1, 1))
    assert excited.x == (1, 1) and excited.s == (1, 1)
    assert excited.feasible and excited.objective == 2
    assert excited.identity_holds


def test_penalty_floor_values():
    assert penalty_floor(mds_to_ilp(linear_graph(5))) == 1
    zero_cost = IntegerLinearProgram(costs=[0], constraints=[], offsets=[], bits_x=[1])
    assert penalty_floor(zero_cost) == 1
    two_ones = IntegerLinearProgram(costs=[1, 1], constraints=[], offsets=[], bits_x=[1, 1])
    assert penalty_floor(two_ones) == 3


def test_rescale_rows_makes_integer():
    ilp = IntegerLinearProgram(
        costs=[1],
        constraints=[[Fraction(-1, 2)]],
        offsets=[Fraction(1, 3)],
        bits_x=[2],
    )
    with pytest.raises(InputError):
        introduce_slacks(ilp)
    scaled = rescale_rows(ilp)
    assert scaled.constraints[0, 0] == -3
    assert scaled.offsets[0] == 2
    # same feasible set
    for x in range(4):
        assert ilp.is_feasible([x]) == scaled.is_feasible([x])


def test_quadratic_costs_enter_x_block():
    ilp = IntegerLinearProgram(
        costs=[0, 0],
        constraints=[],
        offsets=[],
        bits_x=[1, 2],
        quadratic=[[1, 1], [0, 0]],
    )
    qubo, enc = compile_ilp(ilp, penalty=1)
    for psi in itertools.product((0, 1), repeat=3):
        x, _ = enc.decode(psi)
        assert qubo.energy(psi) == x @ ilp.quadratic @ x


def test_upper_triangular_terms_reproduce_energy():
    qubo, enc = compile_ilp(mds_to_ilp(linear_graph(3)), penalty=2)
    terms = qubo.upper_triangular_terms()
    for psi in itertools.product((0, 1), repeat=enc.num_bits):
        value = sum(c * psi[i] * psi[j] for i, j, c in terms) + qubo.constant
        assert value == qubo.energy(psi)


# ---------------------------------------------------------------------------
# property tests over random small programs

small_fraction = st.fractions(
    min_value=Fraction(-3), max_value=Fraction(3), max_denominator=2
)


@st.composite
def small_ilps(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(0, 2))
    bits = draw(st.lists(st.integers(1, 2), min_size=n, max_size=n))
    costs = draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    a = [
        draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n)) for _ in range(m)
    ]
    b = draw(st.lists(st.integers(-4, 2), min_size=m, max_size=m))
    return IntegerLinearProgram(
        costs=costs, constraints=a, offsets=b, bits_x=tuple(bits)
    )


@settings(max_examples=60, deadline=None)
@given(small_ilps(), st.integers(1, 5))
def test_expansion_matches_direct_substitution(ilp, penalty):
    try:
        slacks = introduce_slacks(ilp)
    except InfeasibleConstraintError:
        return
    enc = build_encoding(ilp, slacks)
    qubo = compile_to_qubo(ilp, enc, penalty)
    for psi in itertools.product((0, 1), repeat=enc.num_bits):
        assert qubo.energy(psi) == chi_squared_direct(ilp, enc, penalty, psi)


@settings(max_examples=40, deadline=None)
@given(small_ilps())
def test_qubo_minimizers_match_box_search(ilp):
    try:
        slacks = introduce_slacks(ilp)
    except InfeasibleConstraintError:
        return
    enc = build_encoding(ilp, slacks)
    if enc.num_bits > 12:
        return
    qubo = compile_to_qubo(ilp, enc, penalty_floor(ilp))

    feasible_best = None
    box_optima = set()
    for x in itertools.product(*(range(1 << r) for r in ilp.bits_x)):
        if not ilp.is_feasible(x):
            continue
        value = ilp.objective(x)
        if feasible_best is None or value < feasible_best:
            feasible_best, box_optima = value, {x}
        elif value == feasible_best:
            box_optima.add(x)
    if feasible_best is None:
        return

    _, minima = brute_minima(qubo, enc.num_bits)
    decoded = {decode_solution(qubo, enc, psi).x for psi in minima}
    assert decoded == box_optima
    assert all(decode_solution(qubo, enc, psi).feasible for psi in minima)
