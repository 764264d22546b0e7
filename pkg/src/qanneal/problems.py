"""Built-in benchmark problems used by the verify suite and the tests."""

from __future__ import annotations

from fractions import Fraction

from .ilp import QuboProblem, compile_ilp, zeros_fraction
from .ising import IsingModel, qubo_to_ising
from .mds import linear_graph, mds_to_ilp


def offset_test_qubo() -> QuboProblem:
    """Three-qubit offset calibration problem.

    QUBO with -1/4 on every diagonal and a single +1 coupling between bits 0
    and 1; doubly degenerate ground states (0,1,1) and (1,0,1).  A negative
    offset on qubit 0 makes (1,0,1) the unique winner, on qubit 1 it makes
    (0,1,1) win, which pins down the sign conventions of the whole offset
    pipeline.
    """
    q = zeros_fraction(3, 3)
    for i in range(3):
        q[i, i] = Fraction(-1, 4)
    q[0, 1] = Fraction(1, 2)  # symmetric halves of the +1 coupling
    q[1, 0] = Fraction(1, 2)
    return QuboProblem(matrix=q, constant=Fraction(0))


def offset_test_ising() -> IsingModel:
    return qubo_to_ising(offset_test_qubo())


def embedded_field_fixture() -> IsingModel:
    """Field pattern of a hardware-embedded two-vertex instance (couplers not
    published, so J = 0); exercises the strong/weak split on realistic values."""
    return IsingModel(
        h=(2.75, 1.5, -1.0, -1.25, -1.0),
        couplers={},
        constant=0.0,
    )


def linear_mds_ising(n: int, penalty=None) -> IsingModel:
    """Compiled dominating-set problem for the path graph on n vertices."""
    qubo, _ = compile_ilp(mds_to_ilp(linear_graph(n)), penalty=penalty)
    return qubo_to_ising(qubo)
