"""Minimum dominating set instances as ILPs, plus closed-form QUBO and
analytic ground truth for path graphs.

A dominating set D covers every vertex: N(D) | D = V.  The ILP uses one
binary variable per vertex and the per-vertex constraint
x_v + sum_{j in N(v)} x_j >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError
from .ilp import (
    BinaryEncoding,
    IntegerLinearProgram,
    QuboProblem,
    SlackSpec,
    as_fraction,
    build_encoding,
    introduce_slacks,
    zeros_fraction,
)


@dataclass(eq=False)
class Graph:
    """Undirected simple graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        self.n = int(self.n)
        if self.n < 1:
            raise InputError("graph needs at least one vertex")
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u},{v}) out of range for n={self.n}")
            normalized.add((min(u, v), max(u, v)))
        self.edges = frozenset(normalized)

    def adjacency(self) -> np.ndarray:
        j = np.zeros((self.n, self.n), dtype=int)
        for u, v in self.edges:
            j[u, v] = 1
            j[v, u] = 1
        return j

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def is_dominating(self, subset) -> bool:
        covered = set(subset)
        for v in subset:
            covered |= self.neighbors(v)
        return len(covered) == self.n


def linear_graph(n: int) -> Graph:
    """Path graph with edges (i, i+1)."""
    if n < 1:
        raise InputError("path graph needs at least one vertex")
    return Graph(n=n, edges=frozenset((i, i + 1) for i in range(n - 1)))


def mds_to_ilp(g: Graph) -> IntegerLinearProgram:
    """Dominating-set ILP: all-ones costs, A = -(I + J), b = all-ones.

    Single-bit variables; a penalty of 1 is already sufficient for this
    problem family, recorded as the penalty hint.
    """
    j = g.adjacency()
    eye = np.eye(g.n, dtype=int)
    return IntegerLinearProgram(
        costs=[1] * g.n,
        constraints=(-(eye + j)).tolist(),
        offsets=[1] * g.n,
        bits_x=(1,) * g.n,
        penalty_hint=Fraction(1),
    )


def mds_qubo_closed_form(g: Graph, penalty) -> QuboProblem:
    """Literal transcription of the blockwise dominating-set QUBO.

    Kept alongside the generic compiler so the two constructions can be
    cross-checked mechanically; diag(u + v^T) below means the diagonal matrix
    of the vector u + v (the two addends are the same vector transposed).
    """
    penalty = as_fraction(penalty)
    if penalty <= 0:
        raise InputError("penalty must be positive")
    ilp = mds_to_ilp(g)
    slacks = introduce_slacks(ilp)
    enc = build_encoding(ilp, slacks)

    n = g.n
    j = np.array([[Fraction(v) for v in row] for row in g.adjacency()], dtype=object)
    eye = zeros_fraction(n, n)
    for i in range(n):
        eye[i, i] = Fraction(1)
    ones = np.array([Fraction(1)] * n, dtype=object)
    t_s = enc.t_s

    def diag_of(vec):
        out = zeros_fraction(len(vec), len(vec))
        for i, v in enumerate(vec):
            out[i, i] = v
        return out

    q_xx = eye + penalty * (
        j.T @ j + j.T + j - diag_of(j.T @ ones + j.T @ ones) - eye
    )
    q_sx = -penalty * ((eye + j).T @ t_s)
    q_ss = penalty * (t_s.T @ t_s + diag_of(t_s.T @ ones + t_s.T @ ones))

    kx, ks = enc.num_x_bits, enc.num_s_bits
    q = zeros_fraction(kx + ks, kx + ks)
    q[:kx, :kx] = q_xx
    q[:kx, kx:] = q_sx
    q[kx:, :kx] = q_sx.T
    q[kx:, kx:] = q_ss
    return QuboProblem(
        matrix=q,
        constant=penalty * n,
        penalty=penalty,
        labels=enc.labels,
        source=ilp,
    )


def mds_analytics(n: int) -> tuple[int, int, Fraction]:
    """(domination number, number of minimum dominating sets, guess probability)
    for the path graph on n vertices.

    Counting argument: a minimum dominating set is a chain of ceil(n/3)
    closed neighborhoods covering the path; the total overhang/overlap budget
    is n mod 3 dependent.  With k = n // 3 that gives 1 set for n % 3 == 0,
    1 + 3k + k(k-1)/2 for n % 3 == 1 (budget 2: two end overhangs, end
    overhang plus a 1-overlap, a 2-overlap, or two 1-overlaps) and k + 2 for
    n % 3 == 2.  The simpler 2k + 1 sometimes quoted for the middle branch
    undercounts from n = 4 on: the four sets of the 4-path are {0,2}, {0,3},
    {1,2}, {1,3}.

    The guess probability counts over vertex-subset space (2**n); divide the
    count by 2**qubit_count instead for the slack-inclusive variant.
    """
    if n < 1:
        raise InputError("n must be positive")
    gamma = -(-n // 3)
    k = n // 3
    if n % 3 == 0:
        count = 1
    elif n % 3 == 1:
        count = 1 + 3 * k + k * (k - 1) // 2
    else:
        count = k + 2
    return gamma, count, Fraction(count, 2**n)


def qubit_count(g: Graph) -> int:
    """Vertex bits plus slack bits: n + sum_v ceil(log2(deg(v) + 1)),
    with at least one slack bit per vertex."""
    total = g.n
    for v in range(g.n):
        total += max(1, g.degree(v).bit_length())
    return total


def mds_slack_spec(g: Graph) -> SlackSpec:
    ilp = mds_to_ilp(g)
    return introduce_slacks(ilp)


def mds_encoding(g: Graph) -> BinaryEncoding:
    ilp = mds_to_ilp(g)
    return build_encoding(ilp, introduce_slacks(ilp))
