"""Brute-force ground truth: exhaustive enumeration of QUBO, ILP and
dominating-set instances.

Enumeration is counting-order deterministic (configuration index little-endian
in the bit vector).  For rational QUBOs the energies are computed on a common
denominator so grouping into levels is exact; the scaled integer energies are
evaluated in float64, which is exact as long as their magnitude stays below
2**53 (checked).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import CapExceededError
from .ilp import IntegerLinearProgram, QuboProblem
from .mds import Graph

DEFAULT_BIT_CAP = 24
_EXACT_FLOAT_LIMIT = 2.0**53


@dataclass
class SpectrumReport:
    """Distinct energy levels in increasing order with their multiplicities.

    ground_indices are configuration indices of the lowest level; bit j of an
    index is psi[j].
    """

    num_bits: int
    energies: tuple
    degeneracies: tuple[int, ...]
    ground_indices: np.ndarray
    grouping_tolerance: float  # 0.0 means exact rational grouping

    @property
    def ground_energy(self):
        return self.energies[0]

    @property
    def ground_degeneracy(self) -> int:
        return self.degeneracies[0]

    @property
    def gap(self):
        if len(self.energies) < 2:
            return None
        return self.energies[1] - self.energies[0]

    def ground_configurations(self) -> list[tuple[int, ...]]:
        return [index_to_bits(int(i), self.num_bits) for i in self.ground_indices]


def index_to_bits(index: int, num_bits: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(num_bits))


def bits_to_index(bits) -> int:
    return sum(int(b) << j for j, b in enumerate(bits))


def _bit_columns(num_bits: int) -> np.ndarray:
    idx = np.arange(1 << num_bits, dtype=np.int64)
    return ((idx[:, None] >> np.arange(num_bits)) & 1).astype(np.float64)


def _scaled_integer_form(qubo: QuboProblem):
    """(Q*D, C*D, D) as float64/int so all energies are integers, or None."""
    entries = list(qubo.matrix.flat) + [qubo.constant]
    fracs = []
    for v in entries:
        if not isinstance(v, Fraction):
            try:
                v = Fraction(v)
            except (TypeError, ValueError):
                return None
        fracs.append(v)
    scale = lcm(*(v.denominator for v in fracs)) if fracs else 1
    k = qubo.num_bits
    q_int = np.array(
        [[int(qubo.matrix[i, j] * scale) for j in range(k)] for i in range(k)],
        dtype=np.float64,
    )
    c_int = int(Fraction(qubo.constant) * scale)
    bound = np.abs(q_int).sum() + abs(c_int)
    if bound >= _EXACT_FLOAT_LIMIT:
        return None
    return q_int, c_int, scale


def _energy_blocks(q: np.ndarray, constant: float, num_bits: int):
    """Yield (start_index, energies) blocks covering all 2**num_bits configs."""
    k1 = min(num_bits, 14)
    k2 = num_bits - k1
    b1 = _bit_columns(k1)
    e1 = np.einsum("ai,ij,aj->a", b1, q[:k1, :k1], b1) + constant
    if k2 == 0:
        yield 0, e1
        return
    b2 = _bit_columns(k2)
    e2 = np.einsum("ai,ij,aj->a", b2, q[k1:, k1:], b2)
    cross_t = 2.0 * q[k1:, :k1]  # doubled: symmetric off-block counted twice
    rows_per_chunk = max(1, (1 << 22) // (1 << k1))
    for v0 in range(0, 1 << k2, rows_per_chunk):
        v1 = min(v0 + rows_per_chunk, 1 << k2)
        w = b2[v0:v1] @ cross_t  # (chunk, k1)
        block = e2[v0:v1, None] + (w @ b1.T) + e1[None, :]
        yield v0 << k1, block.ravel()


def enumerate_qubo(
    qubo: QuboProblem, cap: int = DEFAULT_BIT_CAP
) -> SpectrumReport:
    """Exact spectrum of a QUBO by enumerating all 2**K bit vectors."""
    k = qubo.num_bits
    if k > cap:
        raise CapExceededError(f"{k} bits exceeds the enumeration cap {cap}")
    scaled = _scaled_integer_form(qubo)
    if scaled is None:
        if k > 20:
            raise CapExceededError(
                "non-integer-representable energies need K <= 20 for the "
                "tolerance-grouped float path"
            )
        return _enumerate_float(qubo)

    q_int, c_int, scale = scaled
    counts: dict[int, int] = {}
    best = None
    ground: list[np.ndarray] = []
    for start, block in _energy_blocks(q_int, float(c_int), k):
        values, mult = np.unique(block, return_counts=True)
        for v, m in zip(values, mult):
            key = int(v)
            counts[key] = counts.get(key, 0) + int(m)
        block_min = values[0]
        if best is None or block_min < best:
            best = block_min
            ground = []
        if block_min == best:
            ground.append(start + np.nonzero(block == best)[0])
    ordered = sorted(counts)
    energies = tuple(Fraction(v, scale) for v in ordered)
    degeneracies = tuple(counts[v] for v in ordered)
    return SpectrumReport(
        num_bits=k,
        energies=energies,
        degeneracies=degeneracies,
        ground_indices=np.concatenate(ground),
        grouping_tolerance=0.0,
    )


def _enumerate_float(qubo: QuboProblem) -> SpectrumReport:
    k = qubo.num_bits
    q = qubo.float_matrix()
    constant = float(qubo.constant)
    blocks = [block for _, block in _energy_blocks(q, constant, k)]
    energies = np.concatenate(blocks)
    sorted_e = np.sort(energies)
    uniq = np.unique(sorted_e)
    spread = max(1.0, float(uniq[-1] - uniq[0]))
    tol = 1e-9 * spread
    # split the unique values into levels at gaps wider than the tolerance
    bounds: list[tuple[float, float]] = []
    lo = prev = uniq[0]
    for v in uniq[1:]:
        if v - prev > tol:
            bounds.append((lo, prev))
            lo = v
        prev = v
    bounds.append((lo, prev))
    degeneracies = tuple(
        int(
            np.searchsorted(sorted_e, hi, side="right")
            - np.searchsorted(sorted_e, lo, side="left")
        )
        for lo, hi in bounds
    )
    ground_mask = energies <= bounds[0][1]
    return SpectrumReport(
        num_bits=k,
        energies=tuple(float(lo) for lo, _ in bounds),
        degeneracies=degeneracies,
        ground_indices=np.nonzero(ground_mask)[0],
        grouping_tolerance=tol,
    )


def enumerate_ilp(
    ilp: IntegerLinearProgram, cap: int = DEFAULT_BIT_CAP
) -> tuple[list[tuple[int, ...]], Fraction | None]:
    """All optima of the ILP by direct search over the variable box.

    Returns ([], None) when no feasible point exists.
    """
    total_bits = sum(ilp.bits_x)
    if total_bits > cap:
        raise CapExceededError(
            f"variable box of {total_bits} bits exceeds the cap {cap}"
        )
    best = None
    optima: list[tuple[int, ...]] = []
    for x in itertools.product(*(range(1 << r) for r in ilp.bits_x)):
        if not ilp.is_feasible(x):
            continue
        value = ilp.objective(x)
        if best is None or value < best:
            best = value
            optima = [x]
        elif value == best:
            optima.append(x)
    return optima, best


def mds_subset_oracle(g: Graph, cap: int = 20) -> tuple[int, list[tuple[int, ...]]]:
    """Domination number and every minimum dominating set, by subset search."""
    if g.n > cap:
        raise CapExceededError(f"{g.n} vertices exceeds the subset-search cap {cap}")
    masks = []
    for v in range(g.n):
        m = 1 << v
        for u in g.neighbors(v):
            m |= 1 << u
        masks.append(m)
    full = (1 << g.n) - 1
    for size in range(g.n + 1):
        hits = []
        for subset in itertools.combinations(range(g.n), size):
            cover = 0
            for v in subset:
                cover |= masks[v]
            if cover == full:
                hits.append(subset)
        if hits:
            return size, hits
    raise AssertionError("the full vertex set always dominates")
