"""QUBO <-> Ising conversion and field-strength grouping.

Convention: spin +1 corresponds to bit 1 (psi = (1 + sigma) / 2).  Energies
are preserved exactly, constant included; entries stay Fractions when the
input is rational and floats are embedded exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InputError
from .ilp import QuboProblem, as_fraction, fraction_matrix, zeros_fraction


@dataclass(eq=False)
class IsingModel:
    """E(sigma) = sum_{i<j} J_ij sigma_i sigma_j + sum_i h_i sigma_i + constant."""

    h: tuple
    couplers: dict  # {(i, j): value} with i < j
    constant: object = 0

    def __post_init__(self):
        self.h = tuple(self.h)
        cleaned = {}
        for (i, j), v in self.couplers.items():
            i, j = int(i), int(j)
            if i == j:
                raise InputError("coupler on a single qubit")
            if not (0 <= i < self.num_qubits and 0 <= j < self.num_qubits):
                raise InputError(f"coupler ({i},{j}) out of range")
            key = (min(i, j), max(i, j))
            if key in cleaned:
                raise InputError(f"duplicate coupler {key}")
            cleaned[key] = v
        self.couplers = cleaned

    @property
    def num_qubits(self) -> int:
        return len(self.h)

    def energy(self, spins):
        spins = list(spins)
        if len(spins) != self.num_qubits:
            raise InputError("spin vector length mismatch")
        if any(s not in (-1, 1) for s in spins):
            raise InputError("spins must be +/-1")
        value = self.constant
        for i, hv in enumerate(self.h):
            value = value + hv * spins[i]
        for (i, j), jv in self.couplers.items():
            value = value + jv * spins[i] * spins[j]
        return value

    def energy_of_bits(self, psi):
        return self.energy([2 * int(b) - 1 for b in psi])

    def h_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.h])

    def coupler_matrix(self) -> np.ndarray:
        """Dense strictly-upper-triangular float matrix."""
        out = np.zeros((self.num_qubits, self.num_qubits))
        for (i, j), v in self.couplers.items():
            out[i, j] = float(v)
        return out

    def scaled(self, factor) -> "IsingModel":
        """Uniform energy rescale for simulator conditioning."""
        return IsingModel(
            h=tuple(v * factor for v in self.h),
            couplers={k: v * factor for k, v in self.couplers.items()},
            constant=self.constant * factor,
        )


def qubo_to_ising(qubo: QuboProblem) -> IsingModel:
    """Substitute psi = (1 + sigma) / 2 into psi.Q.psi + C.

    h_i is half the i-th row sum of the symmetric Q; J_ij = Q_ij / 2.
    """
    q = qubo.matrix
    k = qubo.num_bits
    h = []
    for i in range(k):
        total = Fraction(0)
        for j in range(k):
            total += q[i, j]
        h.append(total / 2)
    couplers = {}
    constant = qubo.constant
    for i in range(k):
        constant = constant + q[i, i] / 2
        for j in range(i + 1, k):
            if q[i, j] != 0:
                couplers[(i, j)] = q[i, j] / 2
            constant = constant + q[i, j] / 2
    return IsingModel(h=tuple(h), couplers=couplers, constant=constant)


def ising_to_qubo(model: IsingModel) -> QuboProblem:
    """Exact inverse of qubo_to_ising; float inputs are embedded exactly."""
    n = model.num_qubits
    q = zeros_fraction(n, n)
    for (i, j), v in model.couplers.items():
        q[i, j] = 2 * as_fraction(v)
        q[j, i] = q[i, j]
    constant = as_fraction(model.constant)
    for i in range(n):
        off_sum = Fraction(0)
        for j in range(n):
            if j != i:
                off_sum += q[i, j]
        q[i, i] = 2 * as_fraction(model.h[i]) - off_sum
        constant = constant - q[i, i] / 2
    for (i, j), _ in model.couplers.items():
        constant = constant - q[i, j] / 2
    return QuboProblem(matrix=q, constant=constant)


def split_field_groups(model: IsingModel) -> tuple[set[int], set[int]]:
    """Partition qubits by |h| against the midpoint (max|h| + min|h|) / 2.

    Qubits strictly above the threshold are "strong"; ties go to "weak".
    """
    if model.num_qubits < 1:
        raise InputError("empty model")
    mags = [abs(v) for v in model.h]
    theta = (max(mags) + min(mags)) / 2
    strong = {i for i, m in enumerate(mags) if m > theta}
    weak = set(range(model.num_qubits)) - strong
    return strong, weak
