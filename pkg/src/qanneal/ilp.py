"""Integer linear/quadratic programs and their compilation to QUBO form.

Variables are non-negative integers x_i in [0, 2**bits_x[i] - 1]; constraints
are inequalities sum_i A[a,i] x_i + b[a] <= 0.  Compilation introduces integer
slack variables turning each inequality into an equality, maps integers to
bits, and expands

    cost(x) + penalty * || A x + s + b ||^2

into a symmetric QUBO matrix over the bit vector.  All compile-stage
arithmetic is exact (fractions.Fraction); floats appear only at the Ising /
simulator boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .errors import InfeasibleConstraintError, InputError

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Exact conversion; floats are taken at their binary value."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def fraction_vector(values) -> np.ndarray:
    return np.array([as_fraction(v) for v in values], dtype=object)


def fraction_matrix(rows, ncols: int | None = None) -> np.ndarray:
    rows = [[as_fraction(v) for v in row] for row in rows]
    if not rows:
        return np.zeros((0, ncols or 0), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("ragged matrix rows")
    return np.array(rows, dtype=object)


def zeros_fraction(*shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out[...] = ZERO
    return out


@dataclass(eq=False)
class IntegerLinearProgram:
    """min costs.x (+ x.quadratic.x)  s.t.  constraints @ x + offsets <= 0, x >= 0 integer.

    bits_x[i] is the width of variable i, so x_i ranges over [0, 2**bits_x[i]-1].
    penalty_hint, when set, is a problem-specific penalty known to be
    sufficient (tighter than the generic bound of penalty_floor).
    """

    costs: np.ndarray
    constraints: np.ndarray
    offsets: np.ndarray
    bits_x: tuple[int, ...]
    quadratic: np.ndarray | None = None
    penalty_hint: Fraction | None = None

    def __post_init__(self):
        self.costs = fraction_vector(self.costs)
        n = len(self.costs)
        self.constraints = fraction_matrix(self.constraints, ncols=n)
        self.offsets = fraction_vector(self.offsets)
        self.bits_x = tuple(int(r) for r in self.bits_x)
        if self.quadratic is not None:
            self.quadratic = fraction_matrix(self.quadratic, ncols=n)
            if self.quadratic.shape != (n, n):
                raise InputError("quadratic cost matrix must be N x N")
        if self.penalty_hint is not None:
            self.penalty_hint = as_fraction(self.penalty_hint)
        if self.constraints.shape[1] != n and self.constraints.size:
            raise InputError("constraint matrix width does not match costs")
        if len(self.offsets) != self.constraints.shape[0]:
            raise InputError("offsets length does not match constraint rows")
        if len(self.bits_x) != n:
            raise InputError("bits_x length does not match costs")
        if any(r < 1 for r in self.bits_x):
            raise InputError("every variable needs at least one bit")

    @property
    def num_variables(self) -> int:
        return len(self.costs)

    @property
    def num_constraints(self) -> int:
        return self.constraints.shape[0]

    @property
    def x_max(self) -> np.ndarray:
        return np.array([Fraction(2**r - 1) for r in self.bits_x], dtype=object)

    def objective(self, x) -> Fraction:
        x = fraction_vector(x)
        value = self.costs @ x if len(x) else ZERO
        if self.quadratic is not None:
            value = value + x @ self.quadratic @ x
        return value

    def is_feasible(self, x) -> bool:
        x = fraction_vector(x)
        for a in range(self.num_constraints):
            if self.constraints[a] @ x + self.offsets[a] > 0:
                return False
        return True


def rescale_rows(ilp: IntegerLinearProgram) -> IntegerLinearProgram:
    """Scale each constraint row so (A|b) is integer-valued.

    Multiplying a row of A and the matching offset by a positive integer does
    not change the feasible set, but it makes every slack variable an integer.
    """
    a = ilp.constraints.copy()
    b = ilp.offsets.copy()
    for row in range(ilp.num_constraints):
        denoms = [v.denominator for v in a[row]] + [b[row].denominator]
        scale = Fraction(lcm(*denoms)) if denoms else ONE
        a[row] = a[row] * scale
        b[row] = b[row] * scale
    return IntegerLinearProgram(
        costs=ilp.costs,
        constraints=a,
        offsets=b,
        bits_x=ilp.bits_x,
        quadratic=ilp.quadratic,
        penalty_hint=ilp.penalty_hint,
    )


def _require_integer_rows(ilp: IntegerLinearProgram):
    for row in range(ilp.num_constraints):
        entries = list(ilp.constraints[row]) + [ilp.offsets[row]]
        if any(v.denominator != 1 for v in entries):
            raise InputError(
                f"constraint row {row} is not integer-valued; "
                "apply rescale_rows() first"
            )


@dataclass
class SlackSpec:
    """Bit widths for the slack variable of each constraint row."""

    bits_s: tuple[int, ...]

    def __post_init__(self):
        self.bits_s = tuple(int(r) for r in self.bits_s)
        if any(r < 1 for r in self.bits_s):
            raise InputError("every slack needs at least one bit")


def introduce_slacks(ilp: IntegerLinearProgram) -> SlackSpec:
    """Minimal slack widths so s_a = -(A x + b)_a fits for every x in the box.

    The max of -(A x + b)_a over the box is reached by setting x_i to its
    maximum wherever A[a,i] < 0 and to zero elsewhere.  A row whose slack is
    negative for every x can never be satisfied and is reported as infeasible.
    """
    _require_integer_rows(ilp)
    xmax = ilp.x_max
    widths = []
    for a in range(ilp.num_constraints):
        row = ilp.constraints[a]
        top = -ilp.offsets[a]
        for i in range(ilp.num_variables):
            if row[i] < 0:
                top = top - row[i] * xmax[i]
        if top < 0:
            raise InfeasibleConstraintError(a, top)
        widths.append(max(1, int(top).bit_length()))
    return SlackSpec(bits_s=tuple(widths))


@dataclass(frozen=True)
class BitLabel:
    """Which integer variable a bit belongs to."""

    role: str  # "x" or "s"
    owner: int
    bit: int

    def __str__(self):
        return f"{self.role}{self.owner}[{self.bit}]"


def _bit_weight_matrix(widths: Sequence[int]) -> np.ndarray:
    total = sum(widths)
    out = zeros_fraction(len(widths), total)
    col = 0
    for i, width in enumerate(widths):
        for r in range(width):
            out[i, col] = Fraction(2**r)
            col += 1
    return out


@dataclass(eq=False)
class BinaryEncoding:
    """Blocked bit-weight matrices mapping bit vectors to (x, s) integers."""

    t_x: np.ndarray
    t_s: np.ndarray
    labels: tuple[BitLabel, ...]

    @property
    def num_x_bits(self) -> int:
        return self.t_x.shape[1]

    @property
    def num_s_bits(self) -> int:
        return self.t_s.shape[1]

    @property
    def num_bits(self) -> int:
        return self.num_x_bits + self.num_s_bits

    @property
    def block_diagonal(self) -> np.ndarray:
        n, m = self.t_x.shape[0], self.t_s.shape[0]
        out = zeros_fraction(n + m, self.num_bits)
        out[:n, : self.num_x_bits] = self.t_x
        out[n:, self.num_x_bits :] = self.t_s
        return out

    def split(self, psi) -> tuple[np.ndarray, np.ndarray]:
        psi = fraction_vector(psi)
        if len(psi) != self.num_bits:
            raise InputError(
                f"bit vector has length {len(psi)}, expected {self.num_bits}"
            )
        return psi[: self.num_x_bits], psi[self.num_x_bits :]

    def decode(self, psi) -> tuple[np.ndarray, np.ndarray]:
        psi_x, psi_s = self.split(psi)
        x = self.t_x @ psi_x if self.num_x_bits else zeros_fraction(self.t_x.shape[0])
        s = self.t_s @ psi_s if self.num_s_bits else zeros_fraction(self.t_s.shape[0])
        return x, s


def build_encoding(ilp: IntegerLinearProgram, slacks: SlackSpec) -> BinaryEncoding:
    if len(slacks.bits_s) != ilp.num_constraints:
        raise InputError("slack spec length does not match constraint rows")
    labels = []
    for i, width in enumerate(ilp.bits_x):
        labels.extend(BitLabel("x", i, r) for r in range(width))
    for a, width in enumerate(slacks.bits_s):
        labels.extend(BitLabel("s", a, r) for r in range(width))
    return BinaryEncoding(
        t_x=_bit_weight_matrix(ilp.bits_x),
        t_s=_bit_weight_matrix(slacks.bits_s),
        labels=tuple(labels),
    )


@dataclass(eq=False)
class QuboProblem:
    """Symmetric QUBO: energy(psi) = psi.Q.psi + constant over bits psi."""

    matrix: np.ndarray
    constant: Fraction
    penalty: Fraction | None = None
    labels: tuple[BitLabel, ...] | None = None
    source: IntegerLinearProgram | None = None

    def __post_init__(self):
        self.matrix = fraction_matrix(self.matrix, ncols=0)
        self.constant = as_fraction(self.constant)
        if self.penalty is not None:
            self.penalty = as_fraction(self.penalty)
        k = self.matrix.shape[0]
        if self.matrix.shape != (k, k):
            raise InputError("QUBO matrix must be square")
        for i in range(k):
            for j in range(i + 1, k):
                if self.matrix[i, j] != self.matrix[j, i]:
                    raise InputError("QUBO matrix must be symmetric")

    @property
    def num_bits(self) -> int:
        return self.matrix.shape[0]

    def energy(self, psi) -> Fraction:
        psi = fraction_vector(psi)
        if len(psi) != self.num_bits:
            raise InputError("bit vector length mismatch")
        if not len(psi):
            return self.constant
        return psi @ self.matrix @ psi + self.constant

    def float_matrix(self) -> np.ndarray:
        return self.matrix.astype(float)

    def upper_triangular_terms(self):
        """(i, j, coefficient) with i <= j; off-diagonal weight folded upward.

        energy(psi) = sum_{i<=j} coeff_ij psi_i psi_j + constant.
        """
        terms = []
        k = self.num_bits
        for i in range(k):
            if self.matrix[i, i] != 0:
                terms.append((i, i, self.matrix[i, i]))
            for j in range(i + 1, k):
                if self.matrix[i, j] != 0:
                    terms.append((i, j, 2 * self.matrix[i, j]))
        return terms


def compile_to_qubo(
    ilp: IntegerLinearProgram, enc: BinaryEncoding, penalty
) -> QuboProblem:
    """Expand the penalized objective over bits into a symmetric QUBO.

    Quadratic part: penalty * G.T G with G = [A T_x | T_s]; the quadratic
    costs add T_x.T d T_x to the x block.  Linear terms fold onto the
    diagonal through psi_k**2 = psi_k, which forces the diag(T.T v) form.
    """
    penalty = as_fraction(penalty)
    if penalty <= 0:
        raise InputError("penalty must be positive")
    _require_integer_rows(ilp)
    kx, ks = enc.num_x_bits, enc.num_s_bits
    k = kx + ks
    g = zeros_fraction(ilp.num_constraints, k)
    if ilp.num_constraints:
        g[:, :kx] = ilp.constraints @ enc.t_x
        g[:, kx:] = enc.t_s
    quad = zeros_fraction(k, k)
    if ilp.num_constraints:
        quad = penalty * (g.T @ g)
    linear = zeros_fraction(k)
    linear[:kx] = enc.t_x.T @ ilp.costs
    if ilp.num_constraints:
        linear = linear + 2 * penalty * (g.T @ ilp.offsets)
    for idx in range(k):
        quad[idx, idx] = quad[idx, idx] + linear[idx]
    if ilp.quadratic is not None:
        d_sym = (ilp.quadratic + ilp.quadratic.T) / 2
        quad[:kx, :kx] = quad[:kx, :kx] + enc.t_x.T @ d_sym @ enc.t_x
    constant = (
        penalty * (ilp.offsets @ ilp.offsets) if ilp.num_constraints else ZERO
    )
    return QuboProblem(
        matrix=quad,
        constant=constant,
        penalty=penalty,
        labels=enc.labels,
        source=ilp,
    )


@dataclass
class DecodedSolution:
    x: tuple[int, ...]
    s: tuple[int, ...]
    objective: Fraction
    feasible: bool
    chi_squared: Fraction
    qubo_energy: Fraction

    @property
    def identity_holds(self) -> bool:
        return self.chi_squared == self.qubo_energy


def decode_solution(
    qubo: QuboProblem, enc: BinaryEncoding, psi
) -> DecodedSolution:
    """Map a bit vector back to integers and evaluate it against the source ILP."""
    if qubo.source is None:
        raise InputError("QUBO carries no source ILP; cannot decode")
    ilp = qubo.source
    x, s = enc.decode(psi)
    residual = (
        ilp.constraints @ x + s + ilp.offsets
        if ilp.num_constraints
        else zeros_fraction(0)
    )
    feasible = all(v == 0 for v in residual)
    objective = ilp.objective(x)
    chi2 = objective
    if ilp.num_constraints and qubo.penalty is not None:
        chi2 = chi2 + qubo.penalty * (residual @ residual)
    return DecodedSolution(
        x=tuple(int(v) for v in x),
        s=tuple(int(v) for v in s),
        objective=objective,
        feasible=feasible,
        chi_squared=chi2,
        qubo_energy=qubo.energy(psi),
    )


def penalty_floor(ilp: IntegerLinearProgram) -> Fraction:
    """A penalty sufficient to make QUBO minimizers coincide with ILP optima.

    Generic bound: objective spread over the whole box plus one, computed by
    interval arithmetic (an upper bound on the spread when quadratic costs
    are present).  A penalty_hint on the ILP overrides it; e.g. dominating-set
    instances are known to need only 1.
    """
    if ilp.penalty_hint is not None:
        return ilp.penalty_hint
    xmax = ilp.x_max
    hi = ZERO
    lo = ZERO
    for i, c in enumerate(ilp.costs):
        if c > 0:
            hi = hi + c * xmax[i]
        else:
            lo = lo + c * xmax[i]
    if ilp.quadratic is not None:
        n = ilp.num_variables
        for i in range(n):
            for j in range(n):
                d = ilp.quadratic[i, j]
                if d > 0:
                    hi = hi + d * xmax[i] * xmax[j]
                elif d < 0:
                    lo = lo + d * xmax[i] * xmax[j]
    return hi - lo + 1


def compile_ilp(
    ilp: IntegerLinearProgram,
    penalty=None,
    slacks: SlackSpec | None = None,
) -> tuple[QuboProblem, BinaryEncoding]:
    """One-shot pipeline: rescale rows, size slacks, encode, expand."""
    ilp = rescale_rows(ilp)
    if slacks is None:
        slacks = introduce_slacks(ilp)
    enc = build_encoding(ilp, slacks)
    if penalty is None:
        penalty = penalty_floor(ilp)
    return compile_to_qubo(ilp, enc, penalty), enc
