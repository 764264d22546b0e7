"""Density-matrix simulation of an annealing run.

The state of n qubits is a dense 2**n x 2**n complex density matrix evolved
with classic fixed-step 4th-order integration of

    d rho / dt = -i [H(t), rho] + L_fc(rho) + L_loc(rho)        (hbar = 1)

Basis and unit conventions
--------------------------
* Bit j of a basis-state index is qubit j's bit value; spin +1 corresponds to
  bit 1, so the z operator of qubit j is diagonal with entries 2*bit_j - 1.
* Schedule amplitudes and Ising coefficients are angular frequencies in units
  of rad per time unit; times (anneal time, 1/rates) are in the same time
  unit; beta is an inverse angular frequency.  The shipped operating-point
  preset uses nanoseconds.

Two thermal channels are implemented: a global one driving transitions
between instantaneous energy eigenstates (downhill at the bare rate, uphill
Boltzmann suppressed), and per-qubit amplitude damping toward each qubit's
local field ground state with the e^(-2 beta |h_j|) reverse weight on the
bare field h_j.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.constants

from .errors import InputError, NumericalIntegrityError, ParameterBoundError
from .ising import IsingModel, split_field_groups
from .schedule import OffsetAssignment, ScheduleTable, assign_offsets

TRACE_TOLERANCE = 1e-6
NEGATIVITY_TOLERANCE = 1e-6
HERMITICITY_TOLERANCE = 1e-10


def beta_from_temperature(kelvin: float, time_unit_seconds: float = 1e-9) -> float:
    """Inverse temperature as an inverse angular frequency: hbar / (k_B T)."""
    if kelvin <= 0:
        raise InputError("temperature must be positive")
    return scipy.constants.hbar / (scipy.constants.k * kelvin) / time_unit_seconds


@dataclass
class DecoherenceConfig:
    """Thermal environment: inverse temperature plus the two channel rates."""

    beta: float
    fc_rate: float = 0.0
    local_rate: float = 0.0
    enable_fc: bool = True
    enable_local: bool = True
    degeneracy_tol: float = 1e-9  # relative to the spectral range

    def __post_init__(self):
        if self.beta <= 0:
            raise InputError("beta must be positive")
        if self.fc_rate < 0 or self.local_rate < 0:
            raise InputError("rates must be non-negative")
        if self.degeneracy_tol <= 0:
            raise InputError("degeneracy tolerance must be positive")

    @property
    def effective_fc_rate(self) -> float:
        return self.fc_rate if self.enable_fc else 0.0

    @property
    def effective_local_rate(self) -> float:
        return self.local_rate if self.enable_local else 0.0


@dataclass(eq=False)
class AnnealHamiltonianSpec:
    """Everything needed to assemble H(s): problem, schedule, offsets, duration."""

    ising: IsingModel
    table: ScheduleTable
    offsets: OffsetAssignment | None = None
    anneal_time: float = 1000.0

    def __post_init__(self):
        if self.offsets is None:
            self.offsets = OffsetAssignment.zeros(self.ising.num_qubits)
        if self.offsets.num_qubits != self.ising.num_qubits:
            raise InputError("offset vector length must match the qubit count")
        if self.anneal_time <= 0:
            raise InputError("anneal time must be positive")

    @property
    def num_qubits(self) -> int:
        return self.ising.num_qubits

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    @property
    def total_time(self) -> float:
        return self.anneal_time * self.table.time_dilation


class _HamiltonianBuilder:
    """Precomputed index machinery for fast H(s) assembly."""

    def __init__(self, spec: AnnealHamiltonianSpec):
        n = spec.num_qubits
        dim = 1 << n
        self.n = n
        self.dim = dim
        self.table = spec.table
        self.deltas = np.array(spec.offsets.delta, dtype=float)
        idx = np.arange(dim)
        self.z = (2 * ((idx[None, :] >> np.arange(n)[:, None]) & 1) - 1).astype(float)
        self.h = spec.ising.h_array()
        items = sorted(spec.ising.couplers.items())
        self.ci = np.array([i for (i, _), _ in items], dtype=int)
        self.cj = np.array([j for (_, j), _ in items], dtype=int)
        self.cv = np.array([float(v) for _, v in items])
        self.zz = self.z[self.ci] * self.z[self.cj] if items else np.zeros((0, dim))
        # one flattened 0/1 pattern per qubit so the transverse part is a
        # single matvec: off-diagonals of H = -(a @ xpat).reshape(dim, dim)
        xpat = np.zeros((n, dim * dim))
        for i in range(n):
            xpat[i, idx * dim + (idx ^ (1 << i))] = 1.0
        self.xpat = xpat
        self.problem_diag = self.h @ self.z + self.cv @ self.zz + float(
            spec.ising.constant
        )

    def amplitudes(self, s: float) -> tuple[np.ndarray, np.ndarray]:
        return self.table.evaluate_many(s, self.deltas)

    def matrix(self, s: float) -> np.ndarray:
        a, b = self.amplitudes(s)
        out = (-a @ self.xpat).astype(complex).reshape(self.dim, self.dim)
        diag = (b * self.h) @ self.z
        if len(self.cv):
            diag = diag + (np.sqrt(b[self.ci] * b[self.cj]) * self.cv) @ self.zz
        out.flat[:: self.dim + 1] += diag
        return out


def assemble_hamiltonian(spec: AnnealHamiltonianSpec, s: float) -> np.ndarray:
    """H(s) = -sum_i A_i X_i + sum_i B_i h_i Z_i + sum_{i<j} sqrt(B_i B_j) J_ij Z_i Z_j."""
    return _HamiltonianBuilder(spec).matrix(s)


def problem_ground_indices(
    spec: AnnealHamiltonianSpec, rel_tol: float = 1e-9
) -> tuple[int, ...]:
    """Basis states within rel_tol (of the spread) of the problem minimum."""
    diag = _HamiltonianBuilder(spec).problem_diag
    spread = float(diag.max() - diag.min())
    cut = diag.min() + rel_tol * max(spread, 1.0)
    return tuple(int(i) for i in np.nonzero(diag <= cut)[0])


def gibbs_state(hamiltonian: np.ndarray, beta: float) -> np.ndarray:
    """exp(-beta H) / Tr exp(-beta H), exponents shifted for stability."""
    if beta <= 0:
        raise InputError("beta must be positive")
    evals, vecs = np.linalg.eigh(hamiltonian)
    weights = np.exp(-beta * (evals - evals[0]))
    weights /= weights.sum()
    return (vecs * weights) @ vecs.conj().T


def _fc_eigenbasis(rho_e, evals, rate, beta, epsilon):
    """Thermal transfer between eigenlevels, all pairs vectorized.

    rho_e is the density matrix rotated into the eigenbasis.  Levels closer
    than epsilon exchange nothing.
    """
    de = evals[:, None] - evals[None, :]
    rates = np.zeros_like(de)
    down = de < -epsilon
    up = de > epsilon
    rates[down] = 2.0 * rate
    rates[up] = 2.0 * rate * np.exp(-beta * de[up])
    gamma = 0.5 * rates.sum(axis=0)
    out = -(gamma[:, None] + gamma[None, :]) * rho_e
    out[np.diag_indices_from(out)] += rates @ np.diag(rho_e)
    return out


def fc_dissipator(rho, hamiltonian, rate, beta, epsilon) -> np.ndarray:
    """Global thermal channel between instantaneous eigenstates of H.

    For each pair with E_j - E_i > epsilon the lowering operator |E_i><E_j|
    acts at rate, with the reverse process Boltzmann suppressed.
    """
    if rate == 0:
        return np.zeros_like(rho)
    evals, vecs = np.linalg.eigh(hamiltonian)
    rho_e = vecs.conj().T @ rho @ vecs
    out = _fc_eigenbasis(rho_e, evals, rate, beta, epsilon)
    return vecs @ out @ vecs.conj().T


class _LocalChannel:
    """Per-qubit amplitude damping toward the local field ground state.

    For h_j > 0 the local ground state is spin -1, i.e. bit 0 (and mirrored
    for h_j < 0); qubits with h_j = 0 get no channel.
    """

    def __init__(self, h_fields, beta, num_qubits):
        dim = 1 << num_qubits
        idx = np.arange(dim)
        self.terms = []
        for j, hj in enumerate(h_fields):
            hj = float(hj)
            if hj == 0.0:
                continue
            ground_bit = 0 if hj > 0 else 1
            excited = np.nonzero(((idx >> j) & 1) != ground_bit)[0]
            ground = excited ^ (1 << j)
            weight = math.exp(-2.0 * beta * abs(hj))
            self.terms.append(
                (np.ix_(ground, ground), np.ix_(excited, excited), ground, excited, weight)
            )

    def apply(self, rho, rate):
        out = np.zeros_like(rho)
        for gg, ee, ground, excited, w in self.terms:
            out[gg] += 2.0 * rho[ee]
            out[excited, :] -= rho[excited, :]
            out[:, excited] -= rho[:, excited]
            out[ee] += 2.0 * w * rho[gg]
            out[ground, :] -= w * rho[ground, :]
            out[:, ground] -= w * rho[:, ground]
        return rate * out


def local_dissipator(rho, h_fields, rate, beta) -> np.ndarray:
    """Per-qubit damping toward each local field ground state."""
    if rate == 0:
        return np.zeros_like(rho)
    num_qubits = len(h_fields)
    return _LocalChannel(h_fields, beta, num_qubits).apply(rho, rate)


@dataclass
class SimulationState:
    """Final density matrix plus the recorded trajectory."""

    rho: np.ndarray
    s: float
    num_qubits: int
    ground_indices: tuple[int, ...]
    trajectory: dict[str, np.ndarray]
    num_steps: int

    @property
    def final_distribution(self) -> np.ndarray:
        return np.real(np.diag(self.rho)).copy()

    @property
    def ground_probability(self) -> float:
        diag = self.final_distribution
        return float(diag[list(self.ground_indices)].sum())

    def most_probable_state(self) -> tuple[int, ...]:
        index = int(np.argmax(self.final_distribution))
        return tuple((index >> j) & 1 for j in range(self.num_qubits))


def suggest_steps(
    spec: AnnealHamiltonianSpec,
    decoherence: DecoherenceConfig,
    resolution: float = 1.8,
    samples: int = 9,
) -> int:
    """Step count from the stiffest sampled timescale.

    resolution is the target |lambda| dt; it must stay below ~2.8 for the
    integrator to be stable on oscillatory modes.
    """
    builder = _HamiltonianBuilder(spec)
    spread = 0.0
    for s in np.linspace(0.0, 1.0, samples):
        evals = np.linalg.eigvalsh(builder.matrix(s))
        spread = max(spread, float(evals[-1] - evals[0]))
    n_active = sum(1 for v in builder.h if v != 0.0)
    rate_bound = 2.0 * decoherence.effective_fc_rate * (spec.dim - 1)
    rate_bound += 2.0 * decoherence.effective_local_rate * n_active
    lam = spread + rate_bound
    return max(200, math.ceil(spec.total_time * lam / resolution))


def run(
    spec: AnnealHamiltonianSpec,
    decoherence: DecoherenceConfig,
    num_steps: int | None = None,
    record_points: int = 201,
    initial_state="gibbs",
    observers: dict | None = None,
) -> SimulationState:
    """Integrate the master equation over the schedule window s in [0, 1].

    The trajectory records s, ground-state probability (against the ideal
    problem ground space), energy expectation, trace and the smallest
    eigenvalue of rho at ~record_points evenly spaced steps.  observers maps
    names to callables f(s, rho) recorded alongside.

    Raises NumericalIntegrityError when the trace drifts beyond 1e-6 or rho
    develops negativity beyond -1e-6; nothing is ever renormalized.
    """
    builder = _HamiltonianBuilder(spec)
    max_offset = spec.table.max_abs_offset
    if max_offset is not None:
        magnitude = spec.offsets.max_magnitude()
        if magnitude > max_offset + 1e-12:
            raise ParameterBoundError(
                f"offset magnitude {magnitude} exceeds the schedule's "
                f"allowed {max_offset}"
            )
    if num_steps is None:
        num_steps = suggest_steps(spec, decoherence)
    total_time = spec.total_time
    ds = 1.0 / num_steps

    if isinstance(initial_state, str):
        if initial_state != "gibbs":
            raise InputError("initial_state must be 'gibbs' or a density matrix")
        rho = gibbs_state(builder.matrix(0.0), decoherence.beta)
    else:
        rho = np.array(initial_state, dtype=complex)
        if rho.shape != (spec.dim, spec.dim):
            raise InputError("initial density matrix has the wrong shape")

    fc_rate = decoherence.effective_fc_rate
    loc_rate = decoherence.effective_local_rate
    local = _LocalChannel(builder.h, decoherence.beta, spec.num_qubits)
    rel_tol = decoherence.degeneracy_tol
    beta = decoherence.beta

    def hamiltonian_at(s):
        """(H, eigendecomposition) bundle; k2/k3 and step boundaries share it."""
        h = builder.matrix(s)
        if fc_rate:
            evals, vecs = np.linalg.eigh(h)
            return h, evals, vecs
        return h, None, None

    def rhs(bundle, state):
        h, evals, vecs = bundle
        out = -1j * (h @ state - state @ h)
        if fc_rate:
            epsilon = rel_tol * max(float(evals[-1] - evals[0]), 1e-300)
            rho_e = vecs.conj().T @ state @ vecs
            out += vecs @ _fc_eigenbasis(rho_e, evals, fc_rate, beta, epsilon) @ vecs.conj().T
        if loc_rate:
            out += local.apply(state, loc_rate)
        out *= total_time
        return (out + out.conj().T) * 0.5

    ground = problem_ground_indices(spec, rel_tol)
    ground_list = list(ground)
    stride = max(1, num_steps // max(1, record_points - 1))
    observers = observers or {}
    records: dict[str, list] = {
        key: [] for key in ("s", "p_ground", "energy", "trace", "min_eig")
    }
    for name in observers:
        records[name] = []

    def record(s, state):
        diag = np.real(np.diag(state))
        trace = float(diag.sum())
        herm = float(np.abs(state - state.conj().T).max())
        min_eig = float(np.linalg.eigvalsh(state)[0])
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise NumericalIntegrityError(
                f"trace drifted to {trace} at s={s}",
                {"s": s, "trace": trace},
            )
        if herm > HERMITICITY_TOLERANCE:
            raise NumericalIntegrityError(
                f"hermiticity defect {herm} at s={s}", {"s": s, "hermiticity": herm}
            )
        if min_eig < -NEGATIVITY_TOLERANCE:
            raise NumericalIntegrityError(
                f"negativity {min_eig} at s={s}", {"s": s, "min_eig": min_eig}
            )
        records["s"].append(s)
        records["p_ground"].append(float(diag[ground_list].sum()))
        records["energy"].append(
            float(np.real(np.einsum("ij,ji->", builder.matrix(s), state)))
        )
        records["trace"].append(trace)
        records["min_eig"].append(min_eig)
        for name, fn in observers.items():
            records[name].append(float(fn(s, state)))

    record(0.0, rho)
    bundle_start = hamiltonian_at(0.0)
    for step in range(num_steps):
        s0 = step * ds
        bundle_mid = hamiltonian_at(s0 + 0.5 * ds)
        bundle_end = hamiltonian_at(s0 + ds)
        k1 = rhs(bundle_start, rho)
        k2 = rhs(bundle_mid, rho + (0.5 * ds) * k1)
        k3 = rhs(bundle_mid, rho + (0.5 * ds) * k2)
        k4 = rhs(bundle_end, rho + ds * k3)
        rho = rho + (ds / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        bundle_start = bundle_end
        trace = float(np.real(np.trace(rho)))
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise NumericalIntegrityError(
                f"trace drifted to {trace} at step {step + 1}",
                {"step": step + 1, "trace": trace},
            )
        if (step + 1) % stride == 0 or step + 1 == num_steps:
            record((step + 1) * ds, rho)

    trajectory = {key: np.array(vals) for key, vals in records.items()}
    return SimulationState(
        rho=rho,
        s=1.0,
        num_qubits=spec.num_qubits,
        ground_indices=ground,
        trajectory=trajectory,
        num_steps=num_steps,
    )


@dataclass
class SweepRow:
    mode: str
    magnitude: float
    ground_probability: float
    distribution: np.ndarray


def offset_sweep(
    spec: AnnealHamiltonianSpec,
    magnitudes,
    modes,
    decoherence: DecoherenceConfig,
    num_steps: int | None = None,
    workers: int = 1,
) -> list[SweepRow]:
    """One run per (mode, magnitude) pair plus the zero-offset baseline.

    Probabilities are read from the density matrix; no sampling anywhere, so
    rows are deterministic and ordered (baseline, then modes in the given
    order, then magnitudes in the given order).
    """
    strong, weak = split_field_groups(spec.ising)
    jobs = [("none", 0.0)]
    for mode in modes:
        for mag in magnitudes:
            jobs.append((mode, float(mag)))

    def execute(job):
        mode, mag = job
        offsets = assign_offsets(strong, weak, mag, mode)
        job_spec = AnnealHamiltonianSpec(
            ising=spec.ising,
            table=spec.table,
            offsets=offsets,
            anneal_time=spec.anneal_time,
        )
        state = run(job_spec, decoherence, num_steps=num_steps)
        return SweepRow(
            mode=mode,
            magnitude=mag,
            ground_probability=state.ground_probability,
            distribution=state.final_distribution,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(execute, jobs))
    return [execute(job) for job in jobs]
