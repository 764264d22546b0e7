"""Toolchain: integer programs -> QUBO -> Ising -> annealing simulation."""

from .ilp import (
    BinaryEncoding,
    IntegerLinearProgram,
    QuboProblem,
    SlackSpec,
    build_encoding,
    compile_ilp,
    compile_to_qubo,
    decode_solution,
    introduce_slacks,
    penalty_floor,
    rescale_rows,
)
from .ising import IsingModel, ising_to_qubo, qubo_to_ising, split_field_groups
from .lindblad import (
    AnnealHamiltonianSpec,
    DecoherenceConfig,
    SimulationState,
    assemble_hamiltonian,
    beta_from_temperature,
    fc_dissipator,
    gibbs_state,
    local_dissipator,
    offset_sweep,
    run,
    suggest_steps,
)
from .mds import (
    Graph,
    linear_graph,
    mds_analytics,
    mds_qubo_closed_form,
    mds_to_ilp,
    qubit_count,
)
from .oracle import (
    SpectrumReport,
    enumerate_ilp,
    enumerate_qubo,
    mds_subset_oracle,
)
from .schedule import (
    OffsetAssignment,
    ScheduleTable,
    assign_offsets,
    extend_schedule,
)

__version__ = "0.1.0"
