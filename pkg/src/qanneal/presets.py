"""The published-hardware operating point as a named preset.

Time unit: nanoseconds; energies: rad/ns.  Temperature 22.5 mK, local-damping
coherence time 15 ns, global-channel coherence time 1 ns, anneal time 1 us,
offset magnitudes 0 to -0.05.

The preset's schedule amplitude (13 rad/ns) is chosen so that at 22.5 mK the
initial transverse-field Gibbs state is effectively pure (beta * 2 A ~ 8.8),
the regime annealing hardware operates in.  The generic default amplitude
(5 rad/ns) is too small for that at this temperature; see DEFAULT_AMPLITUDE
in the schedule module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lindblad import DecoherenceConfig, beta_from_temperature
from .schedule import ScheduleTable

OPERATING_TEMPERATURE_K = 0.0225
OPERATING_FC_TIME_NS = 1.0
OPERATING_LOCAL_TIME_NS = 15.0
OPERATING_ANNEAL_NS = 1000.0
OPERATING_AMPLITUDE = 13.0
OPERATING_OFFSETS = (-0.01, -0.02, -0.03, -0.04, -0.05)


def operating_beta() -> float:
    return beta_from_temperature(OPERATING_TEMPERATURE_K)


def operating_decoherence(
    fc: bool = True, local: bool = True
) -> DecoherenceConfig:
    return DecoherenceConfig(
        beta=operating_beta(),
        fc_rate=1.0 / OPERATING_FC_TIME_NS,
        local_rate=1.0 / OPERATING_LOCAL_TIME_NS,
        enable_fc=fc,
        enable_local=local,
    )


def closed_system(beta: float | None = None) -> DecoherenceConfig:
    """No decoherence channels; beta still sets the Gibbs initial state."""
    return DecoherenceConfig(beta=beta if beta is not None else operating_beta())


def operating_schedule() -> ScheduleTable:
    return ScheduleTable.linear(OPERATING_AMPLITUDE, OPERATING_AMPLITUDE)
