"""Simulation and prediction toolkit for dynamical recurrences of matter waves
in periodically driven optical lattices: classical periods, quantum revivals
and super-revivals, validated against direct classical and quantum evolution.
"""

__version__ = "0.1.0"

from .units import (  # noqa: F401
    PhysicalSetup, ScaledParams, InteractionSpec,
    scale_setup, effective_potential_validity,
)
from .mathieu import (  # noqa: F401
    char_value, char_even, char_odd, char_value_small_q, char_value_large_q,
    band_energy, band_edges, band_edge_gap, mean_band_separation,
    MathieuConvergenceError,
)
from .resonance import (  # noqa: F401
    ResonanceContext, TimeScales, QuasiEnergy,
    classical_frequency, nonlinearity, matrix_element, build_context,
    undriven_times, delicate_times, robust_times, robust_times_harmonic,
    quasienergy_spectrum,
)
from .classical import (  # noqa: F401
    ClassicalParams, PoincareSection, integrate, poincare, orbit_frequency,
    find_period1_point, libration_fraction,
)
from .quantum import (  # noqa: F401
    Grid, Wavefunction, EvolutionRecord, init_gaussian, evolve,
    relax_ground_state, autocorrelation, density_map,
)
from .analysis import (  # noqa: F401
    AutocorrelationSeries, extract_classical_period, extract_revival_time,
    extract_super_revival, sweep,
)
