"""SK-model QAOA, linear-time quantum annealing and their infinite-size and exact finite-n oracles."""

from .annealing import AnnealingConvergenceError, annealing_energy, evolve
from .gmatrix import GMatrixError, compute_q, infinite_size_energy, noninteracting_correlation, solve_g_matrix
from .kernels import BACKEND
from .qgms import monte_carlo_disorder_average, qgms_energy_exact, quadrature_disorder_average
from .schedules import (
    DiscreteAngles,
    FourierSchedule,
    TabulatedSchedule,
    discretize,
    discretize_theory,
    extrapolate,
    fourier_analyze,
    fourier_synthesize,
    table_one_schedule,
    total_angles,
)
from .sk import SkInstance, cost_values, energy_density, ground_energy, max_energy, sample_instance
from .statevector import plus_state, qaoa_energy, qaoa_state

__version__ = "0.1.0"
