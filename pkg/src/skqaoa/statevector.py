"""Dense statevector simulation of p-layer QAOA on SK instances.

States are plain complex128 numpy arrays of length ``2^n``. The layer
``t`` applies ``exp(-i gamma_t C)`` and then ``exp(-i beta_t B)`` with
``B = sum_j X_j``; the ``gamma_{p+1}`` placeholder is never applied.
"""

from pathlib import Path

import numpy as np

from . import kernels
from .sk import N_MAX, cost_values, energy_density, num_qubits


def plus_state(n):
    """Uniform superposition ``|+>^n``."""
    if not 1 <= n <= N_MAX:
        raise ValueError(f"need 1 <= n <= {N_MAX}, got {n}")
    return np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128)


def _check(state):
    if state.dtype != np.complex128 or not state.flags.c_contiguous:
        raise TypeError("state must be a C-contiguous complex128 array")
    return num_qubits(state.size)


def apply_phase(state, costs, gamma, backend=None):
    """Multiply amplitude ``sigma`` by ``exp(-i gamma C(sigma))`` in place; returns ``state``."""
    _check(state)
    if np.shape(costs) != state.shape:
        raise ValueError(f"dimension mismatch: costs {np.shape(costs)} vs state {state.shape}")
    kernels.get_backend(backend).apply_phase(state, costs, gamma)
    return state


def apply_mixer(state, beta, backend=None):
    """Apply ``exp(-i beta X)`` on every qubit in place; returns ``state``."""
    n = _check(state)
    kernels.get_backend(backend).apply_mixer(state, n, beta)
    return state


def evolve_layers(state, costs, gammas, betas, backend=None):
    """Apply ``len(betas)`` phase-then-mixer layers, plus a trailing phase if ``len(gammas) == len(betas) + 1``."""
    n = _check(state)
    if np.shape(costs) != state.shape:
        raise ValueError(f"dimension mismatch: costs {np.shape(costs)} vs state {state.shape}")
    kernels.get_backend(backend).apply_layers(state, costs, n, gammas, betas)
    return state


def qaoa_state(instance, angles, costs=None, backend=None):
    """QAOA state for ``angles`` (a :class:`~skqaoa.schedules.DiscreteAngles`).

    ``costs`` may be passed to reuse a precomputed cost vector.
    """
    if costs is None:
        costs = cost_values(instance)
    state = plus_state(instance.n)
    if angles.p == 0:
        return state
    return evolve_layers(state, costs, angles.layer_gammas, angles.betas, backend)


def qaoa_energy(instance, angles, costs=None, backend=None):
    """Per-instance energy density ``<C>/n`` of the QAOA state."""
    if costs is None:
        costs = cost_values(instance)
    state = qaoa_state(instance, angles, costs, backend)
    return kernels.get_backend(backend).expectation(state, costs) / instance.n


def two_qubit_energy(c, gamma, beta):
    """Closed form ``<C> = c sin(4 beta) sin(2 gamma c)`` for one edge with ``C = c Z_0 Z_1``, p = 1."""
    return c * np.sin(4 * beta) * np.sin(2 * gamma * c)


def dump_amplitudes(state, path):
    """Write ``index,re,im`` rows for debugging."""
    rows = ["index,re,im"]
    rows += [f"{i},{a.real:.17g},{a.imag:.17g}" for i, a in enumerate(state)]
    Path(path).write_text("\n".join(rows) + "\n")


__all__ = [
    "plus_state",
    "apply_phase",
    "apply_mixer",
    "evolve_layers",
    "qaoa_state",
    "qaoa_energy",
    "two_qubit_energy",
    "energy_density",
    "dump_amplitudes",
]
