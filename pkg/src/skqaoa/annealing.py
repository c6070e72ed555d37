"""Linear-time quantum annealing ``i dpsi/du = (gamma(u) C + beta(u) B) psi`` on ``u in [0, 1]``.

Integrated by Strang splitting with midpoint-sampled coefficients. One step of
size ``h`` starting at ``u`` is

    half-phase(gamma(u + h/2) h) . mixer(beta(u + h/2) h) . half-phase(gamma(u + h/2) h)

Adjacent half-phases of consecutive steps are merged, so a run of ``N`` steps is
one ``apply_layers`` call with ``N + 1`` phase angles and ``N`` mixer angles.
"""

import numpy as np

from . import kernels
from .sk import cost_values
from .statevector import evolve_layers, plus_state

MIN_STEPS = 64
MAX_STEPS = 1 << 20


class AnnealingConvergenceError(RuntimeError):
    """Step doubling hit the cap before successive energies agreed to ``tol``."""

    def __init__(self, steps, residual, tol):
        super().__init__(f"annealing not converged at {steps} steps: |dE| = {residual:.3e} > tol = {tol:.1e}")
        self.steps = steps
        self.residual = residual
        self.tol = tol


def strang_angles(schedule, steps):
    """Merged phase angles (``steps + 1``) and mixer angles (``steps``) for a uniform Strang grid."""
    h = 1.0 / steps
    mid = (np.arange(steps) + 0.5) * h
    g = schedule.gamma(mid) * h
    phases = np.empty(steps + 1)
    phases[0] = 0.5 * g[0]
    phases[1:-1] = 0.5 * (g[:-1] + g[1:])
    phases[-1] = 0.5 * g[-1]
    return phases, schedule.beta(mid) * h


def evolve_fixed(instance, schedule, steps, costs=None, backend=None):
    """Annealed state after exactly ``steps`` Strang steps."""
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    if costs is None:
        costs = cost_values(instance)
    phases, mixers = strang_angles(schedule, steps)
    return evolve_layers(plus_state(instance.n), costs, phases, mixers, backend)


def evolve(instance, schedule, tol=1e-8, costs=None, backend=None, min_steps=MIN_STEPS, max_steps=MAX_STEPS, info=None):
    """Annealed state, doubling the step count until the energy density changes by less than ``tol``.

    Returns the finer of the last two states. If ``info`` is a dict it receives
    ``steps``, ``residual`` and ``energy``.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if costs is None:
        costs = cost_values(instance)
    expect = kernels.get_backend(backend).expectation
    n = instance.n
    steps = min_steps
    state = evolve_fixed(instance, schedule, steps, costs, backend)
    energy = expect(state, costs) / n
    residual = np.inf
    while steps < max_steps:
        steps *= 2
        finer = evolve_fixed(instance, schedule, steps, costs, backend)
        e_fine = expect(finer, costs) / n
        residual = abs(e_fine - energy)
        state, energy = finer, e_fine
        if residual < tol:
            break
    else:
        raise AnnealingConvergenceError(steps, residual, tol)
    if info is not None:
        info.update(steps=steps, residual=residual, energy=energy)
    return state


def annealing_energy(instance, schedule, tol=1e-8, costs=None, backend=None, **kw):
    """Per-instance annealing energy density ``<C>/n``."""
    info = {}
    evolve(instance, schedule, tol, costs, backend, info=info, **kw)
    return info["energy"]
