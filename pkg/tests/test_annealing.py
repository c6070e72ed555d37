import numpy as np
import pytest

from skqaoa.annealing import AnnealingConvergenceError, annealing_energy, evolve, evolve_fixed, strang_angles
from skqaoa.schedules import TabulatedSchedule, discretize_theory, table_one_schedule
from skqaoa.sk import cost_values, sample_instance
from skqaoa.statevector import plus_state


def expm_reference(inst, schedule, substeps=4000):
    """Oracle: piecewise-constant exact exponentials of the full 2^n Hamiltonian (midpoint samples)."""
    n = inst.n
    C = np.diag(cost_values(inst))
    X = np.array([[0, 1], [1, 0]])
    B = np.zeros((1 << n, 1 << n))
    for q in range(n):
        B += np.kron(np.kron(np.eye(1 << (n - 1 - q)), X), np.eye(1 << q))
    psi = plus_state(n)
    h = 1 / substeps
    for k in range(substeps):
        u = (k + 0.5) * h
        w, V = np.linalg.eigh(schedule.gamma(u) * C + schedule.beta(u) * B)
        psi = V @ (np.exp(-1j * h * w) * (V.conj().T @ psi))
    return np.real(np.vdot(psi, np.diag(C) * psi)) / n


def test_zero_beta_is_diagonal():
    inst = sample_instance(6, 0)
    sched = TabulatedSchedule.constant(0.9, 0.0)
    psi = evolve(inst, sched, 1e-10)
    np.testing.assert_allclose(np.abs(psi), np.abs(plus_state(6)), atol=1e-14)
    assert abs(annealing_energy(inst, sched, 1e-10)) < 1e-10


def test_zero_gamma_keeps_energy_zero():
    inst = sample_instance(6, 1)
    assert abs(annealing_energy(inst, TabulatedSchedule.constant(0.0, 1.3), 1e-10)) < 1e-10


def test_zero_schedule():
    assert abs(annealing_energy(sample_instance(5, 2), TabulatedSchedule.constant(0, 0), 1e-12)) < 1e-15


def test_bad_tol():
    with pytest.raises(ValueError):
        evolve(sample_instance(3, 0), table_one_schedule(1.0, 3), 0.0)


def test_step_cap_reports_residual():
    with pytest.raises(AnnealingConvergenceError) as info:
        evolve(sample_instance(6, 3), table_one_schedule(1.0, 17), 1e-14, max_steps=256)
    assert info.value.residual > 1e-14
    assert info.value.steps == 256


def test_merged_phases_cover_full_time():
    sched = TabulatedSchedule.constant(0.7, 0.2)
    phases, mixers = strang_angles(sched, 10)
    assert phases.size == 11 and mixers.size == 10
    assert phases.sum() == pytest.approx(0.7)
    assert mixers.sum() == pytest.approx(0.2)


def test_matches_exact_exponential_oracle():
    inst = sample_instance(4, 9)
    sched = table_one_schedule(0.5, 8)
    ref = expm_reference(inst, sched)
    assert annealing_energy(inst, sched, 1e-9) == pytest.approx(ref, abs=1e-6)


def test_norm_conserved():
    psi = evolve_fixed(sample_instance(8, 2), table_one_schedule(1.0, 17), 4096)
    assert abs(np.linalg.norm(psi) - 1) <= 1e-12


def test_second_order_convergence():
    inst = sample_instance(8, 0)
    sched = table_one_schedule(1.0, 17)
    costs = cost_values(inst)

    def energy(steps):
        psi = evolve_fixed(inst, sched, steps, costs)
        return float(np.dot(np.abs(psi) ** 2, costs)) / 8

    steps = [256, 512, 1024, 2048]
    ref = energy(4 * steps[-1])
    errs = [abs(energy(s) - ref) for s in steps]
    slope = np.polyfit(np.log(1 / np.array(steps)), np.log(errs), 1)[0]
    assert 1.8 <= slope <= 2.2


def test_refinement_stability():
    inst = sample_instance(6, 4)
    sched = table_one_schedule(0.5, 10)
    a = annealing_energy(inst, sched, 1e-8)
    b = annealing_energy(inst, sched, 1e-10)
    assert abs(a - b) <= 1e-7


@pytest.mark.slow
def test_qaoa_approaches_annealing_state():
    inst = sample_instance(6, 1)
    sched = table_one_schedule(1.0, 17)
    ref = evolve(inst, sched, 1e-10)
    from skqaoa.statevector import qaoa_state

    ps = [32, 64, 128, 256, 512]
    dists = []
    for p in ps:
        psi = qaoa_state(inst, discretize_theory(sched, p))
        overlap = np.vdot(ref, psi)
        # compare up to a global phase
        dists.append(np.linalg.norm(psi * np.exp(-1j * np.angle(overlap)) - ref))
    assert all(b < a for a, b in zip(dists, dists[1:]))
