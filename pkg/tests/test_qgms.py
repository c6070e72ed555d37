import math

import numpy as np
import pytest
from scipy.integrate import quad

from skqaoa.gmatrix import compute_q
from skqaoa.qgms import (
    batched_qaoa_energy,
    composition_count,
    compositions,
    empirical_concentration,
    monte_carlo_disorder_average,
    phi_values,
    qgms_energy_exact,
    quadrature_disorder_average,
)
from skqaoa.schedules import DiscreteAngles, TabulatedSchedule, extrapolate, table_one_schedule
from skqaoa.sk import SkInstance
from skqaoa.statevector import qaoa_energy, two_qubit_energy


@pytest.mark.parametrize("n,k", [(0, 3), (1, 8), (3, 8), (4, 5), (5, 1), (2, 32)])
def test_composition_enumeration(n, k):
    rows = np.concatenate(list(compositions(n, k, chunk=7)))
    assert rows.shape == (composition_count(n, k), k)
    assert np.all(rows.sum(axis=1) == n) and np.all(rows >= 0)
    assert len({tuple(r) for r in rows}) == rows.shape[0]


def test_phi_antisymmetry():
    angles = DiscreteAngles([0.3, -0.2, 0.5], [0.4, 0.1])
    A = compute_q(angles.betas).configs
    phi = phi_values(A, angles.Gamma)
    np.testing.assert_allclose(phi_values(A[:, ::-1], angles.Gamma), -phi, atol=1e-15)


def test_single_spin_is_zero():
    assert qgms_energy_exact(1, DiscreteAngles([0.4], [0.3])) == 0.0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gamma_zero_is_zero(n):
    assert abs(qgms_energy_exact(n, DiscreteAngles([0.0], [0.7]))) <= 1e-15


def test_n2_matches_closed_form_average():
    g, b = 0.4, 0.3

    def integrand(J):
        c = J / math.sqrt(2)
        return two_qubit_energy(c, g, b) / 2 * math.exp(-J * J / 2) / math.sqrt(2 * math.pi)

    ref = quad(integrand, -np.inf, np.inf, epsabs=1e-14)[0]
    angles = DiscreteAngles([g], [b])
    assert qgms_energy_exact(2, angles) == pytest.approx(ref, abs=1e-12)
    assert quadrature_disorder_average(2, angles, 64) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("g,b", [(0.4, 0.3), (-0.9, 0.6), (1.3, -0.2)])
def test_n3_p1_exact_equals_quadrature(g, b):
    angles = DiscreteAngles([g], [b])
    assert qgms_energy_exact(3, angles) == pytest.approx(quadrature_disorder_average(3, angles, 64), abs=1e-6)


def test_n3_p2_exact_equals_quadrature():
    angles = DiscreteAngles([0.3, 0.5], [0.5, 0.2])
    assert qgms_energy_exact(3, angles) == pytest.approx(quadrature_disorder_average(3, angles, 48), abs=1e-6)


def test_quadrature_self_convergence():
    angles = DiscreteAngles([0.6], [0.25])
    assert quadrature_disorder_average(2, angles, 64) == pytest.approx(
        quadrature_disorder_average(2, angles, 128), abs=1e-10
    )


def test_quadrature_limits():
    angles = DiscreteAngles([0.1], [0.1])
    with pytest.raises(ValueError):
        quadrature_disorder_average(4, angles, 16)
    with pytest.raises(ValueError):
        quadrature_disorder_average(3, angles, 4)
    assert quadrature_disorder_average(3, DiscreteAngles([0.0], [0.0]), 8) == 0.0


def test_composition_cap():
    with pytest.raises(ValueError):
        qgms_energy_exact(20, DiscreteAngles([0.1, 0.1], [0.1, 0.1]))


@pytest.mark.parametrize("n", [2, 3])
def test_placeholder_invariance(n):
    angles = DiscreteAngles([0.5, 0.0], [0.3])
    base = qgms_energy_exact(n, angles)
    for v in (0.7, -1.9):
        assert abs(qgms_energy_exact(n, angles.with_placeholder(v)) - base) <= 1e-12


def test_batched_matches_kernel_path():
    rng = np.random.default_rng(4)
    J = rng.normal(size=(5, 3))
    angles = DiscreteAngles([0.2, 0.7], [0.4, -0.3])
    batch = batched_qaoa_energy(3, J, angles)
    for row, e in zip(J, batch):
        assert e == pytest.approx(qaoa_energy(SkInstance(3, row), angles), abs=1e-14)


def test_monte_carlo_zero_angles():
    mean, se = monte_carlo_disorder_average(4, DiscreteAngles([0.0], [0.0]), num_instances=20)
    assert abs(mean) <= 1e-15 and se <= 1e-15


def test_monte_carlo_deterministic_and_stderr_scaling():
    angles = DiscreteAngles([0.5], [0.35])
    a = monte_carlo_disorder_average(3, angles, num_instances=2000, base_seed=5)
    assert a == monte_carlo_disorder_average(3, angles, num_instances=2000, base_seed=5)
    b = monte_carlo_disorder_average(3, angles, num_instances=4000, base_seed=5)
    assert 0.6 <= b[1] / a[1] <= 0.85


def test_monte_carlo_needs_two():
    with pytest.raises(ValueError):
        monte_carlo_disorder_average(3, DiscreteAngles([0.1], [0.1]), num_instances=1)


def test_monte_carlo_annealing_slot():
    sched = TabulatedSchedule.constant(0.0, 0.0)
    mean, se = monte_carlo_disorder_average(3, sched, "annealing", 3)
    assert abs(mean) <= 1e-15 and se <= 1e-15
    with pytest.raises(ValueError):
        monte_carlo_disorder_average(3, sched, "sampling", 3)


@pytest.mark.slow
def test_monte_carlo_agrees_with_exact():
    angles = DiscreteAngles([0.45], [0.3])
    mean, se = monte_carlo_disorder_average(3, angles, num_instances=10**4)
    assert abs(mean - qgms_energy_exact(3, angles)) <= 3 * se


def test_concentration_trivial_cases():
    rows, _ = empirical_concentration([4, 6], DiscreteAngles([0.0], [0.0]), instances=5)
    assert all(v <= 1e-30 for _, _, v in rows)
    rows, _ = empirical_concentration([4, 6], DiscreteAngles([0.3], [0.2]), instances=10)
    assert all(v >= 0 for _, _, v in rows)


@pytest.mark.slow
def test_concentration_variance_decreases():
    angles = extrapolate(table_one_schedule(0.5, 8), 8)
    rows, slope = empirical_concentration([8, 12, 16, 20], angles, instances=60)
    variances = [v for _, _, v in rows]
    assert all(b < a for a, b in zip(variances, variances[1:]))
    assert slope < 0
