import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skqaoa.sk import (
    SkInstance,
    coupling_from_stream,
    cost_values,
    energy_density,
    ground_energy,
    load_instance,
    max_energy,
    pair_index,
    sample_instance,
    save_instance,
    spins,
)
from skqaoa.statevector import plus_state


def brute_cost(instance):
    """Direct double loop over bitstrings and pairs."""
    n = instance.n
    J = instance.matrix()
    out = np.zeros(1 << n)
    for idx in range(1 << n):
        s = [1 - 2 * ((idx >> i) & 1) for i in range(n)]
        out[idx] = sum(J[j, k] * s[j] * s[k] for j in range(n) for k in range(j + 1, n)) / np.sqrt(n)
    return out


def test_single_spin_has_no_couplings():
    inst = sample_instance(1, 123)
    assert inst.couplings.size == 0
    np.testing.assert_array_equal(cost_values(inst), [0.0, 0.0])
    assert ground_energy(cost_values(inst)) == (0.0, 0)


def test_zero_spins_rejected():
    with pytest.raises(ValueError):
        sample_instance(0, 0)


def test_deterministic_regeneration():
    a, b = sample_instance(4, 0), sample_instance(4, 0)
    np.testing.assert_array_equal(a.couplings, b.couplings)
    assert a.couplings.size == 6
    assert not np.array_equal(a.couplings, sample_instance(4, 1).couplings)
    # key includes n: the first couplings differ between sizes
    assert sample_instance(5, 0).couplings[0] != a.couplings[0]


def test_per_coupling_regeneration_is_order_independent():
    inst = sample_instance(7, 99)
    pairs = list(inst.pairs())
    for j, k in reversed(pairs):
        assert coupling_from_stream(7, 99, j, k) == inst.coupling(j, k)


def test_coupling_statistics():
    c = np.concatenate([sample_instance(60, s).couplings for s in range(60)])
    assert c.size > 10**5
    assert abs(c.mean()) <= 3 / np.sqrt(c.size)
    assert abs(c.var() - 1) < 0.02


def test_two_spin_costs():
    inst = SkInstance(2, [np.sqrt(2)])
    np.testing.assert_allclose(cost_values(inst), [1, -1, -1, 1], atol=1e-15)
    assert ground_energy(cost_values(inst))[0] == pytest.approx(-1)


def test_three_spin_all_ones():
    costs = cost_values(SkInstance(3, [1, 1, 1]))
    assert costs[0] == pytest.approx(3 / np.sqrt(3))
    assert ground_energy(costs)[0] == pytest.approx(-1 / np.sqrt(3))
    assert max_energy(costs) == (pytest.approx(np.sqrt(3)), 0)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_cost_matches_brute_force(n):
    inst = sample_instance(n, 7)
    np.testing.assert_allclose(cost_values(inst), brute_cost(inst), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 13))
def test_flip_symmetry_and_zero_sum(n):
    costs = cost_values(sample_instance(n, n))
    flipped = costs[(1 << n) - 1 - np.arange(1 << n)]
    np.testing.assert_array_equal(costs, flipped)
    assert abs(costs.sum()) < 1e-9 * max(1, np.abs(costs).sum())


@pytest.mark.parametrize("n", [1, 4, 9])
def test_plus_state_energy_is_zero(n):
    costs = cost_values(sample_instance(n, 3))
    assert abs(energy_density(costs, plus_state(n))) < 1e-14


def test_basis_state_at_argmin():
    costs = cost_values(sample_instance(6, 5))
    e, idx = ground_energy(costs)
    state = np.zeros(64, complex)
    state[idx] = 1
    assert energy_density(costs, state) == pytest.approx(e / 6)


def test_energy_density_two_spin_hand_sum():
    costs = cost_values(SkInstance(2, [0.7]))
    rng = np.random.default_rng(0)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    c = 0.7 / np.sqrt(2)
    hand = (abs(psi[0]) ** 2 - abs(psi[1]) ** 2 - abs(psi[2]) ** 2 + abs(psi[3]) ** 2) * c / 2
    assert energy_density(costs, psi) == pytest.approx(hand, abs=1e-15)


def test_energy_density_dimension_mismatch():
    with pytest.raises(ValueError):
        energy_density(np.zeros(4), np.zeros(8, complex))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 8), seed=st.integers(0, 2**32), state_seed=st.integers(0, 1000))
def test_variational_bound(n, seed, state_seed):
    costs = cost_values(sample_instance(n, seed))
    rng = np.random.default_rng(state_seed)
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    psi /= np.linalg.norm(psi)
    e = energy_density(costs, psi) * n
    assert ground_energy(costs)[0] <= e + 1e-12
    assert e <= max_energy(costs)[0] + 1e-12


def test_spins_convention():
    np.testing.assert_array_equal(spins(0b101, 3), [-1, 1, -1])


def test_pair_index_is_row_major():
    n = 6
    expected = list(itertools.combinations(range(n), 2))
    assert [pair_index(n, j, k) for j, k in expected] == list(range(len(expected)))


def test_instance_round_trip(tmp_path):
    inst = sample_instance(5, 2**40 + 3)
    save_instance(inst, tmp_path / "i.sk")
    text = (tmp_path / "i.sk").read_text().splitlines()
    assert text[0] == "sk v1" and text[1] == f"5 {2**40 + 3}"
    back = load_instance(tmp_path / "i.sk")
    np.testing.assert_array_equal(back.couplings, inst.couplings)
    assert back.seed == inst.seed


def test_load_rejects_missing_couplings(tmp_path):
    (tmp_path / "bad.sk").write_text("sk v1\n3 -1\n0 1 0.5\n")
    with pytest.raises(ValueError):
        load_instance(tmp_path / "bad.sk")


def test_cost_cap():
    with pytest.raises(ValueError):
        cost_values(SkInstance(25, np.zeros(300)))
