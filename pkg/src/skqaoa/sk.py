"""Sherrington-Kirkpatrick instances, dense cost vectors and brute-force optima.

Conventions
-----------
Qubit ``j`` (0-based) is bit ``j`` of a basis-state index, least significant
bit first. Bit value ``b`` maps to spin ``sigma = 1 - 2 b``, so the all-zeros
index is the all-up configuration.

Couplings are drawn from a Philox counter-based stream keyed by ``(seed, n)``.
Coupling number ``m`` (row-major order over ``j < k``) consumes the two 64-bit
words at positions ``2m, 2m + 1`` of the stream and is turned into a standard
normal by Box-Muller, so any single coupling can be regenerated without
touching the others.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

N_MAX = 24
_MASK64 = (1 << 64) - 1
_INV_2_53 = 1.0 / (1 << 53)


@dataclass(frozen=True)
class SkInstance:
    """An SK problem on ``n`` spins.

    ``couplings`` holds ``J[j, k]`` for ``j < k`` in row-major order; use
    :meth:`coupling` or :meth:`matrix` for indexed access.
    """

    n: int
    couplings: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        c = np.array(self.couplings, dtype=np.float64).reshape(-1)
        if c.size != self.n * (self.n - 1) // 2:
            raise ValueError(f"expected {self.n * (self.n - 1) // 2} couplings for n={self.n}, got {c.size}")
        c.flags.writeable = False
        object.__setattr__(self, "couplings", c)

    def coupling(self, j, k):
        if not 0 <= j < k < self.n:
            raise IndexError(f"need 0 <= j < k < n, got ({j}, {k})")
        return float(self.couplings[pair_index(self.n, j, k)])

    def matrix(self):
        """Strictly upper-triangular coupling matrix."""
        J = np.zeros((self.n, self.n))
        J[np.triu_indices(self.n, 1)] = self.couplings
        return J

    def pairs(self):
        for j in range(self.n):
            for k in range(j + 1, self.n):
                yield j, k


def pair_index(n, j, k):
    """Row-major position of pair ``(j, k)``, ``j < k``, in the coupling list."""
    return j * n - j * (j + 1) // 2 + (k - j - 1)


def _philox(n, seed, block=0):
    key = np.array([seed & _MASK64, n], dtype=np.uint64)
    counter = np.array([block, 0, 0, 0], dtype=np.uint64)
    return np.random.Philox(key=key, counter=counter)


def _box_muller(words):
    u1 = ((words[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
    u2 = (words[1::2] >> np.uint64(11)).astype(np.float64) * _INV_2_53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    return seed


def sample_instance(n, seed):
    """Draw an SK instance with i.i.d. standard normal couplings."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    seed = _check_seed(seed)
    m = n * (n - 1) // 2
    if m == 0:
        return SkInstance(n, np.zeros(0), seed)
    words = _philox(n, seed).random_raw(2 * m)
    return SkInstance(n, _box_muller(words), seed)


def coupling_from_stream(n, seed, j, k):
    """Regenerate the single coupling ``J[j, k]`` of ``sample_instance(n, seed)``."""
    if not 0 <= j < k < n:
        raise IndexError(f"need 0 <= j < k < n, got ({j}, {k})")
    m = pair_index(n, j, k)
    block = _philox(n, _check_seed(seed), block=m // 2).random_raw(4)
    off = 2 * (m % 2)
    return float(_box_muller(block[off : off + 2])[0])


def cost_values(instance):
    """Dense diagonal of ``C = n^{-1/2} sum_{j<k} J_jk Z_j Z_k`` over all ``2^n`` basis states.

    Built qubit by qubit: appending qubit ``m`` as the new most significant bit
    adds ``sigma_m * h_m`` where ``h_m = sum_{j<m} J_jm sigma_j`` is itself built
    by doubling, so the total cost is O(2^n).
    """
    n = instance.n
    if n > N_MAX:
        raise ValueError(f"dense cost vectors are capped at n <= {N_MAX}, got n={n}")
    J = instance.matrix()
    values = np.zeros(1)
    for m in range(n):
        field = np.zeros(1)
        for j in range(m):
            field = np.concatenate((field + J[j, m], field - J[j, m]))
        values = np.concatenate((values + field, values - field))
    values /= np.sqrt(n)
    values.flags.writeable = False
    return values


def spins(index, n):
    """Spin configuration (+1/-1 per qubit) of a basis-state index."""
    return 1 - 2 * ((int(index) >> np.arange(n)) & 1)


def ground_energy(costs):
    """Exact minimum of the cost vector and the index of a minimising basis state."""
    idx = int(np.argmin(costs))
    return float(costs[idx]), idx


def max_energy(costs):
    """Exact maximum of the cost vector and the index of a maximising basis state."""
    idx = int(np.argmax(costs))
    return float(costs[idx]), idx


def num_qubits(dim):
    n = int(dim).bit_length() - 1
    if n < 0 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def energy_density(costs, state):
    """``<state| C |state> / n`` for a dense state; always real."""
    costs = np.asarray(costs)
    state = np.asarray(state)
    if costs.shape != state.shape:
        raise ValueError(f"dimension mismatch: costs {costs.shape} vs state {state.shape}")
    n = num_qubits(costs.size)
    probs = state.real**2 + state.imag**2
    return float(np.dot(probs, costs)) / max(n, 1)


def save_instance(instance, path):
    """Write the plain-text ``sk v1`` format."""
    seed = -1 if instance.seed is None else instance.seed
    lines = ["sk v1", f"{instance.n} {seed}"]
    for (j, k), J in zip(instance.pairs(), instance.couplings):
        lines.append(f"{j} {k} {J:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_instance(path):
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "sk v1":
        raise ValueError(f"{path}: not an 'sk v1' file")
    n, seed = (int(tok) for tok in lines[1].split())
    couplings = np.zeros(n * (n - 1) // 2)
    seen = set()
    for line in lines[2:]:
        if not line.strip():
            continue
        j, k, J = line.split()
        j, k = int(j), int(k)
        m = pair_index(n, j, k)
        couplings[m] = float(J)
        seen.add(m)
    if len(seen) != couplings.size:
        raise ValueError(f"{path}: expected {couplings.size} couplings, found {len(seen)}")
    return SkInstance(n, couplings, None if seed < 0 else seed)
