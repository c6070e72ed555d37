"""Exact and sampled disorder averages of the finite-n SK-QAOA energy.

Three independent routes to ``E_J <C/n>``:

* :func:`qgms_energy_exact` -- the generalized multinomial sum over
  compositions of ``n`` into the ``2^(2p+1)`` path configurations;
* :func:`quadrature_disorder_average` -- tensor Gauss-Hermite quadrature over
  the couplings, for at most three couplings;
* :func:`monte_carlo_disorder_average` -- sample mean over seeded instances.
"""

import itertools
import math

import numpy as np
from scipy.special import gammaln

from .annealing import annealing_energy
from .gmatrix import compute_q
from .sk import cost_values, sample_instance
from .statevector import qaoa_energy

MAX_COMPOSITIONS = 10**7
CHUNK = 1 << 15


def composition_count(n, k):
    """Number of ways to write ``n`` as an ordered sum of ``k`` nonnegative integers."""
    return math.comb(n + k - 1, k - 1)


def compositions(n, k, chunk=CHUNK):
    """Yield all compositions of ``n`` into ``k`` parts as ``(m, k)`` int arrays, in lexicographic bar order."""
    if k < 1:
        raise ValueError("need at least one part")
    if k == 1:
        yield np.array([[n]])
        return
    bars = itertools.combinations(range(n + k - 1), k - 1)
    while True:
        block = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(bars, chunk)), dtype=np.int64
        ).reshape(-1, k - 1)
        if block.shape[0] == 0:
            return
        edges = np.concatenate(
            (np.full((block.shape[0], 1), -1), block, np.full((block.shape[0], 1), n + k - 1)), axis=1
        )
        yield np.diff(edges, axis=1) - 1


def phi_values(configs, Gamma):
    """``Phi_c = sum_l Gamma_l c_l`` for each configuration row ``c``."""
    return configs @ np.asarray(Gamma, dtype=float)


def qgms_energy_exact(n, angles, imag_tol=1e-9):
    """Disorder-averaged energy density at ``n`` spins by exact multinomial enumeration.

    Evaluates ``Re[(i/2) sum_l Gamma_l S_l]`` with

        S_l = sum_{n_a} multinom(n; n_a) exp(-1/(4n) sum_ab Phi_{a.b}^2 n_a n_b)
              prod_a Q_a^{n_a} (sum_a a_p a_l n_a / n)^2

    where ``a.b`` is the entrywise product of configurations.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    p = angles.p
    if p == 0 or n == 1:
        return 0.0
    q = compute_q(angles.betas)
    A = q.configs.astype(float)
    S = A.shape[0]
    count = composition_count(n, S)
    if count > MAX_COMPOSITIONS:
        raise ValueError(f"{count} compositions exceed the cap of {MAX_COMPOSITIONS}")
    Gamma = angles.Gamma
    # Phi of the entrywise product of every pair of configurations.
    M = (np.einsum("al,bl,l->ab", A, A, Gamma)) ** 2
    corr = A * A[:, p : p + 1]  # a_p a_l, shape (S, L)
    Qv = q.values
    log_nfact = gammaln(n + 1)
    re_parts, im_parts = [], []
    for N in compositions(n, S):
        Nf = N.astype(float)
        log_w = log_nfact - gammaln(Nf + 1).sum(axis=1) - np.einsum("ma,ab,mb->m", Nf, M, Nf) / (4 * n)
        qprod = np.prod(Qv[None, :] ** N, axis=1)
        mom = (Nf @ corr) / n  # (m, L)
        term = np.exp(log_w) * qprod * ((mom**2) @ Gamma)
        s = complex(np.sum(0.5j * term))
        re_parts.append(s.real)
        im_parts.append(s.imag)
    re, im = math.fsum(re_parts), math.fsum(im_parts)
    if abs(im) > imag_tol * max(1.0, abs(re)):
        raise ArithmeticError(f"imaginary residue {im:.3e} exceeds tolerance")
    return re


def _zz_table(n):
    """``sigma_j sigma_k / sqrt(n)`` for each coupling (rows) and basis state (columns)."""
    idx = np.arange(1 << n)
    sig = 1 - 2 * ((idx[None, :] >> np.arange(n)[:, None]) & 1)
    rows = [sig[j] * sig[k] for j in range(n) for k in range(j + 1, n)]
    return np.array(rows, dtype=float).reshape(-1, 1 << n) / np.sqrt(n)


def batched_qaoa_energy(n, couplings, angles):
    """QAOA energy density for many coupling vectors at once (rows of ``couplings``).

    Plain numpy, independent of the compiled kernels; meant for tiny ``n``.
    """
    couplings = np.atleast_2d(np.asarray(couplings, dtype=float))
    costs = couplings @ _zz_table(n)
    m, dim = costs.shape
    psi = np.full((m, dim), 2.0 ** (-n / 2), dtype=complex)
    for g, b in zip(angles.layer_gammas, angles.betas):
        psi *= np.exp(-1j * g * costs)
        c, s = np.cos(b), np.sin(b)
        for qb in range(n):
            v = psi.reshape(m, -1, 2, 1 << qb)
            lo, hi = v[:, :, 0, :].copy(), v[:, :, 1, :].copy()
            v[:, :, 0, :] = c * lo - 1j * s * hi
            v[:, :, 1, :] = c * hi - 1j * s * lo
    return np.einsum("md,md->m", np.abs(psi) ** 2, costs) / n


def quadrature_disorder_average(n, angles, nodes_per_coupling=64):
    """Tensor Gauss-Hermite average of the QAOA energy density over standard normal couplings."""
    m = n * (n - 1) // 2
    if m > 3:
        raise ValueError(f"tensor quadrature supports at most 3 couplings, n={n} has {m}")
    if nodes_per_coupling < 8:
        raise ValueError(f"need at least 8 nodes, got {nodes_per_coupling}")
    if m == 0:
        return 0.0
    x, w = np.polynomial.hermite_e.hermegauss(nodes_per_coupling)
    w = w / np.sqrt(2 * np.pi)
    grids = np.meshgrid(*([x] * m), indexing="ij")
    weights = np.prod(np.meshgrid(*([w] * m), indexing="ij"), axis=0).reshape(-1)
    J = np.stack([g.reshape(-1) for g in grids], axis=1)
    vals = np.concatenate([batched_qaoa_energy(n, J[i : i + CHUNK], angles) for i in range(0, J.shape[0], CHUNK)])
    return math.fsum(weights * vals)


def monte_carlo_disorder_average(n, target, simulator="qaoa", num_instances=1000, base_seed=0, tol=1e-8):
    """Sample mean and standard error of the energy density over instances seeded ``base_seed + i``.

    ``target`` is a :class:`~skqaoa.schedules.DiscreteAngles` for ``"qaoa"`` and
    a schedule for ``"annealing"``.
    """
    if num_instances < 2:
        raise ValueError("need at least two instances for a standard error")
    if simulator == "qaoa":
        fn = qaoa_energy
    elif simulator == "annealing":
        fn = lambda inst, sched, costs: annealing_energy(inst, sched, tol, costs)  # noqa: E731
    else:
        raise ValueError(f"unknown simulator {simulator!r}")
    vals = np.empty(num_instances)
    for i in range(num_instances):
        inst = sample_instance(n, base_seed + i)
        vals[i] = fn(inst, target, costs=cost_values(inst))
    return _mean_stderr(vals)


def _mean_stderr(vals):
    vals = np.asarray(vals, dtype=float)
    mean = math.fsum(vals) / vals.size
    var = math.fsum((vals - mean) ** 2) / (vals.size - 1)
    return mean, math.sqrt(var / vals.size)


def empirical_concentration(ns, angles, instances=200, base_seed=0):
    """Per-``n`` variance of the per-instance QAOA energy density, plus the fitted log-log slope.

    Returns ``(rows, slope)`` with rows ``(n, mean, variance)``; the slope is
    NaN when fewer than two variances are positive.
    """
    rows = []
    for n in ns:
        vals = np.array(
            [qaoa_energy(inst, angles) for inst in (sample_instance(n, base_seed + i) for i in range(instances))]
        )
        mean = math.fsum(vals) / vals.size
        var = math.fsum((vals - mean) ** 2) / max(vals.size - 1, 1)
        rows.append((int(n), mean, var))
    pos = [(n, v) for n, _, v in rows if v > 0]
    if len(pos) < 2:
        return rows, float("nan")
    slope = np.polyfit(np.log([n for n, _ in pos]), np.log([v for _, v in pos]), 1)[0]
    return rows, float(slope)
