"""Infinite-size SK-QAOA energy from the G-matrix fixed point.

Indices run over ``0..2p+1``. Configurations ``a`` are +/-1 strings of length
``2p + 2`` with ``a_p = a_{p+1}``; there are ``2^(2p+1)`` of them, stored as the
rows of a ``(2^(2p+1), 2p+2)`` array. ``Gamma`` and ``B`` come from
:class:`~skqaoa.schedules.DiscreteAngles`.

The fixed point solved here is

    G_jk = sum_a a_j a_k Q_a exp(-1/2 sum_rs G_rs Gamma_r Gamma_s a_r a_s)

and the energy density in the ``n -> infinity`` limit is
``Re[(i/2) sum_r Gamma_r G_{r,p+1}^2]``.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

P_MAX = 11
CHUNK = 1 << 15


class GMatrixError(RuntimeError):
    """Fixed-point iteration failed; ``diagnosis`` says how."""

    def __init__(self, diagnosis, iterations, residual):
        super().__init__(f"G-matrix iteration {diagnosis} after {iterations} iterations (residual {residual:.3e})")
        self.diagnosis = diagnosis
        self.iterations = iterations
        self.residual = residual


def configurations(p):
    """All +/-1 strings of length ``2p + 2`` with ``a_p = a_{p+1}``, shape ``(2^(2p+1), 2p+2)``.

    Row ``m`` reads the free positions ``0..p, p+2..2p+1`` from the bits of
    ``m`` (bit ``i`` is free position ``i``), with bit value 1 meaning -1.
    """
    if p < 0:
        raise ValueError(f"p must be nonnegative, got {p}")
    free = 2 * p + 1
    bits = (np.arange(1 << free)[:, None] >> np.arange(free)) & 1
    spins = 1 - 2 * bits.astype(np.int8)
    return np.concatenate((spins[:, : p + 1], spins[:, p : p + 1], spins[:, p + 1 :]), axis=1)


@dataclass(frozen=True)
class QVector:
    """``Q_a`` over :func:`configurations` rows, for ``p`` layers."""

    p: int
    configs: np.ndarray
    values: np.ndarray


def compute_q(betas):
    """``Q_a = 1/2 prod_{t=1}^{2p+1} <a_t| exp(i btilde_t X) |a_{t-1}>``.

    The overlap is ``cos(theta)`` when the two spins agree and ``i sin(theta)``
    otherwise; ``btilde = (0, -beta_1..-beta_p, 0, beta_p..beta_1)``.
    """
    betas = np.asarray(betas, dtype=float).reshape(-1)
    p = betas.size
    if p < 1:
        raise ValueError("compute_q needs p >= 1")
    if p > P_MAX:
        raise ValueError(f"p is capped at {P_MAX}, got {p}")
    btilde = np.concatenate(([0.0], -betas, [0.0], betas[::-1]))
    A = configurations(p)
    same = A[:, 1:] == A[:, :-1]
    factors = np.where(same, np.cos(btilde[1:]), 1j * np.sin(btilde[1:]))
    values = 0.5 * np.prod(factors, axis=1)
    return QVector(p, A, values)


def noninteracting_correlation(B, indices):
    """``exp(-2i sum_r (B[j_(2r)] - B[j_(2r-1)]))`` over the ascending-sorted indices."""
    idx = np.sort(np.asarray(indices, dtype=int).reshape(-1))
    if idx.size % 2:
        raise ValueError(f"need an even number of indices, got {idx.size}")
    B = np.asarray(B, dtype=float)
    return complex(np.exp(-2j * np.sum(B[idx[1::2]] - B[idx[0::2]])))


def noninteracting_g(B):
    """Matrix of two-point noninteracting correlations, ``exp(-2i |B_k - B_j|_ordered)``."""
    B = np.asarray(B, dtype=float)
    j, k = np.meshgrid(np.arange(B.size), np.arange(B.size), indexing="ij")
    diff = np.where(j <= k, B[k] - B[j], B[j] - B[k])
    return np.exp(-2j * diff)


def brute_force_moment(q, indices, weights=None):
    """``sum_a Q_a w_a prod_r a_{j_r}`` by explicit summation (``w = 1`` unless given)."""
    w = q.values if weights is None else q.values * weights
    prod = np.prod(q.configs[:, list(indices)], axis=1) if len(indices) else 1
    return complex(np.sum(w * prod))


def _weights(q, G, Gamma):
    """``Q_a exp(-1/2 x^T G x)`` with ``x = Gamma * a``, chunked over configurations."""
    out = np.empty(q.values.size, dtype=complex)
    for lo in range(0, out.size, CHUNK):
        x = q.configs[lo : lo + CHUNK] * Gamma
        quad = np.einsum("mr,mr->m", x @ G, x)
        out[lo : lo + CHUNK] = q.values[lo : lo + CHUNK] * np.exp(-0.5 * quad)
    return out


def fixed_point_map(q, G, Gamma):
    """Right-hand side ``F(G)`` of the fixed-point equation."""
    w = _weights(q, G, Gamma)
    A = q.configs.astype(float)
    return (A * w[:, None]).T @ A


def z_residual(q, G, Gamma):
    """``|sum_a Q_a exp(-1/2 x^T G x) - 1|``; zero at an exact fixed point."""
    return abs(complex(np.sum(_weights(q, G, Gamma))) - 1.0)


@dataclass
class GSolution:
    G: np.ndarray
    iterations: int
    residual: float
    z_residual: float
    norm_inf: float


def _symmetrize(G):
    G = 0.5 * (G + G.T)
    np.fill_diagonal(G, 1.0)
    return G


def solve_g_matrix(q, Gamma, B=None, tol=1e-12, damping=1.0, max_iter=500, G0=None):
    """Damped iteration ``G <- (1 - eta) G + eta F(G)`` from the noninteracting matrix.

    Entries of ``F(G)`` at light-cone depth ``m`` only depend on entries of
    ``G`` at depth below ``m``, so the undamped map (``eta = 1``, the default)
    reaches the fixed point in about ``p`` iterations. Smaller ``eta`` breaks
    that structure and is unstable for ``p >= 5`` on typical schedules.

    Stops once ``max |F(G) - G| < tol``. Raises :class:`GMatrixError` on
    non-convergence or when ``max |G|`` exceeds 1e3.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not 0 < damping <= 1:
        raise ValueError(f"damping must lie in (0, 1], got {damping}")
    Gamma = np.asarray(Gamma, dtype=float)
    if Gamma.size != 2 * q.p + 2:
        raise ValueError(f"Gamma has {Gamma.size} entries, expected {2 * q.p + 2}")
    if G0 is not None:
        G = np.array(G0, dtype=complex)
    elif B is not None:
        G = noninteracting_g(B)
    else:
        raise ValueError("need B (for the noninteracting start) or an explicit G0")
    residual = np.inf
    for it in range(max_iter + 1):
        F = fixed_point_map(q, G, Gamma)
        residual = float(np.max(np.abs(F - G)))
        if not np.isfinite(residual):
            raise GMatrixError("produced non-finite entries", it, residual)
        if residual < tol:
            break
        G = _symmetrize((1 - damping) * G + damping * F)
        if np.max(np.abs(G)) > 1e3:
            raise GMatrixError("exploded", it + 1, residual)
    else:
        raise GMatrixError("did not converge", max_iter, residual)
    return GSolution(G, it, residual, z_residual(q, G, Gamma), float(np.max(np.abs(G))))


def infinite_size_energy(G, Gamma, imag_tol=1e-8):
    """``Re[(i/2) sum_r Gamma_r G_{r,p+1}^2]``; a large imaginary part signals an unconverged G."""
    Gamma = np.asarray(Gamma, dtype=float)
    p = Gamma.size // 2 - 1
    val = 0.5j * np.sum(Gamma * G[:, p + 1] ** 2)
    if abs(val.imag) > imag_tol:
        raise GMatrixError(f"left imaginary energy {val.imag:.3e}", -1, abs(val.imag))
    return float(val.real)


def solve_angles(angles, **kw):
    """Build ``Q`` and solve the fixed point for a :class:`~skqaoa.schedules.DiscreteAngles`."""
    q = compute_q(angles.betas)
    return q, solve_g_matrix(q, angles.Gamma, angles.B, **kw)


def infinite_size_energy_for(angles, **kw):
    """Infinite-size energy density for ``angles`` in one call."""
    _, sol = solve_angles(angles, **kw)
    return infinite_size_energy(sol.G, angles.Gamma)


def multistart_spread(angles, starts=4, seed=0, perturbation=0.05, **kw):
    """Largest deviation between fixed points reached from perturbed starts (a uniqueness diagnostic)."""
    q = compute_q(angles.betas)
    base = solve_g_matrix(q, angles.Gamma, angles.B, **kw).G
    rng = np.random.default_rng(seed)
    spread = 0.0
    for _ in range(starts):
        noise = perturbation * (rng.standard_normal(base.shape) + 1j * rng.standard_normal(base.shape))
        G0 = _symmetrize(noninteracting_g(angles.B) + noise + noise.T)
        G = solve_g_matrix(q, angles.Gamma, G0=G0, **kw).G
        spread = max(spread, float(np.max(np.abs(G - base))))
    return spread


def save_g_csv(G, path):
    rows = ["j,k,re,im"]
    L = G.shape[0]
    rows += [f"{j},{k},{G[j, k].real:.17g},{G[j, k].imag:.17g}" for j in range(L) for k in range(L)]
    Path(path).write_text("\n".join(rows) + "\n")
