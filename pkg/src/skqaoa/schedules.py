"""Continuous annealing schedules and their discretisation into QAOA angles.

A schedule is a pair of real functions ``gamma(s)``, ``beta(s)`` on ``[0, 1]``;
the annealing Hamiltonian is ``H(u) = gamma(u) C + beta(u) B``. Two schedule
families are provided:

* :class:`FourierSchedule` -- type-IV sine (gamma) / cosine (beta) series, the
  representation used to extrapolate optimised angles to any depth;
* :class:`TabulatedSchedule` -- piecewise-linear interpolation of user samples.

Two discretisation rules turn a schedule into ``DiscreteAngles``:

* ``extrapolate`` (midpoint): ``gamma_t = gamma((t - 1/2)/p) / p``, same for beta;
* ``discretize_theory``: left-endpoint gamma on the ``1/(p + 1/2)`` grid scaled
  by ``1/(p + 1)``, and beta integrated over each grid cell.

Both produce ``p + 1`` gammas. The last one is a placeholder that the
statevector simulator never uses and that cancels out of every path-integral
energy formula; it is kept so the zero-based ``Gamma`` sequence of length
``2p + 2`` can always be formed.
"""

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

# p = 17 angles optimised for the infinite-size SK energy.
TABLE_I_GAMMAS = (
    0.1735, 0.3376, 0.3562, 0.3789, 0.3844, 0.3907, 0.3946, 0.4016, 0.4099,
    0.4217, 0.4370, 0.4565, 0.4816, 0.5138, 0.5530, 0.5962, 0.6429,
)  # fmt: skip
TABLE_I_BETAS = (
    0.6375, 0.5197, 0.4697, 0.4499, 0.4255, 0.4054, 0.3832, 0.3603, 0.3358,
    0.3092, 0.2807, 0.2501, 0.2171, 0.1816, 0.1426, 0.1001, 0.0536,
)  # fmt: skip


def _iv_basis(p0, points, kind):
    """``sin`` / ``cos`` of ``pi (k - 1/2) x`` for k = 1..p0 at the given points, shape (len(points), p0)."""
    k = np.arange(1, p0 + 1) - 0.5
    arg = np.pi * np.outer(np.asarray(points, dtype=float), k)
    return np.sin(arg) if kind == "sin" else np.cos(arg)


def fourier_analyze(gammas, betas):
    """Type-IV sine/cosine coefficients of an angle sequence.

    Inverts ``gamma_t = (1/p0) sum_k ghat_k sin(pi (k - 1/2)(t - 1/2)/p0)`` and
    the cosine analogue for beta. Both type-IV matrices square to ``p0/2``
    times the identity, which gives ``ghat = 2 S gamma`` directly.
    """
    gammas = np.asarray(gammas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    if gammas.shape != betas.shape or gammas.ndim != 1:
        raise ValueError(f"need equal-length 1-d angle lists, got {gammas.shape} and {betas.shape}")
    p0 = gammas.size
    if p0 < 1:
        raise ValueError("need at least one layer")
    grid = (np.arange(1, p0 + 1) - 0.5) / p0
    ghat = 2.0 * _iv_basis(p0, grid, "sin").T @ gammas
    bhat = 2.0 * _iv_basis(p0, grid, "cos").T @ betas
    return ghat, bhat


def fourier_synthesize(gamma_coeffs, beta_coeffs):
    """Angles at ``p0 = len(coeffs)`` layers from type-IV coefficients (inverse of :func:`fourier_analyze`)."""
    gamma_coeffs = np.asarray(gamma_coeffs, dtype=float)
    beta_coeffs = np.asarray(beta_coeffs, dtype=float)
    p0 = gamma_coeffs.size
    grid = (np.arange(1, p0 + 1) - 0.5) / p0
    return (
        _iv_basis(p0, grid, "sin") @ gamma_coeffs / p0,
        _iv_basis(p0, grid, "cos") @ beta_coeffs / p0,
    )


class Schedule:
    """Interface shared by schedule families.

    Subclasses implement ``gamma``, ``beta`` (vectorised over ``s``) and
    ``beta_integral(a, b)``; Lipschitz and maxima helpers have generic
    sampling-based defaults.
    """

    def gamma(self, s):
        raise NotImplementedError

    def beta(self, s):
        raise NotImplementedError

    def beta_integral(self, a, b):
        raise NotImplementedError

    def gamma_max(self, samples=4097):
        return float(np.max(np.abs(self.gamma(np.linspace(0.0, 1.0, samples)))))

    def beta_max(self, samples=4097):
        return float(np.max(np.abs(self.beta(np.linspace(0.0, 1.0, samples)))))

    def gamma_lipschitz(self):
        raise NotImplementedError


@dataclass(frozen=True)
class FourierSchedule(Schedule):
    """``gamma(s) = scale/p0 * sum_k ghat_k sin(pi (k - 1/2) s)``, beta with cosines.

    ``p0`` is the depth the coefficients were fitted at (``len(gamma_coeffs)``
    unless given). ``scale = delta * p`` rescales a reference schedule; with
    ``scale = p0`` the midpoint rule at ``p = p0`` returns the original angles.
    """

    gamma_coeffs: np.ndarray
    beta_coeffs: np.ndarray
    scale: float = 1.0
    p0: int | None = None

    def __post_init__(self):
        g = np.array(self.gamma_coeffs, dtype=float).reshape(-1)
        b = np.array(self.beta_coeffs, dtype=float).reshape(-1)
        g.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "gamma_coeffs", g)
        object.__setattr__(self, "beta_coeffs", b)
        if self.p0 is None:
            object.__setattr__(self, "p0", max(g.size, b.size, 1))

    @classmethod
    def from_angles(cls, gammas, betas, scale=None):
        ghat, bhat = fourier_analyze(gammas, betas)
        p0 = len(ghat)
        return cls(ghat, bhat, float(p0 if scale is None else scale), p0)

    @property
    def K(self):
        return max(self.gamma_coeffs.size, self.beta_coeffs.size)

    def rescaled(self, delta, p):
        """Schedule with ``scale = delta * p`` (same shape, new magnitude)."""
        return replace(self, scale=float(delta) * p)

    def gamma(self, s):
        s = np.asarray(s, dtype=float)
        out = _iv_basis(self.gamma_coeffs.size, s.reshape(-1), "sin") @ self.gamma_coeffs
        return (self.scale / self.p0) * out.reshape(s.shape)

    def beta(self, s):
        s = np.asarray(s, dtype=float)
        out = _iv_basis(self.beta_coeffs.size, s.reshape(-1), "cos") @ self.beta_coeffs
        return (self.scale / self.p0) * out.reshape(s.shape)

    def beta_integral(self, a, b):
        """Exact ``int_a^b beta(x) dx`` from the antiderivative of each cosine mode."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        w = np.pi * (np.arange(1, self.beta_coeffs.size + 1) - 0.5)
        fa = np.sin(np.multiply.outer(a, w)) / w
        fb = np.sin(np.multiply.outer(b, w)) / w
        return (self.scale / self.p0) * ((fb - fa) @ self.beta_coeffs)

    def gamma_lipschitz(self):
        """Coefficient bound ``scale * pi/p0 * sum_k (k - 1/2)|ghat_k|`` on the Lipschitz constant."""
        k = np.arange(1, self.gamma_coeffs.size + 1) - 0.5
        return float(self.scale * np.pi / self.p0 * np.sum(k * np.abs(self.gamma_coeffs)))


@dataclass(frozen=True)
class TabulatedSchedule(Schedule):
    """Piecewise-linear schedule through samples on an increasing grid covering [0, 1]."""

    grid: np.ndarray
    gamma_values: np.ndarray
    beta_values: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        arrs = [np.array(x, dtype=float).reshape(-1) for x in (self.grid, self.gamma_values, self.beta_values)]
        grid = arrs[0]
        if not (grid.size >= 2 and arrs[1].size == grid.size and arrs[2].size == grid.size):
            raise ValueError("grid and sample arrays must have equal length >= 2")
        if np.any(np.diff(grid) <= 0) or grid[0] > 0.0 or grid[-1] < 1.0:
            raise ValueError("grid must be strictly increasing and cover [0, 1]")
        for name, arr in zip(("grid", "gamma_values", "beta_values"), arrs):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def constant(cls, gamma, beta):
        return cls([0.0, 1.0], [gamma, gamma], [beta, beta])

    def gamma(self, s):
        return self.scale * np.interp(s, self.grid, self.gamma_values)

    def beta(self, s):
        return self.scale * np.interp(s, self.grid, self.beta_values)

    def _beta_primitive(self, x):
        x = np.asarray(x, dtype=float)
        g, v = self.grid, self.beta_values
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(g))))
        i = np.clip(np.searchsorted(g, x, side="right") - 1, 0, g.size - 2)
        dx = x - g[i]
        slope = (v[i + 1] - v[i]) / (g[i + 1] - g[i])
        return cum[i] + v[i] * dx + 0.5 * slope * dx**2

    def beta_integral(self, a, b):
        return self.scale * (self._beta_primitive(b) - self._beta_primitive(a))

    def gamma_lipschitz(self):
        return float(self.scale * np.max(np.abs(np.diff(self.gamma_values) / np.diff(self.grid))))


def table_one_schedule(delta=1.0, p=17):
    """Reference schedule from the p = 17 optimised angles, rescaled to ``scale = delta * p``."""
    return FourierSchedule.from_angles(TABLE_I_GAMMAS, TABLE_I_BETAS).rescaled(delta, p)


@dataclass(frozen=True)
class DiscreteAngles:
    """QAOA angles ``gamma_1..gamma_{p+1}`` (last one a placeholder) and ``beta_1..beta_p``.

    ``Gamma`` and ``B`` are the zero-based bookkeeping sequences of length
    ``2p + 2``:

    * ``Gamma = (-gamma_1, ..., -gamma_{p+1}, gamma_{p+1}, ..., gamma_1)``
    * ``B_r = sum_{s <= r} btilde_s`` with
      ``btilde = (0, -beta_1, ..., -beta_p, 0, beta_p, ..., beta_1)``.
    """

    gammas: np.ndarray
    betas: np.ndarray
    rule: str = "explicit"
    Gamma: np.ndarray | None = field(default=None, compare=False)
    B: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        g = np.array(self.gammas, dtype=float).reshape(-1)
        b = np.array(self.betas, dtype=float).reshape(-1)
        if g.size == b.size:  # no placeholder supplied
            g = np.append(g, 0.0)
        if g.size != b.size + 1:
            raise ValueError(f"need p betas and p or p + 1 gammas, got {g.size} and {b.size}")
        g.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)
        if self.Gamma is None or self.B is None:
            Gamma, B = _gamma_b(g, b)
            object.__setattr__(self, "Gamma", Gamma)
            object.__setattr__(self, "B", B)

    @property
    def p(self):
        return self.betas.size

    @property
    def layer_gammas(self):
        """``gamma_1..gamma_p`` -- the angles a p-layer circuit actually applies."""
        return self.gammas[:-1]

    @property
    def btilde(self):
        p = self.p
        return np.concatenate(([0.0], -self.betas, [0.0], self.betas[::-1])) if p else np.zeros(2)

    def with_placeholder(self, value):
        g = self.gammas.copy()
        g[-1] = value
        return DiscreteAngles(g, self.betas, self.rule)

    def scaled(self, factor):
        return DiscreteAngles(self.gammas * factor, self.betas * factor, self.rule)


def _gamma_b(gammas, betas):
    p = betas.size
    Gamma = np.concatenate((-gammas[: p + 1], gammas[: p + 1][::-1]))
    btilde = np.concatenate(([0.0], -betas, [0.0], betas[::-1]))
    B = np.cumsum(btilde)
    B[-1] = 0.0  # exact: btilde is antisymmetric
    Gamma.flags.writeable = False
    B.flags.writeable = False
    return Gamma, B


def build_gamma_b(angles):
    """Return ``angles`` with ``Gamma`` and ``B`` recomputed from its gammas and betas."""
    Gamma, B = _gamma_b(angles.gammas, angles.betas)
    return replace(angles, Gamma=Gamma, B=B)


def extrapolate(schedule, p):
    """Midpoint rule ``gamma_t = gamma((t - 1/2)/p)/p``, ``beta_t = beta((t - 1/2)/p)/p``.

    The ``gamma_{p+1}`` placeholder uses the same rule with ``s`` clamped to 1.
    """
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    s = (np.arange(1, p + 2) - 0.5) / p
    gammas = schedule.gamma(np.minimum(s, 1.0)) / p
    betas = schedule.beta(s[:p]) / p
    return DiscreteAngles(gammas, betas, "midpoint")


def discretize_theory(schedule, p):
    """Left-endpoint gamma and cell-integrated beta on the ``1/(p + 1/2)`` grid."""
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    h = 1.0 / (p + 0.5)
    t = np.arange(1, p + 2)
    gammas = schedule.gamma((t - 1) * h) / (p + 1)
    betas = schedule.beta_integral((t[:p] - 1) * h, t[:p] * h)
    return DiscreteAngles(gammas, betas, "theory")


DISCRETIZATIONS = {"midpoint": extrapolate, "theory": discretize_theory}


def discretize(schedule, p, rule):
    """Dispatch to a named discretisation rule; the rule is never implied."""
    try:
        return DISCRETIZATIONS[rule](schedule, p)
    except KeyError:
        raise ValueError(f"unknown discretization rule {rule!r}; choose from {sorted(DISCRETIZATIONS)}") from None


def total_angles(angles):
    """``(sum_t |gamma_t|, sum_t |beta_t|)`` over the p applied layers."""
    return float(np.sum(np.abs(angles.layer_gammas))), float(np.sum(np.abs(angles.betas)))


def save_schedule(schedule, path):
    """Write a :class:`FourierSchedule` in the plain-text ``sched v1`` format."""
    if not isinstance(schedule, FourierSchedule):
        raise TypeError("only Fourier schedules have a file format")
    fmt = lambda xs: " ".join(f"{x:.17g}" for x in xs)  # noqa: E731
    text = "\n".join(
        [
            "sched v1",
            f"p0 {schedule.p0}",
            f"scale {schedule.scale:.17g}",
            f"gamma {fmt(schedule.gamma_coeffs)}",
            f"beta {fmt(schedule.beta_coeffs)}",
        ]
    )
    Path(path).write_text(text + "\n")


def load_schedule(path):
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or lines[0] != ["sched", "v1"]:
        raise ValueError(f"{path}: not a 'sched v1' file")
    fields = {ln[0]: ln[1:] for ln in lines[1:]}
    try:
        return FourierSchedule(
            [float(x) for x in fields["gamma"]],
            [float(x) for x in fields["beta"]],
            float(fields["scale"][0]),
            int(fields["p0"][0]),
        )
    except KeyError as exc:
        raise ValueError(f"{path}: missing field {exc}") from None


def angles_to_csv(angles, path):
    """Columns ``t,gamma,beta`` for the p applied layers."""
    rows = ["t,gamma,beta"]
    for t, (g, b) in enumerate(zip(angles.layer_gammas, angles.betas), start=1):
        rows.append(f"{t},{g:.17g},{b:.17g}")
    Path(path).write_text("\n".join(rows) + "\n")
