"""Batch sweeps comparing QAOA with annealing under shared schedules.

Every sweep reuses the same instance seeds ``base_seed .. base_seed + instances - 1``
across ``p`` and across the two simulators (paired design). Work is split into
independent per-instance tasks; set ``SKQAOA_WORKERS`` to run them in a
process pool. Results are merged by key with compensated summation, so the
output does not depend on the worker count.

Energies are densities ``<C>/n``. With the reference schedule both algorithms
drive ``<C>`` upward, so approximation ratios are taken relative to the
maximum of ``C``.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .annealing import annealing_energy
from .schedules import discretize, table_one_schedule
from .sk import cost_values, max_energy, sample_instance
from .statevector import qaoa_energy

CSV_HEADER = "experiment,p,n,delta,T,metric,value,stderr,instances,base_seed"
DEGENERATE_GAP = 1e-9


class ConfigError(ValueError):
    """Invalid sweep configuration."""


@dataclass(frozen=True)
class ExperimentRecord:
    experiment: str
    p: int
    n: int
    delta: float
    T: float
    metric: str
    value: float
    stderr: float
    instances: int
    base_seed: int

    @property
    def key(self):
        return (self.experiment, self.p, self.n, self.delta, self.metric)

    def csv_row(self):
        return (
            f"{self.experiment},{self.p},{self.n},{_fmt(self.delta)},{_fmt(self.T)},{self.metric},"
            f"{_fmt(self.value)},{_fmt(self.stderr)},{self.instances},{self.base_seed}"
        )


def _fmt(x):
    return repr(float(x))


@dataclass
class SweepConfig:
    ps: list = field(default_factory=lambda: [4, 8, 16, 32, 64])
    ns: list = field(default_factory=lambda: [8, 10, 12, 14])
    deltas: list = field(default_factory=lambda: [0.8, 1.0, 1.2])
    T: float = 17.0
    instances: int = 100
    base_seed: int = 0
    tol: float = 1e-8
    rule: str = "midpoint"
    workers: int | None = None

    def validate(self):
        if not self.ps or any(int(p) < 1 for p in self.ps):
            raise ConfigError("ps must be a nonempty list of positive integers")
        if not self.ns or any(not 2 <= int(n) <= 24 for n in self.ns):
            raise ConfigError("ns must be a nonempty list of integers in [2, 24]")
        if any(d < 0 for d in self.deltas):
            raise ConfigError("deltas must be nonnegative")
        if self.T < 0:
            raise ConfigError("T must be nonnegative")
        if self.instances < 2:
            raise ConfigError("need at least two instances per cell")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.rule not in ("midpoint", "theory"):
            raise ConfigError(f"unknown rule {self.rule!r}")
        return self


_LIST_KEYS = {"ps": int, "ns": int, "deltas": float}
_SCALAR_KEYS = {"T": float, "instances": int, "base_seed": int, "tol": float, "rule": str, "workers": int}


def parse_config(text, overrides=None):
    """Build a :class:`SweepConfig` from ``key = value`` lines; ``overrides`` (a dict) wins."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        values[k] = v
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    cfg = SweepConfig()
    for k, v in values.items():
        try:
            if k in _LIST_KEYS:
                items = v if isinstance(v, (list, tuple)) else str(v).replace(",", " ").split()
                setattr(cfg, k, [_LIST_KEYS[k](x) for x in items])
            elif k in _SCALAR_KEYS:
                setattr(cfg, k, _SCALAR_KEYS[k](v))
            else:
                raise ConfigError(f"unknown config key {k!r}")
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {k}: {v!r}") from None
    return cfg.validate()


def load_config(path, overrides=None):
    return parse_config(Path(path).read_text() if path else "", overrides)


def _workers(cfg):
    if cfg.workers is not None:
        return max(1, cfg.workers)
    return max(1, int(os.environ.get("SKQAOA_WORKERS", "1")))


def _run_tasks(fn, tasks, workers):
    if workers <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


def _mean_stderr(vals):
    vals = np.asarray(vals, dtype=float)
    mean = math.fsum(vals) / vals.size
    if vals.size < 2:
        return mean, float("nan")
    var = math.fsum((vals - mean) ** 2) / (vals.size - 1)
    return mean, math.sqrt(var / vals.size)


def _constant_time_task(args):
    n, seed, T, ps, tol, rule = args
    inst = sample_instance(n, seed)
    costs = cost_values(inst)
    sched = table_one_schedule(T / ps[0], ps[0])  # scale = T for every p
    e_inf = annealing_energy(inst, sched, tol, costs)
    e_p = [qaoa_energy(inst, discretize(sched, p, rule), costs) for p in ps]
    return e_inf, e_p


def run_constant_time_sweep(cfg, experiment="constant_time"):
    """QAOA vs annealing error at fixed total time ``T = delta * p``.

    Emits per ``(n, p)``: ``qaoa_energy``, ``annealing_energy`` and
    ``abs_error = |mean(nu_p) - mean(nu_inf)|`` with the paired standard error.
    """
    cfg.validate()
    ps = [int(p) for p in cfg.ps]
    records = []
    for n in cfg.ns:
        tasks = [(int(n), cfg.base_seed + i, cfg.T, ps, cfg.tol, cfg.rule) for i in range(cfg.instances)]
        results = _run_tasks(_constant_time_task, tasks, _workers(cfg))
        e_inf = np.array([r[0] for r in results])
        e_p = np.array([r[1] for r in results])  # (instances, len(ps))
        ann_mean, ann_se = _mean_stderr(e_inf)
        for j, p in enumerate(ps):
            common = dict(experiment=experiment, p=p, n=int(n), delta=cfg.T / p, T=cfg.T,
                          instances=cfg.instances, base_seed=cfg.base_seed)  # fmt: skip
            q_mean, q_se = _mean_stderr(e_p[:, j])
            d_mean, d_se = _mean_stderr(e_p[:, j] - e_inf)
            records += [
                ExperimentRecord(metric="qaoa_energy", value=q_mean, stderr=q_se, **common),
                ExperimentRecord(metric="annealing_energy", value=ann_mean, stderr=ann_se, **common),
                ExperimentRecord(metric="abs_error", value=abs(d_mean), stderr=d_se, **common),
            ]
    return records


def default_qaoa(inst, costs, delta, p, rule, tol):
    return qaoa_energy(inst, discretize(table_one_schedule(delta, p), p, rule), costs)


def default_annealing(inst, costs, delta, p, rule, tol):
    return annealing_energy(inst, table_one_schedule(delta, p), tol, costs)


def _delta_task(args):
    n, seed, delta, ps, tol, rule, qaoa_fn, qa_fn = args
    inst = sample_instance(n, seed)
    costs = cost_values(inst)
    top, _ = max_energy(costs)
    top /= n
    ar_qaoa = [qaoa_fn(inst, costs, delta, p, rule, tol) / top for p in ps]
    ar_qa = [qa_fn(inst, costs, delta, p, rule, tol) / top for p in ps]
    return ar_qaoa, ar_qa


def run_delta_sweep(cfg, experiment="delta", qaoa_fn=default_qaoa, qa_fn=default_annealing):
    """Approximation ratios of QAOA and annealing at ``T = delta * p``, and their relative residual.

    Per ``(n, delta, p)`` emits ``ar_qaoa``, ``ar_qa``, ``residual =
    (AR_QAOA - AR_QA) / (1 - AR_QA)`` and ``degenerate`` (1 when
    ``1 - AR_QA < 1e-9``, in which case the residual is NaN).
    The two simulator slots are pluggable for testing.
    """
    cfg.validate()
    ps = [int(p) for p in cfg.ps]
    records = []
    for n in cfg.ns:
        for delta in cfg.deltas:
            tasks = [
                (int(n), cfg.base_seed + i, float(delta), ps, cfg.tol, cfg.rule, qaoa_fn, qa_fn)
                for i in range(cfg.instances)
            ]
            results = _run_tasks(_delta_task, tasks, _workers(cfg))
            ar_qaoa = np.array([r[0] for r in results])
            ar_qa = np.array([r[1] for r in results])
            for j, p in enumerate(ps):
                common = dict(experiment=experiment, p=p, n=int(n), delta=float(delta), T=float(delta) * p,
                              instances=cfg.instances, base_seed=cfg.base_seed)  # fmt: skip
                a_mean, a_se = _mean_stderr(ar_qaoa[:, j])
                b_mean, b_se = _mean_stderr(ar_qa[:, j])
                gap = 1.0 - b_mean
                degenerate = abs(gap) < DEGENERATE_GAP
                if degenerate:
                    res, res_se = float("nan"), float("nan")
                else:
                    res = (a_mean - b_mean) / gap
                    _, diff_se = _mean_stderr(ar_qaoa[:, j] - ar_qa[:, j])
                    res_se = diff_se / abs(gap)
                records += [
                    ExperimentRecord(metric="ar_qaoa", value=a_mean, stderr=a_se, **common),
                    ExperimentRecord(metric="ar_qa", value=b_mean, stderr=b_se, **common),
                    ExperimentRecord(metric="residual", value=res, stderr=res_se, **common),
                    ExperimentRecord(metric="degenerate", value=float(degenerate), stderr=0.0, **common),
                ]
    return records


def fit_decay_exponent(ps, errors):
    """Least-squares fit of ``log(error)`` against ``log(p)``; returns ``(slope, intercept, r2)``."""
    ps = np.asarray(ps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if ps.size != errors.size or ps.size < 3:
        raise ValueError("need at least three (p, error) points")
    if np.any(errors <= 0) or np.any(ps <= 0):
        raise ValueError("decay fit needs positive p and error values")
    x, y = np.log(ps), np.log(errors)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def select(records, **match):
    """Records whose fields equal every ``match`` item."""
    return [r for r in records if all(getattr(r, k) == v for k, v in match.items())]


def records_to_csv(records):
    rows = sorted(records, key=lambda r: (r.experiment, r.metric, r.n, r.p, r.delta))
    return "\n".join([CSV_HEADER] + [r.csv_row() for r in rows]) + "\n"


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigError(f"{path}: unexpected CSV header")
    out = []
    for line in lines[1:]:
        e, p, n, d, T, m, v, se, inst, seed = line.split(",")
        out.append(ExperimentRecord(e, int(p), int(n), float(d), float(T), m, float(v), float(se), int(inst), int(seed)))
    return out


def emit_outputs(records, csv_path=None, svg_path=None, metric=None, log=None):
    """Write the CSV table and an SVG plot of ``metric`` vs ``p``, one series per ``(n, delta)``.

    ``metric`` defaults to ``abs_error`` when present, else ``residual``;
    ``log`` defaults to log-log for ``abs_error`` and linear otherwise.
    """
    from .svg import line_plot

    if csv_path is not None:
        Path(csv_path).write_text(records_to_csv(records))
    if svg_path is not None:
        metrics = {r.metric for r in records}
        if metric is None:
            metric = "abs_error" if "abs_error" in metrics else "residual"
        if log is None:
            log = metric == "abs_error"
        series = {}
        for r in sorted(records, key=lambda r: (r.n, r.delta, r.p)):
            if r.metric != metric or not math.isfinite(r.value) or (log and r.value <= 0):
                continue
            label = f"n={r.n}" if metric == "abs_error" else f"n={r.n}, delta={r.delta:g}"
            series.setdefault(label, []).append((r.p, r.value))
        Path(svg_path).write_text(line_plot(series, xlabel="p", ylabel=metric, log=log))
