"""Sweep orchestration: config parsing, deterministic parallel Monte Carlo,
theory evaluation, and CSV emission.

Every (point, block) task derives its randomness from
stream(master_seed, kind, point, sub, block), and tasks are reduced in a
fixed order, so a sweep's numbers are identical across reruns and across
worker counts. Only the wall_s column is timing and therefore excluded from
determinism comparisons.
"""

from __future__ import annotations

import math
import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import kernels
from .benchmarks import exact_noisemod_cond_bep, noisemod_cond_bep
from .channel import FadingModel
from .core_stats import stream
from .downlink import (
    cond_bep_u1_downlink,
    cond_bep_u2_downlink,
    derive_downlink_params,
    derive_downlink_params_from_noise,
    exact_cond_bep_u2_downlink,
)
from .theory import unconditional_bep
from .uplink import (
    cond_bep_u1_uplink,
    cond_bep_u2_uplink,
    derive_uplink_params,
    exact_cond_bep_u2_uplink,
)

SCHEMES = ("uplink-ndnoma", "downlink-ndnoma", "oma-noisemod", "pdnoma-comparison")

# spawn-key kind tags
_KIND_SIM = 0
_KIND_THEORY = 1

_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


class ConfigError(ValueError):
    """Invalid sweep configuration (maps to CLI exit code 2)."""


@dataclass(frozen=True)
class SweepConfig:
    scheme: str
    k_db_list: tuple = (0.0, 5.0, 10.0)
    n_list: tuple = (50, 100)
    delta_db_grid: tuple = (-40.0, -30.0, -20.0, -10.0, -5.0, 0.0, 5.0)
    gamma_bar_db_grid: tuple = tuple(np.linspace(0.0, 30.0, 10))
    alpha: float = 10.0
    p_dbm: float = 30.0
    beta: float = 0.01
    psi: float = 0.5
    rho_far: float = 0.8
    bits_per_point: int = 100_000
    j_points: int = 100_000
    master_seed: int = 1234
    workers: int = 1
    block_size: int = 20_000
    threshold_mode: str = "clt"
    theory_mode: str = "exact"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.scheme == "pdnoma-comparison":
            if not self.gamma_bar_db_grid:
                raise ConfigError("gamma_bar_db_grid must be non-empty")
        else:
            if not self.k_db_list or not self.n_list or not self.delta_db_grid:
                raise ConfigError("k_db_list, n_list and delta_db_grid must be non-empty")
        if self.bits_per_point < 10_000:
            raise ConfigError("bits_per_point must be >= 10000 for CI validity")
        if self.j_points < 1000:
            raise ConfigError("j_points must be >= 1000")
        if self.block_size < 1:
            raise ConfigError("block_size must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.threshold_mode not in ("clt", "static"):
            raise ConfigError("threshold_mode must be 'clt' or 'static'")
        if self.theory_mode not in ("exact", "clt"):
            raise ConfigError("theory_mode must be 'exact' or 'clt'")
        if self.scheme == "oma-noisemod" and any(n % 2 for n in self.n_list):
            raise ConfigError("oma-noisemod needs even N for the N/2 split")

    @property
    def p_total(self) -> float:
        return dbm_to_watts(self.p_dbm)


@dataclass(frozen=True)
class SweepResult:
    """One (point, user) record: simulation and theory side by side."""

    scheme: str
    user: str
    k_db: float
    n: int
    x_db: float
    x_kind: str
    ber_sim: float
    ci_halfwidth_99: float
    bep_theory: float
    bep_std_error: float
    bits: int
    wall_seconds: float


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def binomial_ci99(errors: int, trials: int) -> float:
    """Normal-approximation 99% half-width; rule-of-three bound when the
    error count is degenerate (0 or all)."""
    if errors == 0 or errors == trials:
        return 3.0 / trials
    p = errors / trials
    return _Z99 * math.sqrt(p * (1.0 - p) / trials)


# ---------------------------------------------------------------------------
# config file format: one `key = value` per line, lists comma-separated,
# `#` starts a comment
# ---------------------------------------------------------------------------

_LIST_FLOAT_KEYS = {"k_db_list", "delta_db_grid", "gamma_bar_db_grid"}
_LIST_INT_KEYS = {"n_list"}
_FLOAT_KEYS = {"alpha", "p_dbm", "beta", "psi", "rho_far"}
_INT_KEYS = {"bits_per_point", "j_points", "master_seed", "workers", "block_size"}
_STR_KEYS = {"scheme", "threshold_mode", "theory_mode"}


def parse_config_text(text: str) -> SweepConfig:
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key in _LIST_FLOAT_KEYS:
                fields[key] = tuple(float(v) for v in value.split(","))
            elif key in _LIST_INT_KEYS:
                fields[key] = tuple(int(v) for v in value.split(","))
            elif key in _FLOAT_KEYS:
                fields[key] = float(value)
            elif key in _INT_KEYS:
                fields[key] = int(value)
            elif key in _STR_KEYS:
                fields[key] = value
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    if "scheme" not in fields:
        raise ConfigError("config must set 'scheme'")
    return SweepConfig(**fields)


def load_config(path: str) -> SweepConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


# ---------------------------------------------------------------------------
# sweep execution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Point:
    index: int
    k_db: float
    n: int
    x_db: float


def _points(cfg: SweepConfig):
    pts = []
    if cfg.scheme == "pdnoma-comparison":
        for x in cfg.gamma_bar_db_grid:
            pts.append(_Point(len(pts), 0.0, cfg.n_list[0] if cfg.n_list else 150, x))
    else:
        for k_db in cfg.k_db_list:
            for n in cfg.n_list:
                for x in cfg.delta_db_grid:
                    pts.append(_Point(len(pts), k_db, n, x))
    return pts


def _blocks(total_bits: int, block_size: int):
    sizes = []
    done = 0
    while done < total_bits:
        m = min(block_size, total_bits - done)
        sizes.append(m)
        done += m
    return sizes


def _ndnoma_params(cfg: SweepConfig, point: _Point):
    delta = db_to_linear(point.x_db)
    if cfg.scheme == "uplink-ndnoma":
        return derive_uplink_params(cfg.p_total, cfg.beta, cfg.alpha, delta, point.n)
    return derive_downlink_params(cfg.p_total, cfg.psi, cfg.alpha, delta, point.n)


def _run_task(cfg: SweepConfig, task):
    """One unit of parallel work; returns (task, payload, seconds)."""
    kind, point_idx, block_idx, n_items = task
    t0 = time.perf_counter()
    point = _points(cfg)[point_idx]
    fading = FadingModel.from_k_db(point.k_db)

    if kind == _KIND_SIM:
        if cfg.scheme == "uplink-ndnoma":
            rng = stream(cfg.master_seed, _KIND_SIM, point_idx, 0, block_idx)
            payload = kernels.uplink_block_errors(
                _ndnoma_params(cfg, point), fading, n_items, rng,
                threshold_mode=cfg.threshold_mode)
        elif cfg.scheme == "downlink-ndnoma":
            rng = stream(cfg.master_seed, _KIND_SIM, point_idx, 0, block_idx)
            payload = kernels.downlink_block_errors(
                _ndnoma_params(cfg, point), fading, n_items, rng,
                threshold_mode=cfg.threshold_mode)
        elif cfg.scheme == "oma-noisemod":
            params = derive_uplink_params(
                cfg.p_total, cfg.beta, cfg.alpha, db_to_linear(point.x_db), point.n)
            errs = []
            for user in (0, 1):
                rng = stream(cfg.master_seed, _KIND_SIM, point_idx, user, block_idx)
                errs.append(kernels.noisemod_block_errors(
                    params.sigma2_low_sq, params.sigma2_high_sq,
                    params.sigma_w_sq, point.n // 2, fading, n_items, rng))
            payload = tuple(errs)
        else:  # pdnoma-comparison, equal-noise rule: sigma_w^2 = 1/gamma_bar
            sigma_w_sq = 1.0 / db_to_linear(point.x_db)
            nd = derive_downlink_params_from_noise(
                1.0, cfg.psi, cfg.alpha, sigma_w_sq, point.n)
            rng_nd = stream(cfg.master_seed, _KIND_SIM, point_idx, 0, block_idx)
            rng_pd = stream(cfg.master_seed, _KIND_SIM, point_idx, 1, block_idx)
            e_nd1, e_nd2, _ = kernels.downlink_block_errors(
                nd, fading, n_items, rng_nd, threshold_mode=cfg.threshold_mode)
            e_near, e_far = kernels.pdnoma_block_errors(
                cfg.rho_far, 1.0, sigma_w_sq, fading, n_items, rng_pd)
            payload = (e_nd1, e_nd2, e_near, e_far)
    else:  # _KIND_THEORY
        payload = _theory_for_point(cfg, point)

    return task, payload, time.perf_counter() - t0


def _theory_for_point(cfg: SweepConfig, point: _Point):
    """Unconditional theory pair for one point.

    theory_mode picks the variance-detector evaluation: "exact" uses the
    generalized chi-square law of the sample variance (no model error, the
    default), "clt" uses the Gaussian-moment closed form. The mean detector
    is exact either way.
    """
    fading = FadingModel.from_k_db(point.k_db)
    point_idx = point.index
    exact = cfg.theory_mode == "exact"

    def run(user_idx, fn, arity):
        rng = stream(cfg.master_seed, _KIND_THEORY, point_idx, user_idx, 0)
        return unconditional_bep(fn, fading, arity, cfg.j_points, rng)

    if cfg.scheme == "uplink-ndnoma":
        params = _ndnoma_params(cfg, point)
        u2 = exact_cond_bep_u2_uplink if exact else cond_bep_u2_uplink
        return (
            run(0, lambda h1, h2: cond_bep_u1_uplink(h1, h2, params), 2),
            run(1, lambda h1, h2: u2(h1, h2, params), 2),
        )
    if cfg.scheme == "oma-noisemod":
        params = derive_uplink_params(
            cfg.p_total, cfg.beta, cfg.alpha, db_to_linear(point.x_db), point.n)
        bep = exact_noisemod_cond_bep if exact else noisemod_cond_bep
        fn = lambda h: bep(h, params.sigma2_low_sq, params.sigma2_high_sq,
                           params.sigma_w_sq, point.n // 2)
        return (run(0, fn, 1), run(1, fn, 1))
    # downlink-ndnoma, and the ND side of pdnoma-comparison (no analytic
    # PD-NOMA expression is part of this artifact; its rows carry NaN)
    if cfg.scheme == "downlink-ndnoma":
        params = _ndnoma_params(cfg, point)
    else:
        params = derive_downlink_params_from_noise(
            1.0, cfg.psi, cfg.alpha, 1.0 / db_to_linear(point.x_db), point.n)
    u2 = exact_cond_bep_u2_downlink if exact else cond_bep_u2_downlink
    return (
        run(0, lambda h: cond_bep_u1_downlink(h, params), 1),
        run(1, lambda h: u2(h, params), 1),
    )


def resolve_workers(cli_workers=None, config_workers=None) -> int:
    """Precedence: explicit flag, then NDNOMA_WORKERS, then config, then 1."""
    if cli_workers is not None:
        return int(cli_workers)
    env = os.environ.get("NDNOMA_WORKERS", "").strip()
    if env:
        return int(env)
    if config_workers is not None:
        return int(config_workers)
    return 1


def run_sweep(cfg: SweepConfig, workers: int | None = None,
              zero_wall: bool = False) -> list:
    """Execute the configured sweep; returns one SweepResult per (point, user).

    Deterministic for a fixed (config, master_seed): results are identical
    across runs and worker counts, except the wall_seconds timing field
    (zero_wall forces that to 0.0 for byte-exact comparisons).
    """
    workers = cfg.workers if workers is None else workers
    points = _points(cfg)
    block_sizes = _blocks(cfg.bits_per_point, cfg.block_size)

    tasks = []
    for point in points:
        for b_idx, b_size in enumerate(block_sizes):
            tasks.append((_KIND_SIM, point.index, b_idx, b_size))
        tasks.append((_KIND_THEORY, point.index, 0, cfg.j_points))

    if workers > 1:
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            outcomes = list(pool.map(partial(_run_task, cfg), tasks, chunksize=1))
    else:
        outcomes = [_run_task(cfg, task) for task in tasks]

    # deterministic reduction: accumulate in task order
    sim_counts: dict = {}
    theory: dict = {}
    walls: dict = {}
    for task, payload, seconds in outcomes:
        kind, point_idx, _, _ = task
        walls[point_idx] = walls.get(point_idx, 0.0) + seconds
        if kind == _KIND_SIM:
            acc = sim_counts.get(point_idx)
            sim_counts[point_idx] = payload if acc is None else tuple(
                a + b for a, b in zip(acc, payload))
        else:
            theory[point_idx] = payload

    results = []
    bits = cfg.bits_per_point
    x_kind = "gamma_bar_db" if cfg.scheme == "pdnoma-comparison" else "delta_db"
    nan = float("nan")
    for point in points:
        counts = sim_counts[point.index]
        th1, th2 = theory[point.index]
        wall = 0.0 if zero_wall else walls[point.index]

        def row(user, errors, trials, theory_value, theory_se):
            return SweepResult(
                scheme=cfg.scheme, user=user, k_db=point.k_db, n=point.n,
                x_db=point.x_db, x_kind=x_kind,
                ber_sim=errors / trials,
                ci_halfwidth_99=binomial_ci99(errors, trials),
                bep_theory=theory_value, bep_std_error=theory_se,
                bits=trials, wall_seconds=wall)

        if cfg.scheme == "pdnoma-comparison":
            e_nd1, e_nd2, e_near, e_far = counts
            # avg rows pool both users' bits, so their bits column doubles
            nd_avg_se = 0.5 * math.hypot(th1.std_error, th2.std_error)
            results.append(row("nd-u1", e_nd1, bits, th1.value, th1.std_error))
            results.append(row("nd-u2", e_nd2, bits, th2.value, th2.std_error))
            results.append(row("nd-avg", e_nd1 + e_nd2, 2 * bits,
                               0.5 * (th1.value + th2.value), nd_avg_se))
            results.append(row("pd-near", e_near, bits, nan, nan))
            results.append(row("pd-far", e_far, bits, nan, nan))
            results.append(row("pd-avg", e_near + e_far, 2 * bits, nan, nan))
        else:
            results.append(row("u1", counts[0], bits, th1.value, th1.std_error))
            results.append(row("u2", counts[1], bits, th2.value, th2.std_error))
    return results


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

CSV_HEADER = "scheme,user,k_db,n,x_db,x_kind,ber_sim,ci99,bep_theory,bep_se,bits,wall_s"


def _fmt(x: float) -> str:
    # repr of a Python float is the shortest exact round-trip decimal
    return repr(float(x))


def results_to_csv_text(results) -> str:
    lines = [CSV_HEADER]
    for r in results:
        lines.append(",".join([
            r.scheme, r.user, _fmt(r.k_db), str(int(r.n)), _fmt(r.x_db),
            r.x_kind, _fmt(r.ber_sim), _fmt(r.ci_halfwidth_99),
            _fmt(r.bep_theory), _fmt(r.bep_std_error), str(int(r.bits)),
            _fmt(r.wall_seconds),
        ]))
    return "\n".join(lines) + "\n"


def write_csv(results, path: str) -> None:
    """Write sweep results; refuses to create a file for empty results."""
    if not results:
        raise ValueError("no results to write")
    text = results_to_csv_text(results)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path: str) -> list:
    """Parse a harness CSV back into SweepResult rows (exact round-trip)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header in {path}")
    out = []
    for line in lines[1:]:
        f = line.split(",")
        out.append(SweepResult(
            scheme=f[0], user=f[1], k_db=float(f[2]), n=int(f[3]),
            x_db=float(f[4]), x_kind=f[5], ber_sim=float(f[6]),
            ci_halfwidth_99=float(f[7]), bep_theory=float(f[8]),
            bep_std_error=float(f[9]), bits=int(f[10]),
            wall_seconds=float(f[11])))
    return out
