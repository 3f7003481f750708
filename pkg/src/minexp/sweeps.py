"""Monte-Carlo sweep harness: recovery-rate and noise-robustness curves.

Determinism contract: the per-trial random stream is seeded by
(seed, k, trial_index), so re-partitioning the sparsity grid or running
points concurrently never changes any individual trial. With a fixed config
the emitted CSV is byte-identical across runs, except for the
mean_runtime_ms column (wall time is inherently nondeterministic).

Worker count comes from the MINEXP_WORKERS environment variable (default 1,
serial); points of the sparsity grid are distributed across processes.
"""

from __future__ import annotations

import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .errors import (
    DegenerateSplitError,
    InsufficientZerosError,
    MinexpError,
    RankDeficientError,
)
from .graphs import MeasurementMatrix, perturb, random_left_regular
from .recovery import (
    SUCCESS_TOL,
    NoiseModel,
    l1_min_nonneg,
    noisy_recovery,
    random_sparse_signal,
    reverse_expansion_recovery,
)

ALGORITHMS = ("l1", "alg1", "alg2-l1", "alg2-l2")
SER_CAP_DB = 160.0


@dataclass
class SweepConfig:
    n: int
    m: int
    d: int
    epsilon1: float
    sparsity_grid: list
    trials_per_point: int
    seed: int
    algorithm: str
    noise_snr_grid: list | None = None
    with_repetition: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be at least 1")
        if any(k > self.n for k in self.sparsity_grid):
            raise ValueError("sparsity grid values must not exceed n")


@dataclass
class SweepRow:
    k: int
    success_fraction: float
    mean_ser_db: float
    mean_runtime_ms: float
    snr_db: float | None = None


def parse_config(text: str) -> SweepConfig:
    """Parse 'key = value' lines; unknown keys are rejected."""
    known = {f.name for f in fields(SweepConfig)}
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key = key.strip()
        value = value.strip()
        if key not in known:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        raw[key] = value

    def intlist(s):
        return [int(v) for v in s.split(",") if v.strip()]

    def floatlist(s):
        return [float(v) for v in s.split(",") if v.strip()]

    try:
        cfg = SweepConfig(
            n=int(raw["n"]),
            m=int(raw["m"]),
            d=int(raw["d"]),
            epsilon1=float(raw.get("epsilon1", "0.1")),
            sparsity_grid=intlist(raw["sparsity_grid"]),
            trials_per_point=int(raw["trials_per_point"]),
            seed=int(raw["seed"]),
            algorithm=raw["algorithm"],
            noise_snr_grid=floatlist(raw["noise_snr_grid"]) if "noise_snr_grid" in raw else None,
            with_repetition=raw.get("with_repetition", "false").lower() in ("1", "true", "yes"),
        )
    except KeyError as exc:
        raise ValueError(f"config missing required key {exc.args[0]!r}") from None
    return cfg


def build_matrix(cfg: SweepConfig) -> MeasurementMatrix:
    """The sweep's measurement matrix; epsilon1 = 0 keeps the 0-1 adjacency."""
    g = random_left_regular(cfg.n, cfg.m, cfg.d, cfg.seed,
                            with_repetition=cfg.with_repetition)
    if cfg.epsilon1 > 0:
        return perturb(g, cfg.epsilon1, cfg.seed + 1)
    return MeasurementMatrix.unperturbed(g)


def _trial_rng(seed: int, k: int, trial: int, extra: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(k), int(trial), int(extra)]))


def _run_algorithm(a: MeasurementMatrix, algorithm: str, y: np.ndarray,
                   k: int, x_true: np.ndarray):
    if algorithm == "l1":
        return l1_min_nonneg(a, y, x_true=x_true)
    if algorithm == "alg1":
        return reverse_expansion_recovery(a, y, k, x_true=x_true)
    norm = "l1" if algorithm == "alg2-l1" else "l2"
    return noisy_recovery(a, y, k, norm_choice=norm, x_true=x_true)


def _ser_db(x: np.ndarray, estimate: np.ndarray) -> float:
    err = float(np.linalg.norm(x - estimate) ** 2)
    sig = float(np.linalg.norm(x) ** 2)
    if err == 0.0 or (sig > 0 and 10.0 * np.log10(sig / err) > SER_CAP_DB):
        return SER_CAP_DB
    if sig == 0.0:
        return SER_CAP_DB
    return float(10.0 * np.log10(sig / err))


def _recovery_point(a: MeasurementMatrix, cfg: SweepConfig, k: int) -> SweepRow:
    successes = 0
    sers = []
    elapsed = 0.0
    for trial in range(cfg.trials_per_point):
        rng = _trial_rng(cfg.seed, k, trial)
        x = random_sparse_signal(cfg.n, k, rng).entries
        y = a.dense @ x
        t0 = time.perf_counter()
        try:
            rep = _run_algorithm(a, cfg.algorithm, y, k, x)
            estimate = rep.estimate
        except (RankDeficientError, InsufficientZerosError, DegenerateSplitError, MinexpError):
            estimate = np.zeros(cfg.n)
        elapsed += time.perf_counter() - t0
        if np.abs(estimate - x).max() <= SUCCESS_TOL:
            successes += 1
        sers.append(_ser_db(x, estimate))
    return SweepRow(k=k, success_fraction=successes / cfg.trials_per_point,
                    mean_ser_db=float(np.mean(sers)),
                    mean_runtime_ms=1000.0 * elapsed / cfg.trials_per_point)


def _noise_point(a: MeasurementMatrix, cfg: SweepConfig, k: int, snr_db: float) -> SweepRow:
    successes = 0
    sers = []
    elapsed = 0.0
    for trial in range(cfg.trials_per_point):
        rng = _trial_rng(cfg.seed, k, trial, extra=int(round(snr_db * 1000)))
        x = random_sparse_signal(cfg.n, k, rng).entries
        clean = a.dense @ x
        direction = rng.normal(size=cfg.m)
        target = float(np.linalg.norm(clean)) * 10.0 ** (-snr_db / 20.0)
        nrm = float(np.linalg.norm(direction))
        if nrm > 0 and target > 0:
            noise = NoiseModel.additive(direction * (target / nrm))
        else:
            noise = NoiseModel.none(cfg.m)
        y = noise.apply(clean)
        t0 = time.perf_counter()
        try:
            rep = _run_algorithm(a, cfg.algorithm, y, k, x)
            estimate = rep.estimate
        except (RankDeficientError, InsufficientZerosError, DegenerateSplitError, MinexpError):
            estimate = np.zeros(cfg.n)
        elapsed += time.perf_counter() - t0
        if np.abs(estimate - x).max() <= SUCCESS_TOL:
            successes += 1
        sers.append(_ser_db(x, estimate))
    return SweepRow(k=k, snr_db=snr_db, success_fraction=successes / cfg.trials_per_point,
                    mean_ser_db=float(np.mean(sers)),
                    mean_runtime_ms=1000.0 * elapsed / cfg.trials_per_point)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("MINEXP_WORKERS", "1")))
    except ValueError:
        return 1


def run_recovery_sweep(cfg: SweepConfig, matrix: MeasurementMatrix | None = None) -> list:
    """Success-rate curve over the sparsity grid (noiseless measurements)."""
    a = matrix if matrix is not None else build_matrix(cfg)
    workers = _workers()
    if workers > 1 and len(cfg.sparsity_grid) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_recovery_point, [a] * len(cfg.sparsity_grid),
                                 [cfg] * len(cfg.sparsity_grid), cfg.sparsity_grid))
    return [_recovery_point(a, cfg, k) for k in cfg.sparsity_grid]


def run_noise_sweep(cfg: SweepConfig, matrix: MeasurementMatrix | None = None) -> list:
    """Mean SER versus SNR for the noisy-recovery algorithms."""
    if cfg.noise_snr_grid is None:
        raise ValueError("noise sweep requires noise_snr_grid")
    if cfg.algorithm not in ("alg2-l1", "alg2-l2"):
        raise ValueError("noise sweep requires an alg2 variant")
    a = matrix if matrix is not None else build_matrix(cfg)
    points = [(k, snr) for k in cfg.sparsity_grid for snr in cfg.noise_snr_grid]
    workers = _workers()
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_noise_point, [a] * len(points), [cfg] * len(points),
                                 [p[0] for p in points], [p[1] for p in points]))
    return [_noise_point(a, cfg, k, snr) for k, snr in points]


def _config_comment_lines(cfg: SweepConfig) -> list:
    out = []
    for f in fields(SweepConfig):
        value = getattr(cfg, f.name)
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        out.append(f"# {f.name} = {value}")
    return out


def write_sweep_csv(path_or_file, cfg: SweepConfig, rows: list) -> None:
    """CSV with the config echoed as comments.

    Recovery sweeps use the header k,success_fraction,mean_ser_db,
    mean_runtime_ms; noise sweeps insert an snr_db column after k.
    """
    noise = any(r.snr_db is not None for r in rows)
    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "w", encoding="ascii") if own else path_or_file
    try:
        for line in _config_comment_lines(cfg):
            fh.write(line + "\n")
        if noise:
            fh.write("k,snr_db,success_fraction,mean_ser_db,mean_runtime_ms\n")
        else:
            fh.write("k,success_fraction,mean_ser_db,mean_runtime_ms\n")
        for r in rows:
            cells = [str(r.k)]
            if noise:
                cells.append(format(r.snr_db, ".17g"))
            cells.append(format(r.success_fraction, ".17g"))
            cells.append(format(r.mean_ser_db, ".17g"))
            cells.append(format(r.mean_runtime_ms, ".3f"))
            fh.write(",".join(cells) + "\n")
    finally:
        if own:
            fh.close()


def sweep_csv_text(cfg: SweepConfig, rows: list) -> str:
    buf = io.StringIO()
    write_sweep_csv(buf, cfg, rows)
    return buf.getvalue()
