"""Experiment engine: seeded sweeps over missing-pulse counts and SNRs.

Each trial draws a target, a pulse schedule and receiver noise from
seeds derived purely from (experiment seed, missing count, trial index),
so re-running a spec reproduces every number except the timing column,
and adding a sweep point never disturbs the others. All solvers within a
trial consume the identical observation vector.
"""

import configparser
import hashlib
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .echo import (
    NoiseModel,
    RangeProfile,
    build_trm,
    random_missing_schedule,
)
from .io import load_profile_csv
from .metrics import similarity
from .model import ConfigError, PulseShape, RadarConfig
from .sensing import build_sensing_system
from .solvers import (
    SolverOptions,
    solve_least_squares,
    solve_sparse_l1,
    solve_stretch_idft,
)

METHODS = ("sparse_l1", "least_squares", "stretch_idft")
DEFAULT_SOLVERS = ("sparse_l1", "least_squares")
DEFAULT_SCATTERERS = 24
THREADS_ENV = "SFR_THREADS"


@dataclass(frozen=True)
class SyntheticSparse:
    """Random sparse target: unit-mean Rayleigh magnitudes, uniform phases,
    cells drawn uniformly without replacement."""

    n_scatterers: int = DEFAULT_SCATTERERS

    def __post_init__(self):
        if self.n_scatterers < 1:
            raise ConfigError(
                f"n_scatterers must be >= 1, got {self.n_scatterers}"
            )


@dataclass(frozen=True)
class FileTarget:
    """Truth profile loaded from a profile CSV (fixed across trials)."""

    path: str


@dataclass(frozen=True)
class ExperimentSpec:
    radar: RadarConfig
    target: SyntheticSparse | FileTarget = SyntheticSparse()
    sweep: tuple = (0,)
    snr_db: float | tuple | None = None
    trials_per_point: int = 1
    seed: int = 0
    solvers: tuple = DEFAULT_SOLVERS
    solver_opts: SolverOptions = field(default_factory=SolverOptions)
    shape: PulseShape | None = None
    valid_pulses: tuple | None = None  # recorded-data schedule, CLI recover only

    def __post_init__(self):
        if self.trials_per_point < 1:
            raise ConfigError(
                f"trials_per_point must be >= 1, got {self.trials_per_point}"
            )
        sweep = tuple(int(v) for v in self.sweep)
        object.__setattr__(self, "sweep", sweep)
        for v in sweep:
            if not 0 <= v < self.radar.n_pulses:
                raise ConfigError(
                    f"sweep value {v} outside [0, {self.radar.n_pulses - 1}]"
                )
        solvers = tuple(self.solvers)
        object.__setattr__(self, "solvers", solvers)
        if not solvers:
            raise ConfigError("at least one solver must be requested")
        for name in solvers:
            if name not in METHODS:
                raise ConfigError(
                    f"unknown solver {name!r}; choose from {METHODS}"
                )
        if self.shape is None:
            object.__setattr__(
                self, "shape", PulseShape.ideal_sinc(self.radar.pulse_bandwidth)
            )

    @property
    def snr_list(self) -> tuple:
        if self.snr_db is None or isinstance(self.snr_db, (int, float)):
            return (self.snr_db,)
        return tuple(self.snr_db)


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    missing_count: int
    snr_db: float | None
    trial: int
    method: str
    similarity: float
    rel_l2_error: float
    residual_l2: float
    iterations: int
    wall_time_s: float


def child_seed(seed: int, missing_count: int, trial: int, stream: int = 0) -> int:
    """Deterministic per-trial seed, independent of sweep ordering."""
    ss = np.random.SeedSequence([int(seed), int(missing_count), int(trial), stream])
    return int(ss.generate_state(1, np.uint64)[0])


def draw_synthetic_target(cfg: RadarConfig, n_scatterers: int, seed: int) -> RangeProfile:
    """Sparse profile with unit-mean Rayleigh magnitudes and uniform phases."""
    if n_scatterers > cfg.n_cells:
        raise ConfigError(
            f"cannot place {n_scatterers} scatterers in {cfg.n_cells} cells"
        )
    rng = np.random.default_rng(seed)
    cells = rng.choice(cfg.n_cells, size=n_scatterers, replace=False)
    mags = rng.rayleigh(scale=math.sqrt(2.0 / math.pi), size=n_scatterers)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n_scatterers)
    values = np.zeros(cfg.n_cells, dtype=np.complex128)
    values[cells] = mags * np.exp(1j * phases)
    return RangeProfile(values, cfg)


def _y_hash(y: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(y).tobytes()).hexdigest()


def _run_trial(spec: ExperimentSpec, missing_count: int, snr_db, trial: int,
               file_values: np.ndarray | None) -> list:
    cfg, shape = spec.radar, spec.shape
    if file_values is not None:
        truth = RangeProfile(file_values, cfg)
    else:
        truth = draw_synthetic_target(
            cfg, spec.target.n_scatterers,
            child_seed(spec.seed, missing_count, trial, 1),
        )
    schedule = random_missing_schedule(
        cfg.n_pulses, missing_count, child_seed(spec.seed, missing_count, trial, 2)
    )
    noise = None
    if snr_db is not None:
        noise = NoiseModel(
            snr_db=snr_db, seed=child_seed(spec.seed, missing_count, trial, 3)
        )
    trm = build_trm(truth, schedule, shape, noise)
    sys = build_sensing_system(cfg, shape, schedule, trm)

    trial_seed = child_seed(spec.seed, missing_count, trial, 0)
    records = []
    y_hashes = set()
    for method in spec.solvers:
        start = time.perf_counter()
        if method == "sparse_l1":
            y_hashes.add(_y_hash(sys.y))
            result = solve_sparse_l1(sys, spec.solver_opts)
        elif method == "least_squares":
            y_hashes.add(_y_hash(sys.y))
            result = solve_least_squares(sys, spec.solver_opts)
        else:
            y_hashes.add(_y_hash(trm.data.flatten(order="F")))
            result = solve_stretch_idft(trm, cfg, shape)
        wall = time.perf_counter() - start
        report = similarity(truth.values, result.h_est)
        records.append(
            TrialRecord(
                seed=trial_seed,
                missing_count=missing_count,
                snr_db=snr_db,
                trial=trial,
                method=method,
                similarity=report.similarity,
                rel_l2_error=report.rel_l2_error,
                residual_l2=result.residual_l2,
                iterations=result.iterations,
                wall_time_s=wall,
            )
        )
    if len(y_hashes) > 1:
        raise RuntimeError(
            "solvers within one trial consumed different observations"
        )
    return records


def _worker_count(workers: int | None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "0")
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def run_experiment(spec: ExperimentSpec, workers: int | None = None) -> list:
    """Run every (missing count, SNR, trial) cell of the spec.

    Returns one TrialRecord per requested solver per trial, sorted by
    (missing_count, snr, trial, method). Trials run in a thread pool
    capped by the SFR_THREADS environment variable (0 or unset = one
    worker per CPU); records are identical across worker counts.
    """
    file_values = None
    if isinstance(spec.target, FileTarget):
        file_values = load_profile_csv(spec.target.path)

    jobs = [
        (missing, snr, trial)
        for missing in spec.sweep
        for snr in spec.snr_list
        for trial in range(spec.trials_per_point)
    ]
    n_workers = _worker_count(workers)
    if n_workers == 1 or len(jobs) <= 1:
        batches = [
            _run_trial(spec, missing, snr, trial, file_values)
            for missing, snr, trial in jobs
        ]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            batches = list(
                pool.map(
                    lambda job: _run_trial(spec, *job, file_values), jobs
                )
            )
    records = [rec for batch in batches for rec in batch]
    records.sort(
        key=lambda r: (
            r.missing_count,
            -math.inf if r.snr_db is None else r.snr_db,
            r.trial,
            r.method,
        )
    )
    return records


TRIALS_CSV_HEADER = (
    "seed,missing_count,snr_db,trial,method,similarity,"
    "rel_l2_error,residual_l2,iterations,wall_time_s"
)


def format_trial_row(rec: TrialRecord) -> str:
    snr = "" if rec.snr_db is None else f"{rec.snr_db:.12g}"
    return (
        f"{rec.seed},{rec.missing_count},{snr},{rec.trial},{rec.method},"
        f"{rec.similarity:.12g},{rec.rel_l2_error:.12g},"
        f"{rec.residual_l2:.12g},{rec.iterations},{rec.wall_time_s:.6g}"
    )


def write_trials_csv(records, path) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(TRIALS_CSV_HEADER + "\n")
        for rec in records:
            f.write(format_trial_row(rec) + "\n")


# -- configuration file -----------------------------------------------------

_SECTION_KEYS = {
    "radar": {
        "f_c", "delta_f", "n_pulses", "pulse_bandwidth", "delta_t",
        "q_start", "l_bins", "c_light",
    },
    "pulse_shape": {"kind", "window", "truncation_halfwidth"},
    "target": {"kind", "n_scatterers", "path"},
    "experiment": {
        "sweep", "snr_db", "trials_per_point", "seed", "solvers", "valid_pulses",
    },
    "solver": {
        "max_iters", "rel_change_tol", "epsilon", "epsilon_factor",
        "lambda_path_steps", "lambda_ratio", "ls_ridge", "accelerate",
    },
}
_REQUIRED = {
    "radar": {"f_c", "delta_f", "n_pulses", "pulse_bandwidth", "l_bins"},
    "experiment": {"sweep", "snr_db", "trials_per_point", "seed"},
}


def _parse_list(raw: str, cast):
    parts = [p.strip() for p in raw.replace(",", " ").split()]
    return tuple(cast(p) for p in parts)


def load_experiment_spec(path) -> ExperimentSpec:
    """Build an ExperimentSpec from a key-value config file.

    Unknown sections or keys are errors, not warnings: a silent typo
    would corrupt a sweep.
    """
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";")
    )
    try:
        with open(path, "r", encoding="utf-8") as f:
            cp.read_file(f)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    for section in cp.sections():
        if section not in _SECTION_KEYS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key in cp[section]:
            if key not in _SECTION_KEYS[section]:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
    for section, keys in _REQUIRED.items():
        if section not in cp:
            raise ConfigError(f"{path}: missing section [{section}]")
        for key in keys:
            if key not in cp[section]:
                raise ConfigError(f"{path}: missing key {key!r} in [{section}]")

    r = cp["radar"]
    radar = RadarConfig(
        f_c=r.getfloat("f_c"),
        delta_f=r.getfloat("delta_f"),
        n_pulses=r.getint("n_pulses"),
        pulse_bandwidth=r.getfloat("pulse_bandwidth"),
        delta_t=r.getfloat("delta_t") if "delta_t" in r else None,
        q_start=r.getint("q_start") if "q_start" in r else 0,
        l_bins=r.getint("l_bins"),
        **({"c_light": r.getfloat("c_light")} if "c_light" in r else {}),
    )

    shape = None
    if "pulse_shape" in cp:
        s = cp["pulse_shape"]
        kind = s.get("kind", "ideal_sinc")
        if kind == "ideal_sinc":
            shape = PulseShape.ideal_sinc(radar.pulse_bandwidth)
        elif kind == "windowed_sinc":
            if "truncation_halfwidth" not in s:
                raise ConfigError(
                    f"{path}: windowed_sinc requires truncation_halfwidth"
                )
            shape = PulseShape.windowed_sinc(
                radar.pulse_bandwidth,
                s.get("window", "rect"),
                s.getfloat("truncation_halfwidth"),
            )
        else:
            raise ConfigError(f"{path}: unknown pulse shape kind {kind!r}")

    target = SyntheticSparse()
    if "target" in cp:
        t = cp["target"]
        kind = t.get("kind", "synthetic")
        if kind == "synthetic":
            target = SyntheticSparse(
                t.getint("n_scatterers", DEFAULT_SCATTERERS)
            )
        elif kind == "file":
            if "path" not in t:
                raise ConfigError(f"{path}: target kind 'file' requires path")
            target = FileTarget(t.get("path"))
        else:
            raise ConfigError(f"{path}: unknown target kind {kind!r}")

    e = cp["experiment"]
    raw_snr = e.get("snr_db").strip()
    if raw_snr.lower() == "none":
        snr_db = None
    else:
        values = _parse_list(raw_snr, float)
        snr_db = values[0] if len(values) == 1 else values

    opts = SolverOptions()
    if "solver" in cp:
        s = cp["solver"]
        kwargs = {}
        if "max_iters" in s:
            kwargs["max_iters"] = s.getint("max_iters")
        if "rel_change_tol" in s:
            kwargs["rel_change_tol"] = s.getfloat("rel_change_tol")
        if "epsilon" in s:
            kwargs["epsilon"] = s.getfloat("epsilon")
        if "epsilon_factor" in s:
            kwargs["epsilon_factor"] = s.getfloat("epsilon_factor")
        if "lambda_path_steps" in s:
            kwargs["lambda_path_steps"] = s.getint("lambda_path_steps")
        if "lambda_ratio" in s:
            kwargs["lambda_ratio"] = s.getfloat("lambda_ratio")
        if "ls_ridge" in s:
            kwargs["ls_ridge"] = s.getfloat("ls_ridge")
        if "accelerate" in s:
            kwargs["accelerate"] = s.getboolean("accelerate")
        opts = SolverOptions(**kwargs)

    return ExperimentSpec(
        radar=radar,
        target=target,
        sweep=_parse_list(e.get("sweep"), int),
        snr_db=snr_db,
        trials_per_point=e.getint("trials_per_point"),
        seed=e.getint("seed"),
        solvers=(
            _parse_list(e.get("solvers"), str) if "solvers" in e else DEFAULT_SOLVERS
        ),
        solver_opts=opts,
        shape=shape,
        valid_pulses=(
            _parse_list(e.get("valid_pulses"), int) if "valid_pulses" in e else None
        ),
    )


# -- built-in invariant checks (CLI selftest) --------------------------------

def _naive_idft(x: np.ndarray) -> np.ndarray:
    n = x.size
    k = np.arange(n)
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        out[i] = np.sum(x * np.exp(2j * np.pi * k * i / n)) / n
    return out


def selftest(seed: int = 0) -> list:
    """Quick invariant suite; returns (name, passed, detail) triples."""
    from .solvers import soft_threshold

    cfg = RadarConfig(
        f_c=5.0e9, delta_f=16e6, n_pulses=16, pulse_bandwidth=24e6, l_bins=4
    )
    shape = PulseShape.ideal_sinc(cfg.pulse_bandwidth)
    rng = np.random.default_rng(seed)
    results = []

    values = np.zeros(cfg.n_cells, dtype=np.complex128)
    cells = rng.choice(cfg.n_cells, size=5, replace=False)
    values[cells] = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    truth = RangeProfile(values, cfg)
    schedule = random_missing_schedule(cfg.n_pulses, 6, seed)
    trm = build_trm(truth, schedule, shape)
    sys = build_sensing_system(cfg, shape, schedule, trm)

    err = np.linalg.norm(sys.phi @ truth.values - sys.y) / np.linalg.norm(sys.y)
    results.append(
        ("sensing operator matches echo synthesis", err <= 1e-12, f"rel err {err:.2e}")
    )

    u = rng.standard_normal(cfg.n_cells) + 1j * rng.standard_normal(cfg.n_cells)
    v = rng.standard_normal(sys.n_rows) + 1j * rng.standard_normal(sys.n_rows)
    lhs = np.vdot(v, sys.phi @ u)
    rhs = np.vdot(sys.phi.conj().T @ v, u)
    adj = abs(lhs - rhs) / max(abs(lhs), 1e-300)
    results.append(("adjoint consistency", adj <= 1e-10, f"rel err {adj:.2e}"))

    z = 1.3 - 0.7j
    t = 0.5
    prox = soft_threshold(np.array([z]), t)[0]
    grid = np.linspace(0.0, abs(z) + t, 200001)
    obj = 0.5 * (grid - abs(z)) ** 2 + t * grid
    best = grid[int(np.argmin(obj))]
    prox_err = abs(abs(prox) - best)
    results.append(
        ("complex soft-threshold prox", prox_err <= 1e-4, f"mag err {prox_err:.2e}")
    )

    col = rng.standard_normal(cfg.n_pulses) + 1j * rng.standard_normal(cfg.n_pulses)
    fft_err = np.linalg.norm(np.fft.ifft(col) - _naive_idft(col))
    results.append(
        ("inverse DFT against direct summation", fft_err <= 1e-12, f"abs err {fft_err:.2e}")
    )

    opts = SolverOptions(epsilon=1e-6 * float(np.linalg.norm(sys.y)))
    rec = solve_sparse_l1(sys, opts)
    rel = float(np.linalg.norm(rec.h_est - truth.values) / np.linalg.norm(truth.values))
    results.append(
        ("noiseless sparse recovery", rel <= 1e-3, f"rel err {rel:.2e}")
    )

    spec = ExperimentSpec(
        radar=cfg, target=SyntheticSparse(4), sweep=(0, 4), snr_db=15.0,
        trials_per_point=2, seed=seed,
    )
    rows_a = [format_trial_row(r).rsplit(",", 1)[0] for r in run_experiment(spec, workers=1)]
    rows_b = [format_trial_row(r).rsplit(",", 1)[0] for r in run_experiment(spec, workers=2)]
    results.append(
        ("experiment determinism across workers", rows_a == rows_b, f"{len(rows_a)} records")
    )
    return results
