"""Baseband echo synthesis for a stationary scatterer profile.

A complex reflectivity profile over the fine range cells, sampled by a
train of stepped-frequency pulses, produces a target response matrix
(TRM): one row per valid pulse, one column per fast-time sample. All
sample instants are referenced to the start of the range gate, so the
bulk gate delay never enters the numerics.
"""

from dataclasses import dataclass

import numpy as np

from .model import ConfigError, PulseShape, RadarConfig, pulse_shape_eval


@dataclass(frozen=True, eq=False)
class RangeProfile:
    """Complex reflectivity over the n_cells fine range cells of a gate."""

    values: np.ndarray
    cfg: RadarConfig

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size != self.cfg.n_cells:
            raise ConfigError(
                f"profile length {values.size} does not match "
                f"n_pulses * l_bins = {self.cfg.n_cells}"
            )

    @property
    def sparsity(self) -> int:
        """Number of cells with nonzero modulus."""
        return int(np.count_nonzero(np.abs(self.values) > 0))


@dataclass(frozen=True)
class PulseSchedule:
    """Indices of the valid (received) pulses out of n_pulses transmitted."""

    valid_indices: tuple
    n_pulses: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.valid_indices)
        object.__setattr__(self, "valid_indices", idx)
        m = len(idx)
        if not 1 <= m <= self.n_pulses:
            raise ConfigError(
                f"schedule must keep between 1 and {self.n_pulses} pulses, got {m}"
            )
        if any(not 0 <= i < self.n_pulses for i in idx):
            raise ConfigError(
                f"pulse indices must lie in [0, {self.n_pulses}), got {idx}"
            )
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ConfigError(f"pulse indices must be strictly increasing, got {idx}")

    @classmethod
    def full(cls, n_pulses: int) -> "PulseSchedule":
        return cls(tuple(range(n_pulses)), n_pulses)

    @property
    def m_count(self) -> int:
        return len(self.valid_indices)

    @property
    def is_full(self) -> bool:
        return self.m_count == self.n_pulses


@dataclass(frozen=True)
class NoiseModel:
    """Circular complex white Gaussian receiver noise at a given SNR.

    The per-sample variance is set against the mean squared modulus of
    the noiseless TRM being built: sigma^2 = P_sig / 10^(snr_db / 10).
    Draws are keyed by (seed, pulse index, sample index), so the noise
    hitting a given pulse/sample does not depend on which other pulses
    survived.
    """

    snr_db: float
    seed: int

    def sigma_for(self, signal_power: float) -> float:
        return float(np.sqrt(signal_power * 10.0 ** (-self.snr_db / 10.0)))


@dataclass(frozen=True, eq=False)
class Trm:
    """Target response matrix: m_count rows by n_samples columns.

    row_pulse_indices carries the schedule index of each row;
    col_instants the gate-referenced sample instant of each column.
    noise_sigma is the per-sample noise std actually injected (0 when
    noiseless).
    """

    data: np.ndarray
    row_pulse_indices: tuple
    col_instants: np.ndarray
    snr_db: float | None = None
    noise_sigma: float = 0.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        object.__setattr__(self, "data", data)
        object.__setattr__(
            self, "col_instants", np.asarray(self.col_instants, dtype=float)
        )
        if data.shape != (len(self.row_pulse_indices), self.col_instants.size):
            raise ConfigError(
                f"TRM shape {data.shape} does not match {len(self.row_pulse_indices)} "
                f"rows x {self.col_instants.size} columns"
            )


def _phase_matrix(cfg: RadarConfig, pulse_indices) -> np.ndarray:
    """exp(-j 2 pi n p / N) for the given pulse indices n and all cells p."""
    n = np.asarray(pulse_indices, dtype=float)[:, None]
    p = np.arange(cfg.n_cells, dtype=float)[None, :]
    return np.exp(-2j * np.pi * n * p / cfg.n_pulses)


def _shape_matrix(cfg: RadarConfig, shape: PulseShape, instants) -> np.ndarray:
    """Pulse shape at (sample instant - cell delay) for all instants/cells."""
    tau = np.asarray(instants, dtype=float)[:, None]
    delays = np.arange(cfg.n_cells, dtype=float)[None, :] * cfg.fine_delay_spacing
    return pulse_shape_eval(shape, tau - delays)


def synthesize_echo_sample(
    profile: RangeProfile, pulse_index: int, tau: float, shape: PulseShape
) -> complex:
    """Noise-free baseband echo of one pulse at one sampling instant.

    Sums, over every fine cell p, the cell reflectivity times the pulse
    shape at (tau - p / (N delta_f)) times the stepped-carrier phase
    exp(-j 2 pi pulse_index p / N). tau is referenced to the gate start.
    """
    cfg = profile.cfg
    if not 0 <= pulse_index < cfg.n_pulses:
        raise ConfigError(
            f"pulse index {pulse_index} out of range [0, {cfg.n_pulses})"
        )
    p = np.arange(cfg.n_cells)
    envelope = pulse_shape_eval(shape, tau - p * cfg.fine_delay_spacing)
    phase = np.exp(-2j * np.pi * pulse_index * p / cfg.n_pulses)
    return complex(np.sum(profile.values * envelope * phase))


def build_trm(
    profile: RangeProfile,
    schedule: PulseSchedule,
    shape: PulseShape,
    noise: NoiseModel | None = None,
) -> Trm:
    """Assemble the TRM of a profile under a pulse schedule.

    Entry (m, s) is the echo of valid pulse schedule[m] sampled at
    s * delta_t, plus an optional seeded circular complex Gaussian term.
    Rows follow schedule order; columns enumerate s = 0 .. S-1.
    """
    cfg = profile.cfg
    if schedule.n_pulses != cfg.n_pulses:
        raise ConfigError(
            f"schedule is for {schedule.n_pulses} pulses, config has {cfg.n_pulses}"
        )
    s_count = cfg.n_samples
    instants = np.arange(s_count) * cfg.delta_t
    phases = _phase_matrix(cfg, schedule.valid_indices)
    envelopes = _shape_matrix(cfg, shape, instants)
    data = (phases * profile.values[None, :]) @ envelopes.T

    sigma = 0.0
    snr_db = None
    if noise is not None:
        snr_db = noise.snr_db
        signal_power = float(np.mean(np.abs(data) ** 2))
        sigma = noise.sigma_for(signal_power)
        if sigma > 0:
            data = data + sigma * _unit_noise(
                noise.seed, schedule.valid_indices, s_count
            )

    return Trm(
        data=data,
        row_pulse_indices=schedule.valid_indices,
        col_instants=instants,
        snr_db=snr_db,
        noise_sigma=sigma,
    )


def _unit_noise(seed: int, pulse_indices, s_count: int) -> np.ndarray:
    """Unit-power circular complex Gaussian draws keyed per (pulse, sample)."""
    rows = []
    for c_m in pulse_indices:
        rng = np.random.default_rng(np.random.SeedSequence([seed, int(c_m)]))
        z = rng.standard_normal((2, s_count))
        rows.append((z[0] + 1j * z[1]) / np.sqrt(2.0))
    return np.stack(rows, axis=0)


def random_missing_schedule(
    n_pulses: int, n_missing: int, seed: int
) -> PulseSchedule:
    """Schedule left after discarding a uniform random subset of pulses.

    Deterministic per seed; n_missing = 0 returns the full schedule.
    """
    if not 0 <= n_missing < n_pulses:
        raise ConfigError(
            f"n_missing must lie in [0, {n_pulses}), got {n_missing}"
        )
    rng = np.random.default_rng(seed)
    missing = rng.choice(n_pulses, size=n_missing, replace=False)
    keep = np.setdiff1d(np.arange(n_pulses), missing)
    return PulseSchedule(tuple(int(i) for i in keep), n_pulses)
