import numpy as np
import pytest

from sfradar import PulseShape, RadarConfig


@pytest.fixture
def cfg32():
    # 32 x 16 MHz steps (512 MHz synthetic bandwidth), 24 MHz single-pulse
    # bandwidth sampled at the bandwidth, 12 coarse bins
    return RadarConfig(
        f_c=5.0e9, delta_f=16e6, n_pulses=32, pulse_bandwidth=24e6, l_bins=12
    )


@pytest.fixture
def small_cfg():
    return RadarConfig(
        f_c=5.0e9, delta_f=16e6, n_pulses=16, pulse_bandwidth=24e6, l_bins=3
    )


@pytest.fixture
def ideal_shape(cfg32):
    return PulseShape.ideal_sinc(cfg32.pulse_bandwidth)


def sparse_profile(cfg, n_scatterers, rng):
    values = np.zeros(cfg.n_cells, dtype=np.complex128)
    cells = rng.choice(cfg.n_cells, size=n_scatterers, replace=False)
    values[cells] = rng.standard_normal(n_scatterers) + 1j * rng.standard_normal(
        n_scatterers
    )
    return values
