import numpy as np
import pytest

from fdswipt import SystemParams, sample_channels


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def params_m2():
    return SystemParams(p_a=1.0, p_b=1.0, p_r=1.0, q_bar=0.0,
                        var_rsi_a=0.1, var_rsi_b=0.1, var_rsi_r=0.1,
                        m_t=2, m_r=2)


@pytest.fixture
def channel_m2(params_m2):
    return sample_channels(params_m2, 20240817)
