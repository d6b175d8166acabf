"""
测试共用的夹具
"""

import numpy as np
import pytest

from adiax.log import reset_logging, setup_logging
from adiax.transverse import Harmonic, PowerWell, RigidWall
from adiax.utils import UniformGrid


@pytest.fixture(autouse=True)
def quiet_logging():
    """每个测试使用独立的日志系统，只输出警告以上"""
    reset_logging()
    setup_logging(log_level="WARNING")
    yield
    reset_logging()


@pytest.fixture
def outdir(tmp_path):
    return str(tmp_path / "results")


@pytest.fixture
def strip_x_grid():
    return UniformGrid(-2.0, 2.0, 41)


@pytest.fixture
def rigid_strip():
    return RigidWall(lower=0.0, upper=1.0)


@pytest.fixture
def harmonic_channel():
    return Harmonic(omega=2.0)


@pytest.fixture
def breathing_well():
    """D(x) = 1 + 0.3 sin x 的软壁势 (y/D)²"""
    return PowerWell(dilation=lambda x: 1.0 + 0.3 * np.sin(x), m=1.0)
