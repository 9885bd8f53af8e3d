import os
import subprocess
import sys

import pytest

from aquascale import Density, PhysicalParams, build_grid, cut


@pytest.fixture(scope="session")
def thorp():
    """Default physical constants (Thorp absorption, 50 dB noise level)."""
    return PhysicalParams()


@pytest.fixture(scope="session")
def ext16():
    """A 4x4 extended grid with its vertical cut."""
    grid = build_grid(16, Density.EXTENDED)
    return grid, cut(grid)


@pytest.fixture
def run_cli():
    """Invoke the installed CLI in a subprocess and capture everything."""

    def runner(*args, env_extra=None, config=None):
        env = os.environ.copy()
        env.pop("AQUASCALE_THREADS", None)
        if env_extra:
            env.update(env_extra)
        cmd = [sys.executable, "-m", "aquascale.cli"]
        if config is not None:
            cmd += ["--config", str(config)]
        cmd += list(args)
        return subprocess.run(cmd, capture_output=True, text=True, env=env)

    return runner
