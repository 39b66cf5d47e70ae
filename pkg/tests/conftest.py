import numpy as np
import pytest

from cosmoflux import (
    SqueezeChannel,
    TruncationSpec,
    forward_joint,
    entropy_distributions,
    inner_friction,
    reverse_joint,
    thermal_distribution,
    transition_kernel,
)

Z_CANON = float(np.arctanh(0.5))


@pytest.fixture(scope="session")
def spec40():
    return TruncationSpec(cutoff=40, leakage_tolerance=1e-8)


@pytest.fixture(scope="session")
def kernel40(spec40):
    return transition_kernel(Z_CANON, spec40)


@pytest.fixture(scope="session")
def thermal40(spec40):
    return thermal_distribution(1.0, 1.0, spec40)


@pytest.fixture(scope="session")
def work40(kernel40, thermal40):
    return inner_friction(kernel40, thermal40, 1.0, 2.0)


@pytest.fixture(scope="session")
def channel40():
    return SqueezeChannel(z=Z_CANON, omega_in=1.0, omega_out=2.0)


@pytest.fixture(scope="session")
def joints40(kernel40, thermal40):
    return forward_joint(kernel40, thermal40), reverse_joint(kernel40, thermal40)


@pytest.fixture(scope="session")
def dists40(joints40, channel40):
    fwd, rev = joints40
    return entropy_distributions(fwd, rev, channel40, 1.0)


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
