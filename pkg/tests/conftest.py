import numpy as np
import pytest

from qpbirkhoff.maps import HenonParams, SiegelMapParams, henon_ball_point, iterate
from qpbirkhoff.xprec import XReal, golden, parse_xcomplex, sqrt3half

# initial offsets along the two eigen-directions for the golden/sqrt(3)/2 Hénon orbit
BALL_AMPLITUDES = ("3e-4", "8e-4")


def pytest_addoption(parser):
    parser.addoption(
        "--full-scale",
        action="store_true",
        default=False,
        help="run full-scale checks (N up to 4e6, K = 3400)",
    )


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line; returns whether the check passed."""

    def record(name: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {name:<28} {detail}"
        request.config.stash[ACCEPTANCE].append(line)
        print(line)
        return ok

    return record


def pytest_collection_modifyitems(config, items):
    if config.getoption("--full-scale"):
        return
    skip = pytest.mark.skip(reason="full-scale run; pass --full-scale")
    for item in items:
        if "full_scale" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def full_scale(request):
    return request.config.getoption("--full-scale")


@pytest.fixture(scope="session")
def rho_golden():
    return golden()


@pytest.fixture(scope="session")
def siegel(rho_golden):
    return SiegelMapParams(rho_golden)


@pytest.fixture(scope="session")
def siegel_orbit(siegel):
    cache = {}

    def get(z0: str, n: int):
        key = (z0, n)
        if key not in cache:
            cache[key] = iterate(siegel, XReal(z0), n)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def henon_gs():
    return HenonParams.from_rotations(golden(), sqrt3half())


@pytest.fixture(scope="session")
def henon_664():
    return HenonParams(XReal("0.664"), XReal("2.032"))


@pytest.fixture(scope="session")
def orbit_gs(henon_gs):
    z0 = henon_ball_point(henon_gs, XReal(BALL_AMPLITUDES[0]), XReal(BALL_AMPLITUDES[1]))
    return iterate(henon_gs, z0, 10**6 + 2)


@pytest.fixture(scope="session")
def start_664():
    return parse_xcomplex("-0.500+0.126i"), parse_xcomplex("-0.387-0.163i")


@pytest.fixture(scope="session")
def orbit_664(henon_664, start_664):
    return iterate(henon_664, start_664, 10**6 + 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
