import random

import mpmath as mp
import pytest

from somos import (
    CurveInvariants,
    SequenceWindow,
    Somos4Params,
    Somos5Params,
    iterate_somos4,
    iterate_somos5,
    lattice_from_invariants,
    solve_somos4,
    solve_somos5,
)


@pytest.fixture(autouse=True)
def _ambient_precision():
    """Assertion arithmetic on 30-digit package values must not round at 15."""
    with mp.workdps(35):
        yield


@pytest.fixture(scope="session")
def somos5_params():
    return Somos5Params(1, 1)


@pytest.fixture(scope="session")
def somos4_params():
    return Somos4Params(1, 1)


@pytest.fixture(scope="session")
def somos5_window(somos5_params):
    return iterate_somos5(somos5_params, SequenceWindow(0, (1, 1, 1, 1, 1)), -8, 45)


@pytest.fixture(scope="session")
def somos4_window(somos4_params):
    return iterate_somos4(somos4_params, SequenceWindow(0, (1, 1, 1, 1)), -8, 30)


@pytest.fixture(scope="session")
def somos5_solution(somos5_params):
    return solve_somos5(somos5_params, (1, 1, 1, 1, 1))


@pytest.fixture(scope="session")
def somos4_solution(somos4_params):
    return solve_somos4(somos4_params, (1, 1, 1, 1))


@pytest.fixture(scope="session")
def lat_star(somos5_solution):
    return somos5_solution.lat_star


@pytest.fixture(scope="session")
def lat_lemniscatic():
    return lattice_from_invariants(CurveInvariants.from_exact(4, 0))


@pytest.fixture(scope="session")
def lat_rhombic():
    return lattice_from_invariants(CurveInvariants.from_exact(4, 2))


def cell_points(lat, count, seed, margin=0.08):
    """Deterministic sample of generic points inside the fundamental cell."""
    rng = random.Random(seed)
    pts = []
    while len(pts) < count:
        s = rng.uniform(margin, 1 - margin)
        t = rng.uniform(margin, 1 - margin)
        if min(abs(s - 0.5), abs(t - 0.5)) < 0.04:
            continue
        pts.append(2 * s * lat.omega1 + 2 * t * lat.omega2)
    return pts


def rel_err(got, want):
    got = mp.mpmathify(got)
    want = mp.mpmathify(want)
    return abs(got - want) / max(1, abs(want))
