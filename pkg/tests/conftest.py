import itertools
import math

import numpy as np
import pytest

from jacobi_theta import ThetaSpec, make_directions, validate_form

A_2I4 = [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]
H_34 = [[0, 0, 1, 0], [0, 0, 0, 1]]
V_ISO = (1, 1j, 0, 0)
V_ORTHO = (1, 1, 0, 0)
V_GEN = (0, 0, 1, 0)
A2 = [[2, 1], [1, 2]]


@pytest.fixture(scope="session")
def form():
    return validate_form(A_2I4)


@pytest.fixture(scope="session")
def dirs(form):
    return make_directions(form, H_34)


@pytest.fixture(scope="session")
def spec_of(form, dirs):
    def build(v, k):
        return ThetaSpec.build(form, dirs, v, k)

    return build


def brute_points(A, R):
    """Integer m with m^T A m / 2 <= R, by scanning the box |m_i| <= sqrt(2 R (A^-1)_ii)."""
    A = np.asarray(A, dtype=np.int64)
    inv = np.linalg.inv(A.astype(float))
    bounds = [math.ceil(math.sqrt(max(2 * float(R) * inv[i, i], 0.0))) for i in range(len(A))]
    out = []
    for m in itertools.product(*(range(-b, b + 1) for b in bounds)):
        m = np.array(m, dtype=np.int64)
        if m @ A @ m <= 2 * R:
            out.append(tuple(int(x) for x in m))
    return sorted(out)


def brute_theta(A, H, v, k, tau, z, R):
    """Direct summation over the box scan; an oracle independent of the library's enumeration."""
    A = np.asarray(A)
    total = 0j
    for m in brute_points(A, R):
        m = np.array(m)
        Am = A @ m
        total += complex(np.asarray(v) @ Am) ** k * np.exp(
            2j * np.pi * (tau * (m @ Am) / 2 + np.asarray(z) @ (np.asarray(H) @ Am))
        )
    return total


def random_even_form(rng, f):
    """Random even positive definite integer matrix with |a_ij| <= 4."""
    while True:
        M = rng.integers(-2, 3, size=(f, f))
        A = M + M.T
        np.fill_diagonal(A, 2 * rng.integers(1, 3, size=f))
        if np.all(np.linalg.eigvalsh(A.astype(float)) > 1e-9) and np.abs(A).max() <= 4:
            return A.tolist()


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
