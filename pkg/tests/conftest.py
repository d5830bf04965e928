"""Shared fixtures: the demo operators re-transcribed as an independent copy.

The matrices are written out literally here (not imported from the package)
so a transcription slip in either place shows up as a fixture mismatch.
"""
import numpy as np
import pytest

P_MATRIX = np.array([
    [9 / 2, 1 / 2, -7, 5, -3],
    [15 / 2, 3 / 2, -11, 5, -7],
    [5, 0, -7, 5, -5],
    [4, 0, -4, 3, -4],
    [1 / 2, 1 / 2, -1, 0, 1],
], dtype=complex)

Q_MATRIX = np.array([
    [3 / 2, -1 / 2, 2, 0, 1],
    [1 / 2, 5 / 2, 0, 0, -1],
    [0, 0, 3, 0, 0],
    [1, 0, -1, 3, -1],
    [-1 / 2, -1 / 2, 1, 0, 3],
], dtype=complex)

R_MATRIX = np.array([
    [0, -1, 4, -1, 2],
    [2, 1, -2, 1, -2],
    [-1 / 2, -1 / 2, 3, 0, 1],
    [1 / 2, -1 / 2, 0, 2, 0],
    [-1 / 2, -1 / 2, 2, -1, 2],
], dtype=complex)

COMPANION = np.array([
    [0, 0, 1],
    [1, 0, 1],
    [0, 1, 2],
], dtype=complex)


@pytest.fixture(scope="session")
def P():
    return P_MATRIX.copy()


@pytest.fixture(scope="session")
def Q():
    return Q_MATRIX.copy()


@pytest.fixture(scope="session")
def R():
    return R_MATRIX.copy()


@pytest.fixture(scope="session")
def companion():
    return COMPANION.copy()


def test_package_fixtures_match_transcription():
    from dynsamp import demo

    np.testing.assert_array_equal(demo.P, P_MATRIX)
    np.testing.assert_array_equal(demo.Q, Q_MATRIX)
    np.testing.assert_array_equal(demo.R, R_MATRIX)
    np.testing.assert_array_equal(demo.COMPANION_3, COMPANION)
