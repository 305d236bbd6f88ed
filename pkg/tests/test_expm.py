import math

import numpy as np
import pytest
from scipy.linalg import expm as scipy_expm

from netcompare.expm import expm

from conftest import gnp


def taylor_expm(a, terms=60):
    out = np.eye(len(a))
    term = np.eye(len(a))
    for z in range(1, terms + 1):
        term = term @ a / z
        out = out + term
    return out


def test_zero_matrix():
    assert np.array_equal(expm(np.zeros((4, 4))), np.eye(4))


def test_k2_closed_form():
    c = expm(np.array([[0.0, 1.0], [1.0, 0.0]]))
    expect = np.array([[math.cosh(1), math.sinh(1)], [math.sinh(1), math.cosh(1)]])
    assert np.max(np.abs(c - expect)) < 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_taylor_oracle(seed):
    a = gnp(15, 0.3, seed).adjacency_matrix()
    assert np.max(np.abs(expm(a) - taylor_expm(a))) < 1e-9


@pytest.mark.parametrize("scale", [1e-3, 0.5, 3.0, 40.0])
def test_all_pade_orders_against_scipy(scale, rng):
    a = rng.normal(size=(8, 8)) * scale
    ref = scipy_expm(a)
    assert np.max(np.abs(expm(a) - ref)) <= 1e-11 * max(1.0, np.abs(ref).max())


def test_diagonal_matrix():
    d = np.array([-2.0, 0.0, 1.5])
    assert np.allclose(expm(np.diag(d)), np.diag(np.exp(d)), rtol=1e-14)
