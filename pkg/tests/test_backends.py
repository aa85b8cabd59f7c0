import numpy as np
import pytest

from renyicq import backend
from renyicq.backend import py_kernels
from renyicq.centers import solve_center_D
from renyicq.channels import random_cq_channel
from renyicq.divergences import RenyiParams

compiled = pytest.importorskip(
    "renyicq.backend._ckernels", reason="compiled kernels not built"
)


def _random_problem(rng, k, m):
    g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    sigma = g @ g.conj().T
    sigma /= np.trace(sigma).real
    wp = []
    for _ in range(m):
        h = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        wp.append(h @ h.conj().T)
    probs = rng.dirichlet(np.ones(m))
    return sigma, np.stack(wp), probs


@pytest.mark.parametrize("k", [2, 3, 5, 8])
@pytest.mark.parametrize("z,spow", [(2.0, -0.25), (1.0, 0.5), (0.7, -1.2)])
def test_center_sweep_twins_agree(k, z, spow):
    rng = np.random.default_rng(k * 100 + int(z * 10))
    sigma, wp, probs = _random_problem(rng, k, 3)
    py = py_kernels.center_sweep(sigma, wp, probs, z, spow)
    ck = compiled.center_sweep(sigma, wp, probs, z, spow)
    scale = max(np.abs(py[0]).max(), np.abs(py[2]).max(), 1.0)
    for a, b in zip(py, ck):
        assert np.abs(np.asarray(a) - np.asarray(b)).max() <= 1e-12 * scale


@pytest.mark.parametrize("k", [2, 4])
def test_q_sweep_twins_agree(k):
    rng = np.random.default_rng(k)
    sigma, wp, _ = _random_problem(rng, k, 4)
    py = py_kernels.q_sweep(sigma, wp, 1.7, -0.3)
    ck = compiled.q_sweep(sigma, wp, 1.7, -0.3)
    assert np.abs(py - ck).max() <= 1e-12 * max(py.max(), 1.0)


def test_rank_deficient_sigma():
    rng = np.random.default_rng(5)
    g = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    sigma = g @ g.conj().T
    sigma /= np.trace(sigma).real
    _, wp, probs = _random_problem(rng, 3, 2)
    py = py_kernels.center_sweep(sigma, wp, probs, 1.0, 0.5)
    ck = compiled.center_sweep(sigma, wp, probs, 1.0, 0.5)
    for a, b in zip(py, ck):
        assert np.abs(np.asarray(a) - np.asarray(b)).max() <= 1e-11


def test_full_solve_matches_across_backends():
    rng = np.random.default_rng(9)
    w, p = random_cq_channel(3, 4, rng)
    params = RenyiParams(2.0, 2.0)
    with backend.temporarily("python"):
        res_py = solve_center_D(w, p, params)
    with backend.temporarily("compiled"):
        res_ck = solve_center_D(w, p, params)
    assert res_py.converged and res_ck.converged
    assert abs(res_py.value - res_ck.value) <= 1e-10


def test_backend_switching():
    assert set(backend.available_backends()) == {"compiled", "python"}
    with backend.temporarily("python"):
        assert backend.active_backend() == "python"
    with pytest.raises(ValueError):
        backend.use("nope")
