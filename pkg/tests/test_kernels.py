import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpent import kernels
from gpent.separable import DELTA, _Problem
from gpent.states import entropy_of_spectrum

from .oracles import haar_vector

BACKENDS = [kernels.python] + ([kernels.compiled] if kernels.compiled is not None else [])
IDS = [b.__name__.rsplit(".", 1)[-1] for b in BACKENDS]


@pytest.fixture(params=BACKENDS, ids=IDS)
def backend(request, monkeypatch):
    for name in ("log_divided_differences", "khatri_rao", "khatri_rao_grad", "relent_objective"):
        monkeypatch.setattr(kernels, name, getattr(request.param, name))
    return request.param


def packed(dims, K, rng):
    V = rng.standard_normal((sum(dims), K)) + 1j * rng.standard_normal((sum(dims), K))
    return np.ascontiguousarray(V)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_compiled_backend_present():
    if kernels.compiled is None:
        pytest.skip("compiled extension not built")
    assert kernels.BACKEND == "cython" or kernels.compiled is not None


def test_divided_differences_direct():
    lam = np.array([0.5, 0.25, 0.25 + 1e-15, 1e-12])
    G = kernels.python.log_divided_differences(lam)
    assert G[0, 1] == pytest.approx((np.log(0.5) - np.log(0.25)) / 0.25)
    assert G[1, 2] == pytest.approx(4.0)
    assert G[3, 3] == pytest.approx(1e12)
    assert np.allclose(G, G.T)


def test_khatri_rao_is_kron():
    rng = np.random.default_rng(0)
    dims = (2, 3, 2)
    V = packed(dims, 4, rng)
    Phi = kernels.python.khatri_rao(V, dims)
    for k in range(4):
        col = np.kron(np.kron(V[0:2, k], V[2:5, k]), V[5:7, k])
        assert np.allclose(Phi[:, k], col)


@pytest.mark.skipif(kernels.compiled is None, reason="compiled extension not built")
@given(st.lists(st.integers(2, 4), min_size=2, max_size=3), st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_backends_agree(dims, K, seed):
    rng = np.random.default_rng(seed)
    dims = tuple(dims)
    V = packed(dims, K, rng)
    R = packed((int(np.prod(dims)),), K, rng)
    c, p = kernels.compiled, kernels.python
    assert np.allclose(c.khatri_rao(V, dims), p.khatri_rao(V, dims), atol=1e-13)
    assert np.allclose(c.khatri_rao_grad(R, V, dims), p.khatri_rao_grad(R, V, dims), atol=1e-12)
    lam = np.sort(rng.uniform(1e-6, 1, 6))
    assert np.allclose(c.log_divided_differences(lam), p.log_divided_differences(lam), rtol=1e-12)
    # well-conditioned sigma: enough atoms for full rank
    D = int(np.prod(dims))
    Phi = p.khatri_rao(packed(dims, D + K, rng), dims)
    Phi /= np.linalg.norm(Phi)
    v = haar_vector(D, rng)
    rho = np.ascontiguousarray(np.outer(v, v.conj()))
    fc, Mc = c.relent_objective(np.ascontiguousarray(Phi), rho, 0.0, DELTA)
    fp, Mp = p.relent_objective(Phi, rho, 0.0, DELTA)
    assert fc == pytest.approx(fp, abs=1e-9)
    assert np.allclose(Mc, Mp, atol=1e-8 * max(1.0, np.abs(Mp).max()))


def test_read_only_inputs(backend):
    rng = np.random.default_rng(1)
    V = packed((2, 2), 3, rng)
    V.setflags(write=False)
    assert backend.khatri_rao(V, (2, 2)).shape == (4, 3)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 2, 2)])
def test_gradient_matches_finite_differences(backend, dims):
    rng = np.random.default_rng(2)
    D = int(np.prod(dims))
    X = rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))
    rho = X @ X.conj().T
    rho /= np.trace(rho).real
    prob = _Problem(rho, dims)
    V = packed(dims, 2 * D, rng) * 0.3
    f, G = prob.value_grad(V)
    dV = packed(dims, 2 * D, rng)
    h = 1e-6
    # G packs d/dRe in its real part and d/dIm in its imaginary part
    for direction, unit, slope in ((dV.real, 1.0, G.real), (dV.imag, 1j, G.imag)):
        step = unit * direction
        fd = (prob.value(V + h * step) - prob.value(V - h * step)) / (2 * h)
        analytic = float(np.sum(slope * direction))
        assert fd == pytest.approx(analytic, rel=1e-5, abs=1e-7)


def test_objective_at_rho_itself_is_zero(backend):
    # rho full rank and equal to sigma: relative entropy 0, trace term 0
    rng = np.random.default_rng(3)
    D = 4
    X = rng.standard_normal((D, 8)) + 1j * rng.standard_normal((D, 8))
    Phi = X / np.linalg.norm(X)
    rho = Phi @ Phi.conj().T + DELTA * np.eye(D)
    rho /= np.trace(rho).real
    neg = -entropy_of_spectrum(np.linalg.eigvalsh(rho))
    f, M = backend.relent_objective(np.ascontiguousarray(Phi), np.ascontiguousarray(rho), neg, DELTA)
    assert abs(f) < 1e-9
    # at sigma = rho the gradient operator is the identity
    assert np.allclose(M, np.eye(D), atol=1e-6)
