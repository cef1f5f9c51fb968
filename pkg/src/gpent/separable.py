"""Upper bounds on the relative entropy to partition-separable states.

For a density matrix rho over a set of blocks, minimize ``S(rho || sigma)``
over ``sigma = sum_k |phi_k><phi_k| + delta*I`` normalized, where every
``phi_k`` is a product of one vector per block. The identity term keeps
sigma full rank and is itself a product state, so every sigma visited is a
genuine member of the separable set and every reported value is a true upper
bound on the minimum.

Each restart alternates three steps until the objective stalls:

* joint L-BFGS over all block vectors (analytic gradient through the
  Frechet derivative of the matrix logarithm),
* an exact convex solve for the atom weights with the atoms held fixed,
* a conditional-gradient step that swaps the weakest atom for the product
  vector maximizing ``<phi| M |phi>``, M being the gradient of ``-Tr rho ln sigma``.

The unnormalized objective ``-Tr rho ln sigma + Tr sigma`` has its minimum
at ``Tr sigma = 1``, which removes the simplex constraint from the joint step.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .states import entropy_of_spectrum

DELTA = 1e-12
DEFAULT_SEED = 20240601
INNER_ITERS = 300
K_CAP = 32


@dataclass(frozen=True)
class Budget:
    """Optimizer settings.

    ``max_iters`` bounds the alternating rounds per restart; ``K`` is the
    number of product atoms (default ``min(D**2, 32)``). ``warm_start``
    adds deterministic dephasing seeds ahead of the random restarts.
    """

    restarts: int = 3
    max_iters: int = 40
    K: int | None = None
    tol: float = 1e-7
    seed: int = DEFAULT_SEED
    workers: int = 1
    warm_start: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "Budget":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown budget keys: {sorted(unknown)}")
        b = cls(**data)
        if b.restarts < 1 or b.max_iters < 1 or (b.K is not None and b.K < 1):
            raise ValueError("restarts, max_iters and K must be positive")
        return b

    @classmethod
    def from_json(cls, text: str) -> "Budget":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class PartitionResult:
    raw_nats: float
    converged: bool
    sigma: np.ndarray | None = None


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``Tr rho ln rho - Tr rho ln sigma`` in nats; sigma must be full rank."""
    w, U = np.linalg.eigh(sigma)
    if w.min() <= 0:
        raise ValueError("sigma must be positive definite")
    rt = U.conj().T @ rho @ U
    cross = float(np.real(np.diagonal(rt)) @ np.log(w))
    s_rho = entropy_of_spectrum(np.clip(np.linalg.eigvalsh(rho), 0.0, 1.0))
    return max(-s_rho - cross, 0.0)


class _Problem:
    def __init__(self, rho: np.ndarray, dims: tuple[int, ...]):
        self.rho = np.ascontiguousarray(rho, dtype=np.complex128)
        self.dims = tuple(dims)
        self.D = rho.shape[0]
        self.rows = sum(dims)
        self.offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
        self.neg_entropy = -entropy_of_spectrum(np.clip(np.linalg.eigvalsh(rho), 0.0, 1.0))
        self.evals = 0

    def _objective(self, Phi: np.ndarray):
        """Value and gradient operator M for ``sigma = Phi Phi^dag + delta I``."""
        return kernels.relent_objective(np.ascontiguousarray(Phi), self.rho, self.neg_entropy, DELTA)

    def value(self, V: np.ndarray) -> float:
        return self._objective(kernels.khatri_rao(V, self.dims))[0]

    def value_grad(self, V: np.ndarray):
        self.evals += 1
        Phi = kernels.khatri_rao(V, self.dims)
        f, M = self._objective(Phi)
        R = np.ascontiguousarray(Phi - M @ Phi)
        return f, 2.0 * kernels.khatri_rao_grad(R, V, self.dims)

    def gradient_operator(self, V: np.ndarray) -> np.ndarray:
        return self._objective(kernels.khatri_rao(V, self.dims))[1]

    def normalized_sigma(self, V: np.ndarray) -> np.ndarray:
        Phi = kernels.khatri_rao(V, self.dims)
        sigma = Phi @ Phi.conj().T
        sigma[np.diag_indices(self.D)] += DELTA
        return sigma / np.trace(sigma).real

    # --- steps -------------------------------------------------------------

    def joint_step(self, V: np.ndarray, maxiter: int = INNER_ITERS) -> np.ndarray:
        shape = V.shape
        n = V.size

        def fun(x):
            f, g = self.value_grad(np.ascontiguousarray((x[:n] + 1j * x[n:]).reshape(shape)))
            g = g.reshape(-1)
            return f, np.concatenate([g.real, g.imag])

        x0 = np.concatenate([V.real.reshape(-1), V.imag.reshape(-1)])
        res = minimize(fun, x0, jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter, "ftol": 1e-15, "gtol": 1e-11, "maxcor": 20})
        x = res.x if res.fun <= fun(x0)[0] else x0
        return np.ascontiguousarray((x[:n] + 1j * x[n:]).reshape(shape))

    def _split(self, V: np.ndarray):
        """Unit block vectors and atom weights (squared norms)."""
        U = V.copy()
        w = np.ones(V.shape[1])
        for b in range(len(self.dims)):
            blk = U[self.offsets[b]:self.offsets[b + 1]]
            norms = np.linalg.norm(blk, axis=0)
            safe = np.where(norms > 0, norms, 1.0)
            blk /= safe
            w *= np.where(norms > 0, norms, 0.0) ** 2
        return U, w

    def _join(self, U: np.ndarray, w: np.ndarray) -> np.ndarray:
        V = U.copy()
        V[: self.dims[0]] *= np.sqrt(np.maximum(w, 0.0))
        return np.ascontiguousarray(V)

    def weight_step(self, V: np.ndarray) -> np.ndarray:
        U, w0 = self._split(V)
        A = kernels.khatri_rao(U, self.dims)

        def fun(w):
            f, M = self._objective(A * np.sqrt(np.maximum(w, 0.0)))
            g = 1.0 - np.real(np.sum(A.conj() * (M @ A), axis=0))
            return f, g

        res = minimize(fun, w0, jac=True, method="L-BFGS-B",
                       bounds=[(0.0, None)] * len(w0),
                       options={"maxiter": INNER_ITERS, "ftol": 1e-15, "gtol": 1e-12})
        w = res.x if res.fun <= fun(w0)[0] else w0
        return self._join(U, w)

    def best_product(self, M: np.ndarray, rng: np.random.Generator, starts: int = 4, sweeps: int = 30):
        """Approximately maximize ``<phi|M|phi>`` over unit product vectors by block sweeps."""
        B = len(self.dims)
        T = M.reshape(self.dims + self.dims)
        best_val, best_vecs = -np.inf, None
        for s in range(starts):
            vecs = []
            for d in self.dims:
                v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                vecs.append(v / np.linalg.norm(v))
            val = -np.inf
            for _ in range(sweeps):
                prev = val
                for b in range(B):
                    Mb = _block_effective(T, vecs, b, B)
                    ev, evec = np.linalg.eigh(Mb)
                    vecs[b] = evec[:, -1]
                    val = ev[-1]
                if val - prev <= 1e-13 * max(1.0, abs(val)):
                    break
            if val > best_val:
                best_val, best_vecs = val, [v.copy() for v in vecs]
        return best_val, best_vecs


def _block_effective(T: np.ndarray, vecs, b: int, B: int) -> np.ndarray:
    """``<v_others| M |v_others>`` as a matrix on block b."""
    letters_k = "abcdefgh"[:B]
    letters_b = "ABCDEFGH"[:B]
    ops = [T]
    subs = [letters_k + letters_b]
    for c in range(B):
        if c != b:
            ops.append(vecs[c].conj())
            subs.append(letters_k[c])
            ops.append(vecs[c])
            subs.append(letters_b[c])
    return np.einsum(",".join(subs) + "->" + letters_k[b] + letters_b[b], *ops)


def _random_atoms(prob: _Problem, K: int, rng: np.random.Generator) -> np.ndarray:
    V = np.empty((prob.rows, K), dtype=complex)
    for b, d in enumerate(prob.dims):
        blk = rng.standard_normal((d, K)) + 1j * rng.standard_normal((d, K))
        V[prob.offsets[b]:prob.offsets[b + 1]] = blk / np.linalg.norm(blk, axis=0)
    V[: prob.dims[0]] /= math.sqrt(K)
    return V


def _dephasing_seed(prob: _Problem, bases: list[np.ndarray], K: int, rng, filler: float = 1e-4) -> np.ndarray:
    """Atoms of ``rho`` dephased in the product basis ``kron(bases)``.

    Columns beyond the support get random atoms scaled by ``filler``.
    """
    basis = bases[0]
    for Ub in bases[1:]:
        basis = np.kron(basis, Ub)
    diag = np.real(np.einsum("ik,ij,jk->k", basis.conj(), prob.rho, basis))
    order = np.argsort(-diag, kind="stable")[:K]
    V = _random_atoms(prob, K, rng)
    V[: prob.dims[0]] *= filler
    strides = np.cumprod((1,) + prob.dims[::-1])[::-1][1:]
    for col, idx in enumerate(order):
        digits = [(idx // s) % d for s, d in zip(strides, prob.dims)]
        for b, (Ub, i) in enumerate(zip(bases, digits)):
            V[prob.offsets[b]:prob.offsets[b + 1], col] = Ub[:, i]
        V[: prob.dims[0], col] *= math.sqrt(max(diag[idx], 0.0))
    return np.ascontiguousarray(V)


def _local_eigenbases(rho: np.ndarray, dims: tuple[int, ...]) -> list[np.ndarray]:
    B = len(dims)
    T = rho.reshape(dims + dims)
    out = []
    for b in range(B):
        others = [c for c in range(B) if c != b]
        perm = [b] + others + [B + b] + [B + c for c in others]
        rest = math.prod(dims[c] for c in others)
        red = np.einsum("ijkj->ik", T.transpose(perm).reshape(dims[b], rest, dims[b], rest))
        _, U = np.linalg.eigh(red)
        out.append(U[:, ::-1])
    return out


def _restart(prob: _Problem, V: np.ndarray, budget: Budget, rng: np.random.Generator) -> tuple[float, np.ndarray, bool]:
    f_prev = prob.value(V)
    converged = False
    gap_tol = 1e-9
    for _ in range(budget.max_iters):
        V = prob.joint_step(V)
        V = prob.weight_step(V)
        M = prob.gradient_operator(V)
        top, vecs = prob.best_product(M, rng)
        if top > 1.0 + gap_tol:
            _, w = prob._split(V)
            k = int(np.argmin(w))
            for b, v in enumerate(vecs):
                V[prob.offsets[b]:prob.offsets[b + 1], k] = v
            V[: prob.dims[0], k] *= math.sqrt(max(1e-3 * w.sum(), 1e-8))
            V = prob.weight_step(V)
        f = prob.value(V)
        if f_prev - f <= budget.tol * max(1.0, abs(f)):
            converged = True
            f_prev = min(f, f_prev)
            break
        f_prev = f
    return f_prev, V, converged


def minimize_relative_entropy(
    rho: np.ndarray, dims: tuple[int, ...], budget: Budget, rng_seed: np.random.SeedSequence | None = None
) -> PartitionResult:
    """Upper bound on ``min S(rho || sigma)`` over sigma separable across blocks of ``dims``.

    ``rho`` is ordered so that the blocks are contiguous tensor factors.
    """
    dims = tuple(int(d) for d in dims)
    prob = _Problem(np.asarray(rho, dtype=complex), dims)
    D = prob.D
    K = budget.K or min(D * D, K_CAP)
    seq = rng_seed if rng_seed is not None else np.random.SeedSequence(budget.seed)
    children = seq.spawn(budget.restarts)

    if budget.warm_start and len(dims) == 2 and np.linalg.eigvalsh(prob.rho)[-1] >= 1.0 - 1e-12:
        # pure across two blocks: dephasing in the Schmidt basis is optimal
        V = _dephasing_seed(prob, _local_eigenbases(prob.rho, dims), K, np.random.default_rng(seq), 0.0)
        sigma = prob.normalized_sigma(V)
        return PartitionResult(relative_entropy(prob.rho, sigma), True, sigma)

    starts = []
    if budget.warm_start:
        init_rng = np.random.default_rng(seq.spawn(1)[0])
        eye_bases = [np.eye(d, dtype=complex) for d in dims]
        starts.append(_dephasing_seed(prob, _local_eigenbases(prob.rho, dims), K, init_rng))
        starts.append(_dephasing_seed(prob, eye_bases, K, init_rng))

    def run(i: int):
        rng = np.random.default_rng(children[i])
        V0 = starts[i] if i < len(starts) else _random_atoms(prob, K, rng)
        return _restart(prob, V0, budget, rng)

    n_runs = max(budget.restarts, len(starts))
    while len(children) < n_runs:
        children = children + seq.spawn(n_runs - len(children))
    if budget.workers > 1:
        with ThreadPoolExecutor(budget.workers) as pool:
            results = list(pool.map(run, range(n_runs)))
    else:
        results = [run(i) for i in range(n_runs)]

    best = None
    for f, V, conv in results:
        sigma = prob.normalized_sigma(V)
        val = relative_entropy(prob.rho, sigma)
        if best is None or val < best.raw_nats:
            best = PartitionResult(val, conv, sigma)
    return best
