"""Independent reference computations used as test oracles.

Nothing here calls into gpent; each function re-derives its value from first
principles with plain itertools/numpy so the library is checked against code
that shares none of its structure.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


def brute_force_labels(N: int) -> set[frozenset[frozenset[int]]]:
    """Every set of >= 2 disjoint nonempty groups over any >= 2 of the N parties.

    Groups are found by colouring each chosen party with a block index and
    keeping colourings whose used colours number at least two.
    """
    out = set()
    parties = range(1, N + 1)
    for size in range(2, N + 1):
        for subset in itertools.combinations(parties, size):
            for colours in itertools.product(range(size), repeat=size):
                blocks = {}
                for p, c in zip(subset, colours):
                    blocks.setdefault(c, set()).add(p)
                if len(blocks) >= 2:
                    out.add(frozenset(frozenset(b) for b in blocks.values()))
    return out


def stirling2_explicit(n: int, m: int) -> int:
    """Inclusion-exclusion closed form."""
    return sum((-1) ** j * math.comb(m, j) * (m - j) ** n for j in range(m + 1)) // math.factorial(m)


def shannon_nats(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 1e-15]
    return float(-(p * np.log(p)).sum())


def binary_entropy(x: float) -> float:
    return shannon_nats([x, 1 - x])


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def reduced_by_loops(vec: np.ndarray, dims, keep) -> np.ndarray:
    """Partial trace of |vec><vec| by explicit index loops (keep is 1-based)."""
    keep = sorted(keep)
    n = len(dims)
    kd = [dims[i - 1] for i in keep]
    out = np.zeros((math.prod(kd), math.prod(kd)), dtype=complex)
    amps = vec.reshape(dims)
    for idx in itertools.product(*(range(d) for d in dims)):
        for jdx in itertools.product(*(range(d) for d in dims)):
            if any(idx[i] != jdx[i] for i in range(n) if i + 1 not in keep):
                continue
            r = np.ravel_multi_index([idx[i - 1] for i in keep], kd)
            c = np.ravel_multi_index([jdx[i - 1] for i in keep], kd)
            out[r, c] += amps[idx] * np.conj(amps[jdx])
    return out


def schmidt_entropy(vec: np.ndarray, dA: int) -> float:
    """Entanglement entropy of a bipartite pure vector from its singular values."""
    s = np.linalg.svd(vec.reshape(dA, -1), compute_uv=False)
    return shannon_nats(s ** 2)


def werner_ree(F: float) -> float:
    """Relative entropy of entanglement of F|Phi+><Phi+| + (1-F)/3 (I - |Phi+><Phi+|), F >= 1/2."""
    return math.log(2) - binary_entropy(F)


def werner_state(F: float) -> np.ndarray:
    phi = (ket("00") + ket("11")) / math.sqrt(2)
    P = np.outer(phi, phi.conj())
    return F * P + (1 - F) / 3 * (np.eye(4) - P)


def w_state_fully_separable_ree() -> float:
    """REE of the 3-qubit W state w.r.t. fully separable states: log2(9/4) bits."""
    return math.log(9 / 4)


def haar_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
