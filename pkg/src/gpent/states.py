"""Dense multipartite states, partial traces, entropies and product channels.

Index convention: party 1 is the most significant tensor index, so the
amplitude of ``|i_1 i_2 ... i_N>`` sits at the row-major position of
``(i_1, ..., i_N)`` in an array of shape ``dims``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 2**14
NORM_TOL = 1e-10
PSD_TOL = 1e-9
EIG_CUTOFF = 1e-12


class StateError(ValueError):
    """Invalid state data or an operation outside the supported shape."""


class ChannelError(ValueError):
    """Kraus operators that violate completeness or the GP structure."""


def _check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise StateError("a state needs at least one party")
    if any(d < 2 for d in dims):
        raise StateError(f"local dimensions must be >= 2, got {dims}")
    if math.prod(dims) > MAX_DIM:
        raise StateError(f"total dimension {math.prod(dims)} exceeds cap {MAX_DIM}")
    return dims


def _positions(parties: Iterable[int], n: int) -> list[int]:
    pos = [int(p) - 1 for p in parties]
    if any(not 0 <= p < n for p in pos):
        raise StateError(f"party out of range 1..{n}: {list(parties)}")
    if len(set(pos)) != len(pos):
        raise StateError("repeated party")
    return pos


@dataclass(frozen=True, eq=False)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != math.prod(dims):
            raise StateError(f"expected {math.prod(dims)} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state not normalized (norm {norm!r})")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, dims, vec) -> "PureState":
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        n = np.linalg.norm(vec)
        if n == 0:
            raise StateError("zero vector")
        return cls(tuple(dims), vec / n)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        D = math.prod(dims)
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (D, D):
            raise StateError(f"expected a {D}x{D} matrix, got {m.shape}")
        if np.abs(m - m.conj().T).max() > NORM_TOL:
            raise StateError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > NORM_TOL:
            raise StateError(f"density matrix trace {tr!r} != 1")
        m = 0.5 * (m + m.conj().T)
        if np.linalg.eigvalsh(m).min() < -PSD_TOL:
            raise StateError("density matrix is not positive semidefinite")
        m.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def density(self) -> "DensityMatrix":
        return self


State = PureState | DensityMatrix


# --- builders --------------------------------------------------------------

def basis_state(dims: Sequence[int], digits: Sequence[int]) -> PureState:
    dims = _check_dims(dims)
    vec = np.zeros(math.prod(dims), dtype=complex)
    vec[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return PureState(dims, vec)


def make_schmidt_state(coeffs: Sequence[complex], dims: Sequence[int]) -> PureState:
    """``sum_k a_k |k>|k>...|k>`` in the computational local bases."""
    dims = _check_dims(dims)
    a = np.asarray(coeffs, dtype=complex)
    if a.size > min(dims):
        raise StateError(f"{a.size} Schmidt terms exceed the smallest local dimension {min(dims)}")
    if abs(np.sum(np.abs(a) ** 2) - 1.0) > NORM_TOL:
        raise StateError("Schmidt coefficients are not normalized")
    vec = np.zeros(math.prod(dims), dtype=complex)
    for k, ak in enumerate(a):
        vec[np.ravel_multi_index((k,) * len(dims), dims)] = ak
    return PureState(dims, vec)


def make_ghz(subset: Iterable[int], dims: Sequence[int] | int) -> PureState:
    """GHZ-like state on ``subset`` with every other party in ``|0>``.

    ``dims`` may be an integer N, meaning N qubits.
    """
    if isinstance(dims, int):
        dims = (2,) * dims
    dims = _check_dims(dims)
    subset = sorted(set(int(p) for p in subset))
    if len(subset) < 2:
        raise StateError("a GHZ-like state needs at least two parties")
    pos = _positions(subset, len(dims))
    if any(dims[p] != 2 for p in pos):
        raise StateError("GHZ parties must be qubits")
    ones = [1 if i in pos else 0 for i in range(len(dims))]
    vec = np.zeros(math.prod(dims), dtype=complex)
    vec[0] = vec[np.ravel_multi_index(tuple(ones), dims)] = 1 / math.sqrt(2)
    return PureState(dims, vec)


def haar_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    dims = _check_dims(dims)
    D = math.prod(dims)
    v = rng.standard_normal(D) + 1j * rng.standard_normal(D)
    return PureState.from_unnormalized(dims, v)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


# --- products --------------------------------------------------------------

def tensor(a: State, b: State) -> State:
    """Tensor product; the parties of ``b`` are appended after those of ``a``."""
    dims = _check_dims(a.dims + b.dims)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(dims, np.kron(a.amplitudes, b.amplitudes))
    return DensityMatrix(dims, np.kron(a.density().matrix, b.density().matrix))


def tensor_aligned(*states: State) -> State:
    """Tensor product in which party i of every factor joins one laboratory.

    All factors must have the same number of parties N; the result has N
    parties with local dimension equal to the product of the factors' local
    dimensions. Within a laboratory, the first factor is most significant.
    """
    if not states:
        raise StateError("nothing to tensor")
    N = states[0].n_parties
    if any(s.n_parties != N for s in states):
        raise StateError("aligned tensor needs equal party counts")
    dims = _check_dims(
        math.prod(s.dims[i] for s in states) for i in range(N)
    )
    c = len(states)
    # axis order after kron: (copy0: p1..pN, copy1: p1..pN, ...); want party-major
    perm = [j * N + i for i in range(N) for j in range(c)]
    if all(isinstance(s, PureState) for s in states):
        vec = states[0].amplitudes
        for s in states[1:]:
            vec = np.kron(vec, s.amplitudes)
        shape = [d for s in states for d in s.dims]
        vec = vec.reshape(shape).transpose(perm).reshape(-1)
        return PureState(dims, vec)
    mat = states[0].density().matrix
    for s in states[1:]:
        mat = np.kron(mat, s.density().matrix)
    shape = [d for s in states for d in s.dims]
    full_perm = perm + [p + c * N for p in perm]
    mat = mat.reshape(shape + shape).transpose(full_perm).reshape(mat.shape)
    return DensityMatrix(dims, mat)


def tensor_copies_aligned(state: State, copies: int) -> State:
    if copies < 1:
        raise StateError("need at least one copy")
    return tensor_aligned(*([state] * copies))


def permute_parties(state: State, order: Sequence[int]) -> State:
    """Reorder parties: new party i is old party ``order[i-1]`` (1-based)."""
    pos = _positions(order, state.n_parties)
    if len(pos) != state.n_parties:
        raise StateError("order must list every party once")
    dims = tuple(state.dims[p] for p in pos)
    if isinstance(state, PureState):
        return PureState(dims, state.tensor().transpose(pos).reshape(-1))
    n = state.n_parties
    m = state.matrix.reshape(state.dims * 2).transpose(pos + [p + n for p in pos])
    return DensityMatrix(dims, m.reshape(state.matrix.shape))


# --- reductions ------------------------------------------------------------

def _reduced_matrix(state: State, keep: Sequence[int]) -> tuple[tuple[int, ...], np.ndarray]:
    n = state.n_parties
    kpos = sorted(_positions(keep, n))
    if not kpos:
        raise StateError("partial trace must keep at least one party")
    tpos = [p for p in range(n) if p not in kpos]
    kdims = tuple(state.dims[p] for p in kpos)
    dk = math.prod(kdims)
    dt = math.prod(state.dims[p] for p in tpos)
    if isinstance(state, PureState):
        m = state.tensor().transpose(kpos + tpos).reshape(dk, dt)
        return kdims, m @ m.conj().T
    r = state.matrix.reshape(state.dims * 2)
    r = r.transpose(kpos + tpos + [p + n for p in kpos] + [p + n for p in tpos])
    r = r.reshape(dk, dt, dk, dt)
    return kdims, np.einsum("ijkj->ik", r)


def partial_trace(state: State, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on the parties in ``keep`` (1-based, any order)."""
    kdims, m = _reduced_matrix(state, list(keep))
    return DensityMatrix(kdims, m)


def reduced_pure_state(state: PureState, keep: Iterable[int], tol: float = PSD_TOL) -> PureState | None:
    """The reduced state on ``keep`` as a ket when it is pure within ``tol``, else None."""
    keep = sorted(keep)
    if len(keep) == state.n_parties:
        return state
    kdims, m = _reduced_matrix(state, keep)
    w, v = np.linalg.eigh(m)
    if w[-1] < 1 - tol:
        return None
    return PureState.from_unnormalized(kdims, v[:, -1])


def spectrum(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of a density matrix, checked for PSD and clamped to [0, 1]."""
    w = np.linalg.eigvalsh(matrix)
    if w.min() < -PSD_TOL:
        raise StateError(f"matrix not PSD (min eigenvalue {w.min()!r})")
    return np.clip(w, 0.0, 1.0)


def entropy_of_spectrum(w: np.ndarray) -> float:
    w = w[w >= EIG_CUTOFF]
    return max(0.0, float(-np.sum(w * np.log(w))))


def von_neumann_entropy(rho: State | np.ndarray) -> float:
    """Entropy in nats. Eigenvalues below 1e-12 contribute nothing."""
    if isinstance(rho, PureState):
        return 0.0
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return entropy_of_spectrum(spectrum(m))


def entanglement_entropy(psi: PureState, side: Iterable[int]) -> float:
    """Entropy of the reduced state of ``side``, computed from Schmidt values."""
    n = psi.n_parties
    kpos = sorted(_positions(side, n))
    tpos = [p for p in range(n) if p not in kpos]
    if not kpos or not tpos:
        return 0.0
    dk = math.prod(psi.dims[p] for p in kpos)
    s = np.linalg.svd(psi.tensor().transpose(kpos + tpos).reshape(dk, -1), compute_uv=False)
    return entropy_of_spectrum(np.clip(s**2, 0.0, 1.0))


# --- product channels ------------------------------------------------------

def apply_local(vec: np.ndarray, dims: Sequence[int], parties: Sequence[int], op: np.ndarray) -> np.ndarray:
    """Apply ``op`` to the joint space of ``parties`` (1-based) of a ket tensor."""
    n = len(dims)
    pos = _positions(parties, n)
    d = math.prod(dims[p] for p in pos)
    op = np.asarray(op, dtype=complex)
    if op.shape[1] != d:
        raise ChannelError(f"operator acts on dimension {op.shape[1]}, GP has {d}")
    if op.shape[0] != d:
        raise ChannelError("GP operators must be square")
    t = vec.reshape(dims)
    rest = [p for p in range(n) if p not in pos]
    t = t.transpose(pos + rest).reshape(d, -1)
    t = (op @ t).reshape([dims[p] for p in pos] + [dims[p] for p in rest])
    inv = np.argsort(pos + rest)
    return t.transpose(inv).reshape(-1)


@dataclass(frozen=True, eq=False)
class ProductKrausChannel:
    """Outcome-resolved channel whose Kraus operators factor over disjoint GPs.

    ``gps`` partitions the parties; ``outcomes[k][q]`` is the operator of
    outcome k on GP ``gps[q]`` (acting on the GP's parties in ascending
    order). Identity factors may be given as ``None``.
    """

    gps: tuple[tuple[int, ...], ...]
    outcomes: tuple[tuple[np.ndarray | None, ...], ...]
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        gps = tuple(tuple(sorted(g)) for g in self.gps)
        object.__setattr__(self, "gps", gps)
        object.__setattr__(self, "outcomes", tuple(tuple(o) for o in self.outcomes))
        flat = sorted(p for g in gps for p in g)
        if len(set(flat)) != len(flat):
            raise ChannelError("GPs of a product channel must be disjoint")
        for o in self.outcomes:
            if len(o) != len(gps):
                raise ChannelError("each outcome needs one operator per GP")

    @classmethod
    def from_local_instruments(cls, gps, instruments) -> "ProductKrausChannel":
        """Independent instruments on each GP; outcomes are all combinations."""
        outs = tuple(itertools.product(*[list(ins) for ins in instruments]))
        return cls(tuple(gps), outs)

    def full_operators(self, dims: Sequence[int]) -> list[np.ndarray]:
        D = math.prod(dims)
        ops = []
        for o in self.outcomes:
            g = np.eye(D, dtype=complex)
            for parties, op in zip(self.gps, o):
                if op is not None:
                    g = np.stack([apply_local(col, dims, parties, op) for col in g.T], axis=1)
            ops.append(g)
        return ops

    def check_completeness(self, dims: Sequence[int], tol: float = PSD_TOL) -> None:
        D = math.prod(dims)
        total = np.zeros((D, D), dtype=complex)
        for g in self.full_operators(dims):
            total += g.conj().T @ g
        excess = np.linalg.eigvalsh(0.5 * (total + total.conj().T)).max() - 1.0
        if excess > tol:
            raise ChannelError(f"sum of G^dag G exceeds identity by {excess:.3g}")


def apply_selective_measurement(
    psi: PureState, channel: ProductKrausChannel, cutoff: float = EIG_CUTOFF
) -> list[tuple[float, PureState]]:
    """Outcome ensemble ``[(p_k, G_k psi / |G_k psi|)]``; tiny outcomes are dropped."""
    covered = {p for g in channel.gps for p in g}
    if max(covered) > psi.n_parties:
        raise ChannelError("channel acts on parties the state does not have")
    channel.check_completeness(psi.dims)
    out = []
    for o in channel.outcomes:
        v = psi.amplitudes
        for parties, op in zip(channel.gps, o):
            if op is not None:
                v = apply_local(v, psi.dims, parties, op)
        p = float(np.vdot(v, v).real)
        if p >= cutoff:
            out.append((p, PureState(psi.dims, v / math.sqrt(p))))
    return out


def random_instrument(d: int, outcomes: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Kraus operators of a random complete instrument, cut from a Haar isometry."""
    big = haar_unitary(d * outcomes, rng)[:, :d]
    return [big[k * d:(k + 1) * d, :] for k in range(outcomes)]


# --- json io ---------------------------------------------------------------

def state_to_json(psi: PureState) -> str:
    # repr of a float is the shortest string that round-trips exactly
    amps = [[float(z.real), float(z.imag)] for z in psi.amplitudes]
    return json.dumps({"dims": list(psi.dims), "amplitudes": amps})


def state_from_json(text: str) -> PureState:
    try:
        data = json.loads(text)
        dims = data["dims"]
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise StateError(f"bad state file: {exc}") from exc
    return PureState(tuple(dims), amps)


def load_state(path) -> PureState:
    with open(path) as fh:
        return state_from_json(fh.read())


def save_state(psi: PureState, path) -> None:
    with open(path, "w") as fh:
        fh.write(state_to_json(psi))
