"""NumPy implementations of the optimizer kernels.

Block factors are packed: ``V`` has shape ``(sum(dims), K)`` and rows
``offsets[b]:offsets[b + 1]`` hold the vectors of block ``b`` for all K atoms.
"""
import numpy as np


def log_divided_differences(lam):
    """Matrix of first divided differences of ``log`` at the points ``lam``.

    Entry (i, j) is ``(log l_i - log l_j) / (l_i - l_j)``, or ``1 / l_i`` on
    (near-)coincident points.
    """
    lam = np.asarray(lam, dtype=float)
    li = lam[:, None]
    lj = lam[None, :]
    diff = li - lj
    close = np.abs(diff) <= 1e-12 * np.maximum(li, lj)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (np.log(li) - np.log(lj)) / diff
    mean = 2.0 / (li + lj)
    return np.where(close, mean, out)


def khatri_rao(V, dims):
    """Columns ``kron(v_1k, ..., v_Bk)`` for every atom k."""
    K = V.shape[1]
    out = np.ones((1, K), dtype=complex)
    start = 0
    for d in dims:
        blk = V[start:start + d]
        out = (out[:, None, :] * blk[None, :, :]).reshape(-1, K)
        start += d
    return out


def khatri_rao_grad(R, V, dims):
    """Contract each column of ``R`` with the conjugated factors of all other blocks.

    Returns the packed array ``G`` with ``G_b[i, k] = sum R[.., i, .., k] prod_{c != b} conj(v_c)``.
    """
    B = len(dims)
    K = V.shape[1]
    T = R.reshape(tuple(dims) + (K,))
    offs = np.concatenate([[0], np.cumsum(dims)])
    blocks = [V[offs[b]:offs[b + 1]].conj() for b in range(B)]
    letters = "abcdefghijklmnop"[:B]
    G = np.empty_like(V)
    for b in range(B):
        ops = [T]
        subs = [letters + "z"]
        for c in range(B):
            if c != b:
                ops.append(blocks[c])
                subs.append(letters[c] + "z")
        G[offs[b]:offs[b + 1]] = np.einsum(",".join(subs) + "->" + letters[b] + "z", *ops)
    return G


def relent_objective(Phi, rho, neg_entropy, delta):
    """Objective ``-S(rho) - Tr rho ln sigma + Tr sigma - 1`` and its gradient operator.

    ``sigma = Phi Phi^dag + delta I``. The returned ``M`` satisfies
    ``d(-Tr rho ln sigma) = -Tr(M d sigma)``.
    """
    D = Phi.shape[0]
    sigma = Phi @ Phi.conj().T
    sigma[np.diag_indices(D)] += delta
    w, U = np.linalg.eigh(sigma)
    w = np.maximum(w, 0.5 * delta)
    rt = U.conj().T @ rho @ U
    f = neg_entropy - float(np.real(np.diagonal(rt)) @ np.log(w)) + float(w.sum()) - 1.0
    M = U @ (log_divided_differences(w) * rt) @ U.conj().T
    return f, M
