"""Vectorised numpy kernels.  Signatures mirror ``_numba``."""
import numpy as np

PIVOT_TOL = 1e-12


def gauss_solve(M, b):
    """Gaussian elimination with partial pivoting.  Returns ``(x, ok)``."""
    a = np.array(M, dtype=np.float64)
    x = np.array(b, dtype=np.float64)
    n = x.shape[0]
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < PIVOT_TOL:
            return x, False
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        lam = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(lam, a[k, k:])
        x[k + 1:] -= lam * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x, True


def backward_reach(T, target, through):
    """States reaching ``target`` along paths whose other states lie in ``through``."""
    edge = T > 0
    reach = target.copy()
    while True:
        new = through & ~reach & edge[:, reach].any(axis=1)
        if not new.any():
            return reach
        reach |= new


def forward_reach(T, start):
    edge = T > 0
    reach = start.copy()
    frontier = start.copy()
    while frontier.any():
        nxt = edge[frontier].any(axis=0) & ~reach
        reach |= nxt
        frontier = nxt
    return reach


def assemble_split(T, xi_idx, nxi_idx, rows, cols, size):
    """Transition matrix of a split chain.

    Block ``b`` in (xi->xi, xi->nxi, nxi->xi, nxi->nxi) maps copy ``c1`` of
    ``u`` to copy ``c2`` of ``v`` with weight ``rows[b,u] * T[u,v] * cols[b,v]``.
    Index arrays hold -1 where a copy does not exist.
    """
    out = np.zeros((size, size))
    pairs = ((xi_idx, xi_idx), (xi_idx, nxi_idx), (nxi_idx, xi_idx), (nxi_idx, nxi_idx))
    for blk, (src_idx, dst_idx) in enumerate(pairs):
        src = np.flatnonzero(src_idx >= 0)
        dst = np.flatnonzero(dst_idx >= 0)
        if src.size == 0 or dst.size == 0:
            continue
        w = rows[blk, src][:, None] * T[np.ix_(src, dst)] * cols[blk, dst][None, :]
        out[np.ix_(src_idx[src], dst_idx[dst])] += w
    return out
