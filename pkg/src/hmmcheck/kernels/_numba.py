"""Loop kernels compiled with numba.  Signatures mirror ``_numpy``."""
import numpy as np
from numba import njit

PIVOT_TOL = 1e-12


@njit(cache=True)
def gauss_solve(M, b):
    n = b.shape[0]
    a = M.astype(np.float64).copy()
    x = b.astype(np.float64).copy()
    for k in range(n):
        p = k
        best = abs(a[k, k])
        for i in range(k + 1, n):
            if abs(a[i, k]) > best:
                best = abs(a[i, k])
                p = i
        if best < PIVOT_TOL:
            return x, False
        if p != k:
            for j in range(n):
                a[k, j], a[p, j] = a[p, j], a[k, j]
            x[k], x[p] = x[p], x[k]
        for i in range(k + 1, n):
            lam = a[i, k] / a[k, k]
            if lam != 0.0:
                for j in range(k, n):
                    a[i, j] -= lam * a[k, j]
                x[i] -= lam * x[k]
    for k in range(n - 1, -1, -1):
        s = x[k]
        for j in range(k + 1, n):
            s -= a[k, j] * x[j]
        x[k] = s / a[k, k]
    return x, True


@njit(cache=True)
def backward_reach(T, target, through):
    n = T.shape[0]
    reach = target.copy()
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for v in range(n):
        if reach[v]:
            stack[top] = v
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for u in range(n):
            if not reach[u] and through[u] and T[u, v] > 0:
                reach[u] = True
                stack[top] = u
                top += 1
    return reach


@njit(cache=True)
def forward_reach(T, start):
    n = T.shape[0]
    reach = start.copy()
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for u in range(n):
        if reach[u]:
            stack[top] = u
            top += 1
    while top > 0:
        top -= 1
        u = stack[top]
        for v in range(n):
            if not reach[v] and T[u, v] > 0:
                reach[v] = True
                stack[top] = v
                top += 1
    return reach


@njit(cache=True)
def assemble_split(T, xi_idx, nxi_idx, rows, cols, size):
    n = T.shape[0]
    out = np.zeros((size, size))
    for u in range(n):
        for v in range(n):
            t = T[u, v]
            if t == 0.0:
                continue
            if xi_idx[u] >= 0:
                if xi_idx[v] >= 0:
                    out[xi_idx[u], xi_idx[v]] += rows[0, u] * t * cols[0, v]
                if nxi_idx[v] >= 0:
                    out[xi_idx[u], nxi_idx[v]] += rows[1, u] * t * cols[1, v]
            if nxi_idx[u] >= 0:
                if xi_idx[v] >= 0:
                    out[nxi_idx[u], xi_idx[v]] += rows[2, u] * t * cols[2, v]
                if nxi_idx[v] >= 0:
                    out[nxi_idx[u], nxi_idx[v]] += rows[3, u] * t * cols[3, v]
    return out
