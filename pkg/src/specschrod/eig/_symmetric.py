"""Symmetric dense eigensolver: Householder tridiagonalization + implicit QL."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def tridiagonalize(a):
    """Reduce symmetric ``a`` to tridiagonal form ``T = Q^T a Q``.

    Returns the diagonal ``d``, the off-diagonal ``e`` (``e[i]`` couples rows
    ``i`` and ``i+1``; ``e[n-1] = 0``) and the orthogonal ``Q``.
    """
    n = a.shape[0]
    a = a.copy()
    d = np.zeros(n)
    e = np.zeros(n)
    vs = np.zeros((n, n))
    betas = np.zeros(n)
    p = np.zeros(n)
    for k in range(n - 2):
        m = n - k - 1
        norm2 = 0.0
        for i in range(k + 1, n):
            norm2 += a[i, k] * a[i, k]
        tail = norm2 - a[k + 1, k] * a[k + 1, k]
        if tail == 0.0:
            e[k] = a[k + 1, k]
            continue
        norm = math.sqrt(norm2)
        alpha = -norm if a[k + 1, k] >= 0.0 else norm
        v = vs[k + 1 :, k]
        for i in range(m):
            v[i] = a[k + 1 + i, k]
        v[0] -= alpha
        vv = v[0] * v[0] + tail
        beta = 2.0 / vv
        betas[k] = beta

        # p = beta * A22 v ; w = p - (beta/2)(p.v) v ; A22 -= v w^T + w v^T
        pv = 0.0
        for i in range(m):
            s = 0.0
            for j in range(m):
                s += a[k + 1 + i, k + 1 + j] * v[j]
            p[i] = beta * s
            pv += p[i] * v[i]
        kk = 0.5 * beta * pv
        for i in range(m):
            p[i] -= kk * v[i]
        for i in range(m):
            for j in range(m):
                a[k + 1 + i, k + 1 + j] -= v[i] * p[j] + p[i] * v[j]
        e[k] = alpha

    for i in range(n):
        d[i] = a[i, i]
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]

    q = np.eye(n)
    for k in range(n - 3, -1, -1):
        beta = betas[k]
        if beta == 0.0:
            continue
        v = vs[k + 1 :, k]
        for j in range(n):
            s = 0.0
            for i in range(n - k - 1):
                s += v[i] * q[k + 1 + i, j]
            s *= beta
            for i in range(n - k - 1):
                q[k + 1 + i, j] -= s * v[i]
    return d, e, q


@njit(cache=True)
def tridiagonal_ql(d, e, z, max_iter):
    """Implicit QL iteration with Wilkinson shifts on a symmetric tridiagonal.

    ``d`` and ``e`` are overwritten: on return ``d`` holds the (unsorted)
    eigenvalues and the columns of ``z`` the rotated vectors. Returns -1 on
    success or the index of the eigenvalue that failed to converge.
    """
    n = d.shape[0]
    eps = np.finfo(np.float64).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return l
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(z.shape[0]):
                    f = z[k, i + 1]
                    z[k, i + 1] = s * z[k, i] + c * f
                    z[k, i] = c * z[k, i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1
