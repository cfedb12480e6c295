"""Nonsymmetric dense eigensolver kernels.

Pipeline: diagonal balancing, Householder reduction to upper Hessenberg form,
Francis double-shift QR for the eigenvalues, and inverse iteration on the
Hessenberg matrix for the eigenvectors, which are then mapped back through
the Householder reflectors and the balancing scale.
"""

import math

import numpy as np
from numba import njit

RADIX = 2.0


@njit(cache=True)
def balance(a):
    """Parlett-Reinsch balancing in place; returns the diagonal scale ``D``.

    On return ``a`` holds ``D^-1 A D``. Scale factors are powers of two so
    no rounding is introduced.
    """
    n = a.shape[0]
    scale = np.ones(n)
    sqrdx = RADIX * RADIX
    done = False
    while not done:
        done = True
        for i in range(n):
            r = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c != 0.0 and r != 0.0:
                g = r / RADIX
                f = 1.0
                s = c + r
                while c < g:
                    f *= RADIX
                    c *= sqrdx
                g = r * RADIX
                while c > g:
                    f /= RADIX
                    c /= sqrdx
                if (c + r) / f < 0.95 * s:
                    done = False
                    g = 1.0 / f
                    scale[i] *= f
                    for j in range(n):
                        a[i, j] *= g
                    for j in range(n):
                        a[j, i] *= f
    return scale


@njit(cache=True)
def hessenberg(a):
    """Householder reduction ``H = Q^T A Q`` in place.

    Returns ``(vs, betas)``: column ``k`` of ``vs`` (rows ``k+1..``) holds the
    k-th reflector, so that ``Q = H_0 H_1 ... H_{n-3}``.
    """
    n = a.shape[0]
    vs = np.zeros((n, n))
    betas = np.zeros(n)
    for k in range(n - 2):
        norm2 = 0.0
        for i in range(k + 1, n):
            norm2 += a[i, k] * a[i, k]
        tail = norm2 - a[k + 1, k] * a[k + 1, k]
        if tail == 0.0:
            continue
        norm = math.sqrt(norm2)
        alpha = -norm if a[k + 1, k] >= 0.0 else norm
        m = n - k - 1
        v = vs[k + 1 :, k]
        for i in range(m):
            v[i] = a[k + 1 + i, k]
        v[0] -= alpha
        beta = 2.0 / (v[0] * v[0] + tail)
        betas[k] = beta
        # left: rows k+1.., columns k..
        for j in range(k, n):
            s = 0.0
            for i in range(m):
                s += v[i] * a[k + 1 + i, j]
            s *= beta
            for i in range(m):
                a[k + 1 + i, j] -= s * v[i]
        # right: all rows, columns k+1..
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += a[i, k + 1 + j] * v[j]
            s *= beta
            for j in range(m):
                a[i, k + 1 + j] -= s * v[j]
        a[k + 1, k] = alpha
        for i in range(k + 2, n):
            a[i, k] = 0.0
    return vs, betas


@njit(cache=True)
def apply_q(vs, betas, y):
    """``Q y`` for a complex vector ``y``."""
    n = y.shape[0]
    x = y.copy()
    for k in range(n - 3, -1, -1):
        beta = betas[k]
        if beta == 0.0:
            continue
        s = 0.0 + 0.0j
        for i in range(n - k - 1):
            s += vs[k + 1 + i, k] * x[k + 1 + i]
        s *= beta
        for i in range(n - k - 1):
            x[k + 1 + i] -= s * vs[k + 1 + i, k]
    return x


@njit(cache=True)
def _sign(a, b):
    return abs(a) if b >= 0.0 else -abs(a)


@njit(cache=True)
def hessenberg_qr(h, max_iter):
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    Works on a copy. ``max_iter`` is an average per eigenvalue: the sweep
    count is capped at ``max_iter * n`` overall, since the first deflations
    of a large matrix routinely need far more sweeps than the later ones.
    Returns ``(wr, wi, status)``; ``status`` is -1 on success, otherwise the
    (0-based) index of the eigenvalue being deflated when the budget ran out.
    """
    n = h.shape[0]
    # 1-based working copy keeps the index arithmetic of the classical
    # formulation readable
    a = np.zeros((n + 1, n + 1))
    for i in range(n):
        for j in range(n):
            a[i + 1, j + 1] = h[i, j]
    wr = np.zeros(n + 1)
    wi = np.zeros(n + 1)

    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(a[i, j])

    nn = n
    t = 0.0
    total = 0
    budget = max_iter * n
    x = y = z = w = p = q = r = s = 0.0
    while nn >= 1:
        its = 0
        while True:
            l = nn
            while l >= 2:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) + s == s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + _sign(z, p)
                    wr[nn - 1] = x + z
                    wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = 0.0
                    wi[nn] = 0.0
                else:
                    wr[nn - 1] = x + p
                    wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                nn -= 2
                break
            if total >= budget:
                return wr[1:], wi[1:], nn - 1
            if its > 0 and its % 10 == 0:
                # exceptional shift
                t += x
                for i in range(1, nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            total += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            k = m
            while k <= nn - 1:
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = a[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = _sign(math.sqrt(p * p + q * q + r * r), p)
                if s != 0.0:
                    if k == m:
                        if l != m:
                            a[k, k - 1] = -a[k, k - 1]
                    else:
                        a[k, k - 1] = -s * x
                    p += s
                    x = p / s
                    y = q / s
                    z = r / s
                    q /= p
                    r /= p
                    for j in range(k, nn + 1):
                        p = a[k, j] + q * a[k + 1, j]
                        if k != nn - 1:
                            p += r * a[k + 2, j]
                            a[k + 2, j] -= p * z
                        a[k + 1, j] -= p * y
                        a[k, j] -= p * x
                    mmin = nn if nn < k + 3 else k + 3
                    for i in range(l, mmin + 1):
                        p = x * a[i, k] + y * a[i, k + 1]
                        if k != nn - 1:
                            p += z * a[i, k + 2]
                            a[i, k + 2] -= p * r
                        a[i, k + 1] -= p * q
                        a[i, k] -= p
                k += 1
            if l >= nn - 1:
                break
    return wr[1:], wi[1:], -1


@njit(cache=True)
def inverse_iteration(h, lam, hnorm, iters):
    """Eigenvector of Hessenberg ``h`` for the (approximate) eigenvalue ``lam``.

    ``h - lam I`` is factored once by Gaussian elimination with adjacent-row
    pivoting (the Hessenberg structure means only rows ``k`` and ``k+1``
    compete for the pivot); zero pivots are replaced by ``eps * hnorm``.
    """
    n = h.shape[0]
    eps = np.finfo(np.float64).eps
    tiny = eps * hnorm if hnorm > 0.0 else eps
    u = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            u[i, j] = h[i, j]
        u[i, i] -= lam
    mult = np.zeros(n, dtype=np.complex128)
    swap = np.zeros(n, dtype=np.bool_)
    for k in range(n - 1):
        if abs(u[k + 1, k]) > abs(u[k, k]):
            swap[k] = True
            for j in range(k, n):
                tmp = u[k, j]
                u[k, j] = u[k + 1, j]
                u[k + 1, j] = tmp
        if u[k, k] == 0.0:
            u[k, k] = tiny
        mult[k] = u[k + 1, k] / u[k, k]
        u[k + 1, k] = 0.0
        if mult[k] != 0.0:
            for j in range(k + 1, n):
                u[k + 1, j] -= mult[k] * u[k, j]
    if u[n - 1, n - 1] == 0.0:
        u[n - 1, n - 1] = tiny

    y = np.ones(n, dtype=np.complex128)
    for _ in range(iters):
        for k in range(n - 1):
            if swap[k]:
                tmp = y[k]
                y[k] = y[k + 1]
                y[k + 1] = tmp
            y[k + 1] -= mult[k] * y[k]
        for i in range(n - 1, -1, -1):
            s = y[i]
            for j in range(i + 1, n):
                s -= u[i, j] * y[j]
            y[i] = s / u[i, i]
        nrm = 0.0
        for i in range(n):
            nrm += y[i].real * y[i].real + y[i].imag * y[i].imag
        nrm = math.sqrt(nrm)
        if not math.isfinite(nrm) or nrm == 0.0:
            break
        for i in range(n):
            y[i] /= nrm
    return y


@njit(cache=True)
def eigenvectors(h, vs, betas, scale, wr, wi, iters):
    """Columns: eigenvectors of the original (unbalanced) matrix."""
    n = h.shape[0]
    eps = np.finfo(np.float64).eps
    hnorm = 0.0
    for i in range(n):
        for j in range(n):
            hnorm += abs(h[i, j])
    sep = eps * hnorm
    out = np.empty((n, n), dtype=np.complex128)
    lams = np.empty(n, dtype=np.complex128)
    for k in range(n):
        lam = wr[k] + 1j * wi[k]
        # nudge eigenvalues that coincide with an earlier one so that inverse
        # iteration is not steered onto the same vector
        moved = True
        while moved:
            moved = False
            for j in range(k):
                if abs(lams[j] - lam) < sep:
                    lam = lam + sep
                    moved = True
        lams[k] = lam
        y = inverse_iteration(h, lam, hnorm, iters)
        x = apply_q(vs, betas, y)
        nrm = 0.0
        for i in range(n):
            x[i] *= scale[i]
            nrm += x[i].real * x[i].real + x[i].imag * x[i].imag
        nrm = math.sqrt(nrm)
        for i in range(n):
            out[i, k] = x[i] / nrm
    return out
