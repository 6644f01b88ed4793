"""Pure-Python (numpy) fallback for the compiled eigenvalue kernels.

Mirrors :mod:`ptchain.linalg._kernels` routine for routine. Householder
reduction and back-substitution are vectorised; the QR bulge chase is a
Python loop over 2x2 rotations and is roughly 30-100x slower than the
compiled version for matrices of a few hundred rows.
"""

import cmath
import math

import numpy as np

EPS = 2.0**-52
SAFMIN = np.finfo(float).tiny
RADIX = 2.0


def _cabs1(z):
    return abs(z.real) + abs(z.imag)


def balance(a):
    n = a.shape[0]
    scale = np.ones(n)
    sqrdx = RADIX * RADIX
    absa = np.abs(a.real) + np.abs(a.imag)
    done = False
    while not done:
        done = True
        for i in range(n):
            c = absa[:, i].sum() - absa[i, i]
            r = absa[i, :].sum() - absa[i, i]
            if c == 0.0 or r == 0.0:
                continue
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
                scale[i] *= f
                a[i, :] /= f
                a[:, i] *= f
                absa[i, :] /= f
                absa[:, i] *= f
    return scale


def hessenberg(a, wantq):
    n = a.shape[0]
    q = np.eye(n, dtype=np.complex128) if wantq else None
    for k in range(n - 2):
        v = a[k + 1 :, k].copy()
        alpha = np.linalg.norm(v)
        if alpha == 0.0:
            continue
        ax0 = abs(v[0])
        phase = v[0] / ax0 if ax0 != 0.0 else 1.0
        v[0] += phase * alpha
        beta = alpha * (alpha + ax0)
        w = v.conj() @ a[k + 1 :, k:]
        a[k + 1 :, k:] -= np.outer(v / beta, w)
        s = a[:, k + 1 :] @ v
        a[:, k + 1 :] -= np.outer(s / beta, v.conj())
        if wantq:
            s = q[:, k + 1 :] @ v
            q[:, k + 1 :] -= np.outer(s / beta, v.conj())
        a[k + 1, k] = -phase * alpha
        a[k + 2 :, k] = 0.0
    return q


def _givens(x, y):
    ax = abs(x)
    ay = abs(y)
    if ay == 0.0:
        return 1.0, 0j
    if ax == 0.0:
        return 0.0, 1 + 0j
    nu = math.hypot(ax, ay)
    return ax / nu, (x / ax) * y.conjugate() / nu


def hqr(h, z, wantt, maxit):
    n = h.shape[0]
    w = np.zeros(n, dtype=np.complex128)
    if n == 0:
        return w, 0, 0
    total = 0
    i = n - 1
    while i >= 0:
        l = 0
        its = 0
        converged = False
        while total <= maxit:
            k = i
            while k > l:
                tst = abs(h[k - 1, k - 1]) + abs(h[k, k])
                if tst == 0.0:
                    if k - 2 >= l:
                        tst += abs(h[k - 1, k - 2])
                    if k + 1 <= i:
                        tst += abs(h[k + 1, k])
                sub = abs(h[k, k - 1])
                if sub <= EPS * tst or sub <= SAFMIN:
                    break
                k -= 1
            l = k
            if l > 0:
                h[l, l - 1] = 0.0
            if l >= i:
                converged = True
                break
            i1, i2 = (0, n - 1) if wantt else (l, i)
            its += 1
            total += 1
            if its in (10, 20):
                t = h[i, i] + 0.75 * abs(h[i, i - 1].real)
            else:
                t = complex(h[i, i])
                u = cmath.sqrt(h[i - 1, i]) * cmath.sqrt(h[i, i - 1])
                sx = _cabs1(u)
                if sx != 0.0:
                    x = 0.5 * (h[i - 1, i - 1] - t)
                    tst = _cabs1(x)
                    sx = max(sx, tst)
                    y = sx * cmath.sqrt((x / sx) ** 2 + (u / sx) ** 2)
                    if tst > 0.0:
                        xs = x / tst
                        if xs.real * y.real + xs.imag * y.imag < 0.0:
                            y = -y
                    t = t - u * (u / (x + y))
            for k in range(l, i):
                if k == l:
                    x = complex(h[l, l]) - t
                    y = complex(h[l + 1, l])
                else:
                    x = complex(h[k, k - 1])
                    y = complex(h[k + 1, k - 1])
                c, s = _givens(x, y)
                if k > l:
                    h[k, k - 1] = c * x + s * y
                    h[k + 1, k - 1] = 0.0
                rows = h[k : k + 2, k : i2 + 1]
                top = rows[0].copy()
                rows[0] = c * top + s * rows[1]
                rows[1] = -s.conjugate() * top + c * rows[1]
                rlast = min(k + 2, i)
                cols = h[i1 : rlast + 1, k : k + 2]
                left = cols[:, 0].copy()
                cols[:, 0] = left * c + cols[:, 1] * s.conjugate()
                cols[:, 1] = -left * s + cols[:, 1] * c
                if z is not None:
                    left = z[:, k].copy()
                    z[:, k] = left * c + z[:, k + 1] * s.conjugate()
                    z[:, k + 1] = -left * s + z[:, k + 1] * c
        if not converged:
            return w, i + 1, total
        w[i] = h[i, i]
        i = l - 1
    return w, 0, total


def trevc(t):
    n = t.shape[0]
    y = np.zeros((n, n), dtype=np.complex128)
    tnorm = np.abs(np.triu(t)).sum()
    for k in range(n):
        lam = t[k, k]
        smin = max(EPS * abs(lam), EPS * tnorm / n, SAFMIN)
        y[k, k] = 1.0
        for j in range(k - 1, -1, -1):
            acc = t[j, j + 1 : k + 1] @ y[j + 1 : k + 1, k]
            den = t[j, j] - lam
            if abs(den) < smin:
                den = smin
            y[j, k] = -acc / den
    return y
