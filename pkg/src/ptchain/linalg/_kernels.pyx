# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled dense complex eigenvalue kernels.

Same contract as :mod:`ptchain.linalg._kernels_py`; every routine works in
place on C-contiguous ``complex128`` arrays.
"""
import numpy as np

from libc.math cimport sqrt

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double cabs(double complex)

cdef double EPS = 2.0 ** -52
cdef double SAFMIN = 2.2250738585072014e-308
cdef double RADIX = 2.0


cdef inline double cabs1(double complex z) nogil:
    return abs(z.real) + abs(z.imag)


def balance(double complex[:, ::1] a):
    """Diagonal similarity scaling by powers of two; returns the scale vector."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef double c, r, f, g, s
    cdef double sqrdx = RADIX * RADIX
    scale = np.ones(n)
    cdef double[::1] d = scale
    cdef bint done = False
    while not done:
        done = True
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += cabs1(a[j, i])
                    r += cabs1(a[i, j])
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
                g = 1.0 / f
                d[i] *= f
                for j in range(n):
                    a[i, j] = a[i, j] * g
                for j in range(n):
                    a[j, i] = a[j, i] * f
    return scale


def hessenberg(double complex[:, ::1] a, bint wantq):
    """Householder reduction to upper Hessenberg form, A = Q H Q^H."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k, r, j, m
    cdef double alpha, ax0, beta
    cdef double complex phase, s
    q_arr = np.eye(n, dtype=np.complex128) if wantq else np.zeros((0, 0), dtype=np.complex128)
    cdef double complex[:, ::1] q = q_arr
    v_arr = np.zeros(n, dtype=np.complex128)
    w_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] v = v_arr
    cdef double complex[::1] w = w_arr
    with nogil:
        for k in range(n - 2):
            m = n - k - 1
            alpha = 0.0
            for r in range(m):
                v[r] = a[k + 1 + r, k]
                alpha += v[r].real * v[r].real + v[r].imag * v[r].imag
            alpha = sqrt(alpha)
            if alpha == 0.0:
                continue
            ax0 = cabs(v[0])
            if ax0 == 0.0:
                phase = 1.0
            else:
                phase = v[0] / ax0
            v[0] = v[0] + phase * alpha
            beta = alpha * (alpha + ax0)
            # left: rows k+1.., columns k..
            for j in range(k, n):
                w[j] = 0.0
            for r in range(m):
                s = v[r].conjugate()
                for j in range(k, n):
                    w[j] = w[j] + s * a[k + 1 + r, j]
            for r in range(m):
                s = v[r] / beta
                for j in range(k, n):
                    a[k + 1 + r, j] = a[k + 1 + r, j] - s * w[j]
            # right: all rows, columns k+1..
            for r in range(n):
                s = 0.0
                for j in range(m):
                    s = s + a[r, k + 1 + j] * v[j]
                s = s / beta
                for j in range(m):
                    a[r, k + 1 + j] = a[r, k + 1 + j] - s * v[j].conjugate()
            if wantq:
                for r in range(n):
                    s = 0.0
                    for j in range(m):
                        s = s + q[r, k + 1 + j] * v[j]
                    s = s / beta
                    for j in range(m):
                        q[r, k + 1 + j] = q[r, k + 1 + j] - s * v[j].conjugate()
            a[k + 1, k] = -phase * alpha
            for r in range(k + 2, n):
                a[r, k] = 0.0
    return q_arr if wantq else None


cdef inline void givens(double complex x, double complex y,
                        double *c, double complex *s) nogil:
    # [c, s; -conj(s), c] @ [x; y] = [r; 0] with c real
    cdef double ax = cabs(x)
    cdef double ay = cabs(y)
    cdef double nu
    if ay == 0.0:
        c[0] = 1.0
        s[0] = 0.0
        return
    if ax == 0.0:
        c[0] = 0.0
        s[0] = 1.0
        return
    nu = ax * sqrt(1.0 + (ay / ax) * (ay / ax)) if ax >= ay else ay * sqrt(1.0 + (ax / ay) * (ax / ay))
    c[0] = ax / nu
    s[0] = (x / ax) * y.conjugate() / nu


def hqr(double complex[:, ::1] h, object z, bint wantt, Py_ssize_t maxit):
    """Single-shift complex QR on an upper Hessenberg matrix.

    Returns ``(w, info, iterations)``. ``info`` is 0 on success, otherwise
    ``i + 1`` where rows ``info..n-1`` of ``w`` hold the converged values.
    """
    cdef Py_ssize_t n = h.shape[0]
    w_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] w = w_arr
    cdef bint wantz = z is not None
    cdef double complex[:, ::1] zz
    if wantz:
        zz = z
    else:
        zz = np.zeros((1, 1), dtype=np.complex128)
    cdef Py_ssize_t i, l, k, j, r, i1, i2, its, total, rlast
    cdef double tst, c, sx
    cdef double complex t, u, x, y, s, a, b, hi
    cdef bint converged
    cdef int info = 0
    if n == 0:
        return w_arr, 0, 0
    total = 0
    with nogil:
        i = n - 1
        while i >= 0:
            l = 0
            its = 0
            converged = False
            while total <= maxit:
                k = i
                while k > l:
                    tst = cabs(h[k - 1, k - 1]) + cabs(h[k, k])
                    if tst == 0.0:
                        if k - 2 >= l:
                            tst = tst + cabs(h[k - 1, k - 2])
                        if k + 1 <= i:
                            tst = tst + cabs(h[k + 1, k])
                    if cabs(h[k, k - 1]) <= EPS * tst or cabs(h[k, k - 1]) <= SAFMIN:
                        break
                    k -= 1
                l = k
                if l > 0:
                    h[l, l - 1] = 0.0
                if l >= i:
                    converged = True
                    break
                if wantt:
                    i1 = 0
                    i2 = n - 1
                else:
                    i1 = l
                    i2 = i
                its += 1
                total += 1
                if its == 10 or its == 20:
                    t = h[i, i] + 0.75 * abs(h[i, i - 1].real)
                else:
                    # Wilkinson shift: eigenvalue of the trailing 2x2 nearer h[i, i]
                    t = h[i, i]
                    u = csqrt(h[i - 1, i]) * csqrt(h[i, i - 1])
                    sx = cabs1(u)
                    if sx != 0.0:
                        x = 0.5 * (h[i - 1, i - 1] - t)
                        tst = cabs1(x)
                        sx = sx if sx > tst else tst
                        y = sx * csqrt((x / sx) * (x / sx) + (u / sx) * (u / sx))
                        if tst > 0.0:
                            if (x / tst).real * y.real + (x / tst).imag * y.imag < 0.0:
                                y = -y
                        t = t - u * (u / (x + y))
                # implicit single-shift bulge chase on rows/cols l..i
                for k in range(l, i):
                    if k == l:
                        x = h[l, l] - t
                        y = h[l + 1, l]
                    else:
                        x = h[k, k - 1]
                        y = h[k + 1, k - 1]
                    givens(x, y, &c, &s)
                    if k > l:
                        h[k, k - 1] = c * x + s * y
                        h[k + 1, k - 1] = 0.0
                    for j in range(k, i2 + 1):
                        a = h[k, j]
                        b = h[k + 1, j]
                        h[k, j] = c * a + s * b
                        h[k + 1, j] = -s.conjugate() * a + c * b
                    rlast = k + 2 if k + 2 < i else i
                    for r in range(i1, rlast + 1):
                        a = h[r, k]
                        b = h[r, k + 1]
                        h[r, k] = a * c + b * s.conjugate()
                        h[r, k + 1] = -a * s + b * c
                    if wantz:
                        for r in range(n):
                            a = zz[r, k]
                            b = zz[r, k + 1]
                            zz[r, k] = a * c + b * s.conjugate()
                            zz[r, k + 1] = -a * s + b * c
            if not converged:
                info = i + 1
                break
            w[i] = h[i, i]
            i = l - 1
    return w_arr, info, total


def trevc(double complex[:, ::1] t):
    """Right eigenvectors of an upper triangular matrix (columns, unnormalised)."""
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t k, j, m
    cdef double smin, ulp_norm = 0.0
    cdef double complex lam, acc, den
    y_arr = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] y = y_arr
    with nogil:
        for k in range(n):
            for j in range(k, n):
                ulp_norm = ulp_norm + cabs(t[k, j])
        for k in range(n):
            lam = t[k, k]
            smin = EPS * cabs(lam)
            if smin < EPS * ulp_norm / n:
                smin = EPS * ulp_norm / n
            if smin < SAFMIN:
                smin = SAFMIN
            y[k, k] = 1.0
            for j in range(k - 1, -1, -1):
                acc = 0.0
                for m in range(j + 1, k + 1):
                    acc = acc + t[j, m] * y[m, k]
                den = t[j, j] - lam
                if cabs(den) < smin:
                    den = smin
                y[j, k] = -acc / den
    return y_arr
