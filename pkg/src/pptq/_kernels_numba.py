"""Numba-compiled twins of the hot kernels in `_kernels_numpy`.

The Dykstra loops run thousands of small eigendecompositions per solve;
running the whole loop in nopython mode removes the per-iteration Python
overhead (see benchmarks/bench_backends.py).
"""

import numpy as np
from numba import njit

BACKEND_NAME = "numba"


@njit(cache=True)
def _pt_loop(m, d_a, d_b):
    n = d_a * d_b
    out = np.empty((n, n), dtype=np.complex128)
    for a in range(d_a):
        for ap in range(d_a):
            for b in range(d_b):
                for bp in range(d_b):
                    out[a * d_b + b, ap * d_b + bp] = m[a * d_b + bp, ap * d_b + b]
    return out


def pt_matrix(m, d_a, d_b):
    """Partial transpose on the B factor of a (d_a*d_b)-side matrix."""
    return _pt_loop(np.ascontiguousarray(m), d_a, d_b)


@njit(cache=True)
def _hermitize(m):
    return 0.5 * (m + m.conj().T)


@njit(cache=True)
def _clip_spectrum(m, bound):
    w, v = np.linalg.eigh(_hermitize(m))
    n = w.shape[0]
    wc = np.empty(n, dtype=np.complex128)
    for i in range(n):
        x = w[i]
        if x > bound:
            x = bound
        elif x < -bound:
            x = -bound
        wc[i] = x
    return (v * wc) @ v.conj().T


@njit(cache=True)
def _op_norm(m):
    w = np.linalg.eigvalsh(_hermitize(m))
    mx = 0.0
    for i in range(w.shape[0]):
        a = abs(w[i])
        if a > mx:
            mx = a
    return mx


@njit(cache=True)
def _tr_prod(a, b):
    s = 0.0
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            s += (a[i, j] * b[j, i]).real
    return s


@njit(cache=True)
def _proj_epi_linf(w, v):
    n = w.shape[0]
    mx = 0.0
    for i in range(n):
        a = abs(w[i])
        if a > mx:
            mx = a
    if mx <= v:
        return w.copy(), v
    ms = np.sort(np.abs(w))[::-1]
    csum = 0.0
    total = 0.0
    for i in range(n):
        total += ms[i]
    u = (v + total) / (n + 1.0)
    for k in range(1, n + 1):
        csum += ms[k - 1]
        cand = (v + csum) / (k + 1.0)
        lo = ms[k] if k < n else -1e300
        if lo <= cand <= ms[k - 1]:
            u = cand
            break
    if u < 0.0:
        u = 0.0
    wc = np.empty(n, dtype=np.float64)
    for i in range(n):
        x = w[i]
        if x > u:
            x = u
        elif x < -u:
            x = -u
        wc[i] = x
    return wc, u


@njit(cache=True)
def _dykstra_diag(x0, rho, d_a, d_b, t, max_iters, tol, check_every, stall_checks):
    X = x0.copy()
    p1 = np.zeros_like(X)
    p2 = np.zeros_like(X)
    p3 = np.zeros_like(X)
    rf2 = _tr_prod(rho, rho)
    best = 1e300
    stalls = 0
    it = 0
    while it < max_iters:
        it += 1
        Y = X + p1
        shift = (_tr_prod(Y, rho) - t) / rf2
        Xn = Y - shift * rho
        p1 = Y - Xn
        X = Xn

        Y = X + p2
        Xn = _clip_spectrum(Y, t)
        p2 = Y - Xn
        X = Xn

        Y = X + p3
        Xn = _pt_loop(_clip_spectrum(_pt_loop(Y, d_a, d_b), 1.0), d_a, d_b)
        p3 = Y - Xn
        X = Xn

        if it % check_every == 0 or it == max_iters:
            r_lin = abs(_tr_prod(X, rho) - t)
            r_op = _op_norm(X) - t
            if r_op < 0.0:
                r_op = 0.0
            res = max(r_lin, r_op)
            if res <= tol:
                return X, 1, it
            if res < best * (1.0 - 1e-2):
                best = res
                stalls = 0
            else:
                stalls += 1
                if stalls >= stall_checks and res > 10.0 * tol:
                    return X, 0, it
    return X, 0, max_iters


def dykstra_diag(x0, rho, d_a, d_b, t, max_iters, tol, check_every, stall_checks):
    """Dykstra feasibility for {tr(X rho)=t} / {||X||inf<=t} / {||X^Tb||inf<=1}."""
    return _dykstra_diag(
        np.ascontiguousarray(x0), np.ascontiguousarray(rho),
        d_a, d_b, t, max_iters, tol, check_every, stall_checks,
    )


@njit(cache=True)
def _dykstra_cross(x0, u0, sigma, rho, d_a, d_b, s, max_iters, tol, check_every,
                   stall_checks):
    X = x0.copy()
    u = u0
    pX1 = np.zeros_like(X)
    pX2 = np.zeros_like(X)
    pX3 = np.zeros_like(X)
    pX4 = np.zeros_like(X)
    pu2 = 0.0
    pu3 = 0.0
    sf2 = _tr_prod(sigma, sigma)
    rf2 = _tr_prod(rho, rho) + 1.0
    best = 1e300
    stalls = 0
    it = 0
    while it < max_iters:
        it += 1
        Y = X + pX1
        shift = (_tr_prod(Y, sigma) - s) / sf2
        Xn = Y - shift * sigma
        pX1 = Y - Xn
        X = Xn

        Y = X + pX2
        w = u + pu2
        c = (_tr_prod(Y, rho) - w) / rf2
        Xn = Y - c * rho
        un = w + c
        pX2 = Y - Xn
        pu2 = w - un
        X = Xn
        u = un

        Y = X + pX3
        w = u + pu3
        ev, vecs = np.linalg.eigh(_hermitize(Y))
        evc, un = _proj_epi_linf(ev, w)
        evc_c = np.empty(evc.shape[0], dtype=np.complex128)
        for i in range(evc.shape[0]):
            evc_c[i] = evc[i]
        Xn = (vecs * evc_c) @ vecs.conj().T
        pX3 = Y - Xn
        pu3 = w - un
        X = Xn
        u = un

        Y = X + pX4
        Xn = _pt_loop(_clip_spectrum(_pt_loop(Y, d_a, d_b), 1.0), d_a, d_b)
        pX4 = Y - Xn
        X = Xn

        if it % check_every == 0 or it == max_iters:
            r1 = abs(_tr_prod(X, sigma) - s)
            r2 = abs(_tr_prod(X, rho) - u)
            r3 = _op_norm(X) - u
            if r3 < 0.0:
                r3 = 0.0
            res = max(r1, max(r2, r3))
            if res <= tol:
                return X, 1, it
            if res < best * (1.0 - 1e-2):
                best = res
                stalls = 0
            else:
                stalls += 1
                if stalls >= stall_checks and res > 10.0 * tol:
                    return X, 0, it
    return X, 0, max_iters


def dykstra_cross(x0, u0, sigma, rho, d_a, d_b, s, max_iters, tol, check_every,
                  stall_checks):
    """Lifted Dykstra feasibility for the cross tempered-negativity slice."""
    return _dykstra_cross(
        np.ascontiguousarray(x0), u0, np.ascontiguousarray(sigma),
        np.ascontiguousarray(rho), d_a, d_b, s, max_iters, tol, check_every,
        stall_checks,
    )
