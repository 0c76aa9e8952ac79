"""Pure-numpy implementations of the hot kernels.

Twin of `_kernels_numba`; selected through `_backend` when numba is
unavailable or when PPTQ_BACKEND=numpy is set.
"""

import numpy as np

BACKEND_NAME = "numpy"


def pt_matrix(m, d_a, d_b):
    """Partial transpose on the B factor of a (d_a*d_b)-side matrix."""
    n = d_a * d_b
    return np.ascontiguousarray(
        m.reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1).reshape(n, n)
    )


def _hermitize(m):
    return 0.5 * (m + m.conj().T)


def _clip_spectrum(m, bound):
    w, v = np.linalg.eigh(_hermitize(m))
    wc = np.minimum(np.maximum(w, -bound), bound).astype(np.complex128)
    return (v * wc) @ v.conj().T


def _op_norm(m):
    return float(np.abs(np.linalg.eigvalsh(_hermitize(m))).max())


def _tr_prod(a, b):
    # real(tr(a @ b)) for Hermitian a, b
    return float(np.real(np.sum(a * b.T)))


def _proj_epi_linf(w, v):
    """Project (w, v) onto the epigraph {(w, u): max|w_i| <= u}."""
    m = np.abs(w)
    if m.max() <= v:
        return w.copy(), v
    ms = np.sort(m)[::-1]
    n = ms.shape[0]
    csum = 0.0
    u = (v + ms.sum()) / (n + 1.0)
    for k in range(1, n + 1):
        csum += ms[k - 1]
        cand = (v + csum) / (k + 1.0)
        lo = ms[k] if k < n else -np.inf
        if lo <= cand <= ms[k - 1]:
            u = cand
            break
    u = max(u, 0.0)
    return np.minimum(np.maximum(w, -u), u), u


def dykstra_diag(x0, rho, d_a, d_b, t, max_iters, tol, check_every, stall_checks):
    """Dykstra feasibility for {tr(X rho)=t} / {||X||inf<=t} / {||X^Tb||inf<=1}.

    Returns (X, feasible, iterations) with feasible in {0, 1}. Declares
    infeasibility early when the residual stalls well above `tol`.
    """
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
        Xn = pt_matrix(_clip_spectrum(pt_matrix(Y, d_a, d_b), 1.0), d_a, d_b)
        p3 = Y - Xn
        X = Xn

        if it % check_every == 0 or it == max_iters:
            r_lin = abs(_tr_prod(X, rho) - t)
            r_op = max(0.0, _op_norm(X) - t)
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


def dykstra_cross(x0, u0, sigma, rho, d_a, d_b, s, max_iters, tol, check_every,
                  stall_checks):
    """Lifted Dykstra feasibility for the cross tempered-negativity slice.

    Variables (X, u). Sets: {tr(X sigma)=s}, {tr(X rho)=u}, the spectral
    epigraph {||X||inf<=u}, and {||X^Tb||inf<=1}.
    """
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
        Xn = (vecs * evc.astype(np.complex128)) @ vecs.conj().T
        pX3 = Y - Xn
        pu3 = w - un
        X = Xn
        u = un

        Y = X + pX4
        Xn = pt_matrix(_clip_spectrum(pt_matrix(Y, d_a, d_b), 1.0), d_a, d_b)
        pX4 = Y - Xn
        X = Xn

        if it % check_every == 0 or it == max_iters:
            r1 = abs(_tr_prod(X, sigma) - s)
            r2 = abs(_tr_prod(X, rho) - u)
            r3 = max(0.0, _op_norm(X) - u)
            res = max(r1, r2, r3)
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
