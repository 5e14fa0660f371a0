"""Numba-compiled numeric cores.

Everything here works on plain floats, complex scalars, and contiguous
arrays so the hot ODE loops never touch Python objects.  Status codes are
returned instead of exceptions; the wrappers in the public modules raise.
"""

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_NO_CONVERGENCE = 1


@njit(cache=True)
def kernel_series(r, z, rel_tol, max_terms):
    """Annulus kernel via its pole-extracted Laurent expansion.

    K_r(z) = (1+z)/(1-z) + sum_{k>=1} 2 r^{2k} (z^k - z^{-k}) / (1 - r^{2k})

    Stops once the term magnitude drops below rel_tol * max(1, |partial|)
    for two consecutive k.  Returns (value, status).
    """
    if r == 0.0:
        return (1.0 + z) / (1.0 - z), STATUS_OK
    value = (1.0 + z) / (1.0 - z)
    r2 = r * r
    rk = r2
    zk = z
    zmk = 1.0 / z
    consec = 0
    for _ in range(max_terms):
        term = (2.0 * rk / (1.0 - rk)) * (zk - zmk)
        value += term
        if abs(term) < rel_tol * max(1.0, abs(value)):
            consec += 1
            if consec >= 2:
                return value, STATUS_OK
        else:
            consec = 0
        rk *= r2
        zk *= z
        zmk /= z
    return value, STATUS_NO_CONVERGENCE


@njit(cache=True)
def kernel_series_many(r, zs, rel_tol, max_terms):
    out = np.empty(zs.shape[0], dtype=np.complex128)
    status = STATUS_OK
    for i in range(zs.shape[0]):
        v, st = kernel_series(r, zs[i], rel_tol, max_terms)
        out[i] = v
        if st != STATUS_OK:
            status = st
    return out, status


@njit(cache=True)
def p_eval_core(r, ang1, m1, u1, ang2, m2, u2, w, rel_tol, max_terms):
    """Driving function of the two-measure class at a single point.

    p(w) = sum_i m1_i K_r(w/xi_i) + u1 + sum_j m2_j [1 - K_r(r xi_j / w)].

    The uniform component of the first measure contributes its mass (the
    kernel has circle mean 1); the uniform component of the second
    contributes nothing for the same reason.
    """
    val = complex(u1, 0.0)
    status = STATUS_OK
    for i in range(ang1.shape[0]):
        xi = complex(np.cos(ang1[i]), np.sin(ang1[i]))
        v, st = kernel_series(r, w / xi, rel_tol, max_terms)
        val += m1[i] * v
        if st != STATUS_OK:
            status = st
    for j in range(ang2.shape[0]):
        xi = complex(np.cos(ang2[j]), np.sin(ang2[j]))
        v, st = kernel_series(r, r * xi / w, rel_tol, max_terms)
        val += m2[j] * (1.0 - v)
        if st != STATUS_OK:
            status = st
    return val, status


@njit(cache=True)
def p_eval_many(r, ang1, m1, u1, ang2, m2, u2, ws, rel_tol, max_terms):
    out = np.empty(ws.shape[0], dtype=np.complex128)
    status = STATUS_OK
    for i in range(ws.shape[0]):
        v, st = p_eval_core(r, ang1, m1, u1, ang2, m2, u2, ws[i], rel_tol, max_terms)
        out[i] = v
        if st != STATUS_OK:
            status = st
    return out, status


@njit(cache=True)
def caratheodory_core(ang, m, u, z):
    """Herglotz integral of an atoms+uniform unit measure: exact finite sum."""
    val = complex(u, 0.0)
    for i in range(ang.shape[0]):
        xi = complex(np.cos(ang[i]), np.sin(ang[i]))
        val += m[i] * (xi + z) / (xi - z)
    return val


@njit(cache=True)
def caratheodory_many(ang, m, u, zs):
    out = np.empty(zs.shape[0], dtype=np.complex128)
    for i in range(zs.shape[0]):
        out[i] = caratheodory_core(ang, m, u, zs[i])
    return out
