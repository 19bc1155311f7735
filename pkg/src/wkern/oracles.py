"""Closed-form kernels used as independent oracles.

Disk of radius r centred at c, annulus rho < |z - c| < 1 with piecewise
constant weights (c_outer on |z| = 1, c_inner on |z| = rho), and the
classical formulas for weights of the form |f|^2.
"""

import numpy as np


def disk_szego(z, w, center=0.0, radius=1.0):
    z, w = np.asarray(z) - center, np.asarray(w) - center
    return radius / (2 * np.pi * (radius**2 - z * np.conj(w)))


def disk_garabedian(z, w):
    return 1.0 / (2 * np.pi * (np.asarray(z) - np.asarray(w)))


def disk_bergman(z, w):
    return 1.0 / (np.pi * (1 - np.asarray(z) * np.conj(w)) ** 2)


def disk_ahlfors(z, a):
    """Möbius map of the unit disk with zero at a and positive derivative there."""
    z = np.asarray(z)
    return (z - a) / (1 - np.conj(a) * z)


def disk_poisson(z, a0):
    """Poisson kernel p(a0, z) of the unit disk for z on the circle."""
    return (1 - abs(a0) ** 2) / (2 * np.pi * np.abs(np.asarray(z) - a0) ** 2)


def _annulus_terms(x, rho):
    # number of Laurent terms for |x|^k and (rho^2/|x|)^k to reach 1e-18
    q = max(np.max(np.abs(x)), np.max(rho**2 / np.abs(x)), rho)
    return int(min(4000, max(20, np.ceil(np.log(1e-18) / np.log(q)))))


def annulus_szego(z, w, rho, c_outer=1.0, c_inner=1.0):
    """sum_k (z conj w)^k / (2 pi (c_outer + c_inner rho^(2k+1))), k in Z."""
    z, w = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
    x = z * np.conj(w)
    kmax = _annulus_terms(x, rho)
    out = np.zeros(x.shape, dtype=complex)
    for k in range(-kmax, kmax + 1):
        out += x**k / (c_outer + c_inner * rho ** (2 * k + 1))
    return out / (2 * np.pi)


def annulus_garabedian_regular(z, w, rho, c_outer=1.0, c_inner=1.0):
    """Regular part l(z, w) = L(z, w) - 1/(2 pi (z - w)) on the annulus."""
    z, w = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
    kmax = _annulus_terms(z * np.conj(w), rho) + 20
    out = np.zeros(z.shape, dtype=complex)
    for k in range(0, kmax):
        p = c_inner * rho ** (2 * k + 1)
        out -= p / (c_outer + p) * w**k * z ** (-k - 1)
    for k in range(1, kmax):
        p = c_inner * rho ** (1 - 2 * k)
        out += c_outer / (c_outer + p) * w ** (-k) * z ** (k - 1)
    return out / (2 * np.pi)


def annulus_garabedian(z, w, rho, c_outer=1.0, c_inner=1.0):
    return disk_garabedian(z, w) + annulus_garabedian_regular(z, w, rho, c_outer, c_inner)


def annulus_szego_zero(w, rho):
    """The zero of the unweighted annulus kernel S(., w)."""
    return -rho / np.conj(w)


def annulus_harmonic_derivative(z, rho):
    """d/dz of the harmonic measure log|z| / log(rho) of the inner circle."""
    return 1.0 / (2 * np.asarray(z) * np.log(rho))


# -- weights |f|^2 --------------------------------------------------------------------


def abs2_szego(s, fz, fw):
    """S_phi(z, w) = S(z, w) / (f(z) conj f(w)) for phi = |f|^2, f zero-free."""
    return s / (fz * np.conj(fw))


def abs2_garabedian(l, fz, fw):
    """L_phi(z, w) = (f(z) / f(w)) L(z, w)."""
    return fz / fw * l


def abs2_ahlfors(F, fz, fa):
    """F_phi = (f(a)^2 / |f(a)|^2) F / f(z)^2."""
    return fa**2 / abs(fa) ** 2 * F / fz**2


def nehari_szego(s, z, a, zeros_mults):
    """S(z, a) / prod (z - a_i)^m (conj(a) - conj(a_i))^m."""
    den = 1.0
    for ai, m in zeros_mults:
        den = den * ((z - ai) * np.conj(a - ai)) ** m
    return s / den


def nehari_garabedian(l, z, a, zeros_mults):
    """prod ((z - a_i) / (a - a_i))^m  L(z, a)."""
    fac = 1.0
    for ai, m in zeros_mults:
        fac = fac * ((z - ai) / (a - ai)) ** m
    return fac * l
