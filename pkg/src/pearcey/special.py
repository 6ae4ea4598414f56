"""Gamma and modified Bessel functions of complex argument.

The Bessel routines take a real order ``nu`` and a complex argument array.
Principal branches are used throughout, so the results are analytic in
``|arg z| < pi``.

Evaluation strategy for ``I_nu``: the ascending power series for
``|z| <= CROSSOVER`` and the large-argument expansion, including the
exponentially small ``exp(-z)`` companion, beyond.  For ``K_nu``: the
reflection formula (or the logarithmic series at integer order) for
``|z| <= 2``, a Laplace-type integral by generalized Gauss-Laguerre
quadrature for ``2 < |z| <= CROSSOVER`` and the large-argument expansion
beyond.  Arguments in the left half-plane are mapped to the right by the
analytic continuation formulas.
"""
import math

import numpy as np
from scipy.special import roots_genlaguerre

CROSSOVER = 13.0
_SMALL_K = 2.0


def gamma(x):
    """Gamma function of a real argument, with an explicit error at poles."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError("gamma has a pole at %g" % x)
    return math.gamma(x)


def rgamma(x):
    """Reciprocal gamma function, zero at the poles."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        return 0.0
    if x > 171.0:
        return 0.0
    return 1.0 / math.gamma(x)


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _is_integer(nu):
    return abs(nu - round(nu)) < 1e-12


# --------------------------------------------------------------------------
# I_nu

def _i_series(nu, z):
    if nu < 0 and _is_integer(nu):
        # I_{-n} = I_n
        return _i_series(-round(nu), z)
    half = z / 2
    q = half * half
    term = np.power(half, nu) * rgamma(nu + 1)
    total = term.copy()
    for k in range(1, 400):
        term = term * q / (k * (k + nu))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _asym_coeffs(nu, kmax):
    mu = 4.0 * nu * nu
    a = [1.0]
    for k in range(1, kmax + 1):
        a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0))
    return np.array(a)


def _asym_sum(nu, z, sign):
    """sum_k sign^k a_k(nu) / z^k truncated at the smallest term."""
    kmax = 80
    a = _asym_coeffs(nu, kmax)
    total = np.ones_like(z)
    inv = sign / z
    pw = np.ones_like(z)
    last = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, kmax + 1):
        pw = pw * inv
        t = a[k] * pw
        mag = np.abs(t)
        active &= mag < last
        if a[k] == 0:
            break
        total = np.where(active, total + t, total)
        last = np.where(active, mag, last)
        if not active.any():
            break
    return total


def _i_asym(nu, z):
    pref = 1.0 / np.sqrt(2 * np.pi * z)
    main = np.exp(z) * pref * _asym_sum(nu, z, -1.0)
    sgn = np.where(np.imag(z) >= 0, 1.0, -1.0)
    comp = sgn * 1j * np.exp(sgn * 1j * nu * np.pi) * np.exp(-z) * pref * _asym_sum(nu, z, 1.0)
    return main + comp


def _i_right(nu, z):
    out = np.empty_like(z)
    small = np.abs(z) <= CROSSOVER
    if small.any():
        out[small] = _i_series(nu, z[small])
    if (~small).any():
        out[~small] = _i_asym(nu, z[~small])
    return out


def bessel_i(nu, z):
    """Modified Bessel function of the first kind, principal branch."""
    z = _as_complex(z)
    shape = z.shape
    z = np.atleast_1d(z).ravel()
    out = np.empty_like(z)
    right = np.real(z) >= 0
    if right.any():
        out[right] = _i_right(nu, z[right])
    left = ~right
    if left.any():
        zl = z[left]
        m = np.where(np.imag(zl) >= 0, 1.0, -1.0)
        out[left] = np.exp(m * 1j * nu * np.pi) * _i_right(nu, -zl)
    return out.reshape(shape)


# --------------------------------------------------------------------------
# K_nu

def _digamma_int(n):
    # psi(n) for positive integer n
    return -np.euler_gamma + sum(1.0 / k for k in range(1, n))


def _k_small_integer(n, z):
    n = abs(int(round(n)))
    half = z / 2
    q = half * half
    out = np.zeros_like(z)
    if n > 0:
        s = np.zeros_like(z)
        term = np.ones_like(z)
        for k in range(n):
            s = s + math.factorial(n - k - 1) / math.factorial(k) * term
            term = term * (-q)
        out = out + 0.5 * np.power(half, -n) * s
    out = out + (-1) ** (n + 1) * np.log(half) * _i_series(n, z)
    term = np.power(half, n) / math.factorial(n)
    s = np.zeros_like(z)
    for k in range(0, 200):
        s = s + (_digamma_int(k + 1) + _digamma_int(n + k + 1)) * term
        term = term * q / ((k + 1) * (n + k + 1))
        if np.all(np.abs(term) * (10 + 2 * math.log(k + n + 2)) <= 1e-17 * np.abs(s)):
            break
    return out + (-1) ** n * 0.5 * s


def _k_small(nu, z):
    if _is_integer(nu):
        return _k_small_integer(nu, z)
    return 0.5 * np.pi * (_i_series(-nu, z) - _i_series(nu, z)) / np.sin(nu * np.pi)


_LAG_CACHE = {}


def _k_laplace(nu, z):
    # K_nu(z) = sqrt(pi/(2z)) e^{-z} / Gamma(nu+1/2)
    #           * int_0^inf e^{-u} u^{nu-1/2} (1 + u/(2z))^{nu-1/2} du,  nu >= 0
    nu = abs(nu)
    key = round(nu, 14)
    if key not in _LAG_CACHE:
        _LAG_CACHE[key] = roots_genlaguerre(120, nu - 0.5)
    u, w = _LAG_CACHE[key]
    g = np.power(1 + u[:, None] / (2 * z[None, :]), nu - 0.5)
    integral = w @ g
    return np.sqrt(np.pi / (2 * z)) * np.exp(-z) * rgamma(nu + 0.5) * integral


def _k_asym(nu, z):
    return np.sqrt(np.pi / (2 * z)) * np.exp(-z) * _asym_sum(nu, z, 1.0)


def _k_right(nu, z):
    out = np.empty_like(z)
    r = np.abs(z)
    small = r <= _SMALL_K
    mid = (r > _SMALL_K) & (r <= CROSSOVER)
    big = r > CROSSOVER
    if small.any():
        out[small] = _k_small(nu, z[small])
    if mid.any():
        out[mid] = _k_laplace(nu, z[mid])
    if big.any():
        out[big] = _k_asym(nu, z[big])
    return out


def bessel_k(nu, z):
    """Modified Bessel function of the second kind, principal branch."""
    z = _as_complex(z)
    shape = z.shape
    z = np.atleast_1d(z).ravel()
    out = np.empty_like(z)
    right = np.real(z) >= 0
    if right.any():
        out[right] = _k_right(nu, z[right])
    left = ~right
    if left.any():
        zl = z[left]
        m = np.where(np.imag(zl) >= 0, 1.0, -1.0)
        zr = -zl
        if _is_integer(nu):
            ratio = m
        else:
            ratio = np.sin(m * nu * np.pi) / np.sin(nu * np.pi)
        out[left] = (np.exp(-m * 1j * nu * np.pi) * _k_right(nu, zr)
                     - 1j * np.pi * ratio * _i_right(nu, zr))
    return out.reshape(shape)


def bessel_i_deriv(nu, z):
    """Derivative of I_nu with respect to z."""
    return 0.5 * (bessel_i(nu - 1, z) + bessel_i(nu + 1, z))


def bessel_k_deriv(nu, z):
    """Derivative of K_nu with respect to z."""
    return -0.5 * (bessel_k(nu - 1, z) + bessel_k(nu + 1, z))
