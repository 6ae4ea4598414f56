"""Explicit matrix objects of the steepest descent analysis.

Bessel model problem, global parametrix N_alpha, the conformal maps at 0
and 1, the local parametrices P0 and P1 with their analytic prefactors, and
the first correction terms J1, J~1, R1 that feed the s-derivative of the
gap probability.  Everything works on scalar complex points and returns
numpy arrays; the RH conditions are checked by the ``*_residual`` helpers
with boundary values extrapolated to the contour.

Contour conventions (verified, not assumed):

* Bessel rays Gamma_1, Gamma_3 at arg = +-2pi/3 and Gamma_2 = (-inf, 0), all
  oriented towards 0.  The + side is the left one.
* Lens contours inside D(0, eps) are the preimages of the Bessel rays under
  s^(4/3) f and inherit the orientation towards 0.  Inside D(1, eps) they
  are preimages under s^(4/3) f~ and run away from 1.
"""
from dataclasses import dataclass

import numpy as np

from . import surface as _sf
from .numerics import extrapolate_to_zero, trapezoid_circle
from .special import bessel_i, bessel_i_deriv, bessel_k, bessel_k_deriv

EPS = 0.25
C13 = 2.0 ** (1.0 / 3.0)
SQ3 = np.sqrt(3.0)
SQPI = np.sqrt(np.pi)

# constant left factor of N_0
M0 = np.array([[-5 * 2 ** (-2 / 3), -7 * 2 ** (1 / 3), 2 ** (-2 / 3)],
               [4.0, -2.0, -2.0],
               [-2 ** (5 / 3), 2 ** (8 / 3), -2 ** (5 / 3)]])
M0_INV = np.linalg.inv(M0)

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA1_SIGMA3 = SIGMA1 @ SIGMA3

# default extrapolation ladder for boundary values
DELTAS = (1e-5, 5e-6, 2.5e-6)


class RayError(ValueError):
    """The point lies on a jump ray of the Bessel model problem."""


class DiscError(ValueError):
    """The point lies outside the disc of a local parametrix."""


class LaurentFitError(ArithmeticError):
    """The least-squares Laurent fit is too badly conditioned to trust."""


# --------------------------------------------------------------------------
# Bessel model problem

REGIONS = ("I", "II", "III")
_RIGHT = {
    "I": lambda e: np.array([[0, 1], [1, 0]], dtype=complex),
    "II": lambda e: np.array([[0, 1], [1, -e]], dtype=complex),
    "III": lambda e: np.array([[0, 1], [1, 1 / e]], dtype=complex),
}


@dataclass(frozen=True)
class BesselParamEval:
    z: complex
    region: str
    M: np.ndarray


def bessel_region(z):
    """Sector I (|arg z| < 2pi/3), II (upper) or III (lower)."""
    z = complex(z)
    if z == 0:
        raise RayError("z = 0 is the common endpoint of the rays")
    t = np.angle(z)
    if z.imag == 0 and z.real < 0:
        raise RayError("z lies on Gamma_2")
    if np.isclose(abs(t), 2 * np.pi / 3, rtol=0, atol=1e-15):
        raise RayError("z lies on Gamma_1 or Gamma_3")
    if abs(t) < 2 * np.pi / 3:
        return "I"
    return "II" if t > 0 else "III"


def bessel_parametrix(z, alpha, region=None):
    """Phi^Bes_alpha(z) from I_alpha, K_alpha of the principal sqrt(z).

    ``region`` forces the sector formula, which gives the analytic
    continuation of that sector (used for boundary values).
    """
    z = complex(z)
    if region is None:
        region = bessel_region(z)
    elif region not in REGIONS:
        raise ValueError("region must be one of %s" % (REGIONS,))
    r = np.sqrt(z)
    i0 = bessel_i(alpha, r)[()]
    k0 = bessel_k(alpha, r)[()]
    i1 = bessel_i_deriv(alpha, r)[()]
    k1 = bessel_k_deriv(alpha, r)[()]
    A = np.array([[i0, 1j / np.pi * k0], [np.pi * 1j * r * i1, -r * k1]])
    M = A @ _RIGHT[region](np.exp(1j * np.pi * alpha))
    return BesselParamEval(z, region, M)


def bessel_jump(ray, alpha):
    """Jump matrix on Gamma_ray (1, 2 or 3)."""
    e = np.exp(1j * np.pi * alpha)
    if ray == 1:
        return np.array([[1, e], [0, 1]], dtype=complex)
    if ray == 2:
        return np.array([[0, -1], [1, 0]], dtype=complex)
    if ray == 3:
        return np.array([[1, 1 / e], [0, 1]], dtype=complex)
    raise ValueError("ray must be 1, 2 or 3")


# (minus side, plus side) regions of each ray, rays oriented towards 0
BESSEL_SIDES = {1: ("II", "I"), 2: ("III", "II"), 3: ("I", "III")}
_RAY_ARG = {1: 2 * np.pi / 3, 2: np.pi, 3: -2 * np.pi / 3}


def bessel_jump_residual(ray, r, alpha):
    """max |Phi_-^{-1} Phi_+ - J| at the point of modulus r on the ray."""
    lo, hi = BESSEL_SIDES[ray]
    if ray == 2:
        # the principal sqrt jumps on the negative axis, so both sides are
        # taken as limits
        p = _side_limit(lambda d: bessel_parametrix(complex(-r, d), alpha, hi).M)
        m = _side_limit(lambda d: bessel_parametrix(complex(-r, -d), alpha, lo).M)
    else:
        # off the negative axis each sector formula continues analytically
        z = r * np.exp(1j * _RAY_ARG[ray])
        m = bessel_parametrix(z, alpha, region=lo).M
        p = bessel_parametrix(z, alpha, region=hi).M
    return float(np.max(np.abs(np.linalg.solve(m, p) - bessel_jump(ray, alpha))))


def bessel_large_z(z, alpha):
    """The two-term large-z form of Phi^Bes (without the O(1/z) term)."""
    z = complex(z)
    r = np.sqrt(z)
    q = (np.pi ** 2 * z) ** -0.25
    pre = np.diag([q, 1 / q]) @ np.array([[1j, 1], [1, 1j]]) / np.sqrt(2)
    a = np.array([[1 + 4 * alpha ** 2, -2j], [-2j, -1 - 4 * alpha ** 2]])
    return pre @ (np.eye(2) + a / (8 * r)) @ np.diag([np.exp(-r), np.exp(r)])


def _side_limit(fun, deltas=DELTAS):
    vals = np.array([fun(d) for d in deltas])
    return extrapolate_to_zero(deltas, vals)


# --------------------------------------------------------------------------
# global parametrix

def c_alpha(alpha):
    """2^(-alpha/3) times a unit upper triangular matrix."""
    c = 2 ** (-2 / 3)
    return 2 ** (-alpha / 3) * np.array([[1, -c * alpha, 2 ** (-7 / 3) * alpha * (alpha + 1)],
                                         [0, 1, -c * alpha],
                                         [0, 0, 1]])


def _sqrt_ww1(w):
    # sqrt(w(w-1)) with its cut on the image curves: written around the
    # centre 1/2 so that the principal root switches only on those curves
    u = w - 0.5
    return u * np.sqrt(1 - 1 / (4 * u * u))


def _regular_point(z):
    z = complex(z)
    if z.imag == 0 and (z.real <= 0 or z.real >= 1):
        raise _sf.CutError("z = %r lies on (-inf, 0] U [1, inf)" % (z,))
    return z


_MID_DELTA = 1e-7


def _on_unit_interval(fun):
    """(0, 1) is free of jumps but the cube-root branches are selected by
    the half-plane, so real points there use the mean of z +- i delta
    (exact to O(delta^2))."""
    def wrapped(z, *args):
        z = _regular_point(z)
        if z.imag == 0:
            return (fun(z + 1j * _MID_DELTA, *args) + fun(z - 1j * _MID_DELTA, *args)) / 2
        return fun(z, *args)
    wrapped.__name__, wrapped.__doc__ = fun.__name__, fun.__doc__
    return wrapped


def _n0_core(z):
    w = _sf.w_triple(z)
    sg = -1.0 if z.imag < 0 else 1.0
    sig = (_sqrt_ww1(w[0]), sg * _sqrt_ww1(w[1]), _sqrt_ww1(w[2]))
    cols = [[wj * wj / sj, wj * (wj - 1.5) / sj, (wj - 1.5) ** 2 / sj]
            for wj, sj in zip(w, sig)]
    return M0 @ np.array(cols, dtype=complex).T / 9, w


@_on_unit_interval
def n0_eval(z):
    """N_0(z), the alpha = 0 global parametrix."""
    return _n0_core(z)[0]


def szego_factors(z, alpha):
    """(D_1, D_2, D_3) with principal powers and the e^(+-alpha pi i)
    factor of D_3 chosen per half-plane."""
    z = _regular_point(z)
    w = _sf.w_triple(z)
    ph = np.exp((-1j if z.imag > 0 else 1j) * np.pi * alpha)
    return w[0] ** (-alpha), w[1] ** (-alpha), ph * w[2] ** (-alpha)


@_on_unit_interval
def n_alpha_eval(z, alpha):
    """N_alpha(z) = C_alpha N_0(z) diag(D_1, D_2, D_3)."""
    n0, w = _n0_core(z)
    d = szego_factors(z, alpha)
    return c_alpha(alpha) @ n0 @ np.diag(d)


def n_alpha_jump(x, alpha):
    """Jump matrix of N_alpha on (-inf, 0) or (1, inf)."""
    if x < 0:
        e = np.exp(-1j * np.pi * alpha)
        return np.array([[1, 0, 0], [0, 0, -e], [0, e, 0]], dtype=complex)
    if x > 1:
        return np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 1]], dtype=complex)
    raise ValueError("N_alpha has no jump at x = %r" % (x,))


def n_alpha_jump_residual(x, alpha, deltas=DELTAS):
    """max |N_-^{-1} N_+ - J| at x with both boundary values extrapolated."""
    p = _side_limit(lambda d: n_alpha_eval(complex(x, d), alpha), deltas)
    m = _side_limit(lambda d: n_alpha_eval(complex(x, -d), alpha), deltas)
    return float(np.max(np.abs(np.linalg.solve(m, p) - n_alpha_jump(x, alpha))))


def n_alpha_infty_factor(z, alpha):
    """z^(-alpha/3) diag(z^(1/3), 1, z^(-1/3)) L_pm diag(e^(+-a pi i/3), e^(-+a pi i/3), 1)."""
    from .kernel import L_MINUS, L_PLUS
    z = complex(z)
    up = z.imag > 0
    L = L_PLUS if up else L_MINUS
    e = 1 if up else -1
    ph = np.diag([np.exp(e * 1j * np.pi * alpha / 3), np.exp(-e * 1j * np.pi * alpha / 3), 1])
    return z ** (-alpha / 3) * np.diag([z ** (1 / 3), 1, z ** (-1 / 3)]) @ L @ ph


def n1_31_estimate(z, alpha):
    """z * (N_alpha(z) [infinity factor]^(-1))_31, which tends to (N_1)_31."""
    q = n_alpha_eval(z, alpha) @ np.linalg.inv(n_alpha_infty_factor(z, alpha))
    return complex(z) * q[2, 0]


def _n0_small_blocks(alpha, corrected):
    am = np.zeros((3, 3), dtype=complex)
    am[2, 1:] = [-1j * 3 ** 2.25 / 4, -3 ** 2.25 / 4]
    b0 = np.zeros((3, 3), dtype=complex)
    b0[0, 0] = 3 * SQ3 / 2
    a1 = np.zeros((3, 3), dtype=complex)
    a1[1, 1:] = [1j * 3 ** 0.75 / 2, -3 ** 0.75 / 2]
    row3 = 3 ** 1.75 / 4
    if corrected:
        row3 = (3 + alpha) * 3 ** 0.75 / 4
    a1[2, 1:] = [1j * row3, -row3]
    return am, b0, a1


def _n0_weights(z, alpha):
    return np.array([(2 / 3) ** alpha, 3 ** (alpha / 2) * z ** (-alpha / 2),
                     3 ** (alpha / 2) * z ** (-alpha / 2)])


def n0_bracket(z, alpha):
    """9 M0^{-1} C_alpha^{-1} N_alpha(z) diag(weights)^{-1}, the matrix that
    the expansion at 0 describes."""
    z = complex(z)
    core = M0_INV @ np.linalg.solve(c_alpha(alpha), n_alpha_eval(z, alpha))
    return 9 * core / _n0_weights(z, alpha)[None, :]


def series_n_0(z, alpha, corrected=False):
    """Three-term expansion z^(-1/4) A + B + z^(1/4) A' of the bracket at 0
    and its claimed remainder order.

    With ``corrected=True`` the third row of A' carries the alpha dependence
    (3 + alpha) 3^(3/4)/4 produced by the Szego factors; the flat
    3^(7/4)/4 is its alpha = 0 value.
    """
    z = complex(z)
    am, b0, a1 = _n0_small_blocks(alpha, corrected)
    q = z ** 0.25
    return am / q + b0 + a1 * q, 0.75


def _n1_blocks(alpha, corrected):
    a = alpha
    t = [np.array([[1, -1j, 0], [-0.5, 0.5j, 0], [0.25, -0.25j, 0]]),
         np.array([[0, 0, 0.5], [0, 0, 2], [0, 0, 8]], dtype=complex),
         np.array([[1j * (a - 5 / 3), -(a - 5 / 3), 0],
                   [-1j * (a / 2 + 2 / 3), a / 2 + 2 / 3, 0],
                   [1j * (a / 4 + 13 / 12), -(a / 4 + 13 / 12), 0]])]
    q = a * (3 * a + 13) / 4 - 35 / 24
    r = a * (3 * a + 31) / 8 + 253 / 48
    if corrected:
        p = -a * (3 * a - 5) / 2 - 1 / 12
        first = [p, -1j * p, 0]
    else:
        p = -a * (3 * a + 5) / 2 - 1 / 12
        first = [p, 1j * p, 0]
    t.append(np.array([first, [q, -1j * q, 0], [-r, 1j * r, 0]]))
    t.append(np.array([[0, 0, 2 * a - 8 / 3], [0, 0, 8 * a - 14 / 3], [0, 0, 32 * a + 16 / 3]],
                      dtype=complex))
    u = 3 * a ** 3 - 7.5 * a - 0.5
    v = 1.5 * a ** 3 + 13.5 * a * a + 39 / 4 * a - 7
    w = (6 * a ** 3 + 108 * a * a + 417 * a + 269) / 8
    t.append(np.array([[-1j * u, u, 0], [1j * v, -v, 0], [-1j * w, w, 0]]))
    return t


def series_n_1(z, alpha, corrected=False):
    """Six-term expansion of N_alpha at 1 (Im z > 0) and its remainder order.

    ``corrected=True`` uses first row [p, -i p, 0], p = -a(3a-5)/2 - 1/12, in
    the (z-1)^(3/4) block; with it the remainder is O((z-1)^(7/4)).
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("the expansion at 1 is for Im z > 0")
    u = z - 1
    e = np.exp(1j * np.pi / 4)
    b = _n1_blocks(alpha, corrected)
    coef = [3 ** 0.25 * e * u ** -0.25, -2 ** alpha / SQ3, 3 ** -0.25 * e * u ** 0.25,
            3 ** 0.25 / 9 * e * u ** 0.75, 2 ** alpha / (9 * SQ3) * u,
            3 ** -0.25 / 54 * e * u ** 1.25]
    inner = sum(c * m for c, m in zip(coef, b))
    return c_alpha(alpha) @ M0 @ inner / 9, 1.75


def series_n_check(which, alpha, radius, corrected=False, angles=(0.3, 1.5, 2.8)):
    """Largest deviation from the truncated expansion at the given distance
    from the expansion point: the bracket at 0 (both half-planes), N_alpha
    itself at 1 (upper half-plane)."""
    errs = []
    if which == "0":
        for t in angles + tuple(-x for x in angles):
            z = radius * np.exp(1j * t)
            v, order = series_n_0(z, alpha, corrected)
            errs.append(np.max(np.abs(n0_bracket(z, alpha) - v)))
    elif which == "1":
        for t in angles:
            z = 1 + radius * np.exp(1j * t)
            v, order = series_n_1(z, alpha, corrected)
            errs.append(np.max(np.abs(n_alpha_eval(z, alpha) - v)))
    else:
        raise ValueError("which must be '0' or '1'")
    return float(max(errs)), order


def series_n_order(which, alpha, r1, r2, corrected=False):
    """Observed remainder exponent between radii r1 > r2 and the claimed one."""
    e1, order = series_n_check(which, alpha, r1, corrected)
    e2, _ = series_n_check(which, alpha, r2, corrected)
    return float(np.log(e2 / e1) / np.log(r2 / r1)), order


# --------------------------------------------------------------------------
# conformal maps

@dataclass(frozen=True)
class ConformalMaps:
    """f = (lambda_2 - lambda_3)^2/4 near 0 and f~ = (lambda_2 - lambda_1)^2/4
    near 1 for fixed (s, rho)."""
    s: float
    rho: float
    eps0: float = EPS
    eps1: float = EPS

    def _lam(self, z):
        return _sf.lambda_triple(complex(z), self.s, self.rho)

    def f(self, z):
        l1, l2, l3 = self._lam(z)
        return complex((l2 - l3) ** 2 / 4)

    def ft(self, z):
        l1, l2, l3 = self._lam(z)
        return complex((l2 - l1) ** 2 / 4)

    def delta0(self, z):
        """lambda_2 - lambda_3; equals -2 sqrt(f) with the principal root."""
        l1, l2, l3 = self._lam(z)
        return complex(l2 - l3)

    def delta1(self, z):
        """lambda_2 - lambda_1; equals -2 sqrt(f~) with the principal root."""
        l1, l2, l3 = self._lam(z)
        return complex(l2 - l1)

    @property
    def coeffs(self):
        return _sf.expansion_coeffs(self.s, self.rho)

    def taylor0(self):
        """f'(0) = c_1^2."""
        return float(self.coeffs["c1"] ** 2)

    def taylor1(self):
        """(f~'(1), f~''(1)/2) = (-c~_1^2, -2 c~_1 c~_3)."""
        c = self.coeffs
        return float(-c["ct1"] ** 2), float(-2 * c["ct1"] * c["ct3"])

    def winding(self, which, n=256):
        """Winding number of f (which='0') or f~ (which='1') around 0 on
        the boundary circle; 1 means the map is univalent on the disc."""
        centre, rad, fun = ((0.0, self.eps0, self.f) if which == "0"
                            else (1.0, self.eps1, self.ft))
        t, _ = trapezoid_circle(centre, rad, n)
        v = np.array([fun(x) for x in t])
        ph = np.unwrap(np.angle(np.append(v, v[0])))
        return int(round((ph[-1] - ph[0]) / (2 * np.pi)))

    def inverse(self, which, value, z0):
        """Solve f(z) = value (or f~) by Newton's method from z0."""
        fun = self.f if which == "0" else self.ft
        z = complex(z0)
        for _ in range(80):
            h = 1e-7 * max(1.0, abs(z))
            d = (fun(z + h) - fun(z - h)) / (2 * h)
            step = (fun(z) - value) / d
            z -= step
            if abs(step) < 1e-15 * max(1.0, abs(z)):
                return z
        raise ArithmeticError("Newton iteration for the conformal map did not converge")


def conformal_maps(s, rho):
    if not s > 0:
        raise ValueError("s must be positive")
    return ConformalMaps(float(s), float(rho))


# --------------------------------------------------------------------------
# local parametrices

# P0/P1 carry exp(+-s^p (lambda_i - lambda_j)/2); the printed exponent is
# p = 1/3, but only p = 2/3 reproduces the lens jumps and the matching
EXPONENT = 2.0 / 3.0
PRINTED_EXPONENT = 1.0 / 3.0


def _check_disc(z, centre, eps):
    if abs(complex(z) - centre) >= eps:
        raise DiscError("|z - %g| = %.3g is not below eps = %g" % (centre, abs(z - centre), eps))


def e0_matrix(z, s, alpha, rho):
    """Analytic prefactor E(z) of P0."""
    cm = conformal_maps(s, rho)
    f = cm.f(z)
    q = f ** 0.25
    sp = SQPI * s ** (1 / 3)
    mid = np.array([[np.sqrt(2), 0, 0],
                    [0, -1j * sp * q, 1 / (sp * q)],
                    [0, sp * q, -1j / (sp * q)]])
    fa = f ** (alpha / 2)
    return n_alpha_eval(z, alpha) / np.sqrt(2) @ mid @ np.diag([1, fa, fa])


def local_parametrix_p0(z, s, alpha, rho, as_printed=False, region=None):
    """P0(z) in D(0, eps)."""
    _check_disc(z, 0.0, EPS)
    z = complex(z)
    cm = conformal_maps(s, rho)
    f = cm.f(z)
    dl = cm.delta0(z)
    p = PRINTED_EXPONENT if as_printed else EXPONENT
    B = np.eye(3, dtype=complex)
    B[1:, 1:] = bessel_parametrix(s ** (4 / 3) * f, alpha, region).M
    fa = f ** (-alpha / 2)
    tail = np.diag([1, np.exp(-s ** p * dl / 2), np.exp(s ** p * dl / 2)])
    return e0_matrix(z, s, alpha, rho) @ np.diag([1, fa, fa]) @ B @ tail


def e1_matrix(z, s, alpha, rho):
    """Analytic prefactor E~(z) of P1."""
    cm = conformal_maps(s, rho)
    q = cm.ft(z) ** 0.25
    sp = SQPI * s ** (1 / 3)
    mid = np.array([[sp * q, -1j / (sp * q), 0],
                    [1j * sp * q, -1 / (sp * q), 0],
                    [0, 0, np.sqrt(2)]])
    return n_alpha_eval(z, alpha) @ mid / np.sqrt(2)


def b_matrix(zeta, region=None):
    """B(zeta) = Phi^Bes_0(zeta) sigma_1 sigma_3 bordered by a 1."""
    B = np.eye(3, dtype=complex)
    B[:2, :2] = bessel_parametrix(zeta, 0.0, region).M @ SIGMA1_SIGMA3
    return B


def local_parametrix_p1(z, s, alpha, rho, as_printed=False, region=None):
    """P1(z) in D(1, eps)."""
    _check_disc(z, 1.0, EPS)
    z = complex(z)
    cm = conformal_maps(s, rho)
    dl = cm.delta1(z)
    p = PRINTED_EXPONENT if as_printed else EXPONENT
    tail = np.diag([np.exp(s ** p * dl / 2), np.exp(-s ** p * dl / 2), 1])
    return e1_matrix(z, s, alpha, rho) @ b_matrix(s ** (4 / 3) * cm.ft(z), region) @ tail


def prefactor_jump_residual(which, x, s, alpha, rho, deltas=DELTAS):
    """max |E_-^{-1} E_+ - I| on (-eps, 0) (which='0') or for E~ on
    (1, 1 + eps) (which='1')."""
    fn = e0_matrix if which == "0" else e1_matrix
    p = _side_limit(lambda d: fn(complex(x, d), s, alpha, rho), deltas)
    m = _side_limit(lambda d: fn(complex(x, -d), s, alpha, rho), deltas)
    return float(np.max(np.abs(np.linalg.solve(m, p) - np.eye(3))))


# --------------------------------------------------------------------------
# jumps of S and of the local parametrices

def js_jump(name, z, s, alpha, rho):
    """Jump matrix of S on the named contour (sigma0 ... sigma5)."""
    l1, l2, l3 = _sf.lambda_triple(complex(z), s, rho)
    e = np.exp(1j * np.pi * alpha)
    J = np.eye(3, dtype=complex)
    if name == "sigma0":
        return np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 1]], dtype=complex)
    if name in ("sigma1", "sigma5"):
        J[1, 0] = np.exp(s ** (2 / 3) * (l2 - l1))
    elif name == "sigma2":
        J[1, 2] = e * np.exp(s ** (2 / 3) * (l2 - l3))
    elif name == "sigma4":
        J[1, 2] = np.exp(s ** (2 / 3) * (l2 - l3)) / e
    elif name == "sigma3":
        return np.array([[1, 0, 0], [0, 0, -1 / e], [0, 1 / e, 0]], dtype=complex)
    else:
        raise ValueError("unknown contour %r" % (name,))
    return J


# lens contours outside the discs: rays from 0 at +-3pi/4 and from 1 at +-pi/4
LENS_RAYS = {"sigma2": (0.0, 3 * np.pi / 4), "sigma4": (0.0, -3 * np.pi / 4),
             "sigma1": (1.0, np.pi / 4), "sigma5": (1.0, -np.pi / 4)}


def js_deviation(name, r, s, alpha, rho):
    """||J_S - I|| at distance r from the base point along a lens ray."""
    base, ang = LENS_RAYS[name]
    z = base + r * np.exp(1j * ang)
    return float(np.max(np.abs(js_jump(name, z, s, alpha, rho) - np.eye(3))))


# local lens contours: preimages of Bessel rays.  (disc, S-contour) ->
# (Bessel ray, orientation sign: +1 towards the centre)
_LOCAL_CONTOURS = {
    ("0", "sigma2"): (1, +1), ("0", "sigma3"): (2, +1), ("0", "sigma4"): (3, +1),
    ("1", "sigma5"): (1, -1), ("1", "sigma0"): (2, -1), ("1", "sigma1"): (3, -1),
}


def local_contour_point(which, name, r, s, rho):
    """Point and unit tangent (in the contour's orientation) on the local
    lens contour, at distance about r from the centre of the disc."""
    ray, orient = _LOCAL_CONTOURS[(which, name)]
    cm = conformal_maps(s, rho)
    ang = _RAY_ARG[ray]
    centre = 0.0 if which == "0" else 1.0
    # f ~ c1^2 z at 0 and f~ ~ -c~1^2 (z - 1) at 1 give the starting guess
    scale = s ** (4 / 3)
    slope = cm.taylor0() if which == "0" else cm.taylor1()[0]
    t = r * scale * abs(slope)
    guess = centre + t * np.exp(1j * ang) / (scale * slope)
    target = lambda tt: tt * np.exp(1j * ang) / scale
    z = cm.inverse(which, target(t), guess)
    h = 1e-6 * t
    z2 = cm.inverse(which, target(t + h), z)
    tan = (z2 - z) / abs(z2 - z)  # direction of increasing |zeta|, away from centre
    if orient > 0:
        tan = -tan
    if abs(z - centre) >= EPS:
        raise DiscError("contour point is outside the disc")
    return z, tan


def local_jump_residual(which, name, r, s, alpha, rho, as_printed=False, deltas=DELTAS):
    """max |P_-^{-1} P_+ - J_S| at a local contour point about r from the
    centre, boundary values extrapolated along the normal; + is the left
    side."""
    z, tan = local_contour_point(which, name, r, s, rho)
    nrm = 1j * tan
    fn = local_parametrix_p0 if which == "0" else local_parametrix_p1
    p = _side_limit(lambda d: fn(z + d * nrm, s, alpha, rho, as_printed), deltas)
    m = _side_limit(lambda d: fn(z - d * nrm, s, alpha, rho, as_printed), deltas)
    J = js_jump(name, z, s, alpha, rho)
    return float(np.max(np.abs(np.linalg.solve(m, p) - J)))


def matching_norm(which, s, alpha, rho, n=32, subtract_j1=False, as_printed=False):
    """sup over the disc boundary of ||P N^{-1} - I|| (optionally minus the
    J1 / J~1 term s^(-2/3))."""
    centre = 0.0 if which == "0" else 1.0
    fn = local_parametrix_p0 if which == "0" else local_parametrix_p1
    jf = j1 if which == "0" else j1_tilde
    t, _ = trapezoid_circle(centre, EPS * (1 - 1e-12), n, offset=0.37)
    worst = 0.0
    for z in t:
        q = fn(z, s, alpha, rho, as_printed) @ np.linalg.inv(n_alpha_eval(z, alpha)) - np.eye(3)
        if subtract_j1:
            q = q - jf(z, s, alpha, rho) / s ** (2 / 3)
        worst = max(worst, float(np.max(np.abs(q))))
    return worst


# --------------------------------------------------------------------------
# correction matrices

_K0 = lambda a: np.array([[0, 0, 0], [0, 1 + 4 * a * a, -2j], [0, -2j, -1 - 4 * a * a]])
_K1 = np.array([[-1, 2j, 0], [2j, 1, 0], [0, 0, 0]])


def j1(z, s, alpha, rho):
    """J_1(z) = N K N^{-1} / (8 f^(1/2)) near 0."""
    f = conformal_maps(s, rho).f(z)
    N = n_alpha_eval(z, alpha)
    return N @ _K0(alpha) @ np.linalg.inv(N) / (8 * np.sqrt(f))


def j1_tilde(z, s, alpha, rho):
    """J~_1(z) = N K~ N^{-1} / (8 f~^(1/2)) near 1."""
    f = conformal_maps(s, rho).ft(z)
    N = n_alpha_eval(z, alpha)
    return N @ _K1 @ np.linalg.inv(N) / (8 * np.sqrt(f))


def res0_j1_closed_form(s, alpha, rho, corrected=False):
    """Closed-form residue of J_1 at 0.

    As printed the (3,2) entry carries 1/|c_1|; the residue of J_1 itself
    needs 1/c_1 (c_1 < 0), i.e. the opposite sign.
    """
    c1 = _sf.expansion_coeffs(s, rho)["c1"]
    den = c1 if corrected else abs(c1)
    mid = np.zeros((3, 3), dtype=complex)
    mid[2, 1] = 3 ** 1.5 * (4 * alpha ** 2 - 1) / (16 * den)
    C = c_alpha(alpha)
    return C @ M0 @ mid @ M0_INV @ np.linalg.inv(C)


def res0_j1_quadrature(s, alpha, rho, radius=0.1, n=64):
    """Residue of J_1 at 0 by the trapezoid rule on a circle."""
    t, w = trapezoid_circle(0.0, radius, n)
    return sum(wi * j1(ti, s, alpha, rho) for ti, wi in zip(t, w)) / (2j * np.pi)


@dataclass(frozen=True)
class LaurentData:
    res: np.ndarray      # coefficient of (z-1)^(-1)
    j0: np.ndarray       # constant term
    j1: np.ndarray       # coefficient of (z-1)
    pole2: float         # size of the fitted (z-1)^(-2) coefficient
    cond: float


def laurent_j1_tilde(s, alpha, rho, radii=(0.05, 0.1), n=48, kmin=-2, kmax=14, max_cond=1e8):
    """Least-squares Laurent fit of J~_1 around 1 on two circles."""
    pts, vals = [], []
    for r in radii:
        t, _ = trapezoid_circle(1.0, r, n)
        pts.extend(t)
        vals.extend(j1_tilde(x, s, alpha, rho).ravel() for x in t)
    u = np.array(pts) - 1
    scale = max(radii)
    ks = np.arange(kmin, kmax + 1)
    A = (u[:, None] / scale) ** ks[None, :]
    cond = float(np.linalg.cond(A))
    if not cond < max_cond:
        raise LaurentFitError("Laurent design matrix condition %.3g" % cond)
    coef, *_ = np.linalg.lstsq(A, np.array(vals), rcond=None)
    coef = coef / scale ** ks[:, None]
    get = lambda k: coef[k - kmin].reshape(3, 3)
    return LaurentData(get(-1), get(0), get(1), float(np.max(np.abs(get(-2)))), cond)


@dataclass(frozen=True)
class Corrections:
    res0: np.ndarray
    res1: np.ndarray
    jj0: np.ndarray
    jj1: np.ndarray
    r1_prime_1: np.ndarray


def correction_matrices(s, alpha, rho):
    """Residues, Laurent data of J~_1 at 1 and R_1'(1) = -J_1 - Res_0 J_1
    (residue at 0 by quadrature)."""
    res0 = res0_j1_quadrature(s, alpha, rho)
    lj = laurent_j1_tilde(s, alpha, rho)
    return Corrections(res0, lj.res, lj.j0, lj.j1, -lj.j1 - res0)


def r1_eval(z, s, alpha, rho, corr=None):
    """R_1(z) assembled from the residues, minus J_1 or J~_1 inside a disc."""
    corr = correction_matrices(s, alpha, rho) if corr is None else corr
    z = complex(z)
    out = corr.res0 / z + corr.res1 / (z - 1)
    if abs(z) < EPS:
        out = out - j1(z, s, alpha, rho)
    elif abs(z - 1) < EPS:
        out = out - j1_tilde(z, s, alpha, rho)
    return out


def r1_jump_residual(which, angle, s, alpha, rho, corr=None, delta=1e-6):
    """|R_1,out - R_1,in - J| on a disc boundary (outside = + side)."""
    corr = correction_matrices(s, alpha, rho) if corr is None else corr
    centre = 0.0 if which == "0" else 1.0
    u = np.exp(1j * angle)
    zb = centre + EPS * u
    jf = j1 if which == "0" else j1_tilde
    vals = []
    for d in DELTAS:
        out = r1_eval(centre + (EPS + d) * u, s, alpha, rho, corr)
        inn = r1_eval(centre + (EPS - d) * u, s, alpha, rho, corr)
        vals.append(out - inn)
    diff = extrapolate_to_zero(DELTAS, np.array(vals))
    return float(np.max(np.abs(diff - jf(zb, s, alpha, rho))))


# --------------------------------------------------------------------------
# E~ at 1

def _tilde_scale(s, rho):
    c = _sf.expansion_coeffs(s, rho)
    q = 3 ** 0.25 * np.sqrt(c["ct1"]) * SQPI * s ** (1 / 3)
    return c, q


def e1_at_1_closed_form(s, alpha, rho):
    c, q = _tilde_scale(s, rho)
    a = alpha
    A = np.zeros((3, 3), dtype=complex)
    A[:, 0] = [2, -1, 0.5]
    B = np.zeros((3, 3))
    B[:, 2] = [0.5, 2, 8]
    C = np.zeros((3, 3))
    C[:, 1] = [a - 5 / 3, -a / 2 - 2 / 3, a / 4 + 13 / 12]
    inner = q * A - 2 ** (a + 0.5) / SQ3 * B + 2j / q * C
    return c_alpha(a) @ M0 @ inner / (9 * np.sqrt(2))


def e1_prime_at_1_closed_form(s, alpha, rho):
    c, q = _tilde_scale(s, rho)
    a = alpha
    r = c["ct3"] / c["ct1"]
    A = np.zeros((3, 3), dtype=complex)
    A[:, 0] = [9 * r - a * (3 * a - 5) - 1 / 6,
               -4.5 * r + a * (3 * a + 13) / 2 - 35 / 12,
               2.25 * r - a * (3 * a + 31) / 4 - 253 / 24]
    B = np.zeros((3, 3), dtype=complex)
    B[:, 1] = [27 * r * (10 / 3 - 2 * a) - 6 * a ** 3 + 15 * a + 1,
               27 * r * (4 / 3 + a) + 3 * a ** 3 + 27 * a * a + 19.5 * a - 14,
               -27 * r * (13 / 6 + a / 2) - (6 * a ** 3 + 108 * a * a + 417 * a + 269) / 4]
    C = np.zeros((3, 3))
    C[:, 2] = [2 * a - 8 / 3, 8 * a - 14 / 3, 32 * a + 16 / 3]
    inner = q / 9 * A + 1j / (54 * q) * B + 2 ** (a + 0.5) * SQ3 / 27 * C
    return c_alpha(a) @ M0 @ inner / (9 * np.sqrt(2))


def e1_at_1_numeric(s, alpha, rho, method="cauchy", radius=0.05, n=64, h=1e-3):
    """(E~(1), E~'(1)) from def. of E~ alone.

    ``cauchy``: mean value and first Fourier coefficient on a circle.
    ``difference``: symmetric values at 1 +- i h with one Richardson step.
    """
    E = lambda z: e1_matrix(z, s, alpha, rho)
    if method == "cauchy":
        t, _ = trapezoid_circle(1.0, radius, n)
        V = np.array([E(x) for x in t])
        ph = (t - 1) / radius
        return V.mean(axis=0), (V / ph[:, None, None]).mean(axis=0) / radius
    if method == "difference":
        def pair(k):
            p, m = E(1 + 1j * k), E(1 - 1j * k)
            return (p + m) / 2, (p - m) / (2j * k)
        v1, d1 = pair(h)
        v2, d2 = pair(h / 2)
        return (4 * v2 - v1) / 3, (4 * d2 - d1) / 3
    raise ValueError("method must be 'cauchy' or 'difference'")


# --------------------------------------------------------------------------
# d F / d s from the RH analysis

def term1_closed_form(s, alpha, rho, corrected=False):
    """i pi [(4a^2-1) c~1/(24 c) + 3 c~3/(8 c~1) + (8a^2+1)/48] with c = |c_1|
    as printed or c = c_1 when ``corrected``."""
    k = _sf.expansion_coeffs(s, rho)
    den = k["c1"] if corrected else abs(k["c1"])
    a2 = alpha * alpha
    return 1j * np.pi * ((4 * a2 - 1) * k["ct1"] / (24 * den) + 3 * k["ct3"] / (8 * k["ct1"])
                         + (8 * a2 + 1) / 48)


def term1_limit(alpha, corrected=False):
    """s -> infinity value of term 1: i pi (12 a^2 + 1)/36 as printed, i pi/9
    with the signed c_1."""
    if corrected:
        return 1j * np.pi / 9
    return 1j * np.pi * (12 * alpha * alpha + 1) / 36


def term1_numeric(s, alpha, rho, corr=None):
    """-(s^(-2/3) E~(1)^{-1} R_1'(1) E~(1))_21 from the numerical R_1'(1)."""
    corr = correction_matrices(s, alpha, rho) if corr is None else corr
    E = e1_at_1_closed_form(s, alpha, rho)
    return complex(-(np.linalg.solve(E, corr.r1_prime_1) @ E)[1, 0] / s ** (2 / 3))


def term2_closed_form(s, alpha, rho):
    ct1 = _sf.expansion_coeffs(s, rho)["ct1"]
    return -1j * SQ3 * alpha * np.pi * ct1 / 3 * s ** (2 / 3)


def term2_numeric(s, alpha, rho):
    """-(E~^{-1} E~')_21 at 1 from the Cauchy integrals of E~."""
    E, Ep = e1_at_1_numeric(s, alpha, rho)
    return complex(-np.linalg.solve(E, Ep)[1, 0])


def term3_closed_form(s, rho):
    ct1 = _sf.expansion_coeffs(s, rho)["ct1"]
    return 1j * np.pi * ct1 ** 2 / 2 * s ** (4 / 3)


def dFds_from_rh(s, alpha, rho, term1="limit", corrected=False):
    """-(1/(2 pi i s)) (term1 + term2 + term3).

    ``term1`` selects the first term: ``limit`` (its s -> infinity value,
    which turns the sum into the five-term expansion exactly), ``closed``
    (the closed form at finite s) or ``numeric`` (from R_1'(1)).
    ``corrected`` replaces |c_1| by c_1 in the closed form and the limit.
    """
    if s < 4:
        raise ValueError("the large-s assembly needs s >= 4")
    if term1 == "limit":
        t1 = term1_limit(alpha, corrected)
    elif term1 == "closed":
        t1 = term1_closed_form(s, alpha, rho, corrected)
    elif term1 == "numeric":
        t1 = term1_numeric(s, alpha, rho)
    else:
        raise ValueError("term1 must be 'limit', 'closed' or 'numeric'")
    tot = t1 + term2_closed_form(s, alpha, rho) + term3_closed_form(s, rho)
    return float((-tot / (2j * np.pi * s)).real)
