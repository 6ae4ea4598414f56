"""The hard edge Pearcey kernel and its building blocks.

The contour integrals

    P_k(z) = c_k * int_{gamma_k} t^(alpha-3) exp(z t + rho/t + 1/(2 t^2)) dt

solve  z P''' + alpha P'' - rho P' - P = 0.  With c_1 = 1, c_2 = c_3 = e^(-i pi alpha)
and c_4 = e^(i pi alpha).  The loops gamma_1 (right, counterclockwise) and
gamma_2 (left, clockwise) start and end at t = 0, which they approach
vertically where exp(1/(2t^2)) vanishes.  gamma_3 and gamma_4 run from
infinity in the left half-plane to 0 through the upper and lower half-plane.

All contours are written as t = z^(-1/3) tau with a fixed tau-contour that
passes through the saddle points tau^3 = 1 of tau + 1/(2 tau^2), so integrand
magnitudes stay close to the size of the result.

The frame

    Psi~(x) = e^(rho^2/6)/sqrt(2 pi) [P_2 P_3 P_1; P_2' P_3' P_1'; P_2'' P_3'' P_1'']

gives the kernel K(x, y) = f(x)^T h(y) / (x - y) with f = Psi~ e_1 and
h = Psi~^(-T) e_2 / (2 pi i).
"""
import numpy as np

from dataclasses import dataclass

from .numerics import (Arc, ContourError, Ray, contour_rule, integrate_contour,
                       solve_linear)

SADDLE_UP = np.exp(2j * np.pi / 3)
OMEGA = SADDLE_UP
# relative error accepted when adaptive refinement stalls on roundoff
ACCEPT_FLOOR = 1e-9


class UnsupportedRepresentation(ValueError):
    """Raised when a kernel representation is used outside its validity."""


def _ray_direction(k, theta):
    # direction d of the tail with Re(z^(2/3) d) -> -inf, kept inside the
    # half-plane of the contour's branch range
    want = np.pi - 2.0 * theta / 3.0
    if k == 3:
        lo, hi = max(0.0, np.pi / 2 - 2 * theta / 3), min(np.pi, 3 * np.pi / 2 - 2 * theta / 3)
    else:
        want = -np.pi - 2.0 * theta / 3.0
        lo, hi = max(-np.pi, -3 * np.pi / 2 - 2 * theta / 3), min(0.0, -np.pi / 2 - 2 * theta / 3)
    if lo >= hi:
        raise ValueError("no admissible tail direction for arg z = %g" % theta)
    pad = 0.1 * (hi - lo)
    return np.exp(1j * np.clip(want, lo + pad, hi - pad))


def tau_contour(k, theta=0.0, scale=1.0):
    """Segments of gamma_k in the rescaled variable tau, for arg z = theta.

    ``scale`` shrinks or stretches the loops gamma_1 and gamma_2 about 0;
    any positive value gives the same integral.
    """
    if k == 1:
        return [Arc(0.5 * scale, 0.5 * scale, -np.pi, np.pi)]
    if k == 2:
        return [Arc(-scale, scale, 2 * np.pi, 0.0)]
    if k == 3:
        return [Ray(SADDLE_UP, _ray_direction(3, theta), inward=True),
                Arc(-1.0, 1.0, np.pi / 3, 0.0)]
    if k == 4:
        return [Ray(np.conj(SADDLE_UP), _ray_direction(4, theta), inward=True),
                Arc(-1.0, 1.0, -np.pi / 3, 0.0)]
    raise ValueError("k must be 1, 2, 3 or 4")


def _log_tau(k, tau):
    if k == 2:
        ang = np.mod(np.angle(tau), 2 * np.pi)
        return np.log(np.abs(tau)) + 1j * ang
    return np.log(tau)


def _prefactor(k, alpha):
    if k == 1:
        return 1.0
    if k in (2, 3):
        return np.exp(-1j * np.pi * alpha)
    return np.exp(1j * np.pi * alpha)


def pk_eval(k, z, alpha, rho, tol=1e-13, nderiv=3, weight_shift=0, scale=1.0):
    """P_k and its first ``nderiv - 1`` derivatives at z.

    Parameters
    ----------
    k : int
        Contour index 1..4.
    z : complex
        Nonzero point with |arg z| < 3 pi / 4.
    alpha, rho : float
        Kernel parameters.
    weight_shift : int
        Extra power of t in the integrand (used for rho-derivatives).
    scale : float
        Size of the loops gamma_1, gamma_2 relative to the saddle radius.

    Returns
    -------
    ndarray of shape (nderiv,)
    """
    if k not in (1, 2, 3, 4):
        raise ValueError("contour index must be 1..4, got %r" % (k,))
    z = complex(z)
    if z == 0:
        raise ValueError("P_k is evaluated away from z = 0")
    theta = np.angle(z)
    if abs(theta) >= 0.75 * np.pi:
        raise ValueError("arg z must lie in (-3pi/4, 3pi/4)")
    # t = c tau with |c| = |z|^(-1/3), capped at 1 so that for small |z|
    # the layer where exp(1/(2t^2)) switches off keeps unit size
    logc = -np.log(max(abs(z), 1.0)) / 3.0 - 1j * theta / 3.0
    c = np.exp(logc)
    a1, a2, a3 = z * c, rho / c, 0.5 / (c * c)
    expo = alpha - 3 + weight_shift
    # exponent at the dominant saddle of the contour, factored out
    tau_s = {1: 1.0, 2: SADDLE_UP, 3: SADDLE_UP, 4: np.conj(SADDLE_UP)}[k]
    e0 = np.real(a1 * tau_s + a2 / tau_s + a3 / tau_s ** 2)
    powers = np.arange(nderiv)[:, None]

    def f(tau):
        e = (expo * (logc + _log_tau(k, tau)) + a1 * tau + a2 / tau
             + a3 / (tau * tau) - e0)
        base = np.exp(e) * c
        return base[None, :] * (c * tau[None, :]) ** powers

    try:
        val = integrate_contour(f, tau_contour(k, theta, scale), tol=tol,
                                abs_scale=1e-300, ray_scale=0.5)
    except ContourError as exc:
        # loops at complex z can stall on a roundoff plateau slightly above tol
        if exc.estimate is None or exc.error > ACCEPT_FLOOR * np.max(np.abs(exc.estimate)):
            raise
        val = exc.estimate
    return _prefactor(k, alpha) * np.exp(e0) * np.asarray(val)


# --------------------------------------------------------------------------
# the frame Psi~ and the integrable form of the kernel

COLUMN_ORDER = (2, 3, 1)


@dataclass(frozen=True)
class PsiTildeFrame:
    """Psi~ at a point x together with its x-derivative.

    ``M[i, j]`` is the i-th derivative of P_k for k = COLUMN_ORDER[j], times
    e^(rho^2/6)/sqrt(2 pi).  ``Mp`` is dM/dx, whose last row comes from the
    third order equation.
    """
    x: float
    alpha: float
    rho: float
    M: np.ndarray
    Mp: np.ndarray


def frame_prefactor(rho):
    return np.exp(rho * rho / 6.0) / np.sqrt(2 * np.pi)


def psi_tilde(x, alpha, rho, tol=1e-13):
    """Evaluate the frame Psi~(x) for x > 0 (or complex x in the right sector)."""
    if np.isrealobj(x) and x <= 0:
        raise ValueError("psi_tilde needs x > 0, got %r" % (x,))
    cols = [pk_eval(k, x, alpha, rho, tol=tol) for k in COLUMN_ORDER]
    M = frame_prefactor(rho) * np.array(cols).T
    third = (M[0] + rho * M[1] - alpha * M[2]) / x
    Mp = np.vstack([M[1], M[2], third])
    return PsiTildeFrame(x, alpha, rho, M, Mp)


def _frame(x, alpha, rho, frame):
    if frame is None:
        return psi_tilde(x, alpha, rho)
    return frame


def fh_vectors(x, alpha, rho, frame=None):
    """The vectors f(x) = Psi~(x) e_1 and h(x) = Psi~(x)^(-T) e_2 / (2 pi i)."""
    fr = _frame(x, alpha, rho, frame)
    f = fr.M[:, 0].copy()
    h = solve_linear(fr.M.T, np.array([0.0, 1.0, 0.0], dtype=complex)) / (2j * np.pi)
    return f, h


def _real_part(value, what, rtol=1e-8):
    if abs(value.imag) > rtol * max(abs(value), 1e-300) + 1e-300:
        raise ArithmeticError("%s has imaginary part %.3g relative to %.3g"
                              % (what, abs(value.imag), abs(value)))
    return float(value.real)


def kernel_psi(x, y, alpha, rho, frames=None, check_real=True):
    """K(x, y) = e_2^T Psi~(y)^(-1) Psi~(x) e_1 / (2 pi i (x - y)), x != y."""
    if abs(x - y) < 1e-8:
        raise ValueError("points too close; use kernel_diag")
    fx, fy = (None, None) if frames is None else frames
    fx = _frame(x, alpha, rho, fx)
    fy = _frame(y, alpha, rho, fy)
    col = solve_linear(fy.M, fx.M[:, 0])
    val = col[1] / (2j * np.pi * (x - y))
    return _real_part(val, "kernel_psi") if check_real else val


def kernel_diag(x, alpha, rho, frame=None, check_real=True):
    """K(x, x) = e_2^T Psi~(x)^(-1) Psi~'(x) e_1 / (2 pi i)."""
    if x <= 0:
        raise ValueError("kernel_diag needs x > 0")
    fr = _frame(x, alpha, rho, frame)
    col = solve_linear(fr.M, fr.Mp[:, 0])
    val = col[1] / (2j * np.pi)
    return _real_part(val, "kernel_diag") if check_real else val


def drho_psi_matrix(x, alpha, rho):
    """Coefficient matrix A with d Psi~ / d rho = A Psi~."""
    return np.array([[-2 * rho / 3, alpha - 1, x],
                     [1.0, rho / 3, 0.0],
                     [0.0, 1.0, rho / 3]])


def liouville_rate(x, alpha):
    """d/dx log det Psi~ predicted by the trace of the first order system."""
    return -alpha / x


# --------------------------------------------------------------------------
# closed-loop representations for integer alpha

def _require_integer_alpha(alpha):
    if abs(alpha - round(alpha)) > 1e-12 or alpha < 2:
        raise UnsupportedRepresentation(
            "this representation needs an integer alpha >= 2, got %r" % (alpha,))
    return int(round(alpha))


def gamma_loop(kind="loop", radius=1.0):
    """The t-contour of the double integral.

    ``kind="loop"``: clockwise circle centred at -radius through t = 0 (the
    left loop, approached vertically at 0).  ``kind="circle"``: the full
    counterclockwise circle |t| = radius.
    """
    if kind == "loop":
        return [Arc(-radius, radius, 2 * np.pi, 0.0)]
    if kind == "circle":
        return [Arc(0.0, radius, -np.pi, np.pi)]
    raise ValueError("unknown Gamma contour %r" % (kind,))


def sigma_circle(radius=2.0):
    """Counterclockwise circle |u| = radius."""
    return [Arc(0.0, radius, -np.pi, np.pi)]


def _t_weight(t, x, alpha, rho):
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        out = t ** alpha * np.exp(rho / t + 0.5 / (t * t) + x * t)
    return np.where(np.isfinite(out), out, 0.0)


def _u_weight(u, y, alpha, rho):
    return u ** (-alpha) * np.exp(-rho / u - 0.5 / (u * u) - y * u)


def kernel_double(x, y, alpha, rho, gamma="loop", gamma_radius=0.5,
                  sigma_radius=2.0, panels=24, n=32):
    """The double contour integral for the kernel (integer alpha >= 2).

    (2 pi i)^(-2) int_Gamma int_Sigma exp(rho/t + 1/(2t^2) - rho/u - 1/(2u^2)
    + x t - y u) (t/u)^alpha / (u - t) du dt
    """
    a = _require_integer_alpha(alpha)
    reach = 2 * gamma_radius if gamma == "loop" else gamma_radius
    if reach >= sigma_radius:
        raise ValueError("Gamma must lie inside Sigma")
    t, wt = contour_rule(gamma_loop(gamma, gamma_radius), panels, n)
    u, wu = contour_rule(sigma_circle(sigma_radius), panels, n)
    ft = wt * _t_weight(t, x, a, rho)
    gu = wu * _u_weight(u, y, a, rho)
    val = ft @ (1.0 / (u[None, :] - t[:, None])) @ gu / (2j * np.pi) ** 2
    return _real_part(complex(val), "kernel_double", rtol=1e-7)


Q_CONVENTIONS = ("t^(alpha-4)", "t^(-alpha)")


def _q_exponent(alpha, convention):
    if convention == "t^(alpha-4)":
        return alpha - 4
    if convention == "t^(-alpha)":
        return -alpha
    raise ValueError("unknown Q convention %r; choose from %s" % (convention, Q_CONVENTIONS))


def pq_functions(x, y, alpha, rho, convention="t^(-alpha)", gamma_radius=0.5,
                 sigma_radius=2.0, panels=24, n=32):
    """P, P', P'' at x over the left loop and Q, Q', Q'', Q''' at y over |u| = 2.

    P(x) = int_Gamma t^(alpha-3) exp(x t + rho/t + 1/(2t^2)) dt and
    Q(y) = int_Sigma t^beta exp(-y t - rho/t - 1/(2t^2)) dt with beta set by
    ``convention``.
    """
    a = _require_integer_alpha(alpha)
    beta = _q_exponent(a, convention)
    t, wt = contour_rule(gamma_loop("loop", gamma_radius), panels, n)
    base = wt * _t_weight(t, x, a, rho) * t ** -3.0
    P = np.array([np.sum(base * t ** k) for k in range(3)])
    u, wu = contour_rule(sigma_circle(sigma_radius), panels, n)
    g = wu * u ** float(beta) * np.exp(-rho / u - 0.5 / (u * u) - y * u)
    Q = np.array([np.sum(g * (-u) ** k) for k in range(4)])
    return P, Q


def q_ode_residual(y, alpha, rho, convention):
    """Relative residual of y Q''' + (3 - alpha) Q'' - rho Q' + Q = 0."""
    _, Q = pq_functions(1.0, y, alpha, rho, convention)
    res = y * Q[3] + (3 - alpha) * Q[2] - rho * Q[1] + Q[0]
    return float(abs(res) / np.max(np.abs(Q)))


def p_ode_residual(x, alpha, rho):
    """Relative residual of x P''' + alpha P'' - rho P' - P = 0 for the loop P."""
    a = _require_integer_alpha(alpha)
    t, wt = contour_rule(gamma_loop("loop", 0.5), 24, 32)
    base = wt * _t_weight(t, x, a, rho) * t ** -3.0
    P = np.array([np.sum(base * t ** k) for k in range(4)])
    res = x * P[3] + a * P[2] - rho * P[1] - P[0]
    return float(abs(res) / np.max(np.abs(P)))


def kernel_pq(x, y, alpha, rho, convention="t^(-alpha)", as_printed=False, **kw):
    """The kernel assembled from the single integrals P and Q.

    The numerator is

        P [y Q'' - (alpha-2) Q' - rho Q] - P' [y Q' - (alpha-1) Q] + y P'' Q

    over (2 pi i)^2 (x - y).  With ``as_printed=True`` the first bracket
    uses Q'' without the factor y and the normalisation is 2 pi i; that
    variant does not reproduce the double integral and is kept only to
    show it.
    """
    if abs(x - y) < 1e-8:
        raise ValueError("points too close")
    P, Q = pq_functions(x, y, alpha, rho, convention, **kw)
    yq = 1.0 if as_printed else y
    num = (P[0] * (yq * Q[2] - (alpha - 2) * Q[1] - rho * Q[0])
           - P[1] * (y * Q[1] - (alpha - 1) * Q[0]) + y * P[2] * Q[0])
    norm = 2j * np.pi if as_printed else (2j * np.pi) ** 2
    return complex(num / (norm * (x - y))).real


# --------------------------------------------------------------------------
# large-z structure of Psi

def pi3(alpha, rho):
    return rho * (rho * rho + 9 * alpha - 18) / 27.0


def pi6(alpha, rho):
    r2 = rho * rho
    num = (r2 ** 3 + (18 * alpha - 45) * r2 * r2 + (81 * alpha ** 2 - 405 * alpha + 405) * r2
           - 243 * alpha ** 2 + 729 * alpha - 405)
    return num / (2 * 3 ** 6)


def psi0_matrix(alpha, rho):
    p3 = pi3(alpha, rho)
    return np.array([[1.0, p3, pi6(alpha, rho)],
                     [0.0, 1.0, p3 + rho / 3],
                     [0.0, 0.0, 1.0]])


def psi1_31(alpha, rho):
    """The (3,1) entry of the 1/z correction at infinity."""
    return pi3(alpha, rho) + 2 * rho / 3


def lemma_identity_residual(alpha, rho):
    """-pi_3 - 2 rho/3 + rho (rho^2 + 9 alpha)/27, which vanishes identically."""
    return -pi3(alpha, rho) - 2 * rho / 3 + rho * (rho * rho + 9 * alpha) / 27


L_PLUS = np.array([[OMEGA, OMEGA ** 2, 1], [1, 1, 1], [OMEGA ** 2, OMEGA, 1]])
L_MINUS = np.array([[OMEGA ** 2, -OMEGA, 1], [1, -1, 1], [OMEGA, -OMEGA ** 2, 1]])

# Psi = Psi~ times the inverse jump on the ray arg z = pi/4 below that ray
_J1_INV = np.array([[1.0, 0, 0], [-1.0, 1, 0], [0, 0, 1]])


def theta_values(z, rho):
    z13 = complex(z) ** (1.0 / 3.0)
    return np.array([1.5 * OMEGA ** (2 * k) * z13 * z13 + rho * OMEGA ** k * z13
                     for k in (1, 2, 3)])


def psi_upper(z, alpha, rho):
    """Psi(z) for 0 <= arg z < 3 pi / 4 built from Psi~ (real z means z + i0)."""
    z = complex(z)
    arg = np.angle(z)
    if not (0 <= arg < 0.75 * np.pi):
        raise ValueError("psi_upper covers 0 <= arg z < 3pi/4")
    M = psi_tilde(z, alpha, rho).M
    if arg < 0.25 * np.pi:
        M = M @ _J1_INV
    return M


def psi_normalized(z, alpha, rho):
    """Psi with the exponential and algebraic factors at infinity removed.

    Returns Psi_0 (I + Psi_1/z + O(z^-2)) for z in the upper half-plane.
    """
    z = complex(z)
    th = theta_values(z, rho)
    z13 = z ** (1.0 / 3.0)
    right = (np.diag(np.exp(-th))
             @ np.diag([np.exp(-1j * np.pi * alpha / 3), np.exp(1j * np.pi * alpha / 3), 1.0])
             @ np.linalg.inv(L_PLUS) @ np.diag([1 / z13, 1.0, z13]))
    return (np.sqrt(3) / 1j) * z ** (alpha / 3) * psi_upper(z, alpha, rho) @ right


def psi_asymptotic_data(alpha, rho, r1=500.0, r2=1000.0, arg=0.0):
    """Richardson estimates of Psi_0 and (Psi_1)_31 from two radii."""
    z1, z2 = r1 * np.exp(1j * arg), r2 * np.exp(1j * arg)
    m1, m2 = psi_normalized(z1, alpha, rho), psi_normalized(z2, alpha, rho)
    psi0 = (z2 * m2 - z1 * m1) / (z2 - z1)
    p0inv = np.linalg.inv(psi0_matrix(alpha, rho))
    e1 = z1 * (p0inv @ m1 - np.eye(3))
    e2 = z2 * (p0inv @ m2 - np.eye(3))
    psi1 = (z2 * e2 - z1 * e1) / (z2 - z1)
    return psi0, psi1[2, 0]
