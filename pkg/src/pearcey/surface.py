"""Three-sheeted Riemann surface of w^3 - (3/2) w^2 + z/2 = 0.

Sheets: R1 = C \\ [1, inf), R2 = C \\ ((-inf, 0] U [1, inf)), R3 = C \\ (-inf, 0].
The surface is glued crosswise along (-inf, 0) between sheets 2 and 3 and
along (1, inf) between sheets 1 and 2.

The phase functions are

    lambda_j = a w_j^2 - (a + 2^(1/3) r) w_j - 3/2^(7/3) + r/2^(2/3),

with a = 3/2^(1/3) and r = rho/s^(1/3).  All functions accept complex
arrays.  A point exactly on a cut of the requested sheet is rejected;
boundary values are obtained with :func:`w_boundary`.
"""
import numpy as np

from .numerics import extrapolate_to_zero

OMEGA = np.exp(2j * np.pi / 3)
C13 = 2.0 ** (1.0 / 3.0)
BOUNDARY_DELTAS = (1e-5, 5e-6, 2.5e-6)


class CutError(ValueError):
    """Raised when a point lies on a branch cut of the requested sheet."""


def _z(z):
    return np.asarray(z, dtype=complex)


def _on_cut(z, sheet):
    real = np.imag(z) == 0
    x = np.real(z)
    neg = real & (x <= 0)
    pos = real & (x >= 1)
    if sheet == 1:
        return pos
    if sheet == 3:
        return neg
    return neg | pos


def _eta_raw(z):
    # both roots of eta^2 + (4z - 2) eta + 1 = 0; keep the one with Im > 0.
    # The larger root is formed without cancellation and the smaller one as
    # its reciprocal (the product of the roots is 1).
    q = 2 * np.sqrt(z * (z - 1))
    b = 1 - 2 * z
    ep, em = b + q, b - q
    big = np.where(np.abs(ep) >= np.abs(em), ep, em)
    small = 1.0 / big
    return np.where(np.imag(big) > np.imag(small), big, small)


def eta(z):
    """eta(z) = 2 sqrt(z(z-1)) + 1 - 2z with arg eta in (0, pi)."""
    z = _z(z)
    if np.any(_on_cut(z, 2)):
        raise CutError("eta is undefined on (-inf, 0] U [1, inf)")
    return _eta_raw(z)


def _w_from_eta(e):
    c = np.power(e, 1.0 / 3.0)
    ci = 1.0 / c
    w1 = 0.5 * (c + ci + 1)
    w2 = 0.5 * (c / OMEGA + OMEGA * ci + 1)
    w3 = 0.5 * (OMEGA * c + ci / OMEGA + 1)
    return w1, w2, w3


def _w_any(z):
    """w-triple with cut points of sheet 2 replaced by their upper limits.

    On (-inf, 0) the w1 value is the analytic one and on (1, inf) the w3
    value is, since sheets 1 and 3 are analytic there.
    """
    z = _z(z)
    on = _on_cut(z, 2) & (z != 0) & (z != 1)
    zz = np.where(on, z + 1j * 1e-200, z)
    e = _eta_raw(zz)
    w = _w_from_eta(e)
    zero = z == 0
    one = z == 1
    if np.any(zero) or np.any(one):
        w = tuple(np.array(v) for v in w)
        for arr, val in zip(w, (1.5, 0.0, 0.0)):
            arr[zero] = val
        for arr, val in zip(w, (1.0, 1.0, -0.5)):
            arr[one] = val
    return w


def w_triple(z):
    """The three solutions (w1, w2, w3) on their sheets.

    Points with Im z = 0 on a cut of sheet 2 are given their limits from the
    upper half-plane; for w1 on (-inf, 0) and w3 on (1, inf) that is the
    analytic value.
    """
    return _w_any(z)


def w_sheet(j, z):
    """w_j on sheet j; raises CutError on the cut of that sheet."""
    z = _z(z)
    if np.any(_on_cut(z, j) & (z != 0) & (z != 1)):
        raise CutError("point on the cut of sheet %d" % j)
    return _w_any(z)[j - 1]


def w_boundary(x, side):
    """Boundary values w_{j,+} (side=+1, from above) or w_{j,-} (side=-1) on
    (-inf, 0) or (1, inf), obtained by extrapolating z = x + i*side*delta to
    delta = 0."""
    x = np.asarray(x, dtype=float)
    if np.any((x >= 0) & (x <= 1)):
        raise ValueError("boundary values are taken on (-inf,0) or (1,inf)")
    d = np.array(BOUNDARY_DELTAS)
    samples = np.array([np.stack(_w_any(x + 1j * side * dd)) for dd in d])
    return extrapolate_to_zero(d, samples, order=1)


def eta_boundary(x, side):
    """Boundary value of eta on (-inf, 0) or (1, inf) from above (side=+1)
    or below (side=-1), by extrapolation in the distance to the cut."""
    x = np.asarray(x, dtype=float)
    if np.any((x >= 0) & (x <= 1)):
        raise ValueError("boundary values are taken on (-inf,0) or (1,inf)")
    d = np.array(BOUNDARY_DELTAS)
    samples = np.array([_eta_raw(x + 1j * side * dd) for dd in d])
    return extrapolate_to_zero(d, samples, order=1)


def cubic_residual(w, z):
    return w ** 3 - 1.5 * w ** 2 + 0.5 * _z(z)


# --------------------------------------------------------------------------
# lambda functions

def _r(s, rho):
    return rho / s ** (1.0 / 3.0)


def lambda_from_w(w, s, rho):
    a = 3.0 / C13
    r = _r(s, rho)
    return a * w * w - (a + C13 * r) * w - 3.0 / 2 ** (7.0 / 3.0) + r / C13 ** 2


def lambda_triple(z, s, rho):
    """(lambda_1, lambda_2, lambda_3) at z."""
    return tuple(lambda_from_w(w, s, rho) for w in _w_any(z))


def lambda_sheet(j, z, s, rho):
    return lambda_from_w(w_sheet(j, z), s, rho)


def lambda_star(j, z):
    """The s-independent part of lambda_j (rho = 0)."""
    return lambda_from_w(w_sheet(j, z), 1.0, 0.0)


def expansion_coeffs(s, rho, corrected=False):
    """Coefficients d1, d2, c0..c3 and ct0..ct3 of the local expansions.

    With ``corrected=True`` ct2 has the opposite overall sign, which is what
    the Taylor expansion of lambda_1, lambda_2 at z = 1 requires (the
    printed sign leaves an O(z-1) remainder).
    """
    r = _r(s, rho)
    r3 = np.sqrt(3.0)
    out = {
        "d1": -0.5 + r / 2 ** (4.0 / 3.0),
        "d2": 3.0 / 2 ** (11.0 / 3.0) - r / 6.0,
        "c0": -3.0 / 2 ** (7.0 / 3.0) + r / 2 ** (2.0 / 3.0),
        "c1": -r3 / C13 - C13 * r / r3,
        "c2": 2 ** (2.0 / 3.0) / 3 - C13 * r / 9,
        "c3": 7 * 2 ** (2.0 / 3.0) / (36 * r3) - 5 * C13 * r / (54 * r3),
        "ct0": -3.0 / 2 ** (7.0 / 3.0) - r / 2 ** (2.0 / 3.0),
        "ct1": r3 / C13 - C13 * r / r3,
        "ct2": 2 ** (2.0 / 3.0) / 3 + C13 * r / 9,
        "ct3": 7 * 2 ** (2.0 / 3.0) / (36 * r3) + 5 * C13 * r / (54 * r3),
    }
    if corrected:
        out["ct2"] = -out["ct2"]
    return out


# --------------------------------------------------------------------------
# theta functions

def theta(k, z, rho):
    """theta_k(z) = (3/2) omega^(2k) z^(2/3) + rho omega^k z^(1/3)."""
    z = _z(z)
    z13 = np.power(z, 1.0 / 3.0)
    return 1.5 * OMEGA ** (2 * k) * z13 * z13 + rho * OMEGA ** k * z13


def theta_diag(z, rho):
    """Diagonal entries of Theta(z): (theta1, theta2, theta3) in the upper
    half-plane, (theta2, theta1, theta3) in the lower."""
    z = _z(z)
    t1, t2, t3 = theta(1, z, rho), theta(2, z, rho), theta(3, z, rho)
    up = np.imag(z) >= 0
    return np.where(up, t1, t2), np.where(up, t2, t1), t3


def theta_sheet_index(j, z):
    """Index k with lambda_j(z) ~ s^(-2/3) theta_k(sz) at infinity."""
    up = np.imag(z) >= 0
    if j == 3:
        return 3
    if j == 1:
        return 1 if up else 2
    return 2 if up else 1


# --------------------------------------------------------------------------
# truncated local expansions, each returned with its stated remainder order

def _half(z):
    return np.where(np.imag(z) >= 0, 1.0, -1.0)


def series_eta_inf(z):
    z = _z(z)
    up = -1 / (4 * z) - 1 / (8 * z ** 2) - 5 / (64 * z ** 3)
    lo = -4 * z + 2 + 1 / (4 * z) + 1 / (8 * z ** 2) + 5 / (64 * z ** 3)
    return np.where(np.imag(z) > 0, up, lo), -4.0


def series_eta_0(z):
    z = _z(z)
    u = np.sqrt(z)
    return 1 + 2j * u - 2 * z - 1j * u ** 3 - 0.25j * u ** 5, 3.5


# z^2 coefficient of w_2 and w_3 at 0
W0_Z2 = 8.0 / 243


def _w_inf_terms(z, p, q):
    # shared shape of the w2/w3 expansions; p multiplies the odd slots
    z13 = np.power(z, 1.0 / 3.0)
    return (-p * z13 / C13 + 0.5 - q / 2 ** (5.0 / 3.0) / z13
            + p / (6 * C13) / z13 ** 2 - q / (6 * 2 ** (5.0 / 3.0)) / z13 ** 4)


def series_w_inf(j, z):
    z = _z(z)
    if j == 3:
        return _w_inf_terms(z, 1.0, 1.0), -5.0 / 3.0
    if j == 2:
        up = np.imag(z) > 0
        p = np.where(up, OMEGA ** 2, OMEGA)
        q = np.where(up, OMEGA, OMEGA ** 2)
        return _w_inf_terms(z, p, q), -5.0 / 3.0
    raise ValueError("series at infinity is printed for sheets 2 and 3")


def series_w_0(j, z, corrected=False):
    """Expansion of w_2, w_3 at 0.  As printed it stops at z^(3/2) and claims
    an O(z^(5/2)) remainder; the z^2 term (``corrected=True``) is needed for
    that."""
    z = _z(z)
    if j not in (2, 3):
        raise ValueError("series at 0 is printed for sheets 2 and 3")
    sg = 1.0 if j == 2 else -1.0
    u = np.sqrt(z)
    val = sg * u / np.sqrt(3.0) + z / 9 + sg * 5 * np.sqrt(3.0) / 162 * u ** 3
    if corrected:
        val = val + W0_Z2 * z * z
    return val, 2.5


def series_w_1(j, z):
    z = _z(z)
    if j not in (1, 2):
        raise ValueError("series at 1 is printed for sheets 1 and 2")
    sg = -_half(z) if j == 1 else _half(z)
    u = np.sqrt(z - 1)
    val = (1 + sg * 1j / np.sqrt(3.0) * u + (z - 1) / 9
           - sg * 5 * np.sqrt(3.0) * 1j / 162 * u ** 3 - 8.0 / 243 * (z - 1) ** 2)
    return val, 2.5


def series_lambda_inf(j, z, s, rho):
    z = _z(z)
    c = expansion_coeffs(s, rho)
    r = _r(s, rho)
    z13 = np.power(z, 1.0 / 3.0)
    if j == 3:
        a, b = 1.0, 1.0
    elif j == 2:
        up = np.imag(z) > 0
        a = np.where(up, OMEGA, OMEGA ** 2)
        b = np.where(up, OMEGA ** 2, OMEGA)
    else:
        raise ValueError("series at infinity is printed for sheets 2 and 3")
    val = 1.5 * a * z13 ** 2 + r * b * z13 + a * c["d1"] / z13 + b * c["d2"] / z13 ** 2
    return val, -1.0


def series_lambda_0(j, z, s, rho):
    z = _z(z)
    if j not in (2, 3):
        raise ValueError("series at 0 is printed for sheets 2 and 3")
    c = expansion_coeffs(s, rho)
    sg = 1.0 if j == 2 else -1.0
    u = np.sqrt(z)
    return c["c0"] + sg * c["c1"] * u + c["c2"] * z + sg * c["c3"] * u ** 3, 2.0


def series_lambda_1(j, z, s, rho, corrected=False):
    z = _z(z)
    if j not in (1, 2):
        raise ValueError("series at 1 is printed for sheets 1 and 2")
    c = expansion_coeffs(s, rho, corrected=corrected)
    sg = -_half(z) if j == 1 else _half(z)
    u = np.sqrt(z - 1)
    val = c["ct0"] + sg * 1j * c["ct1"] * u + c["ct2"] * (z - 1) + sg * 1j * c["ct3"] * u ** 3
    return val, 2.0


def check_series(location, obj, sheet, radius, half=+1, s=8.0, rho=0.0, npts=16,
                 corrected=False):
    """Residual of a printed truncated expansion on an arc of a circle.

    Samples ``npts`` points on the half-circle (upper if ``half`` > 0) of the
    given radius around the expansion point (0, 1 or infinity, where the
    radius is |z|) and returns the maximal |exact - series| together with the
    printed remainder order.
    """
    phi = np.linspace(0.05, np.pi - 0.05, npts) * (1 if half > 0 else -1)
    center = {"0": 0.0, "1": 1.0, "inf": 0.0}[str(location)]
    z = center + radius * np.exp(1j * phi)
    if obj == "eta":
        exact = eta(z)
        approx, order = (series_eta_inf if location == "inf" else series_eta_0)(z)
    elif obj == "w":
        exact = w_sheet(sheet, z)
        if location == "0":
            approx, order = series_w_0(sheet, z, corrected=corrected)
        else:
            fn = {"inf": series_w_inf, "1": series_w_1}[str(location)]
            approx, order = fn(sheet, z)
    elif obj == "lambda":
        exact = lambda_sheet(sheet, z, s, rho)
        if location == "1":
            approx, order = series_lambda_1(sheet, z, s, rho, corrected=corrected)
        else:
            fn = {"inf": series_lambda_inf, "0": series_lambda_0}[str(location)]
            approx, order = fn(sheet, z, s, rho)
    else:
        raise ValueError("unknown object %r" % (obj,))
    return float(np.max(np.abs(exact - approx))), order


def observed_order(location, obj, sheet, r1, r2, **kw):
    """Decay exponent of the residual between two radii, together with the
    printed remainder order."""
    e1, order = check_series(location, obj, sheet, r1, **kw)
    e2, _ = check_series(location, obj, sheet, r2, **kw)
    return float(np.log(e2 / e1) / np.log(r2 / r1)), order


# --------------------------------------------------------------------------
# sign estimates on the lens contours

def sign_bounds_scan(s, rho, eps=0.1, nrad=200, rmax=1e3, star=False):
    """Sample Re(lambda2 - lambda1) on the rays from 1 at angles +-pi/4 and
    Re(lambda2 - lambda3) on the rays from 0 at angles +-3pi/4, outside the
    discs of radius ``eps``.

    Returns the largest sampled real part on each family (negative when the
    estimates hold) and the constants inf(-Re / |z|^(2/3)).
    """
    r = np.geomspace(eps, rmax, nrad)
    if star:
        s, rho = 1.0, 0.0
    out = {}
    for name, base, angles, (ja, jb) in (
            ("one", 1.0, (np.pi / 4, -np.pi / 4), (2, 1)),
            ("zero", 0.0, (3 * np.pi / 4, -3 * np.pi / 4), (2, 3))):
        vals, consts = [], []
        for a in angles:
            z = base + r * np.exp(1j * a)
            d = np.real(lambda_sheet(ja, z, s, rho) - lambda_sheet(jb, z, s, rho))
            vals.append(d.max())
            consts.append(np.min(-d / np.abs(z) ** (2.0 / 3.0)))
        out[name] = (float(max(vals)), float(min(consts)))
    return out
