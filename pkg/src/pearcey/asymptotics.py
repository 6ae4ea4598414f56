"""Large-s expansion of the gap probability and fits against numerical data.

F(s) = -9/2^(14/3) s^(4/3) + rho/2 s + (3a - rho^2)/2^(7/3) s^(2/3)
       - a rho/2^(2/3) s^(1/3) + L ln s + rho^4/108 + a rho^2/6 + C + O(s^(-1/3))

with L = -(12a^2 + 1)/72 as originally stated.  The numerics of this
package (Fredholm determinant and the RH assembly) give L = -1/18 for all
alpha instead; ``corrected=True`` switches to that value everywhere.
"""
from dataclasses import dataclass, field

import numpy as np

LEADING = -9.0 / 2 ** (14.0 / 3.0)
LOG_COEFF_CORRECTED = -1.0 / 18.0
MIN_POINTS = 6
MIN_SPAN = 2.5
MAX_EST_ERROR = 1e-3
MAX_COND = 1e10


class FitError(ValueError):
    """The data cannot support the requested fit."""


def log_coefficient(alpha, corrected=False):
    if corrected:
        return LOG_COEFF_CORRECTED
    return -(12.0 * alpha * alpha + 1.0) / 72.0


@dataclass(frozen=True)
class Theorem1Expansion:
    alpha: float
    rho: float
    corrected: bool = False

    @property
    def powers(self):
        """Coefficients of s^p for p = 4/3, 1, 2/3, 1/3 (keys are 3p)."""
        a, r = self.alpha, self.rho
        return {4: LEADING, 3: r / 2, 2: (3 * a - r * r) / 2 ** (7.0 / 3.0),
                1: -a * r / 2 ** (2.0 / 3.0)}

    @property
    def log(self):
        return log_coefficient(self.alpha, self.corrected)

    @property
    def const_part(self):
        """rho^4/108 + a rho^2/6, the known part of the constant."""
        return self.rho ** 4 / 108 + self.alpha * self.rho ** 2 / 6

    def known(self, s):
        """All terms except the undetermined constant C."""
        s = np.asarray(s, dtype=float)
        out = sum(c * s ** (k / 3.0) for k, c in self.powers.items())
        return out + self.log * np.log(s) + self.const_part

    def value(self, s, C=0.0):
        return self.known(s) + C

    def ds_coefficients(self):
        """Coefficients of d/ds, keyed by 3p for s^p (the log term lands on -3)."""
        out = {k - 3: c * k / 3.0 for k, c in self.powers.items()}
        out[-3] = out.get(-3, 0.0) + self.log
        return out


def theorem1_eval(s, alpha, rho, C=0.0, corrected=False):
    return Theorem1Expansion(alpha, rho, corrected).value(s, C)


def dFds_coefficients(alpha, rho, corrected=False):
    """The s-derivative expansion written out independently (keys 3p)."""
    a, r = alpha, rho
    return {1: -3.0 / 2 ** (8.0 / 3.0), 0: r / 2, -1: (3 * a - r * r) / (3 * 2 ** (4.0 / 3.0)),
            -2: -a * r / (3 * 2 ** (2.0 / 3.0)), -3: log_coefficient(a, corrected)}


def dFds_expansion(s, alpha, rho, corrected=False):
    s = np.asarray(s, dtype=float)
    return sum(c * s ** (k / 3.0) for k, c in dFds_coefficients(alpha, rho, corrected).items())


def dFdrho_expansion(s, alpha, rho):
    s = np.asarray(s, dtype=float)
    return (s / 2 - rho / 2 ** (4.0 / 3.0) * s ** (2.0 / 3.0) - alpha / 2 ** (2.0 / 3.0) * s ** (1.0 / 3.0)
            + rho * (rho * rho + 9 * alpha) / 27)


@dataclass
class FitResult:
    C_hat: float
    a: float
    rms: float
    residuals: np.ndarray
    s: np.ndarray
    C_err: float
    a_err: float
    log_coeff: float
    log_err: float = 0.0
    log_fitted: bool = False
    cond: float = field(default=0.0, repr=False)


def _unpack(points, max_est_error):
    pts = [tuple(p) for p in points]
    if len(pts) < MIN_POINTS:
        raise FitError("need at least %d points, got %d" % (MIN_POINTS, len(pts)))
    s = np.array([p[0] for p in pts], dtype=float)
    F = np.array([p[1] for p in pts], dtype=float)
    err = np.array([p[2] if len(p) > 2 else 0.0 for p in pts], dtype=float)
    if np.any(s <= 0):
        raise FitError("s must be positive")
    if s.max() / s.min() < MIN_SPAN:
        raise FitError("s-range spans a factor %.3g < %g" % (s.max() / s.min(), MIN_SPAN))
    if np.any(err > max_est_error):
        raise FitError("a point has est_error above %g" % max_est_error)
    return s, F


def fit_constant(points, alpha, rho, corrected=False, free_log=False,
                 max_est_error=MAX_EST_ERROR, max_cond=MAX_COND):
    """Least squares of F_num - (known terms) on C + a s^(-1/3).

    ``points`` holds (s, F) or (s, F, est_error).  With ``free_log`` the log
    coefficient is fitted as a third unknown (diagnostic only: on a short
    s-range ln s and s^(-1/3) are nearly collinear).
    """
    s, F = _unpack(points, max_est_error)
    ex = Theorem1Expansion(alpha, rho, corrected)
    cols = [np.ones_like(s), s ** (-1.0 / 3.0)]
    y = F - ex.known(s)
    if free_log:
        y = y + ex.log * np.log(s)
        cols.append(np.log(s))
    A = np.vstack(cols).T
    cond = float(np.linalg.cond(A))
    if cond > max_cond:
        raise FitError("design matrix condition number %.3g" % cond)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    dof = len(s) - A.shape[1]
    sigma2 = float(res @ res) / dof if dof > 0 else 0.0
    cov = sigma2 * np.linalg.inv(A.T @ A)
    err = np.sqrt(np.diag(cov))
    out = FitResult(float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(res ** 2))), res, s,
                    float(err[0]), float(err[1]), ex.log, cond=cond)
    if free_log:
        out.log_coeff, out.log_err, out.log_fitted = float(coef[2]), float(err[2]), True
    return out


def fcet_exponent(points, alpha=0.0, rho=0.0, subtract=True, corrected=False,
                  max_est_error=MAX_EST_ERROR):
    """Slope of ln(-G) against ln s where G is F with the known sub-leading
    terms removed (or F itself when ``subtract`` is false)."""
    s, F = _unpack(points, max_est_error)
    G = F
    if subtract:
        ex = Theorem1Expansion(alpha, rho, corrected)
        G = F - (ex.known(s) - LEADING * s ** (4.0 / 3.0))
    if np.any(G >= 0):
        raise FitError("the reduced data must be negative to take logarithms")
    return float(np.polyfit(np.log(s), np.log(-G), 1)[0])
