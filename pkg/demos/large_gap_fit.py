"""Fit of the constant C on s in [8, 25], once with the log coefficient
-(12 alpha^2 + 1)/72 and once with -1/18.

    python demos/large_gap_fit.py
"""
from pearcey.asymptotics import fcet_exponent, fit_constant
from pearcey.fredholm import gap_log_prob

alpha = 2.0
grid = [8.0, 10.0, 12.5, 16.0, 20.0, 25.0]

for rho in (0.0, 0.5):
    pts = [(s, gap_log_prob(s, alpha, rho).F) for s in grid]
    for corrected in (False, True):
        r = fit_constant(pts, alpha, rho, corrected=corrected)
        print("rho=%.1f log coeff %+.4f: C_hat %+.5f +- %.5f  a %+.4f  rms %.2e"
              % (rho, r.log_coeff, r.C_hat, r.C_err, r.a, r.rms))
    free = fit_constant(pts, alpha, rho, free_log=True)
    print("rho=%.1f freed log coeff %+.4f +- %.4f, exponent %.4f"
          % (rho, free.log_coeff, free.log_err, fcet_exponent(pts, alpha, rho)))
