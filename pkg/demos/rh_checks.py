"""Jump conditions, matching and the dF/ds assembly at one parameter point.

    python demos/rh_checks.py
"""
import numpy as np

from pearcey import parametrix as P
from pearcey.fredholm import dF

s, alpha, rho = 8.0, 2.5, 1.0

for ray in (1, 2, 3):
    print("Bessel ray %d  %.2e" % (ray, P.bessel_jump_residual(ray, 2.0, alpha)))
for x in (-2.0, 4.0):
    print("N_alpha at %+.1f  %.2e" % (x, P.n_alpha_jump_residual(x, alpha)))
for which, names in (("0", ("sigma2", "sigma3", "sigma4")), ("1", ("sigma1", "sigma0", "sigma5"))):
    for nm in names:
        print("P%s on %s  %.2e" % (which, nm, P.local_jump_residual(which, nm, 0.1, s, alpha, rho)))

print("\n%8s %12s %12s" % ("s", "disc 0", "disc 1"))
for big in (1e2, 1e3, 1e4):
    print("%8.0e %12.4e %12.4e" % (big, P.matching_norm("0", big, alpha, rho),
                                   P.matching_norm("1", big, alpha, rho)))

corr = P.correction_matrices(s, alpha, rho)
print("\nterm1 numeric    ", P.term1_numeric(s, alpha, rho, corr))
print("term1 (|c_1|)    ", P.term1_closed_form(s, alpha, rho))
print("term1 (c_1)      ", P.term1_closed_form(s, alpha, rho, corrected=True))

for big in (10.0, 20.0):
    fd = dF(big, 2.0, 0.0, which="s").value
    print("s=%4.0f dF/ds %.5f  RH (stated) %.5f  RH (c_1) %.5f"
          % (big, fd, P.dFds_from_rh(big, 2.0, 0.0), P.dFds_from_rh(big, 2.0, 0.0, corrected=True)))
