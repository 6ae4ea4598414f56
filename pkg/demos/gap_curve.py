"""Gap probability against the large-s expansion.

    python demos/gap_curve.py [alpha] [rho]
"""
import sys

import numpy as np

from pearcey.asymptotics import theorem1_eval
from pearcey.fredholm import gap_log_prob

alpha = float(sys.argv[1]) if len(sys.argv) > 1 else 2.0
rho = float(sys.argv[2]) if len(sys.argv) > 2 else 0.0

print("%6s %14s %12s %6s %14s" % ("s", "F", "P(gap)", "m", "F - expansion"))
for s in np.geomspace(0.5, 25, 10):
    g = gap_log_prob(s, alpha, rho)
    # C is unknown, so the last column tends to a constant rather than zero
    print("%6.2f %14.8f %12.4e %6d %14.6f"
          % (s, g.F, np.exp(g.F), g.m_used, g.F - theorem1_eval(s, alpha, rho)))
