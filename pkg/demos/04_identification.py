"""Recover the frequency and amplitude laws from a dc bias sweep.

Each bias point runs the polynomial oscillator with a constant current, and
the carrier frequency and amplitude are read back from its trace. A
least-squares fit around the bias then gives the law coefficients.
"""

import numpy as np

from nfam import NANOCONTACT_AMPLITUDE_LAW, NANOCONTACT_FREQUENCY_LAW
from nfam.identify import BiasSweep, build_laws, operating_point_from_trace
from nfam.oscillator import DriveCurrent, polynomial_oscillator

points = []
for I in np.linspace(16.5, 19.5, 13):
    trace = polynomial_oscillator(NANOCONTACT_FREQUENCY_LAW, NANOCONTACT_AMPLITUDE_LAW, DriveCurrent(float(I)))
    f, a = operating_point_from_trace(trace)
    points.append((float(I), f, a))
    print(f"I = {I:5.2f} mA  f = {f:.6f} GHz  A = {a:.6f}")

flaw, alaw = build_laws(BiasSweep(18.0, tuple(points)))
for name, fit, ref in (("k", flaw, NANOCONTACT_FREQUENCY_LAW), ("lambda", alaw, NANOCONTACT_AMPLITUDE_LAW)):
    for h, (c, r) in enumerate(zip(fit.coeffs, ref.coeffs)):
        print(f"{name}{h}: fitted {c:+.6e}  reference {r:+.6e}  rel err {abs(c / r - 1):.1e}")
