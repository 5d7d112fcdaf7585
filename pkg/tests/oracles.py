"""Independent reference values.

Nothing here calls the quadrature engine.  K is inverted through the Lambert W
function, and the root energies below were produced by plain bisection (to
1e-12 in c) on residuals evaluated with the ODE-flow engine only, then frozen.
"""

import math

import numpy as np
from scipy.special import lambertw


def invert_K_lambert(x: float, right: bool) -> float:
    # K(R) = x  <=>  u = R^2 solves u e^{-u} = e^{-1} / x^2
    z = -math.exp(-1.0) / (x * x)
    w = lambertw(z, -1 if right else 0)
    return math.sqrt(-float(np.real(w)))


def bisect(f, a, b, tol=1e-12):
    fa = f(a)
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


# flow-engine bisection roots of  w1 h1 + w2 h2 + w3 h3 = pi
C0_EYE = 1.1585180455514683        # h1 + 4 h2
C_STAR_4RAY = 1.3107606792932327   # 2 h1
C_LENS = 1.1956207587782561        # h1 + 2 h2
C_HEART = 1.4901375832688275       # h1 + h2 + h3
C_FOX = 1.1635096084230765         # h1 + 3 h2
