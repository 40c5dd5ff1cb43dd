"""Reference computations independent of the package's numerical paths."""

import numpy as np
from scipy import optimize, special


def mathieu_a_even(q: float, guess_bracket=(-1.0, 0.0), depth: int = 60) -> float:
    """Characteristic value a_0(q) of ce_0 by the continued fraction

    a = 2q^2 / (a - 4 - q^2 / (a - 16 - q^2 / (a - 36 - ...)))
    """

    def residual(a):
        tail = 0.0
        for m in range(depth, 1, -1):
            tail = q * q / (a - 4 * m * m - tail)
        return a - 2 * q * q / (a - 4 - tail)

    lo, hi = guess_bracket
    return optimize.brentq(residual, lo, hi, xtol=1e-15, rtol=1e-15)


def pendulum_elliptic(q0: float, w0: float, k: float, t):
    """Closed-form solution of q'' = k sin q via Jacobi elliptic functions.

    Shifted to the standard pendulum phi'' = -omega^2 sin phi with
    phi = q - pi for k > 0 and phi = q for k < 0.
    """
    t = np.asarray(t, dtype=float)
    omega = np.sqrt(abs(k))
    shift = np.pi if k > 0 else 0.0
    phi0 = np.angle(np.exp(1j * (q0 - shift)))  # wrap to (-pi, pi]
    wrap_offset = (q0 - shift) - phi0
    energy = 0.5 * w0**2 - omega**2 * np.cos(phi0)
    kappa2 = 0.5 * (1.0 + energy / omega**2)
    if kappa2 < 1.0:  # libration
        kappa = np.sqrt(kappa2)
        m = kappa2
        # amplitude from atan2 (sin = sin(phi0/2)/kappa, cos = |w0|/(2 omega kappa)):
        # well conditioned near the turning points and the separatrix
        amp0 = np.arctan2(np.sin(phi0 / 2), abs(w0) / (2 * omega))
        u0 = special.ellipkinc(amp0, m)
        if w0 < 0:
            u0 = 2 * special.ellipk(m) - u0
        sn, _, dn, _ = special.ellipj(u0 + omega * t, m)
        phi = 2 * np.arctan2(kappa * sn, dn)  # cos(phi/2) = dn
    else:  # rotation
        kappa = np.sqrt(kappa2)
        m = 1.0 / kappa2
        sign = 1.0 if w0 >= 0 else -1.0
        u0 = special.ellipkinc(sign * phi0 / 2, m)
        _, _, _, ph = special.ellipj(u0 + kappa * omega * t, m)
        phi = sign * 2 * ph
    return phi + shift + wrap_offset


def bessel_tail_direct(z: float, n_c: int, upto: int = 600) -> float:
    n = np.arange(n_c + 1, upto)
    return 2.0 * float(np.sum(special.jv(n, z) ** 2))


def isolated_focal_time(P: float) -> float:
    """argmin of 2 - 2 J1(2P sin t): 2P sin t equals the first maximum of J1."""
    x = optimize.brentq(lambda x: special.jvp(1, x), 1.0, 2.5)
    return float(np.arcsin(x / (2 * P)))
