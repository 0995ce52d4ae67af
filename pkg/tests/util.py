"""Shared scenario builders and independent numerical oracles.

The oracles here deliberately avoid the package's closed-form code paths:
the linear-potential action integrates the Lagrangian along the exact
constant-force trajectory, and the boundary-value oracle solves the
complex oscillator equation of motion by RK4 shooting and integrates the
Lagrangian along the numerical path.
"""

import numpy as np

from rpif import BeamRecord, PhysicalParams, Scenario, validate_scenario
from rpif.timefunctions import ConstantFunction

NBASE = PhysicalParams(m=1.0, g=1.0, hbar=1.0, tau_start=0.0, tau_end=1.0)


def make_scenario(m=1.0, g=1.0, hbar=1.0, tau_start=0.0, tau_end=1.0,
                  z1=0.0, z2=0.5, f=None, a=None, b=None,
                  delta_a=1.0, delta_b=2.0) -> Scenario:
    params = PhysicalParams(m=m, g=g, hbar=hbar,
                            tau_start=tau_start, tau_end=tau_end)
    return validate_scenario(Scenario(
        params=params, z1=z1, z2=z2,
        frame_profile=f if f is not None else ConstantFunction(1.0),
        beam_a=BeamRecord(a if a is not None else ConstantFunction(0.1), delta_a),
        beam_b=BeamRecord(b if b is not None else ConstantFunction(-0.1), delta_b),
    ))


def baseline_scenario() -> Scenario:
    """Reference case: m=hbar=T=1, g=1, f=1, a=0.1, b=-0.1, da=1, db=2."""
    return make_scenario()


def linear_potential_action(m, g, T, z1, z2, samples=20001) -> float:
    """Action along the exact trajectory of z'' = -g between z1 and z2.

    Solves the two-point problem in closed form (constant force) and
    integrates L = m*zdot^2/2 - m*g*z by Simpson's rule.
    """
    from scipy.integrate import simpson

    t = np.linspace(0.0, T, samples)
    v0 = (z2 - z1) / T + g * T / 2.0
    z = z1 + v0 * t - 0.5 * g * t * t
    zdot = v0 - g * t
    lagrangian = 0.5 * m * zdot ** 2 - m * g * z
    return float(simpson(lagrangian, x=t))


def bvp_on_path_action(w, force, m, t0, t1, z1, z2, n=4000) -> complex:
    """Driven-oscillator action via RK4 shooting, independent of any
    closed-form algebra.

    Solves m*z'' + m*w^2*z = F(t) as a two-point boundary problem
    (particular plus homogeneous solution, exact superposition for a
    linear ODE) and integrates L = m*zdot^2/2 - m*w^2*z^2/2 + F*z along
    the path.
    """
    from scipy.integrate import simpson

    h = (t1 - t0) / n
    ts = t0 + h * np.arange(n + 1)

    def rhs_full(t, y):
        return np.array([y[1], force(t) / m - w * w * y[0]], dtype=complex)

    def rhs_hom(t, y):
        return np.array([y[1], -w * w * y[0]], dtype=complex)

    def rk4(y0, rhs):
        ys = np.empty((n + 1, 2), dtype=complex)
        ys[0] = y0
        y = np.array(y0, dtype=complex)
        for i in range(n):
            t = ts[i]
            k1 = rhs(t, y)
            k2 = rhs(t + h / 2, y + h / 2 * k1)
            k3 = rhs(t + h / 2, y + h / 2 * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            ys[i + 1] = y
        return ys

    y_part = rk4(np.array([z1, 0.0], dtype=complex), rhs_full)
    y_hom = rk4(np.array([0.0, 1.0], dtype=complex), rhs_hom)
    v0 = (z2 - y_part[-1, 0]) / y_hom[-1, 0]
    path = y_part + v0 * y_hom
    z, zdot = path[:, 0], path[:, 1]
    f_vals = np.array([force(t) for t in ts], dtype=complex)
    lagrangian = 0.5 * m * zdot ** 2 - 0.5 * m * w * w * z ** 2 + f_vals * z
    return complex(simpson(lagrangian, x=ts))
