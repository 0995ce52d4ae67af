"""Closed-form propagation of one continuously monitored beam.

The Gaussian measurement weight turns each beam into a driven harmonic
oscillator with complex frequency

    w = sqrt(4*hbar/(m*T*delta_c^2)) * exp(-i*pi/4)

and complex driving force

    F(t) = -m*g*f(t) - i*(4*hbar/(T*delta_c^2))*c(t).

This module evaluates the oscillator's classical action between the fixed
endpoints and the resulting restricted propagator

    U = exp(-2*<c^2>/delta_c^2) * sqrt(m*w/(2*pi*i*hbar*sin(wT))) * exp(i*S/hbar).

Numerical posture:
  * w sits in the fourth quadrant, so sin(wT) grows like exp(|Im wT|) and
    never vanishes; every 1/sin is folded into bounded, exp-factored
    integrand ratios.
  * below |wT| = 1e-2 the closed form cancels catastrophically and a
    Taylor expansion through (wT)^4 takes over; at the crossover the two
    agree to ~1e-12 relative.
  * scenarios whose resolution would push exp factors past ~1e26 are
    rejected up front by the stability guard.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import quadrature
from .errors import RpifError, StabilityError
from .scenario import BeamRecord, PhysicalParams, mean_square
from .timefunctions import TimeFunction

#: guard threshold on |Im(wT)|*sqrt(2) (= |wT| on the principal branch)
STABILITY_LIMIT = 60.0

#: |wT| below which the series expansion replaces the closed form
SMALL_WT_CROSSOVER = 1e-2


@dataclass(frozen=True)
class ComplexAction:
    """Driven-oscillator action split as S = s1 + i*s2 (action units)."""

    s1: float
    s2: float

    @property
    def as_complex(self) -> complex:
        return complex(self.s1, self.s2)

    @staticmethod
    def from_complex(value: complex) -> "ComplexAction":
        return ComplexAction(float(value.real), float(value.imag))


@dataclass(frozen=True)
class PropagatorValue:
    """Restricted propagator with its three factors kept for diagnostics.

    ``amplitude`` is the product weight_norm_factor * prefactor *
    phase_factor.  ``phase_magnitude`` records |exp(i*S/hbar)|; no sign is
    asserted for the imaginary action part, this is diagnostic only.
    """

    amplitude: complex
    weight_norm_factor: float
    prefactor: complex
    phase_factor: complex
    action: ComplexAction

    @property
    def phase_magnitude(self) -> float:
        return abs(self.phase_factor)


def _ensure_finite(value, what: str):
    arr = np.asarray(value)
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise RpifError(f"{what}: non-finite value {value!r}")
    return value


def complex_frequency(params: PhysicalParams, delta_c: float) -> complex:
    """Principal root sqrt(-i*4*hbar/(m*T*delta_c^2)); arg is exactly -pi/4."""
    if delta_c <= 0:
        raise RpifError(f"delta_c must be positive, got {delta_c!r}")
    mag = math.sqrt(4.0 * params.hbar / (params.m * params.duration * delta_c ** 2))
    part = mag / math.sqrt(2.0)
    return _ensure_finite(complex(part, -part), "complex_frequency")


def ensure_stable(params: PhysicalParams, delta_c: float) -> complex:
    """Return w after checking the exponential-scale guard."""
    w = complex_frequency(params, delta_c)
    scale = abs(w.imag) * params.duration * math.sqrt(2.0)
    if scale > STABILITY_LIMIT:
        raise StabilityError(delta_c, scale, STABILITY_LIMIT)
    return w


def driving_force(beam: BeamRecord, frame_profile: TimeFunction,
                  params: PhysicalParams, t):
    """F(t) = -m*g*f(t) - i*(4*hbar/(T*delta_c^2))*c(t), scalar or array."""
    coef = 4.0 * params.hbar / (params.duration * beam.resolution ** 2)
    val = (-params.m * params.g * np.asarray(frame_profile(t))
           - 1j * coef * np.asarray(beam.trajectory(t)))
    if np.ndim(t) == 0:
        return _ensure_finite(complex(val), "driving_force")
    return val


def force_callable(beam: BeamRecord, frame_profile: TimeFunction,
                   params: PhysicalParams) -> Callable:
    coef = 4.0 * params.hbar / (params.duration * beam.resolution ** 2)
    m, g = params.m, params.g
    c, f = beam.trajectory, frame_profile
    return lambda t: -m * g * np.asarray(f(t)) - 1j * coef * np.asarray(c(t))


# ---------------------------------------------------------------------------
# Kernels shared by the action and the term-by-term interference module.
#
# With w = q*(1-i) (q = Re w > 0) and E(u) = exp(-2*q*u):
#   sin(w*u) = exp(q*u)/(2i) * hsin(u),  hsin(u) = e^{i q u} - E(u) e^{-i q u}
#   cos(w*u) = exp(q*u)/2    * hcos(u),  hcos(u) = e^{i q u} + E(u) e^{-i q u}
# so ratios of sines carry only decaying exponentials.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ActionKernels:
    """Endpoint blocks and integrand ratios of the oscillator action.

    S = (z1^2+z2^2)*b1 - 2*z1*z2*b2
        + z2*Int[F(t)*single(t-t0)] + z1*Int[F(t)*single(t1-t)]
        - (1/m)*DoubleInt[F(t)*F(s)*triangle(t1-t, s-t0)]
    """

    b1: complex
    b2: complex
    single: Callable        # u >= 0 -> sin(w u)/sin(w T)
    triangle: Callable      # e, p >= 0 -> sin(w e) sin(w p)/(w sin(w T))


def _kernels_closed(w: complex, m: float, T: float) -> ActionKernels:
    q = w.real

    def hsin(u):
        return np.exp(1j * q * u) - np.exp(-2.0 * q * u - 1j * q * u)

    def hcos(u):
        return np.exp(1j * q * u) + np.exp(-2.0 * q * u - 1j * q * u)

    hs_T = hsin(T)
    b1 = 1j * (m * w / 2.0) * hcos(T) / hs_T
    b2 = 1j * m * w * cmath.exp(-q * T) / hs_T

    def single(u):
        return np.exp(q * (u - T)) * hsin(u) / hs_T

    def triangle(e, p):
        return np.exp(q * (e + p - T)) * hsin(e) * hsin(p) / (2j * w * hs_T)

    return ActionKernels(b1, b2, single, triangle)


def _kernels_series(w: complex, m: float, T: float) -> ActionKernels:
    # Taylor in (wT) through fourth order; truncation error O((wT)^6).
    w2 = w * w
    w4 = w2 * w2
    b1 = (m / 2.0) * (1.0 / T - w2 * T / 3.0 - w4 * T ** 3 / 45.0)
    b2 = (m / 2.0) * (1.0 / T + w2 * T / 6.0 + 7.0 * w4 * T ** 3 / 360.0)

    def single(u):
        return (u / T) * (1.0 + w2 * (T * T - u * u) / 6.0
                          + w4 * (u ** 4 / 120.0 + 7.0 * T ** 4 / 360.0
                                  - u * u * T * T / 36.0))

    def triangle(e, p):
        return (e * p / T) * (
            1.0 + w2 * (T * T - e * e - p * p) / 6.0
            + w4 * (e ** 4 / 120.0 + p ** 4 / 120.0 + e * e * p * p / 36.0
                    - T * T * e * e / 36.0 - T * T * p * p / 36.0
                    + 7.0 * T ** 4 / 360.0))

    return ActionKernels(b1, b2, single, triangle)


def action_kernels(w: complex, m: float, T: float) -> ActionKernels:
    if abs(w) * T < SMALL_WT_CROSSOVER:
        return _kernels_series(w, m, T)
    return _kernels_closed(w, m, T)


def _evaluate_action(kernels: ActionKernels, force: Callable, m: float,
                     t0: float, t1: float, z1: float, z2: float) -> complex:
    single = kernels.single
    q2 = quadrature.integrate(lambda t: force(t) * single(t - t0), t0, t1)
    q1 = quadrature.integrate(lambda t: force(t) * single(t1 - t), t0, t1)
    q12 = quadrature.integrate_triangle(
        lambda t, s: force(t) * force(s) * kernels.triangle(t1 - t, s - t0),
        t0, t1)
    return ((z1 * z1 + z2 * z2) * kernels.b1 - 2.0 * z1 * z2 * kernels.b2
            + z2 * q2 + z1 * q1 - q12 / m)


def classical_action(beam: BeamRecord, frame_profile: TimeFunction,
                     params: PhysicalParams, z1: float, z2: float) -> ComplexAction:
    """Classical action of the driven complex oscillator between z1 and z2.

    Uses the closed form for |wT| >= 1e-2 and the series expansion below;
    the two agree to better than 1e-9 relative at the crossover.
    """
    w = ensure_stable(params, beam.resolution)
    kernels = action_kernels(w, params.m, params.duration)
    force = force_callable(beam, frame_profile, params)
    value = _evaluate_action(kernels, force, params.m,
                             params.tau_start, params.tau_end, z1, z2)
    _ensure_finite(value, "classical_action")
    return ComplexAction.from_complex(value)


def small_w_action(beam: BeamRecord, frame_profile: TimeFunction,
                   params: PhysicalParams, z1: float, z2: float) -> ComplexAction:
    """Series form of the action, valid only for |wT| < 1e-2."""
    w = ensure_stable(params, beam.resolution)
    if abs(w) * params.duration >= SMALL_WT_CROSSOVER:
        raise RpifError(
            f"small_w_action called outside its validity region: "
            f"|wT| = {abs(w) * params.duration:.3e} >= {SMALL_WT_CROSSOVER:g}")
    kernels = _kernels_series(w, params.m, params.duration)
    force = force_callable(beam, frame_profile, params)
    value = _evaluate_action(kernels, force, params.m,
                             params.tau_start, params.tau_end, z1, z2)
    _ensure_finite(value, "small_w_action")
    return ComplexAction.from_complex(value)


def _sine_ratio(w: complex, T: float) -> complex:
    """w / sin(wT), series-protected near zero."""
    x = w * T
    if abs(x) < SMALL_WT_CROSSOVER:
        return (1.0 / T) * (1.0 + x * x / 6.0 + 7.0 * x ** 4 / 360.0)
    return w / cmath.sin(x)


def propagator_from_action(beam: BeamRecord, params: PhysicalParams,
                           action: ComplexAction) -> PropagatorValue:
    """Assemble the three propagator factors around a precomputed action."""
    w = ensure_stable(params, beam.resolution)
    msq = mean_square(beam.trajectory, params)
    weight_norm = math.exp(-2.0 * msq / beam.resolution ** 2)
    prefactor = cmath.sqrt(
        params.m * _sine_ratio(w, params.duration) / (2j * math.pi * params.hbar))
    phase_factor = cmath.exp(1j * action.as_complex / params.hbar)
    amplitude = weight_norm * prefactor * phase_factor
    _ensure_finite(amplitude, "restricted_propagator")
    return PropagatorValue(amplitude=amplitude, weight_norm_factor=weight_norm,
                           prefactor=prefactor, phase_factor=phase_factor,
                           action=action)


def restricted_propagator(beam: BeamRecord, frame_profile: TimeFunction,
                          params: PhysicalParams, z1: float, z2: float) -> PropagatorValue:
    """Full restricted propagator U(z2, z1) for one measured beam."""
    action = classical_action(beam, frame_profile, params, z1, z2)
    return propagator_from_action(beam, params, action)
