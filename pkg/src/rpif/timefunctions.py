"""Evaluable real functions of time.

All scenario inputs that vary with time (the frame profile and the two
measured beam records) are represented by one of the small function
families below.  Instances are immutable, deterministic, and evaluate on
scalars or numpy arrays of any shape.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Union

import numpy as np

from .errors import ValidationError

# absolute slack allowed when checking t against the attached domain,
# scaled by the domain width; quadrature nodes are strictly interior so
# this only absorbs rounding at the endpoints
_DOMAIN_SLACK = 1e-9


def _as_float(value, what: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ValidationError([f"{what}: not a number ({value!r})"]) from None
    if not np.isfinite(out):
        raise ValidationError([f"{what}: must be finite"])
    return out


class TimeFunction:
    """Common behaviour for the concrete function kinds."""

    kind: str = ""
    domain: tuple[float, float] | None

    def _values(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if self.domain is not None:
            lo, hi = self.domain
            slack = _DOMAIN_SLACK * max(hi - lo, 1.0)
            if np.any(arr < lo - slack) or np.any(arr > hi + slack):
                raise ValidationError(
                    [f"time {np.min(arr):g}..{np.max(arr):g} outside domain "
                     f"[{lo:g}, {hi:g}] for {self.kind} function"]
                )
        out = self._values(arr)
        if np.ndim(t) == 0:
            return float(out)
        return out

    def with_domain(self, domain: tuple[float, float]) -> "TimeFunction":
        return replace(self, domain=domain)

    def rescaled(self, origin: float, time_scale: float, value_scale: float,
                 domain: tuple[float, float]) -> "TimeFunction":
        """Return g with g(u) = value_scale * f(origin + time_scale * u)."""
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantFunction(TimeFunction):
    value: float
    domain: tuple[float, float] | None = None
    kind = "constant"

    def _values(self, t):
        return np.full_like(t, self.value, dtype=float)

    def rescaled(self, origin, time_scale, value_scale, domain):
        return ConstantFunction(self.value * value_scale, domain)


@dataclass(frozen=True)
class LinearFunction(TimeFunction):
    slope: float
    intercept: float
    domain: tuple[float, float] | None = None
    kind = "linear"

    def _values(self, t):
        return self.slope * t + self.intercept

    def rescaled(self, origin, time_scale, value_scale, domain):
        return LinearFunction(
            self.slope * time_scale * value_scale,
            (self.slope * origin + self.intercept) * value_scale,
            domain,
        )


@dataclass(frozen=True)
class SinusoidFunction(TimeFunction):
    """amplitude * sin(omega * t + phase)"""

    amplitude: float
    omega: float
    phase: float = 0.0
    domain: tuple[float, float] | None = None
    kind = "sinusoid"

    def _values(self, t):
        return self.amplitude * np.sin(self.omega * t + self.phase)

    def rescaled(self, origin, time_scale, value_scale, domain):
        return SinusoidFunction(
            self.amplitude * value_scale,
            self.omega * time_scale,
            self.omega * origin + self.phase,
            domain,
        )


@dataclass(frozen=True)
class PolynomialFunction(TimeFunction):
    """sum_k coefficients[k] * t**k"""

    coefficients: tuple[float, ...]
    domain: tuple[float, float] | None = None
    kind = "polynomial"

    def _values(self, t):
        return np.polynomial.polynomial.polyval(t, np.asarray(self.coefficients))

    def rescaled(self, origin, time_scale, value_scale, domain):
        base = np.polynomial.Polynomial(np.asarray(self.coefficients))
        composed = base(np.polynomial.Polynomial([origin, time_scale]))
        coefs = tuple(float(c) * value_scale for c in composed.coef)
        return PolynomialFunction(coefs, domain)


@dataclass(frozen=True)
class TabulatedFunction(TimeFunction):
    """Piecewise-linear interpolation of (time, value) samples.

    Sample times must be strictly increasing and must cover the working
    domain; interpolation error is controlled by the supplier's sampling
    density.
    """

    times: tuple[float, ...]
    values: tuple[float, ...]
    domain: tuple[float, float] | None = None
    kind = "tabulated"

    def _values(self, t):
        return np.interp(t, np.asarray(self.times), np.asarray(self.values))

    def rescaled(self, origin, time_scale, value_scale, domain):
        new_times = tuple((tt - origin) / time_scale for tt in self.times)
        new_values = tuple(v * value_scale for v in self.values)
        return TabulatedFunction(new_times, new_values, domain)


AnyTimeFunction = Union[
    ConstantFunction, LinearFunction, SinusoidFunction,
    PolynomialFunction, TabulatedFunction,
]

_KINDS = ("constant", "linear", "sinusoid", "polynomial", "tabulated")


def build_time_function(spec: Mapping, domain: tuple[float, float] | None = None,
                        where: str = "time function") -> TimeFunction:
    """Build a TimeFunction from a tagged mapping like ``{"kind": ..., ...}``.

    When ``domain`` is given it is attached to the result and, for the
    tabulated kind, coverage of the full interval is enforced.
    """
    if not isinstance(spec, Mapping):
        raise ValidationError([f"{where}: expected an object, got {type(spec).__name__}"])
    kind = spec.get("kind")
    if kind not in _KINDS:
        raise ValidationError(
            [f"{where}/kind: unknown kind {kind!r} (expected one of {', '.join(_KINDS)})"]
        )

    if kind == "constant":
        fn: TimeFunction = ConstantFunction(_as_float(spec.get("value", 0.0), f"{where}/value"), domain)
    elif kind == "linear":
        fn = LinearFunction(
            _as_float(spec.get("slope", 0.0), f"{where}/slope"),
            _as_float(spec.get("intercept", 0.0), f"{where}/intercept"),
            domain,
        )
    elif kind == "sinusoid":
        fn = SinusoidFunction(
            _as_float(spec.get("amplitude", 1.0), f"{where}/amplitude"),
            _as_float(spec.get("omega", 1.0), f"{where}/omega"),
            _as_float(spec.get("phase", 0.0), f"{where}/phase"),
            domain,
        )
    elif kind == "polynomial":
        raw = spec.get("coefficients")
        if not isinstance(raw, (list, tuple)) or len(raw) == 0:
            raise ValidationError([f"{where}/coefficients: expected a nonempty array"])
        coefs = tuple(_as_float(c, f"{where}/coefficients/{i}") for i, c in enumerate(raw))
        fn = PolynomialFunction(coefs, domain)
    else:
        times = spec.get("times")
        values = spec.get("values")
        for name, raw in (("times", times), ("values", values)):
            if not isinstance(raw, (list, tuple)) or len(raw) < 2:
                raise ValidationError([f"{where}/{name}: expected an array of at least 2 samples"])
        if len(times) != len(values):
            raise ValidationError([f"{where}/values: length {len(values)} does not match times ({len(times)})"])
        ts = tuple(_as_float(v, f"{where}/times/{i}") for i, v in enumerate(times))
        vs = tuple(_as_float(v, f"{where}/values/{i}") for i, v in enumerate(values))
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValidationError([f"{where}/times: sample times must be strictly increasing"])
        fn = TabulatedFunction(ts, vs, domain)
        if domain is not None:
            check_domain_coverage(fn, domain, where)
    return fn


def check_domain_coverage(fn: TimeFunction, domain: tuple[float, float],
                          where: str = "time function") -> None:
    """Reject tabulated functions whose samples do not span the domain."""
    if isinstance(fn, TabulatedFunction):
        lo, hi = domain
        slack = _DOMAIN_SLACK * max(hi - lo, 1.0)
        if fn.times[0] > lo + slack or fn.times[-1] < hi - slack:
            raise ValidationError(
                [f"{where}/times: samples [{fn.times[0]:g}, {fn.times[-1]:g}] do not "
                 f"cover the interval [{lo:g}, {hi:g}]"]
            )


def evaluate(fn: TimeFunction, t):
    """Evaluate ``fn`` at time(s) ``t``, enforcing the attached domain."""
    return fn(t)
