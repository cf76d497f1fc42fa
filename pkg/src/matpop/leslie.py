"""Age-structured (Leslie) specialization of the population model.

A Leslie model keeps survival fractions on the first subdiagonal of T and
fertilities in the first row of F, so T is nilpotent and everything about
the generic model collapses to closed forms in the parameters: the
fertility divisor for a target growth rate s is the polynomial in 1/s

    q(s) = f_1/s + f_2 t_1 / s^2 + ... + f_n (t_{n-1} ... t_1) / s^n,

the net reproductive rate is q(1), and the growth rate is the unique
positive root of q(r) = 1, which exists because q decreases strictly from
infinity to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ModelError
from .model import PopulationModel, validate_model

# Initial lower end of the root bracket; q blows up as s -> 0+, so a sign
# change against q = 1 exists above some positive seed.
BRACKET_SEED = 1e-8


@dataclass(frozen=True)
class LeslieModel:
    """Survival fractions t_1..t_{n-1} in (0, 1] and fertilities f_1..f_n >= 0, not all zero."""

    survival: tuple[float, ...]
    fertility: tuple[float, ...]

    def __post_init__(self):
        survival = tuple(float(t) for t in self.survival)
        fertility = tuple(float(f) for f in self.fertility)
        object.__setattr__(self, "survival", survival)
        object.__setattr__(self, "fertility", fertility)
        n = len(fertility)
        if n < 1:
            raise ModelError("fertility vector is empty")
        if len(survival) != n - 1:
            raise ModelError(
                f"survival vector must have length {n - 1} for {n} classes, got {len(survival)}"
            )
        if not all(math.isfinite(t) and 0.0 < t <= 1.0 for t in survival):
            raise ModelError("survival fractions must lie in (0, 1]")
        if not all(math.isfinite(f) and f >= 0.0 for f in fertility):
            raise ModelError("fertilities must be finite and nonnegative")
        if not any(f > 0.0 for f in fertility):
            raise ModelError("fertility matrix is zero")

    @property
    def n(self) -> int:
        return len(self.fertility)


def assemble(model: LeslieModel) -> PopulationModel:
    """Generic population model with survival on the subdiagonal and fertility in row 1."""
    n = model.n
    t = np.zeros((n, n))
    for i, rate in enumerate(model.survival):
        t[i + 1, i] = rate
    f = np.zeros((n, n))
    f[0, :] = model.fertility
    return validate_model(t, f)


def _coefficients(model: LeslieModel) -> list[float]:
    """c_k = f_k * t_1 ... t_{k-1}, the weights of the powers of 1/s in q."""
    coeffs = []
    running = 1.0
    for k, f in enumerate(model.fertility):
        coeffs.append(f * running)
        if k < len(model.survival):
            running *= model.survival[k]
    return coeffs


def q_poly_eval(model: LeslieModel, s: float) -> float:
    """Fertility divisor q(s), evaluated by Horner's rule in 1/s.

    Matches the generic divisor rho(F (I - T/s)^-1) / s of the assembled
    model.  Returns inf when the value overflows for very small s.
    """
    s = float(s)
    if not s > 0.0:
        raise ModelError(f"growth rate argument must be positive, got {s:.6g}")
    u = 1.0 / s
    acc = 0.0
    try:
        for c in reversed(_coefficients(model)):
            acc = u * (c + acc)
    except OverflowError:
        return math.inf
    return acc


def leslie_r0(model: LeslieModel) -> float:
    """Net reproductive rate f_1 + f_2 t_1 + ... + f_n t_{n-1} ... t_1, which is q(1)."""
    return q_poly_eval(model, 1.0)


def _q_derivative(model: LeslieModel, s: float) -> float:
    u = 1.0 / s
    total = 0.0
    power = u * u
    for k, c in enumerate(_coefficients(model), start=1):
        total -= k * c * power
        power *= u
    return total


def leslie_growth_rate(model: LeslieModel, *, tol: float = 1e-12) -> float:
    """Unique positive root of q(r) = 1, by bisection plus a Newton polish.

    q is strictly decreasing, so the root is bracketed by expanding
    [BRACKET_SEED, 1] outward until q crosses 1, then bisected to machine
    precision; Newton steps that stay in the bracket sharpen the result
    until |q(r) - 1| <= tol.
    """
    lo = BRACKET_SEED
    while q_poly_eval(model, lo) < 1.0:
        lo *= 0.5
        if lo < 1e-300:
            raise ConvergenceError("could not bracket the growth rate from below")
    hi = max(1.0, 2.0 * lo)
    while q_poly_eval(model, hi) > 1.0:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise ConvergenceError("could not bracket the growth rate from above")

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if q_poly_eval(model, mid) >= 1.0:
            lo = mid
        else:
            hi = mid

    root = 0.5 * (lo + hi)
    for _ in range(8):
        value = q_poly_eval(model, root)
        if abs(value - 1.0) <= tol:
            break
        slope = _q_derivative(model, root)
        if slope == 0.0:
            break
        candidate = root - (value - 1.0) / slope
        if not lo <= candidate <= hi:
            break
        root = candidate
    if abs(q_poly_eval(model, root) - 1.0) > tol:
        raise ConvergenceError(f"growth-rate root refinement stalled at q({root!r}) != 1")
    return root
