"""Population-model layer for the discrete dynamics x_k = (T + F) x_{k-1}.

A model is a validated pair of a transition matrix T (per-step survival
fractions, spectral radius below 1) and a fertility matrix F (newborns per
individual per step, nonzero).  From these the toolkit derives the
projection matrix P = T + F, the next generation matrix Q = F (I - T)^-1,
the growth rate r = rho(P), the net reproductive rate R0 = rho(Q), and a
growth classification:

  Stationary   r = R0 = 1
  Growing      1 < r <= R0    (strictly, 1 < r < R0, when P is irreducible)
  Declining    R0 <= r < 1    (strictly, 0 < R0 < r < 1, when P is irreducible)

Scaling only the fertility matrix moves the growth rate without touching
survival: dividing F by R0 makes the model stationary, and dividing by
q(s) = rho(F (I - T/s)^-1) / s makes the growth rate exactly s for any
target s above rho(T).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import ConsistencyError, ModelError, MortalityError, ScalingError, StructureError
from .matrices import as_matrix
from .spectral import SPECTRAL_TOL, resolvent_inverse, spectral_radius
from .structure import QPatternReport, StructureReport, analyze_structure, next_gen_pattern

# Classification band around 1 for the growth trichotomy, and the residual
# allowed when verifying that a scaled model hits its prescribed growth
# rate.  Both sit well above the spectral iteration tolerance to absorb
# accumulated error.
CLASSIFY_TOL = 1e-9
STABILITY_TOL = 1e-8
# Doublings tried when searching for a scaling certificate of R0 > 0.
CERTIFICATE_DOUBLINGS = 33


class Trichotomy(Enum):
    """Growth classification of a model from its (r, R0) pair."""

    STATIONARY = "Stationary"
    GROWING = "Growing"
    DECLINING = "Declining"


@dataclass(frozen=True, eq=False)
class PopulationModel:
    """Validated (transition, fertility) pair with cached derived matrices."""

    transition: np.ndarray
    fertility: np.ndarray
    warnings: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.transition.shape[0]

    @cached_property
    def projection(self) -> np.ndarray:
        """One-step update matrix P = T + F."""
        p = self.transition + self.fertility
        p.setflags(write=False)
        return p

    @cached_property
    def next_generation(self) -> np.ndarray:
        """Next generation matrix Q = F (I - T)^-1.

        Entry (i, j) counts the class-i newborns descending from one
        class-j individual over its whole remaining lifetime.
        """
        q = self.fertility @ resolvent_inverse(self.transition)
        q.setflags(write=False)
        return q


@dataclass(frozen=True)
class AnalysisReport:
    """Growth rate, net reproductive rate, classification, and pattern structure.

    ``strict`` is set when the projection matrix is irreducible, in which
    case the Growing/Declining inequalities hold strictly, ``q_pattern``
    describes the block form of the next generation matrix, and
    ``stability_residual`` records |rho(T + F/R0) - 1| from the scaling
    cross-check.
    """

    growth_rate: float
    net_reproductive_rate: float
    trichotomy: Trichotomy
    strict: bool
    structure: StructureReport
    q_pattern: QPatternReport | None
    stability_residual: float | None


@dataclass(frozen=True, eq=False)
class TargetScaleResult:
    """Fertility divisor q, the scaled model, and its net reproductive rate R0 / q."""

    q: float
    scaled: PopulationModel
    r0_scaled: float


def validate_model(transition, fertility, *, tol_spec: float = SPECTRAL_TOL) -> PopulationModel:
    """Validate a (T, F) pair into a PopulationModel.

    Rejects dimension mismatches, negative or non-finite entries, a zero
    fertility matrix, and a transition matrix with spectral radius at or
    above 1.  Column sums of T above 1 are biologically suspect but only
    produce warnings, since no conclusion depends on them.
    """
    t = as_matrix(transition, name="transition matrix")
    f = as_matrix(fertility, name="fertility matrix")
    if t.shape != f.shape:
        raise ModelError(
            f"transition and fertility matrices differ in order: {t.shape[0]} vs {f.shape[0]}"
        )
    if f.max() == 0.0:
        raise ModelError("fertility matrix is zero")
    rho_t = spectral_radius(t, tol=tol_spec)
    if rho_t >= 1.0 - tol_spec:
        raise MortalityError(
            f"rho(T) >= 1: transition matrix spectral radius is {rho_t:.12g}, the population never dies out"
        )
    warnings = tuple(
        f"column {j + 1} of the transition matrix sums to {s:.6g} > 1"
        for j, s in enumerate(t.sum(axis=0))
        if s > 1.0
    )
    return PopulationModel(transition=t, fertility=f, warnings=warnings)


def next_generation_matrix(model: PopulationModel) -> np.ndarray:
    """Next generation matrix Q = F (I - T)^-1 of a validated model."""
    return model.next_generation


def _classify(r: float, r0: float, tol_class: float) -> Trichotomy:
    if abs(r - 1.0) <= tol_class and abs(r0 - 1.0) <= tol_class:
        return Trichotomy.STATIONARY
    if r > 1.0 and r <= r0 + tol_class:
        return Trichotomy.GROWING
    if r < 1.0 and r0 <= r + tol_class:
        return Trichotomy.DECLINING
    raise ConsistencyError(
        f"growth rate {r!r} and net reproductive rate {r0!r} violate the growth trichotomy"
    )


def analyze(
    model: PopulationModel,
    *,
    tol_spec: float = SPECTRAL_TOL,
    tol_class: float = CLASSIFY_TOL,
    tol_stab: float = STABILITY_TOL,
) -> AnalysisReport:
    """Full analysis: r, R0, trichotomy class, and pattern structure.

    For an irreducible projection matrix the report additionally carries
    the next-generation block pattern and the residual of the scaling
    cross-check rho(T + F/R0) = 1; a residual beyond tol_stab raises
    ConsistencyError.
    """
    r = spectral_radius(model.projection, tol=tol_spec)
    q = model.next_generation
    r0 = spectral_radius(q, tol=tol_spec)
    structure = analyze_structure(model.projection)
    strict = structure.irreducible

    if strict and r0 <= tol_class:
        raise ConsistencyError(
            "irreducible model computed a zero net reproductive rate, which is impossible"
        )
    trichotomy = _classify(r, r0, tol_class)

    stability_residual = None
    q_pattern = None
    if strict:
        scaled_rho = spectral_radius(model.transition + model.fertility / r0, tol=tol_spec)
        stability_residual = abs(scaled_rho - 1.0)
        if stability_residual > tol_stab:
            raise ConsistencyError(
                f"rho(T + F/R0) = {scaled_rho!r} differs from 1 beyond tolerance {tol_stab}"
            )
        q_pattern = next_gen_pattern(model.fertility, q)

    return AnalysisReport(
        growth_rate=r,
        net_reproductive_rate=r0,
        trichotomy=trichotomy,
        strict=strict,
        structure=structure,
        q_pattern=q_pattern,
        stability_residual=stability_residual,
    )


def stabilizing_scale(
    model: PopulationModel,
    *,
    tol_spec: float = SPECTRAL_TOL,
    tol_class: float = CLASSIFY_TOL,
    tol_stab: float = STABILITY_TOL,
) -> PopulationModel:
    """Model with fertility divided by R0, which has growth rate exactly 1."""
    r0 = spectral_radius(model.next_generation, tol=tol_spec)
    if r0 <= tol_class:
        raise ScalingError(
            "net reproductive rate is zero; no fertility scaling yields a stationary model"
        )
    scaled = validate_model(model.transition, model.fertility / r0, tol_spec=tol_spec)
    achieved = spectral_radius(scaled.projection, tol=tol_spec)
    if abs(achieved - 1.0) > tol_stab:
        raise ConsistencyError(
            f"growth rate of the fertility-rescaled model is {achieved!r}, expected 1"
        )
    return scaled


def target_growth_scale(
    model: PopulationModel,
    s: float,
    *,
    tol_spec: float = SPECTRAL_TOL,
    tol_class: float = CLASSIFY_TOL,
    tol_stab: float = STABILITY_TOL,
) -> TargetScaleResult:
    """Scale fertility so the model's growth rate becomes exactly s.

    Requires an irreducible projection matrix and a target s above
    rho(T).  The divisor is q(s) = rho(F (I - T/s)^-1) / s, a strictly
    decreasing function of s, and the scaled model's net reproductive
    rate is R0 / q(s).
    """
    s = float(s)
    if not analyze_structure(model.projection).irreducible:
        raise StructureError(
            "projection matrix is reducible; target-growth scaling needs an irreducible model"
        )
    rho_t = spectral_radius(model.transition, tol=tol_spec)
    if not np.isfinite(s) or s <= rho_t + tol_spec:
        raise ScalingError(f"target growth rate {s:.6g} must exceed rho(T) = {rho_t:.6g}")

    q_of_s = spectral_radius(
        model.fertility @ resolvent_inverse(model.transition / s, tol=tol_spec), tol=tol_spec
    ) / s
    if q_of_s <= 0.0:
        raise ConsistencyError("fertility divisor came out nonpositive for an irreducible model")

    scaled = validate_model(model.transition, model.fertility / q_of_s, tol_spec=tol_spec)
    achieved = spectral_radius(scaled.projection, tol=tol_spec)
    if abs(achieved - s) > tol_stab:
        raise ConsistencyError(
            f"growth rate of the fertility-rescaled model is {achieved!r}, expected {s!r}"
        )
    r0 = spectral_radius(model.next_generation, tol=tol_spec)
    r0_scaled = r0 / q_of_s
    # The scaled model's (s, R0(s)) pair must itself satisfy the trichotomy.
    _classify(s, r0_scaled, tol_class)
    return TargetScaleResult(q=q_of_s, scaled=scaled, r0_scaled=r0_scaled)


def r0_positive(
    model: PopulationModel,
    *,
    tol_spec: float = SPECTRAL_TOL,
    tol_class: float = CLASSIFY_TOL,
) -> bool:
    """Whether the net reproductive rate is positive.

    Decided structurally for an irreducible projection matrix (the
    leading block of the next generation pattern is then never empty) and
    by a scaling certificate otherwise: R0 > 0 exactly when rho(T + a F)
    exceeds rho(T) for some a > 0, searched over doubling values of a.
    The result is cross-checked against rho(Q) directly; disagreement
    raises ConsistencyError.
    """
    direct = spectral_radius(model.next_generation, tol=tol_spec) > tol_class
    if analyze_structure(model.projection).irreducible:
        found = len(next_gen_pattern(model.fertility, model.next_generation).q11_indices) > 0
    else:
        rho_t = spectral_radius(model.transition, tol=tol_spec)
        found = False
        a = 1.0
        for _ in range(CERTIFICATE_DOUBLINGS):
            if spectral_radius(model.transition + a * model.fertility, tol=tol_spec) > rho_t + tol_spec:
                found = True
                break
            a *= 2.0
    if found != direct:
        raise ConsistencyError(
            "scaling certificate for a positive net reproductive rate disagrees with rho(Q)"
        )
    return found


def wielandt_bracket(a, x) -> tuple[float, float]:
    """Collatz-Wielandt bracket: min and max of (A x)_i / x_i for positive x.

    For an irreducible matrix A the spectral radius always lies between
    the two ratios, with equality exactly when x is the Perron vector.
    """
    a = as_matrix(a)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != a.shape[0]:
        raise ModelError(f"test vector must have length {a.shape[0]}, got shape {x.shape}")
    if not np.isfinite(x).all() or (x <= 0).any():
        raise ModelError("test vector must be strictly positive")
    if not analyze_structure(a).irreducible:
        raise StructureError("ratio bracketing of the spectral radius needs an irreducible matrix")
    ratios = (a @ x) / x
    return float(ratios.min()), float(ratios.max())
