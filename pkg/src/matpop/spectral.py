"""Perron root machinery for dense nonnegative matrices.

The spectral radius of a nonnegative matrix is the maximum of its strong
components' Perron roots, so the computation condenses the positivity
pattern first and runs power iteration on each nontrivial diagonal block.
Iterating on A + I rather than A makes the block matrix primitive whenever
A is irreducible, which guarantees geometric convergence from a positive
start vector.

Convergence is certified, not guessed: for a positive iterate x the
componentwise ratios of (A + I) x against x bracket the Perron root of
A + I at every step (Collatz-Wielandt), and the iteration stops only once
the bracket width falls below tolerance.  The Rayleigh quotient reported
as the root is a convex combination of those ratios, so it always lies
inside the final bracket.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, MortalityError, NumericalError, StructureError
from .matrices import as_matrix
from .structure import analyze_structure

# Stop once the ratio bracket is this tight, relative to max(1, root).
SPECTRAL_TOL = 1e-12
MAX_ITERATIONS = 200_000
# Entries of a computed resolvent inverse may round slightly negative; any
# dip beyond this is an error, anything shallower is clamped to zero.
CLAMP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralPair:
    """Perron root with right and left Perron vectors.

    The right vector is normalized to entry-sum 1 and the left vector is
    scaled so that left @ right == 1.  For an irreducible matrix the root
    is positive and both vectors are strictly positive.
    """

    rho: float
    right: np.ndarray
    left: np.ndarray


def _power_pass(block: np.ndarray, tol: float, max_iterations: int):
    """One certified power iteration on block + I from a positive start.

    Returns (root, vector, lo, hi) where [lo, hi] is the final certified
    bracket around the root and the vector sums to 1.
    """
    n = block.shape[0]
    shifted = block + np.eye(n)
    x = np.full(n, 1.0 / n)
    lo = hi = 0.0
    for _ in range(max_iterations):
        y = shifted @ x
        ratios = y / x
        lo = float(ratios.min())
        hi = float(ratios.max())
        if hi - lo <= tol * max(1.0, hi):
            root = float(x @ y) / float(x @ x) - 1.0
            x = y / y.sum()
            return max(root, 0.0), x, lo - 1.0, hi - 1.0
        x = y / y.sum()
    raise ConvergenceError(
        f"power iteration did not converge within {max_iterations} iterations; "
        f"spectral radius is in [{lo - 1.0:.17g}, {hi - 1.0:.17g}]",
        bracket=(lo - 1.0, hi - 1.0),
    )


def _power_root(block: np.ndarray, tol: float, max_iterations: int):
    """Perron root and sum-1 Perron vector of an irreducible block.

    The + I shift makes a single pass both slow and only absolutely
    accurate when the root is small (the iteration contracts at rate
    about 1 - 2 rho).  Since rho(A) = c * rho(A / c) for any c > 0, a
    small converged root, or even the midpoint of an unconverged bracket
    that proves the root small, is used to rescale the block so the next
    pass resolves a root near 1, where the bracket test is relative and
    the shift provides an O(1) gap.
    """
    scale = 1.0
    probe_budget = min(max_iterations, 5000)
    for _ in range(3):
        try:
            root, vector, lo, hi = _power_pass(block, tol, probe_budget)
        except ConvergenceError as err:
            lo, hi = err.bracket
            if 0.0 < lo and hi < 0.5:
                midpoint = 0.5 * (lo + hi)
                scale *= midpoint
                block = block / midpoint
                continue
            break  # not a small root, just slow: spend the full budget below
        if 0.0 < root < 0.5:
            scale *= root
            block = block / root
            continue
        return scale * root, vector, scale * lo, scale * hi
    try:
        root, vector, lo, hi = _power_pass(block, tol, max_iterations)
    except ConvergenceError as err:
        lo, hi = err.bracket
        raise ConvergenceError(
            f"power iteration did not converge within {max_iterations} iterations; "
            f"spectral radius is in [{scale * lo:.17g}, {scale * hi:.17g}]",
            bracket=(scale * lo, scale * hi),
        ) from None
    return scale * root, vector, scale * lo, scale * hi


def spectral_radius(m, *, tol: float = SPECTRAL_TOL, max_iterations: int = MAX_ITERATIONS) -> float:
    """Spectral radius of a square nonnegative matrix.

    Works for reducible matrices: the pattern is condensed into strongly
    connected components and the largest per-component Perron root wins.
    Trivial 1x1 components contribute their own diagonal entry.
    """
    m = as_matrix(m)
    rho = 0.0
    for component in analyze_structure(m).components:
        if len(component) == 1:
            i = component[0]
            rho = max(rho, float(m[i, i]))
        else:
            block = m[np.ix_(component, component)]
            root, _, _, _ = _power_root(block, tol, max_iterations)
            rho = max(rho, root)
    return rho


def perron_pair(m, *, tol: float = SPECTRAL_TOL, max_iterations: int = MAX_ITERATIONS) -> SpectralPair:
    """Perron root and positive left/right Perron vectors of an irreducible matrix.

    Raises StructureError for a reducible matrix: its Perron vectors need
    not be unique or positive, so callers should analyze each strong
    component separately.
    """
    m = as_matrix(m)
    if not analyze_structure(m).irreducible:
        raise StructureError("matrix is reducible; analyze each strongly connected component separately")
    n = m.shape[0]
    if n == 1:
        one = np.ones(1)
        one.setflags(write=False)
        return SpectralPair(rho=float(m[0, 0]), right=one, left=one)

    # Iterate both sides a notch tighter than requested so the combined
    # residuals of the pair stay within tol.
    inner_tol = tol / 4.0
    rho, right, _, _ = _power_root(m, inner_tol, max_iterations)
    _, left, _, _ = _power_root(m.T, inner_tol, max_iterations)
    left = left / float(left @ right)
    right.setflags(write=False)
    left.setflags(write=False)
    return SpectralPair(rho=rho, right=right, left=left)


def resolvent_inverse(transition, *, tol: float = SPECTRAL_TOL) -> np.ndarray:
    """(I - T)^-1 for a transition matrix with spectral radius below 1.

    Solved directly by LU factorization with partial pivoting of I - T.
    The true inverse equals the series I + T + T^2 + ... and is therefore
    nonnegative; tiny negative round-off is clamped to zero and anything
    below -CLAMP_TOL raises NumericalError.
    """
    t = as_matrix(transition, name="transition matrix")
    rho = spectral_radius(t, tol=tol)
    if rho >= 1.0 - tol:
        raise MortalityError(
            f"rho(T) >= 1: transition matrix spectral radius is {rho:.12g}, the population never dies out"
        )
    n = t.shape[0]
    try:
        inverse = np.linalg.solve(np.eye(n) - t, np.eye(n))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"elimination on I - T failed: {exc}") from None
    low = float(inverse.min())
    if low < -CLAMP_TOL:
        raise NumericalError(f"resolvent inverse has entry {low:.6g} below the clamping tolerance")
    if low < 0.0:
        inverse = np.maximum(inverse, 0.0)
    inverse.setflags(write=False)
    return inverse
