"""Complex circle manifold primitives and a Riemannian conjugate-gradient minimizer.

Points are length-M complex vectors with unit-modulus entries, stored as plain
numpy arrays. Tangent vectors at phi satisfy Re(t_m * conj(phi_m)) = 0 per
entry. The metric is the real part of the Euclidean Hermitian inner product.

All functions are pure and never mutate their inputs; the solver is
single-threaded per call and safe to run concurrently from many threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, NumericalError, RetractionSingularError

# PR+ safeguard: restart with steepest descent when the conjugate direction
# stops being a sufficient descent direction (same guard scipy's CG uses).
_DESCENT_SIGMA = 0.01
# Consecutive stagnant iterations required before the objective-decrease stop;
# long enough for the gradient norm's endgame plunge to finish first.
_STAGNATION_RUN = 25


def unit_modulus_error(phi: np.ndarray) -> float:
    """Largest deviation of |phi_m| from 1."""
    return float(np.max(np.abs(np.abs(phi) - 1.0)))


def tangency_error(t: np.ndarray, phi: np.ndarray) -> float:
    """Largest |Re(t_m * conj(phi_m))|; zero for a true tangent vector."""
    return float(np.max(np.abs(np.real(t * np.conj(phi)))))


def project_to_tangent(g: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Orthogonally project an ambient vector onto the tangent space at phi.

    t_m = g_m - Re(g_m * conj(phi_m)) * phi_m
    """
    g = np.asarray(g, dtype=np.complex128)
    phi = np.asarray(phi, dtype=np.complex128)
    if g.shape != phi.shape or g.ndim != 1:
        raise DimensionError(f"shape mismatch: g {g.shape} vs phi {phi.shape}")
    return g - np.real(g * np.conj(phi)) * phi


def retract_point(x: np.ndarray) -> np.ndarray:
    """Map an ambient vector back onto the manifold by entry-wise normalization."""
    x = np.asarray(x, dtype=np.complex128)
    mag = np.abs(x)
    if np.any(mag == 0.0):
        raise RetractionSingularError("retraction undefined: zero entry in input")
    return x / mag


def transport(d: np.ndarray, phi_new: np.ndarray) -> np.ndarray:
    """Transport a tangent vector into the tangent space at phi_new.

    On the circle manifold this is the tangent projection at the new point.
    """
    return project_to_tangent(d, phi_new)


def _inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.real(np.vdot(a, b)))


@dataclass(frozen=True)
class RcgConfig:
    """Solver settings.

    grad_tol left at None resolves to 1e-6 * M at solve time (scale-aware
    default). obj_tol is relative to the total objective decrease achieved
    so far.
    """

    max_iters: int = 500
    grad_tol: float | None = None
    obj_tol: float = 1e-10
    armijo_initial_step: float = 1.0
    armijo_contraction: float = 0.5
    armijo_slope: float = 1e-4
    max_line_search_steps: int = 50

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.grad_tol is not None and self.grad_tol < 0:
            raise ValueError("grad_tol must be nonnegative")
        if self.obj_tol < 0:
            raise ValueError("obj_tol must be nonnegative")
        if self.armijo_initial_step <= 0:
            raise ValueError("armijo_initial_step must be positive")
        if not 0.0 < self.armijo_contraction < 1.0:
            raise ValueError("armijo_contraction must lie in (0, 1)")
        if not 0.0 < self.armijo_slope < 1.0:
            raise ValueError("armijo_slope must lie in (0, 1)")
        if self.max_line_search_steps < 1:
            raise ValueError("max_line_search_steps must be positive")


class ConvergedBy(Enum):
    GRAD_NORM = "GradNorm"
    OBJ_DELTA = "ObjDelta"
    MAX_ITERS = "MaxIters"


@dataclass
class RcgTrace:
    """Per-solve record: objective after each accepted step, first entry at phi0."""

    objective_values: np.ndarray
    iterations: int
    converged_by: ConvergedBy
    final_grad_norm: float = field(default=np.nan)


def _armijo_search(
    objective: Callable[[np.ndarray], float],
    phi: np.ndarray,
    f_curr: float,
    g: np.ndarray,
    d: np.ndarray,
    gnorm_sq: float,
    cfg: RcgConfig,
) -> tuple[np.ndarray, float, float] | None:
    """Backtracking line search along d from phi.

    Accepts the first trial alpha with
        f(R(phi + alpha d)) <= f(phi) - armijo_slope * alpha * ||grad||^2.
    The first trial is armijo_initial_step; if it fails, one retrial at the
    minimizer of the parabola fitted through f(phi), the directional slope,
    and the failed trial; afterwards plain geometric backtracking. Returns
    (new point, new value, alpha) or None if every trial fails.
    """

    def evaluate(alpha: float) -> tuple[np.ndarray, float] | None:
        try:
            cand = retract_point(phi + alpha * d)
        except RetractionSingularError:
            return None  # degenerate step; caller shrinks alpha
        fc = float(objective(cand))
        if not np.isfinite(fc):
            raise NumericalError("objective returned a non-finite value")
        return cand, fc

    threshold = cfg.armijo_slope * gnorm_sq
    alpha = cfg.armijo_initial_step
    trials = 0

    res = evaluate(alpha)
    trials += 1
    if res is not None:
        cand, fc = res
        if fc <= f_curr - alpha * threshold:
            return cand, fc, alpha
        slope0 = _inner(g, d)
        if slope0 < 0.0:
            denom = fc - f_curr - slope0 * alpha
            if denom > 0.0:
                a_fit = -slope0 * alpha * alpha / (2.0 * denom)
                if 0.0 < a_fit < alpha:
                    alpha = a_fit
                    res = evaluate(alpha)
                    trials += 1
                    if res is not None:
                        cand, fc = res
                        if fc <= f_curr - alpha * threshold:
                            return cand, fc, alpha

    while trials < cfg.max_line_search_steps:
        alpha *= cfg.armijo_contraction
        res = evaluate(alpha)
        trials += 1
        if res is None:
            continue
        cand, fc = res
        if fc <= f_curr - alpha * threshold:
            return cand, fc, alpha
    return None


def rcg_minimize(
    objective: Callable[[np.ndarray], float],
    euclid_grad: Callable[[np.ndarray], np.ndarray],
    phi0: Sequence[complex] | np.ndarray,
    cfg: RcgConfig | None = None,
) -> tuple[np.ndarray, RcgTrace]:
    """Minimize a smooth objective over the complex circle manifold.

    Conjugate-gradient iteration with Polak-Ribiere+ direction updates,
    vector transport of the previous direction, Armijo backtracking and
    entry-wise normalization as the retraction. Stops when the Riemannian
    gradient norm falls below grad_tol, when the objective decrease
    stagnates relative to the total decrease achieved, or at max_iters.
    A failed line search triggers one steepest-descent restart; a second
    failure stops the solve.
    """
    if cfg is None:
        cfg = RcgConfig()
    phi = np.asarray(phi0, dtype=np.complex128).copy()
    if phi.ndim != 1 or phi.size == 0:
        raise DimensionError("phi0 must be a nonempty 1-D complex vector")
    if unit_modulus_error(phi) > 1e-9:
        raise ValueError("phi0 must have unit-modulus entries")
    M = phi.size
    grad_tol = cfg.grad_tol if cfg.grad_tol is not None else 1e-6 * M

    def rgrad(point: np.ndarray) -> np.ndarray:
        g = project_to_tangent(np.asarray(euclid_grad(point), dtype=np.complex128), point)
        if not np.all(np.isfinite(g)):
            raise NumericalError("gradient returned non-finite values")
        return g

    f = float(objective(phi))
    if not np.isfinite(f):
        raise NumericalError("objective returned a non-finite value")
    f_start = f
    g = rgrad(phi)
    d = -g
    values = [f]
    converged = ConvergedBy.MAX_ITERS
    iterations = 0
    stagnant = 0

    for t in range(cfg.max_iters):
        gnorm_sq = _inner(g, g)
        if np.sqrt(gnorm_sq) < grad_tol:
            converged = ConvergedBy.GRAD_NORM
            break

        accepted = _armijo_search(objective, phi, f, g, d, gnorm_sq, cfg)
        if accepted is None:
            d = -g  # steepest-descent restart, once
            accepted = _armijo_search(objective, phi, f, g, d, gnorm_sq, cfg)
            if accepted is None:
                converged = ConvergedBy.OBJ_DELTA
                break
        phi_new, f_new, _alpha = accepted

        g_new = rgrad(phi_new)
        beta = max(0.0, _inner(g_new, g_new - transport(g, phi_new)) / gnorm_sq)
        d = -g_new + beta * transport(d, phi_new)
        if _inner(d, g_new) > -_DESCENT_SIGMA * _inner(g_new, g_new):
            d = -g_new

        decrease = f - f_new
        phi, f, g = phi_new, f_new, g_new
        values.append(f)
        iterations = t + 1

        if decrease < cfg.obj_tol * (f_start - f):
            stagnant += 1
            if stagnant >= _STAGNATION_RUN:
                converged = ConvergedBy.OBJ_DELTA
                break
        else:
            stagnant = 0

    trace = RcgTrace(
        objective_values=np.asarray(values),
        iterations=iterations,
        converged_by=converged,
        final_grad_norm=float(np.sqrt(_inner(g, g))),
    )
    return phi, trace
