"""Dense BFGS minimizer with Armijo backtracking.

Small unconstrained smooth problems only (a handful of parameters).  The
inverse-Hessian approximation starts at the identity, the line search
halves the step until the Armijo sufficient-decrease condition holds, and
non-finite objective values are treated as infeasible points that the line
search backs away from.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["OptimResult", "minimize_bfgs"]


@dataclass
class OptimResult:
    x: np.ndarray
    fun: float
    grad: np.ndarray
    iterations: int
    converged: bool
    gradient_norm: float
    history: list[float] = field(default_factory=list)
    message: str = ""


def minimize_bfgs(fun, grad, x0, *, grad_tol: float = 1e-8,
                  step_tol: float = 1e-10, max_iter: int = 500,
                  armijo_c1: float = 1e-4, backtrack: float = 0.5,
                  max_backtracks: int = 60) -> OptimResult:
    """Minimize ``fun`` from ``x0``; ``grad`` is its analytic gradient.

    Stops when the gradient max-norm falls below ``grad_tol`` or the
    relative parameter change falls below ``step_tol``.  ``fun`` may return
    +inf (or nan) for infeasible points; ``grad`` is only evaluated at
    accepted, finite-objective points.  ``history`` records the objective
    at every accepted iterate, which is nonincreasing by construction.
    """
    x = np.asarray(x0, dtype=np.float64).copy()
    n = x.size
    f = float(fun(x))
    if not np.isfinite(f):
        raise ValueError("objective is not finite at the starting point")
    g = np.asarray(grad(x), dtype=np.float64)
    identity = np.eye(n)
    h_inv = identity.copy()
    history = [f]

    iterations = 0
    message = "gradient tolerance reached"
    converged = True
    while True:
        gnorm = float(np.max(np.abs(g)))
        if gnorm <= grad_tol:
            break
        if iterations >= max_iter:
            converged = False
            message = f"iteration cap {max_iter} reached"
            break

        direction = -h_inv @ g
        slope = float(g @ direction)
        if slope >= 0.0:
            # Numerically lost curvature; restart from steepest descent.
            h_inv = identity.copy()
            direction = -g
            slope = float(g @ direction)

        step = 1.0
        f_new = np.inf
        for _ in range(max_backtracks):
            candidate = x + step * direction
            f_new = float(fun(candidate))
            if np.isfinite(f_new) and f_new <= f + armijo_c1 * step * slope:
                break
            step *= backtrack
        else:
            converged = gnorm <= 1e-6
            message = "line search failed to find an acceptable step"
            break

        x_new = x + step * direction
        g_new = np.asarray(grad(x_new), dtype=np.float64)
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            v = identity - rho * np.outer(s, y)
            h_inv = v @ h_inv @ v.T + rho * np.outer(s, s)

        rel_step = float(np.max(np.abs(s))) / max(1.0, float(np.max(np.abs(x_new))))
        x, f, g = x_new, f_new, g_new
        history.append(f)
        iterations += 1
        if rel_step <= step_tol:
            gnorm = float(np.max(np.abs(g)))
            converged = gnorm <= max(grad_tol, 1e-6)
            message = "parameter change below tolerance"
            break

    return OptimResult(x=x, fun=f, grad=g, iterations=iterations,
                       converged=converged,
                       gradient_norm=float(np.max(np.abs(g))),
                       history=history, message=message)
