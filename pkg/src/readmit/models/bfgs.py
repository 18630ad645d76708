"""Full-batch BFGS with backtracking (Armijo) line search.

Keeps the dense inverse-Hessian approximation; when the curvature condition
s'y > 0 fails, the approximation resets to the identity instead of erroring.
Non-finite objective or gradient values raise NumericalError naming the
iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import NumericalError

ARMIJO_C1 = 1e-4
BACKTRACK_FACTOR = 0.5
MAX_BACKTRACKS = 40
CURVATURE_EPS = 1e-12


@dataclass
class BfgsResult:
    x: np.ndarray
    f: float
    grad_norm: float
    n_iters: int
    converged: bool
    stopped_reason: str
    f_history: list[float] = field(default_factory=list)  # accepted objective values


def minimize_bfgs(fun_and_grad: Callable[[np.ndarray], tuple[float, np.ndarray]],
                  x0: np.ndarray, max_iters: int = 200,
                  gtol: float = 1e-6) -> BfgsResult:
    """Minimize f from x0; fun_and_grad returns (f(x), grad f(x))."""
    x = np.asarray(x0, dtype=np.float64).copy()
    n = len(x)
    identity = np.eye(n)
    h_inv = identity.copy()
    f, g = fun_and_grad(x)
    _check_finite(f, g, 0)
    history = [f]
    reason = "max_iters"
    converged = False
    k = 0
    for k in range(1, max_iters + 1):
        gnorm = float(np.linalg.norm(g, ord=np.inf))
        if gnorm <= gtol:
            converged, reason = True, "gtol"
            k -= 1
            break
        direction = -h_inv @ g
        slope = float(g @ direction)
        if slope >= 0:  # not a descent direction: restart from steepest descent
            h_inv = identity.copy()
            direction = -g
            slope = float(g @ direction)
        step = 1.0
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            x_new = x + step * direction
            f_new, g_new = fun_and_grad(x_new)
            _check_finite(f_new, g_new, k)
            if f_new <= f + ARMIJO_C1 * step * slope:
                accepted = True
                break
            step *= BACKTRACK_FACTOR
        if not accepted:
            reason = "line_search_failed"
            break
        s = x_new - x
        y_vec = g_new - g
        x, f, g = x_new, f_new, g_new
        history.append(f)
        sy = float(s @ y_vec)
        if sy <= CURVATURE_EPS * max(1.0, float(np.linalg.norm(s)) * float(np.linalg.norm(y_vec))):
            h_inv = identity.copy()  # curvature condition violated: reset
            continue
        rho = 1.0 / sy
        left = identity - rho * np.outer(s, y_vec)
        h_inv = left @ h_inv @ left.T + rho * np.outer(s, s)
    gnorm = float(np.linalg.norm(g, ord=np.inf))
    if gnorm <= gtol:
        converged, reason = True, "gtol"
    return BfgsResult(x, float(f), gnorm, k, converged, reason, history)


def _check_finite(f: float, g: np.ndarray, iteration: int) -> None:
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise NumericalError(
            f"BFGS: non-finite objective or gradient at iteration {iteration}"
        )
