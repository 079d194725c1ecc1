"""Fluid (deterministic, per-period-rate) revenue maximization.

solve_fluid maximizes p.(alpha_eff + B_eff p) over the price box subject
to A d <= rate, via the kernel's dual active-set QP solver, and certifies
the output with a KKT residual. grid_oracle is an independent brute-force
check used by the test suite; it never touches the solver.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import nnls

from . import _kernels
from ._kernels import solve_qp
from .errors import GridSizeError, NotConcaveError, ValidationError
from .model import TOL_PD

TOL_KKT = 1e-8
TOL_FEAS = 1e-8
# Constraints within this slack count as active when estimating multipliers.
TOL_ACTIVE = 1e-7


@dataclass(frozen=True)
class FluidProblem:
    """One re-solve problem: effective demand curve, consumption, rate, box."""

    alpha_eff: np.ndarray
    B_eff: np.ndarray
    A: np.ndarray
    rate: np.ndarray
    L: float
    U: float

    def __post_init__(self):
        alpha = np.asarray(self.alpha_eff, dtype=float)
        B = np.asarray(self.B_eff, dtype=float)
        A = np.asarray(self.A, dtype=float)
        rate = np.atleast_1d(np.asarray(self.rate, dtype=float))
        n = alpha.shape[0]
        if B.shape != (n, n):
            raise ValidationError(f"B_eff: expected ({n}, {n}), got {B.shape}")
        if A.ndim != 2 or A.shape[1] != n:
            raise ValidationError(f"A: expected (m, {n}), got {A.shape}")
        if rate.shape[0] != A.shape[0]:
            raise ValidationError(
                f"rate: expected length {A.shape[0]}, got {rate.shape[0]}"
            )
        if np.any(rate < 0):
            raise ValidationError("rate: must be >= 0 componentwise")
        if not self.L < self.U:
            raise ValidationError(f"price box: need L < U, got [{self.L}, {self.U}]")
        object.__setattr__(self, "alpha_eff", alpha)
        object.__setattr__(self, "B_eff", B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "rate", rate)
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "U", float(self.U))

    @property
    def n(self) -> int:
        return self.alpha_eff.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class FluidSolution:
    p: Optional[np.ndarray]
    d: Optional[np.ndarray]
    value: float
    active_resources: tuple
    kkt_residual: float
    status: str  # "optimal" | "infeasible"
    resource_duals: Optional[np.ndarray] = None
    iterations: int = 0


def _constraint_rows(problem: FluidProblem):
    """Stacked <=-form constraints on p: [A B_eff; I; -I] p <= rhs."""
    n = problem.n
    eye = np.eye(n)
    C = np.vstack([problem.A @ problem.B_eff, eye, -eye])
    b = np.concatenate(
        [
            problem.rate - problem.A @ problem.alpha_eff,
            np.full(n, problem.U),
            np.full(n, -problem.L),
        ]
    )
    return C, b


def kkt_residual(problem: FluidProblem, p, d=None, duals=None) -> float:
    """Norm of the KKT system violation at a candidate price vector.

    Zero (up to round-off) iff the candidate is the optimum: strict
    concavity makes the KKT conditions sufficient. When multipliers are
    not supplied they are fitted by nonnegative least squares on the
    active constraints, so the measure is independent of the solver.
    """
    p = np.asarray(p, dtype=float)
    if d is None:
        d = problem.alpha_eff + problem.B_eff @ p
    grad = problem.alpha_eff + (problem.B_eff + problem.B_eff.T) @ p
    C, b = _constraint_rows(problem)
    slack = b - C @ p

    if duals is None:
        lam = np.zeros(len(b))
        active = np.flatnonzero(
            slack <= TOL_ACTIVE * (1.0 + np.abs(np.where(np.isfinite(b), b, 0.0)))
        )
        if active.size:
            mu, stat = nnls(C[active].T, grad)
            lam[active] = mu
        else:
            stat = float(np.linalg.norm(grad))
    else:
        lam = np.asarray(duals, dtype=float)
        stat = float(np.linalg.norm(grad - C.T @ lam))

    primal = np.linalg.norm(np.minimum(slack, 0.0))
    pos = lam > 0  # indexed to avoid 0*inf on never-active infinite bounds
    comp = lam[pos] * np.maximum(slack[pos], 0.0)
    dual = np.linalg.norm(np.minimum(lam, 0.0))
    return float(np.sqrt(stat**2 + primal**2 + float(comp @ comp) + dual**2))


def _active_resources(problem: FluidProblem, d: np.ndarray) -> tuple:
    gap = np.abs(problem.A @ d - problem.rate)
    tol = TOL_ACTIVE * (1.0 + np.abs(np.where(np.isfinite(problem.rate), problem.rate, 0.0)))
    hits = np.isfinite(gap) & (gap <= tol)
    return tuple(int(i) for i in np.flatnonzero(hits))


def solve_fluid(problem: FluidProblem) -> FluidSolution:
    """Certified optimum of the fluid problem, or status "infeasible".

    Raises NotConcaveError when B_eff + B_eff^T is not negative definite.
    Deterministic: identical problems give bit-identical solutions.
    """
    sym = problem.B_eff + problem.B_eff.T
    eigmax = float(np.linalg.eigvalsh(sym)[-1])
    if eigmax >= -TOL_PD:
        raise NotConcaveError(
            f"B_eff + B_eff^T has largest eigenvalue {eigmax:.3e}; not concave"
        )

    n = problem.n
    x, lam, status, iters = solve_qp(
        -sym,
        -problem.alpha_eff,
        problem.A @ problem.B_eff,
        problem.rate - problem.A @ problem.alpha_eff,
        np.full(n, problem.L),
        np.full(n, problem.U),
    )
    if status == _kernels.STATUS_INFEASIBLE:
        return FluidSolution(
            p=None,
            d=None,
            value=float("nan"),
            active_resources=(),
            kkt_residual=float("nan"),
            status="infeasible",
            iterations=iters,
        )
    d = problem.alpha_eff + problem.B_eff @ x
    return FluidSolution(
        p=x,
        d=d,
        value=float(x @ d),
        active_resources=_active_resources(problem, d),
        kkt_residual=kkt_residual(problem, x, d=d, duals=lam),
        status="optimal",
        resource_duals=lam[: problem.m].copy(),
        iterations=iters,
    )


def solve_fluid_informed(p0, d0, B_hat, A, rate, box) -> FluidSolution:
    """Re-solve against the prior-anchored curve d = d0 + B_hat (p - p0)."""
    p0 = np.asarray(p0, dtype=float)
    d0 = np.asarray(d0, dtype=float)
    B_hat = np.asarray(B_hat, dtype=float)
    L, U = box
    return solve_fluid(
        FluidProblem(
            alpha_eff=d0 - B_hat @ p0, B_eff=B_hat, A=A, rate=rate, L=L, U=U
        )
    )


def grid_oracle(problem: FluidProblem, resolution: int) -> FluidSolution:
    """Brute-force maximum over a uniform price grid; test oracle only.

    Evaluates the objective at resolution^n grid points, discarding those
    with A d > rate, and returns the best. Exponential in n, hence capped
    at n <= 3.
    """
    n = problem.n
    if n > 3:
        raise GridSizeError(f"grid oracle limited to n <= 3, got n = {n}")
    if resolution < 2:
        raise ValidationError("resolution: must be >= 2")

    axis = np.linspace(problem.L, problem.U, resolution)
    if n == 1:
        inner = np.empty((1, 0))
    else:
        mesh = np.meshgrid(*([axis] * (n - 1)), indexing="ij")
        inner = np.column_stack([g.ravel() for g in mesh])

    best_value = -np.inf
    best_p = None
    feasible = False
    # Chunk over the first coordinate to bound memory at resolution^(n-1) rows.
    for v in axis:
        P = np.column_stack([np.full(inner.shape[0], v), inner])
        D = P @ problem.B_eff.T + problem.alpha_eff
        ok = np.all(D @ problem.A.T <= problem.rate + 1e-9, axis=1)
        if not ok.any():
            continue
        feasible = True
        vals = np.where(ok, np.einsum("ij,ij->i", P, D), -np.inf)
        k = int(np.argmax(vals))
        if vals[k] > best_value:
            best_value = float(vals[k])
            best_p = P[k].copy()

    if not feasible:
        return FluidSolution(
            p=None,
            d=None,
            value=float("nan"),
            active_resources=(),
            kkt_residual=float("nan"),
            status="infeasible",
        )
    best_d = problem.alpha_eff + problem.B_eff @ best_p
    return FluidSolution(
        p=best_p,
        d=best_d,
        value=best_value,
        active_resources=_active_resources(problem, best_d),
        kkt_residual=kkt_residual(problem, best_p, d=best_d),
        status="optimal",
    )
