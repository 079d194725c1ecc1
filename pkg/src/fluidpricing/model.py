"""Ground-truth market model: linear demand, sub-Gaussian noise, instances.

The demand curve is f(p) = alpha + B p with B + B^T negative definite, so
revenue p.f(p) is strictly concave over the price box. Mean demand is not
clipped at zero; callers are responsible for staying in the economically
sensible region.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotNegativeDefiniteError, SingularMatrixError, ValidationError

# Definiteness margin for B + B^T, well below the eigengap of any
# reasonably scaled instance.
TOL_PD = 1e-9


def _as_vector(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValidationError(f"{name}: expected a 1-d vector, got shape {v.shape}")
    return v


def _as_matrix(x, name: str) -> np.ndarray:
    m = np.asarray(x, dtype=float)
    if m.ndim != 2:
        raise ValidationError(f"{name}: expected a 2-d matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class DemandModel:
    """Linear demand parameters plus the noise scale sigma.

    noise selects the sampling family for the demand shocks; every entry of
    NOISE_SAMPLERS is zero-mean with standard deviation sigma.
    """

    alpha: np.ndarray
    B: np.ndarray
    sigma: float
    noise: str = "gaussian"

    def __post_init__(self):
        alpha = _as_vector(self.alpha, "alpha")
        B = _as_matrix(self.B, "B")
        n = alpha.shape[0]
        if B.shape != (n, n):
            raise ValidationError(f"B: expected shape ({n}, {n}), got {B.shape}")
        if self.sigma < 0:
            raise ValidationError(f"sigma: must be >= 0, got {self.sigma}")
        if self.noise not in NOISE_SAMPLERS:
            raise ValidationError(
                f"noise: unknown family {self.noise!r}, expected one of "
                f"{sorted(NOISE_SAMPLERS)}"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def n(self) -> int:
        return self.alpha.shape[0]


@dataclass(frozen=True)
class InformedPrior:
    """Pre-given price-demand pair with a known error bound eps0 on
    ||d0 - f(p0)||_2."""

    p0: np.ndarray
    d0: np.ndarray
    eps0: float

    def __post_init__(self):
        p0 = _as_vector(self.p0, "prior.p0")
        d0 = _as_vector(self.d0, "prior.d0")
        if p0.shape != d0.shape:
            raise ValidationError(
                f"prior: p0 and d0 must match, got {p0.shape} vs {d0.shape}"
            )
        if self.eps0 < 0:
            raise ValidationError(f"prior.eps0: must be >= 0, got {self.eps0}")
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "d0", d0)
        object.__setattr__(self, "eps0", float(self.eps0))


@dataclass(frozen=True)
class Instance:
    """A full pricing problem: market model, resources, horizon, price box."""

    model: DemandModel
    A: np.ndarray
    C: np.ndarray
    T: int
    L: float
    U: float
    prior: Optional[InformedPrior] = None

    def __post_init__(self):
        A = _as_matrix(self.A, "A")
        C = _as_vector(self.C, "C")
        n = self.model.n
        if A.shape[1] != n:
            raise ValidationError(f"A: expected {n} columns, got {A.shape[1]}")
        if C.shape[0] != A.shape[0]:
            raise ValidationError(
                f"C: expected length {A.shape[0]}, got {C.shape[0]}"
            )
        if np.any(A < 0):
            raise ValidationError("A: consumption entries must be >= 0")
        if np.any(C < 0):
            raise ValidationError("C: capacities must be >= 0")
        if self.T < 1:
            raise ValidationError(f"T: must be >= 1, got {self.T}")
        if not self.L < self.U:
            raise ValidationError(f"price box: need L < U, got [{self.L}, {self.U}]")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "T", int(self.T))
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "U", float(self.U))

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def m(self) -> int:
        return self.A.shape[0]


def validate_model(model: DemandModel) -> None:
    """Check invertibility of B and negative definiteness of B + B^T.

    Raises SingularMatrixError or NotNegativeDefiniteError naming the
    failed condition.
    """
    sym = model.B + model.B.T
    eigmax = float(np.linalg.eigvalsh(sym)[-1])
    if eigmax >= -TOL_PD:
        raise NotNegativeDefiniteError(
            f"B + B^T has largest eigenvalue {eigmax:.3e}; "
            f"needs to be < {-TOL_PD:.0e}"
        )
    # Negative definiteness of the symmetric part implies invertibility,
    # but a rank check catches pathological conditioning early.
    if np.linalg.matrix_rank(model.B) < model.n:
        raise SingularMatrixError("B is singular")


def mean_demand(model: DemandModel, p: np.ndarray) -> np.ndarray:
    """Expected demand alpha + B p at price p (no clipping)."""
    return model.alpha + model.B @ np.asarray(p, dtype=float)


def invert_demand(model: DemandModel, d: np.ndarray) -> np.ndarray:
    """Price p with mean_demand(model, p) = d, i.e. B^-1 (d - alpha)."""
    try:
        return np.linalg.solve(model.B, np.asarray(d, dtype=float) - model.alpha)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("B is singular") from exc


def unconstrained_optimum(model: DemandModel):
    """Revenue-maximizing point ignoring resources: (p_star, d_star, r_unc).

    p_star = -(B + B^T)^-1 alpha is the unique stationary point of the
    strictly concave revenue p.(alpha + B p).
    """
    validate_model(model)
    sym = model.B + model.B.T
    p_star = np.linalg.solve(sym, -model.alpha)
    d_star = mean_demand(model, p_star)
    return p_star, d_star, float(p_star @ d_star)


def _gaussian(rng: np.random.Generator, sigma: float, n: int) -> np.ndarray:
    return rng.normal(0.0, sigma, n)


def _uniform(rng: np.random.Generator, sigma: float, n: int) -> np.ndarray:
    half = np.sqrt(3.0) * sigma  # variance sigma^2
    return rng.uniform(-half, half, n)


def _rademacher(rng: np.random.Generator, sigma: float, n: int) -> np.ndarray:
    return sigma * (2.0 * (rng.random(n) < 0.5) - 1.0)


NOISE_SAMPLERS = {
    "gaussian": _gaussian,
    "uniform": _uniform,
    "rademacher": _rademacher,
}


def sample_noise(rng: np.random.Generator, model: DemandModel) -> np.ndarray:
    """One demand-shock vector; deterministic given the stream state."""
    if model.sigma == 0.0:
        return np.zeros(model.n)
    return NOISE_SAMPLERS[model.noise](rng, model.sigma, model.n)
