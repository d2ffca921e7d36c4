"""Shared numerical kernels and domain parameter types.

Everything downstream (closed-form approximations, the iterative
integral-equation solver, the PSOR benchmark, price-gap integrals) is built
on the primitives in this module: the normal CDF, composite Newton-Cotes
quadrature, a truncated semi-infinite rule with a tail check, bracketed
bisection, and piecewise-linear interpolation on a time-to-maturity grid.
All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "DomainError",
    "NumericalError",
    "QuadratureNodeError",
    "TailTooHeavyError",
    "BracketError",
    "MaxIterationsError",
    "MarketParams",
    "TauGrid",
    "BoundaryCurve",
    "QuadratureConfig",
    "norm_cdf",
    "integrate_newton_cotes",
    "integrate_semi_infinite",
    "find_root_bracketed",
    "interp_linear",
]


class DomainError(ValueError):
    """Input lies outside the domain where a formula or curve is defined."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (bad node, heavy tail, lost bracket...)."""


class QuadratureNodeError(NumericalError):
    """The integrand returned a non-finite value at a quadrature node."""

    def __init__(self, abscissa: float, value: float):
        self.abscissa = abscissa
        self.value = value
        super().__init__(f"non-finite integrand value {value!r} at node x={abscissa!r}")


class TailTooHeavyError(NumericalError):
    """Truncated tail of a semi-infinite integral exceeds the accepted bound."""


class BracketError(NumericalError):
    """Root bracket does not enclose a sign change."""


class MaxIterationsError(NumericalError):
    """Iteration cap reached before the tolerance was met."""


@dataclass(frozen=True)
class MarketParams:
    """Model constants: risk-free rate, volatility and strike.

    The derived quantities gamma = 2r/sigma^2, a = (1+gamma)/2 and
    b = (1-gamma)/2 recur in every formula; they satisfy a - b = gamma
    and a + b = 1.
    """

    r: float
    sigma: float
    strike: float

    def __post_init__(self):
        if not (self.r > 0 and math.isfinite(self.r)):
            raise DomainError(f"risk-free rate must be positive, got {self.r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"volatility must be positive, got {self.sigma}")
        if not (self.strike > 0 and math.isfinite(self.strike)):
            raise DomainError(f"strike must be positive, got {self.strike}")

    @property
    def gamma(self) -> float:
        return 2.0 * self.r / self.sigma**2

    @property
    def a(self) -> float:
        return 0.5 * (1.0 + self.gamma)

    @property
    def b(self) -> float:
        return 0.5 * (1.0 - self.gamma)

    @property
    def perpetual_boundary(self) -> float:
        """Exercise level of the perpetual put, gamma*E/(1+gamma)."""
        return self.gamma * self.strike / (1.0 + self.gamma)


@dataclass(frozen=True)
class TauGrid:
    """Strictly increasing times to maturity starting at 0."""

    taus: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.taus, dtype=float)
        object.__setattr__(self, "taus", t)
        if t.ndim != 1 or t.size < 2:
            raise DomainError("grid needs at least two nodes")
        if t[0] != 0.0:
            raise DomainError(f"grid must start at 0, got {t[0]}")
        if not np.all(np.diff(t) > 0):
            raise DomainError("grid must be strictly increasing")

    @property
    def horizon(self) -> float:
        return float(self.taus[-1])

    def __len__(self) -> int:
        return int(self.taus.size)


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled early-exercise curve rho(tau) with linear interpolation.

    rho(0) equals the strike and every sample lies in (0, strike].  Between
    nodes the curve is evaluated by linear interpolation; S_f(t) is recovered
    as rho(T - t).
    """

    grid: TauGrid
    rhos: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rhos, dtype=float)
        object.__setattr__(self, "rhos", rho)
        if rho.shape != self.grid.taus.shape:
            raise DomainError("boundary values and grid differ in length")
        if not np.all(np.isfinite(rho)) or np.any(rho <= 0):
            raise DomainError("boundary values must be finite and positive")

    @property
    def strike(self) -> float:
        return float(self.rhos[0])

    def value(self, tau) -> float | np.ndarray:
        """Boundary level at time-to-maturity tau (scalar or array)."""
        t = np.asarray(tau, dtype=float)
        if np.any(t < 0) or np.any(t > self.grid.horizon + 1e-15 * max(1.0, self.grid.horizon)):
            raise DomainError(
                f"tau outside the curve's range [0, {self.grid.horizon}]"
            )
        out = np.interp(t, self.grid.taus, self.rhos)
        return float(out) if np.isscalar(tau) or t.ndim == 0 else out

    def __call__(self, tau):
        return self.value(tau)


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for the quadrature and root-finding kernels.

    finite_subintervals must be a multiple of 4 because the composite rule
    consumes panels of four subintervals (closed five-point Newton-Cotes).
    semi_inf_truncation is the upper limit substituted for infinity; callers
    integrating Gaussian-damped integrands typically override it per call.
    """

    finite_subintervals: int = 1000
    semi_inf_truncation: float = 50.0
    root_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if self.finite_subintervals < 4 or self.finite_subintervals % 4 != 0:
            raise DomainError(
                f"finite_subintervals must be >= 4 and divisible by 4, got {self.finite_subintervals}"
            )
        if not self.semi_inf_truncation > 0:
            raise DomainError("semi_inf_truncation must be positive")
        if not (self.root_tol > 0 and self.max_iter > 0):
            raise DomainError("tolerances and iteration caps must be positive")

    def with_truncation(self, z: float) -> "QuadratureConfig":
        return replace(self, semi_inf_truncation=z)

    def with_subintervals(self, n: int) -> "QuadratureConfig":
        return replace(self, finite_subintervals=n)


_SQRT2 = math.sqrt(2.0)


def norm_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function.

    Saturates cleanly to 0/1 for large |x|; absolute error is a few ulp,
    well inside the 1e-12 budget the pricing formulas assume.
    """
    return 0.5 * math.erfc(-x / _SQRT2)


_norm_cdf_ufunc = np.frompyfunc(norm_cdf, 1, 1)


def norm_cdf_array(x: np.ndarray) -> np.ndarray:
    """Vectorised normal CDF for quadrature integrands."""
    return _norm_cdf_ufunc(np.asarray(x, dtype=float)).astype(float)


def _boole_weights(n: int) -> np.ndarray:
    # closed five-point rule per panel of 4 subintervals:
    #   (2h/45) * (7, 32, 12, 32, 7), panels share their end nodes
    w = np.zeros(n + 1)
    w[0] = 7.0
    w[n] = 7.0
    w[1::2] = 32.0
    w[2::4] = 12.0
    w[4:n:4] = 14.0
    return w


def _eval_integrand(f, x: np.ndarray) -> np.ndarray:
    """Evaluate f on all nodes, vectorised when f supports arrays."""
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        y = np.fromiter((float(f(float(xi))) for xi in x), dtype=float, count=x.size)
    return y


def integrate_newton_cotes(f, a: float, b: float, cfg: QuadratureConfig) -> float:
    """Composite closed fourth-degree Newton-Cotes rule on [a, b].

    Exact for polynomials of degree <= 5 on each panel.  Raises
    QuadratureNodeError naming the offending abscissa if the integrand
    produces a non-finite value anywhere on the grid.
    """
    if not a <= b:
        raise DomainError(f"invalid interval [{a}, {b}]")
    if a == b:
        return 0.0
    n = cfg.finite_subintervals
    x = np.linspace(a, b, n + 1)
    y = _eval_integrand(f, x)
    bad = ~np.isfinite(y)
    if bad.any():
        i = int(np.argmax(bad))
        raise QuadratureNodeError(float(x[i]), float(y[i]))
    h = (b - a) / n
    return float((2.0 * h / 45.0) * np.dot(_boole_weights(n), y))


def integrate_semi_infinite(f, cfg: QuadratureConfig) -> float:
    """Integral of f over [0, inf) by truncating at cfg.semi_inf_truncation.

    A tail bound is estimated from the decay rate of |f| just past the
    truncation point; the result is only reported when that bound stays
    below 10 * root_tol, otherwise TailTooHeavyError signals that the
    truncation must grow.
    """
    z = cfg.semi_inf_truncation
    result = integrate_newton_cotes(f, 0.0, z, cfg)

    f0 = abs(float(f(z)))
    f1 = abs(float(f(1.1 * z)))
    if f0 == 0.0 and f1 == 0.0:
        tail = 0.0
    elif f1 >= f0:
        tail = math.inf
    else:
        rate = math.log(f0 / f1) / (0.1 * z) if f1 > 0 else math.inf
        tail = f0 / rate if math.isfinite(rate) else 0.0
    if not tail < 10.0 * cfg.root_tol:
        raise TailTooHeavyError(
            f"tail bound {tail:.3e} beyond Z={z:g} exceeds {10 * cfg.root_tol:.1e}; "
            "increase the truncation"
        )
    return result


def find_root_bracketed(g, lo: float, hi: float, cfg: QuadratureConfig) -> float:
    """Bisection on [lo, hi]; deterministic for fixed inputs.

    Requires a sign change on the bracket.  Stops once the bracket width
    drops below root_tol, raising MaxIterationsError if the cap is hit
    first.
    """
    if not lo <= hi:
        raise DomainError(f"invalid bracket [{lo}, {hi}]")
    glo = g(lo)
    ghi = g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if glo * ghi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: g(lo)={glo!r}, g(hi)={ghi!r}")
    for _ in range(cfg.max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo < cfg.root_tol:
            return mid
        gm = g(mid)
        if gm == 0.0:
            return mid
        if glo * gm < 0:
            hi = mid
        else:
            lo, glo = mid, gm
    raise MaxIterationsError(
        f"bisection did not reach width {cfg.root_tol:g} in {cfg.max_iter} iterations"
    )


def interp_linear(grid: TauGrid, values, tau: float) -> float:
    """Piecewise-linear value on the grid; exact at the nodes."""
    v = np.asarray(values, dtype=float)
    if v.shape != grid.taus.shape:
        raise DomainError("values and grid differ in length")
    if tau < 0 or tau > grid.horizon:
        raise DomainError(f"tau={tau} outside [0, {grid.horizon}]")
    return float(np.interp(tau, grid.taus, v))
