"""Finite-difference benchmark: projected SOR on the transformed inequality.

The change of variables x = ln(S/E), tau = T - t,
u(x, tau) = e^{alpha x + beta tau} V(E e^x, T - tau)/E with
alpha = r/sigma^2 - 1/2 and beta = r/2 + sigma^2/8 + r^2/(2 sigma^2) turns
the pricing inequality into an obstacle problem for the heat equation
u_tau = (sigma^2/2) u_xx, u >= transformed payoff.  Each Crank-Nicolson
step is a linear complementarity problem solved by SOR sweeps whose
component updates are clipped to the payoff from below.  The early exercise
boundary is read off each time level as the point where the price detaches
from the payoff by more than a contact tolerance.

The sweep itself is a strictly sequential Gauss-Seidel recursion; when
numba is importable a compiled kernel is used, otherwise a plain Python
loop with identical arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BoundaryCurve,
    DomainError,
    MarketParams,
    NumericalError,
    TauGrid,
)

__all__ = [
    "PsorConfig",
    "PsorSolution",
    "IterationError",
    "NoContactError",
    "psor_solve",
    "extract_boundary",
    "price_at",
]


class IterationError(NumericalError):
    """SOR failed to converge within the sweep cap at some time level."""


class NoContactError(NumericalError):
    """Even the leftmost grid node is off the payoff: the domain is too narrow."""


@dataclass(frozen=True)
class PsorConfig:
    """Grid for the benchmark solve.

    x-nodes run over [-L, L] with spacing h = L/n (2n+1 nodes), time levels
    over [0, T] with step k = T/m.  omega is the SOR relaxation factor, tol
    the max-norm stopping rule on successive sweep iterates, contact_tol the
    detachment threshold (relative to the strike) used by the boundary
    extraction.
    """

    n: int
    m: int
    T: float
    L: float = 2.5
    omega: float = 1.5
    tol: float = 1e-10
    contact_tol: float = 1e-8
    max_sweeps: int = 100_000

    def __post_init__(self):
        if self.n < 2 or self.m < 1:
            raise DomainError(f"grid too small: n={self.n}, m={self.m}")
        if not (self.L > 0 and self.T > 0):
            raise DomainError("L and T must be positive")
        if not 0.0 < self.omega < 2.0:
            raise DomainError(f"omega must lie in (0, 2), got {self.omega}")
        if not (self.tol > 0 and self.contact_tol > 0):
            raise DomainError("tolerances must be positive")

    @property
    def h(self) -> float:
        return self.L / self.n

    @property
    def k(self) -> float:
        return self.T / self.m


def _psor_sweeps_python(u, g, rhs, lam, omega, tol, max_sweeps):
    N = u.shape[0]
    half = 0.5 * lam
    diag = 1.0 + lam
    ul = u.tolist()
    gl = g.tolist()
    rl = rhs.tolist()
    for sweep in range(max_sweeps):
        delta = 0.0
        left = ul[0]
        for i in range(1, N - 1):
            y = (rl[i] + half * (left + ul[i + 1])) / diag
            ui = ul[i]
            new = ui + omega * (y - ui)
            gi = gl[i]
            if new < gi:
                new = gi
            d = new - ui
            if d < 0.0:
                d = -d
            if d > delta:
                delta = d
            ul[i] = new
            left = new
        if delta < tol:
            u[:] = ul
            return sweep + 1
    u[:] = ul
    return -1


try:  # compiled sweep, same arithmetic as the fallback above
    from numba import njit as _njit

    @_njit(cache=True)
    def _psor_sweeps_numba(u, g, rhs, lam, omega, tol, max_sweeps):  # pragma: no cover
        N = u.shape[0]
        half = 0.5 * lam
        diag = 1.0 + lam
        for sweep in range(max_sweeps):
            delta = 0.0
            for i in range(1, N - 1):
                y = (rhs[i] + half * (u[i - 1] + u[i + 1])) / diag
                ui = u[i]
                new = ui + omega * (y - ui)
                gi = g[i]
                if new < gi:
                    new = gi
                d = new - ui
                if d < 0.0:
                    d = -d
                if d > delta:
                    delta = d
                u[i] = new
            if delta < tol:
                return sweep + 1
        return -1

    _psor_sweeps = _psor_sweeps_numba
except ImportError:  # pragma: no cover
    _psor_sweeps = _psor_sweeps_python


@dataclass(frozen=True)
class PsorSolution:
    """Transformed-grid solution u(x_i, tau_j) plus untransform metadata.

    The price is recovered as V(S, t) = E e^{-alpha x - beta tau} u with
    x = ln(S/E), tau = T - t; by construction u never falls below the
    transformed payoff, so V >= (E - S)^+ at every node.
    """

    u: np.ndarray
    config: PsorConfig
    params: MarketParams
    alpha: float
    beta: float

    @property
    def x(self) -> np.ndarray:
        c = self.config
        return np.linspace(-c.L, c.L, 2 * c.n + 1)

    @property
    def taus(self) -> np.ndarray:
        c = self.config
        return np.linspace(0.0, c.T, c.m + 1)

    def payoff_rel(self) -> np.ndarray:
        """(1 - e^x)^+ on the spatial grid (payoff / strike)."""
        return np.maximum(1.0 - np.exp(self.x), 0.0)

    def price_level(self, j: int) -> np.ndarray:
        """V/E on the whole grid at time level j."""
        tau = self.taus[j]
        return self.u[:, j] * np.exp(-self.alpha * self.x - self.beta * tau)


def transform_constants(p: MarketParams) -> tuple[float, float]:
    alpha = p.r / p.sigma**2 - 0.5
    beta = 0.5 * p.r + p.sigma**2 / 8.0 + p.r**2 / (2.0 * p.sigma**2)
    return alpha, beta


def psor_solve(p: MarketParams, cfg: PsorConfig) -> PsorSolution:
    """March the obstacle problem over all time levels.

    Crank-Nicolson weighting on the heat operator; each level's LCP is
    solved by projected SOR warm-started from the previous level.  The left
    boundary is pinned to the transformed payoff (the deep-exercise value,
    where V(0, t) = E in the untruncated problem), the right boundary to 0.
    """
    alpha, beta = transform_constants(p)
    n, m = cfg.n, cfg.m
    h, k = cfg.h, cfg.k
    lam = p.sigma**2 * k / (2.0 * h * h)
    x = np.linspace(-cfg.L, cfg.L, 2 * n + 1)
    payoff = np.maximum(1.0 - np.exp(x), 0.0)
    eax = np.exp(alpha * x)

    U = np.empty((2 * n + 1, m + 1))
    U[:, 0] = eax * payoff
    if not np.all(np.isfinite(U[:, 0])):
        raise DomainError("transformed payoff not finite on the grid; reduce L")

    for j in range(1, m + 1):
        tau_j = j * k
        g = eax * payoff * math.exp(beta * tau_j)
        prev = U[:, j - 1]
        rhs = np.empty_like(prev)
        rhs[1:-1] = 0.5 * lam * (prev[:-2] + prev[2:]) + (1.0 - lam) * prev[1:-1]
        u = prev.copy()
        u[0] = g[0]
        u[-1] = 0.0
        sweeps = _psor_sweeps(u, g, rhs, lam, cfg.omega, cfg.tol, cfg.max_sweeps)
        if sweeps < 0:
            raise IterationError(
                f"SOR did not converge at time level {j} within {cfg.max_sweeps} sweeps"
            )
        U[:, j] = u
    return PsorSolution(U, cfg, p, alpha, beta)


def extract_boundary(sol: PsorSolution, contact_tol: float | None = None) -> BoundaryCurve:
    """Exercise boundary per time level: the largest price still on the payoff.

    The exercise region is the connected interval starting at the left edge,
    so the boundary sits between the last node whose detachment gap
    (V - payoff, relative to the strike) is within contact_tol and the first
    node beyond it; linear interpolation of the gap across that cell places
    the crossing.  A detached leftmost node means the grid does not reach
    the exercise region (NoContactError).
    """
    ct = contact_tol if contact_tol is not None else sol.config.contact_tol
    x = sol.x
    taus = sol.taus
    payoff = sol.payoff_rel()
    E = sol.params.strike
    rhos = np.empty(taus.size)
    rhos[0] = E
    for j in range(1, taus.size):
        gap = sol.price_level(j) - payoff
        detached = gap > ct
        if not detached.any():
            rhos[j] = E
            continue
        ifd = int(np.argmax(detached))
        if ifd <= 1:
            # only the pinned edge node is on the payoff: the exercise region
            # lies outside the grid
            raise NoContactError(
                f"level {j}: contact region does not reach past the left edge; increase L"
            )
        ic = ifd - 1
        g0, g1 = float(gap[ic]), float(gap[ifd])
        frac = (ct - g0) / (g1 - g0)
        xf = x[ic] + frac * (x[ifd] - x[ic])
        rhos[j] = E * math.exp(xf)
    return BoundaryCurve(TauGrid(taus), rhos)


def price_at(sol: PsorSolution, S: float, t: float) -> float:
    """Bilinear price lookup V(S, t) on the solved grid."""
    p = sol.params
    cfg = sol.config
    if not S > 0:
        raise DomainError(f"price must be positive, got S={S}")
    xq = math.log(S / p.strike)
    if not -cfg.L <= xq <= cfg.L:
        raise DomainError(f"ln(S/E)={xq:.6g} outside [-{cfg.L}, {cfg.L}]")
    tau = cfg.T - t
    if not -1e-12 <= tau <= cfg.T + 1e-12:
        raise DomainError(f"t={t} outside [0, {cfg.T}]")
    tau = min(max(tau, 0.0), cfg.T)

    x = sol.x
    taus = sol.taus
    i = min(int((xq + cfg.L) / cfg.h), 2 * cfg.n - 1)
    j = min(int(tau / cfg.k), cfg.m - 1)
    wx = (xq - x[i]) / cfg.h
    wt = (tau - taus[j]) / cfg.k
    u = (
        (1 - wx) * (1 - wt) * sol.u[i, j]
        + wx * (1 - wt) * sol.u[i + 1, j]
        + (1 - wx) * wt * sol.u[i, j + 1]
        + wx * wt * sol.u[i + 1, j + 1]
    )
    value = p.strike * math.exp(-sol.alpha * xq - sol.beta * tau) * u
    # bilinear interpolation can dip below the obstacle between nodes; the
    # true price never does
    return max(value, p.strike - S, 0.0)
