"""Sequential solver for the nonlinear integral equation of the boundary.

The boundary is represented through an auxiliary function eta(tau):

    rho(tau) = E exp(-(r - sigma^2/2) tau + sigma sqrt(2 tau) eta(tau)),

where eta solves, for every tau,

    eta(tau) = -sqrt(-ln[ (r sqrt(2 pi tau)/sigma) e^{r tau} (1 - F_eta(tau)/sqrt(pi)) ])

    F_eta(tau) = 2 int_0^{pi/2} e^{-r tau cos^2(th) - G^2} [ (sigma sqrt(tau)/sqrt(2)) sin(th)
                                                           + G tan(th) ] dth
    G(tau, th) = [eta(tau) - eta(tau sin^2 th) sin(th)] / cos(th)

F and G only look backwards: their value at tau depends on eta on [0, tau]
alone, so the unknowns eta(tau_1) < ... < eta(tau_m) can be solved one node
at a time, each by a scalar root find warm-started at the previous node.
The very first node comes from the closed small-tau formula; below tau_1 the
path is evaluated by that same formula, between nodes by linear
interpolation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .asymptotics import eta_lowest_order
from .core import (
    BoundaryCurve,
    BracketError,
    DomainError,
    MarketParams,
    NumericalError,
    QuadratureConfig,
    TauGrid,
    _boole_weights,
)

__all__ = [
    "MeshKind",
    "MeshError",
    "LogDomainError",
    "EtaPath",
    "build_mesh",
    "g_eval",
    "big_f_eval",
    "solve_eta_at",
    "solve_boundary",
]


class MeshError(DomainError):
    """The mesh violates the first-node admissibility condition."""


class LogDomainError(NumericalError):
    """The root search could not keep the log argument inside (0, 1)."""


class MeshKind(enum.Enum):
    """Node placement: uniform tau_i = (i/m) T, or quadratic tau_i = (i/m)^2 T
    which concentrates nodes near expiry to follow the sqrt(tau ln tau)
    steepening of the boundary."""

    UNIFORM = "uniform"
    QUADRATIC = "quadratic"


def build_mesh(T: float, m: int, kind: MeshKind, p: MarketParams) -> TauGrid:
    """Mesh on [0, T]; raises MeshError unless the first positive node
    satisfies (2r/sigma) sqrt(2 pi tau_1) e^{r tau_1} < 1."""
    if m < 2:
        raise MeshError(f"need at least 2 steps, got m={m}")
    if not (T > 0 and math.isfinite(T)):
        raise MeshError(f"horizon must be positive, got {T}")
    i = np.arange(m + 1, dtype=float)
    if kind is MeshKind.QUADRATIC:
        taus = (i / m) ** 2 * T
    else:
        taus = (i / m) * T
    tau1 = taus[1]
    arg = (2.0 * p.r / p.sigma) * math.sqrt(2.0 * math.pi * tau1) * math.exp(p.r * tau1)
    if arg >= 1.0:
        raise MeshError(
            f"first node tau_1={tau1:g} inadmissible: (2r/sigma) sqrt(2 pi tau_1) "
            f"e^(r tau_1) = {arg:.6g} >= 1; increase m"
        )
    return TauGrid(taus)


@dataclass
class EtaPath:
    """Solved values of eta on the leading mesh nodes.

    etas[k] belongs to grid.taus[k+1]; node 0 carries no unknown.  Between
    tau_1 and the last solved node the path interpolates linearly; on
    (0, tau_1) it follows the closed small-tau formula (or `near_expiry`
    when a custom head is supplied, which tests use to build synthetic
    paths).
    """

    grid: TauGrid
    params: MarketParams
    etas: list[float] = field(default_factory=list)
    near_expiry: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if len(self.etas) > len(self.grid) - 1:
            raise DomainError("more eta values than positive mesh nodes")
        if any(not (e < 0) for e in self.etas):
            raise DomainError("every eta value must be negative")

    @property
    def solved(self) -> int:
        return len(self.etas)

    def append(self, eta: float):
        if not eta < 0:
            raise DomainError(f"eta must be negative, got {eta}")
        if self.solved >= len(self.grid) - 1:
            raise DomainError("path already complete")
        self.etas.append(float(eta))

    def _head(self, s: np.ndarray) -> np.ndarray:
        if self.near_expiry is not None:
            return np.asarray(self.near_expiry(s), dtype=float)
        return eta_lowest_order(s, self.params)

    def eval_with_trial(self, s, trial_tau: float, trial_eta: float) -> np.ndarray:
        """Path value at times s in [0, trial_tau], treating (trial_tau,
        trial_eta) as the not-yet-committed next node."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.empty_like(s)
        tau1 = self.grid.taus[1]
        head = s < tau1
        if head.any():
            out[head] = self._head(np.maximum(s[head], 1e-300))
        if (~head).any():
            knots_t = np.append(self.grid.taus[1 : self.solved + 1], trial_tau)
            knots_e = np.append(np.asarray(self.etas), trial_eta)
            out[~head] = np.interp(s[~head], knots_t, knots_e)
        return out


def g_eval(path: EtaPath, eta_i: float, tau_i: float, theta: float) -> float:
    """Scaled increment G = [eta_i - eta(tau_i sin^2 th) sin(th)] / cos(th).

    theta must lie in [0, pi/2).  At theta = 0 the path term vanishes with
    sin(theta) and G reduces to eta_i exactly.
    """
    if not (0.0 <= theta < math.pi / 2):
        raise DomainError(f"theta must lie in [0, pi/2), got {theta}")
    if theta == 0.0:
        return eta_i
    st = math.sin(theta)
    eh = float(path.eval_with_trial(tau_i * st * st, tau_i, eta_i)[0])
    return (eta_i - eh * st) / math.cos(theta)


_theta_cache: dict[int, tuple[np.ndarray, ...]] = {}


def _theta_nodes(n: int):
    """Quadrature nodes on [0, pi/2] with the last node pulled inside the
    interval, plus the trig factors reused by every integrand evaluation."""
    cached = _theta_cache.get(n)
    if cached is None:
        theta = np.linspace(0.0, math.pi / 2.0, n + 1)
        theta[-1] = math.pi / 2.0 - (math.pi / 2.0) / (10.0 * n)
        st = np.sin(theta)
        ct = np.cos(theta)
        tt = np.tan(theta)
        w = _boole_weights(n) * (2.0 * (math.pi / 2.0 / n) / 45.0)
        cached = (theta, st, ct, tt, w)
        if len(_theta_cache) < 64:
            _theta_cache[n] = cached
    return cached


def big_f_eval(
    path: EtaPath,
    eta_i: float,
    tau_i: float,
    p: MarketParams,
    cfg: QuadratureConfig | None = None,
) -> float:
    """The integral F at node tau_i for a trial value eta_i.

    Closed Newton-Cotes on [0, pi/2] with the endpoint node shifted to
    pi/2 - eps: the integrand's G tan(theta) factor is an indeterminate
    0 * inf exactly at pi/2, but approaches a finite one-sided limit, so the
    shifted node supplies the endpoint value.
    """
    if not (tau_i > 0 and math.isfinite(tau_i)):
        raise DomainError(f"tau_i must be positive, got {tau_i}")
    cfg = cfg or QuadratureConfig()
    _, st, ct, tt, w = _theta_nodes(cfg.finite_subintervals)

    s = tau_i * st * st
    eh = path.eval_with_trial(s, tau_i, eta_i)
    eh[0] = 0.0  # sin(0) kills the path term; avoids the log blow-up at s=0
    G = (eta_i - eh * st) / ct
    vals = np.exp(-p.r * tau_i * ct * ct - G * G) * (
        (p.sigma * math.sqrt(tau_i) / math.sqrt(2.0)) * st + G * tt
    )
    if not np.all(np.isfinite(vals)):
        raise NumericalError("non-finite integrand in the F integral")
    return 2.0 * float(np.dot(w, vals))


def _log_argument(F: float, tau_i: float, p: MarketParams) -> float:
    return (
        (p.r * math.sqrt(2.0 * math.pi * tau_i) / p.sigma)
        * math.exp(p.r * tau_i)
        * (1.0 - F / math.sqrt(math.pi))
    )


def _residual(path: EtaPath, tau_i: float, p: MarketParams, cfg: QuadratureConfig):
    """Residual R(eta) = eta + sqrt(-ln A(eta)) with a continuous extension:
    A >= 1 contributes sqrt-term 0, A <= 0 maps to +inf.  Roots of the
    extension coincide with roots of the true residual because a root needs
    -eta = sqrt(-ln A) > 0, i.e. A strictly inside (0, 1)."""

    def R(eta: float) -> float:
        F = big_f_eval(path, eta, tau_i, p, cfg)
        A = _log_argument(F, tau_i, p)
        if A <= 0.0:
            return math.inf
        neg_log = -math.log(A)
        return eta + math.sqrt(neg_log) if neg_log > 0 else eta

    return R


def solve_eta_at(
    path: EtaPath,
    tau_i: float,
    p: MarketParams,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Value of eta at the next mesh node, given the path solved so far.

    The first positive node bypasses root finding and takes the closed
    small-tau value.  Later nodes solve R(eta) = 0 by bisection on a
    bracket around the previous node's value, widening geometrically up to
    eight times if the sign change is not yet enclosed.
    """
    cfg = cfg or QuadratureConfig()
    i = path.solved + 1
    taus = path.grid.taus
    if i >= len(taus):
        raise DomainError("path already covers the whole mesh")
    if not math.isclose(tau_i, taus[i], rel_tol=0.0, abs_tol=1e-14 * max(1.0, taus[i])):
        raise DomainError(f"tau_i={tau_i!r} is not the next unsolved node {taus[i]!r}")

    if i == 1:
        return float(eta_lowest_order(taus[1], p))

    R = _residual(path, taus[i], p, cfg)
    prev = path.etas[-1]
    lo = prev - 1.0
    hi = min(prev + 1.0, -1e-12)
    flo, fhi = R(lo), R(hi)
    for attempt in range(8):
        if math.isfinite(flo) and flo * fhi <= 0:
            break
        width = 2.0**attempt
        lo -= width
        if math.isinf(flo):
            # A <= 0 means F too large; pushing eta downward shrinks F
            flo = R(lo)
        else:
            flo = R(lo)
        hi = min(hi + width, -1e-12)
        fhi = R(hi)
    else:
        if math.isinf(flo) or math.isinf(fhi):
            raise LogDomainError(
                f"node {i} (tau={taus[i]:g}): log argument left (0,1) on "
                f"[{lo:.6g}, {hi:.6g}]"
            )
        raise BracketError(
            f"node {i} (tau={taus[i]:g}): no sign change of the residual on "
            f"[{lo:.6g}, {hi:.6g}]"
        )

    fm = math.inf
    mid = 0.5 * (lo + hi)
    for _ in range(cfg.max_iter):
        mid = 0.5 * (lo + hi)
        fm = R(mid)
        if abs(fm) <= 0.5 * cfg.root_tol or (hi - lo) < 1e-3 * cfg.root_tol:
            break
        if fm == 0.0:
            break
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    if not math.isfinite(fm) or abs(fm) > cfg.root_tol:
        raise LogDomainError(
            f"node {i} (tau={taus[i]:g}): converged point invalid, residual {fm!r}"
        )
    return mid


def solve_boundary(
    p: MarketParams,
    T: float,
    m: int,
    mesh: MeshKind = MeshKind.QUADRATIC,
    cfg: QuadratureConfig | None = None,
) -> BoundaryCurve:
    """Whole boundary curve on [0, T] by the sequential node-by-node solve.

    rho_0 = E at tau = 0; every later node maps its eta through
    rho_i = E exp(-(r - sigma^2/2) tau_i + sigma sqrt(2 tau_i) eta_i).
    Failures carry the index of the offending node.
    """
    cfg = cfg or QuadratureConfig()
    grid = build_mesh(T, m, mesh, p)
    path = EtaPath(grid, p)
    for i in range(1, m + 1):
        try:
            path.append(solve_eta_at(path, float(grid.taus[i]), p, cfg))
        except NumericalError as exc:
            raise type(exc)(f"boundary solve failed at node {i}: {exc}") from exc
    taus = grid.taus
    etas = np.asarray(path.etas)
    rhos = np.empty(m + 1)
    rhos[0] = p.strike
    rhos[1:] = p.strike * np.exp(
        -(p.r - 0.5 * p.sigma**2) * taus[1:] + p.sigma * np.sqrt(2.0 * taus[1:]) * etas
    )
    return BoundaryCurve(grid, rhos)
