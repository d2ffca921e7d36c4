"""Price the American put on a grid and read the exercise boundary off it.

The variational-inequality formulation prices the option on a fixed
rectangle: transform to the heat equation, step with Crank-Nicolson, and at
every level run projected SOR so the solution never falls below the payoff.
The exercise boundary is wherever the computed price detaches from the
payoff.  Boundary quality is limited by the grid, so the refinement study
at the end is the part to trust.
"""

import time

from putboundary import (
    MarketParams,
    PsorConfig,
    european_put,
    extract_boundary,
    price_at,
    psor_solve,
)

p = MarketParams(r=0.1, sigma=0.3, strike=100.0)

cfg = PsorConfig(n=400, m=400, T=1.0, L=1.5, omega=1.6)
t0 = time.perf_counter()
sol = psor_solve(p, cfg)
print(f"grid {2 * cfg.n + 1} x {cfg.m + 1} solved in {time.perf_counter() - t0:.2f}s")
print()

print("prices along the strike line (American vs European):")
for t in (0.0, 0.5, 0.9):
    am = price_at(sol, 100.0, t)
    eu = european_put(100.0, cfg.T - t, p)
    print(f"  t={t:3.1f}: american {am:7.4f}  european {eu:7.4f}  premium {am - eu:6.4f}")
print()

curve = extract_boundary(sol)
print("extracted boundary:")
for tau in (0.1, 0.25, 0.5, 1.0):
    print(f"  rho({tau:4g}) = {float(curve.value(tau)):9.4f}")
print()

print("grid-doubling study of rho(1):")
prev = None
for n in (200, 400, 800):
    c = PsorConfig(n=n, m=n, T=1.0, L=1.5, omega=1.6)
    v = float(extract_boundary(psor_solve(p, c)).value(1.0))
    note = "" if prev is None else f"  moved {abs(v - prev):.4f}"
    print(f"  n=m={n:4d}: {v:.4f}{note}")
    prev = v
print()
print("compare with the iterative integral-equation solver, which puts")
print("rho(1) at 76.16 for these parameters.")
