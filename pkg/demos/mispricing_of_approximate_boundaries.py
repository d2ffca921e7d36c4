"""What does a slightly wrong exercise boundary cost in option value?

Exercising along an approximate boundary instead of the true one turns the
American put into a knock-out contract on that barrier.  The price
shortfall has a closed Green's-function representation, so no extra PDE
solves are needed: feed in two curves, integrate, done.  Here the
approximate curve is the near-expiry asymptote of the closed integral
formula, the benchmark is the iterative integral-equation solve, and both
the boundary error and the normalised price error are swept over the last
couple of trading days before expiry.
"""

import numpy as np

from putboundary import (
    MarketParams,
    boundary_rel_err,
    mispricing_err,
    price_gap_at_boundary,
    rho_zhu_asymptote,
    solve_boundary,
)

p = MarketParams(r=0.1, sigma=0.3, strike=1.0)  # errors are scale free

bench = solve_boundary(p, T=0.006, m=160)
approx = lambda t: p.strike if t == 0.0 else rho_zhu_asymptote(t, p)

print("sweep over the final ~2 days to expiry (unit strike):")
print(f"{'tau':>10} {'boundary rel err':>17} {'price gap':>12} {'mispricing err':>15}")
taus = np.geomspace(3e-5, 0.006, 14)
for tau in taus:
    tau = float(tau)
    eps = boundary_rel_err(bench, approx, tau)
    gap = price_gap_at_boundary(bench, approx, tau, p)
    err = mispricing_err(bench, approx, tau, p)
    print(f"{tau:10.6f} {eps:17.5f} {gap:12.3e} {err:15.4f}")

print()
print("the boundary error peaks around half a percent a few hours before")
print("expiry and then shrinks as the asymptote overtakes the boundary;")
print("the price error is largest right at expiry, where the early-exercise")
print("premium it is measured against collapses to zero.")
