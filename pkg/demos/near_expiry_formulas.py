"""Walk through the closed-form boundary approximations near expiry.

All five formulas agree that the exercise boundary of a zero-dividend
American put leaves the strike at expiry with infinite slope; they differ
in the constant under the logarithm and in how far from expiry they stay
usable.  This script evaluates them side by side on a sweep of maturities
and shows where each one stops being defined.
"""

import math

from putboundary import (
    DomainError,
    MarketParams,
    rho_chen_chadam,
    rho_ekk,
    rho_kk,
    rho_ssc_analytic,
    rho_zhu_asymptote,
)

p = MarketParams(r=0.1, sigma=0.3, strike=100.0)

print(f"strike={p.strike}, r={p.r}, sigma={p.sigma}  (gamma={p.gamma:.4f})")
print()

methods = [
    ("kk", rho_kk),
    ("ekk", rho_ekk),
    ("ssc-a", rho_ssc_analytic),
    ("series", rho_chen_chadam),
    ("zhu-asym", rho_zhu_asymptote),
]

taus = [1e-6, 1e-5, 1e-4, 1e-3, 0.01, 0.04, 0.1, 0.2, 0.5]
print(f"{'tau':>10} " + " ".join(f"{name:>9}" for name, _ in methods))
for tau in taus:
    cells = []
    for _, fn in methods:
        try:
            cells.append(f"{fn(tau, p):9.4f}")
        except DomainError:
            cells.append(f"{'n/a':>9}")
    print(f"{tau:10.6f} " + " ".join(cells))

print()
print("The sqrt-log family (kk, ekk, ssc-a, series) hugs the true boundary")
print("close to expiry but turns back up and then undefined as the log")
print("argument reaches one.  The full-log asymptote undershoots near expiry")
print("by the extra sqrt(-ln tau) factor:")
print()
for tau in (1e-8, 1e-6, 1e-4):
    gap_cluster = p.strike - rho_ekk(tau, p)
    gap_asym = p.strike - rho_zhu_asymptote(tau, p)
    print(
        f"  tau={tau:8.0e}: strike gap ekk {gap_cluster:9.5f}  "
        f"zhu-asym {gap_asym:9.5f}  ratio {gap_asym / gap_cluster:6.3f}"
        f"  ~ sqrt(-ln tau / 2 pi) = {math.sqrt(-math.log(tau) / (2 * math.pi)):6.3f}"
    )
