import pytest

from putboundary import (
    MarketParams,
    MeshKind,
    PsorConfig,
    extract_boundary,
    psor_solve,
    solve_boundary,
)

# the benchmark parameter set used throughout the comparison tables
STANDARD = MarketParams(r=0.1, sigma=0.3, strike=100.0)


@pytest.fixture(scope="session")
def params() -> MarketParams:
    return STANDARD


@pytest.fixture(scope="session")
def ssch_table2_curve():
    """Full-fidelity iterative solve over five years (quadratic mesh, m=200)."""
    return solve_boundary(STANDARD, 5.0, 200, MeshKind.QUADRATIC)


@pytest.fixture(scope="session")
def psor_table2_solution():
    """Benchmark grid used for the long-horizon table reproduction."""
    cfg = PsorConfig(n=1000, m=1000, T=5.0, L=1.0, omega=1.6, tol=1e-9)
    return psor_solve(STANDARD, cfg)


@pytest.fixture(scope="session")
def psor_table2_tight(psor_table2_solution):
    """Accurately extracted boundary from the long-horizon benchmark."""
    return extract_boundary(psor_table2_solution, contact_tol=1e-8)


@pytest.fixture(scope="session")
def mispricing_benchmark():
    """Near-expiry benchmark boundary at unit strike for the error sweeps."""
    p1 = MarketParams(r=0.1, sigma=0.3, strike=1.0)
    cfg = PsorConfig(n=1200, m=600, T=0.006, L=0.06, omega=1.85, tol=1e-10)
    return p1, extract_boundary(psor_solve(p1, cfg))
