import math

import numpy as np
import pytest

from ncsusy.errors import GridTooCoarse, NegativeDiscriminant
from ncsusy.numeric import (
    CSV_COLUMNS, GridSpec, _landau_fd, deformed_params, eig_tridiag, expected_landau_levels,
    expected_symmetric_levels, invariance_sweep, solve_landau_1d, solve_symmetric_radial,
)
from ncsusy.star import StarContext


def test_two_by_two():
    assert np.allclose(eig_tridiag([2, 2], [1], 2), [1, 3])


def test_identity():
    assert np.allclose(eig_tridiag(np.ones(5), np.zeros(4), 5), 1)


def test_offdiag_length_checked():
    with pytest.raises(ValueError):
        eig_tridiag([1, 2, 3], [1, 1, 1], 2)


def _oscillator(npts, L):
    h = 2 * L / (npts + 1)
    s = -L + h * np.arange(1, npts + 1)
    return eig_tridiag(1 / h**2 + 0.5 * s**2, np.full(npts - 1, -0.5 / h**2), 4)


def test_discretized_oscillator():
    exact = np.array([0.5, 1.5, 2.5, 3.5])
    coarse = _oscillator(1024, 12.0)
    # plain second-order differences at this spacing carry an O(h^2) defect near 1e-3
    assert np.max(np.abs(coarse - exact)) < 1e-3
    fine = _oscillator(2049, 12.0)
    assert np.max(np.abs((4 * fine - coarse) / 3 - exact)) < 1e-6


def test_grid_refinement_is_monotone():
    exact = np.arange(4) + 0.5
    defects = []
    for n in (256, 513, 1027):
        E, _ = _landau_fd(n, 10.0, 1.0, 1.0, 1.0, 4)
        defects.append(np.abs(E - exact))
    assert np.all(defects[1] < defects[0]) and np.all(defects[2] < defects[1])


@pytest.mark.parametrize("B,mass", [(1.0, 1.0), (2.5, 0.7)])
def test_landau_spectrum(B, mass):
    ctx = StarContext(r=0.0, field=B, mass=mass)
    res = solve_landau_1d(0.3, ctx, nev=6)
    unit = B / mass
    assert np.all(np.diff(res.eigenvalues) > 0)
    assert abs(res.eigenvalues[0]) < 1e-6 * unit
    assert np.max(np.abs(res.eigenvalues - expected_landau_levels(ctx, 6))) < 1e-6 * unit


def test_landau_momentum_degeneracy():
    ctx = StarContext(r=0.0)
    a = solve_landau_1d(0.0, ctx).eigenvalues
    b = solve_landau_1d(3.7, ctx).eigenvalues
    assert np.max(np.abs(a - b)) < 1e-8


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        solve_landau_1d(0.0, StarContext(r=0.0), GridSpec(npoints=100, halfwidth=10.0))
    with pytest.raises(ValueError):
        GridSpec(npoints=10)


@pytest.mark.parametrize("m_l", [0, 2, -1])
@pytest.mark.parametrize("vt", [0.0, 0.5, 2.0])
def test_symmetric_radial(m_l, vt):
    ctx = StarContext(r=0.5)
    res = solve_symmetric_radial(m_l, ctx, vt)
    want = expected_symmetric_levels(ctx, m_l, 4)
    assert np.max(np.abs(res.eigenvalues - want)) < 1e-4


def test_deformed_params():
    ctx = StarContext()
    p = deformed_params(ctx, 0.0)
    assert (p.lambda_bar, p.e_star, p.m_star, p.B_bar) == (1.0, 1.0, 1.0, 0.5)
    p = deformed_params(ctx, 1.0)
    assert abs(p.lambda_bar - (1 + 1 / (2 * (1 + math.sqrt(2))))) < 1e-15
    with pytest.raises(NegativeDiscriminant):
        deformed_params(ctx, -2.0)


def test_deformed_identities(rng):
    for _ in range(20):
        hb, e, B, m = rng.uniform(0.3, 2.0, size=4)
        ctx = StarContext(hbar=hb, charge=e, field=B, mass=m)
        p = deformed_params(ctx, float(rng.uniform(0, 5)))
        assert p.lambda_bar >= 1
        assert abs(p.lambda_bar * p.B_bar - B / 2) < 1e-12
        assert abs(p.e_star * p.B_bar / p.m_star - e * B / (2 * m)) < 1e-12


def test_invariance_sweep():
    out = invariance_sweep(StarContext(), [0.0, 0.5, 2.0], (0.0, 0.5))
    assert out["pass"] and len(out["rows"]) == 6 and out["max_deviation"] < 1e-4


def test_rows_have_csv_columns():
    rows = solve_landau_1d(0.0, StarContext(r=0.0), nev=3).rows([0, 1, 2], 1e-6)
    assert all(tuple(r) == CSV_COLUMNS for r in rows)
    assert all(r["pass"] for r in rows)
