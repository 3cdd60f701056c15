"""
Finite-difference eigensolvers for the Fermionic Hamiltonian.

Landau gauge: after separating the plane-wave direction the problem is a
shifted 1D oscillator with frequency ``omega_c = eB/m``.

Symmetric gauge: per angular momentum ``m_l`` the radial problem is an
oscillator of mass ``m*`` and frequency ``omega_c/2``. It is discretized in
flux (self-adjoint) form on a cell-centred grid, which keeps second-order
accuracy for every ``m_l`` including the ``m_l = 0`` sector.

Both solvers apply one Richardson step (grids ``h`` and ``h/2``) to cancel
the leading ``h**2`` error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import ConvergenceFailure, GaugeMismatch, GridTooCoarse, NegativeDiscriminant
from .star import StarContext

MIN_POINTS_PER_LENGTH = 16
CSV_COLUMNS = ("gauge", "vartheta", "m_l_or_k_y", "n", "energy", "tolerance", "pass")


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid; ``halfwidth`` is measured in magnetic lengths unless ``absolute``."""

    npoints: int = 2048
    halfwidth: float = 10.0
    absolute: bool = False
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.npoints < 64:
            raise ValueError("a grid needs at least 64 points")
        if not self.halfwidth > 0:
            raise ValueError("grid half-width must be positive")
        if self.boundary != "dirichlet":
            raise ValueError("only Dirichlet boundaries are supported")

    def length(self, magnetic_length: float) -> float:
        return self.halfwidth if self.absolute else self.halfwidth * magnetic_length


@dataclass(frozen=True)
class DeformedParams:
    lambda_bar: float
    e_star: float
    m_star: float
    B_bar: float
    omega_c: float


@dataclass
class EigResult:
    eigenvalues: np.ndarray
    metadata: Dict[str, object] = field(default_factory=dict)

    def rows(self, expected: Sequence[float], tol: float, scale: float = 1.0) -> List[dict]:
        """CSV rows comparing each eigenvalue with ``expected`` within ``tol * scale``."""
        md = self.metadata
        out = []
        for n, (e, ref) in enumerate(zip(self.eigenvalues, expected)):
            out.append({
                "gauge": md.get("gauge"),
                "vartheta": md.get("vartheta", 0.0),
                "m_l_or_k_y": md.get("m_l", md.get("k")),
                "n": n,
                "energy": float(e),
                "tolerance": tol,
                "pass": bool(abs(e - ref) <= tol * scale),
            })
        return out


def deformed_params(ctx: StarContext, vartheta: float) -> DeformedParams:
    """Symmetric-gauge deformation factor and the effective charge, mass and field."""
    hb, e, B = ctx.hbar, ctx.charge, ctx.field
    disc = hb * hb + e * hb * vartheta * B
    if disc <= 0:
        raise NegativeDiscriminant(f"hbar^2 + e hbar vartheta B = {disc:g} <= 0")
    denom = hb + math.sqrt(disc)
    lb = 1.0 + e * vartheta * B / (2 * denom)
    return DeformedParams(
        lambda_bar=lb,
        e_star=e / lb,
        m_star=ctx.mass / lb**2,
        B_bar=hb * B / denom,
        omega_c=e * B / ctx.mass,
    )


def eig_tridiag(diag, offdiag, nev: int) -> np.ndarray:
    """Lowest ``nev`` eigenvalues of a real symmetric tridiagonal matrix, ascending."""
    d = np.asarray(diag, dtype=float)
    o = np.asarray(offdiag, dtype=float)
    if o.shape[0] != max(d.shape[0] - 1, 0):
        raise ValueError("offdiag must be one shorter than diag")
    nev = min(nev, d.shape[0])
    try:
        w = eigh_tridiagonal(d, o, eigvals_only=True, select="i", select_range=(0, nev - 1))
    except LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return np.sort(w)


def _check_resolution(h: float, length: float, npoints: int):
    if h > length / MIN_POINTS_PER_LENGTH:
        raise GridTooCoarse(
            f"spacing {h:.3g} exceeds 1/{MIN_POINTS_PER_LENGTH} of the magnetic length {length:.3g}"
            f" ({npoints} points)"
        )


def _richardson(coarse: np.ndarray, fine: np.ndarray) -> np.ndarray:
    return (4.0 * fine - coarse) / 3.0


def _landau_fd(npts: int, L: float, mass: float, omega: float, hbar: float, nev: int):
    h = 2 * L / (npts + 1)
    s = -L + h * np.arange(1, npts + 1)
    kin = hbar**2 / (2 * mass * h * h)
    diag = 2 * kin + 0.5 * mass * omega**2 * s**2
    off = np.full(npts - 1, -kin)
    return eig_tridiag(diag, off, nev), h


def solve_landau_1d(k: float, ctx: StarContext, grid: GridSpec = GridSpec(), nev: int = 6,
                    richardson: bool = True) -> EigResult:
    """Lowest ``nev`` eigenvalues of the Landau-gauge Fermionic Hamiltonian at momentum ``k``.

    The reduced operator is ``p^2/2m + m omega_c^2 (s - s0)^2 / 2 - hbar omega_c / 2``
    with ``s0 = k/eB``; the box is centred on ``s0`` so only the spacing matters.
    """
    eB = ctx.charge * ctx.field
    if eB <= 0:
        raise ValueError("the Landau problem needs eB > 0")
    omega = eB / ctx.mass
    ell = math.sqrt(ctx.hbar / eB)
    L = grid.length(ell)
    E, h = _landau_fd(grid.npoints, L, ctx.mass, omega, ctx.hbar, nev)
    _check_resolution(h, ell, grid.npoints)
    if richardson:
        fine, _ = _landau_fd(2 * grid.npoints + 1, L, ctx.mass, omega, ctx.hbar, nev)
        E = _richardson(E, fine)
    E = E - 0.5 * ctx.hbar * omega
    return EigResult(E, {"gauge": "landau", "k": k, "center": k / eB, "vartheta": None,
                         "npoints": grid.npoints, "halfwidth": L,
                         "method": "central differences" + (" + richardson" if richardson else "")})


def _radial_fd(npts: int, L: float, m_l: int, mstar: float, omega: float, hbar: float, nev: int):
    h = L / npts
    i = np.arange(1, npts + 1, dtype=float)
    rho = (i - 0.5) * h
    rp, rm = i * h, (i - 1) * h
    k = hbar**2 / (2 * mstar)
    diag = (k * (rp + rm) / (rho * h * h) + k * m_l**2 / rho**2
            + 0.5 * mstar * omega**2 * rho**2 - omega * hbar * m_l - hbar * omega)
    off = -k * rp[:-1] / (h * h * np.sqrt(rho[:-1] * rho[1:]))
    return eig_tridiag(diag, off, nev), h


def radial_levels(m_l: int, mass: float, omega: float, hbar: float, grid: GridSpec = GridSpec(),
                  nev: int = 4, richardson: bool = True):
    """Lowest levels of ``p^2/2M + M omega^2 rho^2/2 - omega L_z - hbar omega`` in sector ``m_l``.

    Returns ``(eigenvalues, box_radius)``. The radial equation for ``R`` is written as
    ``-(k/rho) (rho R')' + k m_l^2 R / rho^2 + V R`` and symmetrized by ``sqrt(rho)``,
    which has the same spectrum as the ``u = sqrt(rho) R`` form.
    """
    if omega <= 0:
        raise ValueError("the radial oscillator needs a positive frequency")
    ell = math.sqrt(hbar / (mass * omega))
    L = grid.length(ell)
    E, h = _radial_fd(grid.npoints, L, m_l, mass, omega, hbar, nev)
    _check_resolution(h, ell, grid.npoints)
    if richardson:
        fine, _ = _radial_fd(2 * grid.npoints, L, m_l, mass, omega, hbar, nev)
        E = _richardson(E, fine)
    return E, L


def solve_symmetric_radial(m_l: int, ctx: StarContext, vartheta: float, grid: GridSpec = GridSpec(),
                           nev: int = 4, richardson: bool = True) -> EigResult:
    """Lowest ``nev`` radial eigenvalues of the symmetric-gauge Fermionic Hamiltonian.

    Sector ``m_l`` of ``p^2/2m* + m* (omega_c/2)^2 rho^2 / 2 - (omega_c/2) L_z - hbar omega_c / 2``.
    """
    p = deformed_params(ctx, vartheta)
    omega = 0.5 * p.omega_c
    E, L = radial_levels(m_l, p.m_star, omega, ctx.hbar, grid, nev, richardson)
    return EigResult(E, {"gauge": "symmetric", "m_l": m_l, "vartheta": vartheta, "m_star": p.m_star,
                         "npoints": grid.npoints, "halfwidth": L,
                         "method": "flux-form radial differences" + (" + richardson" if richardson else "")})


def expected_landau_levels(ctx: StarContext, nev: int) -> np.ndarray:
    return ctx.hbar * ctx.charge * ctx.field / ctx.mass * np.arange(nev)


def expected_symmetric_levels(ctx: StarContext, m_l: int, nev: int) -> np.ndarray:
    shift = (abs(m_l) - m_l) // 2
    return ctx.hbar * ctx.charge * ctx.field / ctx.mass * (np.arange(nev) + shift)


def invariance_sweep(ctx: StarContext, vartheta_list: Sequence[float], r_list: Sequence[float] = (0.0, 0.5),
                     nev: int = 4, grid: GridSpec = GridSpec(), m_l: int = 0, k: float = 0.0,
                     tol: float = 1e-4) -> dict:
    """Eigenvalue table across gauges and deformation values.

    Passes when every pair of spectra agrees within ``tol * hbar eB / m``.
    """
    unit = ctx.hbar * ctx.charge * ctx.field / ctx.mass
    table = []
    for r in r_list:
        for vt in vartheta_list:
            if abs(r) < 1e-12 or abs(r - 1) < 1e-12:
                res = solve_landau_1d(k, ctx, grid, nev)
                gauge = "landau"
            elif abs(r - 0.5) < 1e-12:
                res = solve_symmetric_radial(m_l, ctx, vt, grid, nev)
                gauge = "symmetric"
            else:
                raise GaugeMismatch(f"no reduced numeric problem for r={r}")
            table.append({"r": r, "gauge": gauge, "vartheta": vt, "eigenvalues": res.eigenvalues.tolist()})
    spectra = np.array([row["eigenvalues"] for row in table])
    dev = float(np.max(spectra.max(axis=0) - spectra.min(axis=0))) / unit if len(table) else 0.0
    return {"rows": table, "max_deviation": dev, "tolerance": tol, "pass": dev < tol}
