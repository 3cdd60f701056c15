"""
Command-line entry point.

    ncsusy verify --r 0,0.5 --order 4
    ncsusy spectrum --engine numeric --gauge symmetric --nmax 3 --out results/
    ncsusy witten --r 0,0.5,0.8 --vartheta 0,1

Settings come from an INI file (``--config`` or ``$NCSUSY_CONFIG``, section
``[ncsusy]``) and are overridden by flags. Exit codes: 0 when every check
passes, 1 when a check fails, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass, field as dc_field, fields, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .errors import ConfigError, NCSusyError, NotAnEigenstate
from .exppoly import ExpPoly, X, Y, gaussian
from .numeric import (
    CSV_COLUMNS,
    GridSpec,
    expected_landau_levels,
    expected_symmetric_levels,
    invariance_sweep,
    solve_landau_1d,
    solve_symmetric_radial,
)
from .replication import LANDAU, SYMMETRIC, comparison_report
from .reports import Report, rows_to_csv
from .series import ThetaSeries
from .star import (
    AlgebraElement,
    StarContext,
    coordinate,
    field_strength_residual,
    gauge_coefficient,
    gauge_transport,
    kinematic_momenta,
    op_compose,
    poisson_bracket,
    poisson_limit,
    rep,
    star_commutator,
    star_product,
)
from .susy import (
    eigen_extract,
    exp_series,
    ground_state,
    hamiltonians,
    hamiltonians_direct,
    lambda_bar,
    landau_state,
    operator_residual,
    partner_state,
    scalar_operator,
    susy_algebra_check,
    symmetric_state,
    verify_annihilation,
    witten_analysis,
)

ENV_VAR = "NCSUSY_CONFIG"
SECTION = "ncsusy"


@dataclass
class RunConfig:
    hbar: float = 1.0
    mass: float = 1.0
    charge: float = 1.0
    field: float = 1.0
    vartheta: List[float] = dc_field(default_factory=lambda: [0.5])
    r: List[float] = dc_field(default_factory=lambda: [0.0, 0.5])
    order: int = 4
    tol: float = 1e-10
    grid_n: int = 2048
    grid_l: float = 10.0
    engine: str = "symbolic"
    gauge: str = "landau"
    nmax: int = 3
    out: Optional[str] = None

    def context(self, r: float, vartheta: float = 0.0) -> StarContext:
        return StarContext(hbar=self.hbar, mass=self.mass, charge=self.charge, field=self.field,
                           r=r, K=self.order, tol=self.tol, vartheta=vartheta)

    def grid(self) -> GridSpec:
        return GridSpec(self.grid_n, self.grid_l)

    def parameters(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "out"}

    def validate(self) -> "RunConfig":
        try:
            if self.engine not in ("symbolic", "numeric"):
                raise ValueError(f"engine must be symbolic or numeric, got {self.engine!r}")
            if self.gauge not in (LANDAU, SYMMETRIC):
                raise ValueError(f"gauge must be landau or symmetric, got {self.gauge!r}")
            if self.nmax < 0:
                raise ValueError("nmax must be non-negative")
            if not self.r or not self.vartheta:
                raise ValueError("r and vartheta lists must be non-empty")
            if any(v < 0 for v in self.vartheta):
                raise ValueError("vartheta must be non-negative")
            if not self.tol > 0:
                raise ValueError("tol must be positive")
            self.grid()
            for r in self.r:
                for vt in self.vartheta:
                    self.context(r, vt)
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc
        return self


_FLOAT_LISTS = {"r", "vartheta"}
_INTS = {"order", "grid_n", "nmax"}
_FLOATS = {"hbar", "mass", "charge", "field", "tol", "grid_l"}
_ALIASES = {"b": "field", "k": "order", "e": "charge", "m": "mass"}


def _coerce(key: str, raw: str):
    if key in _FLOAT_LISTS:
        return [float(v) for v in str(raw).split(",") if v.strip()]
    if key in _INTS:
        return int(raw)
    if key in _FLOATS:
        return float(raw)
    return str(raw)


def load_config(path: Optional[str]) -> RunConfig:
    """Read ``[ncsusy]`` key-value pairs; an absent path gives the defaults."""
    cfg = RunConfig()
    if not path:
        return cfg
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(p)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from exc
    if not parser.has_section(SECTION):
        raise ConfigError(f"config needs a [{SECTION}] section")
    known = {f.name for f in fields(RunConfig)}
    updates = {}
    for key, raw in parser.items(SECTION):
        key = _ALIASES.get(key.lower(), key.lower().replace("-", "_"))
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            updates[key] = _coerce(key, raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return replace(cfg, **updates)


# -- suites -------------------------------------------------------------------

def _fs_residual(a: AlgebraElement, b: AlgebraElement) -> float:
    diff = (a - b).max_abs()
    return diff / max(1.0, a.max_abs(), b.max_abs())


def _test_functions(ctx: StarContext):
    f = AlgebraElement.function(X * X * Y + gaussian(a_xx=-0.5, a_yy=-1.0, b_x=0.3) * 0.5, ctx)
    g = AlgebraElement.function(Y * Y - X * 2.0 + gaussian(a_xx=-1.0, a_yy=-0.5, a_xy=0.2), ctx)
    return f, g


def verify_suite(cfg: RunConfig) -> Report:
    rep_ = Report("verify", cfg.parameters())
    for r in cfg.r:
        ctx = cfg.context(r)
        tol = ctx.tol
        tag = f"r={r:g}"
        for name, res in susy_algebra_check(ctx).items():
            rep_.residual(f"{tag} susy {name}", "deformed-susy-algebra", res["residual"], tol)

        rep_.residual(f"{tag} field strength = B", "field-strength-identity",
                      field_strength_residual(ctx).max_abs(), tol)

        x, y = coordinate("x", ctx), coordinate("y", ctx)
        pix, piy = kinematic_momenta(ctx)
        lam = gauge_coefficient(ctx)
        t = ThetaSeries.variable(ctx.K)
        eB, hb = ctx.charge * ctx.field, ctx.hbar
        expect_xy = AlgebraElement.function(ctx.scalar(t * 1j), ctx)
        expect_pi = AlgebraElement.function(1j * eB * hb, ctx)
        expect_xpx = AlgebraElement.function(ctx.scalar((lam * (2 * (1 - r) * eB)).shift(1) * (1j * hb) + 1j * hb), ctx)
        expect_ypy = AlgebraElement.function(ctx.scalar((lam * (2 * r * eB)).shift(1) * (1j * hb) + 1j * hb), ctx)
        for label, got, want in (
            ("[x,y] = i vartheta", star_commutator(x, y, ctx), expect_xy),
            ("[Pi_x,Pi_y] = i e hbar B", star_commutator(pix, piy, ctx), expect_pi),
            ("[x,Pi_x] closed form", star_commutator(x, pix, ctx), expect_xpx),
            ("[y,Pi_y] closed form", star_commutator(y, piy, ctx), expect_ypy),
        ):
            rep_.residual(f"{tag} {label}", "coordinate-momentum-commutators", _fs_residual(got, want), tol)

        f, g = _test_functions(ctx)
        other = cfg.context(round(1.0 - r, 12) if abs(r - 0.5) > 1e-12 else 0.0)
        p1 = poisson_limit(f, g, ctx)
        p2 = poisson_limit(f, g, other)
        direct = poisson_bracket(f.function_part()[0], g.function_part()[0])
        gap = max((p1 - p2).max_abs(), (p1 - direct).max_abs())
        rep_.residual(f"{tag} Poisson limit gauge independent", "poisson-limit", gap, tol)

        r2 = other.r
        lhs = gauge_transport(star_product(f, g, ctx), r, r2, ctx)
        rhs = star_product(gauge_transport(f, r, r2, ctx), gauge_transport(g, r, r2, ctx), other)
        rep_.residual(f"{tag} gauge transport homomorphism", "gauge-equivalence", _fs_residual(lhs, rhs), tol)

        lhs_op = rep(star_product(f, g, ctx), ctx)
        rhs_op = op_compose(rep(f, ctx), rep(g, ctx))
        rep_.residual(f"{tag} rep(F*G) = rep(F) rep(G)", "operator-representation",
                      operator_residual(lhs_op, rhs_op), tol)

        H1, H2 = hamiltonians(ctx)
        D1, D2 = hamiltonians_direct(ctx)
        rep_.residual(f"{tag} factorized = kinetic H1", "partner-hamiltonians", operator_residual(H1, D1), tol)
        rep_.residual(f"{tag} H2 - H1 = e hbar B / m", "partner-hamiltonians",
                      operator_residual(H2 - H1, scalar_operator(eB * hb / ctx.mass, ctx.K)), tol)
        for m in (0.0, 1.0):
            res = verify_annihilation(ground_state(ctx, m), ctx)
            rep_.residual(f"{tag} A psi0 = 0 (m_sep={m:g})", "ground-state-annihilation", res["residual"], tol)
    return rep_


def _landau_ground_reference(ctx: StarContext, m: float) -> ThetaSeries:
    eB, hb = ctx.charge * ctx.field, ctx.hbar
    return ctx.const(gaussian(a_yy=-eB / (2 * hb), b_x=m / hb, b_y=1j * m / hb))


def _symmetric_ground_reference(ctx: StarContext, m: float) -> ThetaSeries:
    """``exp[(m x + i m y) / (hbar Lbar) - eB rho^2 / (4 hbar Lbar^2)]``."""
    lb = lambda_bar(ctx)
    one = ThetaSeries.constant(1.0, ctx.K)
    inv = one / lb
    inv2 = inv * inv
    quad = inv2 * (-ctx.charge * ctx.field / (4 * ctx.hbar))
    return exp_series({"a_xx": quad, "a_yy": quad, "b_x": inv * (m / ctx.hbar), "b_y": inv * (1j * m / ctx.hbar)}, ctx.K)


def _series_gap(a: ThetaSeries, b: ThetaSeries) -> float:
    scale = max(1.0, max(c.max_abs() for c in a.coeffs), max(c.max_abs() for c in b.coeffs))
    return max((p - q).max_abs() for p, q in zip(a.coeffs, b.coeffs)) / scale


def ground_state_suite(cfg: RunConfig) -> Report:
    rep_ = Report("ground-state", cfg.parameters())
    rows = []
    for r in cfg.r:
        ctx = cfg.context(r)
        for m in (0.0, 1.0):
            psi = ground_state(ctx, m)
            res = verify_annihilation(psi, ctx)
            rep_.residual(f"r={r:g} m_sep={m:g} A psi0 = 0", "ground-state-annihilation", res["residual"], ctx.tol)
            rows.append({"r": r, "m_sep": m, "growth_x": psi.growth["x"], "growth_y": psi.growth["y"],
                         "residual_per_order": res["per_order"]})
            if abs(r) < 1e-12:
                rep_.residual(f"r=0 m_sep={m:g} Landau-gauge form", "landau-ground-state",
                              _series_gap(psi.series, _landau_ground_reference(ctx, m)), ctx.tol)
            if abs(r - 0.5) < 1e-12:
                rep_.residual(f"r=1/2 m_sep={m:g} symmetric-gauge form", "symmetric-ground-state",
                              _series_gap(psi.series, _symmetric_ground_reference(ctx, m)), ctx.tol)
    rep_.tables["ground_states"] = rows
    return rep_


def _symbolic_level_state(gauge: str, n: int, ctx: StarContext):
    return landau_state(n, 0.0, ctx) if gauge == LANDAU else symmetric_state(n, 0, ctx)


def spectrum_suite(cfg: RunConfig) -> Report:
    rep_ = Report("spectrum", cfg.parameters())
    unit = cfg.hbar * cfg.charge * cfg.field / cfg.mass
    if cfg.engine == "symbolic":
        r = 0.0 if cfg.gauge == LANDAU else 0.5
        ctx = cfg.context(r)
        H1, H2 = hamiltonians(ctx)
        rows = []
        for n in range(cfg.nmax + 1):
            try:
                psi = _symbolic_level_state(cfg.gauge, n, ctx)
                E1 = eigen_extract(H1, psi, ctx)
                E2 = None
                if n > 0:
                    E2 = eigen_extract(H2, partner_state(psi, ctx), ctx)
            except NotAnEigenstate as exc:
                raise NotAnEigenstate(f"level n={n}: {exc}", residual=exc.residual) from exc
            higher = max((abs(c) for c in E1.coeffs[1:]), default=0.0)
            rep_.add(f"E1[{n}] = {n} hbar eB/m", "spectrum-deformation-independent", E1[0].real,
                     ctx.tol, abs(E1[0] - unit * n) < ctx.tol * max(1.0, unit), expected=unit * n)
            rep_.residual(f"E1[{n}] higher orders vanish", "spectrum-deformation-independent", higher, ctx.tol)
            if E2 is not None:
                rep_.add(f"E2[{n}] = E1[{n}]", "partner-isospectrality", E2[0].real, ctx.tol,
                         abs(E2[0] - E1[0]) < ctx.tol * max(1.0, unit) and
                         max(abs(c) for c in E2.coeffs[1:]) < ctx.tol, expected=E1[0].real)
            rows.append({"n": n, "E1": E1[0].real, "E2": None if E2 is None else E2[0].real,
                         "E_susy": E1[0].real,
                         "state": "(0, psi0)" if n == 0 else "(A psi_n, psi_n)",
                         "higher_order_max": higher})
        rep_.notes.append("n=0 is the unpaired ground state (0, psi0); the Bosonic slot has no zero mode")
        rep_.tables["spectrum"] = rows
        return rep_

    rows = []
    tol = 1e-6 if cfg.gauge == LANDAU else 1e-4
    nev = cfg.nmax + 1
    ctx = cfg.context(0.0 if cfg.gauge == LANDAU else 0.5)
    if cfg.gauge == LANDAU:
        res = solve_landau_1d(0.0, ctx, cfg.grid(), nev)
        res.metadata["vartheta"] = 0.0
        rows += res.rows(expected_landau_levels(ctx, nev), tol, max(unit, 1e-300))
    else:
        for vt in cfg.vartheta:
            res = solve_symmetric_radial(0, ctx, vt, cfg.grid(), nev)
            rows += res.rows(expected_symmetric_levels(ctx, 0, nev), tol, unit)
    for row in rows:
        rep_.add(f"{row['gauge']} vartheta={row['vartheta']:g} n={row['n']}", "spectrum-deformation-independent",
                 row["energy"], tol, row["pass"], expected=unit * row["n"])
    rep_.tables["spectrum"] = rows
    return rep_


def witten_suite(cfg: RunConfig) -> Report:
    rep_ = Report("witten", cfg.parameters())
    rows = []
    for r in cfg.r:
        for vt in cfg.vartheta:
            ctx = cfg.context(r, vt)
            wa = witten_analysis(ctx)
            label = f"r={r:g} vartheta={vt:g}"
            if not wa.defined:
                rep_.add(f"{label} index", "witten-index", "undefined", None, False, note=wa.diagnostic)
            else:
                rep_.add(f"{label} index", "witten-index", wa.index, None, wa.index == -1, expected=-1)
            for op, sols in (("A", wa.kernel_A), ("A^dag", wa.kernel_Adag)):
                for s in sols:
                    rows.append({"r": r, "vartheta": vt, "operator": op, "m_sep": s.sep_const,
                                 "growth_x": s.growth["x"], "growth_y": s.growth["y"],
                                 "normalizable": s.normalizable})
    rep_.tables["kernels"] = rows
    return rep_


def sweep_suite(cfg: RunConfig) -> Report:
    rep_ = Report("sweep", cfg.parameters())
    ctx = cfg.context(0.5)
    res = invariance_sweep(ctx, cfg.vartheta if len(cfg.vartheta) > 1 else [0.0, 0.5, 2.0],
                           [r for r in cfg.r if r in (0.0, 0.5, 1.0)] or [0.0, 0.5],
                           nev=cfg.nmax + 1, grid=cfg.grid())
    rep_.add("spectra coincide across gauges and vartheta", "spectrum-deformation-independent",
             res["max_deviation"], res["tolerance"], res["pass"])
    rep_.tables["sweep"] = [{"r": row["r"], "gauge": row["gauge"], "vartheta": row["vartheta"],
                             "eigenvalues": row["eigenvalues"]} for row in res["rows"]]
    return rep_


def compare_suite(cfg: RunConfig) -> Report:
    theta = cfg.vartheta[0]
    B = cfg.field
    rep_ = Report("compare", {"B": B, "theta": theta, "units": "hbar=m=e=1"})
    rows = comparison_report(B=B, theta=theta)
    by = {(row["formalism"], row["gauge"]): row for row in rows}
    tol = 1e-12
    sw_sym = by[("SW1", SYMMETRIC)]["ground_energy"]
    rep_.add("SW1 symmetric ground = -B^2 theta/8", "sw-symmetric-ground-energy", sw_sym, tol,
             abs(sw_sym + B * B * theta / 8) < tol, expected=-B * B * theta / 8)
    rep_.add("SW1 landau ground = 0", "sw-landau-ground-energy", by[("SW1", LANDAU)]["ground_energy"], tol,
             abs(by[("SW1", LANDAU)]["ground_energy"]) < tol, expected=0.0)
    for g in (LANDAU, SYMMETRIC):
        row = by[("Bopp", g)]
        rep_.add(f"Bopp {g} ground = 0", "bopp-ground-energy", row["ground_energy"], tol,
                 abs(row["ground_energy"]) < tol, expected=0.0)
        row = by[("this-work", g)]
        rep_.add(f"this work {g} ground = 0, no flags", "spectrum-deformation-independent", row["ground_energy"],
                 tol, abs(row["ground_energy"]) < tol and not row["theta_dependent"] and not row["gauge_dependent"],
                 expected=0.0)
    rep_.add("Bopp landau levels theta independent", "bopp-landau-spectrum",
             str(by[("Bopp", LANDAU)]["theta_dependent"]), None, not by[("Bopp", LANDAU)]["theta_dependent"])
    rep_.tables["comparison"] = rows
    return rep_


SUITES: Dict[str, Callable[[RunConfig], Report]] = {
    "verify": verify_suite,
    "spectrum": spectrum_suite,
    "ground-state": ground_state_suite,
    "witten": witten_suite,
    "sweep": sweep_suite,
    "compare": compare_suite,
}


# -- argument handling ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncsusy", description=__doc__.split("\n\n")[0].strip())
    ap.add_argument("command", choices=sorted(SUITES))
    ap.add_argument("--config", help=f"INI file with a [{SECTION}] section (fallback: ${ENV_VAR})")
    ap.add_argument("--r", help="gauge parameter(s), comma separated")
    ap.add_argument("--vartheta", help="deformation value(s), comma separated")
    ap.add_argument("--order", type=int, help="truncation order K")
    ap.add_argument("--engine", choices=["symbolic", "numeric"])
    ap.add_argument("--gauge", choices=[LANDAU, SYMMETRIC])
    ap.add_argument("--nmax", type=int)
    ap.add_argument("--grid-n", type=int, dest="grid_n")
    ap.add_argument("--grid-l", type=float, dest="grid_l")
    ap.add_argument("--tol", type=float)
    ap.add_argument("--hbar", type=float)
    ap.add_argument("--mass", type=float)
    ap.add_argument("--charge", type=float)
    ap.add_argument("--field", "--B", type=float, dest="field")
    ap.add_argument("--out", help="directory for JSON, text and CSV output")
    ap.add_argument("--json", action="store_true", help="print JSON instead of text")
    return ap


def resolve_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    cfg = load_config(args.config or environ.get(ENV_VAR))
    updates = {}
    for key in ("order", "engine", "gauge", "nmax", "grid_n", "grid_l", "tol", "hbar", "mass", "charge",
                "field", "out"):
        v = getattr(args, key, None)
        if v is not None:
            updates[key] = v
    for key in ("r", "vartheta"):
        v = getattr(args, key, None)
        if v is not None:
            try:
                updates[key] = _coerce(key, v)
            except ValueError as exc:
                raise ConfigError(f"bad --{key}: {v!r}") from exc
    return replace(cfg, **updates).validate()


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        report = SUITES[args.command](cfg)
    except NCSusyError as exc:
        print(f"{args.command} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(report.to_json() if args.json else report.to_text())
    if cfg.out:
        report.write(Path(cfg.out), args.command.replace("-", "_"))
    if not report.passed:
        for c in report.failures():
            print(f"FAILED: {c.id}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
