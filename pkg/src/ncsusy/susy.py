"""
Supersymmetric structure over the star algebra.

The superpotential ``A = i Pi_x - Pi_y`` factorizes the two partner
Hamiltonians, ``H2 = A A^dag / 2m`` (Bosonic, upper slot) and
``H1 = A^dag A / 2m`` (Fermionic, lower slot). Everything is represented as
:class:`DiffOperator` objects acting on :class:`State` series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Sequence

import numpy as np

from .errors import GaugeMismatch, NotAnEigenstate, UnsupportedShape
from .exppoly import ExpPoly, QuadExp, X, Y
from .polynomials import hermite, laguerre
from .series import ThetaSeries, ts_exp
from .star import (
    AlgebraElement,
    DiffOperator,
    StarContext,
    fs_deriv,
    gauge_coefficient,
    kinematic_momenta,
    op_apply,
    op_compose,
    rep,
    star_product,
)
from .state import GROWING, NEUTRAL, State, SusyState, classify_direction, zero_state

GAUGE_TOL = 1e-12


# -- superpotential and adjoint ---------------------------------------------------

def superpotential(ctx: StarContext) -> AlgebraElement:
    """``i (p_x - e A_x) + (-p_y + e A_y)``."""
    pix, piy = kinematic_momenta(ctx)
    return pix * 1j - piy


def superpotential_op(ctx: StarContext) -> DiffOperator:
    return rep(superpotential(ctx), ctx)


def adjoint(P: DiffOperator, ctx: StarContext | None = None) -> DiffOperator:
    """Formal adjoint: ``(c dx^a dy^b)^dag = (-1)^(a+b) dx^a dy^b o conj(c)``."""
    out = DiffOperator({}, P.K)
    for (a, b), c in P.terms.items():
        d = DiffOperator.derivative(a, b, P.K, (-1.0) ** (a + b))
        out = out + op_compose(d, DiffOperator.multiplication(c.conj()))
    return out


def scalar_operator(c, K: int) -> DiffOperator:
    return DiffOperator.identity(K).scale(c)


# -- 2x2 operator matrices ----------------------------------------------------------

class Mat2:
    """``[[a, b], [c, d]]`` with :class:`DiffOperator` entries."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: DiffOperator, b: DiffOperator, c: DiffOperator, d: DiffOperator):
        if len({a.K, b.K, c.K, d.K}) != 1:
            raise ValueError("Mat2 entries must share the truncation order")
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def K(self) -> int:
        return self.a.K

    @classmethod
    def zero(cls, K: int) -> "Mat2":
        z = DiffOperator({}, K)
        return cls(z, z, z, z)

    @classmethod
    def diag(cls, upper: DiffOperator, lower: DiffOperator) -> "Mat2":
        z = DiffOperator({}, upper.K)
        return cls(upper, z, z, lower)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __add__(self, o: "Mat2") -> "Mat2":
        return Mat2(*(p + q for p, q in zip(self.entries(), o.entries())))

    def __sub__(self, o: "Mat2") -> "Mat2":
        return Mat2(*(p - q for p, q in zip(self.entries(), o.entries())))

    def scale(self, c) -> "Mat2":
        return Mat2(*(p.scale(c) for p in self.entries()))

    def __matmul__(self, o: "Mat2") -> "Mat2":
        a, b, c, d = self.entries()
        e, f, g, h = o.entries()
        return Mat2(a @ e + b @ g, a @ f + b @ h, c @ e + d @ g, c @ f + d @ h)

    def max_abs(self) -> float:
        return max(p.max_abs() for p in self.entries())

    def apply(self, psi: SusyState) -> SusyState:
        up, lo = psi.bosonic.series, psi.fermionic.series
        return SusyState(
            State(op_apply(self.a, up) + op_apply(self.b, lo)),
            State(op_apply(self.c, up) + op_apply(self.d, lo)),
        )


def anticommutator(P: Mat2, Q: Mat2) -> Mat2:
    return P @ Q + Q @ P


def commutator(P: Mat2, Q: Mat2) -> Mat2:
    return P @ Q - Q @ P


def supercharges(ctx: StarContext):
    """``(Q, Q^dag)`` with ``A / sqrt(2m)`` in the upper-right slot of ``Q``."""
    A = superpotential_op(ctx)
    s = 1.0 / math.sqrt(2 * ctx.mass)
    z = DiffOperator({}, ctx.K)
    Q = Mat2(z, A.scale(s), z, z)
    Qd = Mat2(z, z, adjoint(A).scale(s), z)
    return Q, Qd


def witten_operator(ctx: StarContext) -> Mat2:
    """Grading ``(-1)^F``: ``+1`` on Bosonic, ``-1`` on Fermionic states."""
    one = DiffOperator.identity(ctx.K)
    return Mat2.diag(one, one.scale(-1.0))


# -- partner Hamiltonians -------------------------------------------------------------

class PartnerPair(NamedTuple):
    H1: DiffOperator
    H2: DiffOperator


def hamiltonians(ctx: StarContext) -> PartnerPair:
    """Factorized partner Hamiltonians ``(A^dag A, A A^dag) / 2m``."""
    A = superpotential_op(ctx)
    Ad = adjoint(A)
    s = 1.0 / (2 * ctx.mass)
    return PartnerPair((Ad @ A).scale(s), (A @ Ad).scale(s))


def hamiltonians_direct(ctx: StarContext) -> PartnerPair:
    """Kinetic form ``(Pi_x * Pi_x + Pi_y * Pi_y -+ e hbar B) / 2m``, built with the star product."""
    pix, piy = kinematic_momenta(ctx)
    kinetic = rep(star_product(pix, pix, ctx) + star_product(piy, piy, ctx), ctx)
    spin = scalar_operator(ctx.charge * ctx.hbar * ctx.field, ctx.K)
    s = 1.0 / (2 * ctx.mass)
    return PartnerPair((kinetic - spin).scale(s), (kinetic + spin).scale(s))


def susy_hamiltonian(ctx: StarContext, direct: bool = True) -> Mat2:
    H1, H2 = hamiltonians_direct(ctx) if direct else hamiltonians(ctx)
    return Mat2.diag(H2, H1)


def operator_residual(P, Q=None) -> float:
    """``|P - Q|`` relative to the larger magnitude, floored at one."""
    if Q is None:
        return P.max_abs()
    diff = (P - Q).max_abs()
    return diff / max(1.0, P.max_abs(), Q.max_abs())


def susy_algebra_check(ctx: StarContext) -> Dict[str, dict]:
    """Residuals of the eight graded relations, through order ``K``.

    ``H`` is assembled from the kinetic form, so ``{Q, Q^dag} = H`` compares
    two independent constructions.
    """
    Q, Qd = supercharges(ctx)
    H = susy_hamiltonian(ctx, direct=True)
    W = witten_operator(ctx)
    one = Mat2.diag(DiffOperator.identity(ctx.K), DiffOperator.identity(ctx.K))
    scale = max(1.0, H.max_abs())
    rel = {
        "{Q,Q}=0": anticommutator(Q, Q).max_abs() / scale,
        "{Qd,Qd}=0": anticommutator(Qd, Qd).max_abs() / scale,
        "{Q,Qd}=H": (anticommutator(Q, Qd) - H).max_abs() / scale,
        "[H,Q]=0": commutator(H, Q).max_abs() / scale,
        "[H,Qd]=0": commutator(H, Qd).max_abs() / scale,
        "[W,H]=0": commutator(W, H).max_abs() / scale,
        "{W,Q}=0": anticommutator(W, Q).max_abs() / scale,
        "W^2=1": (W @ W - one).max_abs(),
    }
    return {k: {"residual": v, "tolerance": ctx.tol, "pass": v < ctx.tol} for k, v in rel.items()}


# -- ground state ----------------------------------------------------------------------

def ground_coefficients(ctx: StarContext):
    """Scalar series ``(M, N, S)`` with ``rep(A) = i M y + hbar S dx + N x + i hbar S dy``."""
    lam = gauge_coefficient(ctx)
    ehB = ctx.charge * ctx.hbar * ctx.field
    M = lam * (2 * (1 - ctx.r) * ehB)
    N = lam * (2 * ctx.r * ehB)
    S = (lam * (2 * ctx.r * (1 - ctx.r) * ctx.charge * ctx.field)).shift(1) + 1.0
    return M, N, S


def _split_exponent(coeffs: Dict[str, ThetaSeries], K: int):
    """Order-zero exponent as a QuadExp plus the remaining polynomial series."""
    mon = {"a_xx": X * X, "a_yy": Y * Y, "a_xy": X * Y, "b_x": X, "b_y": Y}
    q0 = QuadExp(**{k: s.coeffs[0] for k, s in coeffs.items()})
    rest = [ExpPoly()]
    for n in range(1, K + 1):
        f = ExpPoly()
        for k, s in coeffs.items():
            if s.coeffs[n] != 0:
                f = f + mon[k] * s.coeffs[n]
        rest.append(f)
    return q0, ThetaSeries(rest)


def exp_series(coeffs: Dict[str, ThetaSeries], K: int, prefactor: ThetaSeries | None = None) -> ThetaSeries:
    """``prefactor * exp(quadratic form with series coefficients)`` as a function series.

    The deformation-dependent part of the exponent is Taylor expanded into
    polynomial prefactors, so exponent keys stay constant.
    """
    q0, rest = _split_exponent(coeffs, K)
    body = ts_exp(rest, ExpPoly.const(1.0))
    if prefactor is not None:
        body = prefactor * body
    g = ExpPoly.exp(q0)
    return body.map(lambda f: f * g)


def ground_state(ctx: StarContext, m_sep: float = 0.0) -> State:
    """Zero mode of ``rep(A)``: ``exp[(m x + i m y - N x^2/2 - M y^2/2) / (hbar S)]``."""
    M, N, S = ground_coefficients(ctx)
    inv = ThetaSeries.constant(1.0, ctx.K) / (S * ctx.hbar)
    coeffs = {
        "a_xx": -0.5 * N * inv,
        "a_yy": -0.5 * M * inv,
        "b_x": m_sep * inv,
        "b_y": 1j * m_sep * inv,
    }
    return State(exp_series(coeffs, ctx.K))


def verify_annihilation(psi: State, ctx: StarContext) -> dict:
    """Per-order magnitude of ``rep(A) psi``, relative to the magnitude of ``psi``."""
    out = op_apply(superpotential_op(ctx), psi.series)
    scale = max(1.0, psi.max_abs())
    per_order = [c.max_abs() / scale for c in out.coeffs]
    return {"per_order": per_order, "residual": max(per_order), "tolerance": ctx.tol,
            "pass": max(per_order) < ctx.tol}


# -- excited states --------------------------------------------------------------------

def _require_gauge(ctx: StarContext, allowed: Sequence[float], what: str):
    if not any(abs(ctx.r - a) <= GAUGE_TOL for a in allowed):
        raise GaugeMismatch(f"{what} needs r in {list(allowed)}, got r={ctx.r}")


def landau_state(n: int, k: float, ctx: StarContext) -> State:
    """Landau-level state of the Fermionic Hamiltonian in a Landau gauge.

    At ``r = 0`` the potential is ``(-B y, 0)``; the state is a plane wave
    ``exp(i k x / hbar)`` times a Hermite function of ``y`` centred at
    ``-k / eB``. At ``r = 1`` the roles of ``x`` and ``y`` swap and the centre
    is ``+k / eB``. Both are exact: the operator is deformation-free there.
    """
    if n < 0:
        raise ValueError("Landau level index must be non-negative")
    _require_gauge(ctx, (0.0, 1.0), "landau_state")
    eB = ctx.charge * ctx.field
    if eB <= 0:
        raise ValueError("Landau states need eB > 0")
    alpha = eB / (2 * ctx.hbar)
    scale = math.sqrt(eB / ctx.hbar)
    if abs(ctx.r) <= GAUGE_TOL:
        c = -k / eB
        gauss = QuadExp(a_yy=-alpha, b_y=2 * alpha * c, c0=-alpha * c * c, b_x=1j * k / ctx.hbar)
        u = (Y - c) * scale
    else:
        c = k / eB
        gauss = QuadExp(a_xx=-alpha, b_x=2 * alpha * c, c0=-alpha * c * c, b_y=1j * k / ctx.hbar)
        u = (X - c) * scale
    f = hermite(n, u) * ExpPoly.exp(gauss)
    return State(ctx.const(f))


def lambda_bar(ctx: StarContext) -> ThetaSeries:
    """Deformation factor ``1 + e t B lam / 2`` of the symmetric gauge, as a series."""
    lam = gauge_coefficient(ctx.replace(r=0.5))
    return (lam * (0.5 * ctx.charge * ctx.field)).shift(1) + 1.0


def symmetric_state(n_rho: int, m_l: int, ctx: StarContext, width: str = "consistent") -> State:
    """Landau-level state in the symmetric gauge.

    ``(x +- i y)^|m_l| L_{n_rho}^{|m_l|}(alpha rho^2) exp(-alpha rho^2 / 2)``
    with ``alpha = eB / (2 hbar Lbar^2)``, the width that diagonalizes the
    Fermionic Hamiltonian. ``width="literal"`` uses ``alpha = Lbar eB / (2 hbar)``
    instead; that form is only an eigenstate at zero deformation.
    """
    if n_rho < 0:
        raise ValueError("radial index must be non-negative")
    _require_gauge(ctx, (0.5,), "symmetric_state")
    K = ctx.K
    lb = lambda_bar(ctx)
    base = ctx.charge * ctx.field / (2 * ctx.hbar)
    if width == "consistent":
        alpha = ThetaSeries.constant(base, K) / (lb * lb)
    elif width == "literal":
        alpha = lb * base
    else:
        raise ValueError("width must be 'consistent' or 'literal'")
    rho2 = X * X + Y * Y
    u = ThetaSeries([rho2 * complex(a) for a in alpha.coeffs])
    am = abs(m_l)
    ang = (X + 1j * Y) if m_l >= 0 else (X - 1j * Y)
    pref = laguerre(n_rho, float(am), u).map(lambda f: f * ang**am)
    half = alpha * -0.5
    coeffs = {"a_xx": half, "a_yy": half}
    return State(exp_series(coeffs, K, prefactor=pref))


def partner_state(psi1: State, ctx: StarContext) -> State:
    """Bosonic partner ``A * psi1``."""
    return State(op_apply(superpotential_op(ctx), psi1.series))


# -- eigenvalues --------------------------------------------------------------------------

def _leading_key(f: ExpPoly):
    big = f.max_abs()
    for k, c in f.sorted_terms():
        if abs(c) >= big * (1 - 1e-12):
            return k, c
    raise ValueError("empty function")


def eigen_extract(P: DiffOperator, psi: State, ctx: StarContext) -> ThetaSeries:
    """Scalar series ``E`` with ``P psi = E psi``, validated on every term.

    The trial ratio is read off the largest order-zero term of ``psi`` (ties
    broken by canonical order) and solved order by order.
    """
    series = psi.series if isinstance(psi, State) else psi
    if series.coeffs[0].is_zero:
        raise ValueError("eigen_extract needs a state with a nonzero order-zero part")
    phi = op_apply(P, series)
    key, c = _leading_key(series.coeffs[0])
    E: List[complex] = []
    for n in range(ctx.K + 1):
        acc = phi.coeffs[n].terms.get(key, 0j)
        for j in range(n):
            acc -= E[j] * series.coeffs[n - j].terms.get(key, 0j)
        E.append(acc / c)
    E_series = ThetaSeries(E)
    resid = phi - E_series * series
    scale = max(1.0, max(f.max_abs() for f in series.coeffs), max(f.max_abs() for f in phi.coeffs))
    r = max(f.max_abs() for f in resid.coeffs) / scale
    if r > ctx.tol:
        raise NotAnEigenstate(f"relative residual {r:.3e} exceeds tolerance {ctx.tol:.1e}", residual=r)
    return E_series


# -- kernels and the Witten index ----------------------------------------------------------

@dataclass
class KernelSolution:
    sep_const: float
    x_exp: QuadExp
    y_exp: QuadExp
    growth: Dict[str, str]
    normalizable: bool

    def exponent(self) -> QuadExp:
        return self.x_exp + self.y_exp


DEFAULT_PROBES = (0.0, 1.0, -1.0, 0.5)


def _scalar_of(f: ExpPoly, what: str) -> complex:
    if not f.is_polynomial() or any((i, j) != (0, 0) for (_, i, j) in f.terms):
        raise UnsupportedShape(f"{what} must be constant")
    return f.terms.get((QuadExp(), 0, 0), 0j)


def _linear_parts(f: ExpPoly):
    allowed = {(0, 0), (1, 0), (0, 1)}
    if not f.is_polynomial() or any((i, j) not in allowed for (_, i, j) in f.terms):
        raise UnsupportedShape("multiplicative part must be linear in x and y")
    z = QuadExp()
    return f.terms.get((z, 1, 0), 0j), f.terms.get((z, 0, 1), 0j), f.terms.get((z, 0, 0), 0j)


def operator_shape(P: DiffOperator, vartheta: float):
    """Read ``(alpha_x, alpha_y, c0, c_x, c_y)`` from ``(alpha_x x + alpha_y y + c0) + c_x dx + c_y dy``."""
    if any(k not in {(0, 0), (1, 0), (0, 1)} for k in P.terms):
        raise UnsupportedShape("kernel solver needs a first-order operator")
    ev = {k: s.evaluate(vartheta) for k, s in P.terms.items()}
    zero = ExpPoly()
    ax, ay, c0 = _linear_parts(ev.get((0, 0), zero))
    cx = _scalar_of(ev.get((1, 0), zero), "dx coefficient")
    cy = _scalar_of(ev.get((0, 1), zero), "dy coefficient")
    if abs(cx) == 0 or abs(cy) == 0:
        raise UnsupportedShape("both derivative coefficients must be nonzero for separation")
    return ax, ay, c0, cx, cy


def kernel_solve(P: DiffOperator, ctx: StarContext, probes: Sequence[float] = DEFAULT_PROBES,
                 tol: float = 1e-12) -> List[KernelSolution]:
    """Separable zero modes ``X(x) Y(y)`` of a first-order operator at ``ctx.vartheta``.

    With ``c_x X'/X + alpha_x x = m`` and ``c_y Y'/Y + alpha_y y + c0 = -m``
    both factors are Gaussians in closed form.
    """
    ax, ay, c0, cx, cy = operator_shape(P, ctx.vartheta)
    out = []
    for m in probes:
        xq = QuadExp(a_xx=-ax / (2 * cx), b_x=m / cx)
        yq = QuadExp(a_yy=-ay / (2 * cy), b_y=-(m + c0) / cy)
        growth = {"x": classify_direction(xq.a_xx, xq.b_x, tol),
                  "y": classify_direction(yq.a_yy, yq.b_y, tol)}
        out.append(KernelSolution(m, xq, yq, growth, GROWING not in growth.values()))
    return out


def kernel_families(solutions: Sequence[KernelSolution]) -> int:
    """A continuously degenerate family counts once when any member is admissible."""
    return int(any(s.normalizable for s in solutions))


@dataclass
class WittenAnalysis:
    index: int
    defined: bool
    kernel_A: List[KernelSolution] = field(default_factory=list)
    kernel_Adag: List[KernelSolution] = field(default_factory=list)
    diagnostic: str = ""

    @property
    def dim_ker_A(self) -> int:
        return kernel_families(self.kernel_A)

    @property
    def dim_ker_Adag(self) -> int:
        return kernel_families(self.kernel_Adag)


def witten_analysis(ctx: StarContext) -> WittenAnalysis:
    A = superpotential_op(ctx)
    kA = kernel_solve(A, ctx)
    kAd = kernel_solve(adjoint(A), ctx)
    if ctx.charge * ctx.field == 0:
        return WittenAnalysis(0, False, kA, kAd,
                              "no magnetic confinement (eB = 0): both kernels are plane-wave-like; index undefined")
    na, nad = kernel_families(kA), kernel_families(kAd)
    return WittenAnalysis(nad - na, True, kA, kAd, "")


def witten_index(ctx: StarContext) -> int:
    """``dim ker A^dag - dim ker A``; 0 when undefined (see :func:`witten_analysis`)."""
    return witten_analysis(ctx).index


def susy_spectrum_value(n: int, ctx: StarContext) -> float:
    """Closed-form ``hbar e B n / m``."""
    return ctx.hbar * ctx.charge * ctx.field * n / ctx.mass
