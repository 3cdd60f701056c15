"""
Gauge-parameterized star product on truncated series of ExpPoly functions.

Conventions
-----------
A function series is a :class:`ThetaSeries` whose coefficients are
:class:`ExpPoly` objects. For gauge parameter ``r`` the product reads

    F * G = sum_{m,n} a**m/m! * b**n/n! * (dx^m dy^n F)(dy^m dx^n G)

with ``a = -i(r-1) t`` and ``b = -i r t``, every power of ``t`` being folded
into the series layer and truncated at the common order ``K``.

Elements carrying momenta are kept normal ordered (functions left, momenta
right) and multiplied through their operator representation, where each
momentum acts as ``-i hbar d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

from .errors import MismatchedTruncation, NegativeDiscriminant
from .exppoly import ExpPoly, X, Y
from .series import ThetaSeries, ts_inv, ts_sqrt

Key = Tuple[int, int]


@dataclass(frozen=True)
class StarContext:
    """Physical constants, gauge parameter and truncation for one evaluation point.

    ``vartheta`` is only used where a concrete deformation value is needed
    (discriminant validation, kernel classification); symbolic work keeps the
    deformation formal.
    """

    hbar: float = 1.0
    mass: float = 1.0
    charge: float = 1.0
    field: float = 1.0
    r: float = 0.5
    K: int = 4
    tol: float = 1e-10
    vartheta: float = 0.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if self.charge < 0 or self.field < 0:
            raise ValueError("charge and field must be non-negative")
        if not isinstance(self.K, int) or self.K < 0:
            raise ValueError("truncation order K must be a non-negative integer")
        if self.discriminant(self.vartheta) <= 0:
            raise NegativeDiscriminant(
                f"hbar^2 - 4r(r-1) e hbar B vartheta = {self.discriminant(self.vartheta):g} <= 0"
            )

    def discriminant(self, vartheta: float) -> float:
        r = self.r
        return self.hbar**2 - 4 * r * (r - 1) * self.charge * self.hbar * self.field * vartheta

    def replace(self, **kw) -> "StarContext":
        d = dict(self.__dict__)
        d.update(kw)
        return StarContext(**d)

    # series helpers
    def zero(self) -> ThetaSeries:
        return ThetaSeries([ExpPoly()] * (self.K + 1))

    def const(self, f) -> ThetaSeries:
        """Series with ``f`` (ExpPoly or number) at order zero."""
        if not isinstance(f, ExpPoly):
            f = ExpPoly.const(f)
        return ThetaSeries([f] + [ExpPoly()] * self.K)

    def scalar(self, s: ThetaSeries, f=None) -> ThetaSeries:
        """Lift a scalar series to a function series, optionally times ``f``."""
        f = ExpPoly.const(1.0) if f is None else f
        if s.K != self.K:
            raise MismatchedTruncation(f"series order {s.K} != context order {self.K}")
        return ThetaSeries([f * complex(c) for c in s.coeffs])

    def theta(self) -> ThetaSeries:
        return ThetaSeries.variable(self.K)


# -- function-series helpers ---------------------------------------------------

def fs_deriv(F: ThetaSeries, nx: int, ny: int) -> ThetaSeries:
    if nx == 0 and ny == 0:
        return F
    return F.map(lambda f: f.deriv("x", nx).deriv("y", ny))


def fs_max_abs(F: ThetaSeries) -> float:
    return max(f.max_abs() for f in F.coeffs)


def fs_is_zero(F: ThetaSeries) -> bool:
    return all(f.is_zero for f in F.coeffs)


def _check_K(K: int, *series: ThetaSeries):
    for s in series:
        if s.K != K:
            raise MismatchedTruncation(f"truncation orders differ: {s.K} != {K}")


def _bidiff_weights(ctx: StarContext):
    """Weights ``a**m/m! * b**n/n!`` (without the t power) for ``m + n <= K``."""
    a = -1j * (ctx.r - 1)
    b = -1j * ctx.r
    out = {}
    for m in range(ctx.K + 1):
        for n in range(ctx.K + 1 - m):
            out[(m, n)] = a**m / math.factorial(m) * b**n / math.factorial(n)
    return out


# -- algebra elements and operators --------------------------------------------

class _KeyedSeries:
    """Shared container logic: ``{key: function series}`` with a common order."""

    __slots__ = ("terms", "K")

    def __init__(self, terms: Dict[Key, ThetaSeries], K: int):
        clean = {}
        for k, s in terms.items():
            _check_K(K, s)
            if not fs_is_zero(s):
                clean[k] = s
        self.terms = clean
        self.K = K

    def _like(self, terms):
        return type(self)(terms, self.K)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if other.K != self.K:
            raise MismatchedTruncation(f"truncation orders differ: {self.K} != {other.K}")
        t = dict(self.terms)
        for k, s in other.terms.items():
            t[k] = t[k] + s if k in t else s
        return self._like(t)

    def __neg__(self):
        return self._like({k: -s for k, s in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_KeyedSeries":
        """Multiply by a number or by a scalar ThetaSeries."""
        if isinstance(c, ThetaSeries):
            return self._like({k: c * s for k, s in self.terms.items()})
        return self._like({k: s * complex(c) for k, s in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, (int, float, complex)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max((fs_max_abs(s) for s in self.terms.values()), default=0.0)

    def max_abs_by_order(self):
        """Largest coefficient magnitude at each order of the deformation."""
        out = [0.0] * (self.K + 1)
        for s in self.terms.values():
            for k, f in enumerate(s.coeffs):
                out[k] = max(out[k], f.max_abs())
        return out

    def close(self, other, tol: float = 1e-10) -> bool:
        """Relative comparison against the larger of the two magnitudes."""
        diff = (self - other).max_abs()
        scale = max(self.max_abs(), other.max_abs())
        return diff <= tol * scale

    def is_zero(self) -> bool:
        return not self.terms

    def __getitem__(self, key: Key) -> ThetaSeries:
        s = self.terms.get(key)
        if s is None:
            return ThetaSeries([ExpPoly()] * (self.K + 1))
        return s

    def keys(self):
        return sorted(self.terms)

    def __repr__(self):
        body = ", ".join(f"{k}: {self.terms[k]!r}" for k in self.keys())
        return f"{type(self).__name__}({{{body}}}, K={self.K})"


class AlgebraElement(_KeyedSeries):
    """Normal-ordered element ``sum f_ab(x, y; t) p_x^a p_y^b``."""

    @classmethod
    def function(cls, F, ctx: StarContext) -> "AlgebraElement":
        if not isinstance(F, ThetaSeries):
            F = ctx.const(F)
        return cls({(0, 0): F}, ctx.K)

    @classmethod
    def momentum(cls, a: int, b: int, ctx: StarContext, coeff=None) -> "AlgebraElement":
        F = ctx.const(1.0) if coeff is None else coeff
        if not isinstance(F, ThetaSeries):
            F = ctx.const(F)
        return cls({(a, b): F}, ctx.K)

    @classmethod
    def zero(cls, ctx: StarContext) -> "AlgebraElement":
        return cls({}, ctx.K)

    def is_function(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def function_part(self) -> ThetaSeries:
        return self[(0, 0)]


class DiffOperator(_KeyedSeries):
    """Normal-ordered operator ``sum c_ab(x, y; t) dx^a dy^b``."""

    @classmethod
    def identity(cls, K: int) -> "DiffOperator":
        return cls.multiplication(ThetaSeries.constant(ExpPoly.const(1.0), K))

    @classmethod
    def multiplication(cls, F: ThetaSeries) -> "DiffOperator":
        return cls({(0, 0): F}, F.K)

    @classmethod
    def derivative(cls, a: int, b: int, K: int, coeff: complex = 1.0) -> "DiffOperator":
        return cls({(a, b): ThetaSeries.constant(ExpPoly.const(coeff), K)}, K)

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        return op_compose(self, other)

    def __call__(self, psi: ThetaSeries) -> ThetaSeries:
        return op_apply(self, psi)

    def order(self) -> int:
        return max((a + b for a, b in self.terms), default=0)


def _coerce(F, ctx: StarContext) -> AlgebraElement:
    if isinstance(F, AlgebraElement):
        if F.K != ctx.K:
            raise MismatchedTruncation(f"element order {F.K} != context order {ctx.K}")
        return F
    return AlgebraElement.function(F, ctx)


# -- products ------------------------------------------------------------------

def _bidiff_star(F: ThetaSeries, G: ThetaSeries, ctx: StarContext) -> ThetaSeries:
    _check_K(ctx.K, F, G)
    out = ctx.zero()
    for (m, n), w in _bidiff_weights(ctx).items():
        left = fs_deriv(F, m, n)
        right = fs_deriv(G, n, m)
        if fs_is_zero(left) or fs_is_zero(right):
            continue
        out = out + (left * right * w).shift(m + n)
    return out


def star_product(F, G, ctx: StarContext) -> AlgebraElement:
    """``F *^r G`` for function series or normal-ordered algebra elements."""
    F = _coerce(F, ctx)
    G = _coerce(G, ctx)
    if F.is_function() and G.is_function():
        return AlgebraElement.function(_bidiff_star(F.function_part(), G.function_part(), ctx), ctx)
    return unrep(op_compose(rep(F, ctx), rep(G, ctx)), ctx)


def star_commutator(F, G, ctx: StarContext) -> AlgebraElement:
    return star_product(F, G, ctx) - star_product(G, F, ctx)


def poisson_limit(F, G, ctx: StarContext) -> ExpPoly:
    """First-order coefficient of ``[F, G]_* / i``; the Poisson bracket of the order-zero parts."""
    c = star_commutator(F, G, ctx).function_part()
    if ctx.K < 1:
        raise ValueError("the Poisson limit needs truncation order K >= 1")
    return c[1] * (-1j)


def poisson_bracket(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    """Direct formula ``df/dx dg/dy - df/dy dg/dx``."""
    return f.deriv("x") * g.deriv("y") - f.deriv("y") * g.deriv("x")


def gauge_transport(F, r: float, r2: float, ctx: StarContext) -> AlgebraElement:
    """``exp(i (r - r2) t dx dy) F``, mapping the ``r`` product onto the ``r2`` product."""
    F = _coerce(F, ctx)
    if not F.is_function():
        raise ValueError("gauge_transport acts on function elements only")
    f = F.function_part()
    c = 1j * (r - r2)
    out = ctx.zero()
    for n in range(ctx.K + 1):
        d = fs_deriv(f, n, n)
        if fs_is_zero(d):
            break
        out = out + (d * (c**n / math.factorial(n))).shift(n)
    return AlgebraElement.function(out, ctx)


# -- gauge fields ----------------------------------------------------------------

def gauge_coefficient(ctx: StarContext) -> ThetaSeries:
    """``1 / (hbar + sqrt(hbar^2 - 4 r (r-1) e hbar B t))`` as a scalar series."""
    K, hb, r = ctx.K, ctx.hbar, ctx.r
    t = ThetaSeries.variable(K)
    disc = ThetaSeries.constant(hb**2, K) - t * (4 * r * (r - 1) * ctx.charge * hb * ctx.field)
    return ts_inv(ThetaSeries.constant(hb, K) + ts_sqrt(disc))


def gauge_fields(ctx: StarContext) -> Tuple[AlgebraElement, AlgebraElement]:
    """Exact vector potential ``(A_x, A_y)`` through order ``K``."""
    lam = gauge_coefficient(ctx)
    hB = ctx.hbar * ctx.field
    ax = ctx.scalar(lam * (-2 * (1 - ctx.r) * hB), Y)
    ay = ctx.scalar(lam * (2 * ctx.r * hB), X)
    return AlgebraElement.function(ax, ctx), AlgebraElement.function(ay, ctx)


def kinematic_momenta(ctx: StarContext) -> Tuple[AlgebraElement, AlgebraElement]:
    """``Pi_x = p_x - e A_x`` and ``Pi_y = p_y - e A_y`` as algebra elements."""
    ax, ay = gauge_fields(ctx)
    px = AlgebraElement.momentum(1, 0, ctx)
    py = AlgebraElement.momentum(0, 1, ctx)
    return px - ax * ctx.charge, py - ay * ctx.charge


def field_strength(ctx: StarContext) -> AlgebraElement:
    """``dx A_y - dy A_x - (i e / hbar) [A_x, A_y]_*``."""
    ax, ay = gauge_fields(ctx)
    curl = fs_deriv(ay.function_part(), 1, 0) - fs_deriv(ax.function_part(), 0, 1)
    bracket = star_commutator(ax, ay, ctx)
    return AlgebraElement.function(curl, ctx) - bracket * (1j * ctx.charge / ctx.hbar)


def field_strength_residual(ctx: StarContext) -> AlgebraElement:
    """Field strength minus the constant ``B``; vanishes identically through order ``K``."""
    return field_strength(ctx) - AlgebraElement.function(ctx.field, ctx)


# -- operator representation -----------------------------------------------------

def _rep_function(F: ThetaSeries, ctx: StarContext) -> DiffOperator:
    terms: Dict[Key, ThetaSeries] = {}
    for (m, n), w in _bidiff_weights(ctx).items():
        d = fs_deriv(F, m, n)
        if fs_is_zero(d):
            continue
        terms[(n, m)] = (d * w).shift(m + n)
    return DiffOperator(terms, ctx.K)


def _shift_keys(D: DiffOperator, a: int, b: int, c: complex) -> DiffOperator:
    return DiffOperator({(i + a, j + b): s * c for (i, j), s in D.terms.items()}, D.K)


def rep(F, ctx: StarContext) -> DiffOperator:
    """Operator ``psi -> F *^r psi``."""
    F = _coerce(F, ctx)
    out = DiffOperator({}, ctx.K)
    for (a, b), f in F.terms.items():
        out = out + _shift_keys(_rep_function(f, ctx), a, b, (-1j * ctx.hbar) ** (a + b))
    return out


def unrep(D: DiffOperator, ctx: StarContext) -> AlgebraElement:
    """Inverse of :func:`rep`, solved order by order in the deformation.

    At order ``k`` an operator entry ``c dx^a dy^b`` is matched by the element
    ``c t^k (-i hbar)^-(a+b) p^(a,b)``, whose representation agrees with the
    entry at order ``k`` and only adds higher orders.
    """
    if D.K != ctx.K:
        raise MismatchedTruncation(f"operator order {D.K} != context order {ctx.K}")
    residual = D
    result = AlgebraElement.zero(ctx)
    zero = ExpPoly()
    for k in range(ctx.K + 1):
        step = {}
        for (a, b), s in residual.terms.items():
            c = s.coeffs[k]
            if c.is_zero:
                continue
            cs = [zero] * (ctx.K + 1)
            cs[k] = c * (-1j * ctx.hbar) ** (-(a + b))
            step[(a, b)] = ThetaSeries(cs)
        if not step:
            continue
        piece = AlgebraElement(step, ctx.K)
        result = result + piece
        residual = residual - rep(piece, ctx)
    return result


def op_compose(P: DiffOperator, Q: DiffOperator, ctx: StarContext | None = None) -> DiffOperator:
    """``P o Q`` in normal order, moving derivatives of ``P`` through ``Q``'s coefficients."""
    if P.K != Q.K:
        raise MismatchedTruncation(f"truncation orders differ: {P.K} != {Q.K}")
    terms: Dict[Key, ThetaSeries] = {}
    for (a, b), p in P.terms.items():
        for (c, d), q in Q.terms.items():
            for i in range(a + 1):
                for j in range(b + 1):
                    dq = fs_deriv(q, i, j)
                    if fs_is_zero(dq):
                        continue
                    w = math.comb(a, i) * math.comb(b, j)
                    s = p * dq
                    if w != 1:
                        s = s * float(w)
                    key = (a - i + c, b - j + d)
                    terms[key] = terms[key] + s if key in terms else s
    return DiffOperator(terms, P.K)


def op_apply(P: DiffOperator, psi: ThetaSeries, ctx: StarContext | None = None) -> ThetaSeries:
    """``sum c_ab dx^a dy^b psi`` with all orders of the deformation merged."""
    _check_K(P.K, psi)
    out = ThetaSeries([ExpPoly()] * (P.K + 1))
    for (a, b), c in P.terms.items():
        d = fs_deriv(psi, a, b)
        if not fs_is_zero(d):
            out = out + c * d
    return out


def op_conj_coeffs(P: DiffOperator) -> DiffOperator:
    return DiffOperator({k: s.conj() for k, s in P.terms.items()}, P.K)


def coordinate(axis: str, ctx: StarContext) -> AlgebraElement:
    return AlgebraElement.function(X if axis == "x" else Y, ctx)


def sum_elements(items: Iterable[AlgebraElement], ctx: StarContext) -> AlgebraElement:
    out = AlgebraElement.zero(ctx)
    for it in items:
        out = out + it
    return out
