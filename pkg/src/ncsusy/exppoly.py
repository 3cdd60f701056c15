"""
Exponential-polynomial functions on the plane.

An :class:`ExpPoly` is a finite sum

    sum_t  c_t * x**i_t * y**j_t * exp(Q_t(x, y))

with complex coefficients and complex quadratic exponents
``Q = a_xx x^2 + a_yy y^2 + a_xy xy + b_x x + b_y y + c0``. The set is closed
under addition, multiplication and partial derivatives, which is all the star
product needs, and every state in the package (Gaussians, shifted Gaussians,
plane waves, Hermite and Laguerre prefactors) lives in it.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

import numpy as np

KEY_DIGITS = 12
PRUNE_TOL = 1e-14


def _round(z: complex) -> Tuple[float, float]:
    # `+ 0.0` folds -0.0 into 0.0 so that keys hash identically
    return (round(z.real, KEY_DIGITS) + 0.0, round(z.imag, KEY_DIGITS) + 0.0)


@dataclass(frozen=True, eq=False)
class QuadExp:
    """Quadratic exponent ``a_xx x^2 + a_yy y^2 + a_xy xy + b_x x + b_y y + c0``."""

    a_xx: complex = 0j
    a_yy: complex = 0j
    a_xy: complex = 0j
    b_x: complex = 0j
    b_y: complex = 0j
    c0: complex = 0j
    key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.fields())
        for name, v in zip(("a_xx", "a_yy", "a_xy", "b_x", "b_y", "c0"), vals):
            object.__setattr__(self, name, v)
        object.__setattr__(self, "key", tuple(_round(v) for v in vals))

    def fields(self):
        return (self.a_xx, self.a_yy, self.a_xy, self.b_x, self.b_y, self.c0)

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, QuadExp) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __add__(self, other: "QuadExp") -> "QuadExp":
        return QuadExp(*(a + b for a, b in zip(self.fields(), other.fields())))

    def conj(self) -> "QuadExp":
        return QuadExp(*(v.conjugate() for v in self.fields()))

    @property
    def is_zero(self) -> bool:
        return self == ZERO_EXP

    def __call__(self, x, y):
        return (self.a_xx * x * x + self.a_yy * y * y + self.a_xy * x * y
                + self.b_x * x + self.b_y * y + self.c0)


ZERO_EXP = QuadExp()

Term = Tuple[QuadExp, int, int]


class ExpPoly:
    """Canonical sum of monomial-times-Gaussian terms.

    Terms are stored as ``{(exponent, degx, degy): coefficient}``. Construction
    merges equal exponent keys and drops coefficients below ``PRUNE_TOL``
    relative to the largest one.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Term, complex] | None = None, prune: bool = True):
        t = {}
        if terms:
            for k, c in terms.items():
                if c != 0:
                    t[k] = complex(c)
            if prune and t:
                big = max(abs(c) for c in t.values())
                cut = PRUNE_TOL * big
                t = {k: c for k, c in t.items() if abs(c) >= cut}
        self.terms: Dict[Term, complex] = t

    # -- constructors ----------------------------------------------------

    @classmethod
    def const(cls, c: complex) -> "ExpPoly":
        return cls({(ZERO_EXP, 0, 0): c})

    @classmethod
    def monomial(cls, i: int = 0, j: int = 0, c: complex = 1.0, exp: QuadExp = ZERO_EXP) -> "ExpPoly":
        return cls({(exp, i, j): c})

    @classmethod
    def x(cls) -> "ExpPoly":
        return cls.monomial(1, 0)

    @classmethod
    def y(cls) -> "ExpPoly":
        return cls.monomial(0, 1)

    @classmethod
    def exp(cls, q: QuadExp, c: complex = 1.0) -> "ExpPoly":
        return cls.monomial(0, 0, c, q)

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls()

    # -- inspection ------------------------------------------------------

    def __iter__(self) -> Iterator[Tuple[Term, complex]]:
        return iter(self.sorted_terms())

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self):
        """Terms in canonical order: exponent key, then (degx, degy)."""
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0].key, kv[0][1], kv[0][2]))

    def exponents(self):
        return sorted({k[0] for k in self.terms})

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        return all(k[0].is_zero for k in self.terms)

    def __repr__(self):
        if not self.terms:
            return "ExpPoly(0)"
        parts = []
        for (q, i, j), c in self.sorted_terms():
            s = f"({c:.6g})"
            if i:
                s += f"*x^{i}"
            if j:
                s += f"*y^{j}"
            if not q.is_zero:
                s += f"*exp{tuple(round(v.real, 6) + 1j * round(v.imag, 6) for v in q.fields())}"
            parts.append(s)
        return "ExpPoly(" + " + ".join(parts) + ")"

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = ExpPoly.const(other)
        elif not isinstance(other, ExpPoly):
            return NotImplemented
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0j) + c
        return _from_sum(t, self, other)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({k: -c for k, c in self.terms.items()}, prune=False)

    def __sub__(self, other):
        if isinstance(other, numbers.Number):
            other = ExpPoly.const(other)
        elif not isinstance(other, ExpPoly):
            return NotImplemented
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0j) - c
        return _from_sum(t, self, other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            if other == 0:
                return ExpPoly()
            return ExpPoly({k: c * other for k, c in self.terms.items()}, prune=False)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return ep_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, n: int) -> "ExpPoly":
        result = ExpPoly.const(1.0)
        for _ in range(n):
            result = result * self
        return result

    def conj(self) -> "ExpPoly":
        """Complex conjugate as a function of real ``(x, y)``."""
        return ExpPoly({(q.conj(), i, j): c.conjugate() for (q, i, j), c in self.terms.items()}, prune=False)

    def deriv(self, axis: str, order: int = 1) -> "ExpPoly":
        return ep_deriv(self, axis, order)

    def __call__(self, x, y):
        return ep_eval(self, x, y)

    def close(self, other: "ExpPoly", tol: float = 1e-12) -> bool:
        return ep_close(self, other, tol)


def _from_sum(t, a: ExpPoly, b: ExpPoly) -> ExpPoly:
    # cancellation residue is judged against the operands, not the result
    scale = max(a.max_abs(), b.max_abs())
    cut = PRUNE_TOL * scale * 1e-2
    out = ExpPoly()
    out.terms = {k: c for k, c in t.items() if abs(c) > cut}
    return out


def ep_mul(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    """Pointwise product: exponents add, monomial degrees add."""
    t: Dict[Term, complex] = {}
    exp_cache: Dict[Tuple[QuadExp, QuadExp], QuadExp] = {}
    for (qf, i1, j1), c1 in f.terms.items():
        for (qg, i2, j2), c2 in g.terms.items():
            q = exp_cache.get((qf, qg))
            if q is None:
                q = qg if qf.is_zero else (qf if qg.is_zero else qf + qg)
                exp_cache[(qf, qg)] = q
            k = (q, i1 + i2, j1 + j2)
            t[k] = t.get(k, 0j) + c1 * c2
    return ExpPoly(t)


def _deriv_once(f: ExpPoly, axis: str) -> ExpPoly:
    t: Dict[Term, complex] = {}

    def put(k, c):
        if c != 0:
            t[k] = t.get(k, 0j) + c

    for (q, i, j), c in f.terms.items():
        if axis == "x":
            if i:
                put((q, i - 1, j), c * i)
            put((q, i + 1, j), 2 * q.a_xx * c)
            put((q, i, j + 1), q.a_xy * c)
            put((q, i, j), q.b_x * c)
        else:
            if j:
                put((q, i, j - 1), c * j)
            put((q, i, j + 1), 2 * q.a_yy * c)
            put((q, i + 1, j), q.a_xy * c)
            put((q, i, j), q.b_y * c)
    return ExpPoly(t)


def ep_deriv(f: ExpPoly, axis: str, order: int = 1) -> ExpPoly:
    """Exact ``order``-th partial derivative along ``axis`` ('x' or 'y')."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    for _ in range(order):
        f = _deriv_once(f, axis)
    return f


def ep_eval(f: ExpPoly, x, y):
    """Evaluate at a point or on broadcastable numpy arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    by_exp: Dict[QuadExp, list] = {}
    for (q, i, j), c in f.terms.items():
        by_exp.setdefault(q, []).append((i, j, c))
    for q, mons in by_exp.items():
        poly = np.zeros_like(total)
        for i, j, c in mons:
            poly = poly + c * x**i * y**j
        total = total + poly * np.exp(q(x, y))
    if total.shape == ():
        return complex(total)
    return total


def ep_close(f: ExpPoly, g: ExpPoly, tol: float = 1e-12) -> bool:
    """Canonical-form comparison relative to the largest coefficient of either side."""
    scale = max(f.max_abs(), g.max_abs())
    if scale == 0.0:
        return True
    bound = tol * scale
    for k in set(f.terms) | set(g.terms):
        if abs(f.terms.get(k, 0j) - g.terms.get(k, 0j)) >= bound:
            return False
    return True


def ep_diff_norm(f: ExpPoly, g: ExpPoly) -> float:
    """Largest coefficient magnitude of ``f - g`` (no pruning)."""
    keys = set(f.terms) | set(g.terms)
    return max((abs(f.terms.get(k, 0j) - g.terms.get(k, 0j)) for k in keys), default=0.0)


def gaussian(a_xx=0.0, a_yy=0.0, a_xy=0.0, b_x=0.0, b_y=0.0, c0=0.0, coeff=1.0) -> ExpPoly:
    return ExpPoly.exp(QuadExp(a_xx, a_yy, a_xy, b_x, b_y, c0), coeff)


X = ExpPoly.x()
Y = ExpPoly.y()
ONE = ExpPoly.const(1.0)
