"""Wave functions as truncated series of ExpPoly coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np

from .errors import MismatchedTruncation
from .exppoly import ExpPoly, QuadExp
from .series import ThetaSeries

DECAYING, NEUTRAL, GROWING = "decaying", "neutral", "growing"
_RANK = {DECAYING: 0, NEUTRAL: 1, GROWING: 2}


def classify_direction(quad: complex, lin: complex, tol: float = 1e-12) -> str:
    """Growth of ``exp(quad * s**2 + lin * s)`` as ``s -> +-inf`` along one axis."""
    if quad.real < -tol:
        return DECAYING
    if quad.real > tol:
        return GROWING
    return GROWING if abs(lin.real) > tol else NEUTRAL


def classify_exponent(q: QuadExp, tol: float = 1e-12) -> Dict[str, str]:
    return {"x": classify_direction(q.a_xx, q.b_x, tol), "y": classify_direction(q.a_yy, q.b_y, tol)}


def classify_growth(f: ExpPoly, tol: float = 1e-12) -> Dict[str, str]:
    """Worst-case growth over all exponents present in ``f``."""
    out = {"x": DECAYING, "y": DECAYING}
    if f.is_zero:
        return out
    for q in f.exponents():
        g = classify_exponent(q, tol)
        for axis in out:
            if _RANK[g[axis]] > _RANK[out[axis]]:
                out[axis] = g[axis]
    return out


class State:
    """A wave function ``sum_k psi_k(x, y) t**k`` with its growth classification.

    The classification is read off the order-zero coefficient, which fixes the
    asymptotics of the formal series.
    """

    __slots__ = ("series", "growth")

    def __init__(self, series: ThetaSeries):
        if isinstance(series, State):
            series = series.series
        self.series = series
        self.growth = classify_growth(series.coeffs[0])

    @property
    def K(self) -> int:
        return self.series.K

    def __getitem__(self, k) -> ExpPoly:
        return self.series.coeffs[k]

    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.series.coeffs)

    def max_abs(self) -> float:
        return max(c.max_abs() for c in self.series.coeffs)

    def max_abs_by_order(self):
        return [c.max_abs() for c in self.series.coeffs]

    @property
    def normalizable(self) -> bool:
        return GROWING not in self.growth.values()

    def evaluate(self, x, y, vartheta: float):
        """Numeric value of the truncated series at a concrete deformation."""
        return self.series.evaluate(vartheta)(x, y)

    def close(self, other: "State", tol: float = 1e-10) -> bool:
        if other.K != self.K:
            raise MismatchedTruncation(f"truncation orders differ: {self.K} != {other.K}")
        scale = max(self.max_abs(), other.max_abs())
        diff = max((a - b).max_abs() for a, b in zip(self.series.coeffs, other.series.coeffs))
        return diff <= tol * scale

    def __add__(self, other: "State") -> "State":
        return State(self.series + other.series)

    def __sub__(self, other: "State") -> "State":
        return State(self.series - other.series)

    def __mul__(self, c) -> "State":
        return State(self.series * c)

    __rmul__ = __mul__

    def __repr__(self):
        return f"State(K={self.K}, growth={self.growth})"


@dataclass(frozen=True)
class SusyState:
    """Two-component state; the upper slot is Bosonic, the lower Fermionic."""

    bosonic: State
    fermionic: State

    def __post_init__(self):
        if self.bosonic.K != self.fermionic.K:
            raise MismatchedTruncation("components carry different truncation orders")

    @classmethod
    def from_fermionic(cls, psi: State) -> "SusyState":
        return cls(zero_state(psi.K), psi)

    @classmethod
    def from_bosonic(cls, psi: State) -> "SusyState":
        return cls(psi, zero_state(psi.K))

    def is_zero(self) -> bool:
        return self.bosonic.is_zero() and self.fermionic.is_zero()


def zero_state(K: int) -> State:
    return State(ThetaSeries([ExpPoly()] * (K + 1)))


def sample_grid(f: ExpPoly, half_width: float, n: int = 101):
    """Evaluate ``f`` on a square grid; handy for quadrature oracles."""
    s = np.linspace(-half_width, half_width, n)
    xx, yy = np.meshgrid(s, s, indexing="ij")
    return s, f(xx, yy)
