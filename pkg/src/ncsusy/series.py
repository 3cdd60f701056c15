"""
Truncated formal power series in the deformation parameter.

A :class:`ThetaSeries` holds the coefficients ``c_0 .. c_K`` of

    c_0 + c_1*t + c_2*t**2 + ... + c_K*t**K + O(t**(K+1))

where ``t`` stands for the noncommutativity parameter. The coefficients may be
plain complex numbers or any ring element supporting ``+``, ``-``, ``*`` and
multiplication by complex scalars (the package uses :class:`~ncsusy.exppoly.ExpPoly`
for function-valued series). Products discard every term of order above ``K``.

The division-type operations :func:`ts_inv` and :func:`ts_sqrt` need a scalar
field and are only defined for complex coefficients.

    >>> ts_inv(ThetaSeries([1, 1, 0, 0])).coeffs
    ((1+0j), (-1+0j), (1+0j), (-1+0j))
"""

from __future__ import annotations

import cmath
import math
import numbers
from typing import Any, Callable, Iterable, Sequence

from .errors import (
    MismatchedTruncation,
    NonPositiveLeadingCoefficient,
    SingularLeadingCoefficient,
)

DEFAULT_ORDER = 4


def _is_scalar(c: Any) -> bool:
    return isinstance(c, numbers.Number)


def _zero_like(c: Any) -> Any:
    return 0j if _is_scalar(c) else c * 0


class ThetaSeries:
    """Immutable truncated series ``sum_k coeffs[k] * t**k`` with ``k <= K``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Any]):
        cs = tuple(complex(c) if _is_scalar(c) else c for c in coeffs)
        if not cs:
            raise ValueError("a ThetaSeries needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("ThetaSeries is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, c: Any, K: int = DEFAULT_ORDER) -> "ThetaSeries":
        z = _zero_like(c)
        return cls([c] + [z] * K)

    @classmethod
    def variable(cls, K: int = DEFAULT_ORDER) -> "ThetaSeries":
        """The series of the deformation parameter itself."""
        if K == 0:
            return cls([0j])
        return cls([0j, 1 + 0j] + [0j] * (K - 1))

    @classmethod
    def from_function(cls, f: Callable[[int], Any], K: int) -> "ThetaSeries":
        return cls(f(k) for k in range(K + 1))

    # -- container protocol ----------------------------------------------

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self) -> str:
        return f"ThetaSeries({list(self.coeffs)!r})"

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "ThetaSeries") -> None:
        if other.K != self.K:
            raise MismatchedTruncation(f"truncation orders differ: {self.K} != {other.K}")

    def map(self, f: Callable[[Any], Any]) -> "ThetaSeries":
        return ThetaSeries(f(c) for c in self.coeffs)

    def __add__(self, other):
        if isinstance(other, ThetaSeries):
            self._check(other)
            return ThetaSeries(a + b for a, b in zip(self.coeffs, other.coeffs))
        return ThetaSeries((self.coeffs[0] + other,) + self.coeffs[1:])

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ThetaSeries):
            return ts_mul(self, other)
        return self.map(lambda c: c * other)

    def __rmul__(self, other):
        return self.map(lambda c: other * c)

    def __truediv__(self, other):
        if isinstance(other, ThetaSeries):
            return ts_mul(self, ts_inv(other))
        return self.map(lambda c: c * (1.0 / other))

    def __pow__(self, n: int) -> "ThetaSeries":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = self.one_like()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- helpers ---------------------------------------------------------

    def one_like(self) -> "ThetaSeries":
        c0 = self.coeffs[0]
        one = 1 + 0j if _is_scalar(c0) else c0 * 0 + 1
        return ThetaSeries.constant(one, self.K)

    def zero_like(self) -> "ThetaSeries":
        z = _zero_like(self.coeffs[0])
        return ThetaSeries([z] * (self.K + 1))

    def shift(self, k: int) -> "ThetaSeries":
        """Multiply by ``t**k`` and truncate."""
        if k == 0:
            return self
        z = _zero_like(self.coeffs[0])
        cs = [z] * min(k, self.K + 1) + list(self.coeffs[: max(self.K + 1 - k, 0)])
        return ThetaSeries(cs)

    def truncate(self, K: int) -> "ThetaSeries":
        if K > self.K:
            z = _zero_like(self.coeffs[0])
            return ThetaSeries(list(self.coeffs) + [z] * (K - self.K))
        return ThetaSeries(self.coeffs[: K + 1])

    def evaluate(self, t: Any) -> Any:
        """Sum the truncated series at a concrete parameter value (Horner)."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * t + c
        return acc

    def conj(self) -> "ThetaSeries":
        return self.map(lambda c: c.conjugate() if _is_scalar(c) else c.conj())

    def max_abs(self) -> float:
        return max((_magnitude(c) for c in self.coeffs), default=0.0)

    def allclose(self, other: "ThetaSeries", tol: float = 1e-12) -> bool:
        """Coefficient-wise comparison; ``tol`` is absolute for scalar series."""
        self._check(other)
        for a, b in zip(self.coeffs, other.coeffs):
            if _is_scalar(a):
                if abs(a - b) >= tol:
                    return False
            elif not a.close(b, tol):
                return False
        return True


def _magnitude(c: Any) -> float:
    return abs(c) if _is_scalar(c) else c.max_abs()


def ts_mul(a: ThetaSeries, b: ThetaSeries) -> ThetaSeries:
    """Cauchy product truncated at the common order ``K``."""
    a._check(b)
    K = a.K
    out = []
    for n in range(K + 1):
        acc = a.coeffs[0] * b.coeffs[n]
        for j in range(1, n + 1):
            acc = acc + a.coeffs[j] * b.coeffs[n - j]
        out.append(acc)
    return ThetaSeries(out)


def ts_inv(a: ThetaSeries, tol: float = 1e-14) -> ThetaSeries:
    """Multiplicative inverse of a scalar series.

    The constant term must exceed ``tol`` times the largest coefficient.
    """
    a0 = a.coeffs[0]
    if not _is_scalar(a0):
        raise TypeError("ts_inv needs scalar coefficients")
    if a0 == 0 or abs(a0) <= tol * a.max_abs():
        raise SingularLeadingCoefficient(f"leading coefficient {a0!r} is not invertible")
    inv0 = 1.0 / a0
    b = [inv0]
    for n in range(1, a.K + 1):
        s = sum(a.coeffs[j] * b[n - j] for j in range(1, n + 1))
        b.append(-inv0 * s)
    return ThetaSeries(b)


def ts_sqrt(a: ThetaSeries) -> ThetaSeries:
    """Principal square root by Newton iteration on truncated series.

    Seeded at the scalar root of the constant term; each sweep doubles the
    number of correct coefficients, so ``ceil(log2(K+1)) + 1`` sweeps suffice.
    """
    a0 = a.coeffs[0]
    if not _is_scalar(a0):
        raise TypeError("ts_sqrt needs scalar coefficients")
    if abs(a0.imag) > 1e-14 * max(1.0, abs(a0)) or a0.real <= 0:
        raise NonPositiveLeadingCoefficient(f"leading coefficient {a0!r} must be real and positive")
    y = ThetaSeries.constant(complex(math.sqrt(a0.real)), a.K)
    sweeps = math.ceil(math.log2(a.K + 1)) + 1
    for _ in range(sweeps):
        y = (y + ts_mul(a, ts_inv(y))) * 0.5
    return y


def ts_exp(a: ThetaSeries, one: Any = None) -> ThetaSeries:
    """Exponential of a series.

    Scalar series may have any constant term. Ring-valued series must have a
    vanishing constant term (only then is the truncated sum exact), and
    ``one`` supplies the ring unit.
    """
    a0 = a.coeffs[0]
    if _is_scalar(a0):
        tail = ThetaSeries((0j,) + a.coeffs[1:])
        return _exp_nilpotent(tail, ThetaSeries.constant(1 + 0j, a.K)) * cmath.exp(a0)
    if one is None:
        one = a0 * 0 + 1
    if a0.max_abs() != 0.0:
        raise ValueError("ring-valued ts_exp needs a vanishing constant term")
    return _exp_nilpotent(a, ThetaSeries.constant(one, a.K))


def _exp_nilpotent(u: ThetaSeries, unit: ThetaSeries) -> ThetaSeries:
    result = unit
    term = unit
    for k in range(1, u.K + 1):
        term = ts_mul(term, u) * (1.0 / k)
        result = result + term
    return result


def scalar_series(values: Sequence[complex]) -> ThetaSeries:
    return ThetaSeries([complex(v) for v in values])
