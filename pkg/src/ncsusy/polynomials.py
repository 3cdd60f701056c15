"""Hermite and associated Laguerre polynomials over an arbitrary ring.

The argument may be a number, a numpy array, an :class:`ExpPoly` or a
:class:`ThetaSeries`; only ``+``, ``-``, ``*`` and scalar multiplication are
used, via the three-term recurrences.
"""

from __future__ import annotations


def _one_like(u):
    return u * 0 + 1


def hermite(n: int, u):
    """Physicists' Hermite polynomial ``H_n(u)``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    h_prev = _one_like(u)
    if n == 0:
        return h_prev
    h = u * 2.0
    for k in range(1, n):
        h_prev, h = h, u * h * 2.0 - h_prev * (2.0 * k)
    return h


def laguerre(n: int, alpha: float, u):
    """Associated Laguerre polynomial ``L_n^alpha(u)``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    l_prev = _one_like(u)
    if n == 0:
        return l_prev
    l = (u * -1.0) + (1.0 + alpha)
    for k in range(1, n):
        l_prev, l = l, ((l * (2 * k + 1 + alpha)) - u * l - l_prev * (k + alpha)) * (1.0 / (k + 1))
    return l
