"""Precision handling and the small numerical kernels everything else uses.

All reals are :class:`mpmath.mpf`.  Work is done inside
``PrecisionPolicy.context()``, which sets mpmath's working precision for the
duration of a call; the global context is restored afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import mpmath
from mpmath import mpf

from .errors import DegenerateRay, InputError

DEFAULT_BITS = 512


@dataclass(frozen=True)
class PrecisionPolicy:
    significand_bits: int = DEFAULT_BITS

    def __post_init__(self):
        if int(self.significand_bits) != self.significand_bits or self.significand_bits < 64:
            raise InputError(f"significand_bits must be an integer >= 64, got {self.significand_bits}")

    @cached_property
    def tolerance(self) -> mpf:
        """Comparison tolerance, ``2**(-bits/2)``."""
        with self.context():
            return mpf(2) ** (-mpf(self.significand_bits) / 2)

    @cached_property
    def underflow_floor(self) -> mpf:
        with self.context():
            return mpf(2) ** (16 - self.significand_bits)

    def context(self):
        return mpmath.workprec(self.significand_bits)

    def real(self, x) -> mpf:
        """Convert ``x`` (int, str, float, mpf) at this precision."""
        with self.context():
            return mpf(x)


DEFAULT_POLICY = PrecisionPolicy()


def resolve(policy: PrecisionPolicy | None) -> PrecisionPolicy:
    return DEFAULT_POLICY if policy is None else policy


def dot(u: Sequence[mpf], v: Sequence[mpf]) -> mpf:
    return mpmath.fsum(a * b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def norm2(u) -> mpf:
    return dot(u, u)


def det(m: Sequence[Sequence], policy: PrecisionPolicy | None = None) -> mpf:
    """Determinant of a 4x4 or 5x5 matrix.

    Fraction-free (Bareiss) elimination with partial pivoting, carried out at
    the policy's working precision.
    """
    policy = resolve(policy)
    n = len(m)
    if n not in (4, 5) or any(len(row) != n for row in m):
        raise InputError(f"det expects a square matrix of order 4 or 5, got {n}x{[len(r) for r in m]}")
    with policy.context():
        a = [[mpf(x) for x in row] for row in m]
        sign = 1
        prev = mpf(1)
        for k in range(n - 1):
            piv = max(range(k, n), key=lambda i: abs(a[i][k]))
            if a[piv][k] == 0:
                return mpf(0)
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            p = a[k][k]
            for i in range(k + 1, n):
                f = a[i][k]
                row_k = a[k]
                row_i = a[i]
                for j in range(k + 1, n):
                    row_i[j] = (p * row_i[j] - f * row_k[j]) / prev
                row_i[k] = mpf(0)
            prev = p
        return sign * a[n - 1][n - 1]


def second_sphere_intersection(a, g, policy: PrecisionPolicy | None = None) -> tuple:
    """Other end of the chord of the unit sphere through ``a`` and ``g``.

    ``a`` lies on the sphere.  Writing ``p = a + t (g - a)``, the nonzero
    root is ``t = 2 <a, a - g> / |a - g|**2``; the zero root is factored out,
    so no subtraction of nearly equal roots occurs.
    """
    policy = resolve(policy)
    with policy.context():
        a = tuple(mpf(x) for x in a)
        g = tuple(mpf(x) for x in g)
        w = sub(a, g)
        w2 = norm2(w)
        if w2 < policy.tolerance ** 2:
            raise DegenerateRay("vertex coincides with the centroid")
        t = 2 * dot(a, w) / w2
        return tuple(ai - t * wi for ai, wi in zip(a, w))
