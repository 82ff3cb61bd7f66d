"""Fixed-order truncated power series (jets).

A :class:`TruncSeries` stores the coefficients ``c[0..K]`` of a jet
``sum_k c[k] x^k`` and implements the classical O(K^2) recurrences for
products, quotients, square roots and the elementary transcendental
functions, so that the result of any composition carries the exact
Taylor coefficients of the composite through order K.

The leading axis of the coefficient array is the power index.  Any
trailing axes are carried along elementwise, which lets one series
object hold an independent jet at every point of a grid.  Binary
operations require both operands to share the same truncation order;
trailing axes follow numpy broadcasting.
"""

from __future__ import annotations

import numpy as np

__all__ = ["TruncSeries", "SeriesDomainError", "cross3", "dot3"]


class SeriesDomainError(ArithmeticError):
    """A series operation hit a singular constant term (divide, sqrt)."""


class TruncSeries:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=None)
        if c.ndim == 0:
            raise ValueError("coefficient array needs a leading order axis")
        if not np.issubdtype(c.dtype, np.inexact):
            c = c.astype(float)
        self.c = c

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value, order: int) -> "TruncSeries":
        value = np.asarray(value, dtype=float if not np.iscomplexobj(value) else None)
        c = np.zeros((order + 1,) + value.shape, dtype=value.dtype if np.issubdtype(value.dtype, np.inexact) else float)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value, order: int) -> "TruncSeries":
        """Jet of ``value + x`` (the expansion variable itself)."""
        if order < 1:
            raise ValueError("variable jet needs order >= 1")
        s = cls.constant(value, order)
        s.c[1] = 1.0
        return s

    # -- basics -------------------------------------------------------

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    def __repr__(self):
        return f"TruncSeries(order={self.order}, shape={self.c.shape[1:]})"

    def __call__(self, x):
        """Horner evaluation at x (scalar or array broadcastable with coefficients)."""
        acc = np.zeros_like(self.c[-1] * x)
        for k in range(self.order, -1, -1):
            acc = acc * x + self.c[k]
        return acc

    def _other(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            if other.order != self.order:
                raise ValueError(f"order mismatch: {self.order} vs {other.order}")
            return other
        return TruncSeries.constant(other, self.order)

    # -- linear ops ---------------------------------------------------

    def __add__(self, other):
        other = self._other(other)
        return TruncSeries(self.c + other.c)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return TruncSeries(self.c - other.c)

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return TruncSeries(-self.c)

    # -- products and quotients ----------------------------------------

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries(self.c * other)
        other = self._other(other)
        a, b = self.c, other.c
        n = self.order
        shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
        out = np.zeros((n + 1,) + shape, dtype=np.result_type(a, b))
        for k in range(n + 1):
            acc = a[0] * b[k]
            for m in range(1, k + 1):
                acc = acc + a[m] * b[k - m]
            out[k] = acc
        return TruncSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        a, b = self.c, other.c
        if np.any(b[0] == 0):
            raise SeriesDomainError("division by series with zero constant term")
        n = self.order
        shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
        out = np.zeros((n + 1,) + shape, dtype=np.result_type(a, b))
        for k in range(n + 1):
            acc = a[k] + np.zeros(shape, dtype=out.dtype)
            for m in range(1, k + 1):
                acc = acc - b[m] * out[k - m]
            out[k] = acc / b[0]
        return TruncSeries(out)

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, (int, np.integer)):
            raise TypeError("series power needs an integer exponent")
        if exponent < 0:
            return (TruncSeries.constant(1.0, self.order) / self) ** (-exponent)
        result = TruncSeries.constant(1.0, self.order)
        base = self
        e = int(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- elementary functions -------------------------------------------

    def sqrt(self):
        u = self.c
        u0 = u[0]
        if np.iscomplexobj(u):
            if np.any(u0 == 0):
                raise SeriesDomainError("sqrt of series with zero constant term")
        elif np.any(u0 <= 0):
            raise SeriesDomainError("sqrt of series with non-positive constant term")
        n = self.order
        out = np.zeros_like(u)
        out[0] = np.sqrt(u0)
        for k in range(1, n + 1):
            acc = u[k] + np.zeros_like(out[0])
            for m in range(1, k):
                acc = acc - out[m] * out[k - m]
            out[k] = acc / (2.0 * out[0])
        return TruncSeries(out)

    def exp(self):
        u = self.c
        n = self.order
        out = np.zeros_like(u)
        out[0] = np.exp(u[0])
        for k in range(1, n + 1):
            acc = np.zeros_like(out[0])
            for m in range(1, k + 1):
                acc = acc + m * u[m] * out[k - m]
            out[k] = acc / k
        return TruncSeries(out)

    def _circular(self, f0, g0, sign):
        # coupled pair recurrence: f' = u' g, g' = sign * u' f
        u = self.c
        n = self.order
        f = np.zeros_like(u)
        g = np.zeros_like(f)
        f[0], g[0] = f0, g0
        for k in range(1, n + 1):
            af = np.zeros_like(f[0])
            ag = np.zeros_like(g[0])
            for m in range(1, k + 1):
                af = af + m * u[m] * g[k - m]
                ag = ag + m * u[m] * f[k - m]
            f[k] = af / k
            g[k] = sign * ag / k
        return TruncSeries(f), TruncSeries(g)

    def sincos(self):
        return self._circular(np.sin(self.c[0]), np.cos(self.c[0]), -1.0)

    def sin(self):
        return self.sincos()[0]

    def cos(self):
        return self.sincos()[1]

    def sinhcosh(self):
        return self._circular(np.sinh(self.c[0]), np.cosh(self.c[0]), 1.0)

    def sinh(self):
        return self.sinhcosh()[0]

    def cosh(self):
        return self.sinhcosh()[1]


def cross3(u: TruncSeries, v: TruncSeries) -> TruncSeries:
    """Cauchy-product cross product of two vector series (last axis = xyz)."""
    if u.order != v.order:
        raise ValueError("order mismatch in cross3")
    n = u.order
    a, b = u.c, v.c
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    out = np.zeros((n + 1,) + shape, dtype=np.result_type(a, b))
    for k in range(n + 1):
        acc = np.cross(a[0], b[k])
        for m in range(1, k + 1):
            acc = acc + np.cross(a[m], b[k - m])
        out[k] = acc
    return TruncSeries(out)


def dot3(u: TruncSeries, v: TruncSeries) -> TruncSeries:
    """Cauchy-product euclidean dot product of two vector series."""
    if u.order != v.order:
        raise ValueError("order mismatch in dot3")
    n = u.order
    a, b = u.c, v.c
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])[:-1]
    out = np.zeros((n + 1,) + shape, dtype=np.result_type(a, b))
    for k in range(n + 1):
        acc = (a[0] * b[k]).sum(axis=-1)
        for m in range(1, k + 1):
            acc = acc + (a[m] * b[k - m]).sum(axis=-1)
        out[k] = acc
    return TruncSeries(out)
