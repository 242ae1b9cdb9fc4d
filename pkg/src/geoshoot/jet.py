"""Truncated power series ("jets") in one variable t, and first-order duals.

A jet of order N stores ``coeffs[k] = x^(k)(0) / k!`` for k = 0..N. The
coefficient kernels below work on plain float64 arrays and use only the first
``n`` entries, so the same routine serves every order; coefficient k never
depends on anything past index k, which makes truncation exact.

Kernels return an integer status instead of raising so they can run under
numba; :func:`check` turns a status into an exception.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import njit
from .errors import DomainError, SingularSeriesError

OK = 0
E_DIV_ZERO = 1
E_SQRT_NEG = 2
E_LOG_NONPOS = 3
E_EXP_OVERFLOW = 4
E_NOT_DEFINITE = 5

_MESSAGES = {
    E_DIV_ZERO: "division by zero",
    E_SQRT_NEG: "sqrt of non-positive argument",
    E_LOG_NONPOS: "log of non-positive number",
    E_EXP_OVERFLOW: "exp overflow",
    E_NOT_DEFINITE: "metric not positive definite",
}


def check(status, node=None, point=None):
    if status == OK:
        return
    if status == E_DIV_ZERO:
        raise SingularSeriesError(_MESSAGES[status], node=node, point=point)
    if status == E_NOT_DEFINITE:
        from .errors import DefinitenessError

        raise DefinitenessError(_MESSAGES[status], node=node, point=point)
    raise DomainError(_MESSAGES.get(status, f"status {status}"), node=node, point=point)


# --- coefficient kernels -------------------------------------------------------

@njit
def series_mul(a, b, out, n):
    """Cauchy product of the first n coefficients. ``out`` must not alias a or b."""
    for k in range(n):
        s = 0.0
        for j in range(k + 1):
            s += a[j] * b[k - j]
        out[k] = s


@njit
def series_div(a, b, out, n):
    if b[0] == 0.0:
        return E_DIV_ZERO
    for k in range(n):
        s = a[k]
        for j in range(k):
            s -= out[j] * b[k - j]
        out[k] = s / b[0]
    return OK


@njit
def series_sqrt(a, out, n):
    if a[0] < 0.0 or (a[0] == 0.0 and n > 1):
        return E_SQRT_NEG
    out[0] = math.sqrt(a[0])
    for k in range(1, n):
        s = a[k]
        for j in range(1, k):
            s -= out[j] * out[k - j]
        out[k] = s / (2.0 * out[0])
    return OK


@njit
def series_exp(a, out, n):
    if a[0] > 709.0:
        return E_EXP_OVERFLOW
    out[0] = math.exp(a[0])
    for k in range(1, n):
        s = 0.0
        for j in range(1, k + 1):
            s += j * a[j] * out[k - j]
        out[k] = s / k
    return OK


@njit
def series_log(a, out, n):
    if a[0] <= 0.0:
        return E_LOG_NONPOS
    out[0] = math.log(a[0])
    for k in range(1, n):
        s = 0.0
        for j in range(1, k):
            s += j * out[j] * a[k - j]
        out[k] = (a[k] - s / k) / a[0]
    return OK


@njit
def series_sincos(a, s_out, c_out, n):
    s_out[0] = math.sin(a[0])
    c_out[0] = math.cos(a[0])
    for k in range(1, n):
        s = 0.0
        c = 0.0
        for j in range(1, k + 1):
            s += j * a[j] * c_out[k - j]
            c += j * a[j] * s_out[k - j]
        s_out[k] = s / k
        c_out[k] = -c / k
    return OK


# --- Python value types --------------------------------------------------------

def _coeffs_of(v, order):
    if isinstance(v, Jet):
        if v.order != order:
            raise ValueError(f"jet order mismatch: {order} vs {v.order}")
        return v.coeffs
    c = np.zeros(order + 1)
    c[0] = float(v)
    return c


class Jet:
    """Truncated power series sum(coeffs[k] * t**k, k=0..order)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=np.float64)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("jet coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("jet coefficients must be finite")
        self.coeffs = c

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value, slope, order):
        """value + slope*t."""
        c = np.zeros(order + 1)
        c[0] = value
        if order >= 1:
            c[1] = slope
        return cls(c)

    @property
    def order(self):
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        return f"Jet({self.coeffs.tolist()})"

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot truncate to a higher order")
        return Jet(self.coeffs[: order + 1])

    def derivative(self):
        """d/dt, keeping the order (the top coefficient becomes 0)."""
        c = np.zeros_like(self.coeffs)
        k = np.arange(1, self.coeffs.size)
        c[:-1] = k * self.coeffs[1:]
        return Jet(c)

    def __call__(self, t):
        out = 0.0
        for c in self.coeffs[::-1]:
            out = out * t + c
        return out

    def _binary(self, other, fn):
        return fn(self.coeffs, _coeffs_of(other, self.order))

    def __add__(self, other):
        return Jet(self._binary(other, np.add))

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self._binary(other, np.subtract))

    def __rsub__(self, other):
        return Jet(_coeffs_of(other, self.order) - self.coeffs)

    def __neg__(self):
        return Jet(-self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Jet):
            b = _coeffs_of(other, self.order)
            out = np.empty_like(self.coeffs)
            series_mul(self.coeffs, b, out, out.size)
            return Jet(out)
        return Jet(self.coeffs * float(other))

    def __rmul__(self, other):
        return Jet(float(other) * self.coeffs)

    def __truediv__(self, other):
        b = _coeffs_of(other, self.order)
        out = np.empty_like(self.coeffs)
        check(series_div(self.coeffs, b, out, out.size))
        return Jet(out)

    def __rtruediv__(self, other):
        a = _coeffs_of(other, self.order)
        out = np.empty_like(self.coeffs)
        check(series_div(a, self.coeffs, out, out.size))
        return Jet(out)

    def _unary(self, kernel):
        out = np.empty_like(self.coeffs)
        check(kernel(self.coeffs, out, out.size))
        return Jet(out)

    def sqrt(self):
        return self._unary(series_sqrt)

    def exp(self):
        return self._unary(series_exp)

    def log(self):
        return self._unary(series_log)

    def sincos(self):
        s = np.empty_like(self.coeffs)
        c = np.empty_like(self.coeffs)
        series_sincos(self.coeffs, s, c, s.size)
        return Jet(s), Jet(c)

    def sin(self):
        return self.sincos()[0]

    def cos(self):
        return self.sincos()[1]

    def powq(self, exponent):
        from .expression import rational_power

        return rational_power(self, exponent)

    def __pow__(self, exponent):
        return self.powq(exponent)


class Dual:
    """value + partials[0]*e1 + partials[1]*e2 with e_i*e_j = 0."""

    __slots__ = ("value", "partials")

    def __init__(self, value, partials=(0.0, 0.0)):
        self.value = float(value)
        self.partials = np.array(partials, dtype=np.float64)
        if self.partials.shape != (2,):
            raise ValueError("a dual carries exactly two partials")

    def __repr__(self):
        return f"Dual({self.value!r}, {self.partials.tolist()})"

    @staticmethod
    def _split(v):
        if isinstance(v, Dual):
            return v.value, v.partials
        return float(v), np.zeros(2)

    def __add__(self, other):
        b, db = self._split(other)
        return Dual(self.value + b, self.partials + db)

    __radd__ = __add__

    def __sub__(self, other):
        b, db = self._split(other)
        return Dual(self.value - b, self.partials - db)

    def __rsub__(self, other):
        b, db = self._split(other)
        return Dual(b - self.value, db - self.partials)

    def __neg__(self):
        return Dual(-self.value, -self.partials)

    def __mul__(self, other):
        b, db = self._split(other)
        return Dual(self.value * b, self.value * db + self.partials * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b, db = self._split(other)
        if b == 0.0:
            raise DomainError("division by zero")
        q = self.value / b
        return Dual(q, (self.partials - q * db) / b)

    def __rtruediv__(self, other):
        return Dual(other) / self

    def sqrt(self):
        if self.value <= 0.0:
            raise DomainError("sqrt of non-positive argument")
        s = math.sqrt(self.value)
        return Dual(s, self.partials / (2.0 * s))

    def exp(self):
        if self.value > 709.0:
            raise DomainError("exp overflow")
        e = math.exp(self.value)
        return Dual(e, e * self.partials)

    def log(self):
        if self.value <= 0.0:
            raise DomainError("log of non-positive number")
        return Dual(math.log(self.value), self.partials / self.value)

    def sin(self):
        return Dual(math.sin(self.value), math.cos(self.value) * self.partials)

    def cos(self):
        return Dual(math.cos(self.value), -math.sin(self.value) * self.partials)

    def powq(self, exponent):
        from .expression import rational_power

        return rational_power(self, exponent)

    def __pow__(self, exponent):
        return self.powq(exponent)


def constant_term(v):
    """The plain-number part of a float, jet or dual."""
    if isinstance(v, Jet):
        return float(v.coeffs[0])
    if isinstance(v, Dual):
        return v.value
    return float(v)
