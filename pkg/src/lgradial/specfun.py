"""Special functions and Gaussian quadrature used throughout the package.

Generalized Laguerre polynomials are evaluated by the upward three-term
recurrence, which is well conditioned for the argument ranges that occur
inside a Gaussian envelope (x of order a few times 2n+alpha+1).  The same
recurrence is reused verbatim over complex arithmetic, which is needed for
the complex-beam-parameter arguments of the exact wave solutions.

Bessel functions of the first kind are delegated to scipy (series /
continued-fraction evaluation, accurate to ~1e-15); the integer reflection
J_{-m} = (-1)^m J_m is applied explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import jv, jvp, roots_laguerre, roots_legendre

from .errors import DiagnosticError

__all__ = [
    "laguerre",
    "laguerre_derivative",
    "bessel_j",
    "bessel_j_derivative",
    "QuadratureRule",
    "make_rule",
]


def laguerre(n, alpha, x):
    """Evaluate the generalized Laguerre polynomial L_n^alpha(x).

    Parameters
    ----------
    n : int
        Polynomial order, n >= 0.
    alpha : float
        Degree parameter, alpha >= 0.
    x : scalar or ndarray, real or complex
        Evaluation point(s).

    Returns
    -------
    Value(s) of L_n^alpha(x), matching the shape and scalar-ness of `x`.
    """
    if n < 0:
        raise DiagnosticError(f"laguerre order must be >= 0, got {n}")
    x = np.asarray(x)
    scalar = x.ndim == 0
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev[()] if scalar else p_prev
    p = 1.0 + alpha - x
    for j in range(1, n):
        p, p_prev = ((2 * j + 1 + alpha - x) * p - (j + alpha) * p_prev) / (j + 1), p
    return p[()] if scalar else p


def laguerre_derivative(n, alpha, x):
    """First derivative d/dx L_n^alpha(x) = -L_{n-1}^{alpha+1}(x) (0 for n = 0)."""
    if n == 0:
        x = np.asarray(x)
        out = np.zeros_like(x)
        return out[()] if x.ndim == 0 else out
    return -laguerre(n - 1, alpha + 1, x)


def bessel_j(m, x):
    """Bessel function of the first kind J_m(x) for integer order m, x >= 0.

    Negative orders use the reflection J_{-m}(x) = (-1)^m J_m(x).
    """
    m = int(m)
    if m < 0:
        sign = -1.0 if (-m) % 2 else 1.0
        return sign * jv(-m, x)
    return jv(m, x)


def bessel_j_derivative(m, x):
    """dJ_m/dx via the identity J_m' = (J_{m-1} - J_{m+1}) / 2."""
    m = int(m)
    if m < 0:
        sign = -1.0 if (-m) % 2 else 1.0
        return sign * jvp(-m, x)
    return jvp(m, x)


@dataclass(frozen=True)
class QuadratureRule:
    """An immutable Gaussian quadrature rule.

    kind "legendre": integrates f over the finite interval `interval`.
    kind "laguerre": integrates f(x) e^{-scale x} over (0, inf); the
    exponential weight is part of the rule, so integrands are supplied
    without it.
    """

    kind: str
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float] | None = None
    scale: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)
        if np.any(np.diff(self.nodes) <= 0):
            raise DiagnosticError("quadrature nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise DiagnosticError("quadrature weights must be positive")

    def integrate(self, f):
        """Integrate a callable or an array of node values."""
        values = f(self.nodes) if callable(f) else np.asarray(f)
        return np.sum(self.weights * values, axis=-1)


_ROOTS_CACHE: dict[tuple, tuple] = {}


def _roots(kind, order):
    key = (kind, order)
    hit = _ROOTS_CACHE.get(key)
    if hit is None:
        x, w = roots_legendre(order) if kind == "legendre" else roots_laguerre(order)
        x.setflags(write=False)
        w.setflags(write=False)
        if len(_ROOTS_CACHE) > 64:
            _ROOTS_CACHE.clear()
        hit = _ROOTS_CACHE[key] = (x, w)
    return hit


def make_rule(kind, order, *, interval=None, scale=None):
    """Construct a Gauss-Legendre or Gauss-Laguerre rule.

    Parameters
    ----------
    kind : {"legendre", "laguerre"}
    order : int
        Number of nodes, >= 1.
    interval : (a, b), required for kind "legendre"
    scale : float > 0, required for kind "laguerre"
        Decay rate of the weight e^{-scale x}; nodes and weights are the
        standard Gauss-Laguerre ones mapped by x -> x / scale, so
        sum(w_i f(x_i)) approximates the integral of f(x) e^{-scale x}.
    """
    if order < 1:
        raise DiagnosticError(f"quadrature order must be >= 1, got {order}")
    if kind == "legendre":
        if interval is None:
            raise DiagnosticError("legendre rule requires an interval")
        a, b = float(interval[0]), float(interval[1])
        if not b > a:
            raise DiagnosticError(f"empty interval ({a}, {b})")
        x, w = _roots("legendre", order)
        nodes = 0.5 * (b - a) * x + 0.5 * (b + a)
        weights = 0.5 * (b - a) * w
        return QuadratureRule("legendre", order, nodes, weights, interval=(a, b))
    if kind == "laguerre":
        if scale is None or scale <= 0:
            raise DiagnosticError("laguerre rule requires scale > 0")
        if order > 350:
            raise DiagnosticError(
                f"laguerre rules are numerically reliable up to order 350, got {order}")
        x, w = _roots("laguerre", order)
        # beyond order ~180 the outermost weights underflow to exact zero;
        # those nodes carry nothing, so drop them rather than violate the
        # positive-weight invariant
        keep = w > 0.0
        return QuadratureRule("laguerre", order, x[keep] / scale, w[keep] / scale,
                              scale=float(scale))
    raise DiagnosticError(f"unknown quadrature kind {kind!r}")
