"""Deterministic 1-D adaptive quadrature, Gaussian moments and the Q(3/2, x) tail.

The integrator applies a 10-point Gauss-Legendre rule on each subinterval and
estimates its error by comparing the whole-interval rule with the sum of the
rules on the two halves.  Subintervals whose error exceeds their share of the
tolerance (proportional to their width) are halved, all of them in one round,
so every round costs a single call of the integrand on a batch of nodes.

Infinite endpoints are removed by a change of variables:

    (-inf, inf):  x = t / (1 - t**2),      t in (-1, 1)
    [a, inf):     x = a + t / (1 - t),     t in [0, 1)
    (-inf, b]:    x = b - t / (1 - t),     t in [0, 1)

Gauss nodes are interior, so the singular endpoints of the maps are never hit.

The integrand may be vector valued: ``f`` maps an array of shape ``(m,)`` to
an array of shape ``(m, *batch)``.  All components then share one
subdivision and the error estimate is the worst component.  This is what
keeps iterated multi-dimensional integrals cheap (see :func:`integrate_nd`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, InputError

__all__ = [
    "QuadratureResult",
    "integrate",
    "integrate_nd",
    "gaussian_moment",
    "double_factorial",
    "q_gamma_3half",
    "p_gamma_3half",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 1_000_000
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(10)
_N_INITIAL = 4
_MAX_DOUBLE_FACTORIAL_N = 100

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    value: ArrayLike
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be non-negative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be positive")

    def __float__(self):
        return float(self.value)


def _call(f, x, vectorized):
    if vectorized:
        y = np.asarray(f(x), dtype=float)
        if y.ndim == 0:
            # constant integrands such as ``lambda x: 1.0``
            y = np.full(x.shape, float(y))
    else:
        y = np.array([f(float(xi)) for xi in x], dtype=float)
    if y.shape[:1] != x.shape:
        raise InputError(
            f"integrand returned shape {y.shape} for {x.shape[0]} nodes")
    return y


def _mapping(lo, hi):
    """Return (t_lo, t_hi, x_of_t, jacobian) for the given endpoints."""
    lo_inf, hi_inf = np.isinf(lo), np.isinf(hi)
    if lo_inf and hi_inf:
        return (-1.0, 1.0,
                lambda t: t / (1.0 - t * t),
                lambda t: (1.0 + t * t) / (1.0 - t * t) ** 2)
    if hi_inf:
        return (0.0, 1.0,
                lambda t: lo + t / (1.0 - t),
                lambda t: 1.0 / (1.0 - t) ** 2)
    if lo_inf:
        return (0.0, 1.0,
                lambda t: hi - t / (1.0 - t),
                lambda t: 1.0 / (1.0 - t) ** 2)
    return lo, hi, lambda t: t, lambda t: np.ones_like(t)


class _Engine:
    def __init__(self, f, lo, hi, tol, budget, vectorized):
        self.t_lo, self.t_hi, self.x_of_t, self.jac = _mapping(lo, hi)
        self.f = f
        self.tol = tol
        self.budget = budget
        self.vectorized = vectorized
        self.evaluations = 0

    def _h(self, t):
        x = self.x_of_t(t)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            fx = _call(self.f, x, self.vectorized)
            jac = self.jac(t).reshape(t.shape + (1,) * (fx.ndim - 1))
            # f == 0 where the map sends x to infinity; avoid 0 * inf
            val = np.where(fx == 0.0, 0.0, fx * jac)
        if not np.all(np.isfinite(val)):
            raise InputError("integrand produced a non-finite value")
        self.evaluations += t.size
        return val

    def _rules(self, a, b):
        """10-point Gauss-Legendre rule on each [a[i], b[i]], one f call."""
        half = 0.5 * (b - a)
        centre = 0.5 * (a + b)
        t = (centre[:, None] + half[:, None] * _NODES[None, :]).ravel()
        vals = self._h(t)
        vals = vals.reshape((a.size, _NODES.size) + vals.shape[1:])
        q = np.tensordot(_WEIGHTS, vals, axes=([0], [1]))
        return q * half.reshape((-1,) + (1,) * (q.ndim - 1))

    def _halves(self, a, b):
        mid = 0.5 * (a + b)
        q = self._rules(np.concatenate([a, mid]), np.concatenate([mid, b]))
        k = a.size
        return q[:k], q[k:]

    def run(self):
        edges = np.linspace(self.t_lo, self.t_hi, _N_INITIAL + 1)
        a, b = edges[:-1], edges[1:]
        whole = self._rules(a, b)
        left, right = self._halves(a, b)
        span = self.t_hi - self.t_lo

        while True:
            value = left + right
            diff = np.abs(value - whole)
            err = diff.reshape(diff.shape[0], -1).max(axis=1)
            total_err = float(err.sum())
            estimate = value.sum(axis=0)
            if total_err <= self.tol:
                return self._result(estimate, total_err)

            share = self.tol * (b - a) / span
            tiny = 8 * np.finfo(float).eps * np.maximum(np.abs(a), np.abs(b))
            refine = (err > share) & ((b - a) > tiny)
            n_ref = int(refine.sum())
            if n_ref == 0:
                raise ConvergenceError(
                    "subintervals cannot be refined further",
                    self._result(estimate, total_err))
            cost = 4 * n_ref * _NODES.size
            if self.evaluations + cost > self.budget:
                raise ConvergenceError(
                    f"evaluation budget of {self.budget} exhausted",
                    self._result(estimate, total_err))

            ra, rb = a[refine], b[refine]
            rm = 0.5 * (ra + rb)
            ca = np.concatenate([ra, rm])
            cb = np.concatenate([rm, rb])
            c_whole = np.concatenate([left[refine], right[refine]])
            c_left, c_right = self._halves(ca, cb)

            keep = ~refine
            a = np.concatenate([a[keep], ca])
            b = np.concatenate([b[keep], cb])
            whole = np.concatenate([whole[keep], c_whole])
            left = np.concatenate([left[keep], c_left])
            right = np.concatenate([right[keep], c_right])
            order = np.argsort(a, kind="stable")
            a, b = a[order], b[order]
            whole, left, right = whole[order], left[order], right[order]

    def _result(self, estimate, err):
        value = float(estimate) if np.ndim(estimate) == 0 else estimate
        return QuadratureResult(value, err, max(self.evaluations, 1))


def integrate(f: Callable, lo: float, hi: float, tol: float = 1e-10,
              budget: int = DEFAULT_BUDGET,
              vectorized: bool = True) -> QuadratureResult:
    """Integrate ``f`` over ``[lo, hi]``; either endpoint may be infinite.

    ``f`` is called on 1-D arrays of nodes unless ``vectorized`` is false, in
    which case it is called once per node with a Python float.  ``tol`` is an
    absolute tolerance on the total error estimate.  Raises
    :class:`ConvergenceError` (carrying the best estimate) when ``budget``
    integrand evaluations do not suffice, and :class:`InputError` when ``f``
    returns NaN or infinity.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if budget < 1:
        raise DomainError("budget must be positive")
    if np.isnan(lo) or np.isnan(hi):
        raise DomainError("integration limits must not be NaN")
    if lo == hi:
        return QuadratureResult(0.0, 0.0, 1)
    sign = 1.0
    if lo > hi:
        lo, hi, sign = hi, lo, -1.0
    res = _Engine(f, float(lo), float(hi), tol, budget, vectorized).run()
    if sign < 0:
        res = QuadratureResult(-res.value, res.abs_error_estimate, res.evaluations)
    return res


def integrate_nd(f: Callable, limits: Sequence[tuple], tol: float = 1e-10,
                 budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    """Iterated integral of ``f(x1, ..., xd)`` over a box of ``limits``.

    ``f`` must broadcast over its arguments.  The innermost variable is
    integrated first; each outer level integrates a vector-valued function
    whose components are the inner integrals at the outer nodes.  ``tol`` is
    applied at every level.  The reported error estimate and evaluation
    count are those of the outermost integration.
    """
    limits = [tuple(map(float, lim)) for lim in limits]
    if not limits:
        raise DomainError("need at least one integration variable")
    d = len(limits)

    def level(k, prefix):
        # integral over x_{k+1}..x_d with x_1..x_k fixed to the arrays in prefix
        lo, hi = limits[k]

        def g(t):
            # t gets its own leading axis; prefix arrays broadcast behind it
            extra = max((np.ndim(p) for p in prefix), default=0)
            tt = t.reshape(t.shape + (1,) * extra)
            args = [np.asarray(p)[None, ...] for p in prefix] + [tt]
            if k == d - 1:
                out = f(*args)
                return np.broadcast_to(
                    out, np.broadcast_shapes(*(np.shape(x) for x in args)))
            return level(k + 1, args).value

        return integrate(g, lo, hi, tol=tol, budget=budget)

    return level(0, [])


def double_factorial(n: int) -> int:
    """(n)!! computed iteratively; (-1)!! = 0!! = 1."""
    if n < -1:
        raise DomainError("double factorial defined for n >= -1")
    out = 1
    for k in range(n, 1, -2):
        out *= k
    return out


def gaussian_moment(n: int, c: float) -> float:
    """Closed form of the integral of x**(2n) * exp(-c x**2) over the real line.

    Equals sqrt(pi/c) * (2n-1)!! / (2c)**n.
    """
    if int(n) != n or n < 0:
        raise DomainError("n must be a non-negative integer")
    if n > _MAX_DOUBLE_FACTORIAL_N:
        raise DomainError(f"n capped at {_MAX_DOUBLE_FACTORIAL_N}")
    if not c > 0:
        raise DomainError("c must be positive")
    value = np.sqrt(np.pi / c)
    for k in range(1, int(n) + 1):
        value *= (2 * k - 1) / (2.0 * c)
    value = float(value)
    if not np.isfinite(value) or value == 0.0:
        raise DomainError("gaussian moment not representable in double precision")
    return value


def _check_lambda(lam):
    arr = np.asarray(lam, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("lambda must be non-negative")
    return arr


def q_gamma_3half(lam: ArrayLike) -> ArrayLike:
    """Regularized upper incomplete gamma ratio Q(3/2, lam).

    This is the fraction of Maxwell molecules whose kinetic energy exceeds
    ``lam * kT``.  Evaluated as erfc(sqrt(lam)) + 2 sqrt(lam/pi) exp(-lam),
    which has no cancellation; underflows to 0 beyond lam ~ 745.
    """
    arr = _check_lambda(lam)
    root = np.sqrt(arr)
    out = special.erfc(root) + 2.0 * np.sqrt(arr / np.pi) * np.exp(-arr)
    return float(out) if out.ndim == 0 else out


_SERIES_SWITCH = 0.5
_SERIES_TERMS = 30
_GAMMA_5HALF = 0.75 * np.sqrt(np.pi)


def p_gamma_3half(lam: ArrayLike) -> ArrayLike:
    """Regularized lower incomplete gamma ratio P(3/2, lam) = 1 - Q(3/2, lam).

    A power series keeps full relative accuracy for small ``lam`` where the
    closed form erf(x) - 2x exp(-x**2)/sqrt(pi) cancels.
    """
    arr = _check_lambda(lam)
    out = np.empty_like(arr)
    small = arr < _SERIES_SWITCH
    z = arr[small]
    # sum_k z^k / ((5/2)(7/2)...(3/2+k))
    term = np.ones_like(z)
    acc = np.ones_like(z)
    for k in range(1, _SERIES_TERMS):
        term = term * z / (1.5 + k)
        acc = acc + term
    out[small] = z * np.sqrt(z) * np.exp(-z) / _GAMMA_5HALF * acc
    zb = arr[~small]
    root = np.sqrt(zb)
    out[~small] = special.erf(root) - 2.0 * np.sqrt(zb / np.pi) * np.exp(-zb)
    return float(out) if out.ndim == 0 else out
