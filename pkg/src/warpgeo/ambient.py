"""Warped-product ambient spaces dt^2 + f(t)^2 g_M and their geometry.

The base is an interval with coordinate ``t``; the fiber is either flat
Euclidean n-space (identity chart) or the unit round n-sphere in the
nested angular chart, so the fiber has constant sectional curvature
``k`` equal to 0 or 1.  Ambient coordinates are ``(t, x1, ..., xn)``.

Curvature sign convention, fixed once for the whole package:

    R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    K(X, Y)  = <R(X, Y)Y, X> / (|X|^2 |Y|^2 - <X, Y>^2)

Under this convention the round sphere has K = +1 and the five constant
curvature models produced by ``check_space_form`` come out with exactly
their advertised ``c``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularMetric
from .jets import as_expression, eval_jet2, eval_value
from .expr import unparse, variables_in

CONDITION_LIMIT = 1e12
SPACE_FORM_TOL = 1e-10


class Fiber(enum.Enum):
    """Fiber model of the warped product."""

    EUCLIDEAN = "euclidean"
    SPHERE = "sphere"

    @property
    def curvature(self):
        return 0.0 if self is Fiber.EUCLIDEAN else 1.0


@dataclass(frozen=True)
class AmbientPoint:
    """A point (t, x) in ambient chart coordinates."""

    t: float
    x: tuple

    def coords(self):
        return np.array((self.t,) + tuple(self.x))


@dataclass(frozen=True)
class SpaceFormCheck:
    """Residuals of the constant-curvature characterization of f and k.

    ``ratio_residual`` is sup |((f')^2 - k)/f^2 + c| and
    ``second_residual`` is sup |f''/f + c| over the probe grid.
    """

    c: float
    ratio_residual: float
    second_residual: float

    @property
    def passed(self):
        return (
            self.ratio_residual < SPACE_FORM_TOL
            and self.second_residual < SPACE_FORM_TOL
        )


class WarpedProduct:
    """Interval x_f fiber with the metric dt^2 + f(t)^2 g_fiber.

    Parameters
    ----------
    interval : pair of floats, endpoints may be infinite
    f : expression in the single variable ``t`` (string or AST)
    fiber : :class:`Fiber`
    n : fiber dimension, at least 1

    Positivity of ``f`` is probed on a 1024-point grid over a finite
    window of the interval at construction; a non-positive sample is a
    construction error.  This cannot prove positivity for arbitrary
    expressions and is a documented limitation.
    """

    def __init__(self, interval, f, fiber, n):
        lo, hi = float(interval[0]), float(interval[1])
        if not lo < hi:
            raise ValueError(f"empty interval {interval!r}")
        if n < 1:
            raise ValueError("fiber dimension must be >= 1")
        self.interval = (lo, hi)
        self.f = as_expression(f)
        extra = variables_in(self.f) - {"t"}
        if extra:
            raise ValueError(f"warping function may only use 't', found {sorted(extra)}")
        self.fiber = Fiber(fiber)
        self.n = int(n)
        self.k = self.fiber.curvature
        self.coordinates = ("t",) + tuple(f"x{i}" for i in range(1, n + 1))
        self._metric_diag = self._build_metric_diag()
        self._probe_positivity()

    def __repr__(self):
        return (
            f"WarpedProduct(interval={self.interval}, f={unparse(self.f)!r}, "
            f"fiber={self.fiber.value!r}, n={self.n})"
        )

    @property
    def dim(self):
        return self.n + 1

    def _build_metric_diag(self):
        from .expr import parse

        f_src = f"({unparse(self.f)})^2"
        entries = [parse("1")]
        for i in range(1, self.n + 1):
            src = f_src
            if self.fiber is Fiber.SPHERE:
                for j in range(1, i):
                    src += f"*sin(x{j})^2"
            entries.append(parse(src))
        return tuple(entries)

    def probe_window(self, margin=0.02, clip=4.0):
        """Finite sub-window of the interval suitable for sampling."""
        lo, hi = self.interval
        if math.isinf(lo):
            lo = -clip
        if math.isinf(hi):
            hi = clip
        pad = margin * (hi - lo)
        return lo + pad, hi - pad

    def _probe_positivity(self):
        a, b = self.probe_window()
        for t in np.linspace(a, b, 1024):
            if eval_value(self.f, {"t": t}) <= 0.0:
                raise ValueError(
                    f"warping function {unparse(self.f)!r} is not positive at t={t!r}"
                )

    def warping_jet(self, t):
        """Return (f(t), f'(t), f''(t))."""
        jet = eval_jet2(self.f, {"t": float(t)}, ("t",))
        return jet.value, float(jet.grad[0]), float(jet.hess[0, 0])

    def validate_point(self, p):
        lo, hi = self.interval
        if not lo < p.t < hi:
            raise ValueError(f"t={p.t!r} outside interval {self.interval}")
        if len(p.x) != self.n:
            raise ValueError(f"expected {self.n} fiber coordinates, got {len(p.x)}")
        if self.fiber is Fiber.SPHERE:
            for j, v in enumerate(p.x, start=1):
                top = 2.0 * math.pi if j == self.n else math.pi
                if not 0.0 < v < top:
                    raise ValueError(f"sphere angle x{j}={v!r} outside (0, {top!r})")

    def _bindings(self, p):
        values = {"t": p.t}
        for i, v in enumerate(p.x, start=1):
            values[f"x{i}"] = float(v)
        return values

    def metric(self, p):
        """Ambient metric matrix at ``p`` (block diagonal, SPD)."""
        self.validate_point(p)
        values = self._bindings(p)
        d = self.dim
        G = np.zeros((d, d))
        for a, entry in enumerate(self._metric_diag):
            G[a, a] = eval_value(entry, values)
        return G

    def metric_jets(self, p):
        """Metric with its exact first and second coordinate derivatives.

        Returns ``(G, dG, d2G)`` where ``dG[a, b, c] = d G_ab / d x^c``
        and ``d2G[a, b, c, e] = d^2 G_ab / (d x^c d x^e)``.
        """
        self.validate_point(p)
        values = self._bindings(p)
        d = self.dim
        G = np.zeros((d, d))
        dG = np.zeros((d, d, d))
        d2G = np.zeros((d, d, d, d))
        for a, entry in enumerate(self._metric_diag):
            jet = eval_jet2(entry, values, self.coordinates)
            G[a, a] = jet.value
            dG[a, a, :] = jet.grad
            d2G[a, a, :, :] = jet.hess
        return G, dG, d2G

    def christoffels(self, p):
        """Christoffel symbols Gamma[a, b, c] = Gamma^a_{bc} at ``p``.

        Computed generically from exact metric jets,
        Gamma^a_{bc} = (1/2) g^{ad} (d_b g_dc + d_c g_bd - d_d g_bc).
        """
        G, dG, _ = self.metric_jets(p)
        if np.linalg.cond(G) > CONDITION_LIMIT:
            raise SingularMetric(
                f"chart metric at t={p.t!r}, x={p.x!r} is numerically singular"
            )
        Ginv = np.linalg.inv(G)
        term1 = np.einsum("ad,dcb->abc", Ginv, dG)  # d_b g_dc
        term2 = np.einsum("ad,bdc->abc", Ginv, dG)  # d_c g_bd
        term3 = np.einsum("ad,bcd->abc", Ginv, dG)  # d_d g_bc
        return 0.5 * (term1 + term2 - term3)

    def curvature(self, p, X, Y, Z):
        """Curvature R(X, Y)Z of the warped metric in chart components.

        Uses the closed form for a warped product over a constant
        curvature fiber; the overall sign is pinned by the convention in
        the module docstring (round models have K = c).
        """
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        Z = np.asarray(Z, dtype=float)
        G = self.metric(p)
        f0, f1, f2 = self.warping_jet(p.t)
        lf1 = f1 / f0
        lf2 = f2 / f0 - lf1 * lf1

        def ip(a, b):
            return a @ G @ b

        e0 = np.zeros(self.dim)
        e0[0] = 1.0
        out = lf1 * lf1 * (ip(X, Z) * Y - ip(Y, Z) * X)
        out -= lf2 * Z[0] * (Y[0] * X - X[0] * Y)
        out += lf2 * (Y[0] * ip(X, Z) - X[0] * ip(Y, Z)) * e0
        if self.k != 0.0:
            Xs = X - X[0] * e0
            Ys = Y - Y[0] * e0
            Zs = Z - Z[0] * e0
            out -= (self.k / (f0 * f0)) * (ip(Xs, Zs) * Ys - ip(Ys, Zs) * Xs)
        return out

    def inner(self, p, X, Y):
        return float(np.asarray(X) @ self.metric(p) @ np.asarray(Y))

    def check_space_form(self, c, probes):
        """Residuals of ((f')^2 - k)/f^2 = -c = f''/f over ``probes``."""
        c = float(c)
        worst_ratio = 0.0
        worst_second = 0.0
        for t in np.asarray(probes, dtype=float):
            f0, f1, f2 = self.warping_jet(t)
            if f0 == 0.0:
                raise DomainError(f"warping function vanishes at t={t!r}", self.f)
            worst_ratio = max(worst_ratio, abs((f1 * f1 - self.k) / (f0 * f0) + c))
            worst_second = max(worst_second, abs(f2 / f0 + c))
        return SpaceFormCheck(c, worst_ratio, worst_second)


def space_form_models(n=2):
    """The five constant-curvature warped models with their c values.

    Each entry is ``(name, WarpedProduct, c, probe_window)``.
    """
    rows = [
        ("sphere", (0.0, math.pi), "sin(t)", Fiber.SPHERE, 1.0, (0.05, math.pi - 0.05)),
        ("euclidean", (-math.inf, math.inf), "1", Fiber.EUCLIDEAN, 0.0, (-4.0, 4.0)),
        ("euclidean-polar", (0.0, math.inf), "t", Fiber.SPHERE, 0.0, (0.05, 4.0)),
        ("hyperbolic", (-math.inf, math.inf), "exp(t)", Fiber.EUCLIDEAN, -1.0, (-2.0, 2.0)),
        ("hyperbolic-polar", (0.0, math.inf), "sinh(t)", Fiber.SPHERE, -1.0, (0.05, 4.0)),
    ]
    out = []
    for name, interval, f, fiber, c, window in rows:
        out.append((name, WarpedProduct(interval, f, fiber, n), c, window))
    return out
