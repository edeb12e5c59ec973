"""Rotational constant-angle hypersurfaces in R x_f R^n.

The profile curve (alpha(u), beta(u)) of a rotational hypersurface with
constant angle theta in (0, 1) satisfies

    alpha(u) = u sqrt(1 - theta^2) + c1,
    beta'(u) = theta / f(alpha(u)),

so beta is an antiderivative of theta/f(alpha) plus a constant c2.  For
exponential warpings f(t) = c3 exp(c5 t) the decaying antiderivative

    B(u) = -theta / (c3 c5 sqrt(1 - theta^2)) * exp(-c5 alpha(u))

is used (this normalization, with c2 = 0, is the one that produces a
soliton); for all other warpings the antiderivative vanishing at u0 is
computed by adaptive quadrature.  The surface is the orbit of the
profile under rotation of the fiber about the axis, with first
fundamental form diag(1, sigma^2 x sphere-chart weights) where
sigma(u) = f(alpha(u)) beta(u).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.integrate

from .ambient import Fiber, WarpedProduct
from .errors import QuadratureFailure, SigmaZero
from .expr import parse
from .hypersurface import (
    CallableComponent,
    ChartBox,
    ExpressionComponent,
    Immersion,
    Tag,
    induced_christoffels,
    shape_data,
)
from .jets import Jet2, as_expression, eval_jet2, eval_value
from .soliton import FD_TOL, SOLITON_TOL, Verdict, soliton_residual

QUAD_TOL = 1e-12
_POLAR_MARGIN = 0.2  # keeps grids away from sphere-chart poles for n >= 3


def sphere_chart(v):
    """Point of the unit sphere S^{m} in R^{m+1} from nested angles.

    ``v`` holds m angles, the first m-1 in (0, pi) and the last in
    (0, 2 pi): X1 = cos v1, X2 = sin v1 cos v2, and so on, the last
    component carrying sines only.
    """
    v = tuple(map(float, v))
    m = len(v)
    if m < 1:
        raise ValueError("need at least one angle")
    for j, angle in enumerate(v):
        top = 2.0 * math.pi if j == m - 1 else math.pi
        if not 0.0 < angle < top:
            raise ValueError(f"angle v{j + 1}={angle!r} outside (0, {top!r})")
    out = np.zeros(m + 1)
    sines = 1.0
    for j in range(m):
        out[j] = sines * math.cos(v[j])
        sines *= math.sin(v[j])
    out[m] = sines
    return out


def sphere_chart_expressions(n):
    """Component expressions X_1 .. X_n of S^{n-1} in angles v1 .. v_{n-1}."""
    if n < 2:
        raise ValueError("need n >= 2")
    sources = []
    prefix = ""
    for j in range(1, n):
        sources.append(f"{prefix}cos(v{j})")
        prefix += f"sin(v{j})*"
    sources.append(prefix.rstrip("*"))
    return tuple(parse(src) for src in sources)


@dataclass(frozen=True)
class RotationalProfile:
    """Data of a constant-angle rotational profile.

    ``theta`` must lie strictly in (0, 1); the endpoints are degenerate.
    """

    theta: float
    f: object
    n: int
    c1: float = 0.0
    c2: float = 0.0
    u_range: tuple = (-1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "f", as_expression(self.f))
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta={self.theta!r} must lie strictly in (0, 1)")
        if self.n < 2:
            raise ValueError("rotational hypersurfaces need n >= 2")
        u0, u1 = self.u_range
        if not u0 < u1:
            raise ValueError(f"empty u range {self.u_range!r}")

    @property
    def slope(self):
        return math.sqrt(1.0 - self.theta * self.theta)

    def alpha(self, u):
        return u * self.slope + self.c1

    def alpha_expression(self):
        return parse(f"u*{self.slope!r}+{self.c1!r}")


@dataclass(frozen=True)
class ProfileCurve:
    """Solved profile: alpha, beta, sigma = f(alpha) beta as callables."""

    profile: RotationalProfile
    alpha: object
    beta: object
    beta_d1: object
    beta_d2: object
    exponential_rate: float | None  # c5 when f = c3 exp(c5 t), else None

    def sigma(self, u):
        prof = self.profile
        f0 = eval_value(prof.f, {"t": self.alpha(u)})
        return f0 * self.beta(u)


def _detect_exponential(f, t_values):
    """Return (c3, c5) when (log f)' is constant over the samples."""
    rates = []
    for t in t_values:
        jet = eval_jet2(f, {"t": float(t)}, ("t",))
        rates.append(jet.grad[0] / jet.value)
    c5 = rates[0]
    if any(abs(r - c5) > 1e-12 * (1.0 + abs(c5)) for r in rates):
        return None
    t0 = float(t_values[0])
    f0 = eval_value(f, {"t": t0})
    c3 = f0 * math.exp(-c5 * t0)
    return c3, c5


def solve_profile(prof):
    """Solve the constant-angle conditions for the profile curve.

    beta is the pinned antiderivative of theta/f(alpha) plus c2 (see the
    module docstring for the normalization); for exponential warpings
    the closed form is cross-checked against adaptive quadrature to
    1e-10 before being returned.
    """
    theta = prof.theta
    slope = prof.slope
    u0, u1 = prof.u_range

    def alpha(u):
        return prof.alpha(u)

    def integrand(s):
        return theta / eval_value(prof.f, {"t": alpha(s)})

    @lru_cache(maxsize=4096)
    def integral_from_u0(u):
        value, abserr = scipy.integrate.quad(
            integrand, u0, u, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200
        )
        if abserr > 1e-10 * (1.0 + abs(value)):
            raise QuadratureFailure(
                f"profile integral error estimate {abserr!r} at u={u!r}"
            )
        return value

    probes = np.linspace(alpha(u0), alpha(u1), 17)
    exponential = _detect_exponential(prof.f, probes)

    if exponential is not None and abs(exponential[1]) > 1e-12:
        c3, c5 = exponential

        def base(u):
            return -theta / (c3 * c5 * slope) * math.exp(-c5 * alpha(u))

        for u in np.linspace(u0, u1, 9):
            expected = base(u) - base(u0)
            got = integral_from_u0(float(u))
            if abs(expected - got) > 1e-10 * (1.0 + abs(expected)):
                raise QuadratureFailure(
                    f"closed form and quadrature disagree at u={u!r}: "
                    f"{expected!r} vs {got!r}"
                )
        rate = c5
    else:

        def base(u):
            return integral_from_u0(float(u))

        rate = None

    def beta(u):
        return base(u) + prof.c2

    def beta_d1(u):
        return theta / eval_value(prof.f, {"t": alpha(u)})

    def beta_d2(u):
        jet = eval_jet2(prof.f, {"t": alpha(u)}, ("t",))
        return -theta * jet.grad[0] * slope / (jet.value * jet.value)

    return ProfileCurve(
        profile=prof,
        alpha=alpha,
        beta=beta,
        beta_d1=beta_d1,
        beta_d2=beta_d2,
        exponential_rate=rate,
    )


def _profile_jet(curve, values, active):
    """Jet of beta(u) in the chart's active variables."""
    u = float(values["u"])
    m = len(active)
    grad = np.zeros(m)
    hess = np.zeros((m, m))
    if "u" in active:
        i = active.index("u")
        grad[i] = curve.beta_d1(u)
        hess[i, i] = curve.beta_d2(u)
    return Jet2(curve.beta(u), grad, hess)


def default_chart(prof):
    """Chart box (u range) x (angle box) for the rotational immersion."""
    names = ("u",) + tuple(f"v{j}" for j in range(1, prof.n))
    lower = [prof.u_range[0]]
    upper = [prof.u_range[1]]
    for j in range(1, prof.n - 1):
        lower.append(0.0)
        upper.append(math.pi)
    lower.append(0.0)
    upper.append(2.0 * math.pi)
    return ChartBox(tuple(names), tuple(lower), tuple(upper))


def build_rotational(prof, curve=None, interval=(-math.inf, math.inf)):
    """Assemble the rotational immersion for a solved profile.

    The ambient is ``interval x_f R^n`` with the profile's warping
    function; pass a finite interval when f is positive only there.
    """
    if curve is None:
        curve = solve_profile(prof)
    ambient = WarpedProduct(interval, prof.f, Fiber.EUCLIDEAN, prof.n)
    chart = default_chart(prof)
    active = chart.names
    components = [ExpressionComponent(prof.alpha_expression())]
    for x_expr in sphere_chart_expressions(prof.n):

        def component(values, act, expr=x_expr):
            beta_jet = _profile_jet(curve, values, act)
            return beta_jet * eval_jet2(expr, values, act)

        components.append(CallableComponent(component))
    del active
    return Immersion(ambient, chart, components, tag=Tag.ROTATIONAL)


def weingarten_closed_form(prof, curve, u):
    """Principal curvatures (kappa_u, kappa_v) of the rotational surface.

    kappa_u belongs to the profile direction, kappa_v to each rotation
    direction (multiplicity n-1); the formulas divide by the signed
    radius sigma, so a vanishing sigma is an error rather than a branch.
    """
    u = float(u)
    jet = eval_jet2(prof.f, {"t": curve.alpha(u)}, ("t",))
    lf1 = jet.grad[0] / jet.value
    sigma = curve.sigma(u)
    if abs(sigma) < 1e-12:
        raise SigmaZero(f"sigma(u)={sigma!r} vanishes at u={u!r}")
    kappa_u = -lf1 * prof.theta
    kappa_v = prof.slope / sigma - lf1 * prof.theta
    return kappa_u, kappa_v


@dataclass
class ClassificationReport:
    """Results of the four constant-angle soliton checks.

    The construction is a soliton exactly when sigma is constant, the
    pointwise balance (f'/f)(1 - theta^2) + theta sqrt(1 - theta^2) /
    sigma vanishes, the trace-free Hessian residual vanishes, and f'/f
    is constant along the profile, which forces f(t) = c3 exp(c5 t).
    """

    sigma_constancy: float
    balance_residual: float
    soliton: object
    logf_slope_variation: float
    classified: bool
    immersion: object

    def to_dict(self):
        return {
            "classified": self.classified,
            "sigma_constancy": self.sigma_constancy,
            "balance_residual": self.balance_residual,
            "logf_slope_variation": self.logf_slope_variation,
            "soliton": self.soliton.to_dict(),
        }


def verify_classification(
    prof,
    interval=(-math.inf, math.inf),
    u_count=9,
    v_count=9,
    fd_step=1e-4,
):
    """Run the four checks deciding whether the build is a soliton."""
    curve = solve_profile(prof)
    imm = build_rotational(prof, curve, interval)
    chart = imm.chart

    margins = {"u": 0.05}
    counts = {"u": u_count}
    for j in range(1, prof.n):
        name = f"v{j}"
        counts[name] = v_count if j == prof.n - 1 else 5
        if j < prof.n - 1:
            margins[name] = _POLAR_MARGIN / math.pi
        else:
            margins[name] = 0.05
    grid = chart.grid(counts, margins)

    u_samples = chart.axis_points("u", max(u_count, 16), 0.05)
    sigma_sup = 0.0
    balance_sup = 0.0
    slopes = []
    for u in u_samples:
        u = float(u)
        d_sigma = (curve.sigma(u + fd_step) - curve.sigma(u - fd_step)) / (2.0 * fd_step)
        sigma_sup = max(sigma_sup, abs(d_sigma))
        jet = eval_jet2(prof.f, {"t": curve.alpha(u)}, ("t",))
        lf1 = jet.grad[0] / jet.value
        slopes.append(lf1)
        sigma = curve.sigma(u)
        if abs(sigma) < 1e-12:
            raise SigmaZero(f"sigma vanishes at u={u!r}")
        balance = lf1 * (1.0 - prof.theta**2) + prof.theta * prof.slope / sigma
        balance_sup = max(balance_sup, abs(balance))
    slope_variation = max(slopes) - min(slopes)

    report = soliton_residual(imm, grid)
    classified = bool(
        sigma_sup < FD_TOL
        and balance_sup < SOLITON_TOL
        and report.verdict is Verdict.SOLITON
        and slope_variation < SOLITON_TOL
    )
    return ClassificationReport(
        sigma_constancy=float(sigma_sup),
        balance_residual=float(balance_sup),
        soliton=report,
        logf_slope_variation=float(slope_variation),
        classified=classified,
        immersion=imm,
    )


def profile_geodesic_residual(imm, p):
    """|Gamma^k_{uu}| of the induced metric (the profile line is a geodesic)."""
    Gamma = induced_christoffels(imm, p)
    return float(np.max(np.abs(Gamma[:, 0, 0])))


def recovered_angle(imm, p):
    """Angle function from the generic shape pipeline, for cross-checks."""
    return shape_data(imm, p).theta
