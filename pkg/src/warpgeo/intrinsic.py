"""Intrinsic curvature of immersed hypersurfaces.

Two independent routes to the scalar curvature are provided: the Gauss
equation route (ambient curvature plus quadratic shape-operator terms,
traced over an orthonormal frame) and the closed warped-product formula
specialized to a constant-curvature fiber.  A finite-difference oracle
over the sampled induced metric ships for testing only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundaryTooClose
from .hypersurface import orthonormal_frame, shape_data


@dataclass(frozen=True)
class CurvaturePackage:
    """Scalar curvature (two routes), Ricci tensor and |Phi|^2 at a point."""

    scal_gauss: float
    scal_formula: float
    ric: np.ndarray
    ric_gradh: float
    traceless_norm2: float


def _ambient_ricci_sum(imm, sd, X_chart, Y_chart):
    """Sum_a <R(X, F_a) F_a, Y> over a g-orthonormal tangent frame."""
    F = orthonormal_frame(sd.metric)
    Fa = sd.frame @ F
    Xa = sd.frame @ X_chart
    Ya = sd.frame @ Y_chart
    G = imm.ambient.metric(sd.ambient_point)
    total = 0.0
    for a in range(Fa.shape[1]):
        RXF = imm.ambient.curvature(sd.ambient_point, Xa, Fa[:, a], Fa[:, a])
        total += float(RXF @ G @ Ya)
    return total


def curvature_package(imm, p):
    """Evaluate Ricci and scalar curvature at a chart point.

    The Ricci tensor (chart frame, lowered indices) is

        Ric(X, Y) = sum_a <R(X, F_a) F_a, Y> + n H g(AX, Y) - g(AX, AY)

    and ``scal_formula`` evaluates

        scal = (k / f(h)^2) (n-1) (n - 2 |grad h|^2)
             + n [(log f)'(h)]^2 (|grad h|^2 - (n-1))
             - (n-2) (log f)''(h) |grad h|^2
             - n (f''/f)(h) |grad h|^2
             + n^2 H^2 - |A|^2.
    """
    sd = shape_data(imm, p)
    n = sd.n
    g = sd.metric
    A = sd.shape_operator
    II = sd.second_fundamental
    H = sd.mean_curvature

    basis = np.eye(n)
    S = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            S[i, j] = _ambient_ricci_sum(imm, sd, basis[:, i], basis[:, j])
            S[j, i] = S[i, j]
    ric = S + n * H * II - A.T @ g @ A

    scal_gauss = float(np.trace(np.linalg.solve(g, ric)))

    f0, f1, f2 = imm.ambient.warping_jet(sd.height)
    lf1 = f1 / f0
    lf2 = f2 / f0 - lf1 * lf1
    W = sd.grad_h_norm2
    A_norm2 = float(np.trace(A @ A))
    k = imm.ambient.k
    scal_formula = (
        (k / (f0 * f0)) * (n - 1) * (n - 2.0 * W)
        + n * lf1 * lf1 * (W - (n - 1))
        - (n - 2) * lf2 * W
        - n * (f2 / f0) * W
        + n * n * H * H
        - A_norm2
    )

    ric_gradh = float(sd.grad_h @ ric @ sd.grad_h)
    return CurvaturePackage(
        scal_gauss=scal_gauss,
        scal_formula=float(scal_formula),
        ric=ric,
        ric_gradh=ric_gradh,
        traceless_norm2=A_norm2 - n * H * H,
    )


def ricci_gradh_extrinsic(imm, p):
    """Ric(grad h, grad h) evaluated directly in extrinsic terms.

    Independent code path from :func:`curvature_package` (no Ricci
    matrix is assembled); the two must agree.
    """
    sd = shape_data(imm, p)
    n = sd.n
    g = sd.metric
    A = sd.shape_operator
    gh = sd.grad_h
    Agh = A @ gh
    ambient_sum = _ambient_ricci_sum(imm, sd, gh, gh)
    return float(
        ambient_sum
        + n * sd.mean_curvature * (Agh @ g @ gh)
        - (Agh @ g @ Agh)
    )


def _metric_sampler(imm):
    def sample(point):
        jets = imm.component_jets(point)
        E = np.array([jet.grad for jet in jets])
        from .ambient import AmbientPoint

        q = AmbientPoint(jets[0].value, tuple(j.value for j in jets[1:]))
        G = imm.ambient.metric(q)
        return E.T @ G @ E

    return sample


def scalar_fd_oracle(imm, p, step=1e-3):
    """Scalar curvature from finite differences of the induced metric.

    Test-only oracle: samples g on a local 5-point stencil, assembles
    Christoffel symbols, their derivatives and the curvature contraction
    with no use of the ambient curvature or the shape operator.
    Accuracy is O(step^2); the documented contract is 1e-3.
    """
    p = tuple(map(float, p))
    n = imm.n
    for v, lo, hi in zip(p, imm.chart.lower, imm.chart.upper):
        if v - lo < 3.0 * step or hi - v < 3.0 * step:
            raise BoundaryTooClose(
                f"point {p!r} is within 3*step of the chart boundary"
            )
    sample = _metric_sampler(imm)

    def shifted(k, amount, base=p):
        out = list(base)
        out[k] += amount
        return tuple(out)

    g0 = sample(p)
    plus1 = [sample(shifted(k, step)) for k in range(n)]
    minus1 = [sample(shifted(k, -step)) for k in range(n)]
    plus2 = [sample(shifted(k, 2 * step)) for k in range(n)]
    minus2 = [sample(shifted(k, -2 * step)) for k in range(n)]

    dg = np.zeros((n, n, n))
    d2g = np.zeros((n, n, n, n))  # d2g[c, k, i, j] = d_c d_k g_ij
    for k in range(n):
        dg[k] = (-plus2[k] + 8.0 * plus1[k] - 8.0 * minus1[k] + minus2[k]) / (12.0 * step)
        d2g[k, k] = (
            -plus2[k] + 16.0 * plus1[k] - 30.0 * g0 + 16.0 * minus1[k] - minus2[k]
        ) / (12.0 * step * step)
    for c in range(n):
        for k in range(c + 1, n):
            gpp = sample(shifted(k, step, shifted(c, step)))
            gpm = sample(shifted(k, -step, shifted(c, step)))
            gmp = sample(shifted(k, step, shifted(c, -step)))
            gmm = sample(shifted(k, -step, shifted(c, -step)))
            mixed = (gpp - gpm - gmp + gmm) / (4.0 * step * step)
            d2g[c, k] = mixed
            d2g[k, c] = mixed

    ginv = np.linalg.inv(g0)
    B = np.einsum("ilj->lij", dg) + np.einsum("jil->lij", dg) - dg
    Gamma = 0.5 * np.einsum("kl,lij->kij", ginv, B)
    dginv = -np.einsum("km,cmn,nl->ckl", ginv, dg, ginv)
    dB = (
        np.einsum("cilj->clij", d2g)
        + np.einsum("cjil->clij", d2g)
        - np.einsum("clij->clij", d2g)
    )
    dGamma = 0.5 * (
        np.einsum("ckl,lij->ckij", dginv, B) + np.einsum("kl,clij->ckij", ginv, dB)
    )
    # R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
    #            + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
    riem = (
        np.einsum("cadb->abcd", dGamma)
        - np.einsum("dacb->abcd", dGamma)
        + np.einsum("ace,edb->abcd", Gamma, Gamma)
        - np.einsum("ade,ecb->abcd", Gamma, Gamma)
    )
    ric = np.einsum("abad->bd", riem)
    return float(np.einsum("bd,bd->", ginv, ric))
