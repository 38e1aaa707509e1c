"""The r-parameterized deformation of a semisimple Lie algebra.

T_r scales the compact part k by r and fixes s.  The deformed bracket
is [X,Y]_r = T_r[T_r^{-1}X, T_r^{-1}Y]; its Killing form is
<X,Y>_r = <T_r^{-1}X, T_r^{-1}Y>.  The map

    psi_r(Z) = Z + ((r-1)/(r+1)) theta(Z)

carries root spaces of the base algebra to eigenspaces of the deformed
ad(H).  At r = infinity the coefficient becomes 1 and psi sends n^+
into k; the deformed orbit degenerates to the semidirect orbit, a
bundle of affine fibers over the compact flag orbit.

r = infinity is a first-class context value; operations that only make
sense at finite r (the deformed bracket, Killing form and ad) reject it
explicitly instead of approximating with a large parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import CartanData, DomainError, OrbitSample, RepresentationError, h_subspaces, sample_k_operators
from .numerics import Tolerance, matrix_exp

R_GRID = (0.1, 0.5, 1.0, 2.0, 10.0, 100.0)
R_GRID_FULL = R_GRID + (math.inf,)


@dataclass(frozen=True)
class DeformationContext:
    cd: CartanData
    r: float
    t_r: np.ndarray | None  # None at r = infinity
    t_r_inv: np.ndarray | None
    psi_r: np.ndarray
    structure_r: np.ndarray | None = field(repr=False, default=None)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.r)

    def _require_finite(self, op: str):
        if not self.finite:
            raise DomainError(f"{op} is not defined at r = infinity")


def make_context(cd: CartanData, r: float) -> DeformationContext:
    """Build the deformation data for a parameter r > 0 or infinity."""
    if not (r > 0):
        raise DomainError("deformation parameter must satisfy r > 0")
    dim = cd.alg.dim
    if math.isinf(r):
        q = 1.0
        psi = np.eye(dim) + q * cd.theta
        return DeformationContext(cd=cd, r=r, t_r=None, t_r_inv=None, psi_r=psi)
    q = (r - 1.0) / (r + 1.0)
    psi = np.eye(dim) + q * cd.theta
    # theta is diagonal +/-1 on the adapted basis, so T_r is diagonal too
    diag = np.where(np.abs(np.diag(cd.theta) - 1.0) < 1e-12, r, 1.0)
    t_r = np.diag(diag)
    t_r_inv = np.diag(1.0 / diag)
    c = cd.alg.structure
    structure_r = np.einsum("ia,jb,abc,kc->ijk", t_r_inv, t_r_inv, c, t_r)
    return DeformationContext(
        cd=cd, r=r, t_r=t_r, t_r_inv=t_r_inv, psi_r=psi, structure_r=structure_r
    )


def bracket_r(ctx: DeformationContext, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    ctx._require_finite("the deformed bracket")
    x = ctx.cd.alg._check_vec(x)
    y = ctx.cd.alg._check_vec(y)
    return np.einsum("i,j,ijk->k", x, y, ctx.structure_r)


def ad_r(ctx: DeformationContext, x: np.ndarray) -> np.ndarray:
    """Coefficient matrix of ad_r(x) = T_r ad(T_r^{-1}x) T_r^{-1}."""
    ctx._require_finite("ad_r")
    return ctx.t_r @ ctx.cd.alg.ad(ctx.t_r_inv @ x) @ ctx.t_r_inv


def killing_r(ctx: DeformationContext, x: np.ndarray, y: np.ndarray) -> float:
    ctx._require_finite("the deformed Killing form")
    return float((ctx.t_r_inv @ x) @ ctx.cd.alg.killing @ (ctx.t_r_inv @ y))


def psi_r_map(ctx: DeformationContext, z: np.ndarray) -> np.ndarray:
    return ctx.psi_r @ np.asarray(z, dtype=float)


def ad_r_exp_orbit(
    ctx: DeformationContext, a: np.ndarray, t: float, y: np.ndarray,
    tol: Tolerance = Tolerance(),
) -> np.ndarray:
    """exp(t ad_r(A)).Y for A in k; equals exp((t/r) ad(A)).Y."""
    ctx._require_finite("ad_r exponentials")
    a = np.asarray(a, dtype=float)
    if np.linalg.norm(ctx.cd.project_s(a)) > tol.scale(a) * 10 + tol.abs_eps:
        raise DomainError("exponential direction must lie in the compact part k")
    return matrix_exp(t * ad_r(ctx, a)) @ np.asarray(y, dtype=float)


def sample_deformed_orbit(
    ctx: DeformationContext,
    h: np.ndarray,
    seed: int,
    n_base: int,
    n_fiber: int,
    fiber_scale: float = 1.0,
) -> list[OrbitSample]:
    """Tagged samples Ad(k).H + psi_r(Ad(k).X_c), X_c random in n_H^+.

    At r = 1 this samples the adjoint orbit; at r = infinity the
    semidirect orbit over the flag Ad(K).H.
    """
    cd = ctx.cd
    cd.check_chamber(h)
    n_plus, _, _ = h_subspaces(cd, h)
    k_ops = sample_k_operators(cd, seed, n_base)
    fiber_rng = np.random.default_rng([seed, 0x5F1BE])
    coeff_sets = [
        fiber_scale * fiber_rng.standard_normal(n_plus.shape[1]) for _ in range(n_fiber)
    ]
    kind = "deformed" if ctx.finite and ctx.r != 1.0 else ("adjoint" if ctx.finite else "semidirect")
    samples = []
    for b_tag, k_op in enumerate(k_ops):
        base = k_op @ np.asarray(h, dtype=float)
        for f_tag, c in enumerate(coeff_sets):
            x_c = n_plus @ c
            p = base + ctx.psi_r @ (k_op @ x_c)
            samples.append(
                OrbitSample(
                    point=p,
                    kind=kind,
                    base_point=base,
                    k_op=k_op,
                    fiber=x_c,
                    fiber_coeffs=c,
                    r=ctx.r,
                    base_tag=b_tag,
                    fiber_tag=f_tag,
                )
            )
    return samples


def tilde_psi_r(ctx: DeformationContext, p: OrbitSample) -> OrbitSample:
    """Push a tagged orbit sample to the deformation parameter of ctx.

    The base point is kept and the fiber coordinate is re-emitted
    through psi_r, following the bundle trivialization (k, X) ->
    Ad(k).H + psi_r(Ad(k).X).
    """
    if p.k_op is None or p.fiber is None or p.k_op.size == 0:
        raise RepresentationError("sample carries no construction tags")
    point = p.base_point + ctx.psi_r @ (p.k_op @ p.fiber)
    kind = "deformed" if ctx.finite and ctx.r != 1.0 else ("adjoint" if ctx.finite else "semidirect")
    return OrbitSample(
        point=point,
        kind=kind,
        base_point=p.base_point,
        k_op=p.k_op,
        fiber=p.fiber,
        fiber_coeffs=p.fiber_coeffs,
        r=ctx.r,
        base_tag=p.base_tag,
        fiber_tag=p.fiber_tag,
    )


def limit_deviation(
    ctx: DeformationContext, h: np.ndarray, seed: int, n: int, n_fiber: int = 4
) -> float:
    """max_p ||tilde_psi_r(p) - tilde_psi_inf(p)|| over a tagged grid."""
    ctx._require_finite("the limit deviation")
    base_ctx = make_context(ctx.cd, 1.0)
    inf_ctx = make_context(ctx.cd, math.inf)
    samples = sample_deformed_orbit(base_ctx, h, seed, n, n_fiber)
    dev = 0.0
    for p in samples:
        a = tilde_psi_r(ctx, p).point
        b = tilde_psi_r(inf_ctx, p).point
        dev = max(dev, float(np.linalg.norm(a - b)))
    return dev
