"""Riemannian curvature at the origin of a homogeneous space.

Two independent routes are provided:

* a brute-force Levi-Civita table from the Koszul formula for left-invariant
  metrics on a Lie group (``h_dim == 0``), used as ground truth;
* the closed algebraic curvature of a naturally reductive space, from which
  the flag-curvature numerator vector is built.

Convention throughout: ``R(U,V) = [nabla_U, nabla_V] - nabla_[U,V]`` and
``K(U,Y) = g(R(U,Y)Y, U) / (g(U,U)g(Y,Y) - g(U,Y)^2)``, so compact groups with
bi-invariant metrics are positively curved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie_core import (
    DERIVED_TOL,
    DegenerateFlagError,
    HypothesisViolation,
    InputError,
    ReductiveSpace,
    UnsupportedConfiguration,
    bracket,
    check_naturally_reductive,
)

DEGENERATE_TOL = 1e-14

PAPER_LITERAL = "paper-literal"
ORACLE_CONSISTENT = "oracle-consistent"
VARIANTS = (PAPER_LITERAL, ORACLE_CONSISTENT)


@dataclass(frozen=True)
class ConnectionTable:
    """``gamma[i, j, k]``: coefficient of ``e_k`` in ``nabla_{e_i} e_j``."""

    gamma: np.ndarray

    def covariant(self, u, v) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u, v, self.gamma)


def _require_group(rs: ReductiveSpace) -> None:
    if rs.h_dim != 0:
        raise UnsupportedConfiguration(
            f"the Koszul oracle handles left-invariant metrics on Lie groups only (h_dim={rs.h_dim})")


def levi_civita_table(rs: ReductiveSpace) -> ConnectionTable:
    """Solve ``2 g(nabla_i e_j, e_k) = g([e_i,e_j],e_k) - g([e_j,e_k],e_i) + g([e_k,e_i],e_j)``."""
    _require_group(rs)
    c = rs.algebra.structure
    G = rs.gram
    # lowered[i, j, k] = g([e_i, e_j], e_k)
    lowered = np.einsum("ijl,lk->ijk", c, G)
    rhs = lowered - np.einsum("jki->ijk", lowered) + np.einsum("kij->ijk", lowered)
    gamma = 0.5 * np.linalg.solve(G, rhs.reshape(-1, rs.dim).T).T.reshape(c.shape)
    gamma.setflags(write=False)
    return ConnectionTable(gamma)


def connection_residuals(rs: ReductiveSpace, table: ConnectionTable) -> tuple[float, float]:
    """Max residuals of metric compatibility and torsion-freeness."""
    G = rs.gram
    low = np.einsum("ijl,lk->ijk", table.gamma, G)
    metric = low + np.einsum("ikj->ijk", low)
    torsion = table.gamma - np.einsum("jik->ijk", table.gamma) - rs.algebra.structure
    return float(np.max(np.abs(metric))), float(np.max(np.abs(torsion)))


def curvature_oracle(rs: ReductiveSpace, table: ConnectionTable, u, v, w) -> np.ndarray:
    nab = table.covariant
    u, v, w = (np.asarray(t, dtype=float) for t in (u, v, w))
    return nab(u, nab(v, w)) - nab(v, nab(u, w)) - nab(bracket(rs.algebra, u, v), w)


def gram_determinant(rs: ReductiveSpace, y, u) -> float:
    yy, uu, yu = rs.inner(y, y), rs.inner(u, u), rs.inner(y, u)
    det = yy * uu - yu * yu
    if not det > DEGENERATE_TOL * yy * uu or yy <= 0:
        raise DegenerateFlagError("flagpole and transverse edge are linearly dependent")
    return det


def sectional_oracle(rs: ReductiveSpace, y, u, table: ConnectionTable | None = None) -> float:
    """Sectional curvature of the plane ``span{y, u}`` through the Koszul table."""
    table = table or levi_civita_table(rs)
    det = gram_determinant(rs, y, u)
    return rs.inner(curvature_oracle(rs, table, u, y, y), u) / det


def is_parallel_koszul(rs: ReductiveSpace, x, table: ConnectionTable | None = None,
                       tol: float = 1e-12) -> bool:
    """``nabla_{e_i} X = 0`` for every basis vector (Lie-group case)."""
    table = table or levi_civita_table(rs)
    cov = np.einsum("j,ijk->ik", np.asarray(x, dtype=float), table.gamma)
    return bool(np.max(np.abs(cov)) <= tol)


def _require_nat_reductive(rs: ReductiveSpace, force: bool) -> None:
    if force:
        return
    ok, res = check_naturally_reductive(rs)
    if not ok:
        raise HypothesisViolation(
            f"space is not naturally reductive (residual {res:.3e} > {DERIVED_TOL:g}); "
            "pass force=True to evaluate anyway")


def curvature_nat_reductive(rs: ReductiveSpace, u, v, w, force: bool = False) -> np.ndarray:
    """``R(U,V)W`` at the origin of a naturally reductive space, ``m``-coordinates in and out.

    ``1/4 [U,[V,W]_m]_m - 1/4 [V,[U,W]_m]_m - 1/2 [[U,V]_m,W]_m - [[U,V]_h,W]``
    """
    _require_nat_reductive(rs, force)
    a = rs.algebra
    p = rs.h_dim
    U, V, W = rs.embed(u), rs.embed(v), rs.embed(w)

    def m_(x):
        out = x.copy()
        out[:p] = 0.0
        return out

    def h_(x):
        out = np.zeros_like(x)
        out[:p] = x[:p]
        return out

    uv = bracket(a, U, V)
    r = (0.25 * m_(bracket(a, U, m_(bracket(a, V, W))))
         - 0.25 * m_(bracket(a, V, m_(bracket(a, U, W))))
         - 0.5 * m_(bracket(a, m_(uv), W))
         - bracket(a, h_(uv), W))
    return rs.m_part(r)


def alpha(rs: ReductiveSpace, y, u, variant: str = ORACLE_CONSISTENT, force: bool = False) -> np.ndarray:
    """Numerator vector of the flag curvature: ``g_Y(alpha, U)`` over the Gram determinant.

    ``oracle-consistent`` is ``R(U,Y)Y`` from the naturally reductive curvature,
    which reproduces the Koszul sectional curvature when the drift vanishes.
    ``paper-literal`` is ``1/2 [[U,Y]_m,Y]_m + [Y,[Y,U]_h]``, kept for comparison.
    """
    _require_nat_reductive(rs, force)
    gram_determinant(rs, y, u)
    if variant == ORACLE_CONSISTENT:
        return curvature_nat_reductive(rs, u, y, y, force=True)
    if variant == PAPER_LITERAL:
        a = rs.algebra
        p = rs.h_dim
        Y, U = rs.embed(y), rs.embed(u)
        uy = bracket(a, U, Y)
        uy[:p] = 0.0
        first = bracket(a, uy, Y)
        yu = bracket(a, Y, U)
        yu[p:] = 0.0
        second = bracket(a, Y, yu)
        return rs.m_part(0.5 * first + second)
    raise InputError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def sectional_nat_reductive(rs: ReductiveSpace, y, u, force: bool = False) -> float:
    """Sectional curvature of ``g`` from the naturally reductive curvature formula."""
    det = gram_determinant(rs, y, u)
    return rs.inner(alpha(rs, y, u, ORACLE_CONSISTENT, force=force), u) / det


def curvature_second_kind(rs: ReductiveSpace, u, v, w) -> np.ndarray:
    """Curvature ``-[[U,V]_h, W]`` of the canonical connection of the second kind.

    Inputs and output are full algebra vectors.  This is not the Levi-Civita
    curvature; it vanishes identically on Lie groups.
    """
    a = rs.algebra
    uv = bracket(a, u, v)
    uv[rs.h_dim:] = 0.0
    return -bracket(a, uv, w)
