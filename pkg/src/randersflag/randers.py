"""Invariant Randers metrics ``F(y) = sqrt(g(y,y)) + g(X,y)`` and their flag curvature."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lie_core import (
    AdmissibilityReport,
    DegenerateFlagError,
    HypothesisViolation,
    InputError,
    ReductiveSpace,
    UnsupportedConfiguration,
    bracket,
    check_drift_admissible,
    check_naturally_reductive,
)
from .riemann import (
    ORACLE_CONSISTENT,
    PAPER_LITERAL,
    VARIANTS,
    alpha,
    curvature_oracle,
    gram_determinant,
    is_parallel_koszul,
    levi_civita_table,
    sectional_oracle,
)

# near eps**0.25: balances O(h^2) truncation against eps/h^2 rounding
FD_STEP = 1e-4
# Richardson-extrapolated step used by the assembled curvature route
ASSEMBLY_STEP = 1e-3

KNOWN_INCORRECT = ("KNOWN-INCORRECT: this flag-curvature formula uses the curvature of the "
                   "canonical connection of the second kind, which vanishes on every Lie group "
                   "even when the true curvature does not")


@dataclass(frozen=True)
class RandersSpec:
    space: ReductiveSpace
    x: np.ndarray
    admissibility: AdmissibilityReport = field(init=False, repr=False)

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        if x.shape != (self.space.m_dim,):
            raise InputError(f"drift must have length {self.space.m_dim}, got shape {x.shape}")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        adm = check_drift_admissible(self.space, x)
        if not adm.norm_ok:
            raise InputError(f"drift must satisfy g(X,X) < 1, got {adm.norm_sq!r}")
        if not adm.h_invariant:
            raise InputError("drift is not ad(h)-invariant: [h, X] != 0")
        object.__setattr__(self, "admissibility", adm)

    @classmethod
    def riemannian(cls, space: ReductiveSpace) -> "RandersSpec":
        return cls(space, np.zeros(space.m_dim))


@dataclass(frozen=True)
class Flag:
    y: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        for name in ("y", "u"):
            v = np.array(getattr(self, name), dtype=float)
            v.setflags(write=False)
            object.__setattr__(self, name, v)


def randers_norm(spec: RandersSpec, y) -> float:
    g = spec.space.inner
    return float(np.sqrt(max(g(y, y), 0.0)) + g(spec.x, y))


def _yy(spec: RandersSpec, y) -> float:
    yy = spec.space.inner(y, y)
    if not yy > 0:
        raise InputError("fundamental tensor is undefined at y = 0")
    return yy


def fundamental_tensor(spec: RandersSpec, y, u, v) -> float:
    g = spec.space.inner
    x = spec.x
    yy = _yy(spec, y)
    ry = np.sqrt(yy)
    xu, xv, xy = g(x, u), g(x, v), g(x, y)
    yu, yv = g(y, u), g(y, v)
    # written so that swapping u and v is bitwise symmetric
    uv = 0.5 * (g(u, v) + g(v, u))
    return (uv + xu * xv - xy * (yv * yu) / yy ** 1.5
            + ((xu * yv + xv * yu) + xy * uv) / ry)


def fundamental_tensor_alpha_beta(spec: RandersSpec, y, u, v) -> float:
    """Textbook ``alpha + beta`` expansion:
    ``(F/a)(a(u,v) - a_u a_v / a^2) + (a_u/a + b_u)(a_v/a + b_v)``."""
    g = spec.space.inner
    a = np.sqrt(_yy(spec, y))
    F = randers_norm(spec, y)
    au, av = g(y, u), g(y, v)
    bu, bv = g(spec.x, u), g(spec.x, v)
    return (F / a) * (g(u, v) - au * av / a ** 2) + (au / a + bu) * (av / a + bv)


def fundamental_matrix(spec: RandersSpec, y) -> np.ndarray:
    n = spec.space.m_dim
    eye = np.eye(n)
    return np.array([[fundamental_tensor(spec, y, eye[i], eye[j]) for j in range(n)]
                     for i in range(n)])


def _mixed_difference(spec: RandersSpec, y, u, v, step: float) -> float:
    def F2(s, t):
        return randers_norm(spec, y + s * u + t * v) ** 2

    h = step
    return 0.5 * (F2(h, h) - F2(h, -h) - F2(-h, h) + F2(-h, -h)) / (4 * h * h)


def _unit_scaled(spec: RandersSpec, y, u, v):
    g = spec.space.inner
    y, u, v = (np.asarray(t, dtype=float) for t in (y, u, v))
    ny = np.sqrt(_yy(spec, y))
    nu = np.sqrt(g(u, u)) or 1.0
    nv = np.sqrt(g(v, v)) or 1.0
    return y / ny, u / nu, v / nv, nu * nv


def fundamental_tensor_fd(spec: RandersSpec, y, u, v, step: float = FD_STEP) -> float:
    """Central mixed difference of ``F^2 / 2``.

    The tensor is 0-homogeneous in ``y`` and bilinear in ``(u, v)``, so the
    inputs are rescaled to unit length first; the step is then meaningful.
    """
    if step <= 0:
        raise InputError("finite-difference step must be positive")
    y1, u1, v1, scale = _unit_scaled(spec, y, u, v)
    return scale * _mixed_difference(spec, y1, u1, v1, step)


def fundamental_tensor_fd_richardson(spec: RandersSpec, y, u, v,
                                     step: float = FD_STEP) -> tuple[float, float]:
    """One Richardson halving: ``(extrapolated value, truncation estimate)``."""
    if step <= 0:
        raise InputError("finite-difference step must be positive")
    y1, u1, v1, scale = _unit_scaled(spec, y, u, v)
    d1 = _mixed_difference(spec, y1, u1, v1, step)
    d2 = _mixed_difference(spec, y1, u1, v1, step / 2)
    return scale * (4 * d2 - d1) / 3, scale * abs(d2 - d1)


def _check_flag(spec: RandersSpec, flag: Flag) -> None:
    m = spec.space.m_dim
    if flag.y.shape != (m,) or flag.u.shape != (m,):
        raise InputError(f"flag vectors must have length {m}")
    gram_determinant(spec.space, flag.y, flag.u)


def _require_berwald(spec: RandersSpec, force: bool) -> None:
    if force:
        return
    ok, res = check_naturally_reductive(spec.space)
    if not ok:
        raise HypothesisViolation(
            f"space is not naturally reductive (residual {res:.3e}); use force to evaluate anyway")
    if not spec.admissibility.parallel:
        raise HypothesisViolation("drift vector is not parallel ([U, X]_m != 0 for some U in m)")


def _literal_abc(spec: RandersSpec, y, u, al) -> tuple[float, float, float]:
    """``A``, ``B``, ``C`` of the literal variant; ``B`` keeps a minus before the brace."""
    g = spec.space.inner
    x = spec.x
    yy, uu, yu = g(y, y), g(u, u), g(y, u)
    xy, xu, xa = g(x, y), g(x, u), g(x, al)
    au, ya = g(al, u), g(y, al)
    ry = np.sqrt(yy)
    A = (au + xa * xu - xy * yu * ya / yy ** 1.5
         + (xa * yu + xy * au + xu * ya) / ry)
    B = ((yy + xy ** 2 + 2 * xy * ry)
         * (uu + xu ** 2 - (xy * yu ** 2 / yy + xy * uu + 2 * xu * yu) / ry))
    C = (yu * (1 + xy / ry) + xu * (xy + ry)) ** 2
    return A, B, C


def flag_curvature_thm42(spec: RandersSpec, flag: Flag, variant: str = ORACLE_CONSISTENT,
                         force: bool = False) -> float:
    """Flag curvature of a Berwald-type invariant Randers metric on a naturally reductive space.

    ``oracle-consistent``: ``g_Y(R(U,Y)Y, U) / (g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2)``
    with the closed-form fundamental tensor.  ``paper-literal``: the unsimplified
    ``A / (B - C)`` with the literal numerator vector, kept for comparison.
    """
    if variant not in VARIANTS:
        raise InputError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    _check_flag(spec, flag)
    _require_berwald(spec, force)
    y, u = flag.y, flag.u
    al = alpha(spec.space, y, u, variant, force=True)
    if variant == PAPER_LITERAL:
        A, B, C = _literal_abc(spec, y, u, al)
        return float(A / (B - C))

    def gy(a, b):
        return fundamental_tensor(spec, y, a, b)

    den = gy(y, y) * gy(u, u) - gy(y, u) ** 2
    return float(gy(al, u) / den)


def flag_curvature_assembled(spec: RandersSpec, flag: Flag, force: bool = False) -> float:
    """Flag curvature from the Koszul curvature and a finite-difference fundamental tensor.

    Valid for Lie groups when the drift is parallel, so that the Chern
    connection of ``F`` is the Levi-Civita connection of ``g``.
    """
    rs = spec.space
    if rs.h_dim != 0:
        raise UnsupportedConfiguration("assembled flag curvature needs the Koszul oracle (h_dim = 0)")
    _check_flag(spec, flag)
    table = levi_civita_table(rs)
    if not force and not is_parallel_koszul(rs, spec.x, table):
        raise HypothesisViolation("drift vector is not parallel for the Levi-Civita connection")
    y, u = flag.y, flag.u
    ru = curvature_oracle(rs, table, u, y, y)

    def gy(a, b):
        return fundamental_tensor_fd_richardson(spec, y, a, b, ASSEMBLY_STEP)[0]

    den = gy(y, y) * gy(u, u) - gy(y, u) ** 2
    num = gy(ru, u) if np.any(ru) else 0.0
    return float(num / den)


def flag_curvature_denghou(spec: RandersSpec, flag: Flag) -> float:
    """The refuted formula ``2|Y| / (2|Y| + g(X,Y)) * g([[Y,U]_h,Y],U) / Gram``.

    Kept for comparison only; see :data:`KNOWN_INCORRECT`.
    """
    _check_flag(spec, flag)
    rs = spec.space
    g = rs.inner
    y, u = flag.y, flag.u
    det = gram_determinant(rs, y, u)
    Y, U = rs.embed(y), rs.embed(u)
    yu = bracket(rs.algebra, Y, U)
    yu[rs.h_dim:] = 0.0
    kp = g(rs.m_part(bracket(rs.algebra, yu, Y)), u) / det
    ry = np.sqrt(g(y, y))
    return float(2 * ry / (2 * ry + g(spec.x, y)) * kp)


@dataclass
class CurvatureReport:
    y: list[float]
    u: list[float]
    F_y: float
    g_Y: dict[str, float]
    g_Y_fd_max_abs_diff: float
    naturally_reductive: bool
    naturally_reductive_residual: float
    drift_parallel: bool
    forced: bool
    K_thm42_oracle_consistent: float | None = None
    K_thm42_paper_literal: float | None = None
    K_assembled_oracle: float | None = None
    K_thm22_denghou: float | None = None
    sectional_g: float | None = None
    discrepancy: dict[str, float | None] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "flag": {"y": self.y, "u": self.u},
            "F_y": self.F_y,
            "g_Y": self.g_Y,
            "g_Y_fd_max_abs_diff": self.g_Y_fd_max_abs_diff,
            "hypotheses": {
                "naturally_reductive": self.naturally_reductive,
                "naturally_reductive_residual": self.naturally_reductive_residual,
                "drift_parallel": self.drift_parallel,
                "forced": self.forced,
            },
            "K_thm42_oracle_consistent": self.K_thm42_oracle_consistent,
            "K_thm42_paper_literal": self.K_thm42_paper_literal,
            "K_assembled_oracle": self.K_assembled_oracle,
            "K_thm22_denghou": self.K_thm22_denghou,
            "sectional_g": self.sectional_g,
            "discrepancy": self.discrepancy,
            "notes": self.notes,
        }


def _diff(a: float | None, b: float | None) -> tuple[float | None, float | None]:
    if a is None or b is None:
        return None, None
    d = abs(a - b)
    scale = max(abs(a), abs(b))
    return d, (d / scale if scale > 0 else 0.0)


def curvature_report(spec: RandersSpec, flag: Flag, variants=(ORACLE_CONSISTENT,),
                     force: bool = False) -> CurvatureReport:
    """Every flag-curvature variant whose hypotheses hold, plus diagnostics.

    ``force`` evaluates the closed forms even when their hypotheses fail; the
    report then says so.
    """
    _check_flag(spec, flag)
    rs = spec.space
    y, u = flag.y, flag.u
    nat_ok, nat_res = check_naturally_reductive(rs)
    parallel = spec.admissibility.parallel
    if rs.h_dim == 0:
        parallel = parallel and is_parallel_koszul(rs, spec.x)
    gvals = {
        "YY": fundamental_tensor(spec, y, y, y),
        "UU": fundamental_tensor(spec, y, u, u),
        "YU": fundamental_tensor(spec, y, y, u),
    }
    fd_diff = max(abs(fundamental_tensor_fd(spec, y, a, b) - gvals[k])
                  for k, (a, b) in {"YY": (y, y), "UU": (u, u), "YU": (y, u)}.items())
    rep = CurvatureReport(
        y=[float(t) for t in y], u=[float(t) for t in u], F_y=randers_norm(spec, y),
        g_Y=gvals, g_Y_fd_max_abs_diff=fd_diff,
        naturally_reductive=nat_ok, naturally_reductive_residual=nat_res,
        drift_parallel=parallel, forced=force,
    )
    hyp_ok = nat_ok and spec.admissibility.parallel
    if hyp_ok or force:
        if not hyp_ok:
            rep.notes.append("closed-form values were forced outside their hypotheses and are "
                             "not trustworthy")
        rep.K_thm42_oracle_consistent = flag_curvature_thm42(spec, flag, ORACLE_CONSISTENT, force=True)
        if PAPER_LITERAL in variants:
            rep.K_thm42_paper_literal = flag_curvature_thm42(spec, flag, PAPER_LITERAL, force=True)
    else:
        rep.notes.append("closed form not evaluated: space is not naturally reductive or drift "
                         "is not parallel")
    if rs.h_dim == 0:
        table = levi_civita_table(rs)
        rep.sectional_g = sectional_oracle(rs, y, u, table)
        if is_parallel_koszul(rs, spec.x, table):
            rep.K_assembled_oracle = flag_curvature_assembled(spec, flag)
    rep.K_thm22_denghou = flag_curvature_denghou(spec, flag)
    rep.notes.append("K_thm22_denghou is " + KNOWN_INCORRECT)

    ref = rep.K_assembled_oracle
    d_ac, r_ac = _diff(rep.K_thm42_oracle_consistent, ref)
    d_pl, r_pl = _diff(rep.K_thm42_paper_literal, rep.K_thm42_oracle_consistent)
    d_dh, r_dh = _diff(rep.K_thm22_denghou, ref if ref is not None else rep.K_thm42_oracle_consistent)
    rep.discrepancy = {
        "thm42_vs_assembled_abs": d_ac, "thm42_vs_assembled_rel": r_ac,
        "paper_literal_vs_oracle_consistent_abs": d_pl, "paper_literal_vs_oracle_consistent_rel": r_pl,
        "denghou_vs_reference_abs": d_dh, "denghou_vs_reference_rel": r_dh,
    }
    return rep


def random_flag(rng: np.random.Generator, rs: ReductiveSpace) -> Flag:
    """Gaussian flag, redrawn until nondegenerate."""
    while True:
        y, u = rng.standard_normal(rs.m_dim), rng.standard_normal(rs.m_dim)
        try:
            gram_determinant(rs, y, u)
        except DegenerateFlagError:
            continue
        return Flag(y, u)
