"""Canonical test algebras and the Lie-group counterexample runner."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .lie_core import InputError, LieAlgebraSpec, ReductiveSpace, UnsupportedConfiguration
from .randers import Flag, RandersSpec, flag_curvature_denghou, random_flag
from .riemann import levi_civita_table, sectional_oracle

ZERO_TOL = 1e-9
DEFAULT_SEED = 0


def heisenberg3() -> ReductiveSpace:
    a = LieAlgebraSpec.from_brackets("heisenberg3", 3, [(0, 1, 2, 1.0)])
    return ReductiveSpace(a, 0, np.eye(3))


def su2() -> ReductiveSpace:
    a = LieAlgebraSpec.from_brackets("su2", 3, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)])
    return ReductiveSpace(a, 0, np.eye(3))


def su2_x_r(t: float) -> tuple[ReductiveSpace, np.ndarray]:
    """su(2) plus a central line, drift ``t * e4``."""
    if not 0 <= t < 1:
        raise InputError(f"su2_x_r needs 0 <= t < 1, got {t}")
    a = LieAlgebraSpec.from_brackets("su2_x_r", 4, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)])
    return ReductiveSpace(a, 0, np.eye(4)), np.array([0.0, 0.0, 0.0, t])


def abelian(n: int) -> ReductiveSpace:
    if n < 1:
        raise InputError(f"abelian(n) needs n >= 1, got {n}")
    return ReductiveSpace(LieAlgebraSpec(f"abelian{n}", np.zeros((n, n, n))), 0, np.eye(n))


def toy_gh4() -> ReductiveSpace:
    """so(3) plus a central line, with ``h`` one rotation generator.

    ``h = span{e1}`` rotates the ``(e2, e3)`` plane of ``m = span{e2, e3, e4}``
    and fixes ``e4``; with the identity Gram matrix this is the unit 2-sphere
    times a line, a normal (hence naturally reductive) homogeneous space.
    """
    a = LieAlgebraSpec.from_brackets("toy_gh4", 4, [(0, 1, 2, 1.0), (0, 2, 1, -1.0), (1, 2, 0, 1.0)])
    return ReductiveSpace(a, 1, np.eye(3))


def direct_sum(name: str, first: LieAlgebraSpec, second: LieAlgebraSpec) -> LieAlgebraSpec:
    n1, n2 = first.dim, second.dim
    c = np.zeros((n1 + n2,) * 3)
    c[:n1, :n1, :n1] = first.structure
    c[n1:, n1:, n1:] = second.structure
    return LieAlgebraSpec(name, c)


def build(name: str) -> tuple[ReductiveSpace, np.ndarray]:
    """Resolve a builtin name (``heisenberg3``, ``su2``, ``su2_x_r:<t>``,
    ``abelian:<n>`` or ``abelian<n>``, ``toy_gh4``) to a space and drift."""
    key, _, arg = name.partition(":")
    if key == "su2_x_r":
        try:
            t = float(arg) if arg else 0.5
        except ValueError:
            raise InputError(f"bad su2_x_r parameter {arg!r}") from None
        return su2_x_r(t)
    if key.startswith("abelian"):
        digits = arg or key[len("abelian"):]
        if not digits.isdigit():
            raise InputError(f"bad abelian dimension in {name!r}")
        rs = abelian(int(digits))
    elif key == "heisenberg3" and not arg:
        rs = heisenberg3()
    elif key == "su2" and not arg:
        rs = su2()
    elif key == "toy_gh4" and not arg:
        rs = toy_gh4()
    else:
        raise InputError(f"unknown builtin {name!r}")
    return rs, np.zeros(rs.m_dim)


def basis_flags(m_dim: int) -> list[Flag]:
    eye = np.eye(m_dim)
    return [Flag(eye[i], eye[j]) for i, j in itertools.combinations(range(m_dim), 2)]


@dataclass
class CounterexampleReport:
    algebra: str
    seed: int
    flags: list[tuple[list[float], list[float]]] = field(default_factory=list)
    k_thm22: list[float] = field(default_factory=list)
    k_oracle: list[float] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return any(k == 0.0 and abs(o) > ZERO_TOL for k, o in zip(self.k_thm22, self.k_oracle))

    @property
    def sign_mix(self) -> dict[str, int]:
        o = np.asarray(self.k_oracle)
        return {"positive": int(np.sum(o > ZERO_TOL)), "negative": int(np.sum(o < -ZERO_TOL)),
                "zero": int(np.sum(np.abs(o) <= ZERO_TOL))}

    def as_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "seed": self.seed,
            "verdict_mismatch_demonstrated": self.verdict,
            "sign_mix": self.sign_mix,
            "flags": [{"y": y, "u": u, "K_thm22_denghou": k, "K_oracle": o}
                      for (y, u), k, o in zip(self.flags, self.k_thm22, self.k_oracle)],
        }


def run_counterexample(rs: ReductiveSpace, sample_size: int = 0,
                       seed: int = DEFAULT_SEED) -> CounterexampleReport:
    """Refuted formula versus Koszul sectional curvature with zero drift.

    Basis-pair flags come first, then ``sample_size`` Gaussian flags drawn
    from ``seed``.
    """
    if rs.h_dim != 0:
        raise UnsupportedConfiguration("the counterexample lives on Lie groups (h_dim = 0)")
    spec = RandersSpec.riemannian(rs)
    table = levi_civita_table(rs)
    rng = np.random.default_rng(seed)
    flags = basis_flags(rs.m_dim) + [random_flag(rng, rs) for _ in range(sample_size)]
    rep = CounterexampleReport(rs.algebra.name, seed)
    for f in flags:
        rep.flags.append(([float(t) for t in f.y], [float(t) for t in f.u]))
        rep.k_thm22.append(flag_curvature_denghou(spec, f))
        rep.k_oracle.append(sectional_oracle(rs, f.y, f.u, table))
    return rep
