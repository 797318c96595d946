"""Lie-algebra arithmetic and structural checks for reductive splittings.

Basis conventions: vectors of the full algebra are length-``n`` arrays in the
basis ``e_0 .. e_{n-1}``; the first ``h_dim`` basis vectors span ``h`` and the
rest span ``m``.  Metric quantities live on ``m`` and take ``m``-coordinate
arrays of length ``n - h_dim``.  Human-facing messages use 1-based indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

STRUCTURAL_TOL = 1e-12
DERIVED_TOL = 1e-10
RANK_TOL = 1e-10


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class HypothesisViolation(RuntimeError):
    """A formula was asked to run outside the hypotheses it was derived under."""


class UnsupportedConfiguration(RuntimeError):
    """The requested computation is not defined for this kind of space."""


class DegenerateFlagError(ValueError):
    """The flagpole and transverse edge do not span a plane."""


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LieAlgebraSpec:
    """Real Lie algebra given by structure constants.

    ``structure[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
    The dense tensor is stored as given so that corrupted inputs can be
    diagnosed by :func:`validate_algebra`; use :meth:`from_brackets` to build
    an antisymmetric tensor from upper-triangular records.
    """

    name: str
    structure: np.ndarray
    basis_labels: tuple[str, ...] = ()

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise InputError(f"structure tensor must have shape (n, n, n), got {c.shape}")
        if c.shape[0] == 0:
            raise InputError("algebra dimension must be positive")
        object.__setattr__(self, "structure", _frozen(c))
        labels = tuple(self.basis_labels) or tuple(f"e{i + 1}" for i in range(c.shape[0]))
        if len(labels) != c.shape[0]:
            raise InputError(f"expected {c.shape[0]} basis labels, got {len(labels)}")
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @classmethod
    def from_brackets(cls, name: str, dim: int,
                      brackets: Mapping[tuple[int, int], Mapping[int, float]] | Iterable[tuple[int, int, int, float]],
                      basis_labels: Iterable[str] = ()) -> "LieAlgebraSpec":
        """Build from 0-based records ``(i, j, k, c)`` with ``i < j``, or a
        mapping ``{(i, j): {k: c}}``.  The ``(j, i)`` entries are filled in by
        antisymmetry."""
        if dim < 1:
            raise InputError("algebra dimension must be positive")
        if isinstance(brackets, Mapping):
            records = [(i, j, k, c) for (i, j), row in brackets.items() for k, c in row.items()]
        else:
            records = list(brackets)
        c = np.zeros((dim, dim, dim))
        seen = set()
        for i, j, k, val in records:
            if not all(0 <= t < dim for t in (i, j, k)):
                raise InputError(f"structure constant index out of range: ({i + 1},{j + 1},{k + 1})")
            if i >= j:
                raise InputError(f"structure constant must have i < j: ({i + 1},{j + 1},{k + 1})")
            if (i, j, k) in seen:
                raise InputError(f"duplicate structure constant ({i + 1},{j + 1},{k + 1})")
            seen.add((i, j, k))
            c[i, j, k] = val
            c[j, i, k] = -val
        return cls(name, c, tuple(basis_labels))

    def bracket_records(self) -> list[tuple[int, int, int, float]]:
        """Nonzero upper-triangular constants as 0-based ``(i, j, k, c)``."""
        n = self.dim
        return [(i, j, k, float(self.structure[i, j, k]))
                for i in range(n) for j in range(i + 1, n) for k in range(n)
                if self.structure[i, j, k] != 0.0]


@dataclass(frozen=True)
class ReductiveSpace:
    """Algebra with an adapted splitting ``g = h + m`` and an inner product on ``m``."""

    algebra: LieAlgebraSpec
    h_dim: int
    gram: np.ndarray

    def __post_init__(self):
        n = self.algebra.dim
        if not 0 <= self.h_dim < n:
            raise InputError(f"h_dim must satisfy 0 <= h_dim < dim={n}, got {self.h_dim}")
        g = np.asarray(self.gram, dtype=float)
        if g.shape != (n - self.h_dim, n - self.h_dim):
            raise InputError(f"gram must be {n - self.h_dim}x{n - self.h_dim}, got {g.shape}")
        object.__setattr__(self, "gram", _frozen(g))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def m_dim(self) -> int:
        return self.algebra.dim - self.h_dim

    def embed(self, m_vec) -> np.ndarray:
        """Lift ``m``-coordinates to a full algebra vector."""
        m_vec = np.asarray(m_vec, dtype=float)
        if m_vec.shape != (self.m_dim,):
            raise InputError(f"m-vector must have length {self.m_dim}, got shape {m_vec.shape}")
        out = np.zeros(self.dim)
        out[self.h_dim:] = m_vec
        return out

    def m_part(self, v) -> np.ndarray:
        """``m``-coordinates of a full algebra vector."""
        return _check_len(v, self.dim)[self.h_dim:].copy()

    def inner(self, a, b) -> float:
        return float(np.asarray(a, dtype=float) @ self.gram @ np.asarray(b, dtype=float))

    def bracket_m(self, a, b) -> np.ndarray:
        """``[a, b]_m`` for ``m``-coordinate inputs, in ``m``-coordinates."""
        return self.m_part(bracket(self.algebra, self.embed(a), self.embed(b)))


def _check_len(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (n,):
        raise InputError(f"vector must have length {n}, got shape {v.shape}")
    return v


def bracket(a: LieAlgebraSpec, u, v) -> np.ndarray:
    u = _check_len(u, a.dim)
    v = _check_len(v, a.dim)
    return np.einsum("i,j,ijk->k", u, v, a.structure)


def basis_vector(n: int, i: int) -> np.ndarray:
    e = np.zeros(n)
    e[i] = 1.0
    return e


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple[int, ...]  # 1-based
    residual: float

    def __str__(self):
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.kind} violation at ({idx}): residual {self.residual:.3e}"


def validate_algebra(a: LieAlgebraSpec, tol: float = STRUCTURAL_TOL) -> list[Violation]:
    """Antisymmetry and Jacobi violations; an empty list means the algebra is valid."""
    c = a.structure
    n = a.dim
    out = []
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                r = abs(c[i, j, k] + c[j, i, k])
                if r > tol:
                    out.append(Violation("antisymmetry", (i + 1, j + 1, k + 1), float(r)))
    # [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j], component l
    jac = (np.einsum("ijm,mkl->ijkl", c, c)
           + np.einsum("jkm,mil->ijkl", c, c)
           + np.einsum("kim,mjl->ijkl", c, c))
    for i, j, k in itertools.combinations(range(n), 3):
        r = float(np.max(np.abs(jac[i, j, k])))
        if r > tol:
            out.append(Violation("jacobi", (i + 1, j + 1, k + 1), r))
    return out


def project(rs: ReductiveSpace, v, part: str) -> np.ndarray:
    """Coordinate projection of a full algebra vector onto ``h`` or ``m``."""
    v = _check_len(v, rs.dim)
    out = np.zeros_like(v)
    if part == "h":
        out[:rs.h_dim] = v[:rs.h_dim]
    elif part == "m":
        out[rs.h_dim:] = v[rs.h_dim:]
    else:
        raise InputError(f"part must be 'h' or 'm', got {part!r}")
    return out


def validate_space(rs: ReductiveSpace, tol: float = STRUCTURAL_TOL) -> list[str]:
    """Structural diagnostics for the algebra, the splitting and the inner product."""
    msgs = [str(v) for v in validate_algebra(rs.algebra, tol)]
    c = rs.algebra.structure
    p = rs.h_dim
    if p:
        # [h,h] must have no m-component, [h,m] no h-component
        hh = np.abs(c[:p, :p, p:])
        if hh.size and hh.max() > tol:
            i, j, k = np.unravel_index(np.argmax(hh), hh.shape)
            msgs.append(f"h is not a subalgebra: [e{i + 1},e{j + 1}] has component {hh.max():.3e} "
                        f"along e{k + p + 1}")
        hm = np.abs(c[:p, p:, :p])
        if hm.size and hm.max() > tol:
            i, j, k = np.unravel_index(np.argmax(hm), hm.shape)
            msgs.append(f"splitting is not reductive: [e{i + 1},e{j + p + 1}] has component "
                        f"{hm.max():.3e} along e{k + 1}")
    g = rs.gram
    if np.max(np.abs(g - g.T)) > tol:
        msgs.append(f"gram is not symmetric (max asymmetry {np.max(np.abs(g - g.T)):.3e})")
    else:
        eig = np.linalg.eigvalsh(g)
        if eig.min() <= 0:
            msgs.append(f"gram is not positive definite (smallest eigenvalue {eig.min():.6g})")
    return msgs


def naturally_reductive_residual(rs: ReductiveSpace, xs, ys, zs) -> float:
    """Max of ``|B(X,[Z,Y]_m) + B([Z,X]_m,Y)|`` over the given ``m``-coordinate triples."""
    worst = 0.0
    for x, y, z in zip(xs, ys, zs):
        r = rs.inner(x, rs.bracket_m(z, y)) + rs.inner(rs.bracket_m(z, x), y)
        worst = max(worst, abs(r))
    return worst


def check_naturally_reductive(rs: ReductiveSpace, tol: float = DERIVED_TOL) -> tuple[bool, float]:
    p = rs.h_dim
    # ad_m(Z)[a, b] = coefficient of m-basis b in [Z, m-basis a]_m
    adm = rs.algebra.structure[p:, p:, p:]
    G = rs.gram
    # residual[x, y, z] = B(e_x, [e_z, e_y]_m) + B([e_z, e_x]_m, e_y)
    t = np.einsum("zyk,xk->xyz", adm, G)
    res = t + np.transpose(t, (1, 0, 2))
    worst = float(np.max(np.abs(res))) if res.size else 0.0
    return worst <= tol, worst


@dataclass(frozen=True)
class AdmissibilityReport:
    norm_ok: bool
    h_invariant: bool
    parallel: bool
    norm_sq: float = field(default=0.0)

    @property
    def randers_ok(self) -> bool:
        return self.norm_ok and self.h_invariant

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (self.norm_ok, self.h_invariant, self.parallel)


def check_drift_admissible(rs: ReductiveSpace, x, tol: float = STRUCTURAL_TOL) -> AdmissibilityReport:
    """Norm bound, ``[h, X] = 0`` and the parallel criterion ``[U, X]_m = 0`` on ``m``.

    The parallel criterion encodes ``grad X = 0`` only on naturally reductive
    spaces, where the Levi-Civita connection acts as ``U, V -> [U, V]_m / 2``.
    """
    x = _check_len(x, rs.m_dim)
    norm_sq = rs.inner(x, x)
    xg = rs.embed(x)
    c = rs.algebra.structure
    p = rs.h_dim
    h_ok = True
    if p:
        h_ok = bool(np.max(np.abs(np.einsum("j,ijk->ik", xg, c[:p]))) <= tol)
    par = np.einsum("j,ijk->ik", xg, c[p:])[:, p:]
    parallel = bool(np.max(np.abs(par)) <= tol) if par.size else True
    return AdmissibilityReport(norm_sq < 1.0, h_ok, parallel, norm_sq)


def _span_basis(vectors: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    if vectors.size == 0:
        return np.zeros((0, vectors.shape[-1] if vectors.ndim == 2 else 0))
    _, s, vt = np.linalg.svd(vectors, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return vt[:rank]


def nilpotency_class(a: LieAlgebraSpec) -> int | None:
    """Length of the lower central series, or ``None`` if it stalls above zero."""
    n = a.dim
    current = np.eye(n)
    k = 1
    while True:
        brs = np.einsum("ai,bj,ijk->abk", np.eye(n), current, a.structure).reshape(-1, n)
        nxt = _span_basis(brs)
        if nxt.shape[0] == 0:
            return k
        if nxt.shape[0] == current.shape[0]:
            return None
        current = nxt
        k += 1


def is_abelian(a: LieAlgebraSpec) -> bool:
    return nilpotency_class(a) == 1
