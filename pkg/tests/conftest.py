import numpy as np
import pytest

from randersflag import examples
from randersflag.lie_core import LieAlgebraSpec, ReductiveSpace
from randersflag.riemann import gram_determinant, levi_civita_table, sectional_oracle

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_spd(rng, n, cond=10.0):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return q @ np.diag(rng.uniform(1.0, cond, n)) @ q.T


def hyperbolic3() -> ReductiveSpace:
    """``[e1,e2]=e2, [e1,e3]=e3``: real hyperbolic 3-space, curvature -1 everywhere."""
    a = LieAlgebraSpec.from_brackets("hyperbolic3", 3, [(0, 1, 1, 1.0), (0, 2, 2, 1.0)])
    return ReductiveSpace(a, 0, np.eye(3))


def su2_su2_h1():
    """su(2)+su(2) with ``h`` spanned by the first generator: a normal homogeneous space
    whose ``[m, m]_m`` is nonzero.  Returns the quotient and the ambient group."""
    s = examples.su2().algebra
    a = examples.direct_sum("su2su2", s, s)
    return ReductiveSpace(a, 1, np.eye(5)), ReductiveSpace(a, 0, np.eye(6))


def oneill_sectional(quotient, group, y, u, table=None):
    """Sectional curvature of a normal homogeneous quotient by O'Neill's submersion formula:
    Koszul curvature of the bi-invariant group plus ``3/4 |[Y,U]_h|^2`` over the Gram determinant."""
    table = table or levi_civita_table(group)
    Y, U = quotient.embed(y), quotient.embed(u)
    det = gram_determinant(quotient, y, u)
    v = np.einsum("i,j,ijk->k", Y, U, group.algebra.structure)[:quotient.h_dim]
    return sectional_oracle(group, Y, U, table) + 0.75 * float(v @ v) / det


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
