import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as nps

from conftest import oneill_sectional, random_spd, su2_su2_h1
from randersflag import examples
from randersflag.lie_core import (
    DegenerateFlagError,
    HypothesisViolation,
    InputError,
    ReductiveSpace,
    UnsupportedConfiguration,
)
from randersflag.randers import (
    KNOWN_INCORRECT,
    Flag,
    RandersSpec,
    curvature_report,
    flag_curvature_assembled,
    flag_curvature_denghou,
    flag_curvature_thm42,
    fundamental_matrix,
    fundamental_tensor,
    fundamental_tensor_alpha_beta,
    fundamental_tensor_fd,
    fundamental_tensor_fd_richardson,
    random_flag,
    randers_norm,
)
from randersflag.riemann import PAPER_LITERAL, levi_civita_table, sectional_nat_reductive, sectional_oracle

E4 = np.eye(4)


@pytest.fixture
def su2r():
    rs, x = examples.su2_x_r(0.5)
    return RandersSpec(rs, x)


def random_randers(rng, dim=None, max_norm_sq=0.9):
    dim = dim or int(rng.integers(2, 7))
    rs = ReductiveSpace(examples.abelian(dim).algebra, 0, random_spd(rng, dim))
    x = rng.standard_normal(dim)
    x *= np.sqrt(rng.uniform(0, max_norm_sq) / rs.inner(x, x))
    return RandersSpec(rs, x)


def test_norm_examples(su2r):
    rs = examples.su2()
    zero = RandersSpec.riemannian(rs)
    y = np.array([3.0, 0.0, 4.0])
    assert randers_norm(zero, y) == 5.0
    assert randers_norm(su2r, E4[0]) == 1.0
    assert randers_norm(su2r, E4[3]) == 1.5
    assert randers_norm(su2r, np.zeros(4)) == 0.0


def test_spec_rejects_inadmissible_drift():
    with pytest.raises(InputError):
        RandersSpec(examples.su2(), np.array([1.0, 0, 0]))
    with pytest.raises(InputError):
        RandersSpec(examples.toy_gh4(), np.array([0.3, 0, 0]))
    with pytest.raises(InputError):
        RandersSpec(examples.su2(), np.zeros(2))


def test_norm_positive_and_homogeneous(rng):
    for _ in range(50):
        spec = random_randers(rng)
        y = rng.standard_normal(spec.space.m_dim)
        f = randers_norm(spec, y)
        assert f > 0
        for lam in (0.5, 2.0, 7.0):
            assert randers_norm(spec, lam * y) == pytest.approx(lam * f, rel=1e-14)


def test_fundamental_tensor_examples(su2r):
    zero = RandersSpec.riemannian(examples.su2())
    rng = np.random.default_rng(1)
    for _ in range(10):
        y, u, v = rng.standard_normal((3, 3))
        assert fundamental_tensor(zero, y, u, v) == pytest.approx(zero.space.inner(u, v), abs=1e-14)
    assert fundamental_tensor(su2r, E4[0], E4[1], E4[1]) == 1.0
    assert fundamental_tensor(su2r, E4[3], E4[3], E4[3]) == 2.25
    with pytest.raises(InputError):
        fundamental_tensor(su2r, np.zeros(4), E4[0], E4[0])


def test_fd_examples(su2r):
    zero = RandersSpec.riemannian(examples.su2())
    rng = np.random.default_rng(2)
    for _ in range(10):
        y, u, v = rng.standard_normal((3, 3))
        assert fundamental_tensor_fd(zero, y, u, v) == pytest.approx(zero.space.inner(u, v), abs=1e-6)
    assert fundamental_tensor_fd(su2r, E4[3], E4[3], E4[3]) == pytest.approx(2.25, rel=1e-4)
    with pytest.raises(InputError):
        fundamental_tensor_fd(su2r, np.zeros(4), E4[0], E4[0])
    with pytest.raises(InputError):
        fundamental_tensor_fd(su2r, E4[0], E4[0], E4[0], step=0)


def test_richardson_sharpens_fd(rng):
    for _ in range(20):
        spec = random_randers(rng)
        y, u, v = rng.standard_normal((3, spec.space.m_dim))
        exact = fundamental_tensor(spec, y, u, v)
        value, err = fundamental_tensor_fd_richardson(spec, y, u, v, step=1e-3)
        scale = np.sqrt(fundamental_tensor(spec, y, u, u) * fundamental_tensor(spec, y, v, v))
        assert abs(value - exact) <= 1e-8 * scale
        assert err < 1e-5 * scale


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fundamental_tensor_properties(seed):
    rng = np.random.default_rng(seed)
    spec = random_randers(rng)
    n = spec.space.m_dim
    y, u, v = rng.standard_normal((3, n))
    assert fundamental_tensor(spec, y, u, v) == fundamental_tensor(spec, y, v, u)
    base = fundamental_tensor(spec, y, u, v)
    for lam in (0.5, 2.0, 10.0):
        assert fundamental_tensor(spec, lam * y, u, v) == pytest.approx(base, abs=1e-10 * (1 + abs(base)))
    assert fundamental_tensor(spec, y, u, v) == pytest.approx(
        fundamental_tensor_alpha_beta(spec, y, u, v), abs=1e-12 * max(1.0, abs(base)) * 10)
    assert np.linalg.eigvalsh(fundamental_matrix(spec, y)).min() > 0
    assert fundamental_tensor(spec, y, y, y) == pytest.approx(randers_norm(spec, y) ** 2, rel=1e-12)


def test_flag_curvature_thm42_examples(su2r):
    assert flag_curvature_thm42(su2r, Flag(E4[0], E4[1])) == pytest.approx(0.25, abs=1e-15)
    assert flag_curvature_thm42(su2r, Flag(E4[3], E4[0])) == 0.0
    with pytest.raises(DegenerateFlagError):
        flag_curvature_thm42(su2r, Flag(E4[0], -3 * E4[0]))
    with pytest.raises(InputError):
        flag_curvature_thm42(su2r, Flag(E4[0], E4[1]), variant="bogus")


def test_thm42_refuses_outside_hypotheses():
    h = RandersSpec.riemannian(examples.heisenberg3())
    f = Flag(np.eye(3)[0], np.eye(3)[1])
    with pytest.raises(HypothesisViolation):
        flag_curvature_thm42(h, f)
    assert flag_curvature_thm42(h, f, force=True) == 0.0  # forced value is wrong: true K is -0.75
    nonpar = RandersSpec(examples.su2(), np.array([0.5, 0, 0]))
    with pytest.raises(HypothesisViolation):
        flag_curvature_thm42(nonpar, Flag(np.eye(3)[1], np.eye(3)[2]))


@pytest.mark.parametrize("rs", [examples.su2(), examples.abelian(4), examples.toy_gh4(),
                                su2_su2_h1()[0], examples.su2_x_r(0.1)[0]],
                         ids=["su2", "abelian4", "toy_gh4", "su2_su2_h1", "su2_x_r"])
def test_riemannian_reduction(rs, rng):
    spec = RandersSpec.riemannian(rs)
    for _ in range(20):
        f = random_flag(rng, rs)
        assert flag_curvature_thm42(spec, f) == pytest.approx(
            sectional_nat_reductive(rs, f.y, f.u), abs=1e-10)
        # the literal A/(B-C) is finite here too, but reduces to a different number
        lit = flag_curvature_thm42(spec, f, PAPER_LITERAL)
        assert np.isfinite(lit)


def test_flag_well_defined(su2r, rng):
    for _ in range(20):
        f = random_flag(rng, su2r.space)
        k = flag_curvature_thm42(su2r, f)
        assert flag_curvature_thm42(su2r, Flag(2.5 * f.y, f.u)) == pytest.approx(k, abs=1e-9)
        assert flag_curvature_thm42(su2r, Flag(f.y, -2 * f.u + 3 * f.y)) == pytest.approx(k, abs=1e-9)


def test_flag_curvature_depends_on_flagpole(su2r):
    # reversing the flagpole changes F and hence the flag curvature
    y, u = np.array([1.0, 0, 0, 1.0]), E4[1]
    assert flag_curvature_thm42(su2r, Flag(y, u)) != pytest.approx(
        flag_curvature_thm42(su2r, Flag(-y, u)), abs=1e-6)


def test_assembled_examples(su2r):
    assert flag_curvature_assembled(su2r, Flag(E4[0], E4[1])) == pytest.approx(0.25, abs=1e-6)
    zero = RandersSpec.riemannian(examples.heisenberg3())
    e = np.eye(3)
    assert flag_curvature_assembled(zero, Flag(e[0], e[1])) == pytest.approx(-0.75, abs=1e-6)
    ab = RandersSpec(examples.abelian(3), np.array([0.2, -0.3, 0.1]))
    rng = np.random.default_rng(5)
    for _ in range(5):
        assert flag_curvature_assembled(ab, random_flag(rng, ab.space)) == 0.0
    with pytest.raises(UnsupportedConfiguration):
        flag_curvature_assembled(RandersSpec.riemannian(examples.toy_gh4()), Flag(e[0], e[1]))
    with pytest.raises(HypothesisViolation):
        flag_curvature_assembled(RandersSpec(examples.heisenberg3(), np.array([0, 0, 0.5])),
                                 Flag(e[0], e[1]))


def test_assembled_matches_sectional_with_zero_drift(rng):
    for rs in (examples.heisenberg3(), ReductiveSpace(examples.su2().algebra, 0, random_spd(rng, 3))):
        spec = RandersSpec.riemannian(rs)
        t = levi_civita_table(rs)
        for _ in range(10):
            f = random_flag(rng, rs)
            assert flag_curvature_assembled(spec, f) == pytest.approx(
                sectional_oracle(rs, f.y, f.u, t), abs=1e-6)


def test_berwald_cross_check(rng):
    for t in (0.3, 0.8):
        rs, x = examples.su2_x_r(t)
        spec = RandersSpec(rs, x)
        for _ in range(10):
            f = random_flag(rng, rs)
            assert flag_curvature_thm42(spec, f) == pytest.approx(flag_curvature_assembled(spec, f), abs=1e-6)


def test_denghou_examples():
    e = np.eye(3)
    h = RandersSpec.riemannian(examples.heisenberg3())
    assert flag_curvature_denghou(h, Flag(e[0], e[1])) == 0.0
    assert sectional_oracle(h.space, e[0], e[1]) == pytest.approx(-0.75)
    # with zero drift the prefactor is 1 and the formula is the h-projection curvature
    toy = RandersSpec.riemannian(examples.toy_gh4())
    assert flag_curvature_denghou(toy, Flag(e[0], e[1])) == pytest.approx(1.0)
    with pytest.raises(DegenerateFlagError):
        flag_curvature_denghou(h, Flag(e[0], e[0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["heisenberg3", "su2", "su2_x_r:0.7", "abelian:5"]))
def test_denghou_vanishes_on_groups(seed, name):
    rs, x = examples.build(name)
    spec = RandersSpec(rs, x)
    f = random_flag(np.random.default_rng(seed), rs)
    assert flag_curvature_denghou(spec, f) == 0.0


def test_denghou_prefactor_on_quotient():
    toy = examples.toy_gh4()
    spec = RandersSpec(toy, np.array([0.0, 0.0, 0.6]))
    y, u = np.array([1.0, 0.0, 1.0]), np.array([0.0, 1.0, 0.0])
    kp = flag_curvature_denghou(RandersSpec.riemannian(toy), Flag(y, u))
    pref = 2 * np.sqrt(2) / (2 * np.sqrt(2) + 0.6)
    assert flag_curvature_denghou(spec, Flag(y, u)) == pytest.approx(pref * kp, rel=1e-14)


def test_quotient_flag_curvature_with_parallel_drift(rng):
    # toy_gh4 with drift along the central line: Berwald, naturally reductive, h > 0
    toy = examples.toy_gh4()
    spec = RandersSpec(toy, np.array([0.0, 0.0, 0.6]))
    group = ReductiveSpace(toy.algebra, 0, np.eye(4))
    for _ in range(10):
        f = random_flag(rng, toy)
        k = flag_curvature_thm42(spec, f)
        assert flag_curvature_thm42(spec, Flag(0.3 * f.y, 2 * f.u - f.y)) == pytest.approx(k, abs=1e-9)
        # flags inside the sphere factor see the round metric exactly
        ys = f.y * np.array([1, 1, 0])
        us = f.u * np.array([1, 1, 0])
        ks = flag_curvature_thm42(spec, Flag(ys, us))
        assert ks == pytest.approx(oneill_sectional(toy, group, ys, us), abs=1e-12)
        assert ks == pytest.approx(1.0, abs=1e-12)


def test_report_su2r(su2r):
    rep = curvature_report(su2r, Flag(E4[0], E4[1]))
    assert rep.K_thm42_oracle_consistent == pytest.approx(0.25)
    assert rep.K_assembled_oracle == pytest.approx(0.25, abs=1e-6)
    assert rep.K_thm22_denghou == 0.0
    assert rep.naturally_reductive and rep.drift_parallel
    assert rep.K_thm42_paper_literal is None
    assert any(KNOWN_INCORRECT in n for n in rep.notes)


def test_report_heisenberg():
    e = np.eye(3)
    rep = curvature_report(RandersSpec.riemannian(examples.heisenberg3()), Flag(e[0], e[1]))
    assert rep.K_thm22_denghou == 0.0
    assert rep.sectional_g == pytest.approx(-0.75)
    assert not rep.naturally_reductive
    assert rep.K_thm42_oracle_consistent is None
    forced = curvature_report(RandersSpec.riemannian(examples.heisenberg3()), Flag(e[0], e[1]),
                              (PAPER_LITERAL,), force=True)
    assert forced.K_thm42_oracle_consistent == 0.0
    assert forced.forced


def test_report_abelian():
    spec = RandersSpec.riemannian(examples.abelian(3))
    rep = curvature_report(spec, Flag(np.eye(3)[0], np.array([1.0, 1, 1])), (PAPER_LITERAL,))
    values = [rep.K_thm42_oracle_consistent, rep.K_thm42_paper_literal, rep.K_assembled_oracle,
              rep.K_thm22_denghou, rep.sectional_g]
    assert all(v == 0.0 for v in values)


def test_report_deterministic(su2r):
    f = Flag(np.array([0.3, -1.0, 0.2, 0.7]), np.array([1.0, 0.5, -0.4, 0.1]))
    a = curvature_report(su2r, f, (PAPER_LITERAL,)).as_dict()
    b = curvature_report(su2r, f, (PAPER_LITERAL,)).as_dict()
    assert a == b
    assert all(np.isfinite(v) for v in a["discrepancy"].values() if v is not None)


def test_random_vectors_strategy_smoke():
    # hypothesis array strategy on flags: either degenerate or finite curvature
    rs, x = examples.su2_x_r(0.5)
    spec = RandersSpec(rs, x)

    @settings(max_examples=50, deadline=None)
    @given(nps.arrays(np.float64, 4, elements=st.floats(-5, 5)),
           nps.arrays(np.float64, 4, elements=st.floats(-5, 5)))
    def check(y, u):
        try:
            k = flag_curvature_thm42(spec, Flag(y, u))
        except DegenerateFlagError:
            return
        assert np.isfinite(k)

    check()
