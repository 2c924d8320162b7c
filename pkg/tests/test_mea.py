import numpy as np
import pytest
from numpy.testing import assert_allclose

from penaldg import mea
from penaldg.basis import gauss_lobatto_rule
from penaldg.errors import ConfigError


def random_input(rng, uniform=False):
    shape = () if uniform else (3,)
    return mea.MEAInput(c_hat=rng.normal(size=shape), nu_hat=rng.uniform(-0.05, 0.05, shape),
                        dx=rng.uniform(0.02, 0.3), eta1=rng.uniform(0.1, 2.0), chi=rng.uniform(0, 1, 3),
                        g_weights=rng.normal(size=4), f_weights=rng.normal(size=4))


def test_closed_form_advection_values():
    # c^ = 2, nu^ = 0, dx = 0.1, evaluated by hand from the closed forms
    r, z = mea.reactive_and_zhe(mea.MEAInput(c_hat=2.0, nu_hat=0.0, dx=0.1))
    assert_allclose(r, [120.0, 0.0, -120.0], atol=1e-12)
    assert_allclose(z[:, 0], 2.0, rtol=1e-14)
    assert_allclose(z[:, 1], 0.0, atol=1e-14)
    assert_allclose(z[:, 2], [-0.01, 0.005, -0.01], rtol=1e-12)
    assert_allclose(z[:, 3], [-1.5e-3, 0.0, 1.5e-3], atol=1e-15)


def test_closed_form_diffusion_values():
    inp = mea.MEAInput(c_hat=0.0, nu_hat=0.01, dx=0.1, g_weights=[0, 1, 1, 0])
    r, z = mea.reactive_and_zhe(inp)
    assert_allclose(r, [-24.0, 12.0, -24.0], rtol=1e-12)
    assert_allclose(z[:, 0], [-0.6, 0.0, 0.6], atol=1e-13)
    assert_allclose(-z[:, 1] / 2, 0.01, rtol=1e-12)


def test_three_point_matrix_matches_nodal_basis():
    rng = np.random.default_rng(0)
    for _ in range(20):
        inp = random_input(rng)
        D = mea.vp_dg_matrix_3pt(inp)
        ref = mea.vp_dg_matrix(gauss_lobatto_rule(2), inp.c_hat, inp.nu_hat, inp.chi, inp.dx, inp.eta1)
        assert_allclose(D, ref, atol=1e-10 * np.max(np.abs(ref)))


def test_closed_forms_match_matrix_expansion():
    rng = np.random.default_rng(1)
    for _ in range(20):
        inp = random_input(rng)
        r, z = mea.reactive_and_zhe(inp)
        rm, zm = mea.zhe_from_matrix(inp)
        assert_allclose(r, rm, atol=1e-12 * max(1.0, np.max(np.abs(rm))))
        assert_allclose(z, zm, atol=1e-12 * max(1.0, np.max(np.abs(zm))))


def test_row_sum_and_coefficient_identities():
    rng = np.random.default_rng(2)
    for _ in range(50):
        inp = random_input(rng)
        rep = mea.analyze(inp)
        scale = max(1.0, np.max(np.abs(rep.D)))
        assert_allclose(rep.D.sum(axis=0), inp.chi / inp.eta1 + rep.r_tilde, atol=1e-13 * scale)
        assert np.all(rep.c_tilde == rep.zhe[:, 0])
        assert np.all(rep.nu_tilde == -rep.zhe[:, 1] / 2)


def test_uniform_specialization_matches_uniform_forms():
    # general closed forms at uniform coefficients against the separately coded uniform tables
    rng = np.random.default_rng(3)
    for _ in range(30):
        inp = random_input(rng, uniform=True)
        r, z = mea.reactive_and_zhe(inp)
        ru, zu = mea._reactive_and_zhe_uniform(inp.c_hat[0], inp.nu_hat[0], inp.dx,
                                               inp.g_weights[1], inp.g_weights[2], inp.max_order)
        assert_allclose(r, ru, atol=1e-12 * max(1, np.max(np.abs(ru))))
        assert_allclose(z, zu, atol=1e-12 * max(1, np.max(np.abs(zu))))


def test_collapsed_source_equals_raw_source_on_taylor_data():
    # merging own traces onto u_j is exact for constant data
    rng = np.random.default_rng(4)
    inp = random_input(rng)
    tr = np.array([rng.normal(), 1.0, 1.0, 1.0, rng.normal()])
    raw = mea.raw_source_coefficients(inp) @ tr
    collapsed = mea.source_coefficients(inp) @ tr
    assert_allclose(raw, collapsed, atol=1e-10 * np.max(np.abs(raw)))


def test_dg_source_two_sided_weights():
    # only g0 + g2 = 2 removes the middle-node source
    inp = mea.MEAInput(c_hat=0.0, nu_hat=0.01, dx=0.1, g_weights=[0, 1, 1, 0])
    assert abs(mea.dg_source(inp, [0, 0, 1.0, 0, 0])[1]) < 1e-12
    inp = mea.MEAInput(c_hat=0.0, nu_hat=0.01, dx=0.1, g_weights=[0, 2, 2, 0])
    s1 = mea.dg_source(inp, [0, 0, 1.0, 0, 0])[1]
    r1 = mea.reactive_and_zhe(inp)[0][1]
    assert s1 == pytest.approx(6 / 0.01 * 0.01 * 4 - r1)
    with pytest.raises(ConfigError):
        mea.dg_source(inp, [1, 2, 3])


@pytest.mark.parametrize("family, orders", [
    ("trivial", ["infinite"] * 3),
    ("case1_upwind", [2, 2, 2]),
    ("case1_upwind_dg", [0, 2, 2]),
    ("case1_internal", [2, 2, 2]),
    ("case2_g2", [0, 0, 0]),
    ("case2_cg", [0, 0, 0]),
    ("case2_constraint", [0, 0, 0]),
])
def test_family_orders(family, orders):
    inp, continuous = mea.family_input(family)
    assert mea.classify_te_order(inp, continuous=continuous) == orders


def test_unknown_family_lists_names():
    with pytest.raises(ConfigError, match="case1_upwind"):
        mea.family_input("bogus")


def test_constraint_check():
    assert mea.satisfies_constraint(-4 * 0.001 / 0.05, 0.001, 0.05)
    assert not mea.satisfies_constraint(1.0, 0.001, 0.05)
    inp, _ = mea.family_input("case2_constraint")
    assert mea.satisfies_constraint(inp.c_hat[0], inp.nu_hat[0], inp.dx)


def test_trivial_solution_passes():
    chk = mea.verify_trivial_solution(1.0, 0.001, 0.05, max_order=8)
    assert chk.passed and not chk.offenders
    assert chk.report.te_order == ["infinite"] * 3


def test_trivial_fails_without_eta3():
    chk = mea.verify_trivial_solution(1.0, 0.001, 0.05, eta3=None)
    assert not chk.passed
    assert any(q == "nu_tilde" or (q == "zhe" and m == 2) for q, j, m, v in chk.offenders)


@pytest.mark.parametrize("c, nu", [(0.0, 0.001), (1.0, 0.0)])
def test_trivial_preconditions(c, nu):
    with pytest.raises(ConfigError):
        mea.verify_trivial_solution(c, nu, 0.05)


def test_fourier_taylor_agreement():
    res = mea.fourier_taylor_check(1.0, 0.1, [1.0, 5.0, 20.0])
    assert res.taylor == pytest.approx(-1 / 600, rel=1e-15)
    assert res.difference < 1e-14
    assert res.residual < 1e-12
    zero = mea.fourier_taylor_check(0.0, 0.1, [3.0])
    assert zero.taylor == 0.0 and zero.fourier == 0.0


def test_input_validation():
    with pytest.raises(ConfigError):
        mea.MEAInput(c_hat=1.0, nu_hat=0.0, dx=0.0)
    with pytest.raises(ConfigError):
        mea.MEAInput(c_hat=1.0, nu_hat=0.0, dx=0.1, g_weights=[1, 2])
    with pytest.raises(ConfigError):
        mea.MEAInput(c_hat=1.0, nu_hat=0.0, dx=0.1, max_order=2)
