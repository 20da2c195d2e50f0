import pytest

from ladderlab import algcore, recfun
from ladderlab import pimod as pm
from ladderlab.recfun import Flip, T1, T2, U1, U2, Z1, Z2


def test_t1_formula(k):
    t = T1(pm.free_module(k, 1), 2)
    assert t.dims == (1, 1) and t.f[0].is_identity() and t.g[0].is_zero()


def test_composites_read_back(any_lam):
    for s in range(10):
        x = algcore.random_module(any_lam, 3, s)
        assert U1(T1(x, 3)) == x
        assert U2(Flip(T1(x, 3))) == x
        assert Flip(T1(x, 3)) == T2(x, 3)


def test_flip_of_z2(any_lam):
    for s in range(10):
        nm = pm.random_pi_module(any_lam, 2, s)
        assert Flip(Z2(nm)) == Z1(Flip(nm))
        assert U1(Z2(nm)).dim == 0


@pytest.mark.parametrize("name", sorted(algcore.CATALOG))
def test_flip_is_an_involution(name):
    lam = algcore.builtin_algebra(name)
    for s in range(100 if name == "k" else 20):
        m = pm.random_pi_module(lam, 3, s)
        assert Flip(Flip(m)) == m
        assert U2(Flip(m)) == U1(m)


def test_counits_and_units_on_images(any_lam):
    x = algcore.random_module(any_lam, 3, 1)
    assert recfun.counit_T1U1(T1(x, 3)) == pm.identity(T1(x, 3))
    assert recfun.unit_U1T2(T2(x, 3)) == pm.identity(T2(x, 3))


def test_counit_is_a_morphism_on_random_modules(k):
    for s in range(100):
        m = pm.random_pi_module(k, 2 + s % 3, s)
        assert pm.is_pi_morphism(recfun.counit_T1U1(m))
        assert pm.is_pi_morphism(recfun.unit_U1T2(m))


@pytest.mark.parametrize("pair", recfun.PAIRS)
def test_adjunctions_certify(pair, k):
    assert recfun.verify_adjunction(pair, k, 3, samples=50).passed


def test_second_adjunction_over_dual_numbers(dual):
    assert recfun.verify_adjunction(("U2", "T1"), dual, 2, samples=20).passed


@pytest.mark.parametrize("which", ["counit", "unit"])
def test_corrupted_data_is_caught(which, k):
    pair = ("T1", "U1") if which == "counit" else ("U1", "T2")
    bad = recfun.corrupted(recfun.adjunction(pair, 2), which)
    report = recfun.verify_adjunction(pair, k, 2, samples=5, data=bad)
    assert not report.passed
    failed = report.failures[0]
    located = failed.detail["first_failures"][0]
    assert {"sample", "X", "Y"} <= set(located)


def test_unknown_pair():
    with pytest.raises(ValueError):
        recfun.adjunction(("T1", "T2"), 2)


@pytest.mark.parametrize("which", ["first", "second"])
def test_recollements(which, k):
    report = recfun.verify_recollement(which, k, 3, samples=20, seed=4)
    assert report.passed, report.failures


def test_recollement_needs_n_two(k):
    with pytest.raises(ValueError):
        recfun.verify_recollement("first", k, 1)


def test_nakayama_example(k):
    t1 = T1(pm.free_module(k, 1), 2)
    nu = recfun.nakayama(t1)
    assert pm.iso_test(nu, T2(pm.free_module(k, 1), 2))


def test_nakayama_is_invertible_over_pi2(k, dual):
    for lam in (k, dual):
        for s in range(30 if lam is k else 10):
            m = pm.random_pi_module(lam, 2, s)
            nu = recfun.nakayama(m)
            assert nu.dim == m.dim
            assert pm.iso_test(recfun.nakayama_inv(nu), m)


def test_nakayama_identity_gate(k, dual, path_a2):
    assert recfun.verify_nakayama_identity(k, samples=10).passed
    assert recfun.verify_nakayama_identity(dual, samples=10).passed
    gated = recfun.verify_nakayama_identity(path_a2)
    assert not gated.passed and "selfinjective" in gated.precondition


def test_hom_embedding(dual):
    assert recfun.verify_hom_embedding(dual, 2, samples=5, max_degree=3).passed


def test_period_four(k):
    report = recfun.verify_period_four(k, 2, samples=10)
    assert report.passed
    assert report.checks[0].detail["chain"] == ["T1", "U1", "T2", "U2", "T1"]


def test_apply_checks_arguments(k):
    with pytest.raises(ValueError):
        recfun.apply("T1", pm.free_module(k, 1))
    with pytest.raises(ValueError):
        recfun.apply("Nope", pm.free_module(k, 1), 2)
