import pytest

from ladderlab import algcore, perfcx
from ladderlab import pimod as pm
from ladderlab.perfcx import (
    apply_functor_cx, cone, hom_Kb, identity_chain, is_contractible, shift, stalk,
)
from ladderlab.recfun import T1, T2


def same_complex(a, b):
    return (a.lo == b.lo and len(a.objects) == len(b.objects)
            and all(x == y for x, y in zip(a.objects, b.objects))
            and all(d == e for d, e in zip(a.diffs, b.diffs)))


@pytest.fixture
def p1(k):
    return T1(pm.free_module(k, 1), 2)


def test_cone_of_identity_is_contractible(p1):
    c = stalk(p1)
    assert is_contractible(cone(identity_chain(c)))
    assert is_contractible(perfcx.zero_complex(p1))
    assert not is_contractible(c)


def test_shift_roundtrip(k):
    c = perfcx.random_perfect_complex(k, 2, 3)
    assert same_complex(shift(shift(c, 1), -1), c)


def test_cone_of_zero_map(k):
    c = perfcx.random_perfect_complex(k, 2, 1, max_length=2)
    d = perfcx.random_perfect_complex(k, 2, 2, max_length=2)
    cn = cone(perfcx.zero_chain_map(c, d))
    sc = shift(c, 1)
    for i in range(cn.lo, cn.hi + 1):
        assert cn.obj(i).dims == tuple(a + b for a, b in zip(sc.obj(i).dims, d.obj(i).dims))


def test_hom_kb_examples(p1):
    c = stalk(p1)
    assert hom_Kb(c, c).dim == 1
    assert hom_Kb(c, cone(identity_chain(c))).dim == 0
    assert hom_Kb(c, shift(c, 1)).dim == 0


def test_hom_kb_basis_are_chain_maps(k):
    for s in range(5):
        c = perfcx.random_perfect_complex(k, 2, s)
        d = perfcx.random_perfect_complex(k, 2, s + 10)
        h = hom_Kb(c, d)
        assert len(h.basis) == h.dim
        assert all(phi.is_chain_map() for phi in h.basis)


def test_functors_on_complexes(k):
    x = perfcx.random_lambda_perfect_complex(k, 4)
    assert same_complex(apply_functor_cx("U1", apply_functor_cx("T1", x, 3)), x)
    assert same_complex(apply_functor_cx("T1", stalk(pm.free_module(k, 2)), 2), stalk(T1(pm.free_module(k, 2), 2)))
    c = perfcx.random_perfect_complex(k, 2, 5)
    phi = identity_chain(c)
    assert same_complex(apply_functor_cx("U1", cone(phi)), cone(perfcx.apply_functor_map("U1", phi)))


def test_z_functors_refused_on_projective_complexes(k):
    c = stalk(pm.random_pi_module(k, 1, 0))
    with pytest.raises(ValueError):
        apply_functor_cx("Z2", c)
    assert apply_functor_cx("Z2", c, projective_only=False).objects[0].n == 2


def test_q_triangle_on_image_of_t1(k, p1):
    kk, report = perfcx.canonical_q_triangle(stalk(p1))
    assert report.passed
    assert is_contractible(kk)


def test_q_triangle_on_z2_stalk(k):
    n1 = pm.indecomposable_projectives(k, 1)[0]
    c = apply_functor_cx("Z2", stalk(n1), projective_only=False)
    kk, report = perfcx.canonical_q_triangle(c)
    assert report.passed
    assert hom_Kb(kk, c).dim == hom_Kb(c, kk).dim == hom_Kb(c, c).dim == 1


def test_p_triangle_mirrors(k):
    t2 = stalk(T2(pm.free_module(k, 1), 2))
    kk, report = perfcx.canonical_p_triangle(t2)
    assert report.passed and is_contractible(kk)
    n1 = pm.indecomposable_projectives(k, 1)[0]
    c = apply_functor_cx("Z1", stalk(n1), projective_only=False)
    kk, report = perfcx.canonical_p_triangle(c)
    assert report.passed and hom_Kb(kk, c).dim == 1


def test_u1_of_q_kernel_contractible(k):
    for s in range(5):
        c = perfcx.random_perfect_complex(k, 2, s)
        kk, report = perfcx.canonical_q_triangle(c)
        assert report.passed


def test_ttf(k):
    assert perfcx.ttf_check(k, 2, samples=5, seed=3).passed


def test_orthogonality_to_z2_stalk(k, p1):
    n1 = pm.indecomposable_projectives(k, 1)[0]
    z = apply_functor_cx("Z2", stalk(n1), projective_only=False)
    assert hom_Kb(stalk(p1), z).dim == 0


def test_bad_differential_rejected(p1):
    ident = pm.identity(p1)
    with pytest.raises(ValueError):
        perfcx.make_complex(0, [p1, p1, p1], [ident, ident])
    # p1 -> p1 + p1 -> p1 with d = (1, 1) and e = (1, -1); flipping the sign in e breaks d o d = 0
    pair = [p1, p1]
    mid = pm.direct_sum(p1, p1)
    d = pm.sum_injection(pair, 0) @ ident + pm.sum_injection(pair, 1) @ ident
    e = pm.sum_projection(pair, 0) - pm.sum_projection(pair, 1)
    assert perfcx.make_complex(0, [p1, mid, p1], [d, e]).hi == 2
    bad = pm.sum_projection(pair, 0) + pm.sum_projection(pair, 1)
    with pytest.raises(ValueError):
        perfcx.make_complex(0, [p1, mid, p1], [d, bad])


def test_derived_ladder(k, dual):
    assert perfcx.ladder_verify_derived(k, 2, samples=10, max_length=4).passed
    assert perfcx.ladder_verify_derived(dual, 3, samples=3, max_length=2).passed


def test_stalk_reduces_to_module_level(k):
    x = stalk(pm.free_module(k, 1))
    m = stalk(pm.indecomposable_projectives(k, 2)[1])
    assert hom_Kb(apply_functor_cx("T1", x, 2), m).dim == pm.hom_dim(T1(pm.free_module(k, 1), 2), m.objects[0])


def test_json_roundtrip(dual):
    c = perfcx.random_perfect_complex(dual, 2, 6)
    assert same_complex(perfcx.complex_from_json(perfcx.complex_to_json(c), dual), c)
