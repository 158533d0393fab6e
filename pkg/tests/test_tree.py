import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from gl2modp.local import LocalRing, PrecisionError
from gl2modp.report import make_rng
from gl2modp.s_lemma import TreeAdapter
from gl2modp.tree import ROOT, CInd, Tree, distance
from gl2modp.weights import Weight


@pytest.fixture(scope="module", params=["equal", "mixed"])
def C(request):
    return CInd(LocalRing(request.param, 3, 1, 10), Weight((1,), 0, 3))


@pytest.fixture(scope="module")
def C4():
    return CInd(LocalRing("equal", 2, 2, 8), Weight((1, 0), 0, 2))


def random_K(R, rng):
    while True:
        g = tuple(R.random(rng) for _ in range(4))
        if R.is_unit(R.mat_det(g)):
            return g


@pytest.mark.parametrize("kind", ["equal", "mixed"])
@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_shell_sizes(kind, q):
    p, f = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1)}[q]
    T = Tree(LocalRing(kind, p, f, 6))
    for d in range(4):
        sh = T.shell(d)
        assert len(sh) == len(set(sh)) == oracles.shell_size(q, d)
        assert all(distance(v) == d for v in sh)


@pytest.mark.parametrize("kind", ["equal", "mixed"])
def test_parent_closed_form_matches_search(kind):
    T = Tree(LocalRing(kind, 3, 1, 8))
    assert T.parent(ROOT) is None and T.parent_by_search(ROOT) is None
    for v in T.ball(3)[1:]:
        assert T.parent(v) == T.parent_by_search(v)
        assert v in T.children(T.parent(v))


def test_neighbors_are_at_distance_one():
    T = Tree(LocalRing("equal", 3, 1, 8))
    assert sorted(T.neighbors(ROOT)) == sorted(T.shell(1))
    for v in T.shell(2):
        nb = T.neighbors(v)
        assert len(nb) == 4
        assert sum(distance(w) == 1 for w in nb) == 1
        assert sum(distance(w) == 3 for w in nb) == 3


@pytest.mark.parametrize("kind", ["equal", "mixed"])
def test_normal_form_reconstructs(kind):
    R = LocalRing(kind, 3, 1, 8)
    T = Tree(R)
    rng = make_rng(11)
    for v in T.ball(2):
        g = T.rep(v)
        # right multiplication by K keeps the vertex and is read off mod ϖ
        k = random_K(R, rng)
        nv, kbar = T.normal_form(R.mat_mul(g, k))
        assert nv == v
        k_res = tuple(R.residue(x) for x in k)
        assert kbar == k_res
        assert T.normal_form(g) == (v, (1, 0, 0, 1))


def test_normal_form_precision_error():
    R = LocalRing("equal", 3, 1, 4)
    T = Tree(R)
    with pytest.raises(PrecisionError):
        T.normal_form((R.zero, R.zero, R.zero, R.zero))
    with pytest.raises(PrecisionError):
        T.normal_form((R.one, R.zero, R.zero, R.pi_pow(5)))


def test_hecke_support_examples(C):
    Tv = C.hecke_T({ROOT: C.v0})
    assert sorted(Tv) == sorted(v for v in C.tree.shell(1) if v[0] == 1)
    C0 = CInd(C.R, Weight((0,), 0, 3))
    T0 = C0.hecke_T({ROOT: C0.v0})
    assert sorted(T0) == sorted(C.tree.shell(1))


def test_hecke_support_q4(C4):
    Tv = C4.hecke_T({ROOT: C4.v0})
    assert len(Tv) == 4 and all(v[0] == 1 for v in Tv)
    assert C4.equal(Tv, C4.op_S({ROOT: C4.v0}))


def test_translation_is_action(C):
    R = C.R
    rng = make_rng(12)
    A = TreeAdapter(C, 2)
    for _ in range(10):
        x = A.random(rng)
        g, h = random_K(R, rng), random_K(R, rng)
        assert C.equal(C.translate(R.mat_mul(g, h), x), C.translate(g, C.translate(h, x)))


def test_hecke_K_equivariance(C):
    R = C.R
    rng = make_rng(13)
    A = TreeAdapter(C, 2)
    for _ in range(10):
        x = A.random(rng)
        g = random_K(R, rng)
        assert C.equal(C.hecke_T(C.translate(g, x)), C.translate(g, C.hecke_T(x)))


def test_hecke_radius_growth(C):
    rng = make_rng(14)
    A = TreeAdapter(C, 2)
    for _ in range(10):
        x = A.random(rng)
        if x:
            assert C.radius(C.hecke_T(x)) == C.radius(x) + 1


def test_quotient_reduce_examples(C):
    assert C.quotient_reduce(C.hecke_T({ROOT: C.v0}), 0) == {}
    gen = C.quotient_reduce({ROOT: C.v0}, 1)
    assert gen and C.equal(gen, {ROOT: C.v0})
    rng = make_rng(15)
    A = TreeAdapter(C, 2)
    for lam in (0, 1, 2):
        x = A.random(rng)
        assert C.quotient_reduce(C.T_minus(x, lam), lam) == {}


def test_quotient_reduce_is_canonical(C):
    rng = make_rng(16)
    A = TreeAdapter(C, 1)
    for lam in (0, 2):
        for _ in range(5):
            x, u = A.random(rng), A.random(rng)
            y = C.add(x, C.T_minus(u, lam))
            rx = C.quotient_reduce(x, lam)
            assert C.equal(rx, C.quotient_reduce(y, lam))
            assert C.equal(rx, C.quotient_reduce(rx, lam))


def test_quotient_reduce_matches_ball_solve(C):
    rng = make_rng(17)
    A = TreeAdapter(C, 1)
    seen = {True: 0, False: 0}
    for k in range(12):
        lam = k % 3
        u = A.random(rng)
        x = C.T_minus(u, lam)
        if k % 2:
            x = C.add(x, A.random(rng))
        if not x:
            continue
        in_image = C.in_image_ball_solve(x, lam)
        assert in_image == (C.quotient_reduce(x, lam) == {})
        seen[in_image] += 1
    assert seen[True] and seen[False]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2))
def test_quotient_reduce_kills_image_property(seed, lam):
    C = CInd(LocalRing("equal", 3, 1, 10), Weight((1,), 0, 3))
    u = TreeAdapter(C, 1).random(make_rng(seed))
    assert C.quotient_reduce(C.T_minus(u, lam), lam) == {}


def test_vector_round_trip(C):
    rng = make_rng(18)
    A = TreeAdapter(C, 2)
    x = A.random(rng)
    assert C.equal(C.from_vector(C.to_vector(x, 2), 2), x)
    M = C.translation_matrix(random_K(C.R, rng), 2)
    assert M.shape == (len(C.tree.ball(2)) * C.dim,) * 2


def test_translation_matrix_matches_translate(C):
    from gl2modp import linalg as la

    rng = make_rng(19)
    A = TreeAdapter(C, 2)
    g = random_K(C.R, rng)
    M = C.translation_matrix(g, 2)
    x = A.random(rng)
    got = la.matmul(C.K, M, C.to_vector(x, 2)[:, None])[:, 0]
    assert np.array_equal(got, C.to_vector(C.translate(g, x), 2))


def test_to_json(C):
    v = C.tree.shell(1)[1]
    out = C.to_json({ROOT: C.v0, v: C.v0})
    assert [e["n"] for e in out] == [0, 1]
    assert out[0] == {"n": 0, "a": 0, "b": 0, "u_digits": [], "vector": [[1], [0]]}
    assert out[1]["a"] == 1 and len(out[1]["u_digits"]) == 1


def test_mismatched_weight_rejected():
    with pytest.raises(ValueError):
        CInd(LocalRing("equal", 3, 1, 6), Weight((1,), 0, 5))
