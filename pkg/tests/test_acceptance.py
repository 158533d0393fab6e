"""The ten acceptance criteria, all at exact equality.

A summary line per criterion is printed at the end of the run (see
conftest.py).
"""

import itertools
from collections import Counter

import pytest

import oracles
from gl2modp import abs_check, iwasawa, serre
from gl2modp import linalg as la
from gl2modp.field import gf, prime_power
from gl2modp.finite_rep import (
    brute_force_h_character,
    build_finite_ps,
    predicted_ps_socle,
    socle,
    unipotent_invariants,
)
from gl2modp.local import LocalRing
from gl2modp.principal_series import (
    DeltaHom,
    TorusCharacter,
    build_ind_eps_level,
    build_ps_level,
    w_components_vanish,
)
from gl2modp.report import make_rng
from gl2modp.s_lemma import LevelAdapter, TreeAdapter, sweep
from gl2modp.tree import ROOT, CInd, distance
from gl2modp.weights import HChar, Weight, all_weights, alpha, generic_tuples, h_character

TAG_NAMES = {serre.Tag.ID: "id", serre.Tag.PLUS: "plus", serre.Tag.FLIP: "flip", serre.Tag.FM: "flipminus"}


def all_subsets(f):
    return [frozenset(J) for k in range(f + 1) for J in itertools.combinations(range(f), k)]


# -- 1 -----------------------------------------------------------------------


@pytest.mark.criterion(1)
@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("f", [1, 2, 3])
def test_serre_cardinality(p, f):
    for r in generic_tuples(p, f):
        for J in all_subsets(f):
            D = serre.enumerate_D(serre.RhoBarParams(p, r, J))
            assert len(D) == 2 ** len(J)
            if p < 11:
                got = {tuple(TAG_NAMES[t] for t in tags) for tags in D}
                assert got == oracles.serre_tuples(p, r, J)


# -- 2 -----------------------------------------------------------------------


@pytest.mark.criterion(2)
@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("f", [2, 3])
def test_length_one_slice(p, f):
    for r in generic_tuples(p, f):
        ok, info = serre.ell_one_cross_check(serre.RhoBarParams(p, r))
        assert ok, info
        full = frozenset(range(f))
        ones = [t for t in oracles.serre_tuples(p, r, full) if sum(x in oracles.FLIPS for x in t) == 1]
        values = Counter(oracles.serre_value(p, r, t) for t in ones)
        assert values == Counter(oracles.shift_tuples(p, r))


# -- 3 -----------------------------------------------------------------------


@pytest.mark.criterion(3)
@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("f", [1, 2, 3])
def test_ext_dimension(p, f):
    for s in itertools.product(range(p - 1), repeat=f):
        M = iwasawa.CyclicModule(p, s)
        assert iwasawa.ext1_dim(M) == f
        if f == 1:
            assert iwasawa.koszul_ext1_dim(M) == 1


# -- 4 -----------------------------------------------------------------------


@pytest.mark.criterion(4)
@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("f", [1, 2, 3])
def test_ext_characters(p, f):
    q = p**f
    rng = make_rng(4)
    for s in itertools.product(range(p - 1), repeat=f):
        psi = HChar(int(rng.integers(0, q - 1)), int(rng.integers(0, q - 1)), q)
        M = iwasawa.CyclicModule(p, s, psi)
        expected = sorted((psi * alpha(q) ** ((sj + 1) * p**j), 1) for j, sj in enumerate(s))
        got = iwasawa.ext1_characters(M)
        assert got == expected
        assert iwasawa.ext1_characters_dense(M) == expected


# -- 5 -----------------------------------------------------------------------


@pytest.mark.criterion(5)
@pytest.mark.parametrize("q", [9, 25])
def test_finite_principal_series(q):
    p, f = prime_power(q)
    F = gf(p, f)
    for e1, e2 in itertools.product(range(q - 1), repeat=2):
        B = build_finite_ps(e1, e2, F)
        assert B.dim == q + 1
        assert unipotent_invariants(B).shape[0] == 2
        soc = socle(B)
        irreducible = len(soc) == 1 and soc[0][1] == 1
        assert irreducible == ((e1 - e2) % (q - 1) != 0), (e1, e2, soc)
        pred = predicted_ps_socle(e1, e2, q, p)
        if pred is not None:
            assert soc == [(pred, 1)]
    if q == 9:
        # the character filter in socle() loses nothing against trying every weight
        for e1, e2 in [(0, 0), (1, 3), (2, 7), (5, 5)]:
            B = build_finite_ps(e1, e2, F)
            assert socle(B) == socle(B, exhaustive=True)


# -- 6 -----------------------------------------------------------------------


@pytest.mark.criterion(6)
@pytest.mark.parametrize("q", [3, 5, 9])
@pytest.mark.parametrize("kind", ["mixed", "equal"])
def test_partial_delta(q, kind):
    p, f = prime_power(q)
    rng = make_rng(6)
    chi = TorusCharacter(1, 1, 2, 0, q)
    d_pi = build_ps_level(chi, 2, kind).k1_invariants().shape[0]
    assert d_pi == q + 1
    for pi_value in (0, 1, q - 1):
        eps = build_ind_eps_level(chi, DeltaHom(pi_value, (0,) * f), 2, kind)
        assert eps.k1_invariants().shape[0] == 2 * (q + 1)
    directions = [tuple(1 if i == j else 0 for i in range(f)) for j in range(f)]
    directions += [tuple(int(x) for x in rng.integers(0, q, size=f)) for _ in range(2)]
    for ram in directions:
        if not any(ram):
            continue
        eps = build_ind_eps_level(chi, DeltaHom(int(rng.integers(0, q)), ram), 2, kind)
        rows = eps.k1_invariants()
        assert rows.shape[0] == q + 1
        assert w_components_vanish(eps, rows)
    assert iwasawa.homomorphism_count(p, f) == f


# -- 7 -----------------------------------------------------------------------


def random_K(R, rng):
    while True:
        g = tuple(R.random(rng) for _ in range(4))
        if R.is_unit(R.mat_det(g)):
            return g


@pytest.mark.criterion(7)
@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("kind", ["equal", "mixed"])
def test_hecke_formula(q, kind):
    p, f = prime_power(q)
    R = LocalRing(kind, p, f, 8)
    rng = make_rng(7)
    for r in ((0,), (1,), (2,)):
        C = CInd(R, Weight(r, 0, p))
        Tv = C.hecke_T({ROOT: C.v0})
        raising = [v for v in Tv if v[0] == 1]
        lowering = [v for v in Tv if v[1] == 1]
        assert len(raising) == q and all(distance(v) == 1 for v in Tv)
        assert len(lowering) == (1 if C.dim == 1 else 0)
        if C.dim >= 2:
            assert C.equal(C.op_S({ROOT: C.v0}), Tv)
    C = CInd(R, Weight((1,), 0, p))
    A = TreeAdapter(C, 2)
    for i in range(50):
        x = A.random(rng)
        # alternate elements of K with elements of Π K
        g = random_K(R, rng) if i % 2 == 0 else R.mat_mul(R.Pi(), random_K(R, rng))
        assert C.equal(C.hecke_T(C.translate(g, x)), C.translate(g, C.hecke_T(x)))


# -- 8 -----------------------------------------------------------------------


@pytest.mark.criterion(8)
@pytest.mark.parametrize("kind", ["equal", "mixed"])
def test_s_properties_tree(kind):
    C = CInd(LocalRing(kind, 3, 1, 10), Weight((1,), 0, 3))
    res = sweep(TreeAdapter(C, 2), 100, make_rng(8))
    for prop, row in res.items():
        assert row["held"] == row["checked"] == 100, (prop, row)
        assert row["nontrivial"] > 0, (prop, row)


@pytest.mark.criterion(8)
@pytest.mark.parametrize("kind", ["equal", "mixed"])
def test_s_properties_level(kind):
    model = build_ps_level(TorusCharacter(1, 1, 2, 0, 3), 2, kind)
    res = sweep(LevelAdapter(model), 100, make_rng(80))
    for prop, row in res.items():
        assert row["held"] == row["checked"] == 100, (prop, row)
        assert row["nontrivial"] > 0, (prop, row)


@pytest.mark.criterion(8)
def test_nilpotence_spherical_seeds():
    C = CInd(LocalRing("equal", 3, 1, 14), Weight((1,), 0, 3))
    assert C.nilpotence_order({ROOT: C.v0}, 0, 10) == 1
    assert C.nilpotence_order(C.hecke_T({ROOT: C.v0}), 0, 10) == 0


@pytest.mark.criterion(8)
@pytest.mark.xfail(
    strict=True,
    reason="S is not nilpotent on cInd/(T) for these seeds: S^n of a vertex function "
    "on the raising side fills one child per parent, which the raising part of T never "
    "reaches, so the top shell survives every reduction (see the decisions ledger)",
)
@pytest.mark.parametrize("seed,depth", [(1, 1), (2, 2)])
def test_nilpotence_random_seeds(seed, depth):
    C = CInd(LocalRing("equal", 3, 1, depth + 14), Weight((1,), 0, 3))
    x = TreeAdapter(C, depth).random(make_rng(seed))
    assert C.nilpotence_order(x, 0, 10) is not None


# -- 9 -----------------------------------------------------------------------


@pytest.mark.criterion(9)
def test_ab_s_bound():
    rng = make_rng(9)
    lines = 0
    for i in range(200):
        model = abs_check.random_model(rng, p=(3, 5, 7)[i % 3])
        assert model.standing_hypotheses()
        V = model.module()
        abS = V.abS()
        assert abS.shape[0] <= 1
        assert abs_check.subspace_inside(model.F, abS, la.asarray([[1, 0, 0, 0]]))
        ok, info = abs_check.cokernel_quotient_test(model)
        assert ok is True, info
        lines += abS.shape[0]
        if model.F.q == 3:
            brute = oracles.brute_ab_s(model.F, list(V.G.values()) + [M for _, M in V.S], V.H, V.anti_diagonal())
            assert len(brute) == model.F.q ** abS.shape[0]
    assert 0 < lines < 200


@pytest.mark.criterion(9)
def test_gxs_analog_on_all_sub_and_quotient_models():
    rng = make_rng(90)
    premises = 0
    models = [abs_check.random_model(rng, p=3) for _ in range(20)]
    models += [abs_check.control_model(rng, kind, p=3) for kind in ("abelian", "split_delta") for _ in range(5)]
    for model in models:
        ok, info = abs_check.gxs_lemma_check(model)
        assert ok, info
        premises += info["premise"]
    assert premises > 0


# -- 10 ----------------------------------------------------------------------


@pytest.mark.criterion(10)
@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25])
def test_h_character_cross_oracle(q):
    p, f = prime_power(q)
    for w in all_weights(p, f):
        assert h_character(w) == brute_force_h_character(w), w
