import pytest
from hypothesis import given
from hypothesis import strategies as st

from gl2modp.local import LocalRing, PrecisionError, local_ring
from gl2modp.report import make_rng

RINGS = [("equal", 3, 1, 6), ("mixed", 3, 1, 6), ("equal", 3, 2, 5), ("mixed", 3, 2, 5), ("mixed", 5, 1, 4), ("equal", 5, 2, 4)]


@st.composite
def ring_and_elements(draw, k=3):
    kind, p, f, M = draw(st.sampled_from(RINGS))
    R = LocalRing(kind, p, f, M)
    rng = make_rng(draw(st.integers(0, 2**32)))
    return R, [R.random(rng) for _ in range(k)]


@given(ring_and_elements())
def test_ring_axioms(data):
    R, (x, y, z) = data
    assert R.add(x, y) == R.add(y, x)
    assert R.mul(x, y) == R.mul(y, x)
    assert R.mul(x, R.add(y, z)) == R.add(R.mul(x, y), R.mul(x, z))
    assert R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))
    assert R.sub(x, x) == R.zero
    assert R.mul(x, R.one) == x


@given(ring_and_elements(2))
def test_inverse_and_valuation(data):
    R, (x, y) = data
    if R.is_unit(x):
        assert R.mul(x, R.inv(x)) == R.one
    else:
        with pytest.raises(ArithmeticError):
            R.inv(x)
    vx, vy = R.val(x), R.val(y)
    if vx + vy < R.M:
        assert R.val(R.mul(x, y)) == vx + vy


@given(ring_and_elements(1), st.integers(0, 3))
def test_shift_down_undoes_uniformizer(data, s):
    R, (x,) = data
    y = R.mul(x, R.pi_pow(s))
    assert R.reduce(R.shift_down(y, s), R.M - s) == R.reduce(x, R.M - s)


def test_mixed_matches_integers_mod_p_power():
    R = LocalRing("mixed", 5, 1, 4)
    rng = make_rng(0)
    for _ in range(100):
        a, b = (int(v) for v in rng.integers(0, 625, size=2))
        assert R.mul((a,), (b,)) == ((a * b) % 625,)
        assert R.add((a,), (b,)) == ((a + b) % 625,)


def test_characteristic():
    eq, mx = LocalRing("equal", 3, 1, 4), LocalRing("mixed", 3, 1, 4)
    assert eq.from_int(3) == eq.zero
    assert mx.from_int(3) == mx.pi
    assert mx.val(mx.from_int(9)) == 2


@pytest.mark.parametrize("kind,p,f,M", RINGS)
def test_teichmuller_lifts(kind, p, f, M):
    R = LocalRing(kind, p, f, M)
    F = R.F
    lifts = [R.teich(a) for a in F.elements()]
    assert len(set(lifts)) == F.q
    for a in F.elements():
        assert R.residue(lifts[a]) == a
        assert R.pow(lifts[a], F.q) == lifts[a]
        for b in F.elements():
            assert R.mul(lifts[a], lifts[b]) == lifts[F.mul(a, b)]
            if kind == "equal":
                assert R.add(lifts[a], lifts[b]) == lifts[F.add(a, b)]


def test_elements_mod_counts():
    for kind in ("equal", "mixed"):
        R = LocalRing(kind, 3, 2, 4)
        reps = R.elements_mod(2)
        assert len(reps) == 81
        assert len({R.truncate_key(x, 2) for x in reps}) == 81
        assert [R.residue(x) for x in R.elements_mod(1)] == list(range(9))


def test_smith_distance():
    R = LocalRing("equal", 3, 1, 6)
    assert R.smith_distance(R.Pi()) == 1
    assert R.smith_distance(R.g_lambda(2)) == 1
    assert R.smith_distance(R.mat_identity()) == 0
    assert R.smith_distance(R.mat_mul(R.g_lambda(1), R.g_lambda(2))) == 2
    assert R.smith_distance(R.upper(3, R.one, 0)) == 3
    with pytest.raises(PrecisionError):
        R.smith_distance((R.one, R.one, R.one, R.one))


def test_matrix_inverse_in_K():
    R = LocalRing("mixed", 3, 2, 5)
    rng = make_rng(5)
    n = 0
    while n < 20:
        g = tuple(R.random(rng) for _ in range(4))
        if not R.is_unit(R.mat_det(g)):
            continue
        assert R.mat_mul(g, R.mat_inv_K(g)) == R.mat_identity()
        n += 1


def test_constructors_and_cache():
    assert local_ring("mixed", 9, 4) is local_ring("mixed", 9, 4)
    assert local_ring("equal", 9, 4).f == 2
    with pytest.raises(ValueError):
        LocalRing("other", 3, 1, 2)
    with pytest.raises(ValueError):
        LocalRing("equal", 3, 1, 0)
    with pytest.raises(ValueError):
        LocalRing("equal", 3, 1, 3).pi_pow(-1)
