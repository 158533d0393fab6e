import pytest

from gl2modp.local import LocalRing
from gl2modp.principal_series import TorusCharacter, build_ps_level
from gl2modp.report import make_rng
from gl2modp.s_lemma import LevelAdapter, TreeAdapter, check_property, h_project, is_h_eigen, sweep
from gl2modp.tree import CInd
from gl2modp.weights import HChar, Weight


@pytest.fixture(scope="module", params=["tree", "level"])
def adapter(request):
    if request.param == "tree":
        return TreeAdapter(CInd(LocalRing("equal", 3, 1, 10), Weight((1,), 0, 3)), 2)
    return LevelAdapter(build_ps_level(TorusCharacter(1, 1, 2, 0, 3), 2, "mixed"))


def test_small_sweep(adapter):
    res = sweep(adapter, 6, make_rng(41))
    assert set(res) == {"i", "ii", "iii", "iv"}
    for row in res.values():
        assert row["held"] == row["checked"] == 6


def test_h_project_gives_eigenvectors(adapter):
    rng = make_rng(42)
    hits = 0
    for c in range(2):
        for d in range(2):
            chi = HChar(c, d, 3)
            v = h_project(adapter, adapter.random(rng), chi)
            assert is_h_eigen(adapter, v, chi)
            hits += not adapter.is_zero(v)
    assert hits


def test_h_project_kills_other_characters(adapter):
    rng = make_rng(43)
    v = h_project(adapter, adapter.random(rng), HChar(1, 0, 3))
    # projecting again onto a different character gives zero
    assert adapter.is_zero(h_project(adapter, v, HChar(0, 1, 3)))
    # the torus has (q - 1)^2 = 4 elements, and 4 = 1 in F_3
    assert adapter.equal(h_project(adapter, v, HChar(1, 0, 3)), v)


def test_level_adapter_depth():
    A = LevelAdapter(build_ps_level(TorusCharacter(1, 1, 2, 0, 3), 2, "equal"))
    x = A.random(make_rng(44))
    assert A.depth(x) == 2 and A.depth(A.S(x)) == 3
    y = A.add(x, A.S(x))
    assert A.depth(y) == 3


def test_unknown_property(adapter):
    with pytest.raises(ValueError):
        check_property(adapter, "v", make_rng(0))
