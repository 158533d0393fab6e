"""Verification suites, one per computable statement.

Each suite fills a :class:`Report` with results and pass/fail checks.  The
default parameters are small enough for an interactive run; the acceptance
tests call the same code at full scale.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import abs_check, iwasawa, serre
from .field import gf, prime_power
from .finite_rep import (
    brute_force_h_character,
    build_finite_ps,
    predicted_ps_socle,
    socle,
    unipotent_invariants,
)
from .local import LocalRing
from .principal_series import (
    DeltaHom,
    TorusCharacter,
    build_ps_level,
    partial_delta_vanishes,
    ps_invariants_I1,
)
from .report import Report, make_rng
from .s_lemma import LevelAdapter, TreeAdapter, sweep
from .tree import ROOT, CInd, distance
from .weights import Weight, all_weights, generic_tuples, h_character


def suite_serre(rep: Report, p: int = 5, f: int = 2, **_):
    total = 0
    bad_card = []
    bad_cross = []
    for r in serre_params(p, f):
        for k in range(f + 1):
            for J in itertools.combinations(range(f), k):
                params = serre.RhoBarParams(p, r, frozenset(J))
                D = serre.enumerate_D(params)
                total += 1
                if len(D) != 2 ** len(J) or D != serre.enumerate_D_bruteforce(params):
                    bad_card.append([list(r), list(J)])
        if f >= 2:
            ok, _ = serre.ell_one_cross_check(serre.RhoBarParams(p, r))
            if not ok:
                bad_cross.append(list(r))
    rep.results.update({"p": p, "f": f, "parameter_sets": total})
    rep.check("cardinality 2^|J| and brute-force agreement", not bad_card, failures=bad_card[:10])
    if f >= 2:
        rep.check("length-one members equal the shifted weights", not bad_cross, failures=bad_cross[:10])


def serre_params(p: int, f: int):
    return list(generic_tuples(p, f))


def suite_ext(rep: Report, p: int = 5, f: int = 2, **_):
    bad_dim, bad_chars, bad_koszul = [], [], []
    count = 0
    for s in itertools.product(range(p - 1), repeat=f):
        M = iwasawa.CyclicModule(p, s)
        count += 1
        if iwasawa.ext1_dim(M) != f:
            bad_dim.append(list(s))
        if f == 1 and iwasawa.koszul_ext1_dim(M) != 1:
            bad_koszul.append(list(s))
        chars = iwasawa.ext1_characters(M)
        if chars != iwasawa.closed_form_characters(M) or chars != iwasawa.ext1_characters_dense(M):
            bad_chars.append(list(s))
    rep.results.update({"p": p, "f": f, "modules": count})
    rep.check("Ext^1 dimension equals f", not bad_dim, failures=bad_dim[:10])
    rep.check("characters: graded count = closed form = dense oracle", not bad_chars, failures=bad_chars[:10])
    if f == 1:
        rep.check("Koszul count agrees at f = 1", not bad_koszul, failures=bad_koszul[:10])
    rep.check("homomorphism count equals f", iwasawa.homomorphism_count(p, f) == f)


def suite_finite_ps(rep: Report, q: int = 9, pairs: int = 4, seed: int = 0, **_):
    p, f = prime_power(q)
    F = gf(p, f)
    rng = make_rng(seed)
    cases = [(0, 0), (1, 1)]
    while len(cases) < pairs + 2:
        e1, e2 = (int(x) for x in rng.integers(0, q - 1, size=2))
        cases.append((e1, e2))
    bad = []
    out = []
    for e1, e2 in cases:
        B = build_finite_ps(e1, e2, F)
        soc = socle(B)
        nU = unipotent_invariants(B).shape[0]
        irreducible = len(soc) == 1 and soc[0][1] == 1
        predicted = predicted_ps_socle(e1, e2, q, p)
        ok = B.dim == q + 1 and nU == 2 and irreducible == ((e1 - e2) % (q - 1) != 0)
        if predicted is not None:
            ok = ok and soc == [(predicted, 1)]
        out.append({"e": [e1, e2], "socle": [[w.to_json(), m] for w, m in soc], "dim_U": nU})
        if not ok:
            bad.append([e1, e2])
    rep.results.update({"q": q, "cases": out})
    rep.check("dim q+1, U-invariants 2, socle irreducible iff e1 != e2", not bad, failures=bad)


def suite_partial_delta(rep: Report, q: int = 3, kind: str = "mixed", **_):
    p, f = prime_power(q)
    chi = TorusCharacter(1, 1, 2, 0, q)
    rows = []
    ok = True
    unr, _ = partial_delta_vanishes(chi, DeltaHom(1, (0,) * f), kind)
    ok &= unr
    for j in range(f):
        ram = tuple(1 if i == j else 0 for i in range(f))
        van, info = partial_delta_vanishes(chi, DeltaHom(0, ram), kind)
        rows.append({"ram": list(ram), **info})
        ok &= (not van) and info["dim_eps_K1"] == q + 1
    rep.results.update({"q": q, "ramified_directions": rows})
    rep.check("unramified δ: dim 2(q+1); ramified: dim q+1", ok)
    rep.check("number of ramified directions equals homomorphism count", len(rows) == iwasawa.homomorphism_count(p, f))


def suite_ps_invariants(rep: Report, q: int = 5, kind: str = "mixed", **_):
    chi = TorusCharacter(1, 1, 2, 0, q)
    d, f1, f2, model = ps_invariants_I1(chi, 2, kind)
    rel = np.array_equal(model.op_S(f2), _scaled_inflate(model, f2, chi.hecke_eigenvalue))
    rep.results.update({"dim_I1": d, "hchar_f1": model.hchar(f1).to_json(), "hchar_f2": model.hchar(f2).to_json()})
    rep.check("I1-invariants are 2-dimensional", d == 2)
    rep.check("S f2 = λ f2", rel)
    chars_ok = model.hchar(f1).pair() == (chi.e1, chi.e2) and model.hchar(f2).pair() == (chi.e2, chi.e1)
    rep.check("𝓗-characters (e1,e2) and (e2,e1)", chars_ok)


def _scaled_inflate(model, vec, c):
    from . import linalg as la

    return la.scale(model.F, c, model.inflate(vec, model.N + 1))


def suite_hecke(rep: Report, q: int = 3, kind: str = "equal", pairs: int = 10, seed: int = 0, **_):
    p, f = prime_power(q)
    rng = make_rng(seed)
    R = LocalRing(kind, p, f, 10)
    ok_support, ok_eq, ok_st = True, True, True
    for r in ((1,) + (0,) * (f - 1), (0,) * f):
        C = CInd(R, Weight(r, 0, p))
        Tv = C.hecke_T({ROOT: C.v0})
        expected = q + (1 if C.dim == 1 else 0)
        ok_support &= len(Tv) == expected and all(distance(v) == 1 for v in Tv)
        if C.dim >= 2:
            ok_st &= C.equal(Tv, C.op_S({ROOT: C.v0}))
        A = TreeAdapter(C, 2)
        for _ in range(pairs):
            x = A.random(rng)
            g = random_K(R, rng)
            ok_eq &= C.equal(C.hecke_T(C.translate(g, x)), C.translate(g, C.hecke_T(x)))
    rep.results.update({"q": q, "kind": kind})
    rep.check("support: q raising vertices, plus one vertex iff dim σ = 1", ok_support)
    rep.check("S = T on the spherical generator", ok_st)
    rep.check("T commutes with translations", ok_eq, pairs=pairs)


def random_K(R: LocalRing, rng):
    while True:
        g = tuple(R.random(rng) for _ in range(4))
        if R.is_unit(R.mat_det(g)):
            return g


def suite_s_operator(rep: Report, q: int = 3, count: int = 10, seed: int = 0, bound: int = 6, **_):
    p, f = prime_power(q)
    rng = make_rng(seed)
    res = {}
    ok = True
    for kind in ("equal", "mixed"):
        C = CInd(LocalRing(kind, p, f, 10), Weight((1,) + (0,) * (f - 1), 0, p))
        t = sweep(TreeAdapter(C, 2), count, rng)
        m = build_ps_level(TorusCharacter(1, 1, 2, 0, q), 2, kind)
        lv = sweep(LevelAdapter(m), count, rng)
        res[kind] = {"tree": t, "level": lv}
        ok &= all(v["held"] == v["checked"] for blk in (t, lv) for v in blk.values())
    rep.results["properties"] = res
    rep.check("S properties (i)-(iv) in tree and level models", ok)
    C = CInd(LocalRing("equal", p, f, bound + 6), Weight((1,) + (0,) * (f - 1), 0, p))
    spherical = C.nilpotence_order(C.hecke_T({ROOT: C.v0}), 0, bound)
    generator = C.nilpotence_order({ROOT: C.v0}, 0, bound)
    rep.results["nilpotence"] = {"image_of_generator": spherical, "spherical_generator": generator}
    rep.check("S kills the spherical generator modulo T", generator == 1)


def suite_abs(rep: Report, count: int = 50, seed: int = 0, **_):
    rng = make_rng(seed)
    bad = 0
    matched = 0
    for i in range(count):
        m = abs_check.random_model(rng, p=(3, 5, 7)[i % 3])
        r = abs_check.report(m)
        matched += m.chi_matched()
        if not (r["dim_abS"] <= 1 and r["abS_in_v1w1"] and r["cokernel_quotient"] is True):
            bad += 1
    lemma_ok = True
    for kind in ("abelian", "split_delta"):
        ok, _ = abs_check.gxs_lemma_check(abs_check.control_model(rng, kind, p=3))
        lemma_ok &= ok
    ok, _ = abs_check.gxs_lemma_check(abs_check.random_model(rng, p=3))
    lemma_ok &= ok
    rep.results.update({"models": count, "matched": matched})
    rep.check("dim V^{ab,S} <= 1 inside the v1⊗w1 line; cokernel test true", bad == 0, failures=bad)
    rep.check("sub/quotient analog holds", lemma_ok)


def suite_hchar(rep: Report, qmax: int = 25, **_):
    bad = []
    n = 0
    for q in range(2, qmax + 1):
        try:
            p, f = prime_power(q)
        except ValueError:
            continue
        for w in all_weights(p, f):
            n += 1
            brute = brute_force_h_character(w)
            if brute != h_character(w):
                bad.append(str(w))
    rep.results.update({"weights": n})
    rep.check("closed-form 𝓗-character equals brute-force eigenvalue", not bad, failures=bad[:10])


SUITES = {
    "serre": ("Serre weight set: 2^|J| members, length one equals the shifted weights", suite_serre),
    "ext": ("first Ext over the truncated algebra: dimension f, one character per index", suite_ext),
    "finite-ps": ("finite principal series: socle irreducible iff the exponents differ", suite_finite_ps),
    "ps": ("principal series I1-invariants f1, f2 and the S-eigenrelation", suite_ps_invariants),
    "partial-delta": ("connecting map vanishes iff δ is unramified", suite_partial_delta),
    "hecke": ("Hecke operator formula on the spherical generator", suite_hecke),
    "s-operator": ("structural properties of S on N0-, T1- and 𝓗-data", suite_s_operator),
    "abs": ("ab,S fixed space at most one-dimensional", suite_abs),
    "hchar": ("𝓗-character of the highest-weight line", suite_hchar),
}


def run_suite(name: str, config: dict) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    anchor, fn = SUITES[name]
    rep = Report(f"selftest:{name}", config, anchor=anchor)
    fn(rep, **{k: v for k, v in config.items() if v is not None})
    return rep


__all__ = ["SUITES", "run_suite"]
