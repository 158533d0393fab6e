"""Command line interface: ``gl2modp <command> [options]``.

Every command prints one JSON report (``--pretty`` for a text rendering)
and exits with status 0 exactly when all of its checks pass.
"""

from __future__ import annotations

import functools
import sys
import time

import click
import numpy as np

from . import __version__, abs_check, iwasawa, serre
from . import linalg as la
from .field import FieldError, gf, prime_power
from .finite_rep import build_finite_ps, predicted_ps_socle, socle, unipotent_invariants
from .local import LocalRing, PrecisionError
from .principal_series import (
    DeltaHom,
    TorusCharacter,
    build_ind_eps_level,
    build_ps_level,
    ps_invariants_I1,
    w_components_vanish,
)
from .report import Report, dumps, make_rng, output_path, pretty
from .s_lemma import TreeAdapter
from .selftest import SUITES, run_suite
from .tree import ROOT, CInd
from .weights import HChar, Weight, WeightRangeError

MAX_Q = 125
MAX_DEPTH = 4
MAX_LEVEL = 3


def int_tuple(text: str | None) -> tuple[int, ...]:
    if text is None or text.strip() == "":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma separated integers, got {text!r}")


class DomainError(click.ClickException):
    """Bad mathematical input; exit status 2 like a usage error."""

    exit_code = 2


def common_options(fn):
    @click.option("--json", "as_json", is_flag=True, help="JSON output (the default).")
    @click.option("--pretty", is_flag=True, help="Plain-text rendering of the report.")
    @click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomised sweeps.")
    @click.option("--override-scale", is_flag=True, help="Lift the desk-scale guards.")
    @click.option("--out", type=str, default=None, help="Also write the report to this file.")
    @functools.wraps(fn)
    def wrapper(as_json, pretty, seed, override_scale, out, **kwargs):
        opts = {"pretty": pretty, "seed": seed, "override_scale": override_scale, "out": out}
        t0 = time.perf_counter()
        try:
            rep = fn(opts, **kwargs)
        except (PrecisionError, FieldError, WeightRangeError, serre.NonGenericError, ValueError) as exc:
            raise DomainError(f"{fn.__name__.replace('_', '-')}: {exc}")
        rep._t0 = t0
        emit(rep, opts)

    return wrapper


def emit(rep: Report, opts: dict):
    data = rep.to_dict()
    text = pretty(data) if opts["pretty"] else dumps(data)
    click.echo(text)
    path = output_path(opts["out"])
    if path:
        with open(path, "w") as fh:
            fh.write(dumps(data) + "\n")
    sys.exit(0 if rep.passed else 1)


def guard(opts, q=None, depth=None, level=None):
    if opts["override_scale"]:
        return
    if q is not None and q > MAX_Q:
        raise click.UsageError(f"q = {q} exceeds {MAX_Q}; pass --override-scale to run anyway")
    if depth is not None and depth > MAX_DEPTH:
        raise click.UsageError(f"depth {depth} exceeds {MAX_DEPTH}; pass --override-scale to run anyway")
    if level is not None and level > MAX_LEVEL:
        raise click.UsageError(f"level {level} exceeds {MAX_LEVEL}; pass --override-scale to run anyway")


def field_of(q: int):
    try:
        p, f = prime_power(q)
    except ValueError:
        raise click.BadParameter(f"q = {q} is not a prime power")
    if p == 2:
        raise click.BadParameter("q must be odd")
    return p, f


@click.group()
@click.version_option(version=__version__, prog_name="gl2modp")
def main():
    """Exact computations with mod p representations of GL2."""


# -- serre-weights -----------------------------------------------------------


@main.command("serre-weights")
@click.option("--p", type=int, required=True)
@click.option("--f", type=int, required=True)
@click.option("--r", "r_text", required=True, help="Comma separated r_0,...,r_{f-1}.")
@click.option("--J", "J_text", default="", help="Comma separated indices in 0..f-1.")
@common_options
def serre_weights(opts, p, f, r_text, J_text):
    """Enumerate the Serre weight set for generic r and a subset J."""
    r = int_tuple(r_text)
    J = int_tuple(J_text)
    if len(r) != f:
        raise click.BadParameter(f"--r needs {f} entries")
    guard(opts, q=p**f)
    params = serre.RhoBarParams(p, r, frozenset(J))
    D = serre.enumerate_D(params)
    rep = Report("serre-weights", {"p": p, "f": f, "r": list(r), "J": sorted(J)})
    rep.results["tuples"] = [{"tags": serre.tag_names(t), "value": list(serre.evaluate(t, params))} for t in D]
    rep.results["lengths"] = [serre.length(t) for t in D]
    rep.results["cardinality"] = len(D)
    rep.check("cardinality equals 2^|J|", len(D) == 2 ** len(params.J))
    if f >= 2:
        ok, info = serre.ell_one_cross_check(params)
        rep.results["cross_check"] = info
        rep.check("length-one members equal the shifted weights", ok)
    else:
        rep.results["cross_check"] = None
    return rep


# -- ext -----------------------------------------------------------------------


@main.command("ext")
@click.option("--p", type=int, required=True)
@click.option("--f", type=int, required=True)
@click.option("--s", "s_text", required=True, help="Comma separated s_0,...,s_{f-1} in [0, p-2].")
@click.option("--psi", "psi_text", default=None, help="Character c,d of the generator.")
@common_options
def ext(opts, p, f, s_text, psi_text):
    """First Ext of the cyclic module for s: dimension and 𝓗-characters."""
    s = int_tuple(s_text)
    if len(s) != f:
        raise click.BadParameter(f"--s needs {f} entries")
    guard(opts, q=p**f)
    psi = None
    if psi_text is not None:
        c, d = int_tuple(psi_text)
        psi = HChar(c, d, p**f)
    M = iwasawa.CyclicModule(p, s, psi) if psi is not None else iwasawa.CyclicModule(p, s)
    dim = iwasawa.ext1_dim(M)
    chars = iwasawa.ext1_characters(M, psi)
    rep = Report("ext", {"p": p, "f": f, "s": list(s), "psi": None if psi is None else list(psi.pair())})
    rep.results["dim"] = dim
    rep.results["characters"] = [list(chi.pair()) for chi, _ in chars]
    rep.results["multiplicities"] = [m for _, m in chars]
    rep.check("dimension equals f", dim == f)
    rep.check("characters agree with the closed form", chars == iwasawa.closed_form_characters(M, psi))
    return rep


# -- finite-rep ----------------------------------------------------------------


@main.group("finite-rep")
def finite_rep():
    """Representations of GL2 over a finite field."""


@finite_rep.command("socle")
@click.option("--ps", "ps_text", required=True, help="Exponents e1,e2 of the inducing character.")
@click.option("--q", type=int, default=9, show_default=True)
@click.option("--m", type=int, default=None, help="Coefficient field degree (default f).")
@click.option("--exhaustive", is_flag=True, help="Try every weight, not only the filtered ones.")
@click.option("--matrices", is_flag=True, help="Include generator matrices in the output.")
@common_options
def finite_rep_socle(opts, ps_text, q, m, exhaustive, matrices):
    """Socle of the finite principal series Ind(η1 ⊗ η2)."""
    p, f = field_of(q)
    guard(opts, q=q)
    e1, e2 = int_tuple(ps_text)
    F = gf(p, f)
    B = build_finite_ps(e1, e2, F, m)
    soc = socle(B, exhaustive=exhaustive, m=m)
    nU = int(unipotent_invariants(B).shape[0])
    rep = Report("finite-rep socle", {"q": q, "e": [e1, e2], "m": m, "exhaustive": exhaustive})
    rep.results["dim"] = B.dim
    rep.results["dim_U_invariants"] = nU
    rep.results["socle"] = [{"weight": w.to_json(), "multiplicity": k} for w, k in soc]
    if matrices:
        rep.results["representation"] = B.to_json()
    irreducible = len(soc) == 1 and soc[0][1] == 1
    distinct = (e1 - e2) % (q - 1) != 0
    rep.check("dimension q+1", B.dim == q + 1)
    rep.check("U-invariants are 2-dimensional", nU == 2)
    rep.check("socle irreducible iff e1 != e2", irreducible == distinct)
    pred = predicted_ps_socle(e1, e2, q, p)
    if pred is not None:
        rep.check("socle weight matches the digit formula", [w for w, _ in soc] == [pred])
    return rep


# -- ps --------------------------------------------------------------------------


@main.group("ps")
def ps():
    """Principal series at finite level."""


KIND = click.Choice(["mixed", "equal"])


@ps.command("invariants")
@click.option("--q", type=int, required=True)
@click.option("--e1", type=int, required=True)
@click.option("--e2", type=int, required=True)
@click.option("--l1", type=int, default=1, show_default=True, help="χ1(ϖ) as a field code.")
@click.option("--l2", type=int, default=1, show_default=True, help="χ2(ϖ) as a field code.")
@click.option("--level", type=int, default=2, show_default=True)
@click.option("--kind", type=KIND, default="mixed", show_default=True)
@common_options
def ps_invariants(opts, q, e1, e2, l1, l2, level, kind):
    """I1-invariants f1, f2 of Ind χ and the relation for S f2."""
    field_of(q)
    guard(opts, q=q, level=level)
    chi = TorusCharacter(l1, e1, l2, e2, q)
    d, f1, f2, model = ps_invariants_I1(chi, level, kind)
    rep = Report("ps invariants", {"q": q, "chi": chi.to_json(), "level": level, "kind": kind})
    rep.results["dim_I1"] = d
    rep.results["dim_K1"] = int(model.k1_invariants().shape[0])
    rep.results["f1"] = model.vector_to_json(f1)
    rep.results["f2"] = model.vector_to_json(f2)
    h1, h2 = model.hchar(f1), model.hchar(f2)
    rep.results["hchar"] = {"f1": list(h1.pair()), "f2": list(h2.pair())}
    Sf2 = model.op_S(f2)
    lifted = la.scale(model.F, chi.hecke_eigenvalue, model.inflate(f2, level + 1))
    rep.check("I1-invariants are 2-dimensional", d == 2)
    rep.check("K1-invariants have dimension q+1", level < 2 or rep.results["dim_K1"] == q + 1)
    rep.check("characters (e1,e2) on f1 and (e2,e1) on f2", h1.pair() == (chi.e1, chi.e2) and h2.pair() == (chi.e2, chi.e1))
    rep.check("S f2 = χ2(ϖ) f2", bool(np.array_equal(Sf2, lifted)))
    return rep


@ps.command("partial-delta")
@click.option("--q", type=int, required=True)
@click.option("--delta-ram", "ram_text", required=True, help="δ on 1+ϖ𝒪 via F_p-coordinates, e.g. 1,0.")
@click.option("--delta-pi", type=int, default=0, show_default=True, help="δ(ϖ) as a field code.")
@click.option("--e1", type=int, default=1, show_default=True)
@click.option("--e2", type=int, default=0, show_default=True)
@click.option("--kind", type=KIND, default="mixed", show_default=True)
@common_options
def ps_partial_delta(opts, q, ram_text, delta_pi, e1, e2, kind):
    """K1-invariants of Ind ε_δ against those of Ind χ."""
    p, f = field_of(q)
    guard(opts, q=q)
    ram = int_tuple(ram_text)
    # a shorter list is padded with zeros, a longer one must vanish beyond f
    if any(ram[f:]):
        raise click.BadParameter(f"--delta-ram has nonzero entries beyond f = {f}")
    ram = tuple(ram[:f]) + (0,) * max(0, f - len(ram))
    if not all(0 <= c < q for c in ram):
        raise click.BadParameter("--delta-ram entries must be field codes")
    delta = DeltaHom(delta_pi, ram)
    chi = TorusCharacter(1, e1, 2, e2, q)
    eps = build_ind_eps_level(chi, delta, 2, kind)
    base = build_ps_level(chi, 2, kind)
    rows = eps.k1_invariants()
    d_eps, d_pi = int(rows.shape[0]), int(base.k1_invariants().shape[0])
    rep = Report("ps partial-delta", {"q": q, "delta": delta.to_json(), "chi": chi.to_json(), "kind": kind})
    rep.results.update({"dim_eps_K1": d_eps, "dim_pi_K1": d_pi, "ramified": delta.ramified, "vanishes": d_eps == 2 * d_pi})
    if delta.ramified:
        rep.check("ramified δ: dimension q+1", d_eps == q + 1)
        rep.check("ramified δ: invariants have zero w-component", w_components_vanish(eps, rows))
    else:
        rep.check("unramified δ: dimension 2(q+1)", d_eps == 2 * (q + 1))
    return rep


# -- hecke -------------------------------------------------------------------


@main.group("hecke")
def hecke():
    """Compact induction on the tree: T, S and the quotient by T - λ."""


def _cind(q, sigma_text, kind, M):
    p, f = field_of(q)
    r = int_tuple(sigma_text)
    r = tuple(r[:f]) + (0,) * max(0, f - len(r))
    return CInd(LocalRing(kind, p, f, M), Weight(r, 0, p))


@hecke.command("apply")
@click.option("--sigma", "sigma_text", default="1", show_default=True, help="Weight digits r_0,...")
@click.option("--q", type=int, default=3, show_default=True)
@click.option("--depth", type=int, default=0, show_default=True, help="Random support radius; 0 means [Id, v0].")
@click.option("--op", type=click.Choice(["S", "T"]), default="T", show_default=True)
@click.option("--kind", type=KIND, default="equal", show_default=True)
@common_options
def hecke_apply(opts, sigma_text, q, depth, op, kind):
    """Apply T or S to [Id, v0] or to a random element of a ball."""
    guard(opts, q=q, depth=depth)
    C = _cind(q, sigma_text, kind, depth + 8)
    if depth == 0:
        x = {ROOT: C.v0}
    else:
        x = TreeAdapter(C, depth).random(make_rng(opts["seed"]))
    y = C.hecke_T(x) if op == "T" else C.op_S(x)
    rep = Report("hecke apply", {"q": q, "sigma": list(C.w.r), "depth": depth, "op": op, "kind": kind, "seed": opts["seed"]})
    rep.results["input"] = C.to_json(x)
    rep.results["support"] = C.to_json(y)
    rep.check("support radius grows by at most one", not x or C.radius(y) <= C.radius(x) + 1)
    if depth == 0 and op == "T":
        rep.check("support is q vertices plus one iff dim σ = 1", len(y) == q + C.eps)
    return rep


@hecke.command("nilpotence")
@click.option("--sigma", "sigma_text", default="1", show_default=True)
@click.option("--q", type=int, default=3, show_default=True)
@click.option("--bound", type=int, default=10, show_default=True)
@click.option("--depth", type=int, default=1, show_default=True, help="Radius of the random seed vector.")
@click.option("--lam", type=int, default=0, show_default=True, help="λ in the quotient by T - λ.")
@click.option("--kind", type=KIND, default="equal", show_default=True)
@common_options
def hecke_nilpotence(opts, sigma_text, q, bound, depth, lam, kind):
    """Least n with S^n x = 0 modulo T - λ, searched up to --bound."""
    guard(opts, q=q, depth=depth)
    C = _cind(q, sigma_text, kind, depth + bound + 4)
    x = TreeAdapter(C, depth).random(make_rng(opts["seed"]))
    n = C.nilpotence_order(x, lam, bound)
    rep = Report(
        "hecke nilpotence",
        {"q": q, "sigma": list(C.w.r), "bound": bound, "depth": depth, "lam": lam, "kind": kind, "seed": opts["seed"]},
    )
    rep.results["seed_vector"] = C.to_json(x)
    rep.results["n"] = n if n is not None else "exceeds bound"
    if kind == "equal":
        rep.check("S is nilpotent on the seed within the bound", n is not None)
    return rep


# -- abs-check -----------------------------------------------------------------


@main.command("abs-check")
@click.option("--model", "model_path", default=None, help="Model JSON file; omit for a random model.")
@click.option("--p", type=int, default=5, show_default=True, help="Prime for a random model.")
@click.option("--lattice", is_flag=True, help="Also run the sub/quotient check over all submodules.")
@common_options
def abs_check_cmd(opts, model_path, p, lattice):
    """V^{ab} and V^{ab,S} of a finite model, and the cokernel quotient test."""
    if model_path is None:
        model = abs_check.random_model(make_rng(opts["seed"]), p=p)
        config = {"model": "random", "p": p, "seed": opts["seed"]}
    else:
        model = abs_check.load_model(model_path)
        config = {"model": model.to_json()}
    guard(opts, q=model.F.q)
    res = abs_check.report(model)
    rep = Report("abs-check", config)
    rep.results.update(res)
    rep.results["model"] = model.to_json()
    if model.standing_hypotheses():
        rep.check("V^{ab,S} has dimension at most 1", res["dim_abS"] <= 1)
        rep.check("V^{ab,S} lies on the v1⊗w1 line", res["abS_in_v1w1"])
        rep.check("cokernel quotient test", res["cokernel_quotient"] is True)
    if lattice:
        ok, info = abs_check.gxs_lemma_check(model)
        rep.results["lattice"] = info
        rep.check("sub/quotient analog", ok)
    return rep


# -- selftest -----------------------------------------------------------------


@main.command("selftest")
@click.option("--suite", type=click.Choice(sorted(SUITES) + ["all"]), default="all", show_default=True)
@click.option("--p", type=int, default=None)
@click.option("--f", type=int, default=None)
@click.option("--q", type=int, default=None)
@common_options
def selftest(opts, suite, p, f, q):
    """Run one verification suite, or all of them."""
    for val in (q, p ** f if p and f else None):
        guard(opts, q=val)
    names = sorted(SUITES) if suite == "all" else [suite]
    config = {"p": p, "f": f, "q": q, "seed": opts["seed"]}
    if len(names) == 1:
        return run_suite(names[0], config)
    rep = Report("selftest:all", config)
    for name in names:
        sub = run_suite(name, config)
        rep.results[name] = {"anchor": SUITES[name][0], "passed": sub.passed, "checks": sub.checks}
        rep.check(name, sub.passed)
    return rep


if __name__ == "__main__":
    main()
