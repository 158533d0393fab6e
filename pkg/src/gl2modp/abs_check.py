"""Finite models of ``ρ̄ ⊗ ε_δ`` as a Galois × torus module, the subspaces
``V^{ab}`` and ``V^{ab,S}``, and the cokernel quotient test.

The Galois side is a finitely generated group acting through upper
triangular 2x2 matrices; ``H`` (the part killed in the abelianisation) is
generated by declared elements, by default the commutators of generator
pairs.  The torus quotient S acts on ``ε_δ`` with ``s·w1 = χ(s) w1`` and
``s·w2 = χ(s)(w2 + δ(s) w1)``, and ``ι`` sends each generator of S to a
Galois generator.  Basis of V: ``v1⊗w1, v1⊗w2, v2⊗w1, v2⊗w2``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .field import GF, gf
from .report import make_rng


@dataclass
class AbSModel:
    F: GF
    galois: dict  # name -> 2x2 upper triangular matrix
    h_words: list  # each a list of (name, ±1)
    s_gens: list  # [{"name", "iota", "chi", "delta"}]
    label: str = ""
    extra: dict = field(default_factory=dict)

    # -- construction --------------------------------------------------
    @classmethod
    def from_json(cls, data: dict) -> "AbSModel":
        F = gf(int(data["field"]["p"]), int(data["field"].get("n", 1)))
        galois = {g["name"]: la.asarray(g["matrix"]) % F.q for g in data["galois"]}
        if "h_generators" in data:
            h_words = [[(x[0], int(x[1])) for x in w] for w in data["h_generators"]]
        else:
            h_words = commutator_words(list(galois))
        s_gens = [dict(s) for s in data["s_quotient"]]
        model = cls(F, galois, h_words, s_gens, data.get("label", ""))
        model.validate()
        return model

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "field": {"p": self.F.p, "n": self.F.n},
            "galois": [{"name": k, "matrix": M.tolist()} for k, M in self.galois.items()],
            "h_generators": [[[n, e] for n, e in w] for w in self.h_words],
            "s_quotient": self.s_gens,
        }

    def validate(self):
        F = self.F
        for name, M in self.galois.items():
            if M.shape != (2, 2) or M[1, 0] != 0:
                raise ValueError(f"ρ̄({name}) must be upper triangular 2x2")
            if la.det(F, M) == 0:
                raise ValueError(f"ρ̄({name}) is not invertible")
        for s in self.s_gens:
            if s["iota"] not in self.galois:
                raise ValueError(f"ι({s['name']}) = {s['iota']} is not a Galois generator")
            if not s["chi"] % F.q:
                raise ValueError("χ values must be nonzero")

    # -- matrices ------------------------------------------------------
    def word_matrix(self, word) -> np.ndarray:
        F = self.F
        M = la.identity(2)
        for name, e in word:
            A = self.galois[name]
            if e < 0:
                A = la.inverse(F, A)
            M = la.matmul(F, M, A)
        return M

    def h_matrices(self) -> list[np.ndarray]:
        return [self.word_matrix(w) for w in self.h_words]

    def psi(self, i: int) -> dict:
        return {k: int(M[i, i]) for k, M in self.galois.items()}

    def eps_matrix(self, s: dict) -> np.ndarray:
        F = self.F
        c, d = s["chi"], s["delta"]
        return la.asarray([[c, F.mul(c, d)], [0, c]])

    def module(self) -> "Module":
        """V = ρ̄ ⊗ ε_δ with Galois acting on the left factor."""
        F = self.F
        I2 = la.identity(2)
        G = {k: la.kron(F, M, I2) for k, M in self.galois.items()}
        H = [la.kron(F, M, I2) for M in self.h_matrices()]
        S = [(s["iota"], la.kron(F, I2, self.eps_matrix(s))) for s in self.s_gens]
        return Module(F, 4, G, H, S)

    # -- hypotheses ----------------------------------------------------
    def characters_distinct(self) -> bool:
        return self.psi(0) != self.psi(1)

    def is_indecomposable(self) -> bool:
        """No Galois-stable complement to the line ``v1``: the common
        ψ2-eigenspace contains no vector with nonzero second coordinate."""
        F = self.F
        blocks = [la.sub(F, M, la.scale(F, int(M[1, 1]), la.identity(2))) for M in self.galois.values()]
        N = la.nullspace(F, np.concatenate(blocks, axis=0))
        return not any(int(row[1]) for row in N)

    def delta_nonzero(self) -> bool:
        return any(s["delta"] % self.F.q for s in self.s_gens)

    def chi_matched(self) -> bool:
        psi1 = self.psi(0)
        return all(psi1[s["iota"]] == s["chi"] for s in self.s_gens)

    def standing_hypotheses(self) -> bool:
        return self.is_indecomposable() and self.characters_distinct() and self.delta_nonzero()


def commutator_words(names) -> list:
    return [[(a, 1), (b, 1), (a, -1), (b, -1)] for a, b in itertools.combinations(names, 2)]


class Module:
    """A finite-dimensional Galois × S module given by generator matrices.

    ``G``: Galois generators by name; ``H``: matrices of the declared
    generators of H; ``S``: list of ``(ι-name, matrix of s)``.
    """

    def __init__(self, F: GF, dim: int, G: dict, H: list, S: list):
        self.F = F
        self.dim = dim
        self.G = G
        self.H = H
        self.S = S

    def all_mats(self) -> list[np.ndarray]:
        return list(self.G.values()) + [M for _, M in self.S]

    def anti_diagonal(self) -> list[np.ndarray]:
        """``s ↦ ι(s) · s^{-1}``."""
        F = self.F
        return [la.matmul(F, self.G[name], la.inverse(F, M)) for name, M in self.S]

    def _rows(self, rows) -> np.ndarray:
        rows = la.asarray(rows)
        return rows.reshape(-1, self.dim)

    def largest_stable(self, U) -> np.ndarray:
        """Largest subspace of row span U stable under every generator."""
        F = self.F
        U = la.row_basis(F, self._rows(U)) if len(U) else la.zeros(0, self.dim)
        while U.shape[0]:
            W = U
            for M in self.all_mats():
                # preimage of U under M, intersected with W
                pre = la.matmul(F, U, la.inverse(F, M).T)
                W = la.intersect_rows(F, W, pre)
            if W.shape[0] == U.shape[0]:
                return U
            U = W
        return U

    def fixed(self, mats, inside=None) -> np.ndarray:
        F = self.F
        eye = la.identity(self.dim)
        if not mats:
            base = eye
        else:
            base = la.nullspace(F, np.concatenate([la.sub(F, M, eye) for M in mats], axis=0))
        if inside is not None:
            return la.intersect_rows(F, base, self._rows(inside))
        return base

    def ab(self) -> np.ndarray:
        return self.largest_stable(self.fixed(self.H))

    def abS(self) -> np.ndarray:
        return self.fixed(self.anti_diagonal(), inside=self.ab())

    def h_trivial(self) -> bool:
        eye = la.identity(self.dim)
        return all(np.array_equal(M, eye) for M in self.H)

    def is_stable(self, U) -> bool:
        F = self.F
        U = self._rows(U)
        if U.shape[0] == 0:
            return True
        r = U.shape[0]
        for M in self.all_mats() + self.H:
            if la.rank(F, np.concatenate([U, la.matmul(F, U, M.T)], axis=0)) != r:
                return False
        return True

    def submodule(self, U) -> "Module":
        F = self.F
        U = la.row_basis(F, self._rows(U))

        def restrict(M):
            img = la.matmul(F, M, U.T)
            coords = la.solve(F, U.T, img)
            if coords is None:
                raise ValueError("subspace is not stable")
            return coords

        return Module(
            F,
            U.shape[0],
            {k: restrict(M) for k, M in self.G.items()},
            [restrict(M) for M in self.H],
            [(n, restrict(M)) for n, M in self.S],
        )

    def quotient(self, U) -> "Module":
        F = self.F
        U = la.row_basis(F, self._rows(U)) if len(U) else la.zeros(0, self.dim)
        # complement: standard basis vectors outside the pivots of U
        _, piv = la.rref(F, U) if U.shape[0] else (U, [])
        comp = [i for i in range(self.dim) if i not in piv]
        C = la.zeros(len(comp), self.dim)
        for j, i in enumerate(comp):
            C[j, i] = 1
        B = np.concatenate([U, C], axis=0).T  # columns: basis of V
        Binv = la.inverse(F, B)
        k = U.shape[0]

        def induced(M):
            full = la.matmul(F, Binv, la.matmul(F, M, B))
            return full[k:, k:]

        return Module(
            F,
            len(comp),
            {n: induced(M) for n, M in self.G.items()},
            [induced(M) for M in self.H],
            [(n, induced(M)) for n, M in self.S],
        )

    def h_trivial_on_quotient_by_abS(self) -> bool:
        return self.quotient(self.abS()).h_trivial()


def compute_ab(model: AbSModel) -> np.ndarray:
    return model.module().ab()


def compute_abS(model: AbSModel) -> np.ndarray:
    return model.module().abS()


def subspace_inside(F: GF, U, W) -> bool:
    U = la.asarray(U)
    if U.shape[0] == 0:
        return True
    W = la.asarray(W)
    return la.rank(F, np.concatenate([W, U], axis=0)) == la.rank(F, W)


def rho_chi_module(model: AbSModel) -> Module:
    """``ρ̄ ⊗ χ``: Galois through ρ̄, s acting by the scalar χ(s)."""
    F = model.F
    G = dict(model.galois)
    H = model.h_matrices()
    S = [(s["iota"], la.scale(F, s["chi"], la.identity(2))) for s in model.s_gens]
    return Module(F, 2, G, H, S)


def hom_space(A: Module, B: Module) -> list[np.ndarray]:
    """Basis of equivariant maps ``A → B`` (as ``B.dim x A.dim`` matrices)."""
    F = A.F
    n, m = A.dim, B.dim
    pairs = list(zip(A.G.values(), B.G.values())) + list(zip(A.H, B.H))
    pairs += [(Ma, Mb) for (_, Ma), (_, Mb) in zip(A.S, B.S)]
    # vec(T) column-major: T A - B T = 0  <=>  (A^T ⊗ I - I ⊗ B) vec T = 0
    rows = []
    for Ma, Mb in pairs:
        rows.append(la.sub(F, la.kron(F, Ma.T, la.identity(m)), la.kron(F, la.identity(n), Mb)))
    if not rows:
        N = la.identity(n * m)
    else:
        N = la.nullspace(F, np.concatenate(rows, axis=0))
    return [row.reshape(n, m).T.copy() for row in N]


def _has_surjection(F: GF, basis: list[np.ndarray], target_dim: int, rng=None) -> bool:
    if not basis:
        return False
    d = len(basis)
    if F.q**d <= 4096:
        combos = itertools.product(range(F.q), repeat=d)
    else:
        rng = rng or make_rng(0)
        combos = (tuple(int(c) for c in rng.integers(0, F.q, size=d)) for _ in range(2000))
    for cs in combos:
        T = la.zeros(*basis[0].shape)
        for c, B in zip(cs, basis):
            if c:
                T = la.add(F, T, la.scale(F, c, B))
        if la.rank(F, T) == target_dim:
            return True
    return False


def cokernel_quotient_test(model: AbSModel) -> tuple[bool | None, dict]:
    """Does ``V / V^{ab,S}`` surject equivariantly onto ``ρ̄ ⊗ χ`` with H
    acting non-trivially on the target?  ``None`` when the hypotheses fail
    (reported as "hypothesis violated")."""
    V = model.module()
    abS = V.abS()
    info = {"dim_abS": int(abS.shape[0])}
    if not model.standing_hypotheses() or abS.shape[0] > 1:
        info["status"] = "hypothesis violated"
        return None, info
    Q = V.quotient(abS)
    target = rho_chi_module(model)
    homs = hom_space(Q, target)
    surj = _has_surjection(model.F, homs, 2)
    nontrivial = not target.h_trivial()
    info.update({"dim_hom": len(homs), "surjective": surj, "h_nontrivial_on_target": nontrivial})
    info["status"] = "ok"
    return surj and nontrivial, info


# -- exhaustive sub/quotient analog ---------------------------------------


def all_subspaces(F: GF, n: int):
    """Every subspace of ``F^n`` as an RREF row matrix (including 0 and F^n)."""
    yield la.zeros(0, n)
    for k in range(1, n + 1):
        for piv in itertools.combinations(range(n), k):
            free = [(i, j) for i in range(k) for j in range(n) if j > piv[i] and j not in piv]
            for vals in itertools.product(range(F.q), repeat=len(free)):
                M = la.zeros(k, n)
                for i, j in enumerate(piv):
                    M[i, j] = 1
                for (i, j), v in zip(free, vals):
                    M[i, j] = v
                yield M


def submodule_lattice(V: Module) -> list[np.ndarray]:
    return [U for U in all_subspaces(V.F, V.dim) if V.is_stable(U)]


def gxs_lemma_check(model: AbSModel) -> tuple[bool, dict]:
    """If H acts trivially on ``V/V^{ab,S}``, it does so on ``W/W^{ab,S}``
    for every submodule W and every quotient ``V/W``."""
    V = model.module()
    premise = V.h_trivial_on_quotient_by_abS()
    lattice = submodule_lattice(V)
    ok = True
    checked = 0
    for U in lattice:
        for W in (V.submodule(U) if U.shape[0] else None, V.quotient(U) if U.shape[0] < V.dim else None):
            if W is None or W.dim == 0:
                continue
            checked += 1
            if premise and not W.h_trivial_on_quotient_by_abS():
                ok = False
    return ok, {"premise": premise, "submodules": len(lattice), "models_checked": checked}


def delta_inverse_check(model: AbSModel) -> bool:
    """``δ(s^{-1}) = -δ(s)`` read off from the inverse of the ε_δ matrix."""
    F = model.F
    for s in model.s_gens:
        inv = la.inverse(F, model.eps_matrix(s))
        chi_inv = int(inv[0, 0])
        d_inv = F.div(int(inv[0, 1]), chi_inv)
        if d_inv != F.neg(s["delta"] % F.q):
            return False
    return True


# -- random models --------------------------------------------------------


def random_model(rng, p: int = 5, n: int = 1, n_gens: int = 3, n_s: int = 2, matched: bool | None = None) -> AbSModel:
    """A random upper triangular model meeting the standing hypotheses
    (indecomposable, ψ1 ≠ ψ2, δ ≠ 0)."""
    F = gf(p, n)
    q = F.q

    def nz():
        return int(rng.integers(1, q))

    while True:
        galois = {}
        for i in range(n_gens):
            galois[f"g{i}"] = la.asarray([[nz(), int(rng.integers(0, q))], [0, nz()]])
        names = list(galois)
        if matched is None:
            match = bool(rng.integers(0, 2))
        else:
            match = matched
        s_gens = []
        for j in range(n_s):
            iota = names[int(rng.integers(0, n_gens))]
            chi = int(galois[iota][0, 0]) if match else nz()
            s_gens.append({"name": f"s{j}", "iota": iota, "chi": chi, "delta": int(rng.integers(0, q))})
        if not any(s["delta"] for s in s_gens):
            s_gens[0]["delta"] = nz()
        model = AbSModel(F, galois, commutator_words(names), s_gens, label="random")
        model.validate()
        if model.standing_hypotheses():
            return model


def load_model(path) -> AbSModel:
    with open(path) as fh:
        return AbSModel.from_json(json.load(fh))


def report(model: AbSModel) -> dict:
    F = model.F
    ab = compute_ab(model)
    abS = compute_abS(model)
    ok, info = cokernel_quotient_test(model)
    line11 = la.asarray([[1, 0, 0, 0]])
    plane1 = la.asarray([[1, 0, 0, 0], [0, 1, 0, 0]])
    return {
        "hypothesis": {
            "indecomposable": model.is_indecomposable(),
            "psi_distinct": model.characters_distinct(),
            "delta_nonzero": model.delta_nonzero(),
            "chi_matched": model.chi_matched(),
        },
        "dim_ab": int(ab.shape[0]),
        "dim_abS": int(abS.shape[0]),
        "ab_in_psi1_eps": subspace_inside(F, ab, plane1),
        "abS_in_v1w1": subspace_inside(F, abS, line11),
        "ab_basis": ab.tolist(),
        "abS_basis": abS.tolist(),
        "cokernel_quotient": ok if ok is not None else "hypothesis violated",
        "cokernel_info": info,
    }


def control_model(rng, kind: str, p: int = 5, n: int = 1, n_gens: int = 3, n_s: int = 2) -> AbSModel:
    """Controls: ``abelian`` (diagonal ρ̄), ``split_delta`` (δ = 0, χ matched)."""
    F = gf(p, n)
    q = F.q

    def nz():
        return int(rng.integers(1, q))

    if kind not in ("abelian", "split_delta"):
        raise ValueError(f"unknown control kind {kind!r}")
    while True:
        galois = {}
        for i in range(n_gens):
            b = 0 if kind == "abelian" else int(rng.integers(0, q))
            galois[f"g{i}"] = la.asarray([[nz(), b], [0, nz()]])
        names = list(galois)
        s_gens = []
        for j in range(n_s):
            iota = names[int(rng.integers(0, n_gens))]
            if kind == "abelian":
                s_gens.append({"name": f"s{j}", "iota": iota, "chi": nz(), "delta": int(rng.integers(0, q))})
            else:
                s_gens.append({"name": f"s{j}", "iota": iota, "chi": int(galois[iota][0, 0]), "delta": 0})
        model = AbSModel(F, galois, commutator_words(names), s_gens, label=f"control:{kind}")
        model.validate()
        if not model.characters_distinct():
            continue
        if kind == "split_delta" and not model.is_indecomposable():
            continue
        return model
