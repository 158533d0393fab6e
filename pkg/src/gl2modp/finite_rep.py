"""Explicit matrix representations of GL2(F_q) over a coefficient field
``K = F_{p^m}`` containing ``F_q``.

Group elements are 4-tuples ``(a, b, c, d)`` of F_q codes.  Representations
act on column vectors on the left.

Conventions
-----------
* Weights act on ``⊗_i Sym^{r_i}`` by ``(g·P)(x, y) = P((x, y) g)`` on the
  i-th factor after raising matrix entries to the ``p^i``-th power, times
  ``det^a``.  The basis of a factor is ``x^{r-k} y^k`` (``k = 0..r``); the
  line fixed by the upper unipotent radical ``U`` is spanned by ``x^r``
  (index 0 of the tensor basis).
* The finite principal series ``Ind_B ψ``, ``ψ(b) = b11^{e1} b22^{e2}``, is
  the space of functions with ``f(bg) = ψ(b) f(g)`` under right
  translation, stored by values at the coset representatives
  ``(1 0; x 1)`` (the point ``[x:1]``) and ``w0`` (the point ``[1:0]``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg as la
from .field import GF, embedding, gf
from .weights import HChar, Weight, h_character

GroupElement = tuple  # (a, b, c, d) codes in F_q


def g_mul(F: GF, g, h) -> GroupElement:
    a, b, c, d = g
    e, f_, x, y = h
    m, s = F.mul, F.add
    return (s(m(a, e), m(b, x)), s(m(a, f_), m(b, y)), s(m(c, e), m(d, x)), s(m(c, f_), m(d, y)))


def g_det(F: GF, g) -> int:
    a, b, c, d = g
    return F.sub(F.mul(a, d), F.mul(b, c))


def g_inv(F: GF, g) -> GroupElement:
    a, b, c, d = g
    di = F.inv(g_det(F, g))
    return (F.mul(d, di), F.neg(F.mul(b, di)), F.neg(F.mul(c, di)), F.mul(a, di))


def unipotent(b: int) -> GroupElement:
    return (1, b, 0, 1)


def lower_unipotent(c: int) -> GroupElement:
    return (1, 0, c, 1)


def diag(a: int, d: int) -> GroupElement:
    return (a, 0, 0, d)


W0: GroupElement = (0, 1, 1, 0)


def standard_generators(F: GF) -> list[GroupElement]:
    """Unipotents over the power basis, the Weyl element, diag(g,1), diag(1,g)."""
    gens = [unipotent(b) for b in F.power_basis()]
    gens.append(W0)
    gens.append(diag(F.gen, 1))
    gens.append(diag(1, F.gen))
    return gens


def torus_generators(F: GF) -> list[GroupElement]:
    return [diag(F.gen, 1), diag(1, F.gen)]


def group_elements(F: GF):
    for g in itertools.product(range(F.q), repeat=4):
        if g_det(F, g):
            yield g


def random_group_element(F: GF, rng) -> GroupElement:
    while True:
        g = tuple(int(x) for x in rng.integers(0, F.q, size=4))
        if g_det(F, g):
            return g


@dataclass
class MatrixRep:
    """A representation given by an action callable, with cached generators."""

    F: GF  # group field F_q
    K: GF  # coefficient field
    dim: int
    act: Callable[[GroupElement], np.ndarray]
    label: str = ""
    _gens: list | None = field(default=None, repr=False)

    @property
    def generators(self) -> list[tuple[GroupElement, np.ndarray]]:
        if self._gens is None:
            self._gens = [(g, self.act(g)) for g in standard_generators(self.F)]
        return self._gens

    def __call__(self, g: GroupElement) -> np.ndarray:
        return self.act(g)

    def to_json(self) -> dict:
        K = self.K
        return {
            "label": self.label,
            "dim": self.dim,
            "generators": [
                {"g": [self.F.coeffs(x) for x in g], "matrix": [[K.coeffs(int(x)) for x in row] for row in M]}
                for g, M in self.generators
            ],
        }


def _coefficient_field(F: GF, m: int | None) -> tuple[GF, np.ndarray]:
    if m is None or m == F.n:
        return F, np.arange(F.q, dtype=np.int64)
    if m % F.n:
        raise ValueError(f"coefficient degree {m} is not a multiple of {F.n}")
    K = gf(F.p, m)
    return K, np.array(embedding(F, K), dtype=np.int64)


def sym_matrix(F: GF, r: int, g) -> np.ndarray:
    """Matrix of g on Sym^r in the basis x^{r-k} y^k (over F_q)."""
    a, b, c, d = g
    M = np.zeros((r + 1, r + 1), dtype=np.int64)

    def polymul(P, Q):
        out = [0] * (len(P) + len(Q) - 1)
        for i, u in enumerate(P):
            if u:
                for j, v in enumerate(Q):
                    if v:
                        out[i + j] = F.add(out[i + j], F.mul(u, v))
        return out

    # polynomials indexed by the power of y
    X = [a, c]  # a x + c y
    Y = [b, d]  # b x + d y
    powX = [[1]]
    powY = [[1]]
    for _ in range(r):
        powX.append(polymul(powX[-1], X))
        powY.append(polymul(powY[-1], Y))
    for k in range(r + 1):
        col = polymul(powX[r - k], powY[k])
        for j, v in enumerate(col):
            M[j, k] = v
    return M


def weight_matrix(w: Weight, g, F: GF | None = None) -> np.ndarray:
    F = F or gf(w.p, w.f)
    M = np.ones((1, 1), dtype=np.int64)
    for i, r in enumerate(w.r):
        gi = tuple(F.frobenius(x, i) for x in g)
        M = la.kron(F, M, sym_matrix(F, r, gi))
    if w.a:
        M = la.scale(F, F.char_eval(w.a, g_det(F, g)), M)
    return M


def build_weight_rep(w: Weight, m: int | None = None) -> MatrixRep:
    F = gf(w.p, w.f)
    K, emb = _coefficient_field(F, m)
    dim = int(np.prod([r + 1 for r in w.r]))

    def act(g):
        return emb[weight_matrix(w, g, F)]

    return MatrixRep(F, K, dim, act, label=f"weight {w}")


def ps_points(F: GF) -> list[tuple[int, int]]:
    """Points of P^1(F_q) as bottom rows: [x:1] for x in code order, then [1:0]."""
    return [(x, 1) for x in range(F.q)] + [(1, 0)]


def build_finite_ps(e1: int, e2: int, F: GF, m: int | None = None) -> MatrixRep:
    K, emb = _coefficient_field(F, m)
    q = F.q
    e1 %= q - 1
    e2 %= q - 1
    reps = [lower_unipotent(x) for x in range(q)] + [W0]

    def act(g):
        M = np.zeros((q + 1, q + 1), dtype=np.int64)
        for i, rep in enumerate(reps):
            h = g_mul(F, rep, g)
            dt = g_det(F, h)
            h21, h22 = h[2], h[3]
            if h22:
                j = F.div(h21, h22)
                b11, b22 = F.div(dt, h22), h22
            else:
                j = q
                b11, b22 = F.neg(F.div(dt, h21)), h21
            M[i, j] = F.mul(F.pow(b11, e1), F.pow(b22, e2))
        return emb[M]

    return MatrixRep(F, K, q + 1, act, label=f"Ind({e1},{e2})")


def direct_sum(A: MatrixRep, B: MatrixRep) -> MatrixRep:
    def act(g):
        Ma, Mb = A.act(g), B.act(g)
        out = la.zeros(A.dim + B.dim, A.dim + B.dim)
        out[: A.dim, : A.dim] = Ma
        out[A.dim :, A.dim :] = Mb
        return out

    return MatrixRep(A.F, A.K, A.dim + B.dim, act, label=f"{A.label}+{B.label}")


def subrep(A: MatrixRep, basis: np.ndarray) -> MatrixRep:
    """Restriction to an invariant subspace spanned by the rows of ``basis``."""
    K = A.K
    basis = la.asarray(basis)
    k = basis.shape[0]

    def act(g):
        img = la.matmul(K, A.act(g), basis.T)
        coords = la.solve(K, basis.T, img)
        if coords is None:
            raise ValueError("subspace is not invariant")
        return coords

    return MatrixRep(A.F, K, k, act, label=f"sub({A.label})")


# -- invariants and torus characters --------------------------------------


def invariants(rep: MatrixRep, elements) -> np.ndarray:
    """Rows spanning the common fixed space of ``elements``."""
    K = rep.K
    blocks = [la.sub(K, rep.act(g), la.identity(rep.dim)) for g in elements]
    if not blocks:
        return la.identity(rep.dim)
    return la.nullspace(K, np.concatenate(blocks, axis=0))


def unipotent_invariants(rep: MatrixRep) -> np.ndarray:
    return invariants(rep, [unipotent(b) for b in rep.F.power_basis()])


def lower_unipotent_invariants(rep: MatrixRep) -> np.ndarray:
    return invariants(rep, [lower_unipotent(b) for b in rep.F.power_basis()])


def _exponent_of(rep: MatrixRep, value: int) -> int:
    """Exponent c with value = (image of the F_q generator)^c, by search."""
    F, K = rep.F, rep.K
    if K is F:
        gK = F.gen
    else:
        gK = embedding(F, K)[F.gen]
    for c in range(F.q - 1):
        if K.pow(gK, c) == value:
            return c
    raise ValueError("eigenvalue outside the image of F_q^x")


def torus_eigen_decomposition(rep: MatrixRep, basis: np.ndarray) -> list[tuple[HChar, np.ndarray]]:
    """Split the torus-stable span of ``basis`` into 𝓗-eigenspaces."""
    F, K = rep.F, rep.K
    basis = la.asarray(basis)
    k = basis.shape[0]
    if k == 0:
        return []
    mats = []
    for h in torus_generators(F):
        coords = la.solve(K, basis.T, la.matmul(K, rep.act(h), basis.T))
        if coords is None:
            raise ValueError("span is not torus-stable")
        mats.append(coords)
    gK = F.gen if K is F else embedding(F, K)[F.gen]
    out = []

    def shifted(A, c):
        return la.sub(K, A, la.scale(K, K.pow(gK, c), la.identity(k)))

    cs = [c for c in range(F.q - 1) if la.nullspace(K, shifted(mats[0], c)).shape[0]]
    ds = [d for d in range(F.q - 1) if la.nullspace(K, shifted(mats[1], d)).shape[0]]
    for c in cs:
        for d in ds:
            N = la.nullspace(K, np.concatenate([shifted(mats[0], c), shifted(mats[1], d)]))
            if N.shape[0]:
                out.append((HChar(c, d, F.q), la.matmul(K, N, basis)))
    return out


def vector_hchar(rep: MatrixRep, v) -> HChar:
    """𝓗-character of a torus eigenvector, by direct eigenvalue search."""
    F, K = rep.F, rep.K
    v = la.asarray(v)
    piv = int(np.flatnonzero(v)[0])
    exps = []
    for h in torus_generators(F):
        img = la.matmul(K, rep.act(h), v[:, None])[:, 0]
        lam = K.div(int(img[piv]), int(v[piv]))
        if not np.array_equal(img, la.scale(K, lam, v)):
            raise ValueError("not a torus eigenvector")
        exps.append(_exponent_of(rep, lam))
    return HChar(exps[0], exps[1], F.q)


def brute_force_h_character(w: Weight) -> HChar:
    """Torus character on the U-fixed line, found by nullspace + eigen search."""
    rep = build_weight_rep(w)
    inv = unipotent_invariants(rep)
    if inv.shape[0] != 1:
        raise AssertionError(f"U-invariants of {w} have dimension {inv.shape[0]}")
    return vector_hchar(rep, inv[0])


# -- Hom spaces ------------------------------------------------------------


def _spin_up(A: MatrixRep):
    """Basis of A built from module generators by applying generators.

    Returns (vectors, words) where words[k] = (gen_index, parent) or
    ("seed", seed_number).
    """
    K = A.K
    span = la.EchelonSpan(K, A.dim)
    vecs: list[np.ndarray] = []
    words: list = []
    gens = A.generators
    seeds = 0
    e = 0
    while len(span) < A.dim:
        while e < A.dim:
            v = np.zeros(A.dim, dtype=np.int64)
            v[e] = 1
            e += 1
            if span.add(v):
                break
        vecs.append(v)
        words.append(("seed", seeds))
        seeds += 1
        queue = [len(vecs) - 1]
        while queue and len(span) < A.dim:
            k = queue.pop(0)
            for gi, (_, M) in enumerate(gens):
                w = la.matmul(K, M, vecs[k][:, None])[:, 0]
                if span.add(w):
                    vecs.append(w)
                    words.append((gi, k))
                    queue.append(len(vecs) - 1)
    return vecs, words, seeds


def hom_space(A: MatrixRep, B: MatrixRep) -> tuple[int, list[np.ndarray]]:
    """Intertwiners A -> B (matrices of shape dimB x dimA) by spin-up.

    An intertwiner is fixed by the images of A's module generators; those
    images are the unknowns, and the relations come from re-expressing
    each generator applied to each spin-up basis vector.
    """
    if A.K is not B.K:
        raise ValueError("different coefficient fields")
    K = A.K
    vecs, words, m = _spin_up(A)
    n = A.dim
    dB = B.dim
    U = m * dB
    gensA = A.generators
    gensB = B.generators
    # T_k: linear map unknowns -> image of basis vector k (dB x U)
    T: list[np.ndarray] = []
    for w in words:
        if w[0] == "seed":
            Tk = la.zeros(dB, U)
            s = w[1]
            Tk[:, s * dB : (s + 1) * dB] = la.identity(dB)
        else:
            gi, parent = w
            Tk = la.matmul(K, gensB[gi][1], T[parent])
        T.append(Tk)
    P = np.stack(vecs, axis=1)  # columns are spin-up vectors
    Pinv = la.inverse(K, P)
    Tstack = np.stack(T)  # (n, dB, U)
    rows = []
    for (_, MA), (_, MB) in zip(gensA, gensB):
        C = la.matmul(K, Pinv, la.matmul(K, MA, P))  # column k: coords of g·a_k
        # Σ_l C[l,k] T_l  for each k
        lhs = la.matmul(K, C.T, Tstack.reshape(n, dB * U)).reshape(n, dB, U)
        rhs = la.matmul(K, MB, Tstack.transpose(1, 0, 2).reshape(dB, n * U)).reshape(dB, n, U).transpose(1, 0, 2)
        rows.append(la.sub(K, lhs, rhs).reshape(n * dB, U))
    system = np.concatenate(rows, axis=0)
    sol = la.nullspace(K, system)
    basis = []
    for u in sol:
        img = np.stack([la.matmul(K, Tk, u[:, None])[:, 0] for Tk in T], axis=1)  # dB x n
        basis.append(la.matmul(K, img, Pinv))
    return len(basis), basis


def hom_space_naive(A: MatrixRep, B: MatrixRep) -> tuple[int, list[np.ndarray]]:
    """Oracle: solve T A(g) = B(g) T for all generators via Kronecker products.

    With row-major vec(T): vec(A X) = (A ⊗ I) vec(X), vec(X A) = (I ⊗ A^T) vec(X).
    """
    K = A.K
    dA, dB = A.dim, B.dim
    blocks = []
    for (_, MA), (_, MB) in zip(A.generators, B.generators):
        left = la.kron(K, la.identity(dB), MA.T)  # T·A(g)
        right = la.kron(K, MB, la.identity(dA))  # B(g)·T
        blocks.append(la.sub(K, left, right))
    sol = la.nullspace(K, np.concatenate(blocks, axis=0))
    return sol.shape[0], [row.reshape(dB, dA) for row in sol]


def is_intertwiner(A: MatrixRep, B: MatrixRep, T: np.ndarray) -> bool:
    K = A.K
    return all(
        np.array_equal(la.matmul(K, T, MA), la.matmul(K, MB, T))
        for (_, MA), (_, MB) in zip(A.generators, B.generators)
    )


def weights_with_hchar(chi: HChar, p: int, f: int) -> list[Weight]:
    """Weights whose U-fixed line carries the character chi."""
    q = p**f
    a = chi.d
    n = (chi.c - chi.d) % (q - 1)
    out = []
    for total in ([n, q - 1] if n == 0 else [n]):
        r = tuple((total // p**i) % p for i in range(f))
        out.append(Weight(r, a, p))
    return out


def socle(B: MatrixRep, exhaustive: bool = False, m: int | None = None) -> list[tuple[Weight, int]]:
    """Weights with positive multiplicity in the socle of B.

    By default only weights whose U-fixed character occurs among the torus
    characters of ``B^U`` are tried: an embedding carries the U-fixed line
    of the weight into ``B^U`` with the same character, so every other
    weight has zero Hom.  ``exhaustive=True`` tries every weight.
    """
    F = B.F
    p, f = F.p, F.n
    if m is None and B.K is not F:
        m = B.K.n
    if exhaustive:
        from .weights import all_weights

        candidates = list(all_weights(p, f))
    else:
        chars = [chi for chi, _ in torus_eigen_decomposition(B, unipotent_invariants(B))]
        candidates = sorted({w for chi in chars for w in weights_with_hchar(chi, p, f)})
    out = []
    for w in candidates:
        d, _ = hom_space(build_weight_rep(w, m), B)
        if d:
            out.append((w, d))
    return out


def predicted_ps_socle(e1: int, e2: int, q: int, p: int) -> Weight | None:
    """The socle weight of Ind(e1, e2) for e1 != e2: digits of e2 - e1, twist e1."""
    f = 0
    while p**f < q:
        f += 1
    n = (e2 - e1) % (q - 1)
    if n == 0:
        return None
    return Weight(tuple((n // p**i) % p for i in range(f)), e1, p)


# -- the operators X_i on weight representations ----------------------------


def x_operator(rep: MatrixRep, i: int) -> np.ndarray:
    """``X_i = Σ_{μ≠0} μ^{-p^i} (1 μ; 0 1)`` as a matrix."""
    F, K = rep.F, rep.K
    emb = np.arange(F.q) if K is F else np.array(embedding(F, K))
    acc = la.zeros(rep.dim, rep.dim)
    for mu in F.nonzero():
        coeff = int(emb[F.pow(mu, -(F.p**i))])
        acc = la.add(K, acc, la.scale(K, coeff, rep.act(unipotent(mu))))
    return acc
