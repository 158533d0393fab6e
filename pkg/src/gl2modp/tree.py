"""Compact inductions ``cInd_{KZ}^G σ`` on the Bruhat–Tits tree, the Hecke
operator T, the operator S, and canonical forms modulo ``(T - λ)``.

Vertices are cosets ``g KZ``.  A vertex is stored as ``(a, b, u)``: the
primitive integral Hermite form ``(ϖ^a u; 0 ϖ^b)`` with ``u`` reduced modulo
``ϖ^a`` (``u`` kept as a short key, see :meth:`LocalRing.truncate_key`).
Up to the centre this is ``(ϖ^n u'; 0 1)`` with ``n = a - b`` and
``u' = u ϖ^{-b}``; ``a + b`` is the distance to the base vertex.

An element of the compact induction is a dict ``vertex -> vector`` meaning
``Σ [rep(vertex), vector]``, with ``[gk, v] = [g, σ(k) v]`` for ``k ∈ KZ``
and ``g'·[g, v] = [g'g, v]``.  The centre acts trivially on σ.
"""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .finite_rep import MatrixRep, build_weight_rep, g_mul, standard_generators
from .local import LocalRing, PrecisionError
from .weights import Weight, weight_dim

Vertex = tuple  # (a, b, ukey)
ROOT: Vertex = (0, 0, ())


def distance(v: Vertex) -> int:
    return v[0] + v[1]


def vertex_n(v: Vertex) -> int:
    return v[0] - v[1]


class Tree:
    """Vertex arithmetic over a truncated ring of integers."""

    def __init__(self, R: LocalRing):
        self.R = R
        self.F = R.F

    # -- representatives -------------------------------------------------
    def rep(self, v: Vertex):
        a, b, u = v
        R = self.R
        return (R.pi_pow(a), R.from_key(u), R.zero, R.pi_pow(b))

    def vertex_of_upper(self, a: int, u, b: int) -> tuple[Vertex, tuple]:
        return self.normal_form(self.R.upper(a, u, b))

    def normal_form(self, g) -> tuple[Vertex, tuple]:
        """``g = ϖ^t · rep(vertex) · k`` with ``k ∈ K``; returns vertex and k mod ϖ.

        Column reduction: make the bottom-left entry zero, normalize the
        diagonal to powers of ϖ, reduce the top-right entry modulo the
        top-left.  Each column operation ``E`` contributes ``E^{-1}`` on the
        left of the accumulated ``k``.
        """
        R = self.R
        F = self.F
        a, b, c, d = g
        t = min(R.val(x) for x in g)
        if t >= R.M:
            raise PrecisionError("matrix vanishes at working precision")
        P = R.M - t
        a, b, c, d = (R.shift_down(x, t) for x in (a, b, c, d))
        k = (1, 0, 0, 1)
        vc, vd = R.val(c), R.val(d)
        if vc < vd:
            a, b, c, d = b, a, d, c
            vc, vd = vd, vc
            k = g_mul(F, (0, 1, 1, 0), k)
        if vd >= P:
            raise PrecisionError("bottom row vanishes at working precision")
        ud = R.shift_down(d, vd)
        ud_inv = R.inv(ud)
        if vc < R.M and not R.is_zero(c):
            ratio = R.mul(R.shift_down(c, vd), ud_inv)  # c/d, integral
            a = R.sub(a, R.mul(ratio, b))
            k = g_mul(F, (1, 0, R.residue(ratio), 1), k)
        Pa = P - vd  # precision of the new top-left entry
        # scale the second column by ud^{-1}
        b = R.mul(b, ud_inv)
        k = g_mul(F, (1, 0, 0, R.residue(ud)), k)
        va = R.val(a)
        if va >= Pa:
            raise PrecisionError("determinant valuation exceeds working precision")
        ua = R.shift_down(a, va)
        # scale the first column by ua^{-1}; it becomes (ϖ^va, 0)
        if R.residue(ua) != 1:
            k = g_mul(F, (R.residue(ua), 0, 0, 1), k)
        # reduce the top-right entry modulo ϖ^va: col2 -= m·col1
        b_low = R.reduce(b, va)
        m_res = R.residue(R.shift_down(R.sub(b, b_low), va))
        if m_res:
            k = g_mul(F, (1, m_res, 0, 1), k)
        return (va, vd, R.truncate_key(b_low, va)), k

    def neighbor_matrices(self):
        """``(ϖ [λ]; 0 1)`` for λ in code order, then ``(1 0; 0 ϖ)``."""
        R = self.R
        mats = [R.g_lambda(lam) for lam in range(self.F.q)]
        mats.append((R.one, R.zero, R.zero, R.pi))
        return mats

    def neighbors(self, v: Vertex) -> list[Vertex]:
        g = self.rep(v)
        return [self.normal_form(self.R.mat_mul(g, y))[0] for y in self.neighbor_matrices()]

    def parent(self, v: Vertex) -> Vertex | None:
        """Closed form: ``(a-1, b, u mod ϖ^{a-1})`` when a > 0, else ``(0, b-1)``.

        ``rep(parent)^{-1} rep(v)`` is ``(ϖ *; 0 1)`` resp. ``diag(1, ϖ)``.
        """
        a, b, u = v
        if a > 0:
            R = self.R
            return (a - 1, b, R.truncate_key(R.from_key(u), a - 1))
        if b > 0:
            return (0, b - 1, ())
        return None

    def parent_by_search(self, v: Vertex) -> Vertex | None:
        if v == ROOT:
            return None
        d = distance(v)
        for w in self.neighbors(v):
            if distance(w) == d - 1:
                return w
        raise AssertionError("no parent found")

    def children(self, v: Vertex) -> list[Vertex]:
        d = distance(v)
        return [w for w in self.neighbors(v) if distance(w) == d + 1]

    def shell(self, d: int) -> list[Vertex]:
        """All vertices at distance d, canonical order."""
        R = self.R
        if d == 0:
            return [ROOT]
        out = [(0, d, ())]
        for a in range(1, d + 1):
            b = d - a
            for u in R.elements_mod(a):
                if b > 0 and R.val(u) > 0:
                    continue
                out.append((a, b, R.truncate_key(u, a)))
        return out

    def ball(self, radius: int) -> list[Vertex]:
        out = []
        for d in range(radius + 1):
            out.extend(self.shell(d))
        return out


class CInd:
    """The compact induction of a weight, with T, S and quotient forms."""

    def __init__(self, R: LocalRing, w: Weight):
        if (R.p, R.f) != (w.p, w.f):
            raise ValueError("weight and ring residue fields differ")
        self.R = R
        self.tree = Tree(R)
        self.w = w
        self.sigma: MatrixRep = build_weight_rep(w)
        self.K = self.sigma.K
        self.dim = weight_dim(w)
        self.eps = 1 if self.dim == 1 else 0
        self._sig_cache: dict = {}
        self._nf_cache: dict = {}
        self._plus_cache: dict = {}
        self._star_cache: dict = {}
        self.v0 = np.zeros(self.dim, dtype=np.int64)
        self.v0[0] = 1
        self._build_hecke()

    # -- σ(k) with caching ---------------------------------------------
    def sig(self, kbar) -> np.ndarray:
        M = self._sig_cache.get(kbar)
        if M is None:
            M = self.sigma.act(kbar)
            self._sig_cache[kbar] = M
        return M

    def _nf(self, g):
        key = g
        res = self._nf_cache.get(key)
        if res is None:
            res = self.tree.normal_form(g)
            if len(self._nf_cache) < 500000:
                self._nf_cache[key] = res
        return res

    def lift_K(self, kbar):
        R = self.R
        return tuple(R.teich(x) for x in kbar)

    # -- element helpers -------------------------------------------------
    def zero(self) -> dict:
        return {}

    def basis_element(self, v: Vertex, vec) -> dict:
        vec = la.asarray(vec)
        return {v: vec} if np.any(vec) else {}

    def _acc(self, out: dict, v: Vertex, vec):
        cur = out.get(v)
        if cur is None:
            out[v] = vec
        else:
            out[v] = self.K.vadd(cur, vec)

    def _clean(self, out: dict) -> dict:
        return {v: x for v, x in out.items() if np.any(x)}

    def add(self, x: dict, y: dict) -> dict:
        out = dict(x)
        for v, vec in y.items():
            self._acc(out, v, vec)
        return self._clean(out)

    def scale(self, c: int, x: dict) -> dict:
        return self._clean({v: la.scale(self.K, c, vec) for v, vec in x.items()})

    def sub(self, x: dict, y: dict) -> dict:
        return self.add(x, self.scale(self.K.neg(1), y))

    def equal(self, x: dict, y: dict) -> bool:
        return not self.sub(x, y)

    def radius(self, x: dict) -> int:
        return max((distance(v) for v in x), default=-1)

    def translate(self, g, x: dict) -> dict:
        """``g · x`` for ``g ∈ GL2(L) ∩ M2(𝒪)`` (scalars act trivially)."""
        R = self.R
        out: dict = {}
        for v, vec in x.items():
            nv, kbar = self._nf(R.mat_mul(g, self.tree.rep(v)))
            self._acc(out, nv, la.matmul(self.K, self.sig(kbar), vec[:, None])[:, 0])
        return self._clean(out)

    # -- Hecke operator ------------------------------------------------
    def _build_hecke(self):
        """Neighbour data ``(rep_y, A_y)`` with ``T[Id, v] = Σ_y [rep_y, A_y v]``.

        Obtained from ``T[Id, v0] = Σ_λ [g_λ, v0] + ε [Π, v0]`` and
        ``T[Id, σ(k) v0] = k·T[Id, v0]`` for lifts ``k`` whose ``σ(k) v0``
        form a basis.
        """
        R, K, tree = self.R, self.K, self.tree
        F = self.R.F
        terms = [R.g_lambda(lam) for lam in range(F.q)]
        if self.eps:
            terms.append(R.Pi())
        # spin v0 up under K to get k_j with σ(k_j)v0 a basis
        span = la.EchelonSpan(K, self.dim)
        span.add(self.v0)
        ks = [(1, 0, 0, 1)]
        vecs = [self.v0]
        frontier = [0]
        gens = standard_generators(F)
        while frontier and len(span) < self.dim:
            j = frontier.pop(0)
            for g in gens:
                kk = g_mul(F, g, ks[j])
                vv = la.matmul(K, self.sig(kk), self.v0[:, None])[:, 0]
                if span.add(vv):
                    ks.append(kk)
                    vecs.append(vv)
                    frontier.append(len(ks) - 1)
        if len(span) < self.dim:
            raise AssertionError("v0 does not generate σ")
        C = np.stack(vecs, axis=1)
        Cinv = la.inverse(K, C)
        nbr = tree.neighbor_matrices()
        nbr_vertex = [tree.normal_form(y)[0] for y in nbr]
        Q = {v: la.zeros(self.dim, self.dim) for v in nbr_vertex}
        for j, kbar in enumerate(ks):
            klift = self.lift_K(kbar)
            for t in terms:
                nv, kb = tree.normal_form(R.mat_mul(klift, t))
                if nv not in Q:
                    raise AssertionError("Hecke term left the neighbours of the root")
                col = la.matmul(K, self.sig(kb), self.v0[:, None])[:, 0]
                Q[nv][:, j] = K.vadd(Q[nv][:, j], col)
        # A_y is relative to the canonical representative of each neighbour
        self.hecke_data = [(tree.rep(nv), nv, la.matmul(K, Q[nv], Cinv)) for nv in nbr_vertex]
        self._check_hecke_well_defined(gens)

    def _check_hecke_well_defined(self, gens):
        """``T[Id, σ(γ)e] = γ·T[Id, e]`` for generators γ of GL2(F_q)."""
        K = self.K
        for g in gens:
            glift = self.lift_K(g)
            Sg = self.sig(g)
            for i in range(self.dim):
                e = np.zeros(self.dim, dtype=np.int64)
                e[i] = 1
                lhs = self.hecke_T({ROOT: la.matmul(K, Sg, e[:, None])[:, 0]})
                rhs = self.translate(glift, self.hecke_T({ROOT: e}))
                if not self.equal(lhs, rhs):
                    raise AssertionError("Hecke formula is not K-equivariant for this v0")

    def _star(self, v: Vertex) -> list:
        """``[(w, B)]`` with ``T[rep(v), e] = Σ [rep(w), B e]``."""
        hit = self._star_cache.get(v)
        if hit is None:
            R, K = self.R, self.K
            g = self.tree.rep(v)
            hit = []
            for y, _, A in self.hecke_data:
                nv, kbar = self.tree.normal_form(R.mat_mul(g, y))
                hit.append((nv, la.matmul(K, self.sig(kbar), A)))
            if len(self._star_cache) < 400000:
                self._star_cache[v] = hit
        return hit

    def _hecke_into(self, out: dict, x: dict, coeff: int = 1):
        K = self.K
        for v, vec in x.items():
            if coeff != 1:
                vec = la.scale(K, coeff, vec)
            for nv, B in self._star(v):
                self._acc(out, nv, la.matmul(K, B, vec[:, None])[:, 0])

    def hecke_T(self, x: dict) -> dict:
        out: dict = {}
        self._hecke_into(out, x)
        return self._clean(out)

    def op_S(self, x: dict, times: int = 1) -> dict:
        for _ in range(times):
            out: dict = {}
            for lam in range(self.R.F.q):
                for v, vec in self.translate(self.R.g_lambda(lam), x).items():
                    self._acc(out, v, vec)
            x = self._clean(out)
        return x

    def T_minus(self, x: dict, lam: int) -> dict:
        return self.sub(self.hecke_T(x), self.scale(lam, x))

    # -- quotient canonical form -------------------------------------
    def _raising(self, z: Vertex):
        """Children of z and the block matrix of T restricted to them.

        The block of child w is the matrix B with ``T[rep(z), e] ∋ [rep(w), B e]``;
        the echelon data only depends on the tuple of blocks, so it is shared.
        """
        K = self.K
        d = distance(z)
        blocks = sorted((w, B) for w, B in self._star(z) if distance(w) == d + 1)
        kids = [w for w, _ in blocks]
        key = tuple(B.tobytes() for _, B in blocks)
        hit = self._plus_cache.get(key)
        if hit is None:
            M = np.concatenate([B for _, B in blocks], axis=0)
            if la.rank(K, M) != self.dim:
                raise AssertionError(f"raising part of T is not injective at {z}")
            # canonical complement of the image: reduce modulo its RREF rows
            span = la.EchelonSpan(K, M.shape[0])
            for c in range(self.dim):
                span.add(M[:, c])
            hit = (M, span)
            self._plus_cache[key] = hit
        return kids, hit[0], hit[1]

    def quotient_reduce(self, x: dict, lam: int) -> dict:
        """Canonical representative of x modulo the image of ``T - λ``.

        Shells are cleaned from the outside in: at each parent ``z`` the
        components on the children of z are reduced into a fixed complement
        of the image of the raising part of T by subtracting
        ``(T - λ)[rep(z), u]``, which only changes z, its children and its
        parent.  The raising part being injective, the result depends only
        on the class of x (and is 0 exactly on the image).
        """
        K = self.K
        x = self._clean(x)
        R = self.radius(x)
        minus_one = K.neg(1)
        zero = np.zeros(self.dim, dtype=np.int64)
        for d in range(R, 0, -1):
            parents: dict = {}
            for v in [v for v in x if distance(v) == d and np.any(x[v])]:
                parents.setdefault(self.tree.parent(v), []).append(v)
            for z in sorted(parents):
                kids, M, span = self._raising(z)
                c = np.concatenate([x.get(k, zero) for k in kids])
                w = span.reduce(c)
                diff = K.vsub(c, w)
                if not np.any(diff):
                    continue
                u = la.solve(K, M, diff)
                # x -= (T - λ)[rep(z), u], in place
                self._hecke_into(x, {z: u}, minus_one)
                if lam:
                    self._acc(x, z, la.scale(K, lam, u))
        return self._clean(x)

    def in_image_ball_solve(self, x: dict, lam: int) -> bool:
        """Oracle: solve ``(T - λ) u = x`` with ``u`` on the ball of radius
        ``radius(x) - 1`` by dense elimination."""
        K = self.K
        Rx = self.radius(x)
        if Rx < 0:
            return True
        if Rx == 0:
            return False
        src = self.tree.ball(Rx - 1)
        tgt = self.tree.ball(Rx)
        pos = {v: i for i, v in enumerate(tgt)}
        n = self.dim
        cols = []
        for v in src:
            for i in range(n):
                e = np.zeros(n, dtype=np.int64)
                e[i] = 1
                img = self.T_minus({v: e}, lam)
                col = np.zeros(len(tgt) * n, dtype=np.int64)
                for w, vec in img.items():
                    col[pos[w] * n : (pos[w] + 1) * n] = vec
                cols.append(col)
        A = np.stack(cols, axis=1)
        b = np.zeros(len(tgt) * n, dtype=np.int64)
        for w, vec in x.items():
            b[pos[w] * n : (pos[w] + 1) * n] = vec
        return la.solve(K, A, b) is not None

    def nilpotence_order(self, x: dict, lam: int, bound: int) -> int | None:
        """Least ``n <= bound`` with ``S^n x ≡ 0`` modulo ``T - λ``; else None."""
        x = self.quotient_reduce(x, lam)
        if not x:
            return 0
        for n in range(1, bound + 1):
            x = self.quotient_reduce(self.op_S(x), lam)
            if not x:
                return n
        return None

    # -- vectors on balls ---------------------------------------------
    def ball_index(self, radius: int):
        verts = self.tree.ball(radius)
        return verts, {v: i for i, v in enumerate(verts)}

    def to_vector(self, x: dict, radius: int) -> np.ndarray:
        verts, pos = self.ball_index(radius)
        out = np.zeros(len(verts) * self.dim, dtype=np.int64)
        for v, vec in x.items():
            i = pos[v]
            out[i * self.dim : (i + 1) * self.dim] = vec
        return out

    def from_vector(self, vec, radius: int) -> dict:
        verts, _ = self.ball_index(radius)
        n = self.dim
        return self._clean({v: la.asarray(vec[i * n : (i + 1) * n]) for i, v in enumerate(verts)})

    def translation_matrix(self, g, radius: int) -> np.ndarray:
        """Matrix of ``g`` on functions supported on the ball (g ∈ K)."""
        verts, pos = self.ball_index(radius)
        n = self.dim
        M = la.zeros(len(verts) * n, len(verts) * n)
        for i, v in enumerate(verts):
            nv, kbar = self._nf(self.R.mat_mul(g, self.tree.rep(v)))
            j = pos[nv]
            M[j * n : (j + 1) * n, i * n : (i + 1) * n] = self.sig(kbar)
        return M

    def fixed_space(self, elements, radius: int) -> np.ndarray:
        """Rows spanning functions on the ball fixed by all ``elements`` (⊂ K)."""
        K = self.K
        N = len(self.tree.ball(radius)) * self.dim
        blocks = [la.sub(K, self.translation_matrix(g, radius), la.identity(N)) for g in elements]
        return la.nullspace(K, np.concatenate(blocks, axis=0))

    def to_json(self, x: dict) -> list:
        R = self.R
        out = []
        for v in sorted(x):
            a, b, u = v
            out.append(
                {
                    "n": a - b,
                    "a": a,
                    "b": b,
                    "u_digits": R.to_json(R.from_key(u), a) if a else [],
                    "vector": [self.K.coeffs(int(c)) for c in x[v]],
                }
            )
        return out
