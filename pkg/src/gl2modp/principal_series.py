"""Principal series ``Ind_P^G χ`` and the self-extensions ``Ind_P^G ε_δ``,
truncated at a congruence level.

A function ``f`` with ``f(bg) = b·f(g)`` is determined by its restriction
to K, and a level-N function by its values on representatives of
``P¹(𝒪/ϖ^N)``:

* chart A: ``[x : 1]``, ``x ∈ 𝒪/ϖ^N``, representative ``(1 0; x 1)``;
* chart B: ``[1 : ϖy]``, ``y ∈ 𝒪/ϖ^{N-1}``, representative ``(0 1; 1 ϖy)``.

Chart A comes first, in the order of :meth:`LocalRing.elements_mod` (code
order at N = 1), then chart B.  G acts by ``(g·f)(h) = f(hg)``.  For the
ε_δ model the vector is the v-block followed by the w-block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from . import subgroups
from .finite_rep import build_finite_ps, standard_generators
from .local import LocalRing, PrecisionError, _ring
from .weights import HChar


@dataclass(frozen=True)
class TorusCharacter:
    """``χ1 ⊗ χ2`` with ``χi(ϖ) = λi`` and ``χi(u) = ū^{ei}`` on units."""

    l1: int
    e1: int
    l2: int
    e2: int
    q: int

    def __post_init__(self):
        if not (0 < self.l1 < self.q and 0 < self.l2 < self.q):
            raise ValueError("λ1, λ2 must be nonzero field elements")
        object.__setattr__(self, "e1", self.e1 % (self.q - 1))
        object.__setattr__(self, "e2", self.e2 % (self.q - 1))

    @property
    def regular(self) -> bool:
        """χ ≠ χ^s."""
        return (self.l1, self.e1) != (self.l2, self.e2)

    @property
    def hecke_eigenvalue(self) -> int:
        """``χ(diag(1, ϖ))``."""
        return self.l2

    def to_json(self) -> dict:
        return {"l1": self.l1, "e1": self.e1, "l2": self.l2, "e2": self.e2}


@dataclass(frozen=True)
class DeltaHom:
    """``δ: L^× → (F_q, +)`` with ``δ(ϖ) = pi_value`` and
    ``δ([ū](1 + ϖa)) = Σ_i a_i ram_i`` for the F_p-coordinates ``a_i`` of ``ā``."""

    pi_value: int
    ram: tuple[int, ...]

    @property
    def ramified(self) -> bool:
        return any(self.ram)

    @classmethod
    def zero(cls, f: int) -> "DeltaHom":
        return cls(0, (0,) * f)

    def to_json(self) -> dict:
        return {"pi": self.pi_value, "ram": list(self.ram)}


class LevelModel:
    """The level-N model of ``Ind χ`` (``delta is None``) or ``Ind ε_δ``."""

    def __init__(self, chi: TorusCharacter, N: int, kind: str = "mixed", delta: DeltaHom | None = None):
        from .field import prime_power

        if N < 1:
            raise ValueError("level must be at least 1")
        p, f = prime_power(chi.q)
        if delta is not None and len(delta.ram) != f:
            raise ValueError(f"δ needs {f} ramified coefficients")
        if delta is not None and delta.ramified and N < 2:
            raise ValueError("a ramified δ is only visible from level 2 on")
        self.chi = chi
        self.delta = delta
        self.N = N
        self.kind = kind
        self.R: LocalRing = _ring(kind, p, f, N + 3)
        self.F = self.R.F
        self.q = self.F.q
        R = self.R
        self.points = [("A", R.truncate_key(x, N)) for x in R.elements_mod(N)]
        self.points += [("B", R.truncate_key(y, N - 1)) for y in R.elements_mod(N - 1)]
        self.index = {pt: i for i, pt in enumerate(self.points)}
        self.npts = len(self.points)
        self.blocks = 1 if delta is None else 2
        self.dim = self.blocks * self.npts
        self._mat_cache: dict = {}

    def __repr__(self) -> str:
        kind = "χ" if self.delta is None else "ε_δ"
        return f"LevelModel({kind}, q={self.q}, N={self.N}, dim={self.dim})"

    def at_level(self, N: int) -> "LevelModel":
        return LevelModel(self.chi, N, self.kind, self.delta)

    # -- points ------------------------------------------------------------
    def rep(self, pt):
        R = self.R
        chart, key = pt
        z = R.from_key(key)
        if chart == "A":
            return (R.one, R.zero, z, R.one)
        return (R.zero, R.one, R.one, R.mul(R.pi, z))

    @property
    def identity_index(self) -> int:
        return self.index[("A", self.R.truncate_key(self.R.zero, self.N))]

    @property
    def w0_index(self) -> int:
        return self.index[("B", self.R.truncate_key(self.R.zero, self.N - 1))]

    def locate(self, h, level: int | None = None):
        """``h = b · rep(pt) · k'`` with ``k'`` in the level-N congruence group.

        Returns ``(pt, b11/b22 data, χ(b))`` where the middle entry is the
        pair ``(valuation, unit)`` of ``b11/b22`` (needed for δ).
        """
        R, F, chi = self.R, self.F, self.chi
        N = self.N if level is None else level
        h11, h12, c, d = h
        det = R.mat_det(h)
        vdet = R.val(det)
        if vdet >= R.M - 2:
            raise PrecisionError("determinant vanishes at working precision")
        udet = R.shift_down(det, vdet)
        vc, vd = R.val(c), R.val(d)
        if vd <= vc:
            if vd + N > R.M:
                raise PrecisionError("bottom row too small for this level")
            ud = R.shift_down(d, vd)
            x = R.mul(R.shift_down(c, vd), R.inv(ud))
            pt = ("A", R.truncate_key(x, N))
            v22, u22 = vd, ud
            v11, u11 = vdet - vd, R.mul(udet, R.inv(ud))
        else:
            if vc + N > R.M:
                raise PrecisionError("bottom row too small for this level")
            uc = R.shift_down(c, vc)
            y = R.mul(R.shift_down(d, vc + 1), R.inv(uc)) if N > 1 else R.zero
            pt = ("B", R.truncate_key(y, N - 1))
            v22, u22 = vc, uc
            v11, u11 = vdet - vc, R.neg(R.mul(udet, R.inv(uc)))
        val = F.mul(
            F.mul(F.pow(chi.l1, v11), F.pow(R.residue(u11), chi.e1)),
            F.mul(F.pow(chi.l2, v22), F.pow(R.residue(u22), chi.e2)),
        )
        ratio = (v11 - v22, R.mul(u11, R.inv(u22)))
        return pt, ratio, val

    def delta_value(self, ratio) -> int:
        """``δ(ϖ^v u)`` for ``ratio = (v, u)``."""
        R, F = self.R, self.F
        v, u = ratio
        dl = self.delta
        out = F.mul(F.from_int(v), dl.pi_value)
        if dl.ramified:
            t = R.mul(u, R.inv(R.teich(R.residue(u))))
            a = R.residue(R.shift_down(R.sub(t, R.one), 1))
            for ai, ci in zip(F.coeffs(a), dl.ram):
                out = F.add(out, F.mul(F.from_int(ai), ci))
        return out

    # -- action ------------------------------------------------------------
    def matrix(self, g) -> np.ndarray:
        """Matrix of g from this level to level ``N + distance(g)``.

        ``g`` must be integral; an integral g of tree distance s maps level-N
        functions to level ``N + s`` functions.
        """
        hit = self._mat_cache.get(g)
        if hit is not None:
            return hit
        R, F = self.R, self.F
        s = R.smith_distance(g)
        out_model = self if s == 0 else self.at_level(self.N + s)
        n_in, n_out = self.npts, out_model.npts
        b = self.blocks
        M = la.zeros(b * n_out, b * n_in)
        for i, pt in enumerate(out_model.points):
            h = R.mat_mul(self.rep(pt), g)
            pt2, ratio, val = self.locate(h)
            j = self.index[pt2]
            M[i, j] = val
            if b == 2:
                M[n_out + i, n_in + j] = val
                dv = self.delta_value(ratio)
                M[i, n_in + j] = F.mul(val, dv)
        if s == 0 and len(self._mat_cache) < 4096:
            self._mat_cache[g] = M
        return M

    def act(self, g, vec) -> np.ndarray:
        return la.matmul(self.F, self.matrix(g), la.asarray(vec)[:, None])[:, 0]

    def op_S(self, vec) -> np.ndarray:
        """``Σ_λ (ϖ [λ]; 0 1) · f``, a function of level N+1."""
        R, F = self.R, self.F
        out = None
        for lam in range(self.q):
            img = self.act(R.g_lambda(lam), vec)
            out = img if out is None else F.vadd(out, img)
        return out

    def inflate(self, vec, N: int) -> np.ndarray:
        """The same function viewed at a higher level ``N``."""
        if N < self.N:
            raise ValueError("inflation only goes up")
        big = self.at_level(N)
        R = self.R
        vec = la.asarray(vec)
        out = la.zeros(1, big.dim)[0]
        for i, (chart, key) in enumerate(big.points):
            n = self.N if chart == "A" else self.N - 1
            j = self.index[(chart, R.truncate_key(R.from_key(key), n))]
            for blk in range(self.blocks):
                out[blk * big.npts + i] = vec[blk * self.npts + j]
        return out

    def value_at(self, vec, g) -> np.ndarray:
        """``f(g)`` as a length-``blocks`` vector, for any integral g."""
        pt, ratio, val = self.locate(g)
        j = self.index[pt]
        F = self.F
        vec = la.asarray(vec)
        if self.blocks == 1:
            return np.array([F.mul(val, int(vec[j]))], dtype=np.int64)
        fv, fw = int(vec[j]), int(vec[self.npts + j])
        dv = self.delta_value(ratio)
        return np.array([F.add(F.mul(val, fv), F.mul(F.mul(val, dv), fw)), F.mul(val, fw)], dtype=np.int64)

    # -- invariants --------------------------------------------------------
    def fixed_space(self, gens) -> np.ndarray:
        F = self.F
        if not gens:
            return la.identity(self.dim)
        eye = la.identity(self.dim)
        blocks = [la.sub(F, self.matrix(g), eye) for g in gens]
        return la.nullspace(F, np.concatenate(blocks, axis=0))

    def k1_invariants(self) -> np.ndarray:
        return self.fixed_space(subgroups.k1_generators(self.R, self.N))

    def i1_invariants(self) -> np.ndarray:
        return self.fixed_space(subgroups.iwahori_one_generators(self.R, self.N))

    def hchar(self, vec) -> HChar:
        """𝓗-character of a torus eigenvector."""
        R, F = self.R, self.F
        vec = la.asarray(vec)
        piv = int(np.flatnonzero(vec)[0])
        exps = []
        for a, d in ((F.gen, 1), (1, F.gen)):
            img = self.act(subgroups.teich_torus(R, a, d), vec)
            lam = F.div(int(img[piv]), int(vec[piv]))
            if not np.array_equal(img, la.scale(F, lam, vec)):
                raise ValueError("not a torus eigenvector")
            exps.append(F.dlog(lam))
        return HChar(exps[0], exps[1], self.q)

    def random_vector(self, rng) -> np.ndarray:
        return np.array([int(x) for x in rng.integers(0, self.q, size=self.dim)], dtype=np.int64)

    def random_K(self, rng):
        R = self.R
        while True:
            g = tuple(R.random(rng) for _ in range(4))
            if R.is_unit(R.mat_det(g)):
                return g

    def vector_to_json(self, vec) -> list:
        R = self.R
        out = []
        vec = la.asarray(vec)
        for blk in range(self.blocks):
            for i, (chart, key) in enumerate(self.points):
                c = int(vec[blk * self.npts + i])
                if c:
                    n = self.N if chart == "A" else self.N - 1
                    out.append(
                        {
                            "component": "vw"[blk],
                            "chart": chart,
                            "coord": R.to_json(R.from_key(key), n),
                            "value": self.F.coeffs(c),
                        }
                    )
        return out


def build_ps_level(chi: TorusCharacter, N: int, kind: str = "mixed") -> LevelModel:
    return LevelModel(chi, N, kind)


def build_ind_eps_level(chi: TorusCharacter, delta: DeltaHom, N: int, kind: str = "mixed") -> LevelModel:
    return LevelModel(chi, N, kind, delta)


def ps_invariants_I1(chi: TorusCharacter, N: int, kind: str = "mixed"):
    """``(dim, f1, f2)`` with ``f1(Id) = 1, f1(Π) = 0`` and ``f2(Id) = 0, f2(Π) = 1``."""
    model = build_ps_level(chi, N, kind)
    inv = model.i1_invariants()
    F = model.F
    Pi = model.R.Pi()
    evals = np.array(
        [[int(model.value_at(row, model.R.mat_identity())[0]) for row in inv], [int(model.value_at(row, Pi)[0]) for row in inv]],
        dtype=np.int64,
    )
    basis = []
    for target in ([1, 0], [0, 1]):
        coeffs = la.solve(F, evals, np.array(target, dtype=np.int64))
        if coeffs is None:
            raise AssertionError("I1-invariants do not separate Id and Π")
        basis.append(la.matmul(F, coeffs[None, :], inv)[0])
    return inv.shape[0], basis[0], basis[1], model


def partial_delta_vanishes(chi: TorusCharacter, delta: DeltaHom, kind: str = "mixed") -> tuple[bool, dict]:
    """Compare ``dim (Ind ε_δ)^{K1}`` at level 2 with ``2 dim π^{K1}``."""
    eps = build_ind_eps_level(chi, delta, 2, kind)
    base = build_ps_level(chi, 2, kind)
    d_eps = eps.k1_invariants().shape[0]
    d_pi = base.k1_invariants().shape[0]
    return d_eps == 2 * d_pi, {"dim_eps_K1": d_eps, "dim_pi_K1": d_pi}


def w_components_vanish(model: LevelModel, rows) -> bool:
    """Every row has zero w-block."""
    rows = la.asarray(rows)
    if rows.shape[0] == 0:
        return True
    return not np.any(rows[:, model.npts :])


def level_one_matches_finite(chi: TorusCharacter, kind: str = "mixed") -> bool:
    """The level-1 K-action equals the finite principal series on generators."""
    model = build_ps_level(chi, 1, kind)
    fin = build_finite_ps(chi.e1, chi.e2, model.F)
    R = model.R
    for g in standard_generators(model.F):
        lift = tuple(R.teich(x) for x in g)
        if not np.array_equal(model.matrix(lift), fin.act(g)):
            return False
    return True


def iwasawa_decompose(R: LocalRing, g):
    """``g = b · k`` with b upper triangular and k ∈ GL2(𝒪), for integral g.

    k is the chart representative of the bottom row of g, so
    ``b = g k^{-1}`` is integral and exactly upper triangular.
    """
    h11, h12, c, d = g
    vc, vd = R.val(c), R.val(d)
    if min(vc, vd) >= R.M:
        raise PrecisionError("bottom row vanishes at working precision")
    if vd <= vc:
        ud = R.shift_down(d, vd)
        x = R.mul(R.shift_down(c, vd), R.inv(ud))
        k = (R.one, R.zero, x, R.one)
        kinv = (R.one, R.zero, R.neg(x), R.one)
    else:
        uc = R.shift_down(c, vc)
        y = R.mul(R.shift_down(d, vc + 1), R.inv(uc))
        k = (R.zero, R.one, R.one, R.mul(R.pi, y))
        kinv = (R.neg(R.mul(R.pi, y)), R.one, R.one, R.zero)
    b = R.mat_mul(g, kinv)
    return b, k
