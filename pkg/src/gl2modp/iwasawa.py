"""First Ext groups of cyclic modules over the truncated algebra
``R = k[Y_0, ..., Y_{f-1}] / (Y_i^p)``.

Monomials ``Y^e`` are indexed by ``sum(e_j p^j)``.  That index is also the
𝓗-weight: multiplying by ``Y_j`` twists the torus character by ``α^{p^j}``,
so a monomial of index ``m`` times a generator of character ``ψ`` has
character ``ψ α^m``.

``Ext^1_R(M, k)`` for ``M = R/I`` is dual to ``I / m I`` (minimal generators
of the first syzygy), which is what :func:`ext1_dim` computes by rank counts
on each graded piece.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .field import gf
from .weights import HChar, alpha


@dataclass(frozen=True)
class TruncatedRing:
    p: int
    f: int

    @property
    def dim(self) -> int:
        return self.p**self.f

    def index(self, e) -> int:
        return sum(int(x) * self.p**j for j, x in enumerate(e))

    def exponents(self, idx: int) -> tuple[int, ...]:
        return tuple((idx // self.p**j) % self.p for j in range(self.f))

    def degree(self, idx: int) -> int:
        return sum(self.exponents(idx))

    def mul_monomials(self, i: int, j: int) -> int | None:
        """Index of the product, or None when some exponent reaches p."""
        e = [a + b for a, b in zip(self.exponents(i), self.exponents(j))]
        if any(x >= self.p for x in e):
            return None
        return self.index(e)

    def monomials(self):
        return range(self.dim)

    def max_ideal_monomials(self):
        return [m for m in self.monomials() if m != 0]


@dataclass(frozen=True)
class CyclicModule:
    """``R / (Y_0^{s_0+1}, ..., Y_{f-1}^{s_{f-1}+1})``."""

    p: int
    s: tuple[int, ...]
    psi_gen: HChar | None = None

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        for x in self.s:
            if not 0 <= x <= self.p - 2:
                raise ValueError(f"s entry {x} outside [0, {self.p - 2}]")
        if self.psi_gen is None:
            object.__setattr__(self, "psi_gen", HChar(0, 0, self.q))

    @property
    def f(self) -> int:
        return len(self.s)

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def ring(self) -> TruncatedRing:
        return TruncatedRing(self.p, self.f)

    def ideal_generators(self) -> list[dict[int, int]]:
        R = self.ring
        gens = []
        for j, x in enumerate(self.s):
            e = [0] * self.f
            e[j] = x + 1
            gens.append({R.index(e): 1})
        return gens

    def dim(self) -> int:
        return int(np.prod([x + 1 for x in self.s]))


def _poly_times_monomial(R: TruncatedRing, poly: dict, m: int) -> dict:
    out = {}
    for idx, c in poly.items():
        t = R.mul_monomials(idx, m)
        if t is not None:
            out[t] = (out.get(t, 0) + c) % R.p
    return {k: v for k, v in out.items() if v}


def _grade(R: TruncatedRing, idx: int) -> tuple[int, int]:
    return (R.degree(idx), idx % (R.p**R.f - 1))


def _graded_span(R: TruncatedRing, polys) -> dict:
    """Split bi-homogeneous polynomials by (degree, 𝓗-weight)."""
    pieces: dict = {}
    for poly in polys:
        if not poly:
            continue
        grades = {_grade(R, i) for i in poly}
        if len(grades) != 1:
            raise ValueError("generators must be homogeneous")
        pieces.setdefault(grades.pop(), []).append(poly)
    return pieces


def _piece_rank(R: TruncatedRing, polys) -> int:
    F = gf(R.p)
    support = sorted({i for poly in polys for i in poly})
    col = {i: k for k, i in enumerate(support)}
    M = la.zeros(len(polys), len(support))
    for r, poly in enumerate(polys):
        for i, c in poly.items():
            M[r, col[i]] = c
    return la.rank(F, M)


def minimal_generator_grades(R: TruncatedRing, gens) -> dict:
    """Graded dimensions of ``I / m I`` for the ideal ``I`` spanned by gens.

    Returns ``{(degree, weight): count}`` with zero counts dropped.
    """
    I_polys = [_poly_times_monomial(R, g, m) for g in gens for m in R.monomials()]
    mI_polys = [_poly_times_monomial(R, g, m) for g in gens for m in R.max_ideal_monomials()]
    I_pieces = _graded_span(R, I_polys)
    mI_pieces = _graded_span(R, mI_polys)
    out = {}
    for grade, polys in I_pieces.items():
        n = _piece_rank(R, polys) - _piece_rank(R, mI_pieces.get(grade, []))
        if n:
            out[grade] = n
    return out


def ext1_dim(M: CyclicModule) -> int:
    return sum(minimal_generator_grades(M.ring, M.ideal_generators()).values())


def ext1_characters(M: CyclicModule, psi_gen: HChar | None = None) -> list[tuple[HChar, int]]:
    """𝓗-characters of ``Ext^1`` with multiplicities, sorted."""
    psi = M.psi_gen if psi_gen is None else psi_gen
    a = alpha(M.q)
    counts: dict = {}
    for (_, weight), n in minimal_generator_grades(M.ring, M.ideal_generators()).items():
        chi = psi * a**weight
        counts[chi] = counts.get(chi, 0) + n
    return sorted(counts.items())


def ext1_basis(M: CyclicModule) -> list[dict]:
    """Koszul-style descriptors: cocycle ``e_j ↦ Y_j^{s_j+1}``."""
    a = alpha(M.q)
    return [
        {
            "j": j,
            "image_exponents": [x + 1 if i == j else 0 for i, x in enumerate(M.s)],
            "character": (M.psi_gen * a ** ((M.s[j] + 1) * M.p**j)).to_json(),
        }
        for j in range(M.f)
    ]


def closed_form_characters(M: CyclicModule, psi_gen: HChar | None = None) -> list[tuple[HChar, int]]:
    psi = M.psi_gen if psi_gen is None else psi_gen
    a = alpha(M.q)
    return sorted((psi * a ** ((s + 1) * M.p**j), 1) for j, s in enumerate(M.s))


# -- independent oracles -------------------------------------------------


def _torus_action_on_ring(R: TruncatedRing, F, h: tuple[int, int]):
    """Diagonal matrix of diag(λ, μ) on R: Y^e ↦ (λ/μ)^{index} Y^e.

    ``h`` holds the codes of λ, μ in ``F = F_q``.
    """
    ratio = F.div(h[0], h[1])
    return np.array([F.pow(ratio, m) for m in R.monomials()], dtype=np.int64)


def ext1_characters_dense(M: CyclicModule, psi_gen: HChar | None = None) -> list[tuple[HChar, int]]:
    """Brute-force oracle: build ``I/mI`` densely and diagonalize the torus.

    Ignores the grading bookkeeping above: the quotient ``I/mI`` is found by
    global row reduction in ``R`` and the 𝓗-action is read off as matrices
    on a complement basis, then split into eigenspaces by trying every
    character.
    """
    R = M.ring
    q = M.q
    psi = M.psi_gen if psi_gen is None else psi_gen
    F = gf(M.p, M.f)
    Fp = gf(M.p)
    gens = M.ideal_generators()

    def vec(poly):
        v = np.zeros(R.dim, dtype=np.int64)
        for i, c in poly.items():
            v[i] = c
        return v

    I_rows = np.array([vec(_poly_times_monomial(R, g, m)) for g in gens for m in R.monomials()])
    mI_rows = np.array([vec(_poly_times_monomial(R, g, m)) for g in gens for m in R.max_ideal_monomials()])
    I_basis = la.row_basis(Fp, I_rows)
    mI_basis = la.row_basis(Fp, mI_rows)
    # complement of mI inside I: extend mI's basis by rows of I
    span = la.EchelonSpan(Fp, R.dim)
    for row in mI_basis:
        span.add(row)
    comp = []
    for row in I_basis:
        if span.add(row):
            comp.append(row)
    if not comp:
        return []
    comp_F = np.array(comp)  # F_p codes are valid F_q codes
    # torus generators diag(g,1), diag(1,g); solve for the eigen-characters
    g = F.gen
    span_all = np.concatenate([mI_basis, comp_F], axis=0) if len(mI_basis) else comp_F
    results: dict = {}
    dims = []
    for h in [(g, 1), (1, g)]:
        D = _torus_action_on_ring(R, F, h)
        act = F.vmul(comp_F, D[None, :])
        # express act modulo mI in the complement basis
        coords = la.solve(F, span_all.T, act.T)
        dims.append(coords[len(mI_basis):])
    Ag, Bg = dims
    k = len(comp)

    def shifted(A, e):
        return la.sub(F, A, la.scale(F, F.pow(g, e), la.identity(k)))

    # exponents are relative to the module generator, which carries ψ
    cs = [c for c in range(q - 1) if la.nullspace(F, shifted(Ag, c)).shape[0]]
    ds = [d for d in range(q - 1) if la.nullspace(F, shifted(Bg, d)).shape[0]]
    for c in cs:
        for d in ds:
            n = la.nullspace(F, np.concatenate([shifted(Ag, c), shifted(Bg, d)])).shape[0]
            if n:
                results[HChar(c + psi.c, d + psi.d, q)] = n
    return sorted(results.items())


def koszul_ext1_dim(M: CyclicModule) -> int:
    """Ext^1 from the Koszul resolution of the regular sequence
    ``X_j^{s_j+1}`` in the power-series ring.

    The differentials are matrices of monomials; over the residue field
    (evaluating at the origin) their ranks give the Ext dimensions.
    """
    f = M.f
    Fp = gf(M.p)
    gens = [s + 1 for s in M.s]  # exponent of X_j in the j-th element

    def d(kdeg):
        # K_k -> K_{k-1}; bases: subsets of size k
        src = list(itertools.combinations(range(f), kdeg))
        tgt = list(itertools.combinations(range(f), kdeg - 1))
        pos = {t: i for i, t in enumerate(tgt)}
        mat = la.zeros(len(tgt), len(src))
        for col, S in enumerate(src):
            for sign_k, j in enumerate(S):
                T = tuple(x for x in S if x != j)
                # entry ± X_j^{gens[j]}; reduced at the origin it is 0 unless the exponent is 0
                val = 1 if gens[j] == 0 else 0
                mat[pos[T], col] = (val * (-1) ** sign_k) % M.p
        return mat

    d1 = d(1)
    d2 = d(2) if f >= 2 else la.zeros(f, 0)
    # Hom(-, k) dualizes: Ext^1 = ker(d2^T) / im(d1^T)
    ker = f - la.rank(Fp, d2.T) if d2.size else f
    im = la.rank(Fp, d1.T) if d1.size else 0
    return ker - im


def extension_module_generators(M: CyclicModule, j: int) -> dict:
    """Non-splitness witness for the j-th basis extension of ``M`` by ``k``.

    The extension is the pushout of ``0 → I → R → M → 0`` along the
    functional dual to ``Y_j^{s_j+1}``, i.e. ``E = R / (mI + (other gens))``.
    A split extension ``M ⊕ k`` needs two generators; ``E`` needs one.
    Also reports the generator count of ``R/(…, Y_j^{s_j+2}, …)``.
    """
    R = M.ring
    gens = M.ideal_generators()
    kernel = [_poly_times_monomial(R, g, m) for g in gens for m in R.max_ideal_monomials()]
    kernel += [g for i, g in enumerate(gens) if i != j]
    E_dim = R.dim - _span_rank(R, kernel)
    e = [0] * M.f
    e[j] = M.s[j] + 2
    bumped_gens = [g for i, g in enumerate(gens) if i != j]
    if e[j] < M.p:
        bumped_gens.append({R.index(e): 1})
    return {
        "extension_dim": E_dim,
        "module_dim": M.dim(),
        "extension_generators": _top_dim(R, kernel),
        "split_generators": 2,
        "bumped_generators": _top_dim(R, bumped_gens),
    }


def _span_rank(R: TruncatedRing, polys) -> int:
    polys = [p for p in polys if p]
    if not polys:
        return 0
    F = gf(R.p)
    M = la.zeros(len(polys), R.dim)
    for r, poly in enumerate(polys):
        for i, c in poly.items():
            M[r, i] = c
    return la.rank(F, M)


def _ideal_closure(R: TruncatedRing, gens) -> list[dict]:
    return [_poly_times_monomial(R, g, m) for g in gens for m in R.monomials()]


def _top_dim(R: TruncatedRing, gens) -> int:
    """``dim (R/J) / m (R/J)`` for the ideal J generated by gens."""
    J = _ideal_closure(R, gens)
    mR = [{m: 1} for m in R.max_ideal_monomials()]
    return R.dim - _span_rank(R, J + mR)


def homomorphism_count(p: int, f: int, N: int = 2) -> int:
    """F_p-dimension of ``(1+p𝒪) / (1+p𝒪)^p (1+p^N 𝒪)`` by enumeration."""
    from .local import LocalRing

    if p == 2:
        raise ValueError("p must be odd")
    O = LocalRing.mixed(p, f, N)
    units = [O.one_plus_pi_times(x) for x in O.elements_mod(N - 1)]
    powers = {O.key(O.pow(u, p)) for u in units}
    size = len(units) // len(powers)
    d = 0
    while p**d < size:
        d += 1
    assert p**d == size
    return d
