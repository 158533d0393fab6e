"""Checks of the four structural properties of the operator S on random
vectors, in the tree model (compact induction) and in the level model
(principal series).

(i)   𝓗-eigenvectors go to 𝓗-eigenvectors with the same character;
(ii)  N0-fixed vectors go to N0-fixed vectors;
(iii) for N0-fixed v and h ∈ T1, ``h·Sv = S(h·v)``;
(iv)  v fixed by ``G_{n+1} = (1+𝔭 𝒪; 𝔭^{n+1} 1+𝔭)`` gives ``Sv`` fixed by ``G_n``.
"""

from __future__ import annotations

import numpy as np

from . import linalg as la
from . import subgroups
from .principal_series import LevelModel
from .tree import CInd
from .weights import HChar


def torus_elements(R):
    F = R.F
    return [((a, d), subgroups.teich_torus(R, a, d)) for a in F.nonzero() for d in F.nonzero()]


def _char_value(F, chi: HChar, a: int, d: int) -> int:
    return F.mul(F.pow(a, chi.c), F.pow(d, chi.d))


# -- tree model -------------------------------------------------------------


class TreeAdapter:
    """Uniform interface over a compact induction restricted to balls."""

    def __init__(self, C: CInd, radius: int = 2):
        self.C = C
        self.radius = radius
        self.R = C.R
        self.F = C.K

    def act(self, g, x):
        return self.C.translate(g, x)

    def S(self, x):
        return self.C.op_S(x)

    def add(self, x, y):
        return self.C.add(x, y)

    def scale(self, c, x):
        return self.C.scale(c, x)

    def equal(self, x, y):
        return self.C.equal(x, y)

    def is_zero(self, x):
        return not x

    def depth(self, x) -> int:
        return self.C.radius(x) + 1

    def random(self, rng):
        verts = self.C.tree.ball(self.radius)
        x = {}
        for v in verts:
            if rng.random() < 0.4:
                x[v] = np.array([int(c) for c in rng.integers(0, self.F.q, size=self.C.dim)], dtype=np.int64)
        return self.C._clean(x)

    def random_fixed(self, rng, gens):
        rows = self.C.fixed_space(gens, self.radius)
        if rows.shape[0] == 0:
            return {}
        coeffs = rng.integers(0, self.F.q, size=rows.shape[0])
        vec = la.matmul(self.F, np.array([int(c) for c in coeffs], dtype=np.int64)[None, :], rows)[0]
        return self.C.from_vector(vec, self.radius)

    def base_depth(self) -> int:
        return self.radius + 1


class LevelAdapter:
    """Uniform interface over a level model; S raises the level by one."""

    def __init__(self, model: LevelModel):
        self.model = model
        self.R = model.R
        self.F = model.F
        self._models = {model.N: model}

    def _at(self, N):
        if N not in self._models:
            self._models[N] = self.model.at_level(N)
        return self._models[N]

    # vectors carry their level
    def act(self, g, x):
        N, vec = x
        return (N, self._at(N).act(g, vec))

    def S(self, x):
        N, vec = x
        return (N + 1, self._at(N).op_S(vec))

    def _common(self, x, y):
        (Nx, vx), (Ny, vy) = x, y
        N = max(Nx, Ny)
        if Nx < N:
            vx = self._at(Nx).inflate(vx, N)
        if Ny < N:
            vy = self._at(Ny).inflate(vy, N)
        return N, vx, vy

    def add(self, x, y):
        N, vx, vy = self._common(x, y)
        return (N, self.F.vadd(vx, vy))

    def scale(self, c, x):
        N, v = x
        return (N, la.scale(self.F, c, v))

    def equal(self, x, y):
        _, vx, vy = self._common(x, y)
        return np.array_equal(vx, vy)

    def is_zero(self, x):
        return not np.any(x[1])

    def depth(self, x) -> int:
        return x[0]

    def random(self, rng):
        return (self.model.N, self.model.random_vector(rng))

    def random_fixed(self, rng, gens):
        rows = self.model.fixed_space(gens)
        if rows.shape[0] == 0:
            return (self.model.N, np.zeros(self.model.dim, dtype=np.int64))
        coeffs = np.array([int(c) for c in rng.integers(0, self.F.q, size=rows.shape[0])], dtype=np.int64)
        return (self.model.N, la.matmul(self.F, coeffs[None, :], rows)[0])

    def base_depth(self) -> int:
        return self.model.N


def _fixed_by(A, x, gens) -> bool:
    return all(A.equal(A.act(g, x), x) for g in gens)


def h_project(A, x, chi: HChar):
    """``Σ_h χ(h)^{-1} h·x`` over the finite torus."""
    F = A.F
    out = None
    for (a, d), h in torus_elements(A.R):
        c = F.inv(_char_value(F, chi, a, d))
        term = A.scale(c, A.act(h, x))
        out = term if out is None else A.add(out, term)
    return out


def is_h_eigen(A, x, chi: HChar) -> bool:
    F = A.F
    gen = F.gen
    for a, d in ((gen, 1), (1, gen)):
        h = subgroups.teich_torus(A.R, a, d)
        if not A.equal(A.act(h, x), A.scale(_char_value(F, chi, a, d), x)):
            return False
    return True


def check_property(A, prop: str, rng, n: int = 1) -> tuple[bool, bool]:
    """Run one random instance; returns ``(holds, nontrivial)``."""
    R, F = A.R, A.F
    D = A.base_depth()
    if prop == "i":
        for _ in range(50):
            chi = HChar(int(rng.integers(0, F.q - 1)), int(rng.integers(0, F.q - 1)), F.q)
            v = h_project(A, A.random(rng), chi)
            if not A.is_zero(v):
                return is_h_eigen(A, A.S(v), chi), True
        return True, False
    if prop == "ii":
        v = A.random_fixed(rng, subgroups.n0_generators(R, D))
        Sv = A.S(v)
        return _fixed_by(A, Sv, subgroups.n0_generators(R, D + 1)), not A.is_zero(v)
    if prop == "iii":
        v = A.random_fixed(rng, subgroups.n0_generators(R, D))
        Sv = A.S(v)
        ok = all(A.equal(A.act(h, Sv), A.S(A.act(h, v))) for h in subgroups.torus_one_units(R, D + 1))
        return ok, not A.is_zero(v)
    if prop == "iv":
        v = A.random_fixed(rng, subgroups.congruence_generators(R, n + 1, D))
        Sv = A.S(v)
        return _fixed_by(A, Sv, subgroups.congruence_generators(R, n, D + 1)), not A.is_zero(v)
    raise ValueError(f"unknown property {prop!r}")


def sweep(A, count: int, rng, levels=(1, 2, 3)) -> dict:
    """``count`` random instances of each property (iv cycles through levels)."""
    out = {}
    for prop in ("i", "ii", "iii", "iv"):
        holds = 0
        nontrivial = 0
        for k in range(count):
            n = levels[k % len(levels)]
            ok, nt = check_property(A, prop, rng, n)
            holds += ok
            nontrivial += nt
        out[prop] = {"checked": count, "held": holds, "nontrivial": nontrivial}
    return out
