"""Weights ``(r_0, ..., r_{f-1}) ⊗ det^a`` and characters of the torus 𝓗."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod


class WeightRangeError(ValueError):
    """A weight entry or shift output fell outside ``[0, p-1]``."""


@dataclass(frozen=True, order=True)
class HChar:
    """The character ``diag([λ], [μ]) ↦ λ^c μ^d``; exponents mod ``q-1``."""

    c: int
    d: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "c", self.c % (self.q - 1))
        object.__setattr__(self, "d", self.d % (self.q - 1))

    def __mul__(self, other: "HChar") -> "HChar":
        if other.q != self.q:
            raise ValueError("characters over different fields")
        return HChar(self.c + other.c, self.d + other.d, self.q)

    def __pow__(self, k: int) -> "HChar":
        return HChar(self.c * k, self.d * k, self.q)

    def pair(self) -> tuple[int, int]:
        return (self.c, self.d)

    def to_json(self) -> list[int]:
        return [self.c, self.d]


def alpha(q: int) -> HChar:
    """The character ``diag(λ, μ) ↦ λ μ^{-1}``."""
    return HChar(1, q - 2, q)


def hchar_s(psi: HChar) -> HChar:
    """Conjugate by the Weyl element: swap the two exponents."""
    return HChar(psi.d, psi.c, psi.q)


@dataclass(frozen=True, order=True)
class Weight:
    r: tuple[int, ...]
    a: int
    p: int

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        object.__setattr__(self, "r", r)
        if not r:
            raise ValueError("weight needs at least one entry")
        for x in r:
            if not 0 <= x <= self.p - 1:
                raise WeightRangeError(f"entry {x} outside [0, {self.p - 1}]")
        object.__setattr__(self, "a", int(self.a) % (self.q - 1))

    @property
    def f(self) -> int:
        return len(self.r)

    @property
    def q(self) -> int:
        return self.p ** len(self.r)

    def to_json(self) -> dict:
        return {"r": list(self.r), "a": self.a}

    @classmethod
    def from_json(cls, data: dict, p: int) -> "Weight":
        return cls(tuple(data["r"]), data["a"], p)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.r)) + f")⊗det^{self.a}"


def weight_dim(w: Weight) -> int:
    return prod(x + 1 for x in w.r)


def all_weights(p: int, f: int):
    """Every weight for ``q = p^f``, in lexicographic order of ``(r, a)``."""
    q = p**f
    for r in itertools.product(range(p), repeat=f):
        for a in range(q - 1):
            yield Weight(r, a, p)


def h_character(w: Weight) -> HChar:
    """𝓗-character on the line fixed by the upper unipotent radical."""
    top = sum(x * w.p**i for i, x in enumerate(w.r))
    return HChar(top + w.a, w.a, w.q)


def sigma_shift(w: Weight, j: int) -> Weight:
    """The shifted weight ``σ_j``: flip entry ``j-1`` and raise entry ``j``."""
    p, f = w.p, w.f
    if f < 2:
        raise ValueError("the shift needs f >= 2")
    if not 0 <= j < f:
        raise ValueError(f"index {j} outside [0, {f - 1}]")
    jm = (j - 1) % f
    rj, rjm = w.r[j], w.r[jm]
    if rjm > p - 2 or rj > p - 2:
        raise WeightRangeError(f"shift {j} leaves the weight range for {w}")
    s = list(w.r)
    s[jm] = p - 2 - rjm
    s[j] = rj + 1
    # p^{j-1} with p^{-1} read as p^{f-1}; Weight reduces b mod q-1
    b = w.a + p**jm * (rjm + 1) - p**j
    return Weight(tuple(s), b, p)


def bracket_s(w: Weight | tuple, p: int | None = None) -> tuple[int, ...]:
    """Tuple ``(r_0+1, p-2-r_1, p-1-r_2, ..., p-1-r_{f-1})``; no twist."""
    if isinstance(w, Weight):
        r, p = w.r, w.p
    else:
        r = tuple(w)
        if p is None:
            raise ValueError("p required for a bare tuple")
    if len(r) < 2:
        raise ValueError("the bracket tuple needs f >= 2")
    out = [r[0] + 1, p - 2 - r[1]] + [p - 1 - x for x in r[2:]]
    for x in out:
        if not 0 <= x <= p - 1:
            raise WeightRangeError(f"bracket entry {x} outside [0, {p - 1}]")
    return tuple(out)


def is_generic(r, p: int) -> bool:
    """Entries in ``[0, p-3]``, not all zero and not all ``p-3``."""
    r = tuple(r)
    return (
        all(0 <= x <= p - 3 for x in r)
        and any(x != 0 for x in r)
        and any(x != p - 3 for x in r)
    )


def generic_tuples(p: int, f: int):
    for r in itertools.product(range(p - 2), repeat=f):
        if is_generic(r, p):
            yield r
