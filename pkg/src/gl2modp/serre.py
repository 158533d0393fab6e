"""The Serre weight set as tag tuples, its length function, and the
length-one cross check against the shifted weights."""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field

from .weights import Weight, is_generic, sigma_shift


class Tag(enum.IntEnum):
    ID = 0  # x
    PLUS = 1  # x + 1
    FLIP = 2  # p - 2 - x
    FM = 3  # p - 3 - x

    @property
    def is_flip(self) -> bool:
        return self in (Tag.FLIP, Tag.FM)


# tags allowed at i+1, keyed by whether the tag at i is a flip
SUCCESSORS = {False: frozenset({Tag.ID, Tag.FLIP}), True: frozenset({Tag.FM, Tag.PLUS})}


class NonGenericError(ValueError):
    pass


@dataclass(frozen=True)
class RhoBarParams:
    p: int
    r: tuple[int, ...]
    J: frozenset = field(default_factory=frozenset)
    mu: int = 1
    eta: tuple[int, int] = (0, 1)

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "J", frozenset(int(j) for j in self.J))
        if not is_generic(r, self.p):
            raise NonGenericError(f"r = {r} is not generic for p = {self.p}")
        if not self.J <= set(range(len(r))):
            raise ValueError(f"J = {sorted(self.J)} not inside 0..{len(r) - 1}")
        if self.mu % self.p == 0:
            raise ValueError("mu must be nonzero")

    @property
    def f(self) -> int:
        return len(self.r)

    @property
    def split(self) -> bool:
        return len(self.J) == self.f


def tags_valid(tags, J) -> bool:
    """Successor rules cyclically, plus PLUS/FM only at indices in J."""
    f = len(tags)
    for i, t in enumerate(tags):
        nxt = tags[(i + 1) % f]
        if nxt not in SUCCESSORS[t.is_flip]:
            return False
        if t in (Tag.PLUS, Tag.FM) and i not in J:
            return False
    return True


def enumerate_D(params: RhoBarParams) -> list[tuple[Tag, ...]]:
    """All valid tag tuples, built by a cyclic walk; sorted by tag codes."""
    f, J = params.f, params.J
    out = []

    def walk(prefix):
        i = len(prefix)
        if i == f:
            if tags_valid(prefix, J):
                out.append(tuple(prefix))
            return
        allowed = SUCCESSORS[prefix[-1].is_flip] if prefix else list(Tag)
        for t in sorted(allowed):
            if t in (Tag.PLUS, Tag.FM) and i not in J:
                continue
            walk(prefix + [t])

    walk([])
    return sorted(out)


def enumerate_D_bruteforce(params: RhoBarParams) -> list[tuple[Tag, ...]]:
    return sorted(
        t for t in itertools.product(list(Tag), repeat=params.f) if tags_valid(t, params.J)
    )


def length(tags) -> int:
    return sum(1 for t in tags if Tag(t).is_flip)


def evaluate(tags, params: RhoBarParams) -> tuple[int, ...]:
    p = params.p
    out = []
    for t, x in zip(tags, params.r):
        t = Tag(t)
        v = {Tag.ID: x, Tag.PLUS: x + 1, Tag.FLIP: p - 2 - x, Tag.FM: p - 3 - x}[t]
        assert 0 <= v <= p - 2, (tags, params.r)
        out.append(v)
    return tuple(out)


def tag_names(tags) -> list[str]:
    return [Tag(t).name for t in tags]


def ell_one_cross_check(params: RhoBarParams) -> tuple[bool, dict]:
    """Compare length-one members (J full) with the shifts of the base weight."""
    if params.f < 2:
        raise ValueError("the cross check needs f >= 2")
    full = RhoBarParams(params.p, params.r, frozenset(range(params.f)), params.mu, params.eta)
    members = [t for t in enumerate_D(full) if length(t) == 1]
    lhs = Counter(evaluate(t, full) for t in members)
    base = Weight(params.r, 0, params.p)
    rhs = Counter(sigma_shift(base, j).r for j in range(params.f))
    ok = lhs == rhs
    report = {
        "length_one": sorted([list(k) for k in lhs.elements()]),
        "shifts": sorted([list(k) for k in rhs.elements()]),
        "ok": ok,
    }
    return ok, report
