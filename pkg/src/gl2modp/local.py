"""Truncated rings of integers ``𝒪/ϖ^M`` of a local field with residue
field ``F_q``.

Two models share one interface:

* equal characteristic, ``F_q[[t]]``: an element is a length-``M`` tuple of
  F_q codes (coefficients of ``t^0 .. t^{M-1}``), ``ϖ = t``;
* mixed characteristic, unramified of degree ``f``: an element is a
  length-``f`` tuple of integers modulo ``p^M``, coordinates in
  ``(Z/p^M)[x]/(h)`` with ``h`` the lifted modulus of ``F_q``, ``ϖ = p``.

Every operation is exact at absolute precision ``M``.  Division by powers of
``ϖ`` loses precision; callers that need the lost digits get a
:class:`PrecisionError` instead of a silently truncated answer.
"""

from __future__ import annotations

import functools
import itertools

from .field import GF, gf


class PrecisionError(ArithmeticError):
    """The working precision is too small to determine the answer."""


Mat2 = tuple  # (a, b, c, d) for the matrix [[a, b], [c, d]]


class LocalRing:
    def __init__(self, kind: str, p: int, f: int, M: int):
        if kind not in ("equal", "mixed"):
            raise ValueError("kind is 'equal' or 'mixed'")
        if M < 1:
            raise ValueError("precision must be positive")
        self.kind = kind
        self.p = p
        self.f = f
        self.q = p**f
        self.M = M
        self.F: GF = gf(p, f)
        if kind == "mixed":
            self.mod = p**M
            self.h = tuple(self.F.modulus)
        self._teich: dict[int, tuple] = {}

    @classmethod
    def equal(cls, p: int, f: int, M: int) -> "LocalRing":
        return cls("equal", p, f, M)

    @classmethod
    def mixed(cls, p: int, f: int, M: int) -> "LocalRing":
        return cls("mixed", p, f, M)

    def with_precision(self, M: int) -> "LocalRing":
        return _ring(self.kind, self.p, self.f, M)

    def __repr__(self) -> str:
        name = "F_%d[[t]]" % self.q if self.kind == "equal" else "W(F_%d)" % self.q
        return f"{name}/ϖ^{self.M}"

    # -- construction ----------------------------------------------------
    @property
    def zero(self) -> tuple:
        return (0,) * (self.M if self.kind == "equal" else self.f)

    @property
    def one(self) -> tuple:
        return self.from_int(1)

    @property
    def pi(self) -> tuple:
        return self.pi_pow(1)

    def pi_pow(self, k: int) -> tuple:
        if k < 0:
            raise ValueError("negative power of the uniformizer is not integral")
        if self.kind == "equal":
            out = [0] * self.M
            if k < self.M:
                out[k] = 1
            return tuple(out)
        return ((pow(self.p, k, self.mod) if k < self.M else 0),) + (0,) * (self.f - 1)

    def from_int(self, k: int) -> tuple:
        if self.kind == "equal":
            return (k % self.p,) + (0,) * (self.M - 1)
        return (k % self.mod,) + (0,) * (self.f - 1)

    def lift(self, code: int) -> tuple:
        """A lift of a residue class (not the Teichmüller one in mixed char)."""
        if self.kind == "equal":
            return (code,) + (0,) * (self.M - 1)
        return tuple(self.F.coeffs(code))

    def teich(self, code: int) -> tuple:
        """Teichmüller representative ``[λ]``."""
        if self.kind == "equal":
            return self.lift(code)
        t = self._teich.get(code)
        if t is None:
            t = self.lift(code)
            for _ in range(self.M):
                t = self.pow(t, self.q)
            self._teich[code] = t
        return t

    def from_digits(self, digits, start: int = 0) -> tuple:
        """``Σ [d_i] ϖ^{start+i}`` for residue codes ``d_i``."""
        acc = self.zero
        for i, d in enumerate(digits):
            if d:
                acc = self.add(acc, self.mul(self.teich(d), self.pi_pow(start + i)))
        return acc

    # -- ring operations -------------------------------------------------
    def add(self, x, y):
        if self.kind == "equal":
            A = self.F.add_l
            return tuple(A[a][b] for a, b in zip(x, y))
        m = self.mod
        return tuple((a + b) % m for a, b in zip(x, y))

    def neg(self, x):
        if self.kind == "equal":
            N = self.F.neg_l
            return tuple(N[a] for a in x)
        m = self.mod
        return tuple((-a) % m for a in x)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.kind == "equal":
            F = self.F
            A, Mt = F.add_l, F.mul_l
            n = self.M
            out = [0] * n
            nz_y = [(j, b) for j, b in enumerate(y) if b]
            for i, a in enumerate(x):
                if not a:
                    continue
                row = Mt[a]
                for j, b in nz_y:
                    k = i + j
                    if k >= n:
                        break
                    out[k] = A[out[k]][row[b]]
            return tuple(out)
        f, m, h = self.f, self.mod, self.h
        prod = [0] * (2 * f - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        for k in range(2 * f - 2, f - 1, -1):
            c = prod[k]
            if c:
                for j in range(f):
                    prod[k - f + j] -= c * h[j]
        return tuple(c % m for c in prod[:f])

    def mul_int(self, k: int, x):
        return self.mul(self.from_int(k), x)

    def pow(self, x, e: int):
        if e < 0:
            return self.pow(self.inv(x), -e)
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def val(self, x) -> int:
        """Valuation; ``M`` for zero (the element is zero to precision)."""
        if self.kind == "equal":
            for i, a in enumerate(x):
                if a:
                    return i
            return self.M
        v = self.M
        for c in x:
            if c:
                k = 0
                while c % self.p == 0:
                    c //= self.p
                    k += 1
                v = min(v, k)
        return v

    def is_zero(self, x) -> bool:
        return not any(x)

    def is_unit(self, x) -> bool:
        return self.val(x) == 0

    def residue(self, x) -> int:
        if self.kind == "equal":
            return x[0]
        return self.F.from_coeffs([c % self.p for c in x])

    def inv(self, x):
        if not self.is_unit(x):
            raise ArithmeticError("inverse of a non-unit")
        if self.kind == "equal":
            F = self.F
            A, Mt, Ng = F.add_l, F.mul_l, F.neg_l
            n = self.M
            y = [0] * n
            y0 = F.inv_l[x[0]]
            y[0] = y0
            for k in range(1, n):
                s = 0
                for i in range(1, k + 1):
                    if x[i] and y[k - i]:
                        s = A[s][Mt[x[i]][y[k - i]]]
                y[k] = Mt[Ng[s]][y0]
            return tuple(y)
        y = self.lift(self.F.inv(self.residue(x)))
        two = self.from_int(2)
        prec = 1
        while prec < self.M:
            y = self.mul(y, self.sub(two, self.mul(x, y)))
            prec *= 2
        return y

    def shift_down(self, x, s: int):
        """``x / ϖ^s``; requires ``val(x) >= s``.  The top ``s`` digits of the
        result are unknown at this precision and returned as zero."""
        if s == 0:
            return x
        if self.val(x) < s:
            raise ArithmeticError("not divisible by the requested power of ϖ")
        if self.kind == "equal":
            return tuple(x[s:]) + (0,) * s
        ps = self.p**s
        return tuple(c // ps for c in x)

    def reduce(self, x, n: int):
        """Canonical representative of ``x mod ϖ^n`` (as a full-length element)."""
        if n >= self.M:
            return x
        if n <= 0:
            return self.zero
        if self.kind == "equal":
            return tuple(x[:n]) + (0,) * (self.M - n)
        m = self.p**n
        return tuple(c % m for c in x)

    def truncate_key(self, x, n: int) -> tuple:
        """Short hashable key of ``x mod ϖ^n``."""
        if n <= 0:
            return ()
        if self.kind == "equal":
            return tuple(x[:n])
        m = self.p**n
        return tuple(c % m for c in x)

    def from_key(self, key: tuple):
        if self.kind == "equal":
            return tuple(key) + (0,) * (self.M - len(key))
        if not key:
            return self.zero
        return tuple(key)

    def elements_mod(self, n: int):
        """Canonical representatives of ``𝒪/ϖ^n``; for ``n = 1`` in code order."""
        if n <= 0:
            return [self.zero]
        if self.kind == "equal":
            out = []
            for digs in itertools.product(range(self.q), repeat=n):
                out.append(tuple(reversed(digs)) + (0,) * (self.M - n))
            return out
        m = self.p**n
        return [tuple(reversed(c)) for c in itertools.product(range(m), repeat=self.f)]

    def one_plus_pi_times(self, x):
        return self.add(self.one, self.mul(self.pi, x))

    def key(self, x) -> tuple:
        return tuple(x)

    def random(self, rng, n: int | None = None):
        n = self.M if n is None else n
        if self.kind == "equal":
            digs = [int(d) for d in rng.integers(0, self.q, size=n)]
            return tuple(digs) + (0,) * (self.M - n)
        m = self.p**n
        return tuple(int(c) for c in rng.integers(0, m, size=self.f))

    def to_json(self, x, n: int | None = None) -> list:
        """Equal char: list of digit coefficient vectors; mixed: coordinates."""
        n = self.M if n is None else n
        if self.kind == "equal":
            return [self.F.coeffs(d) for d in x[:n]]
        m = self.p**n
        return [c % m for c in x]

    # -- 2x2 matrices ----------------------------------------------------
    def mat(self, a, b, c, d) -> Mat2:
        return (a, b, c, d)

    def mat_mul(self, g: Mat2, h: Mat2) -> Mat2:
        a, b, c, d = g
        e, f_, x, y = h
        m, s = self.mul, self.add
        return (s(m(a, e), m(b, x)), s(m(a, f_), m(b, y)), s(m(c, e), m(d, x)), s(m(c, f_), m(d, y)))

    def mat_det(self, g: Mat2):
        a, b, c, d = g
        return self.sub(self.mul(a, d), self.mul(b, c))

    def mat_identity(self) -> Mat2:
        return (self.one, self.zero, self.zero, self.one)

    def mat_residue(self, g: Mat2) -> tuple[int, int, int, int]:
        return tuple(self.residue(x) for x in g)

    def mat_from_ints(self, a, b, c, d) -> Mat2:
        return tuple(self.from_int(v) for v in (a, b, c, d))

    def mat_inv_K(self, g: Mat2) -> Mat2:
        """Inverse of an element of GL2(𝒪)."""
        a, b, c, d = g
        di = self.inv(self.mat_det(g))
        return (self.mul(d, di), self.neg(self.mul(b, di)), self.neg(self.mul(c, di)), self.mul(a, di))

    def upper(self, a_pow: int, u, b_pow: int) -> Mat2:
        """``(ϖ^a u; 0 ϖ^b)``."""
        return (self.pi_pow(a_pow), u, self.zero, self.pi_pow(b_pow))

    def g_lambda(self, code: int) -> Mat2:
        """``(ϖ [λ]; 0 1)``."""
        return (self.pi, self.teich(code), self.zero, self.one)

    def Pi(self) -> Mat2:
        return (self.zero, self.one, self.pi, self.zero)

    def w0(self) -> Mat2:
        return (self.zero, self.one, self.one, self.zero)

    def smith_distance(self, g: Mat2) -> int:
        """``v(det) - 2·content``: the tree distance moved by ``g``."""
        t = min(self.val(x) for x in g)
        dv = self.val(self.mat_det(g))
        if dv >= self.M:
            raise PrecisionError("determinant vanishes at working precision")
        return dv - 2 * t


@functools.lru_cache(maxsize=None)
def _ring(kind: str, p: int, f: int, M: int) -> LocalRing:
    return LocalRing(kind, p, f, M)


def local_ring(kind: str, q: int, M: int) -> LocalRing:
    from .field import prime_power

    p, f = prime_power(q)
    return _ring(kind, p, f, M)
