"""Exact arithmetic in finite fields GF(p^n).

Elements are stored as integer *codes*: the coefficient vector
``(c_0, ..., c_{n-1})`` of ``c_0 + c_1 x + ... + c_{n-1} x^{n-1}`` in the
power basis of the field's modulus is packed as ``sum(c_i * p**i)``.  The
JSON encoding of an element is that coefficient vector, little-endian.

All tables (addition, multiplication, discrete log) are precomputed, which is
cheap for the desk-scale fields used here (q <= a few hundred) and makes the
vectorised numpy kernels in :mod:`gl2modp.linalg` simple table lookups.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

# Conway polynomials, coefficients low degree first, monic.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
}


class FieldError(ArithmeticError):
    """Domain error in field arithmetic (inverting zero, bad input)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, f)`` with ``q == p**f``; raise ValueError otherwise."""
    for p in range(2, q + 1):
        if q % p == 0:
            f, r = 0, q
            while r % p == 0:
                r //= p
                f += 1
            if r != 1 or not is_prime(p):
                break
            return p, f
    raise ValueError(f"{q} is not a prime power")


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _polymulmod(a, b, mod, p):
    """Multiply coefficient lists a*b modulo the monic ``mod`` over F_p."""
    n = len(mod) - 1
    prod = [0] * (2 * n - 1) if n > 0 else [0]
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n + 1):
                prod[k - n + j] = (prod[k - n + j] - c * mod[j]) % p
    return prod[:n]


def _x_order_is_full(mod, p) -> bool:
    """True iff the class of x generates the multiplicative group."""
    n = len(mod) - 1
    q = p**n
    if n == 1:
        root = (-mod[0]) % p
        if root == 0:
            return False
        return all(pow(root, (q - 1) // r, p) != 1 for r in _prime_factors(q - 1))

    def xpow(e):
        result = [1] + [0] * (n - 1)
        base = [0, 1] + [0] * (n - 2)
        while e:
            if e & 1:
                result = _polymulmod(result, base, mod, p)
            base = _polymulmod(base, base, mod, p)
            e >>= 1
        return result

    one = [1] + [0] * (n - 1)
    if xpow(q - 1) != one:
        return False
    return all(xpow((q - 1) // r) != one for r in _prime_factors(q - 1))


def is_primitive(mod, p) -> bool:
    """A monic polynomial is primitive iff x has order p^n - 1 modulo it.

    Primitivity implies irreducibility, so this is also the irreducibility
    check used on the modulus table.
    """
    if mod[-1] % p != 1 or mod[0] % p == 0:
        return False
    return _x_order_is_full(tuple(c % p for c in mod), p)


def _first_primitive(p: int, n: int) -> tuple[int, ...]:
    for k in range(p**n):
        low = [(k // p**i) % p for i in range(n)]
        cand = tuple(low) + (1,)
        if is_primitive(cand, p):
            return cand
    raise FieldError(f"no primitive polynomial of degree {n} over F_{p}")


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    if (p, n) in CONWAY:
        return CONWAY[(p, n)]
    return _first_primitive(p, n)


class GF:
    """The finite field F_{p^n} with a fixed primitive modulus.

    Use :func:`gf` to obtain cached instances; field objects are immutable and
    safe to share.
    """

    def __init__(self, p: int, n: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("degree must be positive")
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = tuple(modulus) if modulus is not None else default_modulus(p, n)
        if len(self.modulus) != n + 1 or not is_primitive(self.modulus, p):
            raise ValueError(f"modulus {self.modulus} is not primitive of degree {n}")
        self._build_tables()

    def _build_tables(self) -> None:
        p, n, q = self.p, self.n, self.q
        digits = np.zeros((q, n), dtype=np.int64)
        for i in range(n):
            digits[:, i] = (np.arange(q) // p**i) % p
        self.digits = digits
        self.weights = p ** np.arange(n, dtype=np.int64)
        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ self.weights
        self.neg_table = ((-digits) % p) @ self.weights

        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        if n == 1:
            self.gen = (-self.modulus[0]) % p
            cur = 1
            for i in range(q - 1):
                exp[i] = cur
                cur = cur * self.gen % p
        else:
            self.gen = p  # the class of x
            cur = [1] + [0] * (n - 1)
            xpoly = [0, 1] + [0] * (n - 2)
            for i in range(q - 1):
                exp[i] = sum(c * p**k for k, c in enumerate(cur))
                cur = _polymulmod(cur, xpoly, self.modulus, p)
        log[exp] = np.arange(q - 1)
        self.exp = exp
        self.log = log
        mul = np.zeros((q, q), dtype=np.int64)
        la = log[1:]
        mul[1:, 1:] = exp[(la[:, None] + la[None, :]) % (q - 1)]
        self.mul_table = mul
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-la) % (q - 1)]
        self.inv_table = inv
        # plain-list copies for fast scalar lookups in Python loops
        self.add_l = self.add_table.tolist()
        self.mul_l = mul.tolist()
        self.neg_l = self.neg_table.tolist()
        self.inv_l = inv.tolist()

    # -- scalar arithmetic on codes ------------------------------------
    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("inverse of zero")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise FieldError("negative power of zero")
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    def dlog(self, a: int) -> int:
        """Discrete log to the base :attr:`gen` (brute-force table)."""
        if a == 0:
            raise FieldError("log of zero")
        return int(self.log[a])

    def gen_pow(self, e: int) -> int:
        return int(self.exp[e % (self.q - 1)])

    def from_int(self, k: int) -> int:
        return k % self.p

    def coeffs(self, a: int) -> list[int]:
        return [int(c) for c in self.digits[a]]

    def from_coeffs(self, cs) -> int:
        cs = list(cs)
        if len(cs) > self.n:
            if any(c % self.p for c in cs[self.n:]):
                raise FieldError(f"coefficient vector {cs} longer than degree {self.n}")
            cs = cs[: self.n]
        return sum((c % self.p) * self.p**i for i, c in enumerate(cs))

    def frobenius(self, a: int, i: int = 1) -> int:
        """Return ``a ** (p ** i)``; ``i`` is taken modulo the degree."""
        return self.pow(a, pow(self.p, i % self.n))

    def char_eval(self, e: int, x: int) -> int:
        """Evaluate the tame character ``x -> x**e`` (exponent mod q-1)."""
        if x == 0:
            raise FieldError("characters are only defined on nonzero elements")
        return self.pow(x, e % (self.q - 1))

    def power_basis(self) -> list[int]:
        """Codes of 1, x, ..., x^{n-1} (an F_p-basis)."""
        return [self.p**i for i in range(self.n)]

    def nonzero(self) -> range:
        return range(1, self.q)

    def elements(self) -> range:
        return range(self.q)

    # -- vectorised arithmetic on numpy code arrays --------------------
    def vadd(self, a, b):
        if self.n == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self.add_table[a, b]

    def vneg(self, a):
        if self.n == 1:
            return (-np.asarray(a)) % self.p
        return self.neg_table[a]

    def vsub(self, a, b):
        if self.n == 1:
            return (np.asarray(a) - np.asarray(b)) % self.p
        return self.add_table[a, self.neg_table[b]]

    def vmul(self, a, b):
        if self.n == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        return self.mul_table[a, b]

    def vinv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise FieldError("inverse of zero")
        return self.inv_table[a]

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element of a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_coeffs(value))
        return FieldElement(self, self.from_int(int(value)))

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for GF({self.q})")
        return FieldElement(self, int(code))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})"


@functools.lru_cache(maxsize=None)
def gf(p: int, n: int = 1) -> GF:
    """Cached field constructor with the default modulus."""
    return GF(p, n)


@functools.lru_cache(maxsize=None)
def embedding(small: GF, big: GF) -> tuple[int, ...]:
    """Table of codes: image of each element of ``small`` inside ``big``.

    The generator of ``small`` goes to ``big.gen ** ((Q-1)/(q-1))`` when that
    is a root of the small modulus (true for Conway tables); otherwise the
    smallest root in log order is used.  The map is checked to be a ring
    homomorphism.
    """
    if small.p != big.p or big.n % small.n:
        raise FieldError(f"{small} does not embed in {big}")
    ratio = (big.q - 1) // (small.q - 1)

    def is_root(z):
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, z), big.from_int(c))
        return acc == 0

    candidates = [big.gen_pow(ratio * k) for k in range(small.q - 1)]
    root = next((z for z in candidates if is_root(z)), None)
    if root is None:
        raise FieldError("no root of the small modulus found")
    if small.n == 1:
        table = [big.from_int(c) for c in range(small.q)]
    else:
        table = [0] * small.q
        for a in range(small.q):
            acc = 0
            for c in reversed(small.coeffs(a)):
                acc = big.add(big.mul(acc, root), big.from_int(c))
            table[a] = acc
    return tuple(table)


@dataclass(frozen=True)
class FieldElement:
    """A value-type wrapper around a field code with operator overloading."""

    field: GF
    code: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("mixed fields")
            return other.code
        return self.field.from_int(int(other))

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.code, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def frobenius(self, i: int = 1):
        return FieldElement(self.field, self.field.frobenius(self.code, i))

    def is_zero(self) -> bool:
        return self.code == 0

    def to_json(self) -> list[int]:
        return self.field.coeffs(self.code)

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        return f"{self.field!r}({self.to_json()})"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch one of ``add``, ``mul``, ``inv``, ``neg``.

    ``inv`` and ``neg`` act on ``b`` when given (``a`` is ignored), matching
    the binary signature; pass ``b=None`` to act on ``a``.
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    target = a if b is None else b
    if op == "inv":
        return target.inverse()
    if op == "neg":
        return -target
    raise ValueError(f"unknown field operation {op!r}")
