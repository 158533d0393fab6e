"""Generators of compact open subgroups of GL2(𝒪), modulo a congruence level.

``depth`` is the level ``N`` past which the subgroup acts trivially on the
model at hand: the lists below generate the image of the subgroup in
``GL2(𝒪/ϖ^N)``.  Digits run over Teichmüller lifts of the power basis of
``F_q``, which generate every graded piece ``𝔭^k/𝔭^{k+1}`` additively.
"""

from __future__ import annotations

from .local import LocalRing


def _digits(R: LocalRing, k: int):
    return [R.mul(R.teich(e), R.pi_pow(k)) for e in R.F.power_basis()]


def upper_unipotents(R: LocalRing, kmin: int, depth: int) -> list:
    """``(1 x; 0 1)`` with ``x`` running over ``ϖ^k [e]``, ``kmin <= k < depth``."""
    one, zero = R.one, R.zero
    return [(one, x, zero, one) for k in range(kmin, depth) for x in _digits(R, k)]


def lower_unipotents(R: LocalRing, kmin: int, depth: int) -> list:
    one, zero = R.one, R.zero
    return [(one, zero, x, one) for k in range(kmin, depth) for x in _digits(R, k)]


def torus_one_units(R: LocalRing, depth: int) -> list:
    """Generators of ``T_1 = diag(1+𝔭, 1+𝔭)`` modulo level ``depth``."""
    one, zero = R.one, R.zero
    out = []
    for k in range(1, depth):
        for x in _digits(R, k):
            u = R.add(one, x)
            out.append((u, zero, zero, one))
            out.append((one, zero, zero, u))
    return out


def n0_generators(R: LocalRing, depth: int) -> list:
    return upper_unipotents(R, 0, depth)


def congruence_generators(R: LocalRing, n: int, depth: int) -> list:
    """``(1+𝔭  𝒪; 𝔭^n  1+𝔭)`` via its Iwahori factorisation (n >= 1)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return lower_unipotents(R, n, depth) + torus_one_units(R, depth) + upper_unipotents(R, 0, depth)


def iwahori_one_generators(R: LocalRing, depth: int) -> list:
    return congruence_generators(R, 1, depth)


def k1_generators(R: LocalRing, depth: int) -> list:
    """``1 + ϖ^k [e] E_ij`` for ``1 <= k < depth``."""
    return (
        lower_unipotents(R, 1, depth)
        + torus_one_units(R, depth)
        + upper_unipotents(R, 1, depth)
    )


def teich_torus(R: LocalRing, a: int, d: int):
    """``diag([a], [d])``, an element of the finite torus 𝓗."""
    return (R.teich(a), R.zero, R.zero, R.teich(d))
