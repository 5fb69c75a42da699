"""Static description of the affine Weyl types handled by the package."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from ..algebra import MultiPoly, PolyRing, to_rational

INF = math.inf

_ALPHA = tuple(f"alpha{i}" for i in range(5))
_BETA = tuple(f"beta{i}" for i in range(4))


class UnknownWeylType(KeyError):
    pass


@dataclass(frozen=True)
class WeylType:
    """One affine Weyl type with its parameter normalization and Coxeter data.

    ``params`` are the parameters moved by the generators, ``norm`` their
    coefficients in the normalization ``sum norm_i * p_i = norm_rhs``.
    ``ring_names`` lists every symbol the system's field may contain.
    """

    tag: str
    key: str
    aliases: Tuple[str, ...]
    variables: Tuple[str, ...]
    params: Tuple[str, ...]
    norm: Tuple[int, ...]
    norm_rhs: Fraction
    ring_names: Tuple[str, ...]
    coxeter: Tuple[Tuple[float, ...], ...]
    pi: Optional[Mapping[str, str]] = None
    time: Optional[str] = "t"
    has_atlas: bool = True
    uses_b: bool = True
    family: str = "d4"

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.ring_names)

    @property
    def reflections(self) -> Tuple[str, ...]:
        return tuple(f"s{i}" for i in range(len(self.coxeter)))

    @property
    def generator_names(self) -> Tuple[str, ...]:
        return self.reflections + (("pi",) if self.pi else ())

    def coxeter_order(self, i: int, j: int) -> float:
        return self.coxeter[i][j]

    def eliminated(self, zeroed: Sequence[str] = ()) -> str:
        """The parameter solved for when imposing the normalization."""
        for p, c in zip(self.params, self.norm):
            if c and p not in zeroed:
                return p
        raise ValueError("every normalized parameter is pinned")

    def elimination(self, ring: Optional[PolyRing] = None, zeroed: Sequence[str] = ()) -> Tuple[str, MultiPoly]:
        """(name, expression) solving the normalization for one parameter."""
        ring = ring or self.ring
        target = self.eliminated(zeroed)
        c0 = self.norm[self.params.index(target)]
        expr = ring.const(mpq(self.norm_rhs.numerator, self.norm_rhs.denominator))
        for p, c in zip(self.params, self.norm):
            if p != target and c and p not in zeroed:
                expr = expr - ring.gen(p).scale(c)
        return target, expr.scale(mpq(1, c0))

    def residual(self, values: Mapping[str, object]) -> mpq:
        """sum norm_i * p_i - norm_rhs, exactly."""
        total = -mpq(self.norm_rhs.numerator, self.norm_rhs.denominator)
        for p, c in zip(self.params, self.norm):
            if c:
                total += c * to_rational(values[p])
        return total


def _cox(n: int, edges: Mapping[Tuple[int, int], float]) -> Tuple[Tuple[float, ...], ...]:
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for (i, j), v in edges.items():
        m[i][j] = m[j][i] = v
    return tuple(tuple(r) for r in m)


_D4_RING = ("x", "y", "z", "t", "eta", "b") + _ALPHA

TYPES: Dict[str, WeylType] = {}


def _register(wt: WeylType) -> None:
    TYPES[wt.key] = wt


_register(WeylType(
    tag="D4(1)", key="d4", aliases=("d4(1)",),
    variables=("x", "y", "z"), params=_ALPHA, norm=(1, 1, 2, 1, 1), norm_rhs=Fraction(1),
    ring_names=_D4_RING,
    coxeter=_cox(5, {(0, 2): 3, (1, 2): 3, (3, 2): 3, (4, 2): 3}),
))
_register(WeylType(
    tag="B3(1)", key="b3", aliases=("b3(1)",),
    variables=("x", "y", "z"), params=_BETA, norm=(1, 1, 2, 2), norm_rhs=Fraction(1),
    ring_names=("x", "y", "z", "t", "eta", "b") + _BETA,
    coxeter=_cox(4, {(0, 2): 3, (1, 2): 3, (2, 3): 4}),
    family="degenerate",
))
_register(WeylType(
    tag="D3(2)", key="d3", aliases=("d3(2)",),
    variables=("x", "y", "z"), params=_BETA[:3], norm=(1, 1, 1), norm_rhs=Fraction(1, 2),
    ring_names=("x", "y", "z", "t", "eta", "b") + _BETA[:3],
    coxeter=_cox(3, {(0, 1): 4, (1, 2): 4}),
    family="degenerate",
))
_register(WeylType(
    tag="G2(1)", key="g2", aliases=("g2(1)",),
    variables=("x", "y", "z"), params=_BETA[:3], norm=(1, 2, 3), norm_rhs=Fraction(1),
    ring_names=("x", "y", "z", "t", "eta", "b") + _BETA[:3],
    coxeter=_cox(3, {(0, 1): 3, (1, 2): 6}),
    has_atlas=False, family="degenerate",
))
_register(WeylType(
    tag="A2(2)", key="a2", aliases=("a2(2)",),
    variables=("x", "y", "z"), params=_BETA[:2], norm=(1, 2), norm_rhs=Fraction(1, 2),
    ring_names=("x", "y", "z", "t", "eta", "b") + _BETA[:2],
    coxeter=_cox(2, {(0, 1): INF}),
    has_atlas=False, family="degenerate",
))
_register(WeylType(
    tag="A3-PV", key="a3-pv", aliases=("pv", "a3"),
    variables=("f0", "f1", "f2"), params=_ALPHA[:4], norm=(1, 1, 1, 1), norm_rhs=Fraction(1),
    ring_names=("f0", "f1", "f2", "a", "phi") + _ALPHA[:4],
    coxeter=_cox(4, {(0, 1): 3, (1, 2): 3, (2, 3): 3, (3, 0): 3}),
    pi={"s0": "s2", "s1": "s1", "s2": "s0", "s3": "s3"},
    time=None, has_atlas=False, uses_b=False, family="appendix",
))
_register(WeylType(
    tag="C2-PIII", key="c2-piii", aliases=("piii", "c2"),
    variables=("f0", "f1", "f2"), params=("eta",) + _ALPHA[:3], norm=(0, 1, 2, 1), norm_rhs=Fraction(1),
    ring_names=("f0", "f1", "f2", "eta") + _ALPHA[:3],
    coxeter=_cox(3, {(0, 1): 4, (1, 2): 4}),
    pi={"s0": "s2", "s1": "s1", "s2": "s0"},
    time=None, has_atlas=False, uses_b=False, family="appendix",
))
_register(WeylType(
    tag="D4-2D", key="d4-2d", aliases=("d4-x-eq-y",),
    variables=("X", "Y"), params=_ALPHA, norm=(1, 1, 2, 1, 1), norm_rhs=Fraction(1),
    ring_names=("X", "Y", "t", "eta", "b") + _ALPHA,
    coxeter=_cox(5, {(0, 2): 3, (1, 2): 3, (3, 2): 3, (4, 2): 3}),
    has_atlas=False, family="reduced",
))


def get_type(name) -> WeylType:
    """Look up a type by key, tag or alias (case-insensitive)."""
    if isinstance(name, WeylType):
        return name
    k = str(name).strip().lower()
    for wt in TYPES.values():
        if k in (wt.key, wt.tag.lower()) or k in wt.aliases:
            return wt
    raise UnknownWeylType(f"unknown Weyl type {name!r}; choose from {', '.join(TYPES)}")


# How the degenerate types sit inside D4(1): each alpha as a beta expression.
DEGENERATE_ALPHAS: Dict[str, Dict[str, str]] = {
    "b3": {"alpha0": "beta0", "alpha1": "beta3", "alpha2": "beta2", "alpha3": "beta1", "alpha4": "beta3"},
    "d3": {"alpha0": "beta0", "alpha1": "beta2", "alpha2": "beta1", "alpha3": "beta0", "alpha4": "beta2"},
    "g2": {"alpha0": "beta0", "alpha1": "beta2", "alpha2": "beta1", "alpha3": "beta2", "alpha4": "beta2"},
    "a2": {"alpha0": "beta1", "alpha1": "beta1", "alpha2": "beta0", "alpha3": "beta1", "alpha4": "beta1"},
}

# The D3(2) identification as printed (beta0 = alpha1 = alpha4, beta2 = alpha0 = alpha3);
# kept so the discrepancy stays reproducible.
D3_PRINTED_ALPHAS: Dict[str, str] = {
    "alpha0": "beta2", "alpha1": "beta0", "alpha2": "beta1", "alpha3": "beta2", "alpha4": "beta0",
}
