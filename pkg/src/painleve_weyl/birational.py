"""Birational maps on the dependent variables together with affine parameter actions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from .algebra import (
    DivByZero,
    MultiPoly,
    PolyRing,
    RationalFunc,
    jacobian_det,
    rf_equal,
    subs_many,
    to_rational,
)

__all__ = [
    "BirationalMap",
    "ChartMap",
    "Indeterminate",
    "ParamAction",
    "PoissonSeriesResult",
    "PoissonStructure",
    "SampledWord",
    "apply_map",
    "compose",
    "compose_word",
    "invert_shear",
    "poisson_bracket",
    "poisson_series",
    "poisson_series_transform",
    "pullback_field",
    "transformed_field",
    "volume_check",
]

MAX_SYMBOLIC_WORD = 4


class Indeterminate(ArithmeticError):
    """A map's denominator vanishes at the requested state."""


@dataclass(frozen=True)
class ParamAction:
    """Affine action p -> M p + offset on an ordered parameter vector."""

    names: Tuple[str, ...]
    matrix: Tuple[Tuple[mpq, ...], ...]
    offset: Tuple[mpq, ...]

    @classmethod
    def identity(cls, names: Sequence[str]) -> "ParamAction":
        n = len(names)
        return cls(
            tuple(names),
            tuple(tuple(mpq(int(i == j)) for j in range(n)) for i in range(n)),
            tuple(mpq(0) for _ in range(n)),
        )

    @classmethod
    def from_images(cls, names: Sequence[str], images: Mapping[str, MultiPoly]) -> "ParamAction":
        """Build from affine polynomial images; parameters not listed are fixed."""
        names = tuple(names)
        rows, offs = [], []
        for p in names:
            img = images.get(p)
            if img is None:
                rows.append(tuple(mpq(int(p == q)) for q in names))
                offs.append(mpq(0))
                continue
            if img.total_degree() > 1:
                raise ValueError(f"parameter image of {p} is not affine")
            extra = set(img.symbols()) - set(names)
            if extra:
                raise ValueError(f"parameter image of {p} involves {sorted(extra)}")
            rows.append(tuple(img.diff(q).constant_value() if q in img.ring else mpq(0) for q in names))
            offs.append(img.subs({q: 0 for q in names if q in img.ring}).constant_value())
        return cls(names, tuple(rows), tuple(offs))

    def apply(self, values: Mapping[str, object]) -> Dict[str, mpq]:
        """Exact action on a numeric assignment; other entries pass through."""
        vec = [to_rational(values[p]) for p in self.names]
        out = {k: v for k, v in values.items()}
        for i, p in enumerate(self.names):
            out[p] = sum((a * v for a, v in zip(self.matrix[i], vec)), self.offset[i])
        return out

    def symbolic(self, ring: PolyRing) -> Dict[str, MultiPoly]:
        gens = [ring.gen(p) for p in self.names]
        out = {}
        for i, p in enumerate(self.names):
            acc = ring.const(self.offset[i])
            for a, g in zip(self.matrix[i], gens):
                if a:
                    acc = acc + g.scale(a)
            out[p] = acc
        return out

    def then(self, other: "ParamAction") -> "ParamAction":
        """Apply self first, then other."""
        if self.names != other.names:
            raise ValueError("parameter vectors differ")
        n = len(self.names)
        m = tuple(
            tuple(sum((other.matrix[i][k] * self.matrix[k][j] for k in range(n)), mpq(0)) for j in range(n))
            for i in range(n)
        )
        o = tuple(
            sum((other.matrix[i][k] * self.offset[k] for k in range(n)), mpq(0)) + other.offset[i]
            for i in range(n)
        )
        return ParamAction(self.names, m, o)

    def is_identity(self) -> bool:
        return self == ParamAction.identity(self.names)


@dataclass(frozen=True)
class BirationalMap:
    name: str
    weyl_type: str
    variables: Tuple[str, ...]
    images: Tuple[RationalFunc, ...]
    params: ParamAction

    @property
    def ring(self) -> PolyRing:
        return self.images[0].ring

    def with_params(self, params: ParamAction) -> "BirationalMap":
        return BirationalMap(self.name, self.weyl_type, self.variables, self.images, params)

    def denominators(self) -> Tuple[MultiPoly, ...]:
        return tuple(im.den for im in self.images)


@dataclass(frozen=True)
class ChartMap(BirationalMap):
    """A chart: images are the chart coordinates, ``inverse`` expresses the
    original variables through the chart coordinates (same symbol names)."""

    inverse: Tuple[RationalFunc, ...] = ()


def invert_shear(variables: Sequence[str], images: Sequence[RationalFunc]) -> Tuple[RationalFunc, ...]:
    """Invert a triangular shear u_k = v_k + g_k(already inverted variables)."""
    variables = tuple(variables)
    n = len(variables)
    inv: List[Optional[RationalFunc]] = [None] * n
    pending = set(range(n))
    while pending:
        progressed = False
        for k in sorted(pending):
            g = RationalFunc(images[k]) - RationalFunc(images[k].ring.gen(variables[k]))
            deps = set(g.symbols()) & set(variables)
            if variables[k] in deps:
                continue
            if any(inv[variables.index(v)] is None for v in deps):
                continue
            back = {v: inv[variables.index(v)] for v in deps}
            gk = g.subs(back) if back else g
            inv[k] = RationalFunc(images[k].ring.gen(variables[k])) - gk
            pending.discard(k)
            progressed = True
        if not progressed:
            raise ValueError("map is not a triangular shear")
    return tuple(inv)


# -- pointwise --------------------------------------------------------------

State = Tuple[mpq, ...]


def apply_map(m: BirationalMap, state: Sequence, params: Mapping[str, object]) -> Tuple[State, Dict[str, mpq]]:
    """Image of (state, params) under m; raises Indeterminate on a pole."""
    assign = {k: to_rational(v) for k, v in params.items()}
    for v, val in zip(m.variables, state):
        assign[v] = to_rational(val)
    try:
        new_state = tuple(im.evaluate(assign) for im in m.images)
    except DivByZero as exc:
        raise Indeterminate(f"{m.name} is indeterminate at ({', '.join(str(v) for v in state)})") from exc
    new_params = m.params.apply({k: v for k, v in assign.items() if k not in m.variables})
    return new_state, new_params


@dataclass(frozen=True)
class SampledWord:
    """A word of maps evaluated pointwise, applied left to right."""

    maps: Tuple[BirationalMap, ...]

    def __call__(self, state: Sequence, params: Mapping[str, object]) -> Tuple[State, Dict[str, mpq]]:
        s, p = tuple(to_rational(v) for v in state), dict(params)
        for m in self.maps:
            s, p = apply_map(m, s, p)
        return s, p

    @property
    def params(self) -> ParamAction:
        act = self.maps[0].params
        for m in self.maps[1:]:
            act = act.then(m.params)
        return act

    @property
    def name(self) -> str:
        return " ".join(m.name for m in self.maps)


# -- symbolic ---------------------------------------------------------------


def compose(m1: BirationalMap, m2: BirationalMap, mode: str = "symbolic") -> Union[BirationalMap, SampledWord]:
    """The map "first m1, then m2"."""
    if m1.variables != m2.variables or m1.params.names != m2.params.names:
        raise ValueError("incompatible maps")
    if mode == "sampled":
        return SampledWord((m1, m2))
    if mode != "symbolic":
        raise ValueError(f"unknown mode {mode!r}")
    ring = m1.ring
    mapping: Dict[str, object] = dict(zip(m1.variables, m1.images))
    mapping.update(m1.params.symbolic(ring))
    images = tuple(im.subs(mapping) for im in m2.images)
    return BirationalMap(f"{m1.name} {m2.name}", m1.weyl_type, m1.variables, images, m1.params.then(m2.params))


def compose_word(maps: Sequence[BirationalMap], mode: str = "sampled") -> Union[BirationalMap, SampledWord]:
    maps = tuple(maps)
    if mode == "symbolic" and len(maps) <= MAX_SYMBOLIC_WORD:
        out = maps[0]
        for m in maps[1:]:
            out = compose(out, m, "symbolic")
        return out
    return SampledWord(maps)


def pullback_field(
    m: BirationalMap,
    field: Sequence[Union[MultiPoly, RationalFunc]],
    *,
    chart_coordinates: bool = True,
) -> Tuple[RationalFunc, ...]:
    """Time derivative of each image component along ``field``.

    ``field`` lists dv/dt for each of ``m.variables``.  For a ChartMap the
    result is re-expressed in the chart coordinates via its inverse (unless
    ``chart_coordinates`` is false).
    """
    ring = m.ring
    field = [RationalFunc(f) for f in field]
    out = []
    for im in m.images:
        acc = None
        for v, f in zip(m.variables, field):
            d = im.diff(v)
            if d.num.is_zero():
                continue
            term = d * f
            acc = term if acc is None else acc + term
        out.append(acc if acc is not None else RationalFunc(ring.zero))
    if isinstance(m, ChartMap) and chart_coordinates:
        back = dict(zip(m.variables, m.inverse))
        nums, den = _subs_rational_list(out, back)
        out = [RationalFunc(n, d) for n, d in zip(nums, den)]
    return tuple(out)


def _subs_rational_list(exprs: Sequence[RationalFunc], mapping) -> Tuple[List[MultiPoly], List[MultiPoly]]:
    nums, dens = [], []
    for e in exprs:
        (n, d), _ = subs_many([e.num, e.den], mapping)
        nums.append(n)
        dens.append(d)
    return nums, dens


def transformed_field(
    m: BirationalMap, field: Sequence[Union[MultiPoly, RationalFunc]]
) -> Tuple[RationalFunc, ...]:
    """The field with parameters moved by m's action, composed with m's images."""
    ring = m.ring
    mapping: Dict[str, object] = m.params.symbolic(ring)
    mapping.update(zip(m.variables, m.images))
    return tuple(RationalFunc(f).subs(mapping) for f in field)


def volume_check(m: BirationalMap) -> bool:
    """True iff the Jacobian determinant of the images is identically 1."""
    return rf_equal(jacobian_det(m.images, m.variables), RationalFunc(m.ring.one))


# -- Poisson calculus -------------------------------------------------------


@dataclass(frozen=True)
class PoissonStructure:
    """Constant brackets between dependent variables, {u, v} = table[(u, v)]."""

    variables: Tuple[str, ...]
    table: Mapping[Tuple[str, str], int]

    def bracket(self, u: str, v: str) -> int:
        if u == v:
            return 0
        if (u, v) in self.table:
            return self.table[(u, v)]
        if (v, u) in self.table:
            return -self.table[(v, u)]
        return 0


def poisson_bracket(f: MultiPoly, g: MultiPoly, ps: PoissonStructure) -> MultiPoly:
    """{f, g} = sum_{u,v} df/du dg/dv {u, v}."""
    acc = f.ring.zero
    for u in ps.variables:
        fu = f.diff(u)
        if fu.is_zero():
            continue
        for v in ps.variables:
            c = ps.bracket(u, v)
            if c:
                gv = g.diff(v)
                if not gv.is_zero():
                    acc = acc + (fu * gv).scale(c)
    return acc


@dataclass
class PoissonSeriesResult:
    terms: List[RationalFunc]
    truncated_at: int
    total: RationalFunc
    terminated: bool
    matches_closed_form: Optional[bool] = None
    notes: List[str] = field(default_factory=list)


def poisson_series(
    f: MultiPoly, coefficient: MultiPoly, g: MultiPoly, ps: PoissonStructure, bound: int = 12
) -> PoissonSeriesResult:
    """Sum g + (c/f){f,g} + (c/f)^2/2! {f,{f,g}} + ... until a bracket vanishes.

    ``c/f`` is held constant under the bracket.
    """
    ring = f.ring
    terms = [RationalFunc(g)]
    total = RationalFunc(g)
    nested = g
    ratio = RationalFunc(coefficient, f)
    factor = RationalFunc(ring.one)
    for k in range(1, bound + 1):
        nested = poisson_bracket(f, nested, ps)
        if nested.is_zero():
            return PoissonSeriesResult(terms, k, total, True)
        factor = factor * ratio * RationalFunc(ring.const(mpq(1, k)))
        term = factor * nested
        terms.append(term)
        total = total + term
    return PoissonSeriesResult(terms, bound, total, False, notes=[f"no zero bracket within {bound} terms"])


def poisson_series_transform(i: Union[int, str], g: MultiPoly, weyl_type, bound: int = 12) -> PoissonSeriesResult:
    """Apply the series form of generator s_i to g and compare with its closed form."""
    from . import systems

    wt = systems.get_type(weyl_type)
    name = i if isinstance(i, str) else f"s{i}"
    row = systems.divisor_for(wt, name)
    gen = systems.generator(wt, name)
    ps = systems.poisson_structure(wt)
    ring = gen.ring
    g = g.embed(ring) if g.ring != ring else g
    res = poisson_series(row.poly, ring.gen(row.param), g, ps, bound)
    closed = RationalFunc(g).subs(dict(zip(gen.variables, gen.images)))
    if res.terminated:
        res.matches_closed_form = rf_equal(res.total, closed)
    else:
        res.matches_closed_form = None
        res.notes.append("fell back to the closed form")
    if row.extra_zero:
        res.notes.append(f"divisor row also requires {', '.join(row.extra_zero)} = 0")
    return res
