"""Vector fields, generators, charts, divisors and Hamiltonians per Weyl type."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from ..algebra import MultiPoly, PolyRing, RationalFunc, to_rational
from ..birational import BirationalMap, ChartMap, ParamAction, PoissonStructure, invert_shear
from . import transcriptions as tr
from .types import DEGENERATE_ALPHAS, WeylType, get_type


class Unavailable(LookupError):
    """The requested structure is not stated for this type."""


class NormalizationError(ValueError):
    pass


# -- generators -------------------------------------------------------------

# name -> (variable images, parameter images); unlisted parameters are fixed.
_GENERATORS: Dict[str, Dict[str, Tuple[Tuple[str, ...], Dict[str, str]]]] = {
    "d4": {
        "s0": (("x", "y", "z - alpha0/(x-eta)"), {"alpha0": "-alpha0", "alpha2": "alpha2+alpha0"}),
        "s1": (("x", "y", "z - alpha1/x"), {"alpha1": "-alpha1", "alpha2": "alpha2+alpha1"}),
        "s2": (("x + alpha2/z", "y + alpha2/z", "z"), {
            "alpha0": "alpha0+alpha2", "alpha1": "alpha1+alpha2", "alpha2": "-alpha2",
            "alpha3": "alpha3+alpha2", "alpha4": "alpha4+alpha2"}),
        "s3": (("x", "y", "z - alpha3/(y-1)"), {"alpha2": "alpha2+alpha3", "alpha3": "-alpha3"}),
        "s4": (("x", "y", "z - alpha4/y"), {"alpha2": "alpha2+alpha4", "alpha4": "-alpha4"}),
    },
    "b3": {
        "s0": (("x", "y", "z - beta0/(x-eta)"), {"beta0": "-beta0", "beta2": "beta2+beta0"}),
        "s1": (("x", "y", "z - beta1/(y-1)"), {"beta1": "-beta1", "beta2": "beta2+beta1"}),
        "s2": (("x + beta2/z", "y + beta2/z", "z"), {
            "beta0": "beta0+beta2", "beta1": "beta1+beta2", "beta2": "-beta2", "beta3": "beta3+beta2"}),
        "s3": (("x", "y", "z - beta3*(x+y)/(x*y)"), {"beta2": "beta2+2*beta3", "beta3": "-beta3"}),
    },
    "d3": {
        "s0": (("x", "y", "z - beta0*(x+y-eta-1)/((x-eta)*(y-1))"), {"beta0": "-beta0", "beta1": "beta1+2*beta0"}),
        "s1": (("x + beta1/z", "y + beta1/z", "z"), {
            "beta0": "beta0+beta1", "beta1": "-beta1", "beta2": "beta2+beta1"}),
        "s2": (("x", "y", "z - beta2*(x+y)/(x*y)"), {"beta1": "beta1+2*beta2", "beta2": "-beta2"}),
    },
    "g2": {
        "s0": (("x", "y", "z - beta0/(x-eta)"), {"beta0": "-beta0", "beta1": "beta1+beta0"}),
        "s1": (("x + beta1/z", "y + beta1/z", "z"), {
            "beta0": "beta0+beta1", "beta1": "-beta1", "beta2": "beta2+beta1"}),
        "s2": (("x", "y", "z - beta2*(y*(y-1)+x*(y-1)+x*y)/(x*y*(y-1))"), {
            "beta1": "beta1+3*beta2", "beta2": "-beta2"}),
    },
    "a2": {
        "s0": (("x + beta0/z", "y + beta0/z", "z"), {"beta0": "-beta0", "beta1": "beta1+beta0"}),
        "s1": (("x", "y", "z - beta1*(y*(x-eta)*(y-1)+x*(x-eta)*(y-1)+x*y*(y-1)+x*y*(x-eta))"
                "/(x*y*(x-eta)*(y-1))"), {"beta0": "beta0+4*beta1", "beta1": "-beta1"}),
    },
    "a3-pv": {
        "s0": (("f0", "f1 + alpha0/f0", "f2"), {
            "alpha0": "-alpha0", "alpha1": "alpha1+alpha0", "alpha3": "alpha3+alpha0"}),
        "s1": (("f0 - alpha1/f1", "f1", "f2 - alpha1/f1"), {
            "alpha0": "alpha0+alpha1", "alpha1": "-alpha1", "alpha2": "alpha2+alpha1"}),
        "s2": (("f0", "f1 + alpha2/f2", "f2"), {
            "alpha1": "alpha1+alpha2", "alpha2": "-alpha2", "alpha3": "alpha3+alpha2"}),
        "s3": (("f0 - alpha3/(f1-a)", "f1", "f2 - alpha3/(f1-a)"), {
            "alpha0": "alpha0+alpha3", "alpha2": "alpha2+alpha3", "alpha3": "-alpha3"}),
        "pi": (("f2", "f1", "f0"), {"alpha0": "alpha2", "alpha2": "alpha0"}),
    },
    "c2-piii": {
        "s0": (("f0", "f1 + alpha0/f0", "f2"), {"alpha0": "-alpha0", "alpha1": "alpha1+alpha0"}),
        "s1": (("f0 - 2*alpha1/f1 + eta/f1^2", "f1", "f2 - 2*alpha1/f1 + eta/f1^2"), {
            "eta": "-eta", "alpha0": "alpha0+2*alpha1", "alpha1": "-alpha1", "alpha2": "alpha2+2*alpha1"}),
        "s2": (("f0", "f1 + alpha2/f2", "f2"), {"alpha1": "alpha1+alpha2", "alpha2": "-alpha2"}),
        "pi": (("f2", "f1", "f0"), {"alpha0": "alpha2", "alpha2": "alpha0"}),
    },
    "d4-2d": {
        "s0": (("X", "Y - alpha0/(X-eta)"), {"alpha0": "-alpha0", "alpha2": "alpha2+alpha0"}),
        "s1": (("X", "Y - alpha1/X"), {"alpha1": "-alpha1", "alpha2": "alpha2+alpha1"}),
        "s2": (("X + alpha2/Y", "Y"), {
            "alpha0": "alpha0+alpha2", "alpha1": "alpha1+alpha2", "alpha2": "-alpha2",
            "alpha3": "alpha3+alpha2", "alpha4": "alpha4+alpha2"}),
        "s3": (("X", "Y - alpha3/(X-1)"), {"alpha2": "alpha2+alpha3", "alpha3": "-alpha3"}),
        "s4": (("X", "Y - alpha4/X"), {"alpha2": "alpha2+alpha4", "alpha4": "-alpha4"}),
    },
}

# The printed appendix-A pi carries an extra leading eta in its parameter tuple.
PV_PI_PRINTED = "(f2,f1,f0;eta,alpha2,alpha1,alpha0,alpha3)"

_CHARTS: Dict[str, List[Tuple[str, ...]]] = {
    "d4": [
        ("x - eta", "y", "z - alpha0/(x-eta)"),
        ("x", "y", "z - alpha1/x"),
        ("x + alpha2/z", "y + alpha2/z", "z"),
        ("x", "y - 1", "z - alpha3/(y-1)"),
        ("x", "y", "z - alpha4/y"),
    ],
    "b3": [
        ("x - eta", "y", "z - beta0/(x-eta)"),
        ("x", "y - 1", "z - beta1/(y-1)"),
        ("x + beta2/z", "y + beta2/z", "z"),
        ("x", "y", "z - beta3*(x+y)/(x*y)"),
    ],
    "d3": [
        ("x - eta", "y - 1", "z - beta0*(x+y-eta-1)/((x-eta)*(y-1))"),
        ("x + beta1/z", "y + beta1/z", "z"),
        ("x", "y", "z - beta2*(x+y)/(x*y)"),
    ],
}
_CHART_BASE = {"d4": 0, "b3": 0, "d3": 1}


@dataclass(frozen=True)
class DivisorRow:
    param: str
    poly: MultiPoly
    extra_zero: Tuple[str, ...] = ()
    source: str = "table"
    factors: Tuple[MultiPoly, ...] = ()


def _split_product(text: str) -> List[str]:
    """Top-level factors of a product written with ``*``."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


_DIVISORS: Dict[str, List[Tuple[str, str, Tuple[str, ...], str]]] = {
    "d4": [("alpha0", "x - eta", (), "table"), ("alpha1", "x", (), "table"), ("alpha2", "z", (), "table"),
           ("alpha3", "y - 1", (), "table"), ("alpha4", "y", (), "table")],
    "b3": [("beta0", "x - eta", (), "table"), ("beta1", "y - 1", (), "table"), ("beta2", "z", (), "table"),
           ("beta3", "x*y", (), "table")],
    "d3": [("beta0", "(x-eta)*(y-1)", (), "table"), ("beta1", "z", (), "table"), ("beta2", "x*y", (), "table")],
    "g2": [("beta0", "x - eta", (), "table"), ("beta1", "z", (), "table"), ("beta2", "x*y*(y-1)", (), "table")],
    "a2": [("beta0", "z", (), "table"), ("beta1", "x*y*(x-eta)*(y-1)", (), "table")],
    "a3-pv": [("alpha0", "f0", (), "derived"), ("alpha1", "f1", (), "derived"), ("alpha2", "f2", (), "derived"),
              ("alpha3", "f1 - a", (), "derived")],
    "c2-piii": [("alpha0", "f0", (), "derived"), ("alpha1", "f1", ("eta",), "derived"),
                ("alpha2", "f2", (), "derived")],
    "d4-2d": [("alpha0", "X - eta", (), "derived"), ("alpha1", "X", (), "derived"), ("alpha2", "Y", (), "derived"),
              ("alpha3", "X - 1", (), "derived"), ("alpha4", "X", (), "derived")],
}

_MAIN_BRACKETS = PoissonStructure(("x", "y", "z"), {("z", "x"): 1, ("z", "y"): 1})
_APPENDIX_BRACKETS = PoissonStructure(("f0", "f1", "f2"), {("f0", "f1"): 1, ("f2", "f1"): 1})
_REDUCED_BRACKETS = PoissonStructure(("X", "Y"), {("Y", "X"): 1})


# -- system definitions -----------------------------------------------------


@dataclass(frozen=True)
class SystemDef:
    """dv/dt = prefactor * polynomial_part[v] for each dependent variable v."""

    weyl_type: WeylType
    variables: Tuple[str, ...]
    prefactor: RationalFunc
    polynomial_part: Tuple[MultiPoly, ...]
    signs: Tuple[int, ...]
    b: str = "generic"

    @property
    def ring(self) -> PolyRing:
        return self.polynomial_part[0].ring

    def field(self) -> Tuple[RationalFunc, ...]:
        return tuple(self.prefactor * RationalFunc(p) for p in self.polynomial_part)

    def printed_part(self) -> Tuple[MultiPoly, ...]:
        """The polynomial part with the display's overall signs removed."""
        return tuple(p.scale(s) for p, s in zip(self.polynomial_part, self.signs))

    def substitute(self, mapping: Mapping[str, object]) -> "SystemDef":
        pre = self.prefactor.subs(mapping) if any(n in self.prefactor.symbols() for n in mapping) else self.prefactor
        polys = tuple(p.subs(mapping) for p in self.polynomial_part)
        if any(isinstance(p, RationalFunc) for p in polys):
            raise TypeError("substitution must keep the polynomial part polynomial")
        return SystemDef(self.weyl_type, self.variables, pre, polys, self.signs, self.b)

    def eliminate(self, zeroed: Sequence[str] = ()) -> Tuple[str, "SystemDef"]:
        name, expr = self.weyl_type.elimination(self.ring, zeroed)
        return name, self.substitute({name: expr})


@lru_cache(maxsize=None)
def _d4_table() -> Tuple[MultiPoly, ...]:
    text = resources.files("painleve_weyl.data").joinpath("d4_system.tsv").read_text()
    return load_dump(text)["components"]


def reading_a(ring: Optional[PolyRing] = None) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """The printed (P1, P2, P3) parsed from the verbatim transcription."""
    ring = ring or get_type("d4").ring
    return tuple(ring.parse(s) for s in (tr.D4_P1, tr.D4_P2, tr.D4_P3))


def reading_b(ring: Optional[PolyRing] = None) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """The printed (P1, P2, P3) assembled from the coefficient tables."""
    from . import d4_coefficients as dc

    ring = ring or get_type("d4").ring
    return tuple(dc.assemble(t, ring) for t in (dc.P1_COEFFS, dc.P2_COEFFS, dc.P3_COEFFS))


def b_specialization(name: str = "generic", ring: Optional[PolyRing] = None) -> RationalFunc:
    """The coefficient function b(t): the bare symbol, or the P_VI form."""
    ring = ring or PolyRing(("t", "eta", "b"))
    if name == "generic":
        return RationalFunc(ring.gen("b"))
    if name == "pvi-form":
        return RationalFunc(ring.parse(tr.B_PVI_FORM))
    raise ValueError(f"unknown b specialization {name!r}; use 'generic' or 'pvi-form'")


def _degenerate_polys(wt: WeylType, identification: Optional[Mapping[str, str]]) -> Tuple[MultiPoly, ...]:
    ring = wt.ring
    ident = identification if identification is not None else DEGENERATE_ALPHAS[wt.key]
    mapping = {a: ring.parse(e) for a, e in ident.items()}
    return tuple(p.subs(mapping, ring) for p in _d4_table())


def build_vector_field(
    weyl_type,
    params: Optional[Mapping[str, object]] = None,
    b: str = "generic",
    *,
    identification: Optional[Mapping[str, str]] = None,
) -> SystemDef:
    """The system of the given type.

    ``params`` optionally pins numeric values (they must satisfy the
    normalization).  ``b`` selects the coefficient function for types that
    carry one.  ``identification`` overrides how a degenerate type's
    parameters sit inside D4(1).
    """
    wt = get_type(weyl_type)
    ring = wt.ring
    if wt.key == "d4":
        polys = _d4_table()
        signs = (1, -1, 1)
        pre = RationalFunc(ring.parse("b/(2*eta)"))
    elif wt.family == "degenerate":
        polys = _degenerate_polys(wt, identification)
        signs = (1, -1, 1)
        pre = RationalFunc(ring.parse("b/(2*eta)"))
    elif wt.key == "a3-pv":
        polys = tuple(ring.parse(q) for q in tr.PV_Q)
        signs = tr.PV_SIGNS
        pre = RationalFunc(ring.parse("phi/2"))
    elif wt.key == "c2-piii":
        polys = tuple(ring.parse(f) for f in tr.PIII_F)
        signs = (1, 1, 1)
        pre = RationalFunc(ring.one)
    elif wt.key == "d4-2d":
        k = ring.parse(tr.H_X_EQ_Y_BRACKET)
        polys = (k.diff("Y"), -k.diff("X"))
        signs = (1, 1)
        pre = RationalFunc(ring.parse(tr.H_X_EQ_Y_PREFACTOR))
    else:  # pragma: no cover - registry and table are kept in sync
        raise Unavailable(wt.tag)
    signed = tuple(p.scale(s) for p, s in zip(polys, signs))
    sysdef = SystemDef(wt, wt.variables, pre, signed, tuple(signs), "generic")
    if b != "generic":
        if not wt.uses_b:
            raise ValueError(f"{wt.tag} has no coefficient function b(t)")
        bval = b_specialization(b, ring)
        sysdef = SystemDef(wt, wt.variables, sysdef.prefactor.subs({"b": bval}), signed, sysdef.signs, b)
    if params:
        check_normalization(wt, params)
        mapping = {k: to_rational(v) for k, v in params.items() if k in ring}
        sysdef = sysdef.substitute(mapping)
    return sysdef


def check_normalization(weyl_type, params: Mapping[str, object], tol: float = 0.0) -> None:
    wt = get_type(weyl_type)
    if all(p in params for p, c in zip(wt.params, wt.norm) if c):
        if tol:
            total = sum(c * float(params[p]) for p, c in zip(wt.params, wt.norm) if c) - float(wt.norm_rhs)
            bad = abs(total) > tol
        else:
            total = wt.residual(params)
            bad = total != 0
        if bad:
            raise NormalizationError(
                f"parameters violate {normalization_text(wt)} (residual {total})"
            )


def normalization_text(weyl_type) -> str:
    wt = get_type(weyl_type)
    parts = []
    for p, c in zip(wt.params, wt.norm):
        if c:
            parts.append(p if c == 1 else f"{c}*{p}")
    return " + ".join(parts) + f" = {wt.norm_rhs}"


def normalization_residual(weyl_type, params: Optional[Mapping[str, object]] = None) -> MultiPoly:
    """Left side minus right side of the normalization, symbolic or numeric."""
    wt = get_type(weyl_type)
    ring = wt.ring
    if params is None:
        total = ring.const(-mpq(wt.norm_rhs.numerator, wt.norm_rhs.denominator))
        for p, c in zip(wt.params, wt.norm):
            if c:
                total = total + ring.gen(p).scale(c)
        return total
    return ring.const(wt.residual(params))


# -- maps --------------------------------------------------------------------


def _param_action(wt: WeylType, images: Mapping[str, str]) -> ParamAction:
    ring = wt.ring
    return ParamAction.from_images(wt.params, {p: ring.parse(e) for p, e in images.items()})


def _as_rf(e) -> RationalFunc:
    return RationalFunc(e)


def generators(weyl_type) -> List[BirationalMap]:
    wt = get_type(weyl_type)
    return [generator(wt, n) for n in wt.generator_names]


@lru_cache(maxsize=None)
def _generator(key: str, name: str) -> BirationalMap:
    wt = get_type(key)
    try:
        images, params = _GENERATORS[key][name]
    except KeyError:
        raise Unavailable(f"{wt.tag} has no generator {name!r}") from None
    ring = wt.ring
    return BirationalMap(
        name, wt.key, wt.variables, tuple(_as_rf(ring.parse(e)) for e in images), _param_action(wt, params)
    )


def generator(weyl_type, name: Union[str, int]) -> BirationalMap:
    wt = get_type(weyl_type)
    if isinstance(name, int):
        name = f"s{name}"
    return _generator(wt.key, name)


@lru_cache(maxsize=None)
def _charts(key: str) -> Tuple[ChartMap, ...]:
    wt = get_type(key)
    ring = wt.ring
    out = []
    base = _CHART_BASE[key]
    ident = ParamAction.identity(wt.params)
    for i, triple in enumerate(_CHARTS[key]):
        images = tuple(_as_rf(ring.parse(e)) for e in triple)
        inverse = invert_shear(wt.variables, images)
        out.append(ChartMap(f"chart{i + base}", wt.key, wt.variables, images, ident, inverse))
    return tuple(out)


def charts(weyl_type) -> List[ChartMap]:
    wt = get_type(weyl_type)
    if not wt.has_atlas:
        raise Unavailable(f"no coordinate atlas is stated for {wt.tag}")
    return list(_charts(wt.key))


def invariant_divisors(weyl_type) -> List[DivisorRow]:
    wt = get_type(weyl_type)
    ring = wt.ring
    return [
        DivisorRow(p, ring.parse(f), extra, src, tuple(ring.parse(g) for g in _split_product(f)))
        for p, f, extra, src in _DIVISORS[wt.key]
    ]


def divisor_for(weyl_type, name: str) -> DivisorRow:
    """The divisor row attached to reflection ``name`` (s_i pairs with row i)."""
    wt = get_type(weyl_type)
    if name not in wt.reflections:
        raise Unavailable(f"{name} of {wt.tag} is not attached to an invariant divisor")
    return invariant_divisors(wt)[int(name[1:])]


def poisson_structure(weyl_type) -> PoissonStructure:
    wt = get_type(weyl_type)
    if wt.family == "appendix":
        return _APPENDIX_BRACKETS
    if wt.family == "reduced":
        return _REDUCED_BRACKETS
    return _MAIN_BRACKETS


# -- Hamiltonians --------------------------------------------------------------


@dataclass(frozen=True)
class HamiltonianDef:
    kind: str
    expression: RationalFunc
    pair: Tuple[str, str]
    time: str

    @property
    def ring(self) -> PolyRing:
        return self.expression.ring

    def hamilton_field(self) -> Tuple[RationalFunc, RationalFunc]:
        """(dq/dtime, dp/dtime) = (dH/dp, -dH/dq)."""
        q, p = self.pair
        return self.expression.diff(p), -self.expression.diff(q)


_HAMILTONIANS = {
    "HVI": (("X", "Y", "t") + tuple(f"A{i}" for i in range(5)), tr.H_VI, ("X", "Y"), "t"),
    "H-x-eq-y": (None, None, ("X", "Y"), "t"),
    "HV": (("x", "y", "T", "a") + tuple(f"alpha{i}" for i in range(4)), tr.H_V, ("x", "y"), "T"),
    "HIII": (("x", "y", "T", "eta") + tuple(f"alpha{i}" for i in range(3)), tr.H_III, ("x", "y"), "T"),
}


def hamiltonian(kind: str) -> HamiltonianDef:
    try:
        names, text, pair, time = _HAMILTONIANS[kind]
    except KeyError:
        raise ValueError(f"unknown Hamiltonian {kind!r}; choose from {', '.join(_HAMILTONIANS)}") from None
    if kind == "H-x-eq-y":
        ring = get_type("d4-2d").ring
        expr = RationalFunc(ring.parse(tr.H_X_EQ_Y_PREFACTOR)) * RationalFunc(ring.parse(tr.H_X_EQ_Y_BRACKET))
    else:
        expr = RationalFunc(PolyRing(names).parse(text))
    return HamiltonianDef(kind, expr, pair, time)


# -- dump format ---------------------------------------------------------------


def _rat_text(c) -> str:
    c = mpq(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def dump(weyl_type) -> str:
    """Monomial-per-line listing of the printed polynomial part.

    Each component block starts with a ``#`` header naming the variable and
    the overall sign in front of the display; data lines are the exponent
    vector (in the header's symbol order) and the coefficient, tab-separated.
    """
    sysdef = build_vector_field(weyl_type)
    return dump_components(sysdef.weyl_type, sysdef.printed_part(), sysdef.signs, str(sysdef.prefactor))


def dump_components(wt: WeylType, comps: Sequence[MultiPoly], signs: Sequence[int], prefactor: str) -> str:
    ring = comps[0].ring
    lines = [f"# type {wt.tag}", f"# symbols {' '.join(ring.names)}", f"# prefactor {prefactor}"]
    for v, s, p in zip(wt.variables, signs, comps):
        lines.append(f"# component d{v}/dt sign {'+' if s > 0 else '-'}1 terms {len(p)}")
        for exps, c in p.items():
            lines.append(" ".join(map(str, exps)) + "\t" + _rat_text(c))
    return "\n".join(lines) + "\n"


def load_dump(text: str) -> Dict[str, object]:
    """Parse :func:`dump` output back into polynomials."""
    ring = None
    comps: List[Dict[Tuple[int, ...], str]] = []
    signs: List[int] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            words = line[1:].split()
            if words[0] == "symbols":
                ring = PolyRing(words[1:])
            elif words[0] == "component":
                comps.append({})
                signs.append(int(words[3]))
            continue
        exps, coeff = line.split("\t")
        comps[-1][tuple(int(e) for e in exps.split())] = coeff
    if ring is None:
        raise ValueError("dump has no symbols header")
    return {"ring": ring, "components": tuple(ring.from_terms(c) for c in comps), "signs": tuple(signs)}
