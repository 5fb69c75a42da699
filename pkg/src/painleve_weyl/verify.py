"""Executable checks for the structural claims about each system."""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from .algebra import (
    Blowup,
    DivByZero,
    Diverges,
    MultiPoly,
    NotDivisible,
    PolyRing,
    RationalFunc,
    exact_divide,
    param_limit,
    rf_equal,
)
from .birational import (
    BirationalMap,
    Indeterminate,
    ParamAction,
    SampledWord,
    apply_map,
    compose,
    poisson_series_transform,
    pullback_field,
    transformed_field,
    volume_check,
)
from . import systems
from .systems import transcriptions as tr
from .systems.types import WeylType

DEFAULT_SEED = 212
SAMPLE_POINTS = 20
SAMPLE_RANGE = 999
MAX_RESAMPLE = 500

STATUSES = ("pass", "fail", "blowup", "skip", "error")


@dataclass
class VerificationReport:
    check_id: str
    weyl_type: str
    mode: str
    status: str
    witness: Optional[object] = None
    notes: str = ""
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


class _Timer:
    def __init__(self):
        self.start = time.perf_counter()

    def ms(self) -> int:
        return int(round((time.perf_counter() - self.start) * 1000))


def _report(check_id, wt, mode, ok, timer, witness=None, notes=()) -> VerificationReport:
    tag = wt.tag if isinstance(wt, WeylType) else str(wt)
    return VerificationReport(
        check_id, tag, mode, "pass" if ok else "fail",
        None if ok else (witness if witness is not None else "unspecified"),
        "; ".join(n for n in notes if n), timer.ms(),
    )


def _rng(seed: int, check_id: str) -> random.Random:
    return random.Random(f"{seed}:{check_id}")


def _q(v) -> str:
    v = mpq(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _first_term(diff: MultiPoly) -> str:
    exps, c = diff.leading_term()
    mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(diff.ring.names, exps) if e) or "1"
    return f"{_q(c)}*{mono}"


def _difference_witness(a: RationalFunc, b: RationalFunc) -> Optional[str]:
    a, b = RationalFunc(a), RationalFunc(b)
    d = a.num * b.den - b.num * a.den
    return None if d.is_zero() else _first_term(d)


def sample_point(wt: WeylType, ring: PolyRing, rng: random.Random, zeroed: Sequence[str] = (),
                 fixed: Optional[Mapping[str, object]] = None) -> Dict[str, mpq]:
    """Random integer point for every ring symbol, normalization imposed."""
    pt = {n: mpq(rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE)) for n in ring.names}
    for z in zeroed:
        pt[z] = mpq(0)
    if fixed:
        pt.update({k: mpq(v) for k, v in fixed.items()})
    if set(wt.params) <= set(ring.names):
        name, expr = wt.elimination(ring, zeroed)
        pt[name] = expr.evaluate(pt)
    return pt


def _eliminate(exprs, wt: WeylType, zeroed: Sequence[str] = ()):
    ring = exprs[0].ring
    name, expr = wt.elimination(ring, zeroed)
    mapping = {name: expr}
    mapping.update({z: 0 for z in zeroed})
    return name, [e.subs(mapping) for e in exprs]


# -- symmetry ----------------------------------------------------------------


def _symbolic_symmetry(sysdef, m: BirationalMap, wt: WeylType) -> Tuple[bool, Optional[str], str]:
    F = sysdef.field()
    lhs = pullback_field(m, F)
    rhs = transformed_field(m, F)
    name, both = _eliminate(list(lhs) + list(rhs), wt)
    n = len(F)
    for k in range(n):
        w = _difference_witness(both[k], both[n + k])
        if w is not None:
            return False, f"d{m.variables[k]}/dt differs, first term {w}", name
    return True, None, name


def _sampled_symmetry(sysdef, m: BirationalMap, wt: WeylType, rng, points: int) -> Tuple[bool, Optional[dict]]:
    F = sysdef.field()
    ring = sysdef.ring
    jac = [[im.diff(v) for v in m.variables] for im in m.images]
    done = tries = 0
    while done < points:
        tries += 1
        if tries > MAX_RESAMPLE:
            raise RuntimeError("could not find regular sample points")
        pt = sample_point(wt, ring, rng)
        try:
            fvals = [f.evaluate(pt) for f in F]
            lhs = [sum((j.evaluate(pt) * fv for j, fv in zip(row, fvals)), mpq(0)) for row in jac]
            state, params = apply_map(m, [pt[v] for v in m.variables], {k: v for k, v in pt.items() if k not in m.variables})
            pt2 = dict(params)
            pt2.update(zip(m.variables, state))
            rhs = [f.evaluate(pt2) for f in F]
        except (DivByZero, Indeterminate):
            continue
        done += 1
        for k, (a, b) in enumerate(zip(lhs, rhs)):
            if a != b:
                return False, {"point": {k2: _q(v) for k2, v in pt.items()}, "component": m.variables[k],
                               "lhs": _q(a), "rhs": _q(b)}
    return True, None


def check_symmetry(weyl_type, i, mode: str = "sampled", *, seed: int = DEFAULT_SEED,
                   points: int = SAMPLE_POINTS, system=None,
                   param_action: Optional[ParamAction] = None) -> VerificationReport:
    """Generator i maps the flow of the system at alpha to the flow at s_i(alpha).

    ``param_action`` replaces the generator's parameter action (mutation control).
    """
    wt = systems.get_type(weyl_type)
    timer = _Timer()
    m = systems.generator(wt, i)
    if param_action is not None:
        m = m.with_params(param_action)
    sysdef = system or systems.build_vector_field(wt)
    check_id = f"symmetry:{wt.key}:{m.name}"
    notes = []
    if wt.key == "c2-piii" and m.name == "s1":
        notes.append("s1 also maps eta to -eta")
    if wt.key == "a3-pv" and m.name == "pi":
        notes.append(f"pi transcribed as swapping f0,f2 and alpha0,alpha2; printed tuple {systems.PV_PI_PRINTED} "
                     "carries a spurious eta")
    if mode in ("symbolic", "auto"):
        try:
            ok, w, elim = _symbolic_symmetry(sysdef, m, wt)
            notes.append(f"eliminated {elim}")
            return _report(check_id, wt, "symbolic", ok, timer, w, notes)
        except Blowup as exc:
            if mode == "symbolic":
                return VerificationReport(check_id, wt.tag, "symbolic", "blowup", None, str(exc), timer.ms())
            notes.append("symbolic blowup, fell back to sampling")
    ok, w = _sampled_symmetry(sysdef, m, wt, _rng(seed, check_id), points)
    notes.append(f"{points} exact rational points, seed {seed}")
    return _report(check_id, wt, "sampled", ok, timer, w, notes)


def check_involution(weyl_type, i) -> VerificationReport:
    """s_i composed with itself is the identity, symbolically."""
    wt = systems.get_type(weyl_type)
    timer = _Timer()
    m = systems.generator(wt, i)
    sq = compose(m, m, "symbolic")
    ring = m.ring
    for v, im in zip(m.variables, sq.images):
        w = _difference_witness(im, RationalFunc(ring.gen(v)))
        if w is not None:
            return _report(f"involution:{wt.key}:{m.name}", wt, "symbolic", False, timer, f"{v}: {w}")
    ok = sq.params.is_identity()
    return _report(f"involution:{wt.key}:{m.name}", wt, "symbolic", ok, timer, "parameter action is not the identity")


# -- Coxeter relations -----------------------------------------------------------


def _word_is_identity(word: SampledWord, wt: WeylType, ring: PolyRing, rng, points: int):
    """None if the word fixes every sampled (state, params); else a witness."""
    done = tries = 0
    while done < points:
        tries += 1
        if tries > MAX_RESAMPLE:
            raise RuntimeError("could not find regular sample points")
        pt = sample_point(wt, ring, rng)
        state = [pt[v] for v in wt.variables]
        params = {k: v for k, v in pt.items() if k not in wt.variables}
        try:
            s2, p2 = word(state, params)
        except Indeterminate:
            continue
        done += 1
        if list(s2) != state or any(p2[k] != params[k] for k in params):
            return {"word": word.name, "point": {k: _q(v) for k, v in pt.items()}}
    return None


def check_coxeter(weyl_type, mode: str = "sampled", max_extra_order: int = 12, *,
                  seed: int = DEFAULT_SEED, points: int = SAMPLE_POINTS) -> VerificationReport:
    """(s_i s_j)^m_ij = 1 on sampled states and exactly on parameters, the order
    being exact; infinite orders are checked for k <= max_extra_order; pi
    relations where pi exists."""
    wt = systems.get_type(weyl_type)
    timer = _Timer()
    check_id = f"coxeter:{wt.key}"
    rng = _rng(seed, check_id)
    ring = wt.ring
    gens = {g.name: g for g in systems.generators(wt)}
    refl = wt.reflections
    notes = []
    relations = 0
    for name in wt.generator_names:
        word = SampledWord((gens[name], gens[name]))
        if not word.params.is_identity():
            return _report(check_id, wt, "sampled", False, timer, f"{name}^2 moves parameters")
        w = _word_is_identity(word, wt, ring, rng, points)
        if w:
            return _report(check_id, wt, "sampled", False, timer, w)
        relations += 1
    for i in range(len(refl)):
        for j in range(i + 1, len(refl)):
            mij = wt.coxeter_order(i, j)
            pair = (gens[refl[i]], gens[refl[j]])
            if math.isinf(mij):
                for k in range(1, max_extra_order + 1):
                    if SampledWord(pair * k).params.is_identity():
                        return _report(check_id, wt, "sampled", False, timer,
                                       f"({refl[i]} {refl[j]})^{k} fixes the parameters")
                notes.append(f"({refl[i]} {refl[j]})^k moves parameters for k <= {max_extra_order}")
                relations += 1
                continue
            mij = int(mij)
            word = SampledWord(pair * mij)
            if not word.params.is_identity():
                return _report(check_id, wt, "sampled", False, timer,
                               f"({refl[i]} {refl[j]})^{mij} moves parameters")
            w = _word_is_identity(word, wt, ring, rng, points)
            if w:
                return _report(check_id, wt, "sampled", False, timer, w)
            for k in range(1, mij):
                shorter = SampledWord(pair * k)
                if shorter.params.is_identity() and _word_is_identity(shorter, wt, ring, rng, 3) is None:
                    return _report(check_id, wt, "sampled", False, timer,
                                   f"({refl[i]} {refl[j]})^{k} is already the identity; order below {mij}")
            relations += 1
    if wt.pi:
        pi = gens["pi"]
        for src, dst in wt.pi.items():
            word = SampledWord((pi, gens[src], pi, gens[dst]))
            if not word.params.is_identity():
                return _report(check_id, wt, "sampled", False, timer, f"pi {src} pi != {dst} on parameters")
            w = _word_is_identity(word, wt, ring, rng, points)
            if w:
                return _report(check_id, wt, "sampled", False, timer, w)
            relations += 1
        notes.append("pi conjugation " + ", ".join(f"{a}->{b}" for a, b in wt.pi.items()))
    notes.insert(0, f"{relations} relations, {points} points each, seed {seed}")
    return _report(check_id, wt, "sampled", True, timer, None, notes)


# -- holomorphy ----------------------------------------------------------------------


def check_holomorphy(weyl_type, *, system=None) -> VerificationReport:
    """Each chart turns the field polynomial; degree and volume conditions."""
    wt = systems.get_type(weyl_type)
    timer = _Timer()
    check_id = f"holomorphy:{wt.key}"
    if not wt.has_atlas:
        return VerificationReport(check_id, wt.tag, "symbolic", "skip", None,
                                  "no coordinate atlas is stated for this type", timer.ms())
    sysdef = system or systems.build_vector_field(wt)
    deg = max(p.total_degree(wt.variables) for p in sysdef.polynomial_part)
    if wt.key == "d4" and deg != 6 or deg > 6:
        return _report(check_id, wt, "symbolic", False, timer, f"field degree {deg} in {wt.variables}")
    notes = [f"field degree {deg}"]
    try:
        for ch in systems.charts(wt):
            if not volume_check(ch):
                return _report(check_id, wt, "symbolic", False, timer, f"{ch.name} Jacobian is not 1")
            back = [im.subs(dict(zip(wt.variables, ch.inverse))) for im in ch.images]
            for v, b in zip(wt.variables, back):
                if not rf_equal(b, RationalFunc(ch.ring.gen(v))):
                    return _report(check_id, wt, "symbolic", False, timer, f"{ch.name} inverse round trip fails")
            pulled = pullback_field(ch, sysdef.polynomial_part)
            elim, comps = _eliminate(pulled, wt)
            for v, c in zip(wt.variables, comps):
                try:
                    exact_divide(c.num, c.den)
                except NotDivisible as exc:
                    return _report(check_id, wt, "symbolic", False, timer,
                                   f"{ch.name} d{v}/dt not polynomial: {exc}")
        for g in systems.generators(wt):
            if not volume_check(g):
                return _report(check_id, wt, "symbolic", False, timer, f"{g.name} Jacobian is not 1")
    except Blowup as exc:
        return VerificationReport(check_id, wt.tag, "symbolic", "blowup", None, str(exc), timer.ms())
    notes.append(f"{len(systems.charts(wt))} charts polynomial after eliminating {elim}")
    notes.append("all chart and generator Jacobians equal 1")
    return _report(check_id, wt, "symbolic", True, timer, None, notes)


# -- invariant divisors ------------------------------------------------------------


def _component_vanishing(L: MultiPoly, factors: Sequence[MultiPoly], wt, rng, points) -> Optional[dict]:
    ring = L.ring
    for fac in factors:
        var = next(v for v in wt.variables if fac.degree(v) == 1)
        coeff = fac.diff(var)
        root = -(fac - ring.gen(var).scale(coeff.constant_value())).scale(1 / coeff.constant_value())
        for _ in range(points):
            pt = sample_point(wt, ring, rng)
            pt[var] = root.evaluate(pt)
            if L.evaluate(pt) != 0:
                return {"component": str(fac), "point": {k: _q(v) for k, v in pt.items()}}
    return None


def check_invariant_divisors(weyl_type, *, seed: int = DEFAULT_SEED, points: int = SAMPLE_POINTS,
                             system=None) -> VerificationReport:
    """With the paired parameter at 0, L(f) = sum_v df/dv * dv/dt vanishes on f = 0."""
    wt = systems.get_type(weyl_type)
    timer = _Timer()
    check_id = f"divisors:{wt.key}"
    sysdef = system or systems.build_vector_field(wt)
    rng = _rng(seed, check_id)
    notes = []
    for row in systems.invariant_divisors(wt):
        zeroed = (row.param,) + tuple(row.extra_zero)
        L = sysdef.ring.zero
        for v, p in zip(wt.variables, sysdef.polynomial_part):
            d = row.poly.diff(v)
            if not d.is_zero():
                L = L + d * p
        elim, (L,) = _eliminate([L], wt, zeroed)
        label = f"{'='.join(zeroed)}=0 f={row.poly}"
        try:
            exact_divide(L, row.poly)
            notes.append(f"{label}: divisible")
            continue
        except NotDivisible:
            pass
        factors = row.factors
        if len(factors) < 2:
            return _report(check_id, wt, "symbolic", False, timer, f"{label}: L(f) not divisible by f", notes)
        w = _component_vanishing(L, factors, wt, rng, points)
        if w:
            w["row"] = label
            return _report(check_id, wt, "sampled", False, timer, w, notes)
        notes.append(f"{label}: vanishes on each component (sampled)")
    mode = "sampled" if any("sampled" in n for n in notes) else "symbolic"
    return _report(check_id, wt, mode, True, timer, None, notes)


def divisor_quotient(weyl_type, param: str) -> MultiPoly:
    """L(f)/f for the row paired with ``param`` (normalization eliminated)."""
    wt = systems.get_type(weyl_type)
    row = next(r for r in systems.invariant_divisors(wt) if r.param == param)
    sysdef = systems.build_vector_field(wt)
    L = sysdef.ring.zero
    for v, p in zip(wt.variables, sysdef.polynomial_part):
        L = L + row.poly.diff(v) * p
    _, (L,) = _eliminate([L], wt, (row.param,) + tuple(row.extra_zero))
    return exact_divide(L, row.poly)


# -- first integrals -------------------------------------------------------------------

FIRST_INTEGRALS = ("D4-x-minus-y", "PV", "PIII")


def check_first_integral(kind: str, *, system=None) -> VerificationReport:
    timer = _Timer()
    check_id = f"first-integral:{kind}"
    if kind == "D4-x-minus-y":
        wt = systems.get_type("d4")
        sysdef = system or systems.build_vector_field(wt)
        ring = sysdef.ring
        p1, p2, _ = sysdef.printed_part()
        quartic = ring.parse("(x-y)*(x-y+1)*(x-y+1-eta)*(x-y-eta)")
        elim, (lhs,) = _eliminate([p1 + p2], wt)
        w = _difference_witness(lhs, quartic)
        return _report(check_id, wt, "symbolic", w is None, timer, w,
                       [f"P1+P2 equals the quartic in x-y after eliminating {elim}"])
    if kind == "PV":
        wt = systems.get_type("a3-pv")
        sysdef = system or systems.build_vector_field(wt)
        ring = sysdef.ring
        F = [f.as_poly() for f in sysdef.field()]
        diff = (F[2] - F[0]) - (ring.gen("f2") - ring.gen("f0"))
        elim, (diff,) = _eliminate([diff], wt)
        coeffs = diff.coefficients_in("phi")
        c1, c0 = coeffs.get(1, ring.zero), coeffs.get(0, ring.zero)
        if c1.is_zero() or set(coeffs) - {0, 1}:
            return _report(check_id, wt, "symbolic", False, timer, "not linear in phi")
        exps, lc = c1.leading_term()
        phi = -c0.as_dict().get(exps, mpq(0)) / lc
        ok = (c0 + c1.scale(phi)).is_zero()
        return _report(check_id, wt, "symbolic", ok, timer, "no phi makes the identity hold",
                       [f"d(f2-f0)/dt = f2-f0 holds exactly for phi = {_q(phi)}", f"eliminated {elim}"])
    if kind == "PIII":
        wt = systems.get_type("c2-piii")
        sysdef = system or systems.build_vector_field(wt)
        ring = sysdef.ring
        F = sysdef.polynomial_part
        diff = (F[0] - F[2]) - (ring.gen("f0") - ring.gen("f2"))
        elim, (diff,) = _eliminate([diff], wt)
        return _report(check_id, wt, "symbolic", diff.is_zero(), timer,
                       None if diff.is_zero() else _first_term(diff),
                       [f"d(f0-f2)/dt = f0-f2 using the normalization (eliminated {elim})"])
    raise ValueError(f"unknown first integral {kind!r}; choose from {', '.join(FIRST_INTEGRALS)}")


# -- reductions ------------------------------------------------------------------------

REDUCTIONS = (
    "x-eq-y-hamiltonian",
    "pvi-limit",
    "second-order-elimination",
    "pv-change-of-vars",
    "piii-change-of-vars",
    "a3-to-c2-degeneration",
    "particular-solution-xy-t",
)

_ALPHA = tuple(f"alpha{i}" for i in range(5))
_A = tuple(f"A{i}" for i in range(5))


def _x_eq_y() -> Tuple[bool, object, List[str]]:
    d4 = systems.get_type("d4")
    red = systems.get_type("d4-2d")
    sysdef = systems.build_vector_field(d4)
    ring2 = red.ring
    X, Y = ring2.gens("X", "Y")
    p1, p2, _ = sysdef.printed_part()
    _, (inv,) = _eliminate([(p1 + p2).subs({"x": X, "y": X, "z": Y}, ring2)], red)
    if not inv.is_zero():
        return False, "P1+P2 does not vanish on x=y", []
    F = [f.subs({"x": X, "y": X, "z": Y}, ring2) for f in sysdef.field()]
    H = systems.hamiltonian("H-x-eq-y")
    hx, hy = H.hamilton_field()
    _, comps = _eliminate([F[0] - hx, F[1] - hx, F[2] - hy], red)
    for name, c in zip(("dX/dt from x", "dX/dt from y", "dY/dt"), comps):
        if not c.num.is_zero():
            return False, f"{name}: {_first_term(c.num)}", []
    return True, None, ["x=y is invariant; reduced field equals the Hamilton field of H after eliminating alpha0"]


def _pvi_reduced(b_sign: int, swap: bool, shift_sign: int):
    """Reduced field minus the Hamilton field of H_VI, on x = y + shift_sign*t."""
    d4 = systems.get_type("d4")
    sysdef = systems.build_vector_field(d4)
    ring = PolyRing(("X", "Y", "t", "eta") + _A)
    X, Y, t = ring.gens("X", "Y", "t")
    pmap = {a: ring.gen(A) for a, A in zip(_ALPHA, _A)}
    if swap:
        pmap["alpha0"], pmap["alpha1"] = ring.gen("A1"), ring.gen("A0")
    b = systems.b_specialization("pvi-form", ring) * b_sign
    mapping: Dict[str, object] = {"x": X + t.scale(shift_sign), "y": X, "z": Y, "b": b}
    mapping.update(pmap)
    F = [f.subs(mapping, ring) for f in sysdef.field()]
    H = systems.hamiltonian("HVI").expression.embed(ring)
    hx, hy = H.diff("Y"), -H.diff("X")
    a0 = ring.parse("1 - A1 - 2*A2 - A3 - A4")
    return [(F[1] - hx).subs({"A0": a0}), (F[2] - hy).subs({"A0": a0})]


def _pvi_limit_ok(b_sign, swap, shift_sign) -> Tuple[bool, str]:
    for name, d in zip(("dX/dt", "dY/dt"), _pvi_reduced(b_sign, swap, shift_sign)):
        try:
            lim = param_limit(d, "eta", "infinity")
        except Diverges as exc:
            return False, f"{name}: diverges ({exc})"
        if not lim.num.is_zero():
            return False, f"{name}: limit {_first_term(lim.num)}"
    return True, ""


def _pvi_limit() -> Tuple[bool, object, List[str]]:
    literal, why = _pvi_limit_ok(1, True, -1)
    notes = []
    if literal:
        return True, None, ["literal transcription tends to the H_VI field with O(1/eta) error"]
    notes.append(f"literal transcription (b as printed, alpha0=A1, alpha1=A0) fails: {why}")
    ok, why2 = _pvi_limit_ok(-1, False, -1)
    if ok:
        degs = []
        for d in _pvi_reduced(-1, False, -1):
            degs.append(f"{d.num.degree('eta')}/{d.den.degree('eta')}")
        notes.append("passes with b replaced by -b and alpha0=A0, alpha1=A1: "
                     f"eta-degrees num/den {', '.join(degs)}, difference O(1/eta)")
        return True, None, notes
    return False, why2, notes


def _second_order() -> Tuple[bool, object, List[str]]:
    red = systems.get_type("d4-2d")
    ring = PolyRing(("X", "Y", "Xp", "t", "eta", "b", "db") + _ALPHA)
    H = systems.hamiltonian("H-x-eq-y").expression.embed(ring)
    hy, hx = H.diff("Y"), H.diff("X")
    Xp, db = ring.gens("Xp", "db")
    xdd = hy.diff("X") * Xp + hy.diff("Y") * (-hx) + hy.diff("b") * db
    p = hy.diff("Y")
    q = hy.subs({"Y": 0})
    y_sol = (RationalFunc(Xp) - q) / p
    lhs = xdd.subs({"Y": y_sol})
    rhs = RationalFunc(ring.parse(tr.SECOND_ORDER_RHS))
    _, (lhs, rhs) = _eliminate([lhs, rhs], red)
    w = _difference_witness(lhs, rhs)
    return w is None, w, ["Y solved from dX/dt = dH/dY; Xp stands for dX/dt, db for db/dt"]


def _change_of_vars(kind: str) -> Tuple[bool, object, List[str]]:
    if kind == "pv":
        wt = systems.get_type("a3-pv")
        ham = systems.hamiltonian("HV")
        params = ("a",) + _ALPHA[:4]
        fixed = {"phi": -2}
    else:
        wt = systems.get_type("c2-piii")
        ham = systems.hamiltonian("HIII")
        params = ("eta",) + _ALPHA[:3]
        fixed = {}
    ring = PolyRing(("x", "y", "T", "f0", "f1", "f2") + params + (("phi",) if fixed else ()))
    F = [RationalFunc(f.subs(fixed, ring) if fixed else f.embed(ring)) for f in systems.build_vector_field(wt).field()]
    x, y, T = ring.gens("x", "y", "T")
    if kind == "pv":
        new = [RationalFunc(ring.gen("f0")), RationalFunc(ring.gen("f1"))]
        inverse = {"f0": x, "f1": y, "f2": x + T}
    else:
        a2 = ring.gen("alpha2")
        new = [RationalFunc(ring.one, ring.gen("f1")),
               RationalFunc(-(ring.parse("f1*f2") + a2) * ring.gen("f1"))]
        f2 = -(x * x * y) - a2 * x
        inverse = {"f0": f2 + T, "f1": RationalFunc(ring.one, x), "f2": f2}
    # d/dT = (1/T) d/dt with T = e^(t+c)
    derived = []
    for u in new:
        acc = RationalFunc(ring.zero)
        for v, fv in zip(("f0", "f1", "f2"), F):
            acc = acc + u.diff(v) * fv
        derived.append(acc.subs(inverse) / RationalFunc(T))
    hx, hy = ham.hamilton_field()
    hx, hy = hx.embed(ring), hy.embed(ring)
    disp = (tr.PV_DISPLAYED if kind == "pv" else tr.PIII_DISPLAYED)
    dx, dy = (RationalFunc(ring.parse(s)) for s in disp)
    _, comps = _eliminate([derived[0], derived[1], hx, hy, dx, dy], wt)
    notes = []
    for name, a, b in (("dx/dT", comps[0], comps[2]), ("dy/dT", comps[1], comps[3])):
        w = _difference_witness(a, b)
        if w is not None:
            return False, f"{name} vs Hamilton field: {w}", notes
    for name, a, b in (("dx/dT", comps[4], comps[2]), ("dy/dT", comps[5], comps[3])):
        w = _difference_witness(a, b)
        if w is not None:
            return False, f"displayed {name} vs Hamiltonian: {w}", notes
    if kind == "pv":
        notes.append("f2 = f0 + T, x = f0, y = f1, phi = -2")
    else:
        notes.append("f0 = f2 + T, x = 1/f1, y = -(f1*f2+alpha2)*f1")
    notes.append("displayed system matches its Hamiltonian")
    return True, None, notes


def _degeneration_limits(alpha1: str, alpha3: str):
    pv = systems.get_type("a3-pv")
    ring = PolyRing(("f0", "f1", "f2", "a", "eta", "beta0", "beta1", "beta2"))
    mapping = {
        "alpha0": ring.gen("beta0"), "alpha1": ring.parse(alpha1), "alpha2": ring.gen("beta2"),
        "alpha3": ring.parse(alpha3), "phi": -2,
    }
    F = [f.subs(mapping, ring) for f in systems.build_vector_field(pv).field()]
    piii = systems.build_vector_field("c2-piii")
    G = [RationalFunc(g.subs({f"alpha{i}": ring.gen(f"beta{i}") for i in range(3)}, ring))
         for g in piii.field()]
    out = []
    for f, g in zip(F, G):
        try:
            lim = param_limit(f, "a", "zero")
        except Diverges as exc:
            out.append(f"diverges ({exc})")
            continue
        out.append(_difference_witness(lim, g))
    return out


def _degeneration() -> Tuple[bool, object, List[str]]:
    literal = _degeneration_limits("-eta/a", "2*beta1 + eta/a")
    if all(w is None for w in literal):
        return True, None, ["all three components tend to the PIII system"]
    bad = [f"df{k}/dt: {w}" for k, w in enumerate(literal) if w is not None]
    notes = ["literal substitution alpha1=-eta/a, alpha3=2*beta1+eta/a fails in " + "; ".join(bad)
             + " (the limit has eta replaced by -eta)"]
    fixed = _degeneration_limits("eta/a", "2*beta1 - eta/a")
    if all(w is None for w in fixed):
        notes.append("passes with alpha1=eta/a, alpha3=2*beta1-eta/a")
        return True, None, notes
    return False, "; ".join(str(w) for w in fixed if w), notes


def _particular_solution() -> Tuple[bool, object, List[str]]:
    ring = PolyRing(("t", "eta"))
    t = ring.gen("t")
    results = {}
    for b_sign in (1, -1):
        b = systems.b_specialization("pvi-form", ring) * b_sign
        for u_sign in (-1, 1):
            u = t.scale(u_sign)
            eta = ring.gen("eta")
            quartic = u * (u + 1) * (u + 1 - eta) * (u - eta)
            rhs = b / RationalFunc(ring.parse("2*eta")) * RationalFunc(quartic)
            results[(b_sign, u_sign)] = rf_equal(rhs, RationalFunc(ring.const(u_sign)))
    desc = ", ".join(f"x-y={'+' if u > 0 else '-'}t with {'' if s > 0 else '-'}b: "
                     f"{'holds' if ok else 'fails'}" for (s, u), ok in results.items())
    notes = [desc]
    if results[(1, -1)]:
        return True, None, notes
    notes.append("x=y-t solves the first integral only after b is replaced by -b")
    if results[(-1, -1)]:
        return True, None, notes
    return False, desc, notes


def check_reduction(kind: str) -> VerificationReport:
    timer = _Timer()
    check_id = f"reduction:{kind}"
    runners: Dict[str, Tuple[str, Callable]] = {
        "x-eq-y-hamiltonian": ("d4", _x_eq_y),
        "pvi-limit": ("d4", _pvi_limit),
        "second-order-elimination": ("d4-2d", _second_order),
        "pv-change-of-vars": ("a3-pv", lambda: _change_of_vars("pv")),
        "piii-change-of-vars": ("c2-piii", lambda: _change_of_vars("piii")),
        "a3-to-c2-degeneration": ("a3-pv", _degeneration),
        "particular-solution-xy-t": ("d4", _particular_solution),
    }
    if kind not in runners:
        raise ValueError(f"unknown reduction {kind!r}; choose from {', '.join(REDUCTIONS)}")
    key, fn = runners[kind]
    wt = systems.get_type(key)
    try:
        ok, witness, notes = fn()
    except Blowup as exc:
        return VerificationReport(check_id, wt.tag, "symbolic", "blowup", None, str(exc), timer.ms())
    return _report(check_id, wt, "symbolic", ok, timer, witness, notes)


# -- Poisson series --------------------------------------------------------------------


def check_poisson_series(weyl_type, bound: int = 12) -> VerificationReport:
    """Every reflection equals its Poisson exponential on each dependent variable."""
    wt = systems.get_type(weyl_type)
    timer = _Timer()
    check_id = f"poisson-series:{wt.key}"
    ring = wt.ring
    notes = []
    failures = []
    for name in wt.reflections:
        for v in wt.variables:
            res = poisson_series_transform(name, ring.gen(v), wt, bound)
            if not res.terminated:
                failures.append(f"{name}({v}): series did not terminate within {bound} terms")
            elif not res.matches_closed_form:
                failures.append(f"{name}({v}): series sum differs from the generator")
    if wt.pi:
        notes.append("pi is not a reflection and has no series form")
    if failures:
        return _report(check_id, wt, "symbolic", False, timer, failures[0], notes + failures[1:])
    notes.insert(0, f"{len(wt.reflections)} reflections x {len(wt.variables)} variables, all series terminate")
    return _report(check_id, wt, "symbolic", True, timer, None, notes)


# -- normalization ---------------------------------------------------------------------


def check_parameter_actions(weyl_type) -> VerificationReport:
    """Every generator preserves the normalization residual exactly."""
    wt = systems.get_type(weyl_type)
    timer = _Timer()
    ring = wt.ring
    res = systems.normalization_residual(wt)
    for g in systems.generators(wt):
        moved = res.subs(g.params.symbolic(ring))
        if moved != res:
            return _report(f"normalization:{wt.key}", wt, "symbolic", False, timer, f"{g.name} changes the residual")
    return _report(f"normalization:{wt.key}", wt, "symbolic", True, timer, None,
                   [f"{len(wt.generator_names)} generators preserve {systems.normalization_text(wt)}"])


# -- suites ----------------------------------------------------------------------------

CHECKS = ("normalization", "symmetry", "involution", "coxeter", "holomorphy", "divisors",
          "first-integral", "reductions", "poisson-series")

_FIRST_INTEGRAL_OF = {"d4": "D4-x-minus-y", "a3-pv": "PV", "c2-piii": "PIII"}
_REDUCTIONS_OF = {
    "d4": ("x-eq-y-hamiltonian", "particular-solution-xy-t", "pvi-limit"),
    "d4-2d": ("second-order-elimination",),
    "a3-pv": ("pv-change-of-vars", "a3-to-c2-degeneration"),
    "c2-piii": ("piii-change-of-vars",),
}


def _run_check(name: str, wt: WeylType, mode: str, seed: int) -> List[VerificationReport]:
    if name == "normalization":
        return [check_parameter_actions(wt)]
    if name == "symmetry":
        return [check_symmetry(wt, g, mode, seed=seed) for g in wt.generator_names]
    if name == "involution":
        return [check_involution(wt, g) for g in wt.generator_names]
    if name == "coxeter":
        return [check_coxeter(wt, seed=seed)]
    if name == "holomorphy":
        return [check_holomorphy(wt)]
    if name == "divisors":
        return [check_invariant_divisors(wt, seed=seed)]
    if name == "first-integral":
        kind = _FIRST_INTEGRAL_OF.get(wt.key)
        return [check_first_integral(kind)] if kind else []
    if name == "reductions":
        return [check_reduction(k) for k in _REDUCTIONS_OF.get(wt.key, ())]
    if name == "poisson-series":
        return [check_poisson_series(wt)]
    raise KeyError(name)


def run_suite(types: Sequence, checks: Sequence[str], mode: str = "sampled",
              seed: int = DEFAULT_SEED) -> List[VerificationReport]:
    """Run the selected checks for the selected types in a fixed order."""
    out: List[VerificationReport] = []
    for t in types:
        wt = systems.get_type(t)
        for c in checks:
            if c not in CHECKS:
                out.append(VerificationReport(f"{c}:{wt.key}", wt.tag, mode, "error", f"unknown check {c!r}",
                                              f"known checks: {', '.join(CHECKS)}", 0))
                continue
            try:
                out.extend(_run_check(c, wt, mode, seed))
            except Exception as exc:  # one failing check must not stop the suite
                out.append(VerificationReport(f"{c}:{wt.key}", wt.tag, mode, "error", repr(exc), "", 0))
    return out


# -- mutation sensitivity --------------------------------------------------------------


def mutate_d4(component: int, term_index: int, delta: int = 1):
    """The D4(1) system with one stored coefficient of the printed table shifted."""
    sysdef = systems.build_vector_field("d4")
    printed = list(sysdef.printed_part())
    poly = printed[component]
    terms = list(poly.items())
    exps, c = terms[term_index]
    printed[component] = poly + poly.ring.from_terms({exps: delta})
    signed = tuple(p.scale(s) for p, s in zip(printed, sysdef.signs))
    return type(sysdef)(sysdef.weyl_type, sysdef.variables, sysdef.prefactor, signed, sysdef.signs, sysdef.b), exps


def mutation_sensitivity(n: int = 20, seed: int = DEFAULT_SEED) -> List[Dict[str, object]]:
    """Apply n random single-coefficient mutations and record which check trips."""
    rng = _rng(seed, "mutation")
    base = systems.build_vector_field("d4").printed_part()
    out = []
    for _ in range(n):
        comp = rng.randrange(3)
        idx = rng.randrange(len(base[comp]))
        mutated, exps = mutate_d4(comp, idx)
        tripped = None
        if not check_first_integral("D4-x-minus-y", system=mutated).passed:
            tripped = "first-integral"
        if tripped is None:
            for g in ("s0", "s1", "s2", "s3", "s4"):
                if not check_symmetry("d4", g, "sampled", seed=seed, points=5, system=mutated).passed:
                    tripped = f"symmetry {g}"
                    break
        if tripped is None and not check_holomorphy("d4", system=mutated).passed:
            tripped = "holomorphy"
        out.append({"component": comp, "monomial": exps, "tripped": tripped})
    return out
