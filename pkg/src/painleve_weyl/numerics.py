"""Floating-point integration of the systems and trajectory-level cross-checks."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import MultiPoly, RationalFunc, to_rational
from . import systems
from .birational import Indeterminate
from .systems.catalog import SystemDef

__all__ = [
    "CompiledRational",
    "ImmediateSingularity",
    "IntegrationSpec",
    "NumericField",
    "Trajectory",
    "energy_balance",
    "healthy_spec",
    "integrate",
    "integrate_field",
    "numeric_symmetry_check",
    "residual",
    "track_invariant",
    "write_csv",
]

Field = Callable[[float, np.ndarray], np.ndarray]


class ImmediateSingularity(ValueError):
    """The coefficient function b(t) is singular at the initial time."""


# -- compiled evaluation ------------------------------------------------------


def _exact(v) -> object:
    if isinstance(v, float):
        return Fraction(v)
    return to_rational(v)


class _CompiledPolys:
    """Several polynomials in the same symbols, evaluated together in floats."""

    def __init__(self, polys: Sequence[MultiPoly], names: Sequence[str]):
        ring = polys[0].ring
        extra = set().union(*(set(p.symbols()) for p in polys)) - set(names)
        if extra:
            raise ValueError(f"unassigned symbols {sorted(extra)}")
        idx = [ring.index[n] if n in ring else None for n in names]
        rows: Dict[Tuple[int, ...], np.ndarray] = {}
        for k, p in enumerate(polys):
            for exps, c in p.items():
                key = tuple(exps[i] if i is not None else 0 for i in idx)
                row = rows.setdefault(key, np.zeros(len(polys)))
                row[k] += float(c)
        keys = sorted(rows)
        self.exps = np.array(keys, dtype=float).reshape(len(keys), len(names))
        self.coeffs = np.array([rows[k] for k in keys]).reshape(len(keys), len(polys))
        self.maxexp = int(self.exps.max()) if self.exps.size else 0

    def __call__(self, values: np.ndarray) -> np.ndarray:
        if not len(self.exps):
            return np.zeros(self.coeffs.shape[1])
        mono = np.prod(np.power(values, self.exps), axis=1)
        return mono @ self.coeffs


class CompiledRational:
    """Float evaluator for a tuple of rational functions in the given symbols."""

    def __init__(self, exprs: Sequence[Union[MultiPoly, RationalFunc]], names: Sequence[str]):
        exprs = [RationalFunc(e) for e in exprs]
        self.names = tuple(names)
        self._num = _CompiledPolys([e.num for e in exprs], names)
        self._den = _CompiledPolys([e.den for e in exprs], names)

    def __call__(self, values: Sequence[float]) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        return self._num(v) / self._den(v)


class NumericField:
    """dv/dt of a system with numeric parameters, as f(t, state)."""

    def __init__(self, sysdef: SystemDef, values: Mapping[str, float]):
        ring = sysdef.ring
        mapping = {k: _exact(v) for k, v in values.items() if k in ring}
        polys = [p.subs(mapping) for p in sysdef.polynomial_part]
        pre = sysdef.prefactor.subs(mapping) if mapping else sysdef.prefactor
        time = sysdef.weyl_type.time
        self.variables = sysdef.variables
        names = tuple(self.variables) + ((time,) if time else ())
        self._poly = _CompiledPolys(polys, names)
        self._pre = CompiledRational([pre], (time,) if time else ())
        self._has_t = bool(time)
        self.prefactor_rf = pre

    def prefactor(self, t: float) -> float:
        return float(self._pre([t] if self._has_t else [])[0])

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        vals = np.append(y, t) if self._has_t else np.asarray(y, dtype=float)
        return self.prefactor(t) * self._poly(vals)


# -- Dormand-Prince 5(4) -------------------------------------------------------

_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_E = np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Continuous extension of order 4: y(t + s h) = y + h K^T P [s, s^2, s^3, s^4].
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0


@dataclass
class Trajectory:
    """Accepted step endpoints plus per-step stage data for dense output.

    Step j runs from ``samples[j]`` to ``samples[j+1]``; the interpolant is
    anchored at the stored sample, so editing a sample is visible to
    :func:`residual`.
    """

    samples: np.ndarray
    stages: List[np.ndarray] = field(default_factory=list)
    events: List[Dict[str, object]] = field(default_factory=list)
    accepted: int = 0
    rejected: int = 0
    warnings: List[str] = field(default_factory=list)
    spec: Optional["IntegrationSpec"] = None

    @property
    def t(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def states(self) -> np.ndarray:
        return self.samples[:, 1:]

    @property
    def t_end(self) -> float:
        return float(self.samples[-1, 0])

    def __call__(self, t: Union[float, np.ndarray]) -> np.ndarray:
        """Dense output at time(s) t within the integrated range."""
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        times = self.t
        out = np.empty((len(ts), self.samples.shape[1] - 1))
        lo, hi = min(times[0], times[-1]), max(times[0], times[-1])
        for n, tv in enumerate(ts):
            if tv < lo - 1e-12 or tv > hi + 1e-12:
                raise ValueError(f"t={tv} outside the trajectory")
            if len(times) == 1:
                out[n] = self.states[0]
                continue
            if times[-1] >= times[0]:
                j = int(np.clip(np.searchsorted(times, tv, side="right") - 1, 0, len(times) - 2))
            else:
                j = int(np.clip(np.searchsorted(-times, -tv, side="right") - 1, 0, len(times) - 2))
            h = times[j + 1] - times[j]
            s = (tv - times[j]) / h
            q = _P @ np.array([s, s * s, s ** 3, s ** 4])
            out[n] = self.states[j] + h * (q @ self.stages[j])
        return out[0] if np.ndim(t) == 0 else out


def _initial_step(f: Field, t0, y0, f0, direction, rtol, atol) -> float:
    scale = atol + rtol * np.abs(y0)
    d0 = np.linalg.norm(y0 / scale) / math.sqrt(len(y0))
    d1 = np.linalg.norm(f0 / scale) / math.sqrt(len(y0))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = f(t0 + direction * h0, y1)
    d2 = np.linalg.norm((f1 - f0) / scale) / math.sqrt(len(y0)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def integrate_field(
    f: Field,
    t0: float,
    t1: float,
    y0: Sequence[float],
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    max_magnitude: float = 1e8,
    max_steps: int = 200_000,
) -> Trajectory:
    """Adaptive Dormand-Prince 5(4) from t0 to t1.

    Stops early with a ``pole`` event when the state leaves the ball of
    radius ``max_magnitude`` (or stops being finite) and with a
    ``step-underflow`` event when the step size collapses.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    y = np.asarray(y0, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("initial state is not finite")
    samples = [np.concatenate(([t0], y))]
    traj = Trajectory(np.array(samples))
    if t1 == t0:
        return traj
    direction = 1.0 if t1 > t0 else -1.0
    t = t0
    k1 = f(t, y)
    h = _initial_step(f, t0, y, k1, direction, rel_tol, abs_tol)
    stages_out: List[np.ndarray] = []
    fac_max = FAC_MAX
    K = np.empty((7, len(y)))
    while direction * (t1 - t) > 0:
        if traj.accepted + traj.rejected >= max_steps:
            traj.events.append({"kind": "step-underflow", "t": float(t), "detail": "step budget exhausted"})
            break
        h_min = 16 * np.spacing(max(abs(t), 1.0))
        if h < h_min:
            traj.events.append({"kind": "step-underflow", "t": float(t)})
            break
        h = min(h, abs(t1 - t))
        hs = direction * h
        K[0] = k1
        with np.errstate(all="ignore"):
            for s in range(1, 7):
                K[s] = f(t + _C[s] * hs, y + hs * (np.asarray(_A[s]) @ K[:s]))
            y_new = y + hs * (_B @ K)
            err_vec = hs * (_E @ K)
            scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
        if not np.isfinite(err) or not np.all(np.isfinite(y_new)):
            traj.rejected += 1
            h *= FAC_MIN
            fac_max = 1.0
            if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > max_magnitude:
                traj.events.append({"kind": "pole", "t": float(t)})
                break
            continue
        if err <= 1.0:
            t = t1 if h == abs(t1 - t) else t + hs
            stages_out.append(K.copy())
            y = y_new
            k1 = K[6]
            samples.append(np.concatenate(([t], y)))
            traj.accepted += 1
            fac = FAC_MAX if err == 0 else min(fac_max, max(FAC_MIN, SAFETY * err ** -0.2))
            h *= fac
            fac_max = FAC_MAX
            if np.max(np.abs(y)) > max_magnitude:
                traj.events.append({"kind": "pole", "t": float(t)})
                break
        else:
            traj.rejected += 1
            h *= max(FAC_MIN, SAFETY * err ** -0.2)
            fac_max = 1.0
    traj.samples = np.array(samples)
    traj.stages = stages_out
    return traj


# -- specs ---------------------------------------------------------------------


@dataclass(frozen=True)
class IntegrationSpec:
    weyl_type: str
    params: Mapping[str, float]
    b: str
    t0: float
    t1: float
    initial_state: Tuple[float, ...]
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_magnitude: float = 1e8

    def with_(self, **changes) -> "IntegrationSpec":
        return replace(self, **changes)


def healthy_spec() -> IntegrationSpec:
    """The shipped D4(1) reference run."""
    return IntegrationSpec(
        weyl_type="d4",
        params={"alpha0": 0.2, "alpha1": 0.2, "alpha2": 0.1, "alpha3": 0.2, "alpha4": 0.2, "eta": 2.0},
        b="pvi-form",
        t0=2.1,
        t1=2.5,
        initial_state=(0.3, 0.4, 0.5),
    )


def _system_for(spec: IntegrationSpec) -> SystemDef:
    wt = systems.get_type(spec.weyl_type)
    systems.check_normalization(wt, spec.params, tol=1e-14)
    return systems.build_vector_field(wt, b=spec.b if wt.uses_b else "generic")


def _b_roots(spec: IntegrationSpec) -> List[float]:
    if spec.b != "pvi-form":
        return []
    eta = float(spec.params["eta"])
    return [0.0, 1.0, -eta, 1.0 - eta]


def numeric_field(spec: IntegrationSpec) -> NumericField:
    sysdef = _system_for(spec)
    wt = sysdef.weyl_type
    values = dict(spec.params)
    if wt.uses_b and spec.b == "generic" and "b" not in values:
        raise ValueError("a generic b needs a numeric value for 'b' in params")
    return NumericField(sysdef, values)


def integrate(spec: IntegrationSpec) -> Trajectory:
    f = numeric_field(spec)
    for r in _b_roots(spec):
        if abs(spec.t0 - r) < 1e-12:
            raise ImmediateSingularity(f"b(t) is singular at t0={spec.t0}")
    if not math.isfinite(f.prefactor(spec.t0)):
        raise ImmediateSingularity(f"the field prefactor is singular at t0={spec.t0}")
    traj = integrate_field(f, spec.t0, spec.t1, spec.initial_state, spec.rel_tol, spec.abs_tol,
                           spec.max_magnitude)
    lo, hi = sorted((spec.t0, spec.t1))
    for r in _b_roots(spec):
        if lo < r < hi:
            traj.warnings.append(f"b(t) is singular at t={r} inside the interval")
    traj.spec = spec
    return traj


# -- cross-checks ---------------------------------------------------------------


def residual(f: Field, traj: Trajectory, points: int = 401) -> Dict[str, float]:
    """|5-point finite-difference derivative - field| on a uniform grid.

    Returns the max and mean (over interior grid points) of the max-norm
    residual and the time where the max occurs.
    """
    if len(traj.samples) < 2:
        if len(traj.samples) == 1:
            return {"max": 0.0, "mean": 0.0, "t_max": float(traj.t[0])}
        raise ValueError("too few samples")
    t0, t1 = float(traj.t[0]), traj.t_end
    grid = np.linspace(t0, t1, points)
    h = grid[1] - grid[0]
    ys = traj(grid)
    d = (-ys[4:] + 8 * ys[3:-1] - 8 * ys[1:-3] + ys[:-4]) / (12 * h)
    res = np.array([np.max(np.abs(d[k] - f(grid[k + 2], ys[k + 2]))) for k in range(len(d))])
    k = int(np.argmax(res))
    return {"max": float(res[k]), "mean": float(np.mean(res)), "t_max": float(grid[k + 2])}


def _map_evaluator(m, spec_values: Mapping[str, float], wt) -> CompiledRational:
    ring = m.ring
    mapping = {k: _exact(v) for k, v in spec_values.items() if k in ring and k not in m.variables}
    images = [im.subs(mapping) for im in m.images]
    return CompiledRational(images, m.variables + ((wt.time,) if wt.time else ()))


def _mapped(ev: CompiledRational, values) -> np.ndarray:
    with np.errstate(all="ignore"):
        out = ev(values)
    if not np.all(np.isfinite(out)):
        raise Indeterminate(f"map denominator vanishes at {list(values)}")
    return out


def _apply_params(m, params: Mapping[str, float]) -> Dict[str, float]:
    act = m.params
    vec = np.array([float(params[p]) for p in act.names])
    mat = np.array([[float(a) for a in row] for row in act.matrix])
    off = np.array([float(o) for o in act.offset])
    new = dict(params)
    new.update(zip(act.names, mat @ vec + off))
    return new


def numeric_symmetry_check(weyl_type, i, spec: IntegrationSpec, *, twice: bool = False,
                           param_action=None) -> float:
    """Max deviation between s_i applied to a trajectory and the trajectory of
    the transformed initial data under the transformed parameters.

    With ``twice`` the map is applied two times and compared with the
    original trajectory.
    """
    wt = systems.get_type(weyl_type)
    m = systems.generator(wt, i)
    if param_action is not None:
        m = m.with_params(param_action)
    traj = integrate(spec)
    ev = _map_evaluator(m, spec.params, wt)
    params2 = _apply_params(m, spec.params)
    with_t = (lambda row: list(row[1:]) + [row[0]]) if wt.time else (lambda row: list(row[1:]))
    if twice:
        ev2 = _map_evaluator(m, params2, wt)
        dev = 0.0
        for row in traj.samples:
            first = _mapped(ev, with_t(row))
            second = _mapped(ev2, list(first) + ([row[0]] if wt.time else []))
            dev = max(dev, float(np.max(np.abs(second - row[1:]))))
        return dev
    y0 = _mapped(ev, ([*spec.initial_state, spec.t0]) if wt.time else list(spec.initial_state))
    spec2 = spec.with_(params=params2, initial_state=tuple(float(v) for v in y0))
    traj2 = integrate(spec2)
    end = min(traj.t_end, traj2.t_end) if spec.t1 >= spec.t0 else max(traj.t_end, traj2.t_end)
    dev = 0.0
    for row in traj.samples:
        if (row[0] - end) * (1 if spec.t1 >= spec.t0 else -1) > 0:
            break
        mapped = _mapped(ev, with_t(row))
        dev = max(dev, float(np.max(np.abs(mapped - traj2(row[0])))))
    return dev


def _x_minus_y_field(spec: IntegrationSpec) -> Field:
    """du/dt = (b/2 eta)(u)(u+1)(u+1-eta)(u-eta) for u = x - y."""
    eta = float(spec.params["eta"])
    f = numeric_field(spec)

    def g(t, u):
        v = u[0]
        return np.array([f.prefactor(t) * v * (v + 1) * (v + 1 - eta) * (v - eta)])

    return g


def track_invariant(traj: Trajectory, expr: Union[str, RationalFunc, MultiPoly] = "x-minus-y-flow") -> float:
    """Drift of an invariant along a trajectory.

    ``x-minus-y-flow`` integrates the scalar equation for u = x - y next to
    the trajectory and returns max |x - y - u|; a rational function returns
    max |expr| over the samples (params taken from the trajectory's spec).
    """
    spec = traj.spec
    if expr == "x-minus-y-flow":
        if spec is None or systems.get_type(spec.weyl_type).family not in ("d4", "degenerate"):
            raise ValueError("x-minus-y-flow needs a D4-family trajectory with its spec")
        x0, y0 = spec.initial_state[0], spec.initial_state[1]
        u = integrate_field(_x_minus_y_field(spec), spec.t0, traj.t_end, [x0 - y0], spec.rel_tol, spec.abs_tol)
        diff = traj.states[:, 0] - traj.states[:, 1] - u(traj.t)[:, 0]
        return float(np.max(np.abs(diff)))
    if isinstance(expr, str):
        raise ValueError(f"unknown invariant {expr!r}")
    wt = systems.get_type(spec.weyl_type)
    rf = RationalFunc(expr)
    mapping = {k: _exact(v) for k, v in spec.params.items() if k in rf.ring}
    rf = rf.subs(mapping)
    names = wt.variables + ((wt.time,) if wt.time else ())
    ev = CompiledRational([rf], names)
    vals = [abs(float(ev(list(row[1:]) + ([row[0]] if wt.time else []))[0])) for row in traj.samples]
    return max(vals)


def energy_balance(spec: IntegrationSpec, points: int = 401) -> float:
    """For the reduced x=y system: max |dH/dt (finite differences) - dH/dt (explicit)|.

    H depends on t only through b(t), so the explicit derivative is
    dH/db * b'(t).
    """
    if systems.get_type(spec.weyl_type).key != "d4-2d" or spec.b != "pvi-form":
        raise ValueError("energy balance is defined for d4-2d with b = pvi-form")
    traj = integrate(spec)
    H = systems.hamiltonian("H-x-eq-y").expression
    ring = H.ring
    mapping = {k: _exact(v) for k, v in spec.params.items() if k in ring}
    b = systems.b_specialization("pvi-form", ring)
    Ht = H.diff("b") * b.diff("t")
    H_t = H.subs(dict(mapping, b=b.subs(mapping)))
    Ht_t = Ht.subs(dict(mapping, b=b.subs(mapping)))
    names = ("X", "Y", "t")
    h_ev = CompiledRational([H_t, Ht_t], names)
    grid = np.linspace(float(traj.t[0]), traj.t_end, points)
    step = grid[1] - grid[0]
    ys = traj(grid)
    hv = np.array([h_ev([y[0], y[1], t])[0] for y, t in zip(ys, grid)])
    d = (-hv[4:] + 8 * hv[3:-1] - 8 * hv[1:-3] + hv[:-4]) / (12 * step)
    explicit = np.array([h_ev([ys[k][0], ys[k][1], grid[k]])[1] for k in range(2, len(grid) - 2)])
    return float(np.max(np.abs(d - explicit)))


def write_csv(traj: Trajectory, out=None, names: Sequence[str] = ("x", "y", "z")) -> str:
    """CSV with header ``t,<variables>`` and %.17g numbers."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", *names])
    for row in traj.samples:
        w.writerow(["%.17g" % v for v in row])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
