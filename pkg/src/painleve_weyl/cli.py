"""Command-line entry point: ``pwl verify | integrate | orbit | dump``.

Exit codes: 0 everything passed, 1 a check failed (or a map was
indeterminate), 2 bad usage. ``PWL_SEED`` in the environment overrides
``--seed``. JSON reports are validated against the schemas shipped in
``painleve_weyl/schemas`` before they are written.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence

import jsonschema

from . import numerics, systems, verify
from .algebra import term_cap, to_rational
from .birational import Indeterminate, SampledWord

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MIN_TERM_CAP = 1000


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    text = resources.files("painleve_weyl.schemas").joinpath(name).read_text()
    return json.loads(text)


def _emit(payload, schema: str, path: Optional[str]) -> None:
    jsonschema.validate(payload, load_schema(schema))
    text = json.dumps(payload, indent=2, default=str) + "\n"
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _types(arg: str) -> List[systems.WeylType]:
    if arg == "all":
        return list(systems.TYPES.values())
    try:
        return [systems.get_type(t) for t in arg.split(",")]
    except systems.UnknownWeylType as exc:
        raise UsageError(exc.args[0]) from None


def _parse_params(text: Optional[str], wt: systems.WeylType, exact: bool) -> Dict[str, object]:
    """Values in the type's parameter order, then optional ``name=value`` extras."""
    if not text:
        return {}
    conv = (lambda s: Fraction(s.strip())) if exact else (lambda s: float(Fraction(s.strip())))
    items = [s for s in text.replace(";", ",").split(",") if s.strip()]
    out: Dict[str, object] = {}
    named = [s for s in items if "=" in s]
    positional = [s for s in items if "=" not in s]
    if any("=" in s for s in items[:len(positional)]):
        raise UsageError("positional parameters must come before named ones")
    try:
        if positional:
            if len(positional) != len(wt.params):
                raise UsageError(f"expected {len(wt.params)} positional values for {', '.join(wt.params)}")
            out = {p: conv(v) for p, v in zip(wt.params, positional)}
        for s in named:
            k, v = s.split("=", 1)
            out[k.strip()] = conv(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad parameter list {text!r}: {exc}") from None
    unknown = set(out) - set(wt.ring_names)
    if unknown:
        raise UsageError(f"unknown parameters for {wt.tag}: {', '.join(sorted(unknown))}")
    return out


def _parse_state(text: Optional[str], n: int, exact: bool) -> Optional[tuple]:
    if text is None:
        return None
    conv = Fraction if exact else (lambda s: float(Fraction(s)))
    try:
        vals = tuple(conv(s.strip()) for s in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad state {text!r}: {exc}") from None
    if len(vals) != n:
        raise UsageError(f"state needs {n} components")
    return vals


# -- subcommands -----------------------------------------------------------------


def cmd_verify(args) -> int:
    types = _types(args.type)
    checks = list(verify.CHECKS) if "all" in args.check else []
    for c in args.check:
        for name in c.split(","):
            if name != "all":
                if name not in verify.CHECKS:
                    raise UsageError(f"unknown check {name!r}; choose from {', '.join(verify.CHECKS)} or all")
                checks.append(name)
    checks = list(dict.fromkeys(checks))
    with term_cap(args.term_cap):
        reports = verify.run_suite(types, checks, args.mode, seed=args.seed)
    payload = [r.to_dict() for r in reports]
    _emit(json.loads(json.dumps(payload, default=str)), "report.schema.json", args.json)
    for r in reports:
        print(f"{r.status:7s} {r.check_id}", file=sys.stderr)
    ok = all(r.status in ("pass", "skip") for r in reports)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_integrate(args) -> int:
    wt = systems.get_type(args.type)
    params = _parse_params(args.params, wt, exact=False)
    state = _parse_state(args.state, len(wt.variables), exact=False)
    if state is None:
        raise UsageError("--state is required")
    spec = numerics.IntegrationSpec(wt.key, params, args.b, args.t0, args.t1, state,
                                    rel_tol=args.rtol, abs_tol=args.atol, max_magnitude=args.max_magnitude)
    try:
        traj = numerics.integrate(spec)
    except systems.NormalizationError as exc:
        raise UsageError(str(exc)) from None
    except numerics.ImmediateSingularity as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.csv:
        if args.csv == "-":
            numerics.write_csv(traj, sys.stdout, wt.variables)
        else:
            with open(args.csv, "w") as fh:
                numerics.write_csv(traj, fh, wt.variables)
    res = None
    if len(traj.samples) >= 5:
        res = numerics.residual(numerics.numeric_field(spec), traj)
    summary = {
        "weyl_type": wt.tag,
        "t0": spec.t0,
        "t1": spec.t1,
        "t_end": traj.t_end,
        "samples": len(traj.samples),
        "accepted": traj.accepted,
        "rejected": traj.rejected,
        "events": traj.events,
        "warnings": traj.warnings,
        "residual": res,
    }
    _emit(summary, "integrate.schema.json", None if args.csv == "-" else args.json)
    return EXIT_OK


def _fmt(v) -> str:
    q = to_rational(v)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cmd_orbit(args) -> int:
    wt = systems.get_type(args.type)
    tokens = args.word.split()
    if not tokens:
        raise UsageError("empty word")
    maps = []
    for tok in tokens:
        if tok not in wt.generator_names:
            raise UsageError(f"{tok!r} is not a generator of {wt.tag}; choose from {', '.join(wt.generator_names)}")
        maps.append(systems.generator(wt, tok))
    word = SampledWord(tuple(maps))
    act = word.params
    params = _parse_params(args.params, wt, exact=True)
    state = _parse_state(args.state, len(wt.variables), exact=True)
    out: Dict[str, object] = {"type": wt.tag, "word": word.name}
    if params and all(p in params for p in act.names):
        if wt.residual(params) != 0:
            out["warning"] = f"parameters violate {systems.normalization_text(wt)}"
        out["params"] = {k: _fmt(v) for k, v in act.apply(params).items()}
    else:
        sym = act.symbolic(wt.ring)
        if params:
            sym = {k: v.subs({p: to_rational(x) for p, x in params.items()}) for k, v in sym.items()}
        out["params"] = {k: str(v) for k, v in sym.items()}
    status = EXIT_OK
    if state is not None:
        try:
            new_state, _ = word(state, params)
            out["state"] = [_fmt(v) for v in new_state]
        except Indeterminate as exc:
            out["state"] = None
            out["error"] = str(exc)
            status = EXIT_FAIL
        except Exception as exc:  # missing symbols in the images
            raise UsageError(f"cannot evaluate the state (pass t=..., eta=... in --params): {exc}") from None
    print(json.dumps(out, indent=2))
    return status


def cmd_dump(args) -> int:
    sys.stdout.write(systems.dump(systems.get_type(args.type)))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def _term_cap(text: str) -> int:
    v = int(text)
    if v < MIN_TERM_CAP:
        raise argparse.ArgumentTypeError(f"term cap must be at least {MIN_TERM_CAP}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pwl", description="Exact and numeric checks of Painleve-type systems.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification checks")
    v.add_argument("--type", default="all", help="Weyl type key/tag, comma list, or all")
    v.add_argument("--check", nargs="+", default=["all"], help="check names or all")
    v.add_argument("--mode", choices=("symbolic", "sampled", "auto"), default="sampled")
    v.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    v.add_argument("--term-cap", type=_term_cap, default=2_000_000)
    v.add_argument("--json", metavar="PATH", help="write the JSON report here (default stdout)")
    v.set_defaults(func=cmd_verify)

    it = sub.add_parser("integrate", help="integrate a system numerically")
    it.add_argument("--type", default="d4")
    it.add_argument("--params", required=True, help="name=value,... or values in parameter order")
    it.add_argument("--b", default="pvi-form", help="b specialization (pvi-form, or generic with b=... in --params)")
    it.add_argument("--t0", type=float, required=True)
    it.add_argument("--t1", type=float, required=True)
    it.add_argument("--state", required=True, help="comma-separated initial state")
    it.add_argument("--rtol", type=float, default=1e-10)
    it.add_argument("--atol", type=float, default=1e-12)
    it.add_argument("--max-magnitude", type=float, default=1e8)
    it.add_argument("--csv", metavar="PATH", help="write the trajectory as CSV ('-' for stdout)")
    it.add_argument("--json", metavar="PATH", help="write the JSON summary here (default stdout)")
    it.set_defaults(func=cmd_integrate)

    o = sub.add_parser("orbit", help="apply a word of generators exactly")
    o.add_argument("--type", required=True)
    o.add_argument("--word", required=True, help='e.g. "s0 s2 s1"')
    o.add_argument("--params", help="exact rationals, name=value,... or values in parameter order")
    o.add_argument("--state", help="exact initial state")
    o.set_defaults(func=cmd_orbit)

    d = sub.add_parser("dump", help="monomial listing of a system")
    d.add_argument("--type", required=True)
    d.set_defaults(func=cmd_dump)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    env_seed = os.environ.get("PWL_SEED")
    if env_seed is not None and hasattr(args, "seed"):
        try:
            args.seed = int(env_seed)
        except ValueError:
            print(f"pwl: PWL_SEED must be an integer, got {env_seed!r}", file=sys.stderr)
            return EXIT_USAGE
        if args.seed < 0:
            print("pwl: seed must be non-negative", file=sys.stderr)
            return EXIT_USAGE
    try:
        if hasattr(args, "type") and args.command != "verify":
            systems.get_type(args.type)
        return args.func(args)
    except (UsageError, systems.UnknownWeylType) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"pwl: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
