"""Exact sparse multivariate polynomials and rational functions over Q.

Polynomials live in a :class:`PolyRing`, an ordered table of symbol names.
Monomials are packed into a single Python integer: one 16-bit field per
symbol plus a leading field holding the total degree, so integer comparison
of packed monomials is graded-lexicographic order and monomial product is
integer addition.  Coefficients are ``gmpy2.mpq``.

Rational functions are never reduced (no multivariate gcd); equality is
decided by cross-multiplication and polynomiality by :func:`exact_divide`.
"""

from __future__ import annotations

import ast
import contextlib
import contextvars
import heapq
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

__all__ = [
    "Blowup",
    "DivByZero",
    "Diverges",
    "MultiPoly",
    "NotDivisible",
    "PolyRing",
    "RationalFunc",
    "SYMBOLS",
    "SymbolTableMismatch",
    "differentiate",
    "evaluate",
    "exact_divide",
    "jacobian_det",
    "param_limit",
    "poly_op",
    "rf_equal",
    "term_cap",
    "to_rational",
]

Scalar = Union[int, Fraction, "mpq"]

# Registered symbols, in the order that fixes lexicographic priority.
# "variable" marks dependent/independent variables, "parameter" everything else.
SYMBOLS: Dict[str, str] = {
    **{n: "variable" for n in ("x", "y", "z", "X", "Y", "Xp", "f0", "f1", "f2", "t", "T")},
    **{n: "parameter" for n in ("eta", "a", "phi", "c", "b", "db")},
    **{f"alpha{i}": "parameter" for i in range(5)},
    **{f"beta{i}": "parameter" for i in range(4)},
    **{f"A{i}": "parameter" for i in range(5)},
}
_ORDER = {name: i for i, name in enumerate(SYMBOLS)}

_W = 16
_MASK = (1 << _W) - 1
_MAXDEG = (1 << (_W - 1)) - 1

_TERM_CAP: contextvars.ContextVar[int] = contextvars.ContextVar("term_cap", default=2_000_000)


class Blowup(RuntimeError):
    """An intermediate polynomial exceeded the configured term cap."""


class SymbolTableMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    pass


class DivByZero(ZeroDivisionError):
    pass


class Diverges(ArithmeticError):
    pass


@contextlib.contextmanager
def term_cap(limit: int) -> Iterator[None]:
    """Temporarily set the term cap for the current context."""
    token = _TERM_CAP.set(int(limit))
    try:
        yield
    finally:
        _TERM_CAP.reset(token)


def _check_cap(n: int) -> None:
    cap = _TERM_CAP.get()
    if n > cap:
        raise Blowup(f"intermediate polynomial has {n} terms (cap {cap})")


def to_rational(value) -> mpq:
    """Convert int/Fraction/mpq/str to an exact rational.  Floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, type(mpq(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, float):
        raise TypeError("floating-point values are not exact rationals; pass a Fraction or str")
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


_MPQ = type(mpq(0))
_SCALARS = (int, Fraction, _MPQ)


class PolyRing:
    """An ordered symbol table; polynomials may only be combined within one ring."""

    __slots__ = ("names", "index", "_shift", "_unit", "_degshift", "_degunit", "_guard", "_zero", "_one")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbols in {names}")
        unknown = [n for n in names if n not in SYMBOLS]
        if unknown:
            raise ValueError(f"unregistered symbols: {unknown}")
        names = tuple(sorted(names, key=_ORDER.__getitem__))
        n = len(names)
        self.names = names
        self.index = {name: i for i, name in enumerate(names)}
        self._degshift = _W * n
        self._degunit = 1 << self._degshift
        self._shift = tuple(_W * (n - 1 - i) for i in range(n))
        self._unit = tuple((1 << s) | self._degunit for s in self._shift)
        guard = 1 << (self._degshift + _W - 1)
        for s in self._shift:
            guard |= 1 << (s + _W - 1)
        self._guard = guard
        self._zero = MultiPoly(self, {})
        self._one = MultiPoly(self, {0: mpq(1)})

    # -- identity -------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def variables(self) -> Tuple[str, ...]:
        return tuple(n for n in self.names if SYMBOLS[n] == "variable")

    def parameters(self) -> Tuple[str, ...]:
        return tuple(n for n in self.names if SYMBOLS[n] == "parameter")

    def extend(self, *names: str) -> "PolyRing":
        return PolyRing(self.names + tuple(n for n in names if n not in self.index))

    # -- monomials ------------------------------------------------------
    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != len(self.names):
            raise ValueError("exponent vector has wrong width")
        m = 0
        for e, u in zip(exps, self._unit):
            if e < 0 or e > _MAXDEG:
                raise ValueError(f"exponent {e} out of range")
            m += e * u
        if m >> self._degshift > _MAXDEG:
            raise OverflowError("total degree too large")
        return m

    def unpack(self, m: int) -> Tuple[int, ...]:
        return tuple((m >> s) & _MASK for s in self._shift)

    def degree_of(self, m: int) -> int:
        return m >> self._degshift

    def _divides(self, m1: int, m2: int) -> Optional[int]:
        """Return m2/m1 if the monomial m1 divides m2, else None."""
        d = (m2 | self._guard) - m1
        if d & self._guard != self._guard:
            return None
        return d ^ self._guard

    # -- constructors ---------------------------------------------------
    @property
    def zero(self) -> "MultiPoly":
        return self._zero

    @property
    def one(self) -> "MultiPoly":
        return self._one

    def const(self, value) -> "MultiPoly":
        c = to_rational(value)
        return MultiPoly(self, {0: c} if c else {})

    def gen(self, name: str) -> "MultiPoly":
        try:
            i = self.index[name]
        except KeyError:
            raise SymbolTableMismatch(f"{name!r} not in {self!r}") from None
        return MultiPoly(self, {self._unit[i]: mpq(1)})

    def gens(self, *names: str) -> Tuple["MultiPoly", ...]:
        return tuple(self.gen(n) for n in names)

    def from_terms(self, terms: Mapping[Tuple[int, ...], Scalar]) -> "MultiPoly":
        d = {}
        for exps, c in terms.items():
            c = to_rational(c)
            if c:
                m = self.pack(exps)
                d[m] = d.get(m, 0) + c
        return MultiPoly(self, {k: v for k, v in d.items() if v})

    def parse(self, text: str) -> Union["MultiPoly", "RationalFunc"]:
        """Parse an arithmetic expression in the ring's symbols.

        Accepts ``+ - * / **`` (``^`` is read as ``**``), integer literals,
        parentheses and symbol names.  Division yields a RationalFunc.
        """
        tree = ast.parse(text.replace("^", "**").replace("\n", " ").strip(), mode="eval")
        return _Parser(self).visit(tree.body)


class _Parser(ast.NodeVisitor):
    def __init__(self, ring: PolyRing):
        self.ring = ring

    def generic_visit(self, node):
        raise ValueError(f"unsupported syntax: {ast.dump(node)}")

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ValueError(f"only integer literals are allowed, got {node.value!r}")
        return self.ring.const(node.value)

    def visit_Name(self, node):
        return self.ring.gen(node.id)

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        return self.generic_visit(node)

    def visit_BinOp(self, node):
        left = self.visit(node.left)
        if isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ValueError("exponents must be integer literals")
            if sign < 0:
                return RationalFunc(left) ** (-exp.value)
            return left ** exp.value
        right = self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return RationalFunc(left) / right
        return self.generic_visit(node)


def _same_ring(a: PolyRing, b: PolyRing) -> None:
    if a is not b and a != b:
        raise SymbolTableMismatch(f"{a!r} vs {b!r}")


class MultiPoly:
    """Sparse polynomial: packed monomial -> nonzero mpq coefficient.

    Instances are treated as immutable.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Dict[int, mpq]):
        self.ring = ring
        self.terms = terms

    # -- inspection -----------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, mpq(0))

    def items(self) -> Iterator[Tuple[Tuple[int, ...], mpq]]:
        """(exponent vector, coefficient) pairs in descending grlex order."""
        for m in sorted(self.terms, reverse=True):
            yield self.ring.unpack(m), self.terms[m]

    def as_dict(self) -> Dict[Tuple[int, ...], mpq]:
        return dict(self.items())

    def leading_term(self) -> Tuple[Tuple[int, ...], mpq]:
        m = max(self.terms)
        return self.ring.unpack(m), self.terms[m]

    def total_degree(self, names: Optional[Iterable[str]] = None) -> int:
        """Total degree, optionally counting only the listed symbols."""
        if not self.terms:
            return -1
        if names is None:
            return max(self.terms) >> self.ring._degshift
        shifts = [self.ring._shift[self.ring.index[n]] for n in names if n in self.ring.index]
        return max(sum((m >> s) & _MASK for s in shifts) for m in self.terms)

    def degree(self, name: str) -> int:
        if not self.terms:
            return -1
        if name not in self.ring.index:
            return 0
        s = self.ring._shift[self.ring.index[name]]
        return max((m >> s) & _MASK for m in self.terms)

    def low_degree(self, name: str) -> int:
        if not self.terms:
            return -1
        if name not in self.ring.index:
            return 0
        s = self.ring._shift[self.ring.index[name]]
        return min((m >> s) & _MASK for m in self.terms)

    def symbols(self) -> Tuple[str, ...]:
        """Names of the symbols that actually occur."""
        acc = 0
        for m in self.terms:
            acc |= m
        return tuple(n for n, s in zip(self.ring.names, self.ring._shift) if (acc >> s) & _MASK)

    def coefficients_in(self, name: str) -> Dict[int, "MultiPoly"]:
        """Split into {k: coefficient of name**k}, coefficients free of ``name``."""
        i = self.ring.index[name]
        s, u = self.ring._shift[i], self.ring._unit[i]
        out: Dict[int, Dict[int, mpq]] = {}
        for m, c in self.terms.items():
            k = (m >> s) & _MASK
            out.setdefault(k, {})[m - k * u] = c
        return {k: MultiPoly(self.ring, d) for k, d in out.items()}

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> Optional["MultiPoly"]:
        if isinstance(other, MultiPoly):
            _same_ring(self.ring, other.ring)
            return other
        if isinstance(other, _SCALARS):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        if isinstance(other, RationalFunc):
            return RationalFunc(self) + other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = (self.terms, o.terms) if len(self.terms) >= len(o.terms) else (o.terms, self.terms)
        d = dict(a)
        for k, c in b.items():
            v = d.get(k)
            if v is None:
                d[k] = c
            else:
                v = v + c
                if v:
                    d[k] = v
                else:
                    del d[k]
        _check_cap(len(d))
        return MultiPoly(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {k: -c for k, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, RationalFunc):
            return RationalFunc(self) - other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "MultiPoly":
        c = to_rational(c)
        if not c:
            return self.ring.zero
        return MultiPoly(self.ring, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, RationalFunc):
            return RationalFunc(self) * other
        if isinstance(other, _SCALARS):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.terms, o.terms
        if not a or not b:
            return self.ring.zero
        if len(a) < len(b):
            a, b = b, a
        if (max(a) >> self.ring._degshift) + (max(b) >> self.ring._degshift) > _MAXDEG:
            raise OverflowError("total degree too large")
        if len(b) == 1:
            (mb, cb), = b.items()
            return MultiPoly(self.ring, {k + mb: c * cb for k, c in a.items()})
        res: Dict[int, mpq] = {}
        get = res.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                k = m1 + m2
                v = get(k)
                res[k] = c1 * c2 if v is None else v + c1 * c2
            if len(res) > _TERM_CAP.get():
                _check_cap(len(res))
        res = {k: v for k, v in res.items() if v}
        _check_cap(len(res))
        return MultiPoly(self.ring, res)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            c = to_rational(other)
            if not c:
                raise DivByZero("division by zero scalar")
            return self.scale(1 / c)
        return RationalFunc(self) / other

    def __rtruediv__(self, other):
        return RationalFunc(self.ring.const(other) if isinstance(other, _SCALARS) else other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise ValueError("negative power of a polynomial; use RationalFunc")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RationalFunc):
            return RationalFunc(self) == other
        if isinstance(other, _SCALARS):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.names, frozenset(self.terms.items())))

    # -- calculus / evaluation ------------------------------------------
    def diff(self, name: str) -> "MultiPoly":
        if name not in self.ring.index:
            if name in SYMBOLS:
                return self.ring.zero
            raise SymbolTableMismatch(f"{name!r} not registered")
        i = self.ring.index[name]
        s, u = self.ring._shift[i], self.ring._unit[i]
        out = {}
        for m, c in self.terms.items():
            e = (m >> s) & _MASK
            if e:
                out[m - u] = c * e
        return MultiPoly(self.ring, out)

    def evaluate(self, assignment: Mapping[str, Scalar]) -> mpq:
        ring = self.ring
        used = self.symbols()
        missing = [n for n in used if n not in assignment]
        if missing:
            raise KeyError(f"assignment does not cover {missing}")
        spec = [(ring._shift[ring.index[n]], to_rational(assignment[n])) for n in used]
        powers = [[mpq(1), v] for _, v in spec]
        total = mpq(0)
        for m, c in self.terms.items():
            acc = c
            for j, (s, v) in enumerate(spec):
                e = (m >> s) & _MASK
                if e:
                    pw = powers[j]
                    while len(pw) <= e:
                        pw.append(pw[-1] * v)
                    acc = acc * pw[e]
            total += acc
        return total

    def subs(self, mapping: Mapping[str, object], ring: Optional[PolyRing] = None):
        """Simultaneous substitution of symbols by polynomials / rational functions.

        Values must live in ``ring`` (default: this ring).  Unmapped symbols are
        carried over by name.  Returns a MultiPoly when every substituted value
        is polynomial, otherwise a RationalFunc.
        """
        (num,), den = subs_many([self], mapping, ring)
        if den is None:
            return num
        return RationalFunc(num, den)

    def embed(self, ring: PolyRing) -> "MultiPoly":
        return self.subs({}, ring)

    # -- printing -------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.ring.names, exps) if e
            )
            if not mono:
                parts.append(str(c))
                continue
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self})"


def _as_num_den(value, ring: PolyRing) -> Tuple[MultiPoly, Optional[MultiPoly]]:
    if isinstance(value, RationalFunc):
        _same_ring(value.num.ring, ring)
        if value.den.is_constant():
            return value.num.scale(1 / value.den.constant_value()), None
        return value.num, value.den
    if isinstance(value, MultiPoly):
        _same_ring(value.ring, ring)
        return value, None
    if isinstance(value, _SCALARS):
        return ring.const(value), None
    raise TypeError(f"cannot substitute a {type(value).__name__}")


def subs_many(
    polys: Sequence[MultiPoly], mapping: Mapping[str, object], ring: Optional[PolyRing] = None
) -> Tuple[Tuple[MultiPoly, ...], Optional[MultiPoly]]:
    """Substitute into several polynomials of one ring with a shared denominator.

    Returns ``(numerators, denominator)``; the denominator is ``None`` when all
    substituted values are polynomial.
    """
    if not polys:
        return (), None
    src = polys[0].ring
    for p in polys:
        _same_ring(p.ring, src)
    tgt = ring if ring is not None else src
    mapped = [(src._shift[src.index[n]], n) for n in src.names if n in mapping]
    carry = []
    for n in src.names:
        if n in mapping:
            continue
        if n in tgt.index:
            carry.append((src._shift[src.index[n]], tgt._unit[tgt.index[n]]))
        else:
            carry.append((src._shift[src.index[n]], None))
    values = [_as_num_den(mapping[n], tgt) for _, n in mapped]

    grouped = []
    maxexp = [0] * len(mapped)
    for p in polys:
        groups: Dict[Tuple[int, ...], Dict[int, mpq]] = {}
        for m, c in p.terms.items():
            key = tuple((m >> s) & _MASK for s, _ in mapped)
            tm = 0
            for s, u in carry:
                e = (m >> s) & _MASK
                if e:
                    if u is None:
                        raise SymbolTableMismatch(
                            f"symbol {src.names[src._shift.index(s)]!r} missing from target ring"
                        )
                    tm += e * u
            groups.setdefault(key, {})[tm] = c
            for j, e in enumerate(key):
                if e > maxexp[j]:
                    maxexp[j] = e
        grouped.append(groups)

    num_pows = [[tgt.one] for _ in mapped]
    den_pows = [[tgt.one] for _ in mapped]

    def npow(j, e):
        pw = num_pows[j]
        while len(pw) <= e:
            pw.append(pw[-1] * values[j][0])
        return pw[e]

    def dpow(j, e):
        pw = den_pows[j]
        while len(pw) <= e:
            pw.append(pw[-1] * values[j][1])
        return pw[e]

    outs = []
    for groups in grouped:
        acc = tgt.zero
        for key, d in groups.items():
            term = MultiPoly(tgt, d)
            for j, e in enumerate(key):
                if e:
                    term = term * npow(j, e)
                if values[j][1] is not None and maxexp[j] - e:
                    term = term * dpow(j, maxexp[j] - e)
            acc = acc + term
        outs.append(acc)

    den = None
    for j, (_, dv) in enumerate(values):
        if dv is not None and maxexp[j]:
            f = dpow(j, maxexp[j])
            den = f if den is None else den * f
    return tuple(outs), den


class RationalFunc:
    """Unreduced quotient num/den of two polynomials of one ring."""

    __slots__ = ("num", "den")
    __hash__ = None  # equality is by cross-multiplication

    def __init__(self, num, den=None):
        if isinstance(num, RationalFunc):
            if den is not None:
                raise TypeError("use division to combine rational functions")
            self.num, self.den = num.num, num.den
            return
        if not isinstance(num, MultiPoly):
            raise TypeError("numerator must be a MultiPoly")
        if den is None:
            den = num.ring.one
        elif isinstance(den, _SCALARS):
            den = num.ring.const(den)
        _same_ring(num.ring, den.ring)
        if den.is_zero():
            raise DivByZero("zero denominator")
        if den.is_constant() and den != 1:
            num, den = num.scale(1 / den.constant_value()), num.ring.one
        self.num, self.den = num, den

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def is_polynomial_form(self) -> bool:
        return self.den.is_constant()

    def _coerce(self, other) -> Optional["RationalFunc"]:
        if isinstance(other, RationalFunc):
            _same_ring(self.ring, other.ring)
            return other
        if isinstance(other, MultiPoly):
            _same_ring(self.ring, other.ring)
            return RationalFunc(other)
        if isinstance(other, _SCALARS):
            return RationalFunc(self.ring.const(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunc(self.num + o.num, self.den)
        if o.den.is_constant():
            return RationalFunc(self.num + o.num * self.den, self.den)
        if self.den.is_constant():
            return RationalFunc(self.num * o.den + o.num, o.den)
        return RationalFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise DivByZero("division by the zero rational function")
        return RationalFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.num.is_zero():
                raise DivByZero("negative power of zero")
            return RationalFunc(self.den ** (-n), self.num ** (-n))
        return RationalFunc(self.num ** n, self.den ** n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return rf_equal(self, o)

    def diff(self, name: str) -> "RationalFunc":
        dn = self.num.diff(name)
        if self.den.is_constant():
            return RationalFunc(dn, self.den)
        dd = self.den.diff(name)
        if dd.is_zero():
            return RationalFunc(dn, self.den)
        return RationalFunc(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, assignment: Mapping[str, Scalar]) -> mpq:
        d = self.den.evaluate(assignment)
        if not d:
            raise DivByZero("denominator vanishes at the point")
        return self.num.evaluate(assignment) / d

    def subs(self, mapping: Mapping[str, object], ring: Optional[PolyRing] = None) -> "RationalFunc":
        (n, d), _ = subs_many([self.num, self.den], mapping, ring)
        return RationalFunc(n, d)

    def embed(self, ring: PolyRing) -> "RationalFunc":
        return self.subs({}, ring)

    def as_poly(self) -> MultiPoly:
        """The polynomial equal to this function; raises NotDivisible otherwise."""
        return exact_divide(self.num, self.den)

    def symbols(self) -> Tuple[str, ...]:
        s = set(self.num.symbols()) | set(self.den.symbols())
        return tuple(n for n in self.ring.names if n in s)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunc({self})"


# -- module-level operations --------------------------------------------

Expr = Union[MultiPoly, RationalFunc]


def poly_op(kind: str, a: Expr, b=None) -> Expr:
    """Dispatch add/sub/mul/pow/scale by name."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "pow":
        if not isinstance(b, int):
            raise TypeError("pow needs an integer exponent")
        return a ** b
    if kind == "scale":
        return a * to_rational(b)
    raise ValueError(f"unknown poly_op kind {kind!r}")


def differentiate(e: Expr, name: str) -> Expr:
    return e.diff(name)


def evaluate(e: Expr, assignment: Mapping[str, Scalar]) -> mpq:
    return e.evaluate(assignment)


def exact_divide(n: MultiPoly, d: MultiPoly) -> MultiPoly:
    """Return q with n == q*d, or raise NotDivisible.

    Division runs in graded-lex order; a leading term of the running
    remainder that is not divisible by lt(d) proves d does not divide n.
    """
    _same_ring(n.ring, d.ring)
    if d.is_zero():
        raise DivByZero("division by the zero polynomial")
    ring = n.ring
    if n.is_zero():
        return ring.zero
    lm = max(d.terms)
    lc = d.terms[lm]
    if len(d.terms) == 1:
        out = {}
        for m, c in n.terms.items():
            q = ring._divides(lm, m)
            if q is None:
                raise NotDivisible(f"monomial divisor does not divide term {ring.unpack(m)}")
            out[q] = c / lc
        return MultiPoly(ring, out)
    rest = [(m, c) for m, c in d.terms.items() if m != lm]
    r = dict(n.terms)
    heap = [-m for m in r]
    heapq.heapify(heap)
    q: Dict[int, mpq] = {}
    cap = _TERM_CAP.get()
    while heap:
        m = -heapq.heappop(heap)
        c = r.pop(m, None)
        if c is None:
            continue
        qm = ring._divides(lm, m)
        if qm is None:
            raise NotDivisible(f"leading term {ring.unpack(m)} not divisible by {ring.unpack(lm)}")
        qc = c / lc
        q[qm] = qc
        for dm, dc in rest:
            k = qm + dm
            v = r.get(k)
            if v is None:
                r[k] = -qc * dc
                heapq.heappush(heap, -k)
            else:
                v = v - qc * dc
                if v:
                    r[k] = v
                else:
                    del r[k]
        if len(r) > cap or len(q) > cap:
            _check_cap(max(len(r), len(q)))
    return MultiPoly(ring, q)


def divides(d: MultiPoly, n: MultiPoly) -> bool:
    try:
        exact_divide(n, d)
    except NotDivisible:
        return False
    return True


def rf_equal(r1: Expr, r2: Expr) -> bool:
    """Exact equality of rational functions by cross-multiplication."""
    a, b = RationalFunc(r1), RationalFunc(r2)
    _same_ring(a.ring, b.ring)
    if a.den == b.den:
        return a.num == b.num
    return a.num * b.den == b.num * a.den


def param_limit(r: Expr, name: str, point: str) -> RationalFunc:
    """Limit of r as the symbol ``name`` tends to 0 or infinity.

    Compares the top (infinity) or bottom (zero) degrees in ``name`` of the
    numerator and denominator; raises Diverges when the limit is not finite.
    """
    r = RationalFunc(r)
    num, den = r.num, r.den
    if num.is_zero():
        return RationalFunc(r.ring.zero)
    cn, cd = num.coefficients_in(name), den.coefficients_in(name)
    if point == "infinity":
        kn, kd = max(cn), max(cd)
        if kn > kd:
            raise Diverges(f"degree {kn} in {name} over degree {kd}")
        if kn < kd:
            return RationalFunc(r.ring.zero)
    elif point == "zero":
        kn, kd = min(cn), min(cd)
        if kn < kd:
            raise Diverges(f"order {kn} in {name} over order {kd}")
        if kn > kd:
            return RationalFunc(r.ring.zero)
    else:
        raise ValueError(f"point must be 'zero' or 'infinity', got {point!r}")
    return RationalFunc(cn[kn], cd[kd])


def jacobian_det(components: Sequence[Expr], names: Sequence[str]) -> RationalFunc:
    """Determinant of the square Jacobian matrix d(components)/d(names)."""
    n = len(names)
    if len(components) != n:
        raise ValueError("Jacobian must be square")
    m = [[RationalFunc(c).diff(v) for v in names] for c in components]
    return _det(m)


def _det(m) -> RationalFunc:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        if m[0][j].num.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return RationalFunc(m[0][0].ring.zero)
    return total
