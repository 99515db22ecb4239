"""STL* formulas: AST, parser, pretty-printer and static analyses.

Grammar (tightest binding first: ``!``, ``*( )``, ``F``, ``G``; then ``U``,
right-associative; then ``&&``; then ``||``; then ``->``)::

    formula  := implies
    implies  := or [ "->" implies ]
    or       := and { "||" and }
    and      := until { "&&" until }
    until    := unary [ "U" interval until ]
    unary    := "!" unary | "*(" formula ")" | "F" interval unary
              | "G" interval unary | "(" formula ")" | atom | "true" | "false"
    interval := "[" number "," number "]"
    atom     := linexpr ("<" | "<=" | ">" | ">=") linexpr
    linexpr  := [ "-" ] term { ("+" | "-") term }
    term     := number | [number] ident [ "*" ]

A frozen variable is written with the star glued to the name (``m1*``).
"""

from __future__ import annotations

import enum
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence, Union


class FormulaError(ValueError):
    """Base class for errors raised while reading a formula."""


class ParseError(FormulaError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class UnknownVariable(ParseError):
    pass


class EqualityUnsupported(ParseError):
    pass


class IntervalError(ParseError):
    pass


class BoundaryComparatorWarning(UserWarning):
    """Emitted when ``<=``/``>=`` is read as its strict counterpart."""


class SignalSchema:
    """Ordered, unique variable names of a signal."""

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if not names:
            raise ValueError("schema needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in schema: {names}")
        for n in names:
            if not _IDENT.fullmatch(n) or n in KEYWORDS:
                raise ValueError(f"invalid variable name {n!r}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    @property
    def order(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SignalSchema) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"SignalSchema({list(self.names)!r})"


class Cmp(enum.Enum):
    LT = "<"
    GT = ">"


@dataclass(frozen=True)
class LinearPredicate:
    """``sum a_i x_i + sum b_i x_i* cmp bound`` with variables given by schema index."""

    plain: tuple[tuple[int, float], ...]
    frozen: tuple[tuple[int, float], ...]
    bound: float
    cmp: Cmp

    def __post_init__(self):
        plain = tuple(sorted((int(i), float(c)) for i, c in self.plain if c != 0.0))
        frozen = tuple(sorted((int(i), float(c)) for i, c in self.frozen if c != 0.0))
        if not plain and not frozen:
            raise ValueError("linear predicate needs at least one nonzero coefficient")
        object.__setattr__(self, "plain", plain)
        object.__setattr__(self, "frozen", frozen)
        object.__setattr__(self, "bound", float(self.bound) + 0.0)

    @classmethod
    def make(cls, plain: Mapping[int, float], frozen: Mapping[int, float], bound: float,
             cmp: Cmp | str) -> "LinearPredicate":
        return cls(tuple(plain.items()), tuple(frozen.items()), bound, Cmp(cmp))

    @property
    def plain_coeffs(self) -> dict[int, float]:
        return dict(self.plain)

    @property
    def frozen_coeffs(self) -> dict[int, float]:
        return dict(self.frozen)

    def variables(self) -> set[int]:
        return {i for i, _ in self.plain} | {i for i, _ in self.frozen}

    def lhs(self, now: Sequence[float], then: Sequence[float]) -> float:
        return sum(c * now[i] for i, c in self.plain) + sum(c * then[i] for i, c in self.frozen)

    def evaluate(self, now: Sequence[float], then: Sequence[float]) -> bool:
        v = self.lhs(now, then)
        return v < self.bound if self.cmp is Cmp.LT else v > self.bound

    def negated(self) -> "LinearPredicate":
        """Opposite strict comparison (equal up to the boundary line)."""
        return LinearPredicate(self.plain, self.frozen, self.bound, Cmp.GT if self.cmp is Cmp.LT else Cmp.LT)


# -- AST -----------------------------------------------------------------------------


class Formula:
    """Base class of AST nodes.  Nodes are immutable and compare structurally."""

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def walk(self) -> Iterator["Formula"]:
        """Post-order traversal."""
        for c in self.children():
            yield from c.walk()
        yield self


@dataclass(frozen=True)
class Atomic(Formula):
    pred: LinearPredicate


@dataclass(frozen=True)
class TrueF(Formula):
    pass


TRUE = TrueF()


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


def _check_interval(lo, hi) -> tuple[Fraction, Fraction]:
    lo, hi = Fraction(lo), Fraction(hi)
    if lo < 0 or hi <= lo:
        raise IntervalError(f"temporal interval [{lo}, {hi}] must satisfy 0 <= lo < hi")
    return lo, hi


@dataclass(frozen=True)
class Until(Formula):
    lo: Fraction
    hi: Fraction
    left: Formula
    right: Formula

    def __post_init__(self):
        lo, hi = _check_interval(self.lo, self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Eventually(Formula):
    lo: Fraction
    hi: Fraction
    child: Formula

    def __post_init__(self):
        lo, hi = _check_interval(self.lo, self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Globally(Formula):
    lo: Fraction
    hi: Fraction
    child: Formula

    def __post_init__(self):
        lo, hi = _check_interval(self.lo, self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Freeze(Formula):
    child: Formula

    def children(self):
        return (self.child,)


CORE_KINDS = (Atomic, TrueF, Not, Or, Until, Freeze)


# -- analyses -------------------------------------------------------------------------


def required_length(f: Formula) -> Fraction:
    """Signal length needed to evaluate ``f`` at time 0."""
    if isinstance(f, (Atomic, TrueF)):
        return Fraction(0)
    if isinstance(f, (Not, Freeze)):
        return required_length(f.child)
    if isinstance(f, (Or, And, Implies)):
        return max(required_length(f.left), required_length(f.right))
    if isinstance(f, Until):
        return max(required_length(f.left), required_length(f.right)) + f.hi
    if isinstance(f, (Eventually, Globally)):
        return required_length(f.child) + f.hi
    raise TypeError(f"not a formula node: {f!r}")


def desugar(f: Formula) -> Formula:
    """Rewrite into Atomic/True/Not/Or/Until/Freeze nodes only."""
    if isinstance(f, (Atomic, TrueF)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.child))
    if isinstance(f, Freeze):
        return Freeze(desugar(f.child))
    if isinstance(f, Or):
        return Or(desugar(f.left), desugar(f.right))
    if isinstance(f, And):
        return Not(Or(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Or(Not(desugar(f.left)), desugar(f.right))
    if isinstance(f, Until):
        return Until(f.lo, f.hi, desugar(f.left), desugar(f.right))
    if isinstance(f, Eventually):
        return Until(f.lo, f.hi, TRUE, desugar(f.child))
    if isinstance(f, Globally):
        return Not(Until(f.lo, f.hi, TRUE, Not(desugar(f.child))))
    raise TypeError(f"not a formula node: {f!r}")


def variables(f: Formula) -> tuple[set[int], set[int]]:
    """Indices used as current-time and as frozen variables."""
    plain: set[int] = set()
    frozen: set[int] = set()
    for node in f.walk():
        if isinstance(node, Atomic):
            plain.update(i for i, _ in node.pred.plain)
            frozen.update(i for i, _ in node.pred.frozen)
    return plain, frozen


def size(f: Formula) -> int:
    return sum(1 for _ in f.walk())


def depth(f: Formula) -> int:
    kids = f.children()
    return 1 + (max(depth(c) for c in kids) if kids else 0)


def check_schema(f: Formula, schema: SignalSchema) -> None:
    plain, frozen = variables(f)
    bad = sorted(i for i in plain | frozen if not 0 <= i < schema.order)
    if bad:
        raise UnknownVariable(f"variable index {bad[0]} not in schema of order {schema.order}")


# -- lexer ------------------------------------------------------------------------------

KEYWORDS = frozenset({"F", "G", "U", "true", "false"})
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_SYMBOLS = ("*(", "&&", "||", "->", "<=", ">=", "==", "!=", "<", ">", "=", "!", "(", ")", "[", "]", ",", "+", "-", "*")


@dataclass
class _Tok:
    kind: str  # NUM, IDENT, FROZEN, KW or the symbol itself, EOF
    text: str
    pos: int
    value: object = field(default=None)


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(text, i)
        if m and (ch.isdigit() or ch == "."):
            toks.append(_Tok("NUM", m.group(), i))
            i = m.end()
            if i < n and text[i] == "*" and not text.startswith("*(", i):
                raise ParseError("'*' is not multiplication; write '2 m1' instead of '2*m1'", i, text)
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            end = m.end()
            if word in KEYWORDS:
                toks.append(_Tok("KW", word, i))
            elif end < n and text[end] == "*" and not text.startswith("*(", end):
                toks.append(_Tok("FROZEN", word, i))
                end += 1
            else:
                toks.append(_Tok("IDENT", word, i))
            i = end
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(_Tok(sym, sym, i))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", i, text)
    toks.append(_Tok("EOF", "", n))
    return toks


# -- parser ------------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, schema: SignalSchema):
        self.text = text
        self.schema = schema
        self.toks = _tokenize(text)
        self.k = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.k]

    def error(self, msg: str, tok: _Tok | None = None, cls=ParseError):
        tok = tok or self.tok
        return cls(msg, tok.pos, self.text)

    def advance(self) -> _Tok:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {found!r}")
        return self.advance()

    def at_kw(self, word: str) -> bool:
        return self.tok.kind == "KW" and self.tok.text == word

    def parse(self) -> Formula:
        f = self.implies()
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def implies(self) -> Formula:
        left = self.or_()
        if self.tok.kind == "->":
            self.advance()
            return Implies(left, self.implies())
        return left

    def or_(self) -> Formula:
        f = self.and_()
        while self.tok.kind == "||":
            self.advance()
            f = Or(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.until()
        while self.tok.kind == "&&":
            self.advance()
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        left = self.unary()
        if self.at_kw("U"):
            self.advance()
            lo, hi = self.interval()
            return Until(lo, hi, left, self.until())
        return left

    def interval(self) -> tuple[Fraction, Fraction]:
        start = self.expect("[")
        lo = Fraction(self.expect("NUM").text)
        self.expect(",")
        hi = Fraction(self.expect("NUM").text)
        self.expect("]")
        if hi <= lo:
            raise self.error(f"interval [{lo}, {hi}] must be nonsingular with lo < hi", start, IntervalError)
        return lo, hi

    def unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "!":
            self.advance()
            return Not(self.unary())
        if tok.kind == "*(":
            self.advance()
            f = self.implies()
            self.expect(")")
            return Freeze(f)
        if tok.kind == "(":
            self.advance()
            f = self.implies()
            self.expect(")")
            return f
        if tok.kind == "KW":
            if tok.text in ("F", "G"):
                self.advance()
                lo, hi = self.interval()
                child = self.unary()
                return Eventually(lo, hi, child) if tok.text == "F" else Globally(lo, hi, child)
            if tok.text == "true":
                self.advance()
                return TRUE
            if tok.text == "false":
                self.advance()
                return Not(TRUE)
            raise self.error(f"unexpected keyword {tok.text!r}")
        if tok.kind in ("NUM", "IDENT", "FROZEN", "-"):
            return self.atom()
        found = tok.text or "end of input"
        raise self.error(f"expected a formula, found {found!r}")

    def atom(self) -> Formula:
        start = self.tok
        lp, lf, lc = self.linexpr()
        op = self.tok
        if op.kind in ("=", "=="):
            raise self.error(
                "equality is not supported (border points carry no information); "
                "replace 'x = b' by 'x >= b-d && x <= b+d' for a suitable d",
                op,
                EqualityUnsupported,
            )
        if op.kind not in ("<", "<=", ">", ">="):
            raise self.error("expected a comparison operator", op)
        self.advance()
        rp, rf, rc = self.linexpr()
        if op.kind in ("<=", ">="):
            warnings.warn(
                f"'{op.kind}' at position {op.pos} is read as '{op.kind[0]}' (boundary points are don't-care)",
                BoundaryComparatorWarning,
                stacklevel=4,
            )
        plain = dict(lp)
        for i, c in rp.items():
            plain[i] = plain.get(i, 0.0) - c
        frozen = dict(lf)
        for i, c in rf.items():
            frozen[i] = frozen.get(i, 0.0) - c
        try:
            pred = LinearPredicate.make(plain, frozen, rc - lc, op.kind[0])
        except ValueError as exc:
            raise self.error(str(exc), start) from None
        return Atomic(pred)

    def linexpr(self) -> tuple[dict[int, float], dict[int, float], float]:
        plain: dict[int, float] = {}
        frozen: dict[int, float] = {}
        const = 0.0
        sign = 1.0
        if self.tok.kind == "-":
            self.advance()
            sign = -1.0
        while True:
            coef, var, is_frozen = self.term()
            if var is None:
                const += sign * coef
            else:
                target = frozen if is_frozen else plain
                target[var] = target.get(var, 0.0) + sign * coef
            if self.tok.kind == "+":
                sign = 1.0
            elif self.tok.kind == "-":
                sign = -1.0
            else:
                return plain, frozen, const
            self.advance()

    def term(self) -> tuple[float, int | None, bool]:
        coef = 1.0
        has_num = False
        if self.tok.kind == "NUM":
            coef = float(self.advance().text)
            has_num = True
        if self.tok.kind in ("IDENT", "FROZEN"):
            tok = self.advance()
            if tok.text not in self.schema:
                raise self.error(f"unknown variable {tok.text!r}", tok, UnknownVariable)
            return coef, self.schema.index(tok.text), tok.kind == "FROZEN"
        if not has_num:
            found = self.tok.text or "end of input"
            raise self.error(f"expected a number or variable, found {found!r}")
        return coef, None, False


def parse(text: str, schema: SignalSchema | Sequence[str]) -> Formula:
    """Parse ``text`` against the variable names of ``schema``."""
    if not isinstance(schema, SignalSchema):
        schema = SignalSchema(schema)
    return _Parser(text, schema).parse()


# -- pretty printing ---------------------------------------------------------------------------

_PREC = {Implies: 0, Or: 1, And: 2, Until: 3}
_UNARY = 4


def _num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _rat(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d != 1:
        return repr(float(q))
    digits = 0
    while (q * 10**digits).denominator != 1:
        digits += 1
    s = f"{q.numerator * 10**digits // q.denominator:0{digits + 1}d}"
    return f"{s[:-digits]}.{s[-digits:]}"


def format_predicate(p: LinearPredicate, schema: SignalSchema) -> str:
    parts: list[str] = []
    terms = [(schema.names[i], c) for i, c in p.plain] + [(schema.names[i] + "*", c) for i, c in p.frozen]
    for name, c in terms:
        mag = abs(c)
        body = name if mag == 1.0 else f"{_num(mag)} {name}"
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return f"{' '.join(parts)} {p.cmp.value} {_num(p.bound)}"


def pretty(f: Formula, schema: SignalSchema | Sequence[str]) -> str:
    """Text form that parses back to the same tree."""
    if not isinstance(schema, SignalSchema):
        schema = SignalSchema(schema)
    return _fmt(f, schema, 0)


def _fmt(f: Formula, schema: SignalSchema, ctx: int) -> str:
    if isinstance(f, Atomic):
        return format_predicate(f.pred, schema)
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, Not):
        return "!" + _fmt(f.child, schema, _UNARY)
    if isinstance(f, Freeze):
        return "*(" + _fmt(f.child, schema, 0) + ")"
    if isinstance(f, (Eventually, Globally)):
        op = "F" if isinstance(f, Eventually) else "G"
        return f"{op}[{_rat(f.lo)},{_rat(f.hi)}] " + _fmt(f.child, schema, _UNARY)
    prec = _PREC[type(f)]
    if isinstance(f, (Or, And)):
        op = " || " if isinstance(f, Or) else " && "
        s = _fmt(f.left, schema, prec) + op + _fmt(f.right, schema, prec + 1)
    elif isinstance(f, Until):
        s = _fmt(f.left, schema, _UNARY) + f" U[{_rat(f.lo)},{_rat(f.hi)}] " + _fmt(f.right, schema, prec)
    elif isinstance(f, Implies):
        s = _fmt(f.left, schema, prec + 1) + " -> " + _fmt(f.right, schema, prec)
    else:
        raise TypeError(f"not a formula node: {f!r}")
    return f"({s})" if prec < ctx else s


FormulaLike = Union[Formula, str]
