"""Symbolic scalar expressions in the chart variables x and y.

Expressions are immutable trees built from :class:`Const`, :class:`Var`,
:class:`Unary`, :class:`Binary` and :class:`Pow` nodes. They can be parsed
from text, printed back, differentiated exactly, evaluated over any scalar
type that supports the ring operations plus ``sqrt/sin/cos/exp/log`` methods
(floats, :class:`~geoshoot.jet.Jet`, :class:`~geoshoot.jet.Dual`), and lowered
to a flat instruction tape for the compiled kernels.

Grammar::

    expr     := term (("+"|"-") term)* ;
    term     := factor (("*"|"/") factor)* ;
    factor   := "-" factor | power ;
    power    := atom ("^" rational)? ;
    atom     := number | "x" | "y" | func "(" expr ")" | "(" expr ")" ;
    func     := "sqrt" | "sin" | "cos" | "exp" | "log" ;
    rational := integer | "(" integer ["/" integer] ")" ;

Integers in exponents may carry a leading minus sign.
"""

from __future__ import annotations

import math
import numbers
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DomainError, ParseError, UnknownIdentifierError

FUNCTIONS = ("sqrt", "sin", "cos", "exp", "log")
VARIABLES = ("x", "y")
BINARY_OPS = ("+", "-", "*", "/")


class Expr:
    """Base class of expression nodes."""

    __slots__ = ()

    def __str__(self):
        return to_string(self)

    # operator sugar for building trees in code; simplifies zero/one only
    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __truediv__(self, other):
        return div(self, _lift(other))

    def __rtruediv__(self, other):
        return div(_lift(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return power(self, exponent)


@dataclass(frozen=True, eq=True, repr=False)
class Const(Expr):
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"constants must be finite, got {self.value!r}")
        object.__setattr__(self, "value", float(self.value))

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Var(Expr):
    name: str

    def __post_init__(self):
        if self.name not in VARIABLES:
            raise ValueError(f"unknown variable {self.name!r}")

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Unary(Expr):
    op: str  # "neg" or one of FUNCTIONS
    arg: Expr

    def __post_init__(self):
        if self.op != "neg" and self.op not in FUNCTIONS:
            raise ValueError(f"unknown unary op {self.op!r}")

    def __repr__(self):
        return f"Unary({self.op!r}, {self.arg!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {self.op!r}")

    def __repr__(self):
        return f"Binary({self.op!r}, {self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Pow(Expr):
    base: Expr
    exponent: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent))

    def __repr__(self):
        return f"Pow({self.base!r}, {str(self.exponent)})"


X = Var("x")
Y = Var("y")
ZERO = Const(0.0)
ONE = Const(1.0)


def _lift(v):
    if isinstance(v, Expr):
        return v
    if isinstance(v, numbers.Real):
        return Const(float(v))
    raise TypeError(f"cannot use {type(v).__name__} in an expression")


def _is_const(e, value):
    return isinstance(e, Const) and e.value == value


# --- smart constructors: literal zero/one elimination only ------------------

def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Binary("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return Binary("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Binary("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 1.0):
        return a
    if _is_const(a, 0.0):
        return ZERO
    return Binary("/", a, b)


def neg(a: Expr) -> Expr:
    if _is_const(a, 0.0):
        return ZERO
    return Unary("neg", a)


def power(a: Expr, exponent) -> Expr:
    r = Fraction(exponent)
    if r == 0:
        return ONE
    if r == 1:
        return a
    return Pow(a, r)


def apply(func: str, a: Expr) -> Expr:
    return Unary(func, a)


def const(value: float) -> Expr:
    """A literal, written as ``neg(Const(|v|))`` when negative so it prints and reparses stably."""
    value = float(value)
    if value < 0:
        return neg(Const(-value))
    return Const(value)


# --- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN_RE.match(source, pos)
            if m is None or m.end() == pos:
                rest = source[pos:]
                if rest.strip() == "":
                    break
                bad = pos + (len(rest) - len(rest.lstrip()))
                raise ParseError(f"unexpected character {source[bad]!r}", self._offset(bad), source)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(source)))
        self.i = 0

    def _offset(self, index):
        return len(self.source[:index].encode("utf-8"))

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, expected, tok=None):
        tok = tok or self.peek()
        found = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"expected {expected}, found {found}", self._offset(tok[2]), self.source)

    def expect(self, value):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != value:
            self.error(repr(value))
        return self.advance()

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            self.error("operator or end of input")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            e = Binary(op, e, self.term())
        return e

    def term(self):
        e = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            e = Binary(op, e, self.factor())
        return e

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.advance()
            return Unary("neg", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.advance()
            return Pow(base, self.rational())
        return base

    def integer(self):
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.advance()
            sign = -1
            tok = self.peek()
        if tok[0] != "number" or not tok[1].isdigit():
            self.error("integer exponent (exponents must be rational literals)")
        self.advance()
        return sign * int(tok[1])

    def rational(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "(":
            self.advance()
            num = self.integer()
            den = 1
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.advance()
                den_tok = self.peek()
                den = self.integer()
                if den == 0:
                    raise ParseError("zero denominator in exponent", self._offset(den_tok[2]), self.source)
            self.expect(")")
            return Fraction(num, den)
        return Fraction(self.integer())

    def atom(self):
        tok = self.peek()
        kind, text, start = tok
        if kind == "number":
            self.advance()
            return Const(float(text))
        if kind == "ident":
            self.advance()
            if text in VARIABLES:
                return Var(text)
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(text, arg)
            raise UnknownIdentifierError(
                f"unknown identifier {text!r} (expected x, y or one of {', '.join(FUNCTIONS)})",
                self._offset(start),
                self.source,
            )
        if kind == "op" and text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        self.error("number, variable, function or '('")


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises :class:`ParseError` (with a byte offset) on malformed input and
    :class:`UnknownIdentifierError` for names other than x, y and the
    supported functions.
    """
    return _Parser(source).parse()


# --- printing ----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e):
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary) and e.op == "neg":
        return 3
    if isinstance(e, Pow):
        return 4
    if isinstance(e, Const) and e.value < 0:
        return 0
    return 5


def _wrap(e, min_prec):
    s = to_string(e)
    return f"({s})" if _prec(e) < min_prec else s


def _format_exponent(r: Fraction) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    return f"({r.numerator}/{r.denominator})"


def to_string(e: Expr) -> str:
    """Print ``e`` in the parser's grammar with minimal parentheses."""
    if isinstance(e, Const):
        v = e.value
        if v == int(v) and abs(v) < 1e16:
            s = str(int(v))
        else:
            s = repr(v)
        return f"(-{s[1:]})" if v < 0 else s
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return "-" + _wrap(e.arg, 3)
        return f"{e.op}({to_string(e.arg)})"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, 5)}^{_format_exponent(e.exponent)}"
    if isinstance(e, Binary):
        p = _PREC[e.op]
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    raise TypeError(f"not an expression: {e!r}")


# --- differentiation ---------------------------------------------------------

def differentiate(e: Expr, var: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to ``var`` ("x" or "y")."""
    if var not in VARIABLES:
        raise ValueError(f"can only differentiate with respect to x or y, not {var!r}")
    cache = {}

    def d(node):
        hit = cache.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Const):
            out = ZERO
        elif isinstance(node, Var):
            out = ONE if node.name == var else ZERO
        elif isinstance(node, Binary):
            u, v = node.left, node.right
            du, dv = d(u), d(v)
            if node.op == "+":
                out = add(du, dv)
            elif node.op == "-":
                out = sub(du, dv)
            elif node.op == "*":
                out = add(mul(du, v), mul(u, dv))
            else:
                out = div(sub(mul(du, v), mul(u, dv)), power(v, 2))
        elif isinstance(node, Pow):
            r = node.exponent
            du = d(node.base)
            coeff = const(float(r)) if r.denominator != 1 else const(r.numerator)
            out = mul(mul(coeff, power(node.base, r - 1)), du)
        elif isinstance(node, Unary):
            u = node.arg
            du = d(u)
            if node.op == "neg":
                out = neg(du)
            elif node.op == "sqrt":
                out = div(du, mul(Const(2.0), node))
            elif node.op == "sin":
                out = mul(Unary("cos", u), du)
            elif node.op == "cos":
                out = neg(mul(Unary("sin", u), du))
            elif node.op == "exp":
                out = mul(node, du)
            else:
                out = div(du, u)
        else:
            raise TypeError(f"not an expression: {node!r}")
        cache[node] = out
        return out

    return d(e)


# --- evaluation --------------------------------------------------------------

Scalar = Union[float, "Jet", "Dual"]  # noqa: F821


def _is_real(v):
    return isinstance(v, (numbers.Real, np.floating))


def _float_func(op, v):
    if op == "sqrt":
        if v < 0:
            raise DomainError("sqrt of negative number")
        return math.sqrt(v)
    if op == "log":
        if v <= 0:
            raise DomainError("log of non-positive number")
        return math.log(v)
    if op == "exp":
        try:
            return math.exp(v)
        except OverflowError:
            raise DomainError("exp overflow") from None
    return math.sin(v) if op == "sin" else math.cos(v)


def apply_function(op: str, v):
    """Apply one of FUNCTIONS to a scalar of any supported type."""
    if _is_real(v):
        return _float_func(op, float(v))
    return getattr(v, op)()


def divide(a, b):
    if _is_real(b) and b == 0:
        raise DomainError("division by zero")
    return a / b


def int_power(v, n: int):
    """v**n for integer n by repeated multiplication; n < 0 via one reciprocal."""
    if n == 0:
        return 1.0
    m = abs(n)
    out = v
    for _ in range(m - 1):
        out = out * v
    if n < 0:
        out = divide(1.0, out)
    return out


def rational_power(v, r: Fraction):
    r = Fraction(r)
    if r.denominator == 1:
        return int_power(v, r.numerator)
    if r.denominator == 2:
        return int_power(apply_function("sqrt", v), r.numerator)
    return apply_function("exp", float(r) * apply_function("log", v))


def evaluate(e: Expr, x, y):
    """Value of ``e`` at ``(x, y)`` by structural recursion.

    ``x`` and ``y`` may be floats, jets or duals. Domain violations raise
    :class:`DomainError` carrying the innermost offending node.
    """
    cache = {}

    def ev(node):
        hit = cache.get(node)
        if hit is not None:
            return hit
        try:
            if isinstance(node, Const):
                out = node.value
            elif isinstance(node, Var):
                out = x if node.name == "x" else y
            elif isinstance(node, Binary):
                a, b = ev(node.left), ev(node.right)
                if node.op == "+":
                    out = a + b
                elif node.op == "-":
                    out = a - b
                elif node.op == "*":
                    out = a * b
                else:
                    out = divide(a, b)
            elif isinstance(node, Pow):
                out = rational_power(ev(node.base), node.exponent)
            elif isinstance(node, Unary):
                a = ev(node.arg)
                out = -a if node.op == "neg" else apply_function(node.op, a)
            else:
                raise TypeError(f"not an expression: {node!r}")
        except DomainError as exc:
            if exc.node is None:
                exc.node = node
            raise
        cache[node] = out
        return out

    return ev(e)


def variables(e: Expr) -> set:
    found = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            found.add(n.name)
        elif isinstance(n, Unary):
            stack.append(n.arg)
        elif isinstance(n, Binary):
            stack.extend((n.left, n.right))
        elif isinstance(n, Pow):
            stack.append(n.base)
    return found


# --- tape lowering -----------------------------------------------------------

OP_CONST, OP_X, OP_Y, OP_NEG, OP_ADD, OP_SUB, OP_MUL, OP_DIV = range(8)
OP_SQRT, OP_SIN, OP_COS, OP_EXP, OP_LOG = range(8, 13)

_UNARY_CODES = {"neg": OP_NEG, "sqrt": OP_SQRT, "sin": OP_SIN, "cos": OP_COS, "exp": OP_EXP, "log": OP_LOG}
_BINARY_CODES = {"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV}


@dataclass(frozen=True)
class Tape:
    """Straight-line program computing several expressions at once.

    ``ops[i] = (opcode, a, b)`` writes register ``i``; ``a``/``b`` are operand
    registers (or an index into ``consts`` for OP_CONST). ``outputs`` lists
    the registers holding each requested expression, and ``nodes[i]`` the
    expression node responsible for register ``i`` (for error reports).
    """

    ops: np.ndarray
    consts: np.ndarray
    outputs: np.ndarray
    nodes: tuple

    def __len__(self):
        return len(self.ops)


def compile_tape(exprs) -> Tape:
    """Lower expressions to a :class:`Tape`, sharing common subexpressions.

    Powers are lowered exactly as :func:`rational_power` evaluates them, so the
    compiled and the recursive evaluators perform the same float operations.
    """
    ops, consts, nodes = [], [], []
    memo = {}
    const_index = {}

    def emit(code, a, b, node):
        ops.append((code, a, b))
        nodes.append(node)
        return len(ops) - 1

    def emit_const(value, node):
        key = ("const", float(value))
        if key in memo:
            return memo[key]
        if float(value) not in const_index:
            const_index[float(value)] = len(consts)
            consts.append(float(value))
        reg = emit(OP_CONST, const_index[float(value)], 0, node)
        memo[key] = reg
        return reg

    def emit_int_power(base_reg, n, node):
        if n == 0:
            return emit_const(1.0, node)
        out = base_reg
        for _ in range(abs(n) - 1):
            out = emit(OP_MUL, out, base_reg, node)
        if n < 0:
            out = emit(OP_DIV, emit_const(1.0, node), out, node)
        return out

    def lower(node):
        if node in memo:
            return memo[node]
        if isinstance(node, Const):
            reg = emit_const(node.value, node)
        elif isinstance(node, Var):
            reg = emit(OP_X if node.name == "x" else OP_Y, 0, 0, node)
        elif isinstance(node, Unary):
            reg = emit(_UNARY_CODES[node.op], lower(node.arg), 0, node)
        elif isinstance(node, Binary):
            a = lower(node.left)
            b = lower(node.right)
            reg = emit(_BINARY_CODES[node.op], a, b, node)
        elif isinstance(node, Pow):
            base = lower(node.base)
            r = node.exponent
            if r.denominator == 1:
                reg = emit_int_power(base, r.numerator, node)
            elif r.denominator == 2:
                reg = emit_int_power(emit(OP_SQRT, base, 0, node), r.numerator, node)
            else:
                scaled = emit(OP_MUL, emit_const(float(r), node), emit(OP_LOG, base, 0, node), node)
                reg = emit(OP_EXP, scaled, 0, node)
        else:
            raise TypeError(f"not an expression: {node!r}")
        memo[node] = reg
        return reg

    outputs = [lower(e) for e in exprs]
    return Tape(
        ops=np.array(ops, dtype=np.int64).reshape(-1, 3),
        consts=np.array(consts, dtype=np.float64),
        outputs=np.array(outputs, dtype=np.int64),
        nodes=tuple(nodes),
    )
