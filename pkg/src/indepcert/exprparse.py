"""A small expression language for defining functions as strings.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = "-" unary | power ;
    power    = atom [ "^" exponent ] ;
    exponent = INT [ "^" exponent ] ;
    atom     = INT | DECIMAL | NAME | CALL "(" expr ")" | "(" expr ")" ;
    CALL     = "sin" | "cos" | "exp" | "log" | "abs" ;
    INT      = digit { digit } ;
    DECIMAL  = INT "." INT ;
    NAME     = letter { letter | digit | "_" } ;

``^`` binds tighter than unary minus, which binds tighter than ``*`` and
``/``.  Binary operators are left associative except ``^``.  Exponents are
nonnegative integer literals, so ``x^-1`` and ``x^y`` are rejected, and
there is no implicit multiplication (``2x`` is an error).  Rationals are
written as divisions such as ``1/3``; decimals and calls are for
approximate reals only.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import IndepCertError
from .field import RATIONAL, FieldDescriptor
from .funcsys import FunctionHandle

CALLS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "abs": abs,
}

MAX_DEPTH = 200
MAX_EXPONENT = 10_000


class ExprError(IndepCertError):
    pass


class ParseError(ExprError, ValueError):
    """Syntax error at byte ``offset`` of the source."""

    def __init__(self, offset, expected, found):
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {offset}: expected {expected}, found {found}")


class ExprEvalError(ExprError):
    pass


class DivisionByZero(ExprEvalError, ZeroDivisionError):
    pass


class TranscendentalInExactField(ExprEvalError):
    pass


class UnboundVariable(ExprEvalError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# -- AST ---------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Dec:
    text: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: object  # Num, or Pow whose base is a Num


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


# -- tokens ------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<dec>\d+\.\d+)|(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])",
    re.ASCII,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "dec", "name", "op", "end"
    text: str
    pos: int  # character offset


def _tokenize(src):
    toks = []
    i = 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if m is None:
            raise _CharError(i, "a token", repr(src[i]))
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), i))
        i = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


class _CharError(Exception):
    def __init__(self, pos, expected, found):
        self.pos, self.expected, self.found = pos, expected, found


def _describe(tok):
    return "end of input" if tok.kind == "end" else repr(tok.text)


class _Parser:
    _BINARY = {"+": 1, "-": 1, "*": 2, "/": 2}

    def __init__(self, src, variables, exact):
        self.toks = _tokenize(src)
        self.i = 0
        self.variables = None if variables is None else set(variables)
        self.exact = exact
        self.depth = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected, tok=None):
        tok = tok or self.tok
        raise _CharError(tok.pos, expected, _describe(tok))

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail(f"at most {MAX_DEPTH} levels of nesting")

    def parse(self):
        node = self.expr(1)
        if self.tok.kind != "end":
            self.fail("an operator or end of input")
        return node

    def expr(self, min_prec):
        self.enter()
        entry = self.depth
        left = self.unary()
        while self.tok.kind == "op" and self._BINARY.get(self.tok.text, 0) >= min_prec:
            op = self.advance().text
            right = self.expr(self._BINARY[op] + 1)
            left = BinOp(op, left, right)
            # long left-leaning chains nest too
            self.enter()
        self.depth = entry - 1
        return left

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            self.enter()
            node = Neg(self.unary())
            self.depth -= 1
            return node
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        if self.tok.kind != "int":
            self.fail("a nonnegative integer exponent")
        self.enter()
        node = Num(int(self.advance().text))
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            node = Pow(node, self.exponent())
        self.depth -= 1
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text))
        if tok.kind == "dec":
            if self.exact:
                self.fail("an exact literal (decimals need an approximate field)")
            self.advance()
            return Dec(tok.text)
        if tok.kind == "name":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                if tok.text not in CALLS:
                    self.fail("a known function name", tok)
                if self.exact:
                    self.fail("no transcendental calls in an exact field", tok)
                self.advance()
                arg = self.expr(1)
                self.expect(")")
                return Call(tok.text, arg)
            if self.variables is not None and tok.text not in self.variables:
                self.fail("a declared variable", tok)
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr(1)
            self.expect(")")
            return node
        self.fail("operand")

    def expect(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.advance()
        else:
            self.fail(repr(text))


def parse(src, variables=None, field: FieldDescriptor | None = None):
    """Parse ``src`` into an AST.

    ``variables`` restricts the allowed names (``None`` accepts any).  When
    ``field`` is exact, decimals and calls are rejected.  Errors carry a
    byte offset into the UTF-8 source.
    """
    if isinstance(src, (bytes, bytearray)):
        try:
            text = bytes(src).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(exc.start, "UTF-8 text", "invalid byte") from None
    else:
        text = src
    exact = field is not None and field.is_exact
    try:
        return _Parser(text, variables, exact).parse()
    except _CharError as exc:
        offset = len(text[:exc.pos].encode("utf-8", "surrogatepass"))
        raise ParseError(offset, exc.expected, exc.found) from None


# -- printing ----------------------------------------------------------


def _prec(node):
    if isinstance(node, BinOp):
        return _Parser._BINARY[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def to_string(node):
    """Render with the fewest parentheses that parse back to ``node``."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Dec):
        return node.text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({to_string(node.arg)})"
    if isinstance(node, Neg):
        inner = to_string(node.operand)
        return "-" + (f"({inner})" if _prec(node.operand) < 3 else inner)
    if isinstance(node, Pow):
        base = to_string(node.base)
        if _prec(node.base) <= 4:
            base = f"({base})"
        return f"{base}^{to_string(node.exponent)}"
    if isinstance(node, BinOp):
        p = _prec(node)
        left, right = to_string(node.left), to_string(node.right)
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


def to_sexpr(node):
    """Prefix form, e.g. ``(+ (^ x 2) (* 3 x))``; handy in tests and logs."""
    if isinstance(node, (Num, Dec, Var)):
        return to_string(node)
    if isinstance(node, Neg):
        return f"(neg {to_sexpr(node.operand)})"
    if isinstance(node, Pow):
        return f"(^ {to_sexpr(node.base)} {to_sexpr(node.exponent)})"
    if isinstance(node, BinOp):
        return f"({node.op} {to_sexpr(node.left)} {to_sexpr(node.right)})"
    if isinstance(node, Call):
        return f"({node.name} {to_sexpr(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation --------------------------------------------------------


def _int_exponent(node):
    if isinstance(node, Num):
        return node.value
    e = _int_exponent(node.exponent)
    if e > MAX_EXPONENT and node.base.value > 1:
        raise ExprEvalError("exponent too large")
    return node.base.value ** e


def evaluate(node, binding, fd: FieldDescriptor):
    """Evaluate ``node`` in ``fd`` with variables taken from ``binding``."""
    if isinstance(node, Num):
        return fd.from_int(node.value)
    if isinstance(node, Dec):
        if fd.is_exact:
            raise TranscendentalInExactField(f"decimal literal {node.text} in {fd}")
        return fd.coerce(float(node.text))
    if isinstance(node, Var):
        try:
            return fd.coerce(binding[node.name])
        except KeyError:
            raise UnboundVariable(f"variable {node.name!r} is not bound") from None
    if isinstance(node, Neg):
        return fd.neg(evaluate(node.operand, binding, fd))
    if isinstance(node, Pow):
        e = _int_exponent(node.exponent)
        if e > MAX_EXPONENT and fd.kind == RATIONAL:
            raise ExprEvalError(f"exponent {e} too large for exact rational evaluation")
        return fd.pow(evaluate(node.base, binding, fd), e)
    if isinstance(node, BinOp):
        a = evaluate(node.left, binding, fd)
        b = evaluate(node.right, binding, fd)
        if node.op == "+":
            return fd.add(a, b)
        if node.op == "-":
            return fd.sub(a, b)
        if node.op == "*":
            return fd.mul(a, b)
        if fd.is_zero(b):
            raise DivisionByZero(f"division by zero in {to_string(node)}")
        return fd.div(a, b)
    if isinstance(node, Call):
        if fd.is_exact:
            raise TranscendentalInExactField(f"{node.name}() in {fd}")
        x = evaluate(node.arg, binding, fd)
        try:
            return fd.coerce(CALLS[node.name](x))
        except (ValueError, OverflowError) as exc:
            raise ExprEvalError(f"{node.name}({x!r}): {exc}") from None
    raise TypeError(f"not an expression node: {node!r}")


def compile_function(src, variables, fd: FieldDescriptor, name=None) -> FunctionHandle:
    """Parse ``src`` once and wrap it as a function handle.

    With a single variable the domain points are bare scalars; with several
    they are tuples in ``variables`` order.
    """
    variables = list(variables)
    ast = parse(src, variables, fd)
    if len(variables) == 1:
        (v,) = variables
        fn = lambda p: evaluate(ast, {v: p}, fd)
    else:
        def fn(p):
            if not isinstance(p, tuple) or len(p) != len(variables):
                raise ExprEvalError(f"expected a {len(variables)}-tuple point, got {p!r}")
            return evaluate(ast, dict(zip(variables, p)), fd)
    handle = FunctionHandle(fn, name or (src if isinstance(src, str) else repr(src)), fd)
    handle.ast = ast
    return handle
