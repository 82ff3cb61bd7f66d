"""Small analytic expression language for curves, fields and curvature laws.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' INT)?
    base   := NUMBER | 'pi' | IDENT | IDENT '(' expr ')' | '(' expr ')' | '-' base

``IDENT`` must belong to the declared variable set or be one of the
built-in functions ``sin cos sinh cosh exp sqrt``.  Exponents are
non-negative integer literals.  ASTs are immutable and structurally
comparable; ``parse_expr(to_string(e))`` reproduces ``e`` exactly.

The same AST evaluates in three kinds: real scalars/arrays
(:func:`eval_real`), complex scalars/arrays (:func:`eval_complex`,
the holomorphic extension used by the H=0 representation formula) and
truncated power series (:func:`eval_series`, used to compose the
curvature law with the jet of the unit normal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

from .series import TruncSeries

__all__ = [
    "Expr", "Num", "PiConst", "Var", "Neg", "BinOp", "Pow", "Call",
    "VecExpr3", "FUNCTIONS", "ParseError", "EvalError",
    "parse_expr", "to_string", "free_vars", "derivative_expr",
    "eval_real", "eval_complex", "eval_series", "parse_vec3",
]

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "sqrt")


class ParseError(ValueError):
    """Syntax or name error, annotated with the offending position."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")


class EvalError(ArithmeticError):
    """Evaluation outside the expression's domain (pole, negative sqrt, ...)."""


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class PiConst:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError("Pow exponent must be a non-negative int")


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, PiConst, Var, Neg, BinOp, Pow, Call]

PI = PiConst()


def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Neg):
        return free_vars(e.arg)
    if isinstance(e, BinOp):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Pow):
        return free_vars(e.base)
    if isinstance(e, Call):
        return free_vars(e.arg)
    return frozenset()


# --------------------------------------------------------------------------
# Tokenizer / parser

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_int = True
            if j < n and text[j] == ".":
                is_int = False
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_int = False
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(("num", (float(text[i:j]), is_int), i))
            i = j
            continue
        if ch in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(f"illegal character {ch!r}", i, text)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: frozenset):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2], self.text)
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[0]!r}", tok[2], self.text)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in "+-":
            op = self.advance()[0]
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[0] in "*/":
            op = self.advance()[0]
            e = BinOp(op, e, self.factor())
        return e

    def factor(self) -> Expr:
        e = self.base()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.advance()
            if tok[0] != "num":
                raise ParseError("expected integer exponent after '^'", tok[2], self.text)
            value, is_int = tok[1]
            if not is_int:
                raise ParseError("non-integer exponent", tok[2], self.text)
            e = Pow(e, int(value))
        return e

    def base(self) -> Expr:
        tok = self.advance()
        kind, value, pos = tok
        if kind == "num":
            return Num(value[0])
        if kind == "-":
            return Neg(self.base())
        if kind == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "ident":
            if value == "pi":
                return PI
            if value in FUNCTIONS:
                if self.peek()[0] != "(":
                    raise ParseError(f"function {value!r} needs an argument list", pos, self.text)
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            if value in self.variables:
                if self.peek()[0] == "(":
                    raise ParseError(f"{value!r} is a variable, not a function", pos, self.text)
                return Var(value)
            raise ParseError(f"unknown identifier {value!r}", pos, self.text)
        raise ParseError(f"unexpected {kind!r}", pos, self.text)


def parse_expr(text: str, variables: Iterable[str]) -> Expr:
    """Parse ``text`` over the declared variable set."""
    vset = frozenset(variables)
    bad = vset & (set(FUNCTIONS) | {"pi"})
    if bad:
        raise ValueError(f"reserved names cannot be variables: {sorted(bad)}")
    return _Parser(text, vset).parse()


# --------------------------------------------------------------------------
# Printer (grammar-aware, so parse(to_string(e)) == e)

def to_string(e: Expr) -> str:
    return _print_expr(e)


def _print_expr(e: Expr) -> str:
    if isinstance(e, BinOp) and e.op in "+-":
        return f"{_print_expr(e.left)}{e.op}{_print_term(e.right)}"
    return _print_term(e)


def _print_term(e: Expr) -> str:
    if isinstance(e, BinOp) and e.op in "*/":
        return f"{_print_term(e.left)}{e.op}{_print_factor(e.right)}"
    return _print_factor(e)


def _print_factor(e: Expr) -> str:
    if isinstance(e, Pow):
        return f"{_print_base(e.base)}^{e.exponent}"
    return _print_base(e)


def _print_base(e: Expr) -> str:
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, PiConst):
        return "pi"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"-{_print_base(e.arg)}"
    if isinstance(e, Call):
        return f"{e.func}({_print_expr(e.arg)})"
    return f"({_print_expr(e)})"


# --------------------------------------------------------------------------
# Differentiation

def _is_zero(e: Expr) -> bool:
    return isinstance(e, Num) and e.value == 0.0


def _is_one(e: Expr) -> bool:
    return isinstance(e, Num) and e.value == 1.0


def _add(a: Expr, b: Expr) -> Expr:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return BinOp("+", a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_zero(b):
        return a
    if _is_zero(a):
        return Neg(b)
    return BinOp("-", a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_zero(a) or _is_zero(b):
        return Num(0.0)
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return BinOp("*", a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_zero(a):
        return Num(0.0)
    if _is_one(b):
        return a
    return BinOp("/", a, b)


def _pow(base: Expr, n: int) -> Expr:
    if n == 0:
        return Num(1.0)
    if n == 1:
        return base
    return Pow(base, n)


def derivative_expr(e: Expr, var: str) -> Expr:
    """Exact symbolic derivative with respect to ``var``."""
    if isinstance(e, (Num, PiConst)):
        return Num(0.0)
    if isinstance(e, Var):
        return Num(1.0) if e.name == var else Num(0.0)
    if isinstance(e, Neg):
        d = derivative_expr(e.arg, var)
        return Num(0.0) if _is_zero(d) else Neg(d)
    if isinstance(e, BinOp):
        dl = derivative_expr(e.left, var)
        dr = derivative_expr(e.right, var)
        if e.op == "+":
            return _add(dl, dr)
        if e.op == "-":
            return _sub(dl, dr)
        if e.op == "*":
            return _add(_mul(dl, e.right), _mul(e.left, dr))
        num = _sub(_mul(dl, e.right), _mul(e.left, dr))
        return _div(num, _pow(e.right, 2))
    if isinstance(e, Pow):
        du = derivative_expr(e.base, var)
        if e.exponent == 0:
            return Num(0.0)
        return _mul(Num(float(e.exponent)), _mul(_pow(e.base, e.exponent - 1), du))
    if isinstance(e, Call):
        du = derivative_expr(e.arg, var)
        u = e.arg
        if e.func == "sin":
            outer = Call("cos", u)
        elif e.func == "cos":
            outer = Neg(Call("sin", u))
        elif e.func == "sinh":
            outer = Call("cosh", u)
        elif e.func == "cosh":
            outer = Call("sinh", u)
        elif e.func == "exp":
            outer = Call("exp", u)
        else:  # sqrt
            return _div(du, _mul(Num(2.0), Call("sqrt", u)))
        return _mul(outer, du)
    raise TypeError(f"not an Expr node: {e!r}")


# --------------------------------------------------------------------------
# Evaluation

def eval_real(e: Expr, assignment: Mapping[str, object]):
    """Evaluate over real scalars or numpy arrays.

    Division by zero and square roots of negative numbers raise
    :class:`EvalError` instead of producing non-finite values.
    """
    if isinstance(e, Num):
        return e.value
    if isinstance(e, PiConst):
        return math.pi
    if isinstance(e, Var):
        try:
            return assignment[e.name]
        except KeyError:
            raise EvalError(f"variable {e.name!r} has no assigned value") from None
    if isinstance(e, Neg):
        return -eval_real(e.arg, assignment)
    if isinstance(e, BinOp):
        lhs = eval_real(e.left, assignment)
        rhs = eval_real(e.right, assignment)
        if e.op == "+":
            return lhs + rhs
        if e.op == "-":
            return lhs - rhs
        if e.op == "*":
            return lhs * rhs
        if np.any(np.asarray(rhs) == 0):
            raise EvalError("division by zero")
        return lhs / rhs
    if isinstance(e, Pow):
        return eval_real(e.base, assignment) ** e.exponent
    if isinstance(e, Call):
        arg = eval_real(e.arg, assignment)
        if e.func == "sqrt":
            if np.any(np.asarray(arg) < 0):
                raise EvalError("sqrt of negative value")
            return np.sqrt(arg)
        return getattr(np, e.func)(arg)
    raise TypeError(f"not an Expr node: {e!r}")


def eval_complex(e: Expr, assignment: Mapping[str, object]):
    """Evaluate over complex scalars or arrays; elementary functions extend
    holomorphically (principal branch for sqrt)."""
    if isinstance(e, Num):
        return complex(e.value)
    if isinstance(e, PiConst):
        return complex(math.pi)
    if isinstance(e, Var):
        try:
            return assignment[e.name]
        except KeyError:
            raise EvalError(f"variable {e.name!r} has no assigned value") from None
    if isinstance(e, Neg):
        return -eval_complex(e.arg, assignment)
    if isinstance(e, BinOp):
        lhs = eval_complex(e.left, assignment)
        rhs = eval_complex(e.right, assignment)
        if e.op == "+":
            return lhs + rhs
        if e.op == "-":
            return lhs - rhs
        if e.op == "*":
            return lhs * rhs
        if np.any(np.asarray(rhs) == 0):
            raise EvalError("division by zero")
        return lhs / rhs
    if isinstance(e, Pow):
        return eval_complex(e.base, assignment) ** e.exponent
    if isinstance(e, Call):
        arg = np.asarray(eval_complex(e.arg, assignment), dtype=complex)
        return getattr(np, e.func)(arg)
    raise TypeError(f"not an Expr node: {e!r}")


def eval_series(e: Expr, assignment: Mapping[str, TruncSeries], order: int | None = None) -> TruncSeries:
    """Evaluate over truncated power series.

    All series in ``assignment`` must share one truncation order; the result
    is the order-K truncation of the exact Taylor expansion of the composite.
    ``order`` is only needed when the expression has no free variables.
    """
    orders = {v.order for v in assignment.values()}
    if len(orders) > 1:
        raise ValueError(f"mixed series orders in assignment: {sorted(orders)}")
    if orders:
        k = orders.pop()
        if order is not None and order != k:
            raise ValueError("explicit order disagrees with assignment")
    elif order is not None:
        k = order
    else:
        raise ValueError("order is required for a variable-free expression")
    return _eval_series(e, assignment, k)


def _eval_series(e: Expr, assignment, k: int) -> TruncSeries:
    if isinstance(e, Num):
        return TruncSeries.constant(e.value, k)
    if isinstance(e, PiConst):
        return TruncSeries.constant(math.pi, k)
    if isinstance(e, Var):
        try:
            return assignment[e.name]
        except KeyError:
            raise EvalError(f"variable {e.name!r} has no assigned value") from None
    if isinstance(e, Neg):
        return -_eval_series(e.arg, assignment, k)
    if isinstance(e, BinOp):
        lhs = _eval_series(e.left, assignment, k)
        rhs = _eval_series(e.right, assignment, k)
        if e.op == "+":
            return lhs + rhs
        if e.op == "-":
            return lhs - rhs
        if e.op == "*":
            return lhs * rhs
        return lhs / rhs
    if isinstance(e, Pow):
        return _eval_series(e.base, assignment, k) ** e.exponent
    if isinstance(e, Call):
        arg = _eval_series(e.arg, assignment, k)
        return getattr(arg, e.func)()
    raise TypeError(f"not an Expr node: {e!r}")


# --------------------------------------------------------------------------
# Vector-valued expressions

@dataclass(frozen=True)
class VecExpr3:
    """Triple of expressions describing an R^3 valued analytic map."""

    x: Expr
    y: Expr
    z: Expr

    def components(self):
        return (self.x, self.y, self.z)

    def derivative(self, var: str) -> "VecExpr3":
        return VecExpr3(*(derivative_expr(c, var) for c in self.components()))

    def eval(self, var: str, values) -> np.ndarray:
        """Real evaluation on an array of parameter values; returns (..., 3)."""
        values = np.asarray(values, dtype=float)
        cols = [np.broadcast_to(np.asarray(eval_real(c, {var: values}), dtype=float), values.shape)
                for c in self.components()]
        return np.stack(cols, axis=-1)

    def eval_complex(self, var: str, values) -> np.ndarray:
        values = np.asarray(values, dtype=complex)
        cols = [np.broadcast_to(np.asarray(eval_complex(c, {var: values}), dtype=complex), values.shape)
                for c in self.components()]
        return np.stack(cols, axis=-1)

    def cross(self, other: "VecExpr3") -> "VecExpr3":
        ax, ay, az = self.components()
        bx, by, bz = other.components()
        return VecExpr3(
            _sub(_mul(ay, bz), _mul(az, by)),
            _sub(_mul(az, bx), _mul(ax, bz)),
            _sub(_mul(ax, by), _mul(ay, bx)),
        )

    def dot(self, other: "VecExpr3") -> Expr:
        ax, ay, az = self.components()
        bx, by, bz = other.components()
        return _add(_add(_mul(ax, bx), _mul(ay, by)), _mul(az, bz))

    def free_vars(self) -> frozenset:
        return free_vars(self.x) | free_vars(self.y) | free_vars(self.z)


def parse_vec3(sx: str, sy: str, sz: str, variables: Iterable[str]) -> VecExpr3:
    vset = frozenset(variables)
    return VecExpr3(parse_expr(sx, vset), parse_expr(sy, vset), parse_expr(sz, vset))
