"""Order-2 forward-mode jets and exact evaluation of expressions.

A :class:`Jet2` carries a value together with its gradient and Hessian
with respect to an ordered list of active variables.  Arithmetic on jets
propagates derivatives exactly (to floating-point rounding), so every
geometric quantity that needs at most two derivatives of an immersion is
free of truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnknownIdentifier
from .expr import BinOp, Call, Const, CONSTANTS, Expression, Neg, Num, Var, parse, unparse


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and symmetric Hessian in ``m`` active variables."""

    value: float
    grad: np.ndarray
    hess: np.ndarray

    @property
    def m(self):
        return self.grad.shape[0]

    @staticmethod
    def constant(value, m):
        return Jet2(float(value), np.zeros(m), np.zeros((m, m)))

    @staticmethod
    def variable(value, index, m):
        g = np.zeros(m)
        g[index] = 1.0
        return Jet2(float(value), g, np.zeros((m, m)))

    def is_constant(self):
        return not self.grad.any() and not self.hess.any()

    def _lift(self, other):
        if isinstance(other, Jet2):
            return other
        return Jet2.constant(other, self.m)

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __add__(self, other):
        other = self._lift(other)
        return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        cross = np.outer(self.grad, other.grad)
        return Jet2(
            self.value * other.value,
            self.value * other.grad + other.value * self.grad,
            self.value * other.hess + other.value * self.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return self * _reciprocal(other, None)

    def __rtruediv__(self, other):
        return self._lift(other) / self


def _chain(u, f0, f1, f2):
    """Compose a scalar function with jet ``u`` via the chain rule."""
    return Jet2(f0, f1 * u.grad, f1 * u.hess + f2 * np.outer(u.grad, u.grad))


def _reciprocal(u, node):
    if u.value == 0.0:
        raise DomainError("division by zero", node)
    v = u.value
    return _chain(u, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))


def _pow_int(base_value, k):
    """Binary exponentiation on plain floats, k >= 1."""
    result = None
    acc = base_value
    while k:
        if k & 1:
            result = acc if result is None else result * acc
        acc = acc * acc
        k >>= 1
    return result


def _pow_int_jet(u, k, node):
    """Binary exponentiation on jets; mirrors :func:`_pow_int` exactly."""
    if k == 0:
        return Jet2.constant(1.0, u.m)
    if k < 0:
        return _reciprocal(_pow_int_jet(u, -k, node), node)
    result = None
    acc = u
    while k:
        if k & 1:
            result = acc if result is None else result * acc
        acc = acc * acc
        k >>= 1
    return result


def _apply_function(name, u, node, m):
    v = u.value
    if name == "sin":
        s, c = math.sin(v), math.cos(v)
        return _chain(u, s, c, -s)
    if name == "cos":
        s, c = math.sin(v), math.cos(v)
        return _chain(u, c, -s, -c)
    if name == "tan":
        w = math.tan(v)
        d = 1.0 + w * w
        return _chain(u, w, d, 2.0 * w * d)
    if name == "sinh":
        return _chain(u, math.sinh(v), math.cosh(v), math.sinh(v))
    if name == "cosh":
        return _chain(u, math.cosh(v), math.sinh(v), math.cosh(v))
    if name == "tanh":
        w = math.tanh(v)
        d = 1.0 - w * w
        return _chain(u, w, d, -2.0 * w * d)
    if name == "exp":
        w = math.exp(v)
        return _chain(u, w, w, w)
    if name == "log":
        if v <= 0.0:
            raise DomainError(f"log of non-positive value {v!r}", node)
        return _chain(u, math.log(v), 1.0 / v, -1.0 / (v * v))
    if name == "sqrt":
        if v < 0.0:
            raise DomainError(f"sqrt of negative value {v!r}", node)
        if v == 0.0:
            if m > 0:
                raise DomainError("sqrt is not differentiable at 0", node)
            return Jet2.constant(0.0, m)
        w = math.sqrt(v)
        return _chain(u, w, 0.5 / w, -0.25 / (w * v))
    if name == "abs":
        if v == 0.0:
            if m > 0:
                raise DomainError("abs is not differentiable at 0", node)
            return Jet2.constant(0.0, m)
        sign = 1.0 if v > 0.0 else -1.0
        return _chain(u, abs(v), sign, 0.0)
    raise UnknownIdentifier(name)


def _pow_jet(base, exponent, node, m):
    if exponent.is_constant():
        k = exponent.value
        if k == round(k) and abs(k) <= 2**31:
            return _pow_int_jet(base, int(round(k)), node)
    if base.value <= 0.0:
        raise DomainError(
            f"non-integer power of non-positive base {base.value!r}", node
        )
    return _apply_function("exp", exponent * _apply_function("log", base, node, m), node, m)


def eval_jet2(expr, bindings, active=()):
    """Evaluate ``expr`` as an order-2 jet.

    ``bindings`` maps every variable appearing in ``expr`` to a real
    value; ``active`` is the ordered subset of variables that derivatives
    are taken against.  With an empty ``active`` list this is a plain
    evaluation.
    """
    active = tuple(active)
    m = len(active)
    index = {name: i for i, name in enumerate(active)}

    def rec(node):
        if isinstance(node, Num):
            return Jet2.constant(node.value, m)
        if isinstance(node, Const):
            return Jet2.constant(CONSTANTS[node.name], m)
        if isinstance(node, Var):
            if node.name not in bindings:
                raise UnknownIdentifier(node.name)
            value = bindings[node.name]
            if node.name in index:
                return Jet2.variable(value, index[node.name], m)
            return Jet2.constant(value, m)
        if isinstance(node, Neg):
            return -rec(node.operand)
        if isinstance(node, Call):
            return _apply_function(node.func, rec(node.arg), node, m)
        if isinstance(node, BinOp):
            left = rec(node.left)
            right = rec(node.right)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            if node.op == "/":
                return left * _reciprocal(right, node)
            return _pow_jet(left, right, node, m)
        raise TypeError(f"not an Expression: {node!r}")

    return rec(expr)


def eval_value(expr, bindings):
    """Plain evaluation; follows the same domain rules as the jet path."""

    def rec(node):
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Const):
            return CONSTANTS[node.name]
        if isinstance(node, Var):
            if node.name not in bindings:
                raise UnknownIdentifier(node.name)
            return float(bindings[node.name])
        if isinstance(node, Neg):
            return -rec(node.operand)
        if isinstance(node, Call):
            name = node.func
            v = rec(node.arg)
            if name == "log" and v <= 0.0:
                raise DomainError(f"log of non-positive value {v!r}", node)
            if name == "sqrt" and v < 0.0:
                raise DomainError(f"sqrt of negative value {v!r}", node)
            return getattr(math, name)(v) if name != "abs" else abs(v)
        if isinstance(node, BinOp):
            a = rec(node.left)
            b = rec(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                if b == 0.0:
                    raise DomainError("division by zero", node)
                return a / b
            if b == round(b) and abs(b) <= 2**31:
                k = int(round(b))
                if k == 0:
                    return 1.0
                p = _pow_int(a, abs(k))
                if k > 0:
                    return p
                if p == 0.0:
                    raise DomainError("division by zero", node)
                return 1.0 / p
            if a <= 0.0:
                raise DomainError(
                    f"non-integer power of non-positive base {a!r}", node
                )
            return math.exp(b * math.log(a))
        raise TypeError(f"not an Expression: {node!r}")

    return rec(expr)


def as_expression(obj):
    """Coerce a string or AST into an :class:`Expression`."""
    if isinstance(obj, Expression):
        return obj
    if isinstance(obj, str):
        return parse(obj)
    if isinstance(obj, (int, float)):
        value = float(obj)
        return Neg(Num(-value)) if value < 0 else Num(value)
    raise TypeError(f"cannot interpret {obj!r} as an expression")


__all__ = [
    "Jet2",
    "eval_jet2",
    "eval_value",
    "as_expression",
    "parse",
    "unparse",
]
