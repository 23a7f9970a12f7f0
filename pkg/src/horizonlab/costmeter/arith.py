"""Instrumented adjustable precision arithmetic.

Every operation charges the backend's ledger at the declared mantissa length n, whatever
hardware actually executes it: up to 53 bits IEEE doubles are exact enough, above that
an mpmath context running at n bits takes over.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Tuple

import mpmath

from horizonlab.exceptions import ArithmeticDomainError, ContractViolationError
from .ledger import CostLedger, MIN_MANTISSA


HARDWARE_MANTISSA = 53
FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")
BINARY = ("add", "sub", "mul", "div")


class Arithmetic(ABC):
    """Numbers at a fixed mantissa length, charging one ledger."""
    def __init__(self, mantissa_bits: int, ledger: CostLedger | None = None) -> None:
        if mantissa_bits < MIN_MANTISSA:
            raise ContractViolationError(
                f"Mantissa length must be at least {MIN_MANTISSA}, got {mantissa_bits!r}."
            )
        self.mantissa_bits = mantissa_bits
        self.ledger = CostLedger(mantissa_bits) if ledger is None else ledger
        if self.ledger.mantissa_bits != mantissa_bits:
            raise ContractViolationError("Ledger and arithmetic mantissa lengths differ.")

    @abstractmethod
    def const(self, x: float | str | int) -> Any:
        raise NotImplementedError

    @abstractmethod
    def to_float(self, x: Any) -> float:
        raise NotImplementedError

    @abstractmethod
    def _floor(self, x: Any) -> Any:
        raise NotImplementedError

    @abstractmethod
    def _function(self, name: str, x: Any) -> Any:
        raise NotImplementedError

    @property
    @abstractmethod
    def pi(self) -> Any:
        raise NotImplementedError

    def add(self, a: Any, b: Any) -> Any:
        self.ledger.charge(adds=1)
        return a + b

    def sub(self, a: Any, b: Any) -> Any:
        self.ledger.charge(adds=1)
        return a - b

    def mul(self, a: Any, b: Any) -> Any:
        self.ledger.charge(muls=1)
        return a * b

    def div(self, a: Any, b: Any) -> Any:
        if b == 0:
            raise ArithmeticDomainError("Division by zero.")
        self.ledger.charge(divs=1)
        return a / b

    def call(self, name: str, x: Any) -> Any:
        if name not in FUNCTIONS:
            raise ContractViolationError(f"Unknown function '{name}'.")
        if (name == "log" and x <= 0) or (name == "sqrt" and x < 0):
            raise ArithmeticDomainError(f"{name} undefined at {self.to_float(x)!r}.")
        self.ledger.charge(evals=1)
        return self._function(name, x)

    def sin(self, x: Any) -> Any:
        return self.call("sin", x)

    def cos(self, x: Any) -> Any:
        return self.call("cos", x)

    def wrap(self, x: Any, period: Any) -> Any:
        """x - period floor(x / period), in [0, period)."""
        k = self._floor(self.div(x, period))
        return self.sub(x, self.mul(period, k))

    def nint(self, x: Any) -> Any:
        """Nearest integer as floor(x + 1/2)."""
        return self._floor(self.add(x, self.const(0.5)))


class HardwareArithmetic(Arithmetic):
    """IEEE binary64, valid for declared mantissas up to 53 bits."""
    def __init__(self, mantissa_bits: int, ledger: CostLedger | None = None) -> None:
        if mantissa_bits > HARDWARE_MANTISSA:
            raise ContractViolationError(
                f"Hardware arithmetic carries {HARDWARE_MANTISSA} bits, {mantissa_bits} requested."
            )
        super().__init__(mantissa_bits, ledger)

    def const(self, x: float | str | int) -> float:
        return float(x)

    def to_float(self, x: Any) -> float:
        return float(x)

    def _floor(self, x: float) -> float:
        return float(math.floor(x))

    def _function(self, name: str, x: float) -> float:
        return getattr(math, name)(x)

    @property
    def pi(self) -> float:
        return math.pi


class MultiPrecisionArithmetic(Arithmetic):
    """Software floats through a private mpmath context at n bits."""
    def __init__(self, mantissa_bits: int, ledger: CostLedger | None = None) -> None:
        super().__init__(mantissa_bits, ledger)
        self.ctx = mpmath.MPContext()
        self.ctx.prec = mantissa_bits

    def const(self, x: float | str | int) -> Any:
        return self.ctx.mpf(x)

    def to_float(self, x: Any) -> float:
        return float(x)

    def _floor(self, x: Any) -> Any:
        return self.ctx.floor(x)

    def _function(self, name: str, x: Any) -> Any:
        return getattr(self.ctx, name)(x)

    @property
    def pi(self) -> Any:
        return +self.ctx.pi


def arithmetic(mantissa_bits: int, ledger: CostLedger | None = None) -> Arithmetic:
    """Cheapest backend carrying at least mantissa_bits bits."""
    if mantissa_bits <= HARDWARE_MANTISSA:
        return HardwareArithmetic(mantissa_bits, ledger)
    return MultiPrecisionArithmetic(mantissa_bits, ledger)


## Expression graphs
@dataclass(frozen=True, eq=False)
class Node:
    """Vertex of an arithmetic expression graph.

    op is 'const', 'var', one of BINARY or one of FUNCTIONS. Shared sub-expressions
    are evaluated, and charged, once.
    """
    op: str
    args: Tuple[Node, ...] = ()
    value: float | int | str | None = None

    def __post_init__(self) -> None:
        arity = {"const": 0, "var": 0, **{b: 2 for b in BINARY}, **{f: 1 for f in FUNCTIONS}}
        if self.op not in arity:
            raise ContractViolationError(f"Unknown operation '{self.op}'.")
        if len(self.args) != arity[self.op]:
            raise ContractViolationError(
                f"'{self.op}' takes {arity[self.op]} arguments, got {len(self.args)}."
            )

    @staticmethod
    def _lift(x: Node | float | int | str) -> Node:
        return x if isinstance(x, Node) else Node("const", value=x)

    def __add__(self, other): return Node("add", (self, self._lift(other)))
    def __radd__(self, other): return Node("add", (self._lift(other), self))
    def __sub__(self, other): return Node("sub", (self, self._lift(other)))
    def __rsub__(self, other): return Node("sub", (self._lift(other), self))
    def __mul__(self, other): return Node("mul", (self, self._lift(other)))
    def __rmul__(self, other): return Node("mul", (self._lift(other), self))
    def __truediv__(self, other): return Node("div", (self, self._lift(other)))
    def __rtruediv__(self, other): return Node("div", (self._lift(other), self))


def const(value: float | int | str) -> Node:
    return Node("const", value=value)


def var(name: str) -> Node:
    return Node("var", value=name)


def call(name: str, x: Node) -> Node:
    return Node(name, (x,))


@dataclass(frozen=True)
class Program:
    outputs: Tuple[Node, ...] = ()


def precise_eval(
    program: Program,
    n: int,
    ledger: CostLedger | None = None,
    env: Mapping[str, float | str] | None = None,
) -> Tuple[List[Any], CostLedger]:
    """Evaluate every output of program at n bits, charging ledger per operation.

    :raises ArithmeticDomainError: division by zero, log or sqrt out of domain
    """
    arith = arithmetic(n, ledger)
    env = env or {}
    memo: Dict[int, Any] = {}

    for root in program.outputs:
        stack: List[Tuple[Node, bool]] = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in memo:
                continue
            if not expanded and node.args:
                stack.append((node, True))
                stack.extend((a, False) for a in reversed(node.args) if id(a) not in memo)
                continue
            args = [memo[id(a)] for a in node.args]
            match node.op:
                case "const":
                    memo[id(node)] = arith.const(node.value)
                case "var":
                    if node.value not in env:
                        raise ContractViolationError(f"Unbound variable '{node.value}'.")
                    memo[id(node)] = arith.const(env[node.value])
                case "add" | "sub" | "mul" | "div":
                    memo[id(node)] = getattr(arith, node.op)(*args)
                case _:
                    memo[id(node)] = arith.call(node.op, args[0])

    return [memo[id(root)] for root in program.outputs], arith.ledger
