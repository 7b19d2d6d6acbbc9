"""Nonlinear plants in a closed arithmetic form, and their linearization.

Plant maps are expression trees over state variables ``x1..xn`` and input
variables ``u1..um`` built from constants, +, -, *, negation and integer
powers.  Keeping the language closed makes analytic differentiation exact and
the JSON plant format round-trippable; arbitrary callables are deliberately
not accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .affine_ss import AffineStateSpace
from .errors import DimensionMismatch, NonFiniteEvaluation, StepTooSmall


class Expr:
    """Base node; subclasses implement evaluate/differentiate/to_json."""

    def evaluate(self, env: dict[str, float]) -> float:
        raise NotImplementedError

    def differentiate(self, name: str) -> "Expr":
        raise NotImplementedError

    def variables(self) -> set[str]:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def __add__(self, other):
        return Add(self, _wrap(other))

    def __radd__(self, other):
        return Add(_wrap(other), self)

    def __sub__(self, other):
        return Sub(self, _wrap(other))

    def __rsub__(self, other):
        return Sub(_wrap(other), self)

    def __mul__(self, other):
        return Mul(self, _wrap(other))

    def __rmul__(self, other):
        return Mul(_wrap(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent: int):
        return Pow(self, exponent)


def _wrap(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return Const(float(value))


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def evaluate(self, env):
        return self.value

    def differentiate(self, name):
        return Const(0.0)

    def variables(self):
        return set()

    def to_json(self):
        return ["const", self.value]


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def evaluate(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise NonFiniteEvaluation(f"unknown variable {self.name!r}") from None

    def differentiate(self, name):
        return Const(1.0 if name == self.name else 0.0)

    def variables(self):
        return {self.name}

    def to_json(self):
        return ["var", self.name]


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr

    def evaluate(self, env):
        return self.left.evaluate(env) + self.right.evaluate(env)

    def differentiate(self, name):
        return Add(self.left.differentiate(name), self.right.differentiate(name))

    def variables(self):
        return self.left.variables() | self.right.variables()

    def to_json(self):
        return ["+", self.left.to_json(), self.right.to_json()]


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def evaluate(self, env):
        return self.left.evaluate(env) - self.right.evaluate(env)

    def differentiate(self, name):
        return Sub(self.left.differentiate(name), self.right.differentiate(name))

    def variables(self):
        return self.left.variables() | self.right.variables()

    def to_json(self):
        return ["-", self.left.to_json(), self.right.to_json()]


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr

    def evaluate(self, env):
        return self.left.evaluate(env) * self.right.evaluate(env)

    def differentiate(self, name):
        return Add(
            Mul(self.left.differentiate(name), self.right),
            Mul(self.left, self.right.differentiate(name)),
        )

    def variables(self):
        return self.left.variables() | self.right.variables()

    def to_json(self):
        return ["*", self.left.to_json(), self.right.to_json()]


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def evaluate(self, env):
        return -self.operand.evaluate(env)

    def differentiate(self, name):
        return Neg(self.operand.differentiate(name))

    def variables(self):
        return self.operand.variables()

    def to_json(self):
        return ["neg", self.operand.to_json()]


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {self.exponent!r}")

    def evaluate(self, env):
        return self.base.evaluate(env) ** self.exponent

    def differentiate(self, name):
        if self.exponent == 0:
            return Const(0.0)
        return Mul(
            Mul(Const(float(self.exponent)), Pow(self.base, self.exponent - 1)),
            self.base.differentiate(name),
        )

    def variables(self):
        return self.base.variables()

    def to_json(self):
        return ["pow", self.base.to_json(), self.exponent]


def expr_from_json(node) -> Expr:
    """Parse the list-based expression encoding used in plant JSON files."""
    if not isinstance(node, (list, tuple)) or not node:
        raise ValueError(f"malformed expression node: {node!r}")
    op, *args = node
    if op == "const" and len(args) == 1:
        return Const(float(args[0]))
    if op == "var" and len(args) == 1:
        return Var(str(args[0]))
    if op == "+" and len(args) == 2:
        return Add(expr_from_json(args[0]), expr_from_json(args[1]))
    if op == "-" and len(args) == 2:
        return Sub(expr_from_json(args[0]), expr_from_json(args[1]))
    if op == "*" and len(args) == 2:
        return Mul(expr_from_json(args[0]), expr_from_json(args[1]))
    if op == "neg" and len(args) == 1:
        return Neg(expr_from_json(args[0]))
    if op == "pow" and len(args) == 2:
        return Pow(expr_from_json(args[0]), int(args[1]))
    raise ValueError(f"malformed expression node: {node!r}")


def state_var(i: int) -> Var:
    return Var(f"x{i}")


def input_var(i: int) -> Var:
    return Var(f"u{i}")


@dataclass(frozen=True)
class NonlinearPlant:
    """State-update and output maps as expression trees.

    ``f`` holds the n state-update expressions, ``h`` the p output
    expressions, all over the variables x1..xn and u1..um.
    """

    f: tuple[Expr, ...]
    h: tuple[Expr, ...]
    n: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "h", tuple(self.h))
        if len(self.f) != self.n:
            raise DimensionMismatch(f"expected {self.n} state updates, got {len(self.f)}")
        allowed = {f"x{i}" for i in range(1, self.n + 1)}
        allowed |= {f"u{i}" for i in range(1, self.m + 1)}
        used = set()
        for expr in (*self.f, *self.h):
            used |= expr.variables()
        unknown = used - allowed
        if unknown:
            raise DimensionMismatch(f"expressions use undeclared variables {sorted(unknown)}")

    @property
    def p(self) -> int:
        return len(self.h)

    def _env(self, x, u) -> dict[str, float]:
        env = {f"x{i + 1}": float(x[i]) for i in range(self.n)}
        env.update({f"u{i + 1}": float(u[i]) for i in range(self.m)})
        return env

    def _eval_stack(self, exprs, x, u) -> np.ndarray:
        env = self._env(x, u)
        try:
            values = np.array([e.evaluate(env) for e in exprs], dtype=float)
        except OverflowError:
            raise NonFiniteEvaluation("plant map overflowed") from None
        if not np.all(np.isfinite(values)):
            raise NonFiniteEvaluation("plant map evaluated to a non-finite value")
        return values

    def eval_f(self, x, u) -> np.ndarray:
        return self._eval_stack(self.f, x, u)

    def eval_h(self, x, u) -> np.ndarray:
        return self._eval_stack(self.h, x, u)


def _check_point(plant: NonlinearPlant, xbar, ubar, ybar):
    xbar = np.asarray(xbar, dtype=float).reshape(-1)
    ubar = np.asarray(ubar, dtype=float).reshape(-1)
    ybar = np.asarray(ybar, dtype=float).reshape(-1)
    if xbar.size != plant.n or ubar.size != plant.m or ybar.size != plant.p:
        raise DimensionMismatch(
            f"operating point sizes ({xbar.size}, {ubar.size}, {ybar.size}) do not "
            f"match plant dimensions ({plant.n}, {plant.m}, {plant.p})"
        )
    return xbar, ubar, ybar


def _analytic_jacobians(plant: NonlinearPlant, xbar, ubar):
    env = plant._env(xbar, ubar)
    names_x = [f"x{i + 1}" for i in range(plant.n)]
    names_u = [f"u{i + 1}" for i in range(plant.m)]

    def jac(exprs, names):
        try:
            J = np.array(
                [[e.differentiate(v).evaluate(env) for v in names] for e in exprs],
                dtype=float,
            ).reshape(len(exprs), len(names))
        except OverflowError:
            raise NonFiniteEvaluation("plant Jacobian overflowed") from None
        if not np.all(np.isfinite(J)):
            raise NonFiniteEvaluation("plant Jacobian is not finite")
        return J

    return jac(plant.f, names_x), jac(plant.f, names_u), jac(plant.h, names_x), jac(plant.h, names_u)


def _fd_jacobians(plant: NonlinearPlant, xbar, ubar, step: float):
    scale = max(1.0, float(np.max(np.abs(np.concatenate([xbar, ubar, [0.0]])))))
    if step < 64 * np.finfo(float).eps * scale:
        raise StepTooSmall(f"step {step} below the safe minimum for scale {scale}")

    def column(evaluator, base_x, base_u, which, j):
        d = np.zeros_like(base_x if which == "x" else base_u)
        d[j] = step
        if which == "x":
            hi = evaluator(base_x + d, base_u)
            lo = evaluator(base_x - d, base_u)
        else:
            hi = evaluator(base_x, base_u + d)
            lo = evaluator(base_x, base_u - d)
        return (hi - lo) / (2 * step)

    def jac(evaluator, rows, which, ncols):
        J = np.zeros((rows, ncols))
        for j in range(ncols):
            J[:, j] = column(evaluator, xbar, ubar, which, j)
        return J

    return (
        jac(plant.eval_f, plant.n, "x", plant.n),
        jac(plant.eval_f, plant.n, "u", plant.m),
        jac(plant.eval_h, plant.p, "x", plant.n),
        jac(plant.eval_h, plant.p, "u", plant.m),
    )


def linearize(
    plant: NonlinearPlant,
    xbar,
    ubar,
    ybar,
    mode: str = "analytic",
    step: float = 1e-6,
) -> AffineStateSpace:
    """Affine model of a plant around an operating point (not necessarily an
    equilibrium).

    A, B, C, D are the Jacobians of the maps at (xbar, ubar); the offsets are
    the map residuals E = f(xbar, ubar) - xbar and F = h(xbar, ubar) - ybar,
    which vanish exactly at an equilibrium.  ``mode`` is either ``analytic``
    (exact differentiation of the expression trees) or ``fd`` (central
    differences with the given step).
    """
    xbar, ubar, ybar = _check_point(plant, xbar, ubar, ybar)
    if mode == "analytic":
        A, B, C, D = _analytic_jacobians(plant, xbar, ubar)
    elif mode == "fd":
        if not math.isfinite(step) or step <= 0:
            raise StepTooSmall(f"finite-difference step must be positive, got {step}")
        A, B, C, D = _fd_jacobians(plant, xbar, ubar, step)
    else:
        raise ValueError(f"mode must be 'analytic' or 'fd', got {mode!r}")
    E = plant.eval_f(xbar, ubar) - xbar
    F = plant.eval_h(xbar, ubar) - ybar
    return AffineStateSpace(
        A.reshape(plant.n, plant.n),
        B.reshape(plant.n, plant.m),
        C.reshape(plant.p, plant.n),
        D.reshape(plant.p, plant.m),
        E,
        F,
    )
