"""Exact rationals and sparse multivariate polynomials over Q.

Coefficients everywhere in the package are either ``fractions.Fraction``
values (specialized mode) or :class:`PolyQ` instances (symbolic mode).  Both
support ``+ - *`` with plain integers, which is all the operator engine needs.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping

Rat = Fraction

# parameter names used throughout; eps never appears (eps = hbar * c)
HBAR = "hbar"
LEVEL = "c"
LAMBDA = "lam"


class ParameterMismatch(ValueError):
    pass


class MissingParameter(KeyError):
    pass


def rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def rat_str(x: Fraction) -> str:
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


class PolyQ:
    """Sparse polynomial with rational coefficients in a fixed tuple of parameters.

    ``terms`` maps exponent tuples (aligned with ``params``) to nonzero
    Fractions.
    """

    __slots__ = ("params", "terms")

    def __init__(self, params: Iterable[str], terms: Mapping[tuple, object] | None = None):
        self.params = tuple(params)
        clean = {}
        if terms:
            k = len(self.params)
            for exps, coef in terms.items():
                if len(exps) != k:
                    raise ParameterMismatch(f"exponent vector {exps} does not match {self.params}")
                coef = rat(coef)
                if coef:
                    clean[tuple(exps)] = clean.get(tuple(exps), 0) + coef
            clean = {e: v for e, v in clean.items() if v}
        self.terms = clean

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, params, value) -> "PolyQ":
        params = tuple(params)
        return cls(params, {(0,) * len(params): value})

    @classmethod
    def var(cls, params, name: str) -> "PolyQ":
        params = tuple(params)
        if name not in params:
            raise ParameterMismatch(f"{name!r} not in parameter set {params}")
        exps = tuple(1 if p == name else 0 for p in params)
        return cls(params, {exps: 1})

    @classmethod
    def gens(cls, params) -> tuple["PolyQ", ...]:
        params = tuple(params)
        return tuple(cls.var(params, p) for p in params)

    # helpers ------------------------------------------------------------------
    def _coerce(self, other) -> "PolyQ":
        if isinstance(other, PolyQ):
            if other.params != self.params:
                raise ParameterMismatch(f"{self.params} vs {other.params}")
            return other
        if isinstance(other, (int, Fraction)):
            return PolyQ.const(self.params, other)
        return NotImplemented

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * len(self.params)}

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * len(self.params), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> set[str]:
        used = set()
        for exps in self.terms:
            used.update(p for p, e in zip(self.params, exps) if e)
        return used

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, v in other.terms.items():
            s = out.get(e, 0) + v
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        res = PolyQ.__new__(PolyQ)
        res.params, res.terms = self.params, out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = PolyQ.__new__(PolyQ)
        res.params, res.terms = self.params, {e: -v for e, v in self.terms.items()}
        return res

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple, Fraction] = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + v1 * v2
        return PolyQ(self.params, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        res = PolyQ.const(self.params, 1)
        base = self
        while k:
            if k & 1:
                res = res * base
            base = base * base
            k >>= 1
        return res

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return not (self - other).terms
        if isinstance(other, PolyQ):
            return self.params == other.params and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.params, frozenset(self.terms.items())))

    # evaluation ---------------------------------------------------------------
    def specialize(self, assignment: Mapping[str, object]) -> Fraction:
        needed = self.variables()
        missing = needed - set(assignment)
        if missing:
            raise MissingParameter(f"no value for {sorted(missing)}")
        vals = [rat(assignment[p]) if p in needed else Fraction(0) for p in self.params]
        total = Fraction(0)
        for exps, coef in self.terms.items():
            term = coef
            for v, e in zip(vals, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def substitute(self, assignment: Mapping[str, object]) -> "PolyQ":
        """Partial substitution; values may be numbers or PolyQ over the same params."""
        res = PolyQ(self.params)
        for exps, coef in self.terms.items():
            term = PolyQ.const(self.params, coef)
            for p, e in zip(self.params, exps):
                if not e:
                    continue
                if p in assignment:
                    term = term * (self._coerce(assignment[p]) ** e)
                else:
                    term = term * PolyQ.var(self.params, p) ** e
            res = res + term
        return res

    def monomials(self) -> list[tuple[str, str]]:
        """Sorted (monomial, coefficient) pairs, coefficients rendered as p/q."""
        rows = []
        for exps in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            mono = "*".join(
                p if e == 1 else f"{p}^{e}" for p, e in zip(self.params, exps) if e
            ) or "1"
            rows.append((mono, rat_str(self.terms[exps])))
        return rows

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, coef in self.monomials():
            c = Fraction(coef)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def specialize(p, assignment: Mapping[str, object]) -> Fraction:
    """Evaluate a PolyQ (or pass a number through) at rational parameter values."""
    if isinstance(p, PolyQ):
        return p.specialize(assignment)
    return rat(p)


def poly_arith(a: PolyQ, b: PolyQ, op: str) -> PolyQ:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def random_rational(rng: random.Random, nonzero: bool = False, bound: int = 20) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x or not nonzero:
            return x


def draw_parameters(rng: random.Random, names: Iterable[str], nonzero: Iterable[str] = (HBAR,)) -> dict[str, Fraction]:
    nonzero = set(nonzero)
    return {name: random_rational(rng, nonzero=name in nonzero) for name in names}
