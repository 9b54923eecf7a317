"""Normally ordered series templates, operator expressions and power series.

A :class:`SeriesOpTemplate` encodes a finite description of an infinite sum

    coef * sum_{x, z} weight(z) * E_{r_1,c_1} t^{e_1(z)} ... E_{r_k,c_k} t^{e_k(z)}

where rows/columns are fixed indices or bound column variables ``x*`` and the
exponents are affine in bound degree variables ``z*`` (each ranging over the
non-negative integers).  Applied to a vector of a smooth module, factors act
right to left; a degree variable is first met (scanning right to left) with
coefficient +1, so the requirement that the module has no positive-degree part
bounds it from above.  No truncation is ever needed.

Operator expressions (:class:`OpExpr`) combine templates by sums, scalar
multiples, compositions and commutators.  They are evaluated either on single
vectors (sparse backend, any coefficient ring) or as block matrices between
graded pieces (matrix backend, rationals via python-flint).
"""

from __future__ import annotations

import re
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import comb
from typing import Callable, Mapping, Sequence

import flint

from .symfun import eval_h
from .vermamod import InducedModule, add_into, scale, word_degree


class NonConformingTemplate(ValueError):
    pass


class SeriesError(ValueError):
    pass


# ---------------------------------------------------------------------------
# affine exponents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Affine:
    """const + sum coef * z over named degree variables."""

    const: int = 0
    coefs: tuple = ()  # sorted ((name, coef), ...), no zero coefs

    @staticmethod
    def make(const: int = 0, coefs: Mapping[str, int] | None = None) -> "Affine":
        items = tuple(sorted((k, v) for k, v in (coefs or {}).items() if v))
        return Affine(const, items)

    @staticmethod
    def var(name: str, coef: int = 1, const: int = 0) -> "Affine":
        return Affine.make(const, {name: coef})

    def __add__(self, other: "Affine | int") -> "Affine":
        if isinstance(other, int):
            return Affine(self.const + other, self.coefs)
        d = dict(self.coefs)
        for k, v in other.coefs:
            d[k] = d.get(k, 0) + v
        return Affine.make(self.const + other.const, d)

    def __neg__(self) -> "Affine":
        return Affine(-self.const, tuple((k, -v) for k, v in self.coefs))

    def __sub__(self, other):
        return self + (-other)

    def names(self) -> set[str]:
        return {k for k, _ in self.coefs}

    def coef(self, name: str) -> int:
        return dict(self.coefs).get(name, 0)

    def value(self, assign: Mapping[str, int]) -> int:
        return self.const + sum(v * assign[k] for k, v in self.coefs)

    def rename(self, mapping: Mapping[str, str]) -> "Affine":
        return Affine.make(self.const, {mapping.get(k, k): v for k, v in self.coefs})

    def __str__(self) -> str:
        parts = []
        for k, v in self.coefs:
            if v == 1:
                parts.append(f"+{k}")
            elif v == -1:
                parts.append(f"-{k}")
            else:
                parts.append(f"{v:+d}*{k}")
        if self.const or not parts:
            parts.append(f"{self.const:+d}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def parse_affine(text: str) -> Affine:
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty exponent")
    const = 0
    coefs: dict[str, int] = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
        k = -1 if sign == "-" else 1
        if "*" in body:
            num, name = body.split("*")
            coefs[name] = coefs.get(name, 0) + k * int(num)
        elif body.lstrip("-").isdigit():
            const += k * int(body)
        else:
            coefs[body] = coefs.get(body, 0) + k
    return Affine.make(const, coefs)


# ---------------------------------------------------------------------------
# templates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HWeight:
    """Coefficient h_deg((a_1) c, ..., (a_p) c) with affine a_k in the z's."""

    deg: int
    args: tuple  # tuple of Affine
    level: object

    def value(self, assign: Mapping[str, int]):
        if self.deg < 0:
            return 0
        return eval_h(self.deg, [a.value(assign) * self.level for a in self.args])

    def names(self) -> set[str]:
        out: set[str] = set()
        for a in self.args:
            out |= a.names()
        return out

    def rename(self, mapping):
        return HWeight(self.deg, tuple(a.rename(mapping) for a in self.args), self.level)

    def __str__(self):
        return f"h_{self.deg}(" + ", ".join(f"({a})*c" for a in self.args) + ")"


Index = object  # int or str (bound column variable)


@dataclass(frozen=True)
class Factor:
    row: Index
    col: Index
    exp: Affine

    def __str__(self):
        return f"E[{self.row},{self.col}]t^({self.exp})"


class SeriesOpTemplate:
    """Validated normally ordered sum; immutable after construction."""

    __slots__ = ("n", "factors", "coef", "weight", "xvars", "zvars", "shift", "_needed", "_new")

    def __init__(self, n: int, factors: Sequence[Factor], coef=1, weight: HWeight | None = None):
        if not factors:
            raise NonConformingTemplate("a template needs at least one factor")
        self.n = n
        self.factors = tuple(factors)
        self.coef = coef
        self.weight = weight
        xs: list[str] = []
        zs: list[str] = []
        for f in self.factors:
            for idx in (f.row, f.col):
                if isinstance(idx, int):
                    if not 1 <= idx <= n:
                        raise NonConformingTemplate(f"index {idx} out of range for rank {n}")
                elif idx not in xs:
                    xs.append(idx)
            for z in sorted(f.exp.names()):
                if z not in zs:
                    zs.append(z)
        self.xvars = tuple(xs)
        self.zvars = tuple(zs)
        if weight is not None and not weight.names() <= set(zs):
            raise NonConformingTemplate("weight uses a degree variable absent from the exponents")
        total = Affine()
        for f in self.factors:
            total = total + f.exp
        if total.coefs:
            raise NonConformingTemplate(f"exponent sum {total} is not constant")
        self.shift = total.const

        # right-to-left scan: variables bound at each step, variables needed afterwards
        seen: set[str] = set()
        new_per_step = []
        for f in reversed(self.factors):
            new_x = [v for v in dict.fromkeys((f.col, f.row)) if isinstance(v, str) and v not in seen]
            new_z = [z for z in f.exp.names() if z not in seen]
            if len(new_z) > 1:
                raise NonConformingTemplate(f"factor {f} introduces several degree variables")
            if new_z and f.exp.coef(new_z[0]) != 1:
                raise NonConformingTemplate(
                    f"degree variable {new_z[0]} first appears with coefficient {f.exp.coef(new_z[0])}"
                )
            new_per_step.append((tuple(new_x), new_z[0] if new_z else None))
            seen.update(new_x)
            seen.update(new_z)
        self._new = tuple(new_per_step)
        needed = []
        later: set[str] = set(weight.names()) if weight is not None else set()
        # needed[k] = vars used by factors strictly left of position k (plus weight)
        acc = set(later)
        per_pos = [None] * len(self.factors)
        for k, f in enumerate(self.factors):
            per_pos[k] = frozenset(acc)
            for idx in (f.row, f.col):
                if isinstance(idx, str):
                    acc.add(idx)
            acc |= f.exp.names()
        needed = per_pos
        self._needed = tuple(needed)

    # ---------------------------------------------------------------- rendering
    def dump(self) -> str:
        head = f"coef={self.coef}"
        if self.weight is not None:
            head += f" weight={self.weight}"
        body = " ".join(str(f) for f in self.factors)
        sums = ""
        if self.xvars or self.zvars:
            sums = "sum[" + ",".join(list(self.xvars) + [f"{z}>=0" for z in self.zvars]) + "] "
        return f"{head} :: {sums}{body}"

    def __repr__(self):
        return f"SeriesOpTemplate({self.dump()})"

    def canonical(self) -> tuple:
        """Structural key after renaming bound variables by first appearance."""
        xmap: dict[str, str] = {}
        zmap: dict[str, str] = {}
        for f in self.factors:
            for idx in (f.row, f.col):
                if isinstance(idx, str) and idx not in xmap:
                    xmap[idx] = f"x{len(xmap) + 1}"
            for z, _ in f.exp.coefs:
                if z not in zmap:
                    zmap[z] = f"z{len(zmap) + 1}"
        facs = tuple(
            (xmap.get(f.row, f.row), xmap.get(f.col, f.col), f.exp.rename(zmap)) for f in self.factors
        )
        w = None
        if self.weight is not None:
            w = (self.weight.deg, tuple(sorted(str(a.rename(zmap)) for a in self.weight.args)))
        return (self.n, facs, w)

    # ---------------------------------------------------------------- enumeration
    def _z_range(self, exp: Affine, znew: str, assign: Mapping[str, int], depth: int, box: int | None):
        rest = exp.const + sum(v * assign[k] for k, v in exp.coefs if k != znew)
        hi = depth - rest if box is None else box
        return range(0, max(hi, -1) + 1)

    def run(self, start, depth_of, step, add, scale_by, box: int | None = None):
        """Generic right-to-left frontier sweep.

        ``start`` is the input value; ``step(value, letter)`` applies an E-letter
        and returns None for a vanishing result; ``depth_of(value)`` gives the
        current depth.  Returns the summed output or None.
        """
        n = self.n
        # states are keyed by (needed assignment, current depth)
        states: dict = {((), depth_of(start)): start}
        K = len(self.factors)
        for pos in range(K - 1, -1, -1):
            f = self.factors[pos]
            new_x, new_z = self._new[K - 1 - pos]
            keep = self._needed[pos]
            nxt: dict = {}
            for (assign_t, d), value in states.items():
                assign = dict(assign_t)
                xs_iter = product(range(1, n + 1), repeat=len(new_x)) if new_x else [()]
                for xv in xs_iter:
                    for name, val in zip(new_x, xv):
                        assign[name] = val
                    zs_iter = self._z_range(f.exp, new_z, assign, d, box) if new_z else [None]
                    for zv in zs_iter:
                        if new_z is not None:
                            assign[new_z] = zv
                        i = f.row if isinstance(f.row, int) else assign[f.row]
                        j = f.col if isinstance(f.col, int) else assign[f.col]
                        s = f.exp.value(assign)
                        out = step(value, (s, i, j))
                        if out is None:
                            continue
                        key = (tuple(sorted((k, v) for k, v in assign.items() if k in keep)), d - s)
                        prev = nxt.get(key)
                        nxt[key] = out if prev is None else add(prev, out)
            states = nxt
            if not states:
                return None
        total = None
        for (assign_t, _), value in states.items():
            w = self.coef
            if self.weight is not None:
                w = w * self.weight.value(dict(assign_t))
            if not w:
                continue
            term = scale_by(value, w)
            total = term if total is None else add(total, term)
        return total


# ---------------------------------------------------------------------------
# operator expressions
# ---------------------------------------------------------------------------


class OpExpr:
    """Immutable operator expression; build with the helper constructors below."""

    __slots__ = ("kind", "args", "shift", "n", "__weakref__")

    def __init__(self, kind: str, args: tuple, shift: int, n: int):
        self.kind = kind
        self.args = args
        self.shift = shift
        self.n = n

    def __repr__(self):
        return render(self)

    # sugar
    def __add__(self, other):
        return op_sum([self, other])

    def __sub__(self, other):
        return op_sum([self, op_scale(-1, other)])

    def __neg__(self):
        return op_scale(-1, self)

    def __matmul__(self, other):
        return op_compose(self, other)

    def __rmul__(self, scalar):
        return op_scale(scalar, self)

    def is_const(self) -> bool:
        return self.kind == "const"

    def const_value(self):
        if self.kind != "const":
            raise SeriesError("not a scalar operator")
        return self.args[0]


def op_const(n: int, value) -> OpExpr:
    return OpExpr("const", (value,), 0, n)


def op_zero(n: int) -> OpExpr:
    return op_const(n, 0)


def is_zero(a: OpExpr) -> bool:
    return a.kind == "const" and not a.args[0]


def op_leaf(t: SeriesOpTemplate) -> OpExpr:
    return OpExpr("leaf", (t,), t.shift, t.n)


def op_letter(n: int, i: int, j: int, s: int = 0) -> OpExpr:
    return op_leaf(SeriesOpTemplate(n, [Factor(i, j, Affine(s))]))


def _check_rank(*ops):
    ranks = {o.n for o in ops}
    if len(ranks) > 1:
        raise SeriesError(f"rank mismatch {sorted(ranks)}")


def op_scale(c, a: OpExpr) -> OpExpr:
    if not c or is_zero(a):
        return op_zero(a.n)
    if c == 1:
        return a
    if a.kind == "const":
        return op_const(a.n, c * a.args[0])
    if a.kind == "scale":
        return op_scale(c * a.args[0], a.args[1])
    return OpExpr("scale", (c, a), a.shift, a.n)


def op_sum(terms: Sequence[OpExpr]) -> OpExpr:
    terms = list(terms)
    if not terms:
        raise SeriesError("empty sum needs a rank; use op_zero")
    _check_rank(*terms)
    n = terms[0].n
    flat: list[OpExpr] = []
    const = 0
    for t in terms:
        if t.kind == "sum":
            items = t.args
        else:
            items = (t,)
        for u in items:
            if u.kind == "const":
                const = const + u.args[0]
            else:
                flat.append(u)
    shifts = {u.shift for u in flat}
    if const:
        shifts.add(0)
    if len(shifts) > 1:
        raise SeriesError(f"sum of operators with different degree shifts {sorted(shifts)}")
    if const:
        flat.append(op_const(n, const))
    if not flat:
        return op_zero(n)
    if len(flat) == 1:
        return flat[0]
    return OpExpr("sum", tuple(flat), flat[0].shift, n)


def op_compose(a: OpExpr, b: OpExpr) -> OpExpr:
    """a after b."""
    _check_rank(a, b)
    if is_zero(a) or is_zero(b):
        return op_zero(a.n)
    if a.kind == "const":
        return op_scale(a.args[0], b)
    if b.kind == "const":
        return op_scale(b.args[0], a)
    return OpExpr("compose", (a, b), a.shift + b.shift, a.n)


def op_product(ops: Sequence[OpExpr]) -> OpExpr:
    out = ops[0]
    for o in ops[1:]:
        out = op_compose(out, o)
    return out


def op_commutator(a: OpExpr, b: OpExpr) -> OpExpr:
    _check_rank(a, b)
    if is_zero(a) or is_zero(b) or a.kind == "const" or b.kind == "const":
        return op_zero(a.n)
    return OpExpr("comm", (a, b), a.shift + b.shift, a.n)


def op_anticommutator(a: OpExpr, b: OpExpr) -> OpExpr:
    return op_sum([op_compose(a, b), op_compose(b, a)])


def render(a: OpExpr, depth: int = 0) -> str:
    if a.kind == "const":
        return f"{a.args[0]}*Id"
    if a.kind == "leaf":
        return "[" + a.args[0].dump() + "]"
    if depth > 6:
        return "..."
    if a.kind == "scale":
        return f"({a.args[0]})*{render(a.args[1], depth + 1)}"
    if a.kind == "sum":
        return "(" + " + ".join(render(t, depth + 1) for t in a.args) + ")"
    if a.kind == "compose":
        return f"{render(a.args[0], depth + 1)} . {render(a.args[1], depth + 1)}"
    return f"[{render(a.args[0], depth + 1)}, {render(a.args[1], depth + 1)}]"


# ---------------------------------------------------------------------------
# sparse backend
# ---------------------------------------------------------------------------


class SparseEvaluator:
    """Applies operator expressions to module vectors; any coefficient ring."""

    def __init__(self, module: InducedModule, box: int | None = None):
        self.module = module
        self.box = box
        self._memo: dict = {}

    def apply(self, op: OpExpr, v: Mapping) -> dict:
        if op.n != self.module.n:
            raise SeriesError(f"rank mismatch: operator {op.n}, module {self.module.n}")
        out: dict = {}
        for key, coef in v.items():
            add_into(out, self.apply_key(op, key), coef)
        return out

    def apply_key(self, op: OpExpr, key) -> dict:
        mk = (id(op), key)
        hit = self._memo.get(mk)
        if hit is not None:
            return hit[1]
        res = self._apply_key(op, key)
        self._memo[mk] = (op, res)
        return res

    def _apply_key(self, op: OpExpr, key) -> dict:
        k = op.kind
        if k == "const":
            return scale({key: 1}, op.args[0])
        if k == "scale":
            return scale(self.apply_key(op.args[1], key), op.args[0])
        if k == "sum":
            out: dict = {}
            for t in op.args:
                add_into(out, self.apply_key(t, key))
            return out
        if k == "compose":
            return self.apply(op.args[0], self.apply_key(op.args[1], key))
        if k == "comm":
            a, b = op.args
            out = self.apply(a, self.apply_key(b, key))
            add_into(out, self.apply(b, self.apply_key(a, key)), -1)
            return out
        return self._apply_leaf(op.args[0], key)

    def _apply_leaf(self, t: SeriesOpTemplate, key) -> dict:
        mod = self.module
        start = {key: 1}
        def depth_of(vec):
            k0 = next(iter(vec))
            return -word_degree(k0[0])

        def step(vec, letter):
            if not vec or letter[0] > depth_of(vec):
                return None
            out = mod.act_letter(letter, vec)
            return out or None

        def add(a, b):
            return add_into(dict(a), b)

        res = t.run(start, depth_of, step, add, scale, box=self.box)
        return res or {}


# ---------------------------------------------------------------------------
# matrix backend
# ---------------------------------------------------------------------------


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def mat_is_zero(m: flint.fmpq_mat) -> bool:
    return m == flint.fmpq_mat(m.nrows(), m.ncols())


class MatrixEvaluator:
    """Block-matrix evaluation on graded pieces; rational scalars only.

    ``block(op, d)`` is the matrix of ``op`` from the depth-d piece to the
    depth ``d - op.shift`` piece, in the basis order of ``module.piece``.
    """

    def __init__(self, module: InducedModule, box: int | None = None, budget: int = 40_000_000):
        self.module = module
        self.box = box
        self.budget = budget  # total matrix entries kept in the block cache
        self._letters: dict = {}
        self._index: dict[int, dict] = {}
        self._memo: OrderedDict = OrderedDict()
        self._held = 0

    def index(self, d: int) -> dict:
        if d not in self._index:
            self._index[d] = {k: pos for pos, k in enumerate(self.module.piece(d))}
        return self._index[d]

    def dim(self, d: int) -> int:
        return len(self.module.piece(d)) if d >= 0 else 0

    def letter(self, letter, d: int) -> flint.fmpq_mat | None:
        """Matrix of an E-letter from depth d to depth d - s; None if the target is empty."""
        s = letter[0]
        dout = d - s
        if dout < 0:
            return None
        mk = (letter, d)
        m = self._letters.get(mk)
        if m is None:
            src = self.module.piece(d)
            idx = self.index(dout)
            m = flint.fmpq_mat(len(idx), len(src))
            for col, key in enumerate(src):
                for k2, v in self.module.act_basis(letter, key).items():
                    m[idx[k2], col] = to_fmpq(v)
            self._letters[mk] = m
        return m

    def identity(self, d: int) -> flint.fmpq_mat:
        k = self.dim(d)
        m = flint.fmpq_mat(k, k)
        for a in range(k):
            m[a, a] = 1
        return m

    def block(self, op: OpExpr, d: int) -> flint.fmpq_mat:
        if op.n != self.module.n:
            raise SeriesError(f"rank mismatch: operator {op.n}, module {self.module.n}")
        mk = (id(op), d)
        hit = self._memo.get(mk)
        if hit is not None:
            self._memo.move_to_end(mk)
            return hit[1]
        res = self._block(op, d)
        size = res.nrows() * res.ncols()
        self._memo[mk] = (op, res, size)
        self._held += size
        while self._held > self.budget and len(self._memo) > 1:
            _, (_, _, old) = self._memo.popitem(last=False)
            self._held -= old
        return res

    def _block(self, op: OpExpr, d: int) -> flint.fmpq_mat:
        k = op.kind
        dout = d - op.shift
        if k == "const":
            return self.identity(d) * to_fmpq(op.args[0])
        if k == "scale":
            return self.block(op.args[1], d) * to_fmpq(op.args[0])
        if k == "sum":
            acc = None
            for t in op.args:
                m = self.block(t, d)
                acc = m if acc is None else acc + m
            return acc
        if k == "compose":
            a, b = op.args
            mb = self.block(b, d)
            if d - b.shift < 0:
                return flint.fmpq_mat(self.dim(dout), self.dim(d))
            return self.block(a, d - b.shift) * mb
        if k == "comm":
            a, b = op.args
            ab = self.block(op_compose_cached(self, a, b), d)
            ba = self.block(op_compose_cached(self, b, a), d)
            return ab - ba
        return self._leaf(op.args[0], d)

    def _leaf(self, t: SeriesOpTemplate, d: int) -> flint.fmpq_mat:
        dout = d - t.shift
        rows, cols = self.dim(dout), self.dim(d)
        if rows == 0 or cols == 0:
            return flint.fmpq_mat(rows, cols)

        def depth_of(val):
            return val[0]

        def step(val, letter):
            dd, m = val
            lm = self.letter(letter, dd)
            if lm is None or lm.nrows() == 0:
                return None
            return (dd - letter[0], lm * m)

        def add(a, b):
            return (a[0], a[1] + b[1])

        def scale_by(val, w):
            return (val[0], val[1] * to_fmpq(w))

        res = t.run((d, self.identity(d)), depth_of, step, add, scale_by, box=self.box)
        if res is None:
            return flint.fmpq_mat(rows, cols)
        return res[1]

    def is_zero(self, op: OpExpr, d: int) -> bool:
        return mat_is_zero(self.block(op, d))

    def dense(self, op: OpExpr, D: int) -> list[list[Fraction]]:
        """Full matrix on the span of all pieces of depth <= D (degree-preserving ops only)."""
        if op.shift != 0:
            raise SeriesError("dense() needs a degree-preserving operator")
        sizes = [self.dim(d) for d in range(D + 1)]
        total = sum(sizes)
        out = [[Fraction(0)] * total for _ in range(total)]
        off = 0
        for d in range(D + 1):
            m = self.block(op, d)
            for a in range(sizes[d]):
                for b in range(sizes[d]):
                    x = m[a, b]
                    out[off + a][off + b] = Fraction(int(x.p), int(x.q))
            off += sizes[d]
        return out


def op_compose_cached(ev: MatrixEvaluator, a: OpExpr, b: OpExpr) -> OpExpr:
    # commutator halves are cached per evaluator so repeated blocks reuse them
    cache = ev.__dict__.setdefault("_comm_cache", {})
    key = (id(a), id(b))
    hit = cache.get(key)
    if hit is None:
        hit = (a, b, op_compose(a, b))
        cache[key] = hit
    return hit[2]


# ---------------------------------------------------------------------------
# formal power series in u^{-1} with operator coefficients
# ---------------------------------------------------------------------------


class PowerSeriesOp:
    """sum_{r=0}^{R} coeffs[r] u^{-r}, truncated at order R."""

    __slots__ = ("n", "coeffs", "meta")

    def __init__(self, n: int, coeffs: Sequence[OpExpr], meta: dict | None = None):
        if not coeffs:
            raise SeriesError("a series needs at least the u^0 coefficient")
        _check_rank(*coeffs)
        if coeffs[0].n != n:
            raise SeriesError("rank mismatch")
        self.n = n
        self.coeffs = tuple(coeffs)
        self.meta = dict(meta or {})

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, r: int) -> OpExpr:
        return self.coeffs[r]

    @classmethod
    def identity(cls, n: int, R: int) -> "PowerSeriesOp":
        return cls(n, [op_const(n, 1)] + [op_zero(n)] * R)

    @classmethod
    def scalar(cls, n: int, R: int, values: Sequence) -> "PowerSeriesOp":
        vals = list(values) + [0] * (R + 1 - len(values))
        return cls(n, [op_const(n, v) for v in vals[: R + 1]])

    def __add__(self, other: "PowerSeriesOp") -> "PowerSeriesOp":
        R = min(self.order, other.order)
        return PowerSeriesOp(self.n, [op_sum([self[r], other[r]]) for r in range(R + 1)])

    def scaled(self, c) -> "PowerSeriesOp":
        return PowerSeriesOp(self.n, [op_scale(c, x) for x in self.coeffs], self.meta)

    def truncate(self, R: int) -> "PowerSeriesOp":
        return PowerSeriesOp(self.n, self.coeffs[: R + 1], self.meta)


def series_mul(A: PowerSeriesOp, B: PowerSeriesOp) -> PowerSeriesOp:
    """Noncommutative Cauchy product; coefficient r is sum_{p+q=r} A_p o B_q."""
    if A.n != B.n:
        raise SeriesError("rank mismatch")
    R = min(A.order, B.order)
    out = []
    for r in range(R + 1):
        terms = [op_compose(A[p], B[r - p]) for p in range(r + 1)]
        out.append(op_sum(terms))
    meta = {}
    if A.order != B.order:
        meta["truncated"] = True
        meta["orders"] = (A.order, B.order)
    return PowerSeriesOp(A.n, out, meta)


def series_shift(A: PowerSeriesOp, a) -> PowerSeriesOp:
    """Re-expand A(u + a) in u^{-1}: (u+a)^{-r} = sum_k binom(-r, k) a^k u^{-r-k}."""
    R = A.order
    if not a:
        return A
    out: list[list[OpExpr]] = [[] for _ in range(R + 1)]
    out[0].append(A[0])
    for r in range(1, R + 1):
        for k in range(0, R - r + 1):
            binom = (-1) ** k * comb(r + k - 1, k)
            out[r + k].append(op_scale(binom * a**k, A[r]))
    return PowerSeriesOp(A.n, [op_sum(t) for t in out], A.meta)


def series_invert(A: PowerSeriesOp) -> PowerSeriesOp:
    """Two-sided inverse for a series whose u^0 coefficient is a nonzero scalar."""
    c0 = A[0]
    if c0.kind != "const":
        raise SeriesError("leading coefficient is not a scalar multiple of the identity")
    if not c0.args[0]:
        raise SeriesError("leading coefficient is zero")
    inv0 = Fraction(1) / c0.args[0] if isinstance(c0.args[0], (int, Fraction)) else _ring_inverse(c0.args[0])
    B = [op_const(A.n, inv0)]
    for m in range(1, A.order + 1):
        acc = op_sum([op_compose(A[k], B[m - k]) for k in range(1, m + 1)])
        B.append(op_scale(-inv0, acc))
    return PowerSeriesOp(A.n, B, A.meta)


def _ring_inverse(x):
    # PolyQ scalars: only constants are invertible
    if hasattr(x, "is_constant") and x.is_constant():
        return Fraction(1) / x.constant_value()
    raise SeriesError(f"cannot invert scalar {x!r}")


def perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for a in range(len(p)):
        while p[a] != a:
            b = p[a]
            p[a], p[b] = p[b], p[a]
            sign = -sign
    return sign


def quantum_minor(
    rows: Sequence[int],
    cols: Sequence[int],
    series: Callable[[int, int], PowerSeriesOp],
    hbar,
    R: int | None = None,
) -> PowerSeriesOp:
    """Signed double sum over S_l x S_l of t_{a_s(1),b_t(1)}(u) ... t_{a_s(l),b_t(l)}(u+(l-1)hbar).

    ``series(a, b)`` returns t_{a,b}(u); factor j is shifted by (j-1)*hbar.
    """
    l = len(rows)
    if l != len(cols) or l == 0:
        raise SeriesError("row and column lists must have the same positive length")
    shifted: dict = {}

    def t(a, b, j):
        key = (a, b, j)
        if key not in shifted:
            s = series(a, b)
            if R is not None:
                s = s.truncate(R)
            shifted[key] = series_shift(s, j * hbar) if j else s
        return shifted[key]

    total = None
    for sigma in permutations(range(l)):
        ss = perm_sign(sigma)
        for tau in permutations(range(l)):
            sign = ss * perm_sign(tau)
            prod = t(rows[sigma[0]], cols[tau[0]], 0)
            for j in range(1, l):
                prod = series_mul(prod, t(rows[sigma[j]], cols[tau[j]], j))
            prod = prod.scaled(sign)
            total = prod if total is None else total + prod
    return total


# ---------------------------------------------------------------------------
# template text round trip
# ---------------------------------------------------------------------------

_FACTOR_RE = re.compile(r"E\[([^,\]]+),([^\]]+)\]t\^\(([^)]*)\)")


def parse_template(n: int, text: str, coef=1, level=None) -> SeriesOpTemplate:
    """Inverse of ``SeriesOpTemplate.dump`` for the factor list and weight.

    The scalar coefficient is supplied by the caller (dumps render it as text).
    """
    if "::" in text:
        head, body = text.split("::", 1)
    else:
        head, body = "", text
    factors = []
    for r, c, e in _FACTOR_RE.findall(body):
        row = int(r) if r.strip().isdigit() else r.strip()
        col = int(c) if c.strip().isdigit() else c.strip()
        factors.append(Factor(row, col, parse_affine(e)))
    weight = None
    m = re.search(r"weight=h_(\d+)\((.*)\)\s*$", head.strip())
    if m:
        args = re.findall(r"\(([^()]*)\)\*c", m.group(2))
        weight = HWeight(int(m.group(1)), tuple(parse_affine(a) for a in args), level)
    return SeriesOpTemplate(n, factors, coef, weight)


def omega_template(t: SeriesOpTemplate) -> SeriesOpTemplate:
    """Reverse the factors, transpose each letter and negate the exponents."""
    facs = [Factor(f.col, f.row, -f.exp) for f in reversed(t.factors)]
    return SeriesOpTemplate(t.n, facs, t.coef, t.weight)
