"""Smooth induced modules for the affinized gl(n) with PBW straightening.

A module is generated from a finite-dimensional gl(n)-module W placed at
degree 0: positive loop modes kill W, zero modes act through W, c acts by the
level and z by 1.  A basis vector is a pair ``(word, w)`` where ``word`` is a
PBW-sorted tuple of negative letters ``(s, i, j)`` (s < 0) and ``w`` indexes a
basis vector of W.  Vectors are plain dicts from basis keys to coefficients.

Letters are ordered by (degree, row, column), i.e. plain tuple order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .loopalg import LieElt, LoopGen, RankMismatch, bracket_letters

Letter = tuple  # (s, i, j)
Key = tuple  # (word, w)


@dataclass(frozen=True)
class VacuumSpec:
    """Zero-mode data: rank, level and the matrices of E_ij on W.

    ``matrices[(i, j)]`` is a sparse dict {(row, col): value}.
    """

    n: int
    level: object
    dim: int
    matrices: Mapping[tuple, Mapping[tuple, object]] = field(hash=False, compare=False)
    name: str = "custom"

    def __post_init__(self):
        for (i, j) in self.matrices:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"matrix index {(i, j)} out of range")

    def matrix(self, i: int, j: int) -> Mapping[tuple, object]:
        return self.matrices.get((i, j), {})


def trivial(n: int, level, lam) -> VacuumSpec:
    """One-dimensional W on which E_ij acts by lam * delta_ij."""
    mats = {(i, i): {(0, 0): lam} for i in range(1, n + 1)} if lam else {}
    return VacuumSpec(n, level, 1, mats, "trivial:lambda")


def natural(n: int, level) -> VacuumSpec:
    mats = {(i, j): {(i - 1, j - 1): 1} for i in range(1, n + 1) for j in range(1, n + 1)}
    return VacuumSpec(n, level, n, mats, "natural")


def natural2(n: int, level) -> VacuumSpec:
    """Tensor square of the natural representation; basis index a*n + b."""
    mats: dict[tuple, dict] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            m: dict[tuple, int] = {}
            for b in range(n):
                # E_ij (x) 1
                m[((i - 1) * n + b, (j - 1) * n + b)] = m.get(((i - 1) * n + b, (j - 1) * n + b), 0) + 1
                # 1 (x) E_ij
                m[(b * n + i - 1, b * n + j - 1)] = m.get((b * n + i - 1, b * n + j - 1), 0) + 1
            mats[(i, j)] = m
    return VacuumSpec(n, level, n * n, mats, "natural2")


def check_zero_mode_relations(spec: VacuumSpec) -> bool:
    """True iff the W matrices satisfy [E_ij, E_kl] = d_jk E_il - d_il E_kj."""
    n = spec.n

    def mul(a, b):
        out: dict[tuple, object] = {}
        for (r, k), v in a.items():
            for (k2, col), u in b.items():
                if k == k2:
                    out[(r, col)] = out.get((r, col), 0) + v * u
        return out

    def lin(*pairs):
        out: dict[tuple, object] = {}
        for coef, m in pairs:
            for key, v in m.items():
                out[key] = out.get(key, 0) + coef * v
        return {k: v for k, v in out.items() if v}

    for i, j, k, l in product(range(1, n + 1), repeat=4):
        a, b = spec.matrix(i, j), spec.matrix(k, l)
        lhs = lin((1, mul(a, b)), (-1, mul(b, a)))
        rhs = lin((1 if j == k else 0, spec.matrix(i, l)), (-1 if i == l else 0, spec.matrix(k, j)))
        if lin((1, lhs), (-1, rhs)):
            return False
    return True


def word_degree(word) -> int:
    return sum(letter[0] for letter in word)


def add_into(acc: dict, vec: Mapping, coef=1) -> dict:
    if coef == 1:
        for k, v in vec.items():
            s = acc.get(k, 0) + v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    else:
        for k, v in vec.items():
            s = acc.get(k, 0) + coef * v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    return acc


def scale(vec: Mapping, coef) -> dict:
    if not coef:
        return {}
    return {k: v * coef for k, v in vec.items() if v * coef}


class InducedModule:
    """The induced module on a VacuumSpec, with a memoized straightening engine.

    ``max_depth`` (optional) discards components deeper than the bound.  It is
    off by default: operator sums in this package always act by finite sums,
    so exact computation needs no truncation.
    """

    def __init__(self, spec: VacuumSpec, max_depth: int | None = None, check: bool = True):
        if check and not check_zero_mode_relations(spec):
            raise ValueError(f"W matrices of {spec.name} do not satisfy the gl({spec.n}) relations")
        self.spec = spec
        self.n = spec.n
        self.level = spec.level
        self.max_depth = max_depth
        self._memo: dict[tuple, dict] = {}
        self._pieces: dict[int, list] = {}
        # zero modes on W as column lists: (i, j) -> {col: [(row, value)]}
        self._w_cols: dict[tuple, dict] = {}
        for (i, j), m in spec.matrices.items():
            cols: dict[int, list] = {}
            for (r, col), v in m.items():
                if v:
                    cols.setdefault(col, []).append((r, v))
            self._w_cols[(i, j)] = cols

    # basis ----------------------------------------------------------------------
    def vacuum(self, w: int = 0) -> dict:
        return {((), w): 1}

    def letters_of_degree(self, s: int):
        n = self.n
        return [(s, i, j) for i in range(1, n + 1) for j in range(1, n + 1)]

    def words_of_depth(self, d: int) -> list[tuple]:
        letters = [lt for s in range(-d, 0) for lt in self.letters_of_degree(s)]
        out: list[tuple] = []

        def rec(start: int, remaining: int, prefix: tuple):
            if remaining == 0:
                out.append(prefix)
                return
            for idx in range(start, len(letters)):
                lt = letters[idx]
                if -lt[0] <= remaining:
                    rec(idx, remaining + lt[0], prefix + (lt,))

        rec(0, d, ())
        return out

    def piece(self, d: int) -> list[Key]:
        """Basis keys of the degree -d piece, in a fixed order."""
        if d < 0:
            return []
        if d not in self._pieces:
            self._pieces[d] = [(word, w) for word in self.words_of_depth(d) for w in range(self.spec.dim)]
        return self._pieces[d]

    def basis_up_to_depth(self, D: int) -> list[dict]:
        if D < 0:
            raise ValueError("depth must be non-negative")
        return [{key: 1} for d in range(D + 1) for key in self.piece(d)]

    # action -----------------------------------------------------------------------
    def _check_gen(self, g: LoopGen):
        if g.kind == "E" and not (1 <= g.i <= self.n and 1 <= g.j <= self.n):
            raise RankMismatch(f"{g} does not belong to gl({self.n})")

    def act(self, g: LoopGen, v: Mapping) -> dict:
        self._check_gen(g)
        if g.kind == "C":
            return scale(v, self.level)
        if g.kind == "Z":
            return dict(v)
        return self.act_letter((g.s, g.i, g.j), v)

    def act_elt(self, x: LieElt, v: Mapping) -> dict:
        if x.n != self.n:
            raise RankMismatch(f"rank {x.n} vs {self.n}")
        out: dict = {}
        for g, coef in x.terms.items():
            add_into(out, self.act(g, v), coef)
        return out

    def act_letter(self, letter: Letter, v: Mapping) -> dict:
        out: dict = {}
        act_basis = self.act_basis
        for key, coef in v.items():
            col = act_basis(letter, key)
            if col:
                add_into(out, col, coef)
        return out

    def act_basis(self, letter: Letter, key: Key) -> dict:
        """E-letter applied to a basis key; the returned dict must not be mutated."""
        mk = (letter, key)
        res = self._memo.get(mk)
        if res is None:
            res = self._straighten(letter, key)
            if self.max_depth is not None:
                res = {k: v for k, v in res.items() if -word_degree(k[0]) <= self.max_depth}
            self._memo[mk] = res
        return res

    def _bracket_on(self, g: Letter, a: Letter, key: Key) -> dict:
        terms, cc, zc = bracket_letters(g, a)
        out: dict = {}
        for coef, lt in terms:
            add_into(out, self.act_basis(lt, key), coef)
        central = 0
        if cc:
            central = central + cc * self.level
        if zc:
            central = central + zc
        if central:
            add_into(out, {key: 1}, central)
        return out

    def _straighten(self, g: Letter, key: Key) -> dict:
        word, w = key
        s = g[0]
        if s < 0 and (not word or g <= word[0]):
            return {((g,) + word, w): 1}
        if not word:
            if s > 0:
                return {}
            cols = self._w_cols.get((g[1], g[2]), {})
            return {((), r): v for r, v in cols.get(w, ())}
        a, rest = word[0], word[1:]
        inner = self.act_basis(g, (rest, w))
        out = self.act_letter(a, inner) if inner else {}
        add_into(out, self._bracket_on(g, a, (rest, w)))
        return out

    # rendering --------------------------------------------------------------------
    def dump_key(self, key: Key) -> str:
        word, w = key
        letters = " ".join(f"E[{i},{j}]t^{s}" for s, i, j in word)
        return f"{letters} |vac:{w}>".strip()

    def dump(self, v: Mapping) -> list[str]:
        def sort_key(item):
            (word, w), _ = item
            return (-word_degree(word), word, w)

        return [f"{coef} * {self.dump_key(key)}" for key, coef in sorted(v.items(), key=sort_key)]


def vector_degree(v: Mapping) -> int | None:
    degs = {word_degree(k[0]) for k in v}
    return degs.pop() if len(degs) == 1 else None


def basis_up_to_depth(spec: VacuumSpec, D: int) -> list[dict]:
    return InducedModule(spec).basis_up_to_depth(D)
