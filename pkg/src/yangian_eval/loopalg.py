"""The affinized gl(n): loop generators E_{i,j} t^s, central c and z.

Bracket:
    [E_ij t^s, E_kl t^u] = d_jk E_il t^{s+u} - d_il E_kj t^{s+u}
                           + s d_{s+u,0} (d_jk d_il c + d_ij d_kl z)
"""

from __future__ import annotations

from typing import Mapping, NamedTuple


class LoopGen(NamedTuple):
    kind: str  # "E", "C" or "Z"
    i: int = 0
    j: int = 0
    s: int = 0

    def __str__(self):
        if self.kind == "E":
            return f"E[{self.i},{self.j}]t^{self.s}"
        return self.kind.lower()


C = LoopGen("C")
Z = LoopGen("Z")


def E(i: int, j: int, s: int = 0) -> LoopGen:
    return LoopGen("E", i, j, s)


class RankMismatch(ValueError):
    pass


def bracket_letters(a: tuple, b: tuple):
    """Bracket of two E-letters given as (s, i, j).

    Returns (terms, c_coef, z_coef) with terms a list of (coef, (s, i, j)).
    """
    s, i, j = a
    u, k, l = b
    terms = []
    if j == k:
        terms.append((1, (s + u, i, l)))
    if i == l:
        terms.append((-1, (s + u, k, j)))
    c_coef = z_coef = 0
    if s + u == 0 and s:
        if j == k and i == l:
            c_coef = s
        if i == j and k == l:
            z_coef = s
    return terms, c_coef, z_coef


class LieElt:
    """Finite linear combination of loop generators with ring coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[LoopGen, object] | None = None):
        self.n = n
        clean = {}
        for g, v in (terms or {}).items():
            if g.kind == "E" and not (1 <= g.i <= n and 1 <= g.j <= n):
                raise ValueError(f"{g} out of range for rank {n}")
            if v:
                clean[g] = clean.get(g, 0) + v
        self.terms = {g: v for g, v in clean.items() if v}

    @classmethod
    def gen(cls, n: int, g: LoopGen, coef=1) -> "LieElt":
        return cls(n, {g: coef})

    def _check(self, other: "LieElt"):
        if self.n != other.n:
            raise RankMismatch(f"rank {self.n} vs {other.n}")

    def __add__(self, other: "LieElt") -> "LieElt":
        self._check(other)
        out = dict(self.terms)
        for g, v in other.terms.items():
            out[g] = out.get(g, 0) + v
        return LieElt(self.n, out)

    def __neg__(self):
        return LieElt(self.n, {g: -v for g, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return LieElt(self.n, {g: v * scalar for g, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElt):
            return NotImplemented
        return self.n == other.n and not (self - other).terms

    def __bool__(self):
        return bool(self.terms)

    def homogeneous_degree(self) -> int | None:
        degs = {g.s for g in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({v})*{g}" for g, v in sorted(self.terms.items(), key=lambda t: (t[0].kind, t[0].s, t[0].i, t[0].j)))


def bracket_gens(n: int, a: LoopGen, b: LoopGen) -> LieElt:
    if a.kind != "E" or b.kind != "E":
        return LieElt(n)
    terms, cc, zc = bracket_letters((a.s, a.i, a.j), (b.s, b.i, b.j))
    out: dict[LoopGen, int] = {}
    for coef, (s, i, j) in terms:
        g = E(i, j, s)
        out[g] = out.get(g, 0) + coef
    if cc:
        out[C] = cc
    if zc:
        out[Z] = zc
    return LieElt(n, out)


def bracket(a: LieElt, b: LieElt) -> LieElt:
    a._check(b)
    out = LieElt(a.n)
    for ga, va in a.terms.items():
        for gb, vb in b.terms.items():
            br = bracket_gens(a.n, ga, gb)
            if br:
                out = out + br * (va * vb)
    return out


def omega_gen(g: LoopGen) -> LoopGen:
    if g.kind == "E":
        return E(g.j, g.i, -g.s)
    return g  # omega fixes c and z


def omega(a: LieElt) -> LieElt:
    return LieElt(a.n, {omega_gen(g): v for g, v in a.terms.items()})


def render(g: LoopGen) -> str:
    return str(g)
