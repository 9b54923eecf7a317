"""Operator images of Yangian generators in the completed enveloping algebra.

* ``ev_T``: images of the RTT-type generators T^{(r)}_{i,j} as normally
  ordered sums of loop generators.
* ``minimalistic``: Kodera's evaluation map on X^{+-}_{i,0}, H_{i,0} and, for
  1 <= i <= n-1, on H_{i,1}, X^{+-}_{i,1}.
* ``iota``: the embedding of the finite Yangian (and the extra generator
  A_{n,1}) followed by ``ev_T``.
* ``higher``: x^{+-}_{i,r} for all r from the Gauss ratios of quantum minors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .seriesop import (
    Affine,
    Factor,
    HWeight,
    OpExpr,
    PowerSeriesOp,
    SeriesOpTemplate,
    op_commutator,
    op_compose,
    op_const,
    op_leaf,
    op_letter,
    op_scale,
    op_sum,
    quantum_minor,
    series_invert,
    series_mul,
    series_shift,
)

CONVENTIONS = ("plain", "shifted", "hbar-scaled")
SHIFTS = ("printed", "reflected")
NORMALIZATIONS = ("printed", "hbar", "derived")
FAMILIES = ("Xplus", "Xminus", "H", "Htilde", "T", "A")


class NotInPaper(LookupError):
    """The requested image has no printed formula (index-0 generators at r >= 1)."""


class UnsupportedGenerator(ValueError):
    pass


class GenId(NamedTuple):
    family: str
    i: int
    j: int = 0
    r: int = 0

    def __str__(self):
        if self.family == "T":
            return f"T^({self.r})_[{self.i},{self.j}]"
        if self.family == "A":
            return f"A_[{self.i},1]"
        return f"{self.family}_[{self.i},{self.r}]"


def ev_T_template_list(n: int, i: int, j: int, r: int, hbar, c) -> list[SeriesOpTemplate]:
    """Templates whose sum is ev(T^{(r)}_{i,j}) for r >= 2.

    The p-factor template (2 <= p <= r) carries degree variables z_1..z_{p-1},
    exponents -z_1-1, z_1-z_2, ..., z_{p-1}+1 and coefficient
    hbar^{r-1} h_{r-p}((z_1+1)c, ..., (z_{p-1}+1)c).
    """
    out = []
    for p in range(2, r + 1):
        zs = [f"z{k}" for k in range(1, p)]
        xs = [f"x{k}" for k in range(1, p)]
        facs = [Factor(i, xs[0], Affine.var(zs[0], -1, -1))]
        for k in range(p - 2):
            facs.append(Factor(xs[k], xs[k + 1], Affine.make(0, {zs[k]: 1, zs[k + 1]: -1})))
        facs.append(Factor(xs[-1], j, Affine.var(zs[-1], 1, 1)))
        weight = HWeight(r - p, tuple(Affine.var(z, 1, 1) for z in zs), c)
        out.append(SeriesOpTemplate(n, facs, hbar ** (r - 1), weight))
    return out


def _check_index(n: int, *idx: int):
    for a in idx:
        if not 1 <= a <= n:
            raise IndexError(f"index {a} out of range 1..{n}")


def ev_T(i: int, j: int, r: int, n: int, hbar=1, c=0) -> OpExpr:
    _check_index(n, i, j)
    if r < 0:
        raise IndexError("negative mode")
    if r == 0:
        return op_const(n, 1 if i == j else 0)
    if r == 1:
        return op_letter(n, i, j, 0)
    return op_sum([op_leaf(t) for t in ev_T_template_list(n, i, j, r, hbar, c)])


def _double_sum(n: int, a: int, b: int, k: int, shifted: bool, coef) -> OpExpr:
    """coef * sum_{s>=0} E_{a,k} t^{-s(-1)} E_{k,b} t^{s(+1)}."""
    off = 1 if shifted else 0
    t = SeriesOpTemplate(
        n,
        [Factor(a, k, Affine.var("s", -1, -off)), Factor(k, b, Affine.var("s", 1, off))],
        coef,
    )
    return op_leaf(t)


class ImageBuilder:
    """All image constructions for fixed (n, hbar, c), memoized.

    ``hbar`` and ``c`` may be Fractions or PolyQ; minors and Gauss ratios are
    built to order ``R``.  ``convention`` picks how t_{i,j}(u) is assembled
    from the T^{(r)}, ``shift`` the sign of the argument shift in the Gauss
    ratios and ``normalization`` the linear coefficient in the image of A_{n,1}.
    """

    def __init__(self, n: int, hbar, c, R: int = 6, convention: str = "hbar-scaled",
                 normalization: str = "derived", shift: str = "reflected"):
        if n < 2:
            raise ValueError("rank must be at least 2")
        if convention not in CONVENTIONS:
            raise ValueError(f"unknown series convention {convention!r}")
        if shift not in SHIFTS:
            raise ValueError(f"unknown Gauss shift {shift!r}")
        if normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {normalization!r}")
        if not hbar:
            raise ValueError("hbar must be nonzero")
        self.n = n
        self.hbar = hbar
        self.c = c
        self.R = R
        self.convention = convention
        self.normalization = normalization
        self.shift = shift
        self._T: dict = {}
        self._series: dict = {}
        self._minors: dict = {}
        self._gauss: dict = {}
        self._memo: dict = {}

    # ------------------------------------------------------------ T images
    def T(self, i: int, j: int, r: int) -> OpExpr:
        key = (i, j, r)
        if key not in self._T:
            self._T[key] = ev_T(i, j, r, self.n, self.hbar, self.c)
        return self._T[key]

    def t_series(self, i: int, j: int) -> PowerSeriesOp:
        """t_{i,j}(u) under the selected convention, to order R."""
        key = (i, j)
        if key in self._series:
            return self._series[key]
        n, R, d = self.n, self.R, 1 if i == j else 0
        if self.convention == "plain":
            coeffs = [self.T(i, j, r) for r in range(R + 1)]
        elif self.convention == "shifted":
            coeffs = [op_const(n, d)] + [self.T(i, j, r - 1) for r in range(1, R + 1)]
        else:
            coeffs = [op_const(n, d)] + [op_scale(-self.hbar, self.T(i, j, r)) for r in range(1, R + 1)]
        s = PowerSeriesOp(n, coeffs, {"convention": self.convention})
        self._series[key] = s
        return s

    def minor(self, rows: tuple, cols: tuple) -> PowerSeriesOp:
        key = (tuple(rows), tuple(cols))
        if key not in self._minors:
            self._minors[key] = quantum_minor(rows, cols, self.t_series, self.hbar, self.R)
        return self._minors[key]

    def gauss(self, sign: str, i: int) -> PowerSeriesOp:
        """x^{+-}_i(u) as a power series (before coefficient extraction)."""
        if not 1 <= i <= self.n - 1:
            raise UnsupportedGenerator(f"Gauss formulas need 1 <= i <= {self.n - 1}")
        key = (sign, i)
        if key in self._gauss:
            return self._gauss[key]
        # argument shift (i-1) hbar / 2; "reflected" flips its sign
        shift = Fraction(i - 1, 2) * self.hbar
        if self.shift == "reflected":
            shift = -shift
        top = tuple(range(1, i + 1))
        other = tuple(range(1, i)) + (i + 1,)
        P = series_shift(self.minor(top, top), shift)
        Pinv = series_invert(P)
        if sign == "+":
            Q = series_shift(self.minor(top, other), shift)
            x = series_mul(Pinv, Q)
        elif sign == "-":
            Q = series_shift(self.minor(other, top), shift)
            x = series_mul(Q, Pinv)
        else:
            raise ValueError(f"sign must be '+' or '-', got {sign!r}")
        self._gauss[key] = x
        return x

    def higher(self, sign: str, i: int, r: int) -> OpExpr:
        """x^{+-}_{i,r}: the u^{-r-1} coefficient of the Gauss ratio, normalized."""
        if r + 1 > self.R:
            raise ValueError(f"mode {r} needs series order at least {r + 1}")
        key = ("higher", sign, i, r)
        if key not in self._memo:
            coef = self.gauss(sign, i)[r + 1]
            if self.convention == "hbar-scaled":
                coef = op_scale(_inverse(-self.hbar), coef)
            self._memo[key] = coef
        return self._memo[key]

    def higher_H(self, i: int, r: int) -> OpExpr:
        """H_{i,r} materialized as [x^+_{i,r}, x^-_{i,0}]."""
        key = ("H", i, r)
        if key not in self._memo:
            self._memo[key] = op_commutator(self.higher("+", i, r), self.higher("-", i, 0))
        return self._memo[key]

    # ------------------------------------------------------------ Kodera images
    def minimalistic(self, g: GenId) -> OpExpr:
        key = ("min", g)
        if key not in self._memo:
            self._memo[key] = self._minimalistic(g)
        return self._memo[key]

    def _minimalistic(self, g: GenId) -> OpExpr:
        n, h = self.n, self.hbar
        i, r = g.i, g.r
        if not 0 <= i <= n - 1:
            raise UnsupportedGenerator(f"index {i} out of range 0..{n - 1}")
        if r not in (0, 1):
            raise UnsupportedGenerator("only modes 0 and 1 have closed-form images")
        if r == 1 and i == 0:
            raise NotInPaper(f"no printed image for {g}")
        fam = g.family
        if fam == "Xplus" and r == 0:
            return op_letter(n, n, 1, 1) if i == 0 else op_letter(n, i, i + 1, 0)
        if fam == "Xminus" and r == 0:
            return op_letter(n, 1, n, -1) if i == 0 else op_letter(n, i + 1, i, 0)
        if fam == "H" and r == 0:
            return op_commutator(self.minimalistic(GenId("Xplus", i, 0, 0)),
                                 self.minimalistic(GenId("Xminus", i, 0, 0)))
        if fam == "Htilde":
            if r != 1:
                raise UnsupportedGenerator("Htilde is defined at mode 1")
            H0 = self.minimalistic(GenId("H", i, 0, 0))
            return op_sum([self.minimalistic(GenId("H", i, 0, 1)),
                           op_scale(-h / 2, op_compose(H0, H0))])
        lin = Fraction(-(i - 1), 2) * h
        if fam == "H":
            terms = [op_scale(lin, self.minimalistic(GenId("H", i, 0, 0))),
                     op_scale(-h, op_compose(op_letter(n, i, i), op_letter(n, i + 1, i + 1)))]
            for a, sgn in ((i, 1), (i + 1, -1)):
                for k in range(1, i + 1):
                    terms.append(_double_sum(n, a, a, k, False, sgn * h))
                for k in range(i + 1, n + 1):
                    terms.append(_double_sum(n, a, a, k, True, sgn * h))
            return op_sum(terms)
        if fam in ("Xplus", "Xminus"):
            a, b = (i, i + 1) if fam == "Xplus" else (i + 1, i)
            terms = [op_scale(lin, self.minimalistic(GenId(fam, i, 0, 0)))]
            for k in range(1, i + 1):
                terms.append(_double_sum(n, a, b, k, False, h))
            for k in range(i + 1, n + 1):
                terms.append(_double_sum(n, a, b, k, True, h))
            return op_sum(terms)
        raise UnsupportedGenerator(f"no image for {g}")

    # ------------------------------------------------------------ iota, iota-hat
    def a_linear_coefficient(self) -> object:
        n, h = self.n, self.hbar
        if self.normalization == "printed":
            return Fraction(-(n - 2), 2)
        if self.normalization == "hbar":
            return Fraction(-(n - 2), 2) * h
        return Fraction(-(n - 1), 2) * h

    def iota(self, g: GenId) -> OpExpr:
        key = ("iota", g)
        if key not in self._memo:
            self._memo[key] = self._iota(g)
        return self._memo[key]

    def _iota(self, g: GenId) -> OpExpr:
        n, h, T = self.n, self.hbar, self.T
        fam, i = g.family, g.i
        if fam == "A":
            terms = [T(n, n, 2), op_scale(self.a_linear_coefficient(), T(n, n, 1))]
            for u in range(1, n):
                terms.append(op_scale(h, op_compose(T(n, u, 1), T(u, n, 1))))
            terms.append(op_scale(h / 2, op_compose(T(n, n, 1), T(n, n, 1))))
            return op_sum(terms)
        if not 1 <= i <= n - 1:
            raise UnsupportedGenerator(f"{g} is outside the finite Yangian")
        if fam == "Xplus" and g.r == 0:
            return T(i, i + 1, 1)
        if fam == "Xminus" and g.r == 0:
            return T(i + 1, i, 1)
        if fam == "Htilde" and g.r == 1:
            terms = [T(i, i, 2), op_scale(-1, T(i + 1, i + 1, 2)),
                     op_scale(Fraction(-(i - 1), 2) * h, op_sum([T(i, i, 1), op_scale(-1, T(i + 1, i + 1, 1))]))]
            for u in range(1, i):
                terms.append(op_scale(h, op_compose(T(i, u, 1), T(u, i, 1))))
            for u in range(1, i + 1):
                terms.append(op_scale(-h, op_compose(T(i + 1, u, 1), T(u, i + 1, 1))))
            terms.append(op_scale(h / 2, op_sum([op_compose(T(i, i, 1), T(i, i, 1)),
                                                 op_scale(-1, op_compose(T(i + 1, i + 1, 1), T(i + 1, i + 1, 1)))])))
            return op_sum(terms)
        raise UnsupportedGenerator(f"iota has no printed formula for {g}")


def _inverse(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(1) / Fraction(x)
    if hasattr(x, "is_constant") and x.is_constant():
        return Fraction(1) / x.constant_value()
    raise ValueError("the hbar-scaled convention needs a numeric hbar")


def ev_minimalistic(g: GenId, n: int, hbar, c=0) -> OpExpr:
    return ImageBuilder(n, hbar, c, R=0).minimalistic(g)


def iota_image(g: GenId, n: int, hbar, c=0, normalization: str = "derived") -> OpExpr:
    return ImageBuilder(n, hbar, c, R=0, normalization=normalization).iota(g)


def higher_image(sign: str, i: int, r: int, n: int, hbar, c=0, R: int | None = None,
                 convention: str = "hbar-scaled", shift: str = "reflected") -> OpExpr:
    """x^{+-}_{i,r} built from the Gauss ratio of quantum minors to order R (default r + 1)."""
    R = r + 1 if R is None else R
    return ImageBuilder(n, hbar, c, R=R, convention=convention, shift=shift).higher(sign, i, r)
