"""Relation suites checked as exact operator identities on induced modules.

Each suite produces report rows ``{id, indices, status, residual, millis}``.
Statuses:

* ``pass`` / ``fail``: an identity that must hold; pass means lhs - rhs
  vanishes exactly on every graded piece of depth <= D, in every trial.
* ``not-in-paper``: the instance needs an image with no printed formula.
* ``range-excluded``: outside the stated validity range (symmetric functions).
* ``mismatch`` / ``pass`` with role ``probe``: diagnostic rows for competing
  readings (conventions, normalizations, literal forms); they never fail a run.

Passing on a family of truncated modules is evidence, not proof, that an
identity holds in the completed enveloping algebra.
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Callable, Iterable

from .images import (
    CONVENTIONS,
    NORMALIZATIONS,
    SHIFTS,
    GenId,
    ImageBuilder,
    NotInPaper,
    ev_T,
)
from .scalars import HBAR, LAMBDA, LEVEL, draw_parameters, rat_str
from .seriesop import (
    MatrixEvaluator,
    OpExpr,
    PowerSeriesOp,
    SeriesError,
    mat_is_zero,
    omega_template,
    op_anticommutator,
    op_commutator,
    op_compose,
    op_scale,
    op_const,
    op_sum,
    op_zero,
    perm_sign,
    series_mul,
    series_shift,
)
from .symfun import check_f_recurrences
from .vermamod import InducedModule, natural, natural2, trivial

MODULES = ("trivial:lambda", "natural", "natural2")
CANONICAL = {"convention": "hbar-scaled", "shift": "reflected", "normalization": "derived"}
CAVEAT = ("identities are verified on truncated induced modules; this is evidence, "
          "not proof, of the identity in the completed enveloping algebra")


def cartan(n: int, i: int, j: int) -> int:
    """Cartan matrix of the affine sl(n), indices 0..n-1."""
    if i == j:
        return 2
    if abs(i - j) == 1 or {i, j} == {0, n - 1}:
        return -1
    return 0


def make_module(preset: str, n: int, level, lam) -> InducedModule:
    if preset == "trivial:lambda":
        spec = trivial(n, level, lam)
    elif preset == "natural":
        spec = natural(n, level)
    elif preset == "natural2":
        spec = natural2(n, level)
    else:
        raise ValueError(f"unknown module preset {preset!r}")
    return InducedModule(spec)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass
class Row:
    id: str
    indices: dict
    status: str
    residual: str = ""
    millis: int = 0
    role: str = "check"

    def to_dict(self) -> dict:
        d = {"id": self.id, "indices": self.indices, "status": self.status,
             "residual": self.residual, "millis": self.millis}
        if self.role != "check":
            d["role"] = self.role
        return d


@dataclass
class VerificationReport:
    config: dict
    results: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def extend(self, other: "VerificationReport"):
        self.results.extend(other.results)
        for k, v in other.config.items():
            self.config.setdefault(k, v)
        for note in other.notes:
            if note not in self.notes:
                self.notes.append(note)

    def failed(self) -> list:
        return [r for r in self.results if r.status == "fail"]

    def count(self, status: str, ident: str | None = None) -> int:
        return sum(1 for r in self.results if r.status == status and (ident is None or r.id == ident))

    def rows(self, ident: str) -> list:
        return [r for r in self.results if r.id == ident]

    def to_dict(self, timings: bool = True) -> dict:
        rows = []
        for r in self.results:
            d = r.to_dict()
            if not timings:
                d["millis"] = 0
            rows.append(d)
        return {"config": self.config, "results": rows, "notes": self.notes}

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=1, sort_keys=True)

    def summary(self) -> str:
        by_id: dict[str, dict[str, int]] = {}
        for r in self.results:
            by_id.setdefault(r.id, {}).setdefault(r.status, 0)
            by_id[r.id][r.status] += 1
        statuses = ["pass", "fail", "not-in-paper", "range-excluded", "mismatch"]
        lines = [f"{'relation':<22}" + "".join(f"{s:>16}" for s in statuses)]
        for ident in by_id:
            lines.append(f"{ident:<22}" + "".join(f"{by_id[ident].get(s, 0):>16}" for s in statuses))
        total = {s: self.count(s) for s in statuses}
        lines.append(f"{'TOTAL':<22}" + "".join(f"{total[s]:>16}" for s in statuses))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# trial harness
# ---------------------------------------------------------------------------


@dataclass
class Trial:
    """One parameter draw: module, image builder and matrix evaluator."""

    n: int
    D: int
    R: int
    params: dict
    module_name: str = "trivial:lambda"
    convention: str = CANONICAL["convention"]
    shift: str = CANONICAL["shift"]
    normalization: str = CANONICAL["normalization"]
    box: int | None = None

    def __post_init__(self):
        self.module = make_module(self.module_name, self.n, self.params[LEVEL], self.params.get(LAMBDA, 0))
        self.images = self.builder(self.convention, self.shift, self.normalization)
        self.ev = MatrixEvaluator(self.module, box=self.box)

    def builder(self, convention: str, shift: str, normalization: str) -> ImageBuilder:
        return ImageBuilder(self.n, self.params[HBAR], self.params[LEVEL], self.R,
                            convention=convention, normalization=normalization, shift=shift)

    def release(self):
        """Drop cached matrices and straightening results; the trial stays usable."""
        self.module._memo.clear()
        self.ev = MatrixEvaluator(self.module, box=self.box)

    def residual(self, lhs: OpExpr, rhs: OpExpr, depths: Iterable[int] | None = None) -> str:
        """Empty string iff lhs == rhs on every piece of depth <= D."""
        diff = op_sum([lhs, op_scale(-1, rhs)])
        bad = []
        for d in depths if depths is not None else range(self.D + 1):
            m = self.ev.block(diff, d)
            if not mat_is_zero(m):
                nz = sum(1 for a in range(m.nrows()) for b in range(m.ncols()) if m[a, b] != 0)
                bad.append(f"depth {d}: {nz} nonzero entries")
        return "; ".join(bad)


def draw_trials(seed: int, trials: int, fixed: dict | None = None) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        p = draw_parameters(rng, [HBAR, LEVEL, LAMBDA])
        if fixed:
            p.update({k: Fraction(v) for k, v in fixed.items()})
        if not p[HBAR]:
            raise ValueError("hbar must be nonzero")
        out.append(p)
    return out


Instance = tuple  # (id, indices, build(trial) -> (lhs, rhs) | None, role)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("YANGIAN_EVAL_THREADS", "1")))
    except ValueError:
        return 1


def run_instances(instances: list, trials: list[Trial], role_status=("pass", "fail")) -> list[Row]:
    """Evaluate every instance in every trial; failures never abort the run."""

    def one_trial(trial: Trial):
        out = []
        for ident, indices, build, role in instances:
            t0 = time.perf_counter()
            try:
                pair = build(trial)
            except NotInPaper as exc:
                out.append(("not-in-paper", str(exc), 0))
                continue
            res = trial.residual(*pair)
            out.append(("ok" if not res else "bad", res, int((time.perf_counter() - t0) * 1000)))
        trial.release()
        return out

    nthreads = _threads()
    if nthreads > 1 and len(trials) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            per_trial = list(pool.map(one_trial, trials))
    else:
        per_trial = [one_trial(t) for t in trials]

    rows = []
    for k, (ident, indices, _, role) in enumerate(instances):
        outcomes = [pt[k] for pt in per_trial]
        millis = sum(o[2] for o in outcomes)
        if outcomes[0][0] == "not-in-paper":
            rows.append(Row(ident, indices, "not-in-paper", outcomes[0][1], millis, role))
            continue
        bad = [f"trial {t}: {o[1]}" for t, o in enumerate(outcomes) if o[0] == "bad"]
        if not bad:
            status = "pass"
        else:
            status = "fail" if role == "check" else "mismatch"
        rows.append(Row(ident, indices, status, " | ".join(bad), millis, role))
    return rows


def _config(n, D, R, trials, seed, module, convention=CANONICAL["convention"],
            normalization=CANONICAL["normalization"], shift=CANONICAL["shift"], params=None, **extra) -> dict:
    cfg = {"n": n, "D": D, "R": R, "trials": trials, "seed": seed, "module": module,
           "convention": convention, "normalization": normalization, "shift": shift}
    if params is not None:
        cfg["parameters"] = [{k: rat_str(v) for k, v in p.items()} for p in params]
    cfg.update(extra)
    return cfg


def _trials(n, D, R, trials, seed, module, fixed=None, box=None, **kw) -> tuple[list[Trial], list[dict]]:
    params = draw_trials(seed, trials, fixed)
    return [Trial(n, D, R, p, module, box=box, **kw) for p in params], params


def _delta(a, b) -> int:
    return 1 if a == b else 0


# ---------------------------------------------------------------------------
# RTT-type relations
# ---------------------------------------------------------------------------


def rtt_instances(n: int, r_max: int) -> list:
    inst = []
    rng = range(1, n + 1)
    for r in range(0, r_max + 1):
        for i, j, k, l in product(rng, repeat=4):
            def build(tr, i=i, j=j, k=k, l=l, r=r):
                T = tr.images.T
                lhs = op_commutator(T(i, j, 1), T(k, l, r))
                rhs = op_sum([op_scale(_delta(j, k), T(i, l, r)), op_scale(-_delta(i, l), T(k, j, r))])
                return lhs, rhs
            inst.append(("ga1", {"i": i, "j": j, "k": k, "l": l, "r": r}, build, "check"))
    for i, j in product(rng, repeat=2):
        def build(tr, i=i, j=j):
            T, h = tr.images.T, tr.params[HBAR]
            lhs = op_commutator(T(i, i, 2), T(j, j, 2))
            rhs = op_scale(-h, op_sum([op_compose(T(j, i, 1), T(i, j, 2)),
                                       op_scale(-1, op_compose(T(j, i, 2), T(i, j, 1)))]))
            return lhs, rhs
        inst.append(("ga2", {"i": i, "j": j}, build, "check"))
    for r in range(1, r_max + 1):
        for i, k, l in product(rng, repeat=3):
            def build(tr, i=i, k=k, l=l, r=r):
                T, h = tr.images.T, tr.params[HBAR]
                lhs = op_commutator(T(i, i, 2), T(k, l, r))
                rhs = op_sum([
                    op_scale(_delta(i, k), T(i, l, r + 1)),
                    op_scale(-_delta(i, l), T(k, i, r + 1)),
                    op_scale(-h, op_compose(T(k, i, 1), T(i, l, r))),
                    op_scale(h, op_compose(T(k, i, r), T(i, l, 1))),
                ])
                return lhs, rhs
            inst.append(("ga3", {"i": i, "k": k, "l": l, "r": r}, build, "check"))
    return inst


def check_rtt_like(n: int = 3, r_max: int = 3, D: int = 3, trials: int = 3, seed: int = 0,
                   module: str = "trivial:lambda", fixed: dict | None = None) -> VerificationReport:
    if n < 2 or r_max < 1:
        raise ValueError("need n >= 2 and r_max >= 1")
    trs, params = _trials(n, D, r_max + 1, trials, seed, module, fixed)
    rep = VerificationReport(_config(n, D, r_max + 1, trials, seed, module, params=params, r_max=r_max))
    rep.results = run_instances(rtt_instances(n, r_max), trs)
    rep.notes.append(CAVEAT)
    return rep


# ---------------------------------------------------------------------------
# minimalistic presentation on Kodera's images
# ---------------------------------------------------------------------------


def _X(sign: str, i: int, r: int) -> GenId:
    return GenId("Xplus" if sign == "+" else "Xminus", i, 0, r)


def _pm(sign: str) -> int:
    return 1 if sign == "+" else -1


def _needs_index0(*gens: GenId) -> None:
    for g in gens:
        if g.i == 0 and g.r >= 1:
            raise NotInPaper(f"needs the unprinted image of {g}")


def minimalistic_instances(n: int) -> list:
    inst = []
    idx = range(0, n)
    boundary = {(0, n - 1), (n - 1, 0)}
    M = lambda tr, g: tr.images.minimalistic(g)  # noqa: E731

    def add(ident, indices, build):
        inst.append((ident, indices, build, "check"))

    for i, j in product(idx, repeat=2):
        for r, s in product((0, 1), repeat=2):
            def b(tr, i=i, j=j, r=r, s=s):
                _needs_index0(GenId("H", i, 0, r), GenId("H", j, 0, s))
                return op_commutator(M(tr, GenId("H", i, 0, r)), M(tr, GenId("H", j, 0, s))), op_zero(n)
            add("Eq2.1", {"i": i, "j": j, "r": r, "s": s}, b)
    for i, j in product(idx, repeat=2):
        def b(tr, i=i, j=j):
            lhs = op_commutator(M(tr, _X("+", i, 0)), M(tr, _X("-", j, 0)))
            return lhs, op_scale(_delta(i, j), M(tr, GenId("H", i, 0, 0))) if i == j else op_zero(n)
        add("Eq2.2", {"i": i, "j": j}, b)
    for i, j in product(idx, repeat=2):
        for side in ("a", "b"):
            def b(tr, i=i, j=j, side=side):
                gens = (_X("+", i, 1), _X("-", j, 0)) if side == "a" else (_X("+", i, 0), _X("-", j, 1))
                _needs_index0(*gens)
                if i == j:
                    _needs_index0(GenId("H", i, 0, 1))
                lhs = op_commutator(M(tr, gens[0]), M(tr, gens[1]))
                rhs = M(tr, GenId("H", i, 0, 1)) if i == j else op_zero(n)
                return lhs, rhs
            add("Eq2.3", {"i": i, "j": j, "side": side}, b)
    for i, j in product(idx, repeat=2):
        for r in (0, 1):
            for sg in "+-":
                def b(tr, i=i, j=j, r=r, sg=sg):
                    _needs_index0(_X(sg, j, r))
                    lhs = op_commutator(M(tr, GenId("H", i, 0, 0)), M(tr, _X(sg, j, r)))
                    return lhs, op_scale(_pm(sg) * cartan(n, i, j), M(tr, _X(sg, j, r)))
                add("Eq2.4", {"i": i, "j": j, "r": r, "sign": sg}, b)
    for i, j in product(idx, repeat=2):
        for sg in "+-":
            if (i, j) in boundary:
                ident = "Eq2.6" if i == 0 else "Eq2.7"

                def b(tr, i=i, j=j, sg=sg):
                    _needs_index0(GenId("Htilde", i, 0, 1), _X(sg, j, 1))
                    raise AssertionError("unreachable")
                add(ident, {"i": i, "j": j, "sign": sg}, b)
                continue

            def b(tr, i=i, j=j, sg=sg):
                a = cartan(n, i, j)
                _needs_index0(GenId("Htilde", i, 0, 1))
                if a:
                    _needs_index0(_X(sg, j, 1))
                lhs = op_commutator(M(tr, GenId("Htilde", i, 0, 1)), M(tr, _X(sg, j, 0)))
                rhs = op_scale(_pm(sg) * a, M(tr, _X(sg, j, 1))) if a else op_zero(n)
                return lhs, rhs
            add("Eq2.5", {"i": i, "j": j, "sign": sg}, b)
    for i, j in product(idx, repeat=2):
        for sg in "+-":
            if (i, j) in boundary:
                if i != 0:
                    continue  # the boundary relation is stated once, with (0, n-1)

                def b(tr, i=i, j=j, sg=sg):
                    _needs_index0(_X(sg, 0, 1))
                    raise AssertionError("unreachable")
                add("Eq2.9", {"i": i, "j": j, "sign": sg}, b)
                continue

            def b(tr, i=i, j=j, sg=sg):
                _needs_index0(_X(sg, i, 1), _X(sg, j, 1))
                h = tr.params[HBAR]
                lhs = op_sum([op_commutator(M(tr, _X(sg, i, 1)), M(tr, _X(sg, j, 0))),
                              op_scale(-1, op_commutator(M(tr, _X(sg, i, 0)), M(tr, _X(sg, j, 1))))])
                rhs = op_scale(_pm(sg) * cartan(n, i, j) * h / 2,
                               op_anticommutator(M(tr, _X(sg, i, 0)), M(tr, _X(sg, j, 0))))
                return lhs, rhs
            add("Eq2.8", {"i": i, "j": j, "sign": sg}, b)
    for i, j in product(idx, repeat=2):
        if i == j:
            continue
        for sg in "+-":
            def b(tr, i=i, j=j, sg=sg):
                x, y = M(tr, _X(sg, i, 0)), M(tr, _X(sg, j, 0))
                for _ in range(1 + abs(cartan(n, i, j))):
                    y = op_commutator(x, y)
                return y, op_zero(n)
            add("Eq2.10", {"i": i, "j": j, "sign": sg}, b)
    return inst


def check_minimalistic(n: int = 3, D: int = 3, trials: int = 3, seed: int = 0,
                       module: str = "trivial:lambda", fixed: dict | None = None) -> VerificationReport:
    if n < 3:
        raise ValueError("the affine Yangian needs n >= 3")
    trs, params = _trials(n, D, 2, trials, seed, module, fixed)
    rep = VerificationReport(_config(n, D, 2, trials, seed, module, params=params))
    rep.results = run_instances(minimalistic_instances(n), trs)
    rep.notes.append(CAVEAT)
    return rep


# ---------------------------------------------------------------------------
# current presentation on minor-derived images
# ---------------------------------------------------------------------------


def current_instances(n: int, rs_max: int) -> list:
    inst = []
    idx = range(1, n)
    Xh = lambda tr, sg, i, r: tr.images.higher(sg, i, r)  # noqa: E731
    Hh = lambda tr, i, r: tr.images.higher_H(i, r)  # noqa: E731

    def add(ident, indices, build):
        inst.append((ident, indices, build, "check"))

    pairs = [(r, s) for r in range(rs_max + 1) for s in range(rs_max + 1) if r + s <= rs_max]
    for i, j in product(idx, repeat=2):
        for r, s in pairs:
            def b(tr, i=i, j=j, r=r, s=s):
                return op_commutator(Hh(tr, i, r), Hh(tr, j, s)), op_zero(n)
            add("Eq1.1", {"i": i, "j": j, "r": r, "s": s}, b)
    for i, j in product(idx, repeat=2):
        for r, s in pairs:
            def b(tr, i=i, j=j, r=r, s=s):
                lhs = op_commutator(Xh(tr, "+", i, r), Xh(tr, "-", j, s))
                return lhs, Hh(tr, i, r + s) if i == j else op_zero(n)
            add("Eq1.2", {"i": i, "j": j, "r": r, "s": s}, b)
    for i, j in product(idx, repeat=2):
        for r in range(rs_max + 1):
            for sg in "+-":
                def b(tr, i=i, j=j, r=r, sg=sg):
                    lhs = op_commutator(Hh(tr, i, 0), Xh(tr, sg, j, r))
                    return lhs, op_scale(_pm(sg) * cartan(n, i, j), Xh(tr, sg, j, r))
                add("Eq1.4", {"i": i, "j": j, "r": r, "sign": sg}, b)
    for i, j in product(idx, repeat=2):
        for r, s in pairs:
            if r + s + 1 > rs_max:
                continue
            for sg in "+-":
                def b(tr, i=i, j=j, r=r, s=s, sg=sg):
                    h = tr.params[HBAR]
                    lhs = op_sum([op_commutator(Hh(tr, i, r + 1), Xh(tr, sg, j, s)),
                                  op_scale(-1, op_commutator(Hh(tr, i, r), Xh(tr, sg, j, s + 1)))])
                    rhs = op_scale(_pm(sg) * cartan(n, i, j) * h / 2,
                                   op_anticommutator(Hh(tr, i, r), Xh(tr, sg, j, s)))
                    return lhs, rhs
                add("Eq1.5", {"i": i, "j": j, "r": r, "s": s, "sign": sg}, b)
                if True:
                    def b8(tr, i=i, j=j, r=r, s=s, sg=sg):
                        h = tr.params[HBAR]
                        lhs = op_sum([op_commutator(Xh(tr, sg, i, r + 1), Xh(tr, sg, j, s)),
                                      op_scale(-1, op_commutator(Xh(tr, sg, i, r), Xh(tr, sg, j, s + 1)))])
                        rhs = op_scale(_pm(sg) * cartan(n, i, j) * h / 2,
                                       op_anticommutator(Xh(tr, sg, i, r), Xh(tr, sg, j, s)))
                        return lhs, rhs
                    add("Eq1.8", {"i": i, "j": j, "r": r, "s": s, "sign": sg}, b8)
    for i, j in product(idx, repeat=2):
        if i == j:
            continue
        m = 1 - cartan(n, i, j)
        for modes in product(range(rs_max + 1), repeat=m + 1):
            *rs, s = modes
            if sum(modes) > rs_max or list(rs) != sorted(rs):
                continue
            for sg in "+-":
                def b(tr, i=i, j=j, rs=tuple(rs), s=s, sg=sg):
                    terms = []
                    for perm in set(permutations(rs)):
                        y = Xh(tr, sg, j, s)
                        for rr in reversed(perm):
                            y = op_commutator(Xh(tr, sg, i, rr), y)
                        terms.append(y)
                    # distinct orderings only; repeated modes are counted by multiplicity
                    mult = factorial(len(rs)) // len(set(permutations(rs)))
                    return op_scale(mult, op_sum(terms)), op_zero(n)
                add("Eq1.10", {"i": i, "j": j, "r": list(rs), "s": s, "sign": sg}, b)
    return inst


def check_current(n: int = 3, rs_max: int = 3, R: int = 6, D: int = 2, trials: int = 3, seed: int = 0,
                  module: str = "trivial:lambda", convention: str = CANONICAL["convention"],
                  shift: str = CANONICAL["shift"], fixed: dict | None = None) -> VerificationReport:
    if rs_max > R - 2:
        raise ValueError("need rs_max <= R - 2")
    trs, params = _trials(n, D, R, trials, seed, module, fixed, convention=convention, shift=shift)
    rep = VerificationReport(_config(n, D, R, trials, seed, module, convention, shift=shift,
                                     params=params, rs_max=rs_max))
    rep.results = run_instances(current_instances(n, rs_max), trs)
    rep.notes.append(CAVEAT)
    return rep


# ---------------------------------------------------------------------------
# iota-hat suite: Eq2.15, Eq2.16, Eq2.17
# ---------------------------------------------------------------------------


def iota_instances(n: int, R: int, normalization: str, role: str) -> list:
    inst = []
    tag = {"normalization": normalization}

    def A(tr):
        return tr.images_for(normalization).iota(GenId("A", n, 0, 1))

    def b15(tr):
        ib = tr.images_for(normalization)
        return op_commutator(ib.iota(GenId("Htilde", n - 1, 0, 1)), A(tr)), op_zero(n)
    inst.append(("Eq2.15", dict(tag), b15, role))
    for sg in "+-":
        def b16(tr, sg=sg):
            ib = tr.images_for(normalization)
            lhs = op_commutator(A(tr), ib.iota(_X(sg, n - 1, 0)))
            return lhs, op_scale(-_pm(sg), ib.minimalistic(_X(sg, n - 1, 1)))
        inst.append(("Eq2.16", dict(tag, sign=sg, index=n - 1), b16, role))
    for r in range(1, R - 1):
        for sg in "+-":
            def b17(tr, r=r, sg=sg):
                ib = tr.images_for(normalization)
                x = ib.iota(_X(sg, n - 1, 0))
                for _ in range(r):
                    x = op_scale(-_pm(sg), op_commutator(A(tr), x))
                lhs = op_scale(-_pm(sg), op_commutator(A(tr), x))
                return lhs, ib.higher(sg, n - 1, r + 1)
            inst.append(("Eq2.17", dict(tag, sign=sg, r=r), b17, role))
    return inst


class _IotaTrial(Trial):
    def images_for(self, normalization: str) -> ImageBuilder:
        cache = self.__dict__.setdefault("_by_norm", {})
        if normalization not in cache:
            ib = self.builder(self.convention, self.shift, normalization)
            # share the T images and Gauss series with the default builder
            ib._T, ib._series, ib._minors, ib._gauss = (self.images._T, self.images._series,
                                                        self.images._minors, self.images._gauss)
            cache[normalization] = ib
        return cache[normalization]


def check_iota_suite(n: int = 3, D: int = 3, R: int = 4, trials: int = 3, seed: int = 0,
                     module: str = "trivial:lambda", normalization: str = CANONICAL["normalization"],
                     fixed: dict | None = None) -> VerificationReport:
    if n < 3:
        raise ValueError("need n >= 3")
    params = draw_trials(seed, trials, fixed)
    trs = [_IotaTrial(n, D, R, p, module, normalization=normalization) for p in params]
    inst = []
    for norm in NORMALIZATIONS:
        inst += iota_instances(n, R, norm, "check" if norm == normalization else "probe")
    rep = VerificationReport(_config(n, D, R, trials, seed, module, normalization=normalization, params=params))
    rep.results = run_instances(inst, trs)
    rep.notes.append("Eq2.16 is read with index n-1 (the generators stop at n-1)")
    rep.notes.append(CAVEAT)
    return rep


# ---------------------------------------------------------------------------
# quantum minor lemmas
# ---------------------------------------------------------------------------


def _shifted(ib: ImageBuilder, a: int, b: int, j: int) -> PowerSeriesOp:
    s = ib.t_series(a, b)
    return series_shift(s, j * ib.hbar) if j else s


def _replace(t: tuple, u: int, x: int) -> tuple:
    return t[:u] + (x,) + t[u + 1:]


def _signed_products(ib: ImageBuilder, rows: tuple, cols: tuple, factor_j) -> PowerSeriesOp | None:
    """sum over sigma, tau, j of sgn(sigma) sgn(tau) t(u) ... F_j ... t(u+(l-1)hbar).

    ``factor_j(a, b, j)`` returns the series placed at position j (or None to
    drop the term) where a = a_{sigma(j)}, b = b_{tau(j)}.
    """
    l = len(rows)
    total = None
    for sigma in permutations(range(l)):
        for tau in permutations(range(l)):
            sign = perm_sign(sigma) * perm_sign(tau)
            for j in range(l):
                fj = factor_j(rows[sigma[j]], cols[tau[j]], j)
                if fj is None:
                    continue
                fs = [fj if m == j else _shifted(ib, rows[sigma[m]], cols[tau[m]], m) for m in range(l)]
                prod = fs[0]
                for f in fs[1:]:
                    prod = series_mul(prod, f)
                prod = prod.scaled(sign)
                total = prod if total is None else total + prod
    return total


def _const_series(ib: ImageBuilder, op: OpExpr) -> PowerSeriesOp:
    return PowerSeriesOp(ib.n, [op] + [op_zero(ib.n)] * ib.R)


def _t2_lhs(ib: ImageBuilder, rows: tuple, cols: tuple, i: int, r: int) -> OpExpr:
    """Coefficient r of [T2_ii, t^a_b(v)] - v [T1_ii, t^a_b(v)]."""
    M, T = ib.minor(rows, cols), ib.T
    return op_sum([op_commutator(T(i, i, 2), M[r]), op_scale(-1, op_commutator(T(i, i, 1), M[r + 1]))])


def _t2_derivation_rhs(ib: ImageBuilder, rows: tuple, cols: tuple, i: int) -> PowerSeriesOp:
    """Factor-by-factor form: T2_ii - v T1_ii acts on the factor at u + j hbar by
    -hbar (T1_{a,i} t_{i,b} - t_{a,i} T1_{i,b}) + j hbar (d_{a,i} t_{i,b} - d_{b,i} t_{a,i})."""
    h, T = ib.hbar, ib.T

    def factor(a, b, j):
        A, B = _shifted(ib, i, b, j), _shifted(ib, a, i, j)
        out = series_mul(_const_series(ib, T(a, i, 1)), A).scaled(-h) + series_mul(B, _const_series(ib, T(i, b, 1))).scaled(h)
        if a == i and j:
            out = out + A.scaled(j * h)
        if b == i and j:
            out = out + B.scaled(-j * h)
        return out

    return _signed_products(ib, rows, cols, factor)


def _t2_printed_rhs(ib: ImageBuilder, rows: tuple, cols: tuple, i: int, form: str, r: int) -> OpExpr:
    """Coefficient r of the right-hand sides as printed ("101" or "103")."""
    h, T, l = ib.hbar, ib.T, len(rows)
    terms = []
    for u in range(l):
        left = ib.minor(_replace(rows, u, i), cols)[r]
        right = ib.minor(rows, _replace(cols, u, i))[r]
        if form == "101":
            terms.append(op_scale(-h, op_compose(T(rows[u], i, 1), left)))
            terms.append(op_scale(h, op_compose(right, T(i, cols[u], 1))))
        else:
            terms.append(op_scale(-h, op_compose(left, T(rows[u], i, 1))))
            terms.append(op_scale(h, op_compose(T(i, cols[u], 1), right)))
    if form == "101":
        terms.append(op_scale(h, ib.minor(rows, cols)[r]))
        for u, v in product(range(l), repeat=2):
            if rows[u] == cols[v]:
                terms.append(op_scale(-h, ib.minor(_replace(rows, u, i), _replace(cols, v, i))[r]))

    def factor(a, b, j):
        weight = l - 1 - 2 * j  # l + 1 - 2j with j counted from 1
        if not weight:
            return None
        if form == "101":
            return _shifted(ib, i, b, j).scaled(weight) if a == i else None
        return _shifted(ib, a, i, j).scaled(weight) if b == i else None

    special = _signed_products(ib, rows, cols, factor)
    if special is not None:
        terms.append(op_scale(-h, special[r]))
    return op_sum(terms)


def minor_lemma_instances(n: int, R: int, lmax: int, R_vanish: int = 6) -> list:
    inst = []
    rng = range(1, n + 1)

    def add(ident, indices, build, role="check"):
        inst.append((ident, indices, build, role))

    # (al103-1): repeated row or column index
    for l in range(2, lmax + 1):
        for rows in product(rng, repeat=l):
            for cols in product(rng, repeat=l):
                if len(set(rows)) == l and len(set(cols)) == l:
                    continue
                if list(rows) != sorted(rows) and list(cols) != sorted(cols):
                    continue  # one representative ordering per pattern keeps the suite small
                for r in range(R_vanish + 1):
                    def b(tr, rows=rows, cols=cols, r=r):
                        return tr.images.minor(rows, cols)[r], op_zero(n)
                    add("al103-1", {"rows": list(rows), "cols": list(cols), "r": r}, b)

    distinct = [(rows, cols) for l in range(1, lmax + 1)
                for rows in permutations(rng, l) for cols in permutations(rng, l)
                if list(rows) == sorted(rows) and list(cols) == sorted(cols)]

    # (al100): [T1_ij, t^a_b(v)] for pairwise distinct index lists
    for rows, cols in distinct:
        for i, j in product(rng, repeat=2):
            for r in range(R + 1):
                def b(tr, rows=rows, cols=cols, i=i, j=j, r=r):
                    ib = tr.images
                    lhs = op_commutator(ib.T(i, j, 1), ib.minor(rows, cols)[r])
                    terms = []
                    for u in range(len(rows)):
                        if rows[u] == j:
                            terms.append(ib.minor(_replace(rows, u, i), cols)[r])
                        if cols[u] == i:
                            terms.append(op_scale(-1, ib.minor(rows, _replace(cols, u, j))[r]))
                    return lhs, op_sum(terms) if terms else op_zero(n)
                add("al100", {"rows": list(rows), "cols": list(cols), "i": i, "j": j, "r": r}, b)

    # leading coefficient of the principal minor against a brute-force count
    for l in range(1, min(3, n) + 1):
        top = tuple(range(1, l + 1))

        def b(tr, top=top, l=l):
            oracle = 0
            for sigma in permutations(range(l)):
                for tau in permutations(range(l)):
                    if all(top[sigma[k]] == top[tau[k]] for k in range(l)):
                        oracle += perm_sign(sigma) * perm_sign(tau)
            return tr.images.minor(top, top)[0], op_const(n, oracle)
        add("minor-leading", {"l": l, "expected": factorial(l)}, b)

    # T2_ii commutator: factor-by-factor form checked, printed forms probed
    for rows, cols in distinct:
        for i in rng:
            for r in range(R):
                idx = {"rows": list(rows), "cols": list(cols), "i": i, "r": r}

                def b(tr, rows=rows, cols=cols, i=i, r=r):
                    ib = tr.images
                    return _t2_lhs(ib, rows, cols, i, r), _t2_derivation_rhs(ib, rows, cols, i)[r]
                add("al101", idx, b)
                for form in ("101", "103"):
                    def bp(tr, rows=rows, cols=cols, i=i, r=r, form=form):
                        ib = tr.images
                        return _t2_lhs(ib, rows, cols, i, r), _t2_printed_rhs(ib, rows, cols, i, form, r)
                    add(f"al{form}-printed", idx, bp, "probe")
    return inst


def check_minor_lemmas(n: int = 3, R: int = 4, D: int = 2, trials: int = 1, seed: int = 0,
                       module: str = "trivial:lambda", lmax: int | None = None, R_vanish: int = 6,
                       fixed: dict | None = None) -> VerificationReport:
    if lmax is None:
        lmax = 2 if n <= 3 else 3
    trs, params = _trials(n, D, max(R + 1, R_vanish), trials, seed, module, fixed)
    rep = VerificationReport(_config(n, D, R, trials, seed, module, params=params, lmax=lmax, R_vanish=R_vanish))
    rep.results = run_instances(minor_lemma_instances(n, R, lmax, R_vanish), trs)
    rep.notes.append("al101 is checked in the factor-by-factor form; the printed right-hand sides "
                     "are reported as al101-printed and al103-printed probes")
    rep.notes.append(CAVEAT)
    return rep



# ---------------------------------------------------------------------------
# evaluation-map comparison and the convention probe matrix
# ---------------------------------------------------------------------------


class _ProbeTrial(Trial):
    def config_builder(self, convention: str, shift: str) -> ImageBuilder:
        cache = self.__dict__.setdefault("_by_conv", {})
        key = (convention, shift)
        if key not in cache:
            ib = self.builder(convention, shift, self.normalization)
            if convention == self.images.convention:
                ib._T, ib._series, ib._minors = self.images._T, self.images._series, self.images._minors
            else:
                ib._T = self.images._T
            cache[key] = ib
        return cache[key]

    def norm_builder(self, normalization: str) -> ImageBuilder:
        cache = self.__dict__.setdefault("_by_norm", {})
        if normalization not in cache:
            ib = self.builder(self.convention, self.shift, normalization)
            ib._T = self.images._T
            cache[normalization] = ib
        return cache[normalization]


def check_thm_ref_and_conventions(n: int = 3, D: int = 3, R: int = 2, trials: int = 3, seed: int = 0,
                                  module: str = "trivial:lambda", fixed: dict | None = None) -> VerificationReport:
    if n < 3:
        raise ValueError("need n >= 3")
    R = max(R, 2)
    params = draw_trials(seed, trials, fixed)
    trs = [_ProbeTrial(n, D, R, p, module) for p in params]

    comparisons = [(sg, i, r) for i in range(1, n) for sg in "+-" for r in (0, 1)]
    conv_inst = []
    for conv in CONVENTIONS:
        for sh in SHIFTS:
            for sg, i, r in comparisons:
                def b(tr, conv=conv, sh=sh, sg=sg, i=i, r=r):
                    ib = tr.config_builder(conv, sh)
                    return ib.higher(sg, i, r), ib.minimalistic(_X(sg, i, r))
                conv_inst.append(("thm-ref-probe", {"convention": conv, "shift": sh, "sign": sg, "i": i, "r": r},
                                  b, "probe"))
    norm_inst = []
    for norm in NORMALIZATIONS:
        for sg in "+-":
            def b(tr, norm=norm, sg=sg):
                ib = tr.norm_builder(norm)
                lhs = op_commutator(ib.iota(GenId("A", n, 0, 1)), ib.iota(_X(sg, n - 1, 0)))
                return lhs, op_scale(-_pm(sg), ib.minimalistic(_X(sg, n - 1, 1)))
            norm_inst.append(("normalization-probe", {"normalization": norm, "sign": sg}, b, "probe"))

    conv_rows = run_instances(conv_inst, trs)
    norm_rows = run_instances(norm_inst, trs)

    conv_ok = {}
    for row in conv_rows:
        key = (row.indices["convention"], row.indices["shift"])
        conv_ok[key] = conv_ok.get(key, True) and row.status == "pass"
    norm_ok = {}
    for row in norm_rows:
        key = row.indices["normalization"]
        norm_ok[key] = norm_ok.get(key, True) and row.status == "pass"
    passing = [(c, s, nm) for (c, s), ok in conv_ok.items() if ok for nm, ok2 in norm_ok.items() if ok2]

    rep = VerificationReport(_config(n, D, R, trials, seed, module, params=params))
    rep.results = conv_rows + norm_rows
    for (c, s), ok in conv_ok.items():
        for nm, ok2 in norm_ok.items():
            rep.results.append(Row("probe-matrix", {"convention": c, "shift": s, "normalization": nm},
                                   "pass" if ok and ok2 else "mismatch", role="probe"))
    if len(passing) == 1:
        c, s, nm = passing[0]
        rep.config["canonical"] = {"convention": c, "shift": s, "normalization": nm}
        for row in conv_rows:
            if (row.indices["convention"], row.indices["shift"]) == (c, s):
                rep.results.append(Row("thm-ref", {k: v for k, v in row.indices.items()
                                                   if k not in ("convention", "shift")},
                                       row.status, row.residual, row.millis))
        rep.notes.append(f"canonical configuration: series={c}, shift={s}, normalization={nm}")
    else:
        dump = "; ".join(f"{k}={'ok' if v else 'x'}" for k, v in conv_ok.items())
        rep.results.append(Row("thm-ref", {"configurations_passing": len(passing)}, "fail",
                               f"{len(passing)} configurations pass (need exactly 1): {dump}"))
    rep.notes.append(CAVEAT)
    return rep


# ---------------------------------------------------------------------------
# template-level omega symmetry
# ---------------------------------------------------------------------------


def _template_multiset(op: OpExpr) -> list:
    if op.kind == "leaf":
        leaves = [op.args[0]]
    elif op.kind == "sum":
        leaves = [t.args[0] for t in op.args]
    else:
        return [("op", op.kind)]
    return sorted((repr(t.canonical()), str(t.coef)) for t in leaves)


def _omega_op(op: OpExpr) -> OpExpr:
    from .seriesop import op_leaf

    if op.kind == "leaf":
        return op_leaf(omega_template(op.args[0]))
    if op.kind == "sum":
        return op_sum([_omega_op(t) for t in op.args])
    if op.kind == "const":
        return op
    raise SeriesError(f"omega is only implemented on template sums, not {op.kind}")


def check_omega_symmetry(n: int = 3, r_max: int = 4, hbar=Fraction(1), c=Fraction(1)) -> VerificationReport:
    rep = VerificationReport({"n": n, "r_max": r_max})
    for r in range(0, r_max + 1):
        for i, j in product(range(1, n + 1), repeat=2):
            t0 = time.perf_counter()
            img = _omega_op(ev_T(i, j, r, n, hbar, c))
            transpose = _template_multiset(img) == _template_multiset(ev_T(j, i, r, n, hbar, c))
            literal = _template_multiset(img) == _template_multiset(ev_T(i, j, r, n, hbar, c))
            ms = int((time.perf_counter() - t0) * 1000)
            rep.results.append(Row("omega", {"i": i, "j": j, "r": r},
                                   "pass" if transpose else "fail",
                                   "" if transpose else "template multisets differ", ms))
            rep.results.append(Row("omega-literal", {"i": i, "j": j, "r": r},
                                   "pass" if literal else "mismatch", "", ms, role="probe"))
    rep.notes.append("omega(ev T_ij) is compared with ev T_ji; the untransposed reading is reported as omega-literal")
    return rep


# ---------------------------------------------------------------------------
# symmetric-function recurrences
# ---------------------------------------------------------------------------


def check_symfun(m_max: int = 6, n_max: int = 5) -> VerificationReport:
    rep = VerificationReport({"m_max": m_max, "n_max": n_max})
    for row in check_f_recurrences(m_max, n_max):
        ident = row["identity"]
        status = row["status"]
        role = "check"
        if ident == "rel1-literal":
            role = "probe"
        rep.results.append(Row(ident, {"m": row["m"], "n": row["n"]}, status,
                               "" if status in ("pass",) else f"{row['residual_terms']} residual terms", 0, role))
    rep.notes.append("rel1 is checked with f^{m-1}_n in the middle term; the printed variant is rel1-literal")
    return rep


SUITES = ("ga", "minimalistic", "current", "iota", "minors", "thm-ref", "omega", "symfun")


def run_suites(suites: Iterable[str], n: int = 3, D: int = 3, R: int = 6, r_max: int = 3, rs_max: int = 3,
               trials: int = 3, seed: int = 0, module: str = "trivial:lambda",
               fixed: dict | None = None, log: Callable[[str], None] | None = None,
               convention: str = CANONICAL["convention"], shift: str = CANONICAL["shift"],
               normalization: str = CANONICAL["normalization"]) -> VerificationReport:
    rep = VerificationReport(_config(n, D, R, trials, seed, module, convention, normalization, shift,
                                     r_max=r_max, rs_max=rs_max))
    for suite in suites:
        t0 = time.perf_counter()
        if suite == "ga":
            part = check_rtt_like(n, r_max, D, trials, seed, module, fixed)
        elif suite == "minimalistic":
            part = check_minimalistic(n, D, trials, seed, module, fixed)
        elif suite == "current":
            part = check_current(n, rs_max, R, min(D, 2), trials, seed, module, convention, shift, fixed)
        elif suite == "iota":
            part = check_iota_suite(n, D, min(R, 4), trials, seed, module, normalization, fixed)
        elif suite == "minors":
            part = check_minor_lemmas(n, min(R, 4), min(D, 2), 1, seed, module, fixed=fixed)
        elif suite == "thm-ref":
            part = check_thm_ref_and_conventions(n, D, 2, trials, seed, module, fixed)
        elif suite == "omega":
            part = check_omega_symmetry(n, r_max + 1)
        elif suite == "symfun":
            part = check_symfun()
        else:
            raise ValueError(f"unknown suite {suite!r}")
        part.config = {f"{suite}": {k: v for k, v in part.config.items()}}
        rep.extend(part)
        if log:
            log(f"suite {suite}: {len(part.results)} rows, {len(part.failed())} failed, "
                f"{time.perf_counter() - t0:.1f}s")
    return rep
