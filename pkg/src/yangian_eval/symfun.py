"""Complete homogeneous symmetric polynomials and the coefficient family f^m_n.

``f^m_n(z_1..z_n) = h_{m-n}((z_1+1)c, ..., (z_n+1)c)`` for ``2 <= n <= m`` and
zero otherwise.  These weight the normally ordered sums in the images of the
higher RTT generators.
"""

from __future__ import annotations

from .scalars import PolyQ


def _zero_like(x):
    return x * 0


def eval_h(m: int, args):
    """h_m of ``args``; works for any commutative ring elements (PolyQ, Fraction, int)."""
    if m < 0:
        raise ValueError(f"negative degree {m}")
    args = list(args)
    if not args:
        raise ValueError("h_m needs at least one argument")
    one = _zero_like(args[0]) + 1
    # table[d] = h_d of the arguments consumed so far
    table = [one] + [_zero_like(one)] * m
    for z in args:
        for d in range(1, m + 1):
            table[d] = table[d] + z * table[d - 1]
    return table[m]


def eval_f(m: int, n: int, args, c):
    args = list(args)
    if len(args) != n:
        raise ValueError(f"f^{m}_{n} needs {n} arguments, got {len(args)}")
    if not 2 <= n <= m:
        return _zero_like(c)
    return eval_h(m - n, [(z + 1) * c for z in args])


def _f_in_range(m: int, n: int) -> bool:
    # only the lower arity bound is a genuine boundary: for n > m the
    # "0 otherwise" clause agrees with h of negative degree
    return n >= 2


def check_f_recurrences(m_max: int, n_max: int) -> list[dict]:
    """Symbolic check of the three recurrences for f and h.

    rel1 is checked in the form implied by rel0,
        f^m_{n+1}(z_1..z_{n+1}) = f^{m-1}_n(z_1..z_n) + (z_{n+1}+1) c f^{m-1}_{n+1}(z_1..z_{n+1}),
    and the variant with ``f^m_n`` in the middle term is counted separately
    under ``rel1-literal``.
    """
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    params = ("c", "a") + tuple(f"z{k}" for k in range(1, n_max + 2))
    c = PolyQ.var(params, "c")
    a = PolyQ.var(params, "a")
    z = [PolyQ.var(params, f"z{k}") for k in range(1, n_max + 2)]
    rows: list[dict] = []

    def row(identity, m, n, residual, in_range):
        if not residual:
            status = "pass"
        elif in_range:
            status = "fail"
        else:
            status = "range-excluded"
        rows.append({
            "identity": identity,
            "m": m,
            "n": n,
            "status": status,
            "residual_terms": len(residual.terms),
        })

    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            lhs = eval_h(m, z[: n + 1])
            rhs = eval_h(m, z[:n]) + z[n] * eval_h(m - 1, z[: n + 1])
            row("rel0", m, n, lhs - rhs, True)

    for m in range(2, m_max + 1):
        for n in range(1, n_max + 1):
            w = (z[n] + 1) * c
            lhs = eval_f(m, n + 1, z[: n + 1], c)
            rhs = eval_f(m - 1, n, z[:n], c) + w * eval_f(m - 1, n + 1, z[: n + 1], c)
            row("rel1", m, n, lhs - rhs, _f_in_range(m - 1, n))

            literal = eval_f(m, n, z[:n], c) + w * eval_f(m - 1, n + 1, z[: n + 1], c)
            rows.append({
                "identity": "rel1-literal",
                "m": m,
                "n": n,
                "status": "pass" if not (lhs - literal) else "mismatch",
                "residual_terms": len((lhs - literal).terms),
            })

            shifted = z[: n - 1] + [z[n - 1] + a]
            lhs2 = eval_f(m, n, shifted, c) - eval_f(m, n, z[:n], c)
            rhs2 = a * c * eval_f(m, n + 1, z[:n] + [z[n - 1] + a], c)
            row("rel2", m, n, lhs2 - rhs2, _f_in_range(m, n))
    return rows
