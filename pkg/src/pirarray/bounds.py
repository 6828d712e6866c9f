"""Rate bounds and construction rates as exact fractions.

Nothing in here touches floating point. Parameter conventions: ``t`` cells
per server, ``p`` items, ``s = p/t``; for ``s <= 2`` and the large-s upper
bound the code is described by ``(t, d)`` with ``p = t + d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .constructions import be_multiplicities, small_s_params

UPPER = "upper"
LOWER = "lower"
EXACT = "rate"


@dataclass(frozen=True)
class BoundValue:
    value: Fraction
    kind: str
    source: str
    params: tuple

    def __post_init__(self):
        if not 0 < self.value <= 1:
            raise ValueError(f"{self.source}: value {self.value} outside (0, 1]")


def _as_fraction(s) -> Fraction:
    return s if isinstance(s, Fraction) else Fraction(s)


def ub_theorem1(s: int) -> Fraction:
    """Upper bound ``2^(s-1) / (2^s - 1)`` for one cell per server."""
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    return Fraction(2 ** (s - 1), 2**s - 1)


def lb_theorem2(s: int) -> Fraction:
    if s < 3:
        raise ValueError(f"need s >= 3, got {s}")
    return Fraction(s, 2 * s - 1)


def ub_asymptotic(s) -> Fraction:
    """``(s+1)/(2s)``; no finite ``t`` attains it."""
    s = _as_fraction(s)
    if s <= 1:
        raise ValueError(f"need s > 1, got {s}")
    return (s + 1) / (2 * s)


def ub_small_s(t: int, d: int) -> Fraction:
    if t < 2 or d < 1:
        raise ValueError(f"need t >= 2 and d >= 1, got t={t}, d={d}")
    return Fraction((2 * d + 1) * t + d * d, (t + d) * (2 * d + 1))


def ub_large_s(t: int, d: int) -> Fraction:
    if t < 2 or d <= t:
        raise ValueError(f"need t >= 2 and d > t, got t={t}, d={d}")
    return Fraction(d * d + 2 * t * t + 3 * t * d + 2 * t, 2 * (t + d) * (d + t + 1))


def best_upper_bound(t: int, d: int) -> BoundValue:
    """The sharpest available upper bound for ``p = t + d``."""
    if d > t:
        return BoundValue(ub_large_s(t, d), UPPER, "ub_large_s", (t, d))
    return BoundValue(ub_small_s(t, d), UPPER, "ub_small_s", (t, d))


def lb_theorem5(case: int, **params) -> Fraction:
    """Rates of the four earlier families for ``s > 2``.

    case 1: ``r, t`` with ``3 <= r <= t``; case 2: ``r, t, d`` with ``r >= 2``,
    ``t >= r``, ``1 <= d <= t-1``; case 3: integer ``s > 2``, ``t >= s``;
    case 4: integer ``s > 2`` and ``l, b, t`` with ``(s-1)t = lb``, ``t >= l+b``.
    """
    try:
        if case == 1:
            r, t = params["r"], params["t"]
            if not 3 <= r <= t:
                raise ValueError(f"case 1 needs 3 <= r <= t, got r={r}, t={t}")
            return Fraction(1, 2) + Fraction(t - r + 1, 2 * (r * t - (r - 2) * r - 1))
        if case == 2:
            r, t, d = params["r"], params["t"], params["d"]
            if r < 2 or t < r or not 1 <= d <= t - 1:
                raise ValueError(f"case 2 needs r >= 2, t >= r, 1 <= d <= t-1, got r={r}, t={t}, d={d}")
            p = r * t + d
            return 1 - Fraction((p - t + r) * (p - t), p * (2 * p - 2 * t + r))
        if case == 3:
            s, t = params["s"], params["t"]
            if s <= 2 or t < s:
                raise ValueError(f"case 3 needs integer s > 2 and t >= s, got s={s}, t={t}")
            return Fraction(s * t + t + 1, s * (2 * t + 1))
        if case == 4:
            s, t, l, b = params["s"], params["t"], params["l"], params["b"]
            if s <= 2 or l < 1 or b < 1 or (s - 1) * t != l * b or t < l + b:
                raise ValueError(f"case 4 needs (s-1)t = lb and t >= l+b, got s={s}, t={t}, l={l}, b={b}")
            return Fraction(s + 1, 2 * s) - Fraction(l, 2 * s * t)
    except KeyError as exc:
        raise ValueError(f"case {case} is missing parameter {exc}") from None
    raise ValueError(f"unknown case {case}")


def floor_rate(s: int, t: int) -> Fraction:
    """``(ts+t-1)/(2ts)``: any code whose non-singleton servers pair up beats this."""
    return Fraction(t * s + t - 1, 2 * t * s)


def _require_integer_s(s) -> int:
    s = _as_fraction(s)
    if s.denominator != 1 or s <= 2:
        raise ValueError(f"comparisons are defined for integer s > 2, got s={s}")
    return int(s)


def modified_closed_form(s: int, t: int) -> tuple[int, int]:
    """``(m, k)`` of the modified construction from its closed formulas."""
    s = _require_integer_s(s)
    p = s * t
    singles = comb(p, t) * comb(p - t - 1, t - 1)
    others = comb(p, t - 1) * sum(comb(p - t + 1, j) for j in range(t + 1, p - t + 2))
    k = Fraction(p + t, 2 * p) * singles + Fraction(p + t - 1, 2 * p) * others
    if k.denominator != 1:
        raise ArithmeticError(f"non-integral k={k} for s={s}, t={t}")
    return singles + others, int(k)


def modified_construction_rate(s: int, t: int) -> Fraction:
    m, k = modified_closed_form(s, t)
    return Fraction(k, m)


def be_closed_form(s: int, t: int) -> tuple[int, int]:
    """``(m, k)`` of the layered construction, by counting singleton cells."""
    s = _require_integer_s(s)
    p = s * t
    etas = be_multiplicities(s, t).etas
    alpha = comb(p, t) * etas[0]
    beta = sum(comb(p, t - 1) * comb(p - t + 1, (r - 1) * t + 1) * etas[r - 1] for r in range(2, s + 1))
    m = alpha + beta
    singles = Fraction(t * alpha + (t - 1) * beta, p)
    k = singles + (m - singles) / 2
    if k.denominator != 1:
        raise ArithmeticError(f"non-integral k={k} for s={s}, t={t}")
    return m, int(k)


def be_construction_rate(s: int, t: int) -> Fraction:
    m, k = be_closed_form(s, t)
    return Fraction(k, m)


def small_s_rate(t: int, d: int) -> Fraction:
    prm = small_s_params(t, d)
    return Fraction(prm.k, prm.m)


@dataclass(frozen=True)
class Comparison:
    case: int
    params: dict
    ours: Fraction
    theirs: Fraction

    @property
    def margin(self) -> Fraction:
        return self.ours - self.theirs

    @property
    def strict(self) -> bool:
        return self.ours > self.theirs


@dataclass(frozen=True)
class ComparisonReport:
    s: int
    t: int
    rate: Fraction
    rows: tuple[Comparison, ...]
    skipped: tuple[str, ...] = field(default=())

    @property
    def all_strict(self) -> bool:
        return all(c.strict for c in self.rows)


def compare_section42(s: int, t: int) -> ComparisonReport:
    """Compare the modified construction against each earlier family at ``(s, t)``.

    Only families defined at exactly this ``(s, t)`` are compared; the rest are
    listed in ``skipped`` with a reason.
    """
    s = _require_integer_s(s)
    if t < 2:
        raise ValueError(f"need t >= 2, got {t}")
    ours = modified_construction_rate(s, t)
    rows: list[Comparison] = []
    skipped: list[str] = []

    rs = [r for r in range(3, t + 1) if r * t - (r - 2) * r - 1 == s * t]
    for r in rs:
        rows.append(Comparison(1, {"r": r, "t": t}, ours, lb_theorem5(1, r=r, t=t)))
    if not rs:
        skipped.append(f"case 1: no r in [3, {t}] gives p = {s * t}")
    skipped.append("case 2: only defined for non-integer s")
    if t >= s:
        rows.append(Comparison(3, {"s": s, "t": t}, ours, lb_theorem5(3, s=s, t=t)))
    else:
        skipped.append(f"case 3: needs t >= s, t={t}")
    lb = (s - 1) * t
    pairs = [(l, lb // l) for l in range(1, lb + 1) if lb % l == 0 and t >= l + lb // l]
    for l, b in pairs:
        rows.append(Comparison(4, {"s": s, "t": t, "l": l, "b": b}, ours, lb_theorem5(4, s=s, t=t, l=l, b=b)))
    if not pairs:
        skipped.append(f"case 4: no factorisation (s-1)t = lb with t >= l+b")
    return ComparisonReport(s, t, ours, tuple(rows), tuple(skipped))


def s3_binomial_inequality(t: int) -> tuple[int, int]:
    """Both sides of ``(4t+2) C(2t-1, t-1) > 2^(2t)``."""
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    return (4 * t + 2) * comb(2 * t - 1, t - 1), 2 ** (2 * t)


def ub_improvement_check(t: int, d: int) -> bool:
    if t < 2 or d <= t:
        raise ValueError(f"need d > t >= 2, got t={t}, d={d}")
    return ub_large_s(t, d) < ub_small_s(t, d)


def ab_ratio(t: int, d: int) -> Fraction:
    """Singleton-to-other server ratio of the modified construction at ``p = 2t + d``."""
    a = comb(2 * t + d, t) * comb(t + d - 1, t - 1)
    b = comb(2 * t + d, t - 1) * sum(comb(t + d + 1, i) for i in range(d + 1))
    return Fraction(a, b)


# -- the max-min program behind the large-s upper bound ----------------------


@dataclass(frozen=True)
class ServerPartition:
    """Counts of singleton (l), small-sum (r), large-sum (u) and other (w) servers."""

    l: int
    r: int
    u: int
    w: int

    @property
    def m(self) -> int:
        return self.l + self.r + self.u + self.w


class BoundCheckError(AssertionError):
    pass


@dataclass(frozen=True)
class LPResult:
    best: Fraction
    argmax: ServerPartition
    continuous_optimum: Fraction
    optimum_with_u0: bool
    optimum_with_u0_w0: bool


def continuous_optimum(t: int, d: int, m: int) -> Fraction:
    p = t + d
    return Fraction(m * (p * p + t * p + 2 * t), 2 * (p + 1))


def lp_objective(t: int, d: int, part: ServerPartition) -> tuple[Fraction, Fraction]:
    """The two per-item-sum estimates ``(F, G)`` for a server partition."""
    p = t + d
    l, r, u, w = part.l, part.r, part.u, part.w
    f = Fraction(l * (p + t) + (r + u) * (p + t - 1) + w * (p + t - 2), 2)
    g = Fraction(l * (p + 3 * t) + r * (2 * p + 3 * t - 1) + 2 * u * (p + t - 1) + w * (3 * p + t - 2), 4)
    return f, g


def lp_check_theorem7(t: int, d: int, m: int, max_m: int = 200) -> LPResult:
    """Maximise ``min(F, G)`` over all integer partitions of ``m`` servers.

    Raises :class:`BoundCheckError` if the integer optimum exceeds the
    continuous optimum or no optimum has ``u = 0``.
    """
    if t < 2 or d <= t:
        raise ValueError(f"need d > t >= 2, got t={t}, d={d}")
    if not 1 <= m <= max_m:
        raise ValueError(f"m={m} outside enumeration range [1, {max_m}]")
    p = t + d
    # 4F and 4G as integer coefficient rows
    cf = (2 * (p + t), 2 * (p + t - 1), 2 * (p + t - 1), 2 * (p + t - 2))
    cg = (p + 3 * t, 2 * p + 3 * t - 1, 2 * (p + t - 1), 3 * p + t - 2)
    best = -1
    best_key = None
    argmax = None
    u0 = u0w0 = False
    for l in range(m + 1):
        for r in range(m - l + 1):
            for u in range(m - l - r + 1):
                w = m - l - r - u
                val = min(cf[0] * l + cf[1] * r + cf[2] * u + cf[3] * w,
                          cg[0] * l + cg[1] * r + cg[2] * u + cg[3] * w)
                if val > best:
                    best, u0, u0w0 = val, False, False
                    best_key = None
                if val == best:
                    u0 = u0 or u == 0
                    u0w0 = u0w0 or (u == 0 and w == 0)
                    key = (u, w, l)
                    if best_key is None or key < best_key:
                        best_key, argmax = key, ServerPartition(l, r, u, w)
    value = Fraction(best, 4)
    cont = continuous_optimum(t, d, m)
    if value > cont:
        raise BoundCheckError(f"integer optimum {value} exceeds continuous optimum {cont}")
    if not u0:
        raise BoundCheckError("no optimal partition with u = 0")
    return LPResult(value, argmax, cont, u0, u0w0)


# -- catalog -------------------------------------------------------------------


def catalog(t: int | None = None, d: int | None = None, s=None) -> list[BoundValue]:
    """Every bound or rate that applies at the given parameter point."""
    out: list[BoundValue] = []
    if t is not None and d is not None:
        p = t + d
        sr = Fraction(p, t)
        out.append(BoundValue(ub_small_s(t, d), UPPER, "ub_small_s", (t, d)))
        if d > t:
            out.append(BoundValue(ub_large_s(t, d), UPPER, "ub_large_s", (t, d)))
        out.append(BoundValue(ub_asymptotic(sr), UPPER, "ub_asymptotic", (sr,)))
        if d <= t and t > d * d - d:
            out.append(BoundValue(small_s_rate(t, d), EXACT, "construct_small_s", (t, d)))
        if sr.denominator == 1 and sr > 2:
            si = int(sr)
            out.append(BoundValue(modified_construction_rate(si, t), EXACT, "construct_modified", (si, t)))
            out.append(BoundValue(be_construction_rate(si, t), EXACT, "construct_be", (si, t)))
            out.append(BoundValue(floor_rate(si, t), LOWER, "paired_floor", (si, t)))
            rep = compare_section42(si, t)
            for row in rep.rows:
                out.append(BoundValue(row.theirs, LOWER, f"lb_theorem5_case{row.case}",
                                      tuple(row.params.values())))
        if sr > 2 and sr.denominator != 1:
            r, dd = divmod(p, t)
            if r >= 2 and t >= r:
                out.append(BoundValue(lb_theorem5(2, r=r, t=t, d=dd), LOWER, "lb_theorem5_case2", (r, t, dd)))
        for r in range(3, t + 1):
            if r * t - (r - 2) * r - 1 == p and not (sr.denominator == 1 and sr > 2):
                out.append(BoundValue(lb_theorem5(1, r=r, t=t), LOWER, "lb_theorem5_case1", (r, t)))
    if s is not None:
        sf = _as_fraction(s)
        if sf.denominator == 1 and sf >= 1:
            out.append(BoundValue(ub_theorem1(int(sf)), UPPER, "ub_theorem1", (int(sf),)))
        if sf.denominator == 1 and sf >= 3:
            out.append(BoundValue(lb_theorem2(int(sf)), LOWER, "lb_theorem2", (int(sf),)))
        if sf > 1:
            out.append(BoundValue(ub_asymptotic(sf), UPPER, "ub_asymptotic", (sf,)))
    return out
