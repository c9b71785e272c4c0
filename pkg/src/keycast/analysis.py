"""Support-union bound for weight-capped binary codes and the rate-gap reports.

SR stands for source reconstruction: every terminal first decodes some of
the source bits outright and derives its key from them.  All bounds are exact
:class:`~fractions.Fraction` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, comb
from typing import Sequence

from .generators import gen_fig3, gen_fig4
from .nonsecure import construct
from .secure import construct_secure

MAX_CODEBOOKS = 10**7


def as_fraction(x) -> Fraction:
    """Accept ints, Fractions and strings such as ``"1/2"``; refuse floats."""
    if isinstance(x, float):
        raise TypeError("pass exact values (int, Fraction or 'p/q'), not floats")
    return Fraction(x)


def plotkin_bound(M: int, n: int, w) -> Fraction:
    """n w (2 - w) (1 + 1/(M-1)): some pair of codewords has support union at most this."""
    w = as_fraction(w)
    if M < 2:
        raise ValueError("need at least two codewords")
    if n < 1:
        raise ValueError("blocklength must be positive")
    if not 0 < w <= 1:
        raise ValueError("weight fraction must lie in (0, 1]")
    return n * w * (2 - w) * (1 + Fraction(1, M - 1))


def _bits(word) -> int:
    if isinstance(word, int):
        return word
    s = "".join(str(int(b)) for b in word) if not isinstance(word, str) else word
    return int(s, 2) if s else 0


@dataclass(frozen=True)
class BinaryCodebook:
    n: int
    words: tuple
    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", as_fraction(self.w))
        object.__setattr__(self, "words", tuple(self.words))
        masks = [_bits(x) for x in self.words]
        if len(set(masks)) != len(masks):
            raise ValueError("codewords must be distinct")
        cap = self.w * self.n
        for x, m in zip(self.words, masks):
            if m >> self.n:
                raise ValueError(f"codeword {x!r} is longer than n={self.n}")
            if m.bit_count() > cap:
                raise ValueError(f"codeword {x!r} exceeds weight {cap}")

    @property
    def M(self) -> int:
        return len(self.words)


def min_support_pair(words: Sequence) -> tuple[tuple, int]:
    """Pair with the smallest support union, scanning pairs in input order.

    Ties keep the earliest pair (by position of the first, then the second word).
    """
    if isinstance(words, BinaryCodebook):
        words = words.words
    words = list(words)
    if len(words) < 2:
        raise ValueError("need at least two codewords")
    masks = [_bits(x) for x in words]
    best = None
    for i, j in combinations(range(len(words)), 2):
        size = (masks[i] | masks[j]).bit_count()
        if best is None or size < best[1]:
            best = ((words[i], words[j]), size)
    return best


def min_support_size_pruned(words: Sequence) -> int:
    """Same minimum as :func:`min_support_pair`, via weight-sorted pruning."""
    masks = sorted((_bits(x) for x in words), key=int.bit_count)
    if len(masks) < 2:
        raise ValueError("need at least two codewords")
    best = None
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            # union >= weight(b) and weights only grow from here on
            if best is not None and b.bit_count() >= best:
                break
            size = (a | b).bit_count()
            if best is None or size < best:
                best = size
        if best is not None and a.bit_count() >= best:
            break
    return best


@dataclass(frozen=True)
class PlotkinCheck:
    n: int
    M: int
    w: Fraction
    bound: Fraction
    codebooks: int
    checked: int
    worst: int | None  # largest min-support-union seen over all codebooks
    violation: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def verify_plotkin_exhaustive(n: int, M: int, w, cap: int = MAX_CODEBOOKS) -> PlotkinCheck:
    """Check the bound on every size-M codebook of weight <= w n words."""
    w = as_fraction(w)
    bound = plotkin_bound(M, n, w)
    max_weight = int(w * n)  # floor, w*n >= 0
    words = [x for x in range(1 << n) if x.bit_count() <= max_weight]
    total = comb(len(words), M)
    if total > cap:
        raise ValueError(f"{total} codebooks exceed the enumeration cap {cap}")
    union = [[(a | b).bit_count() for b in words] for a in words]
    worst = None
    checked = 0
    for book in combinations(range(len(words)), M):
        checked += 1
        best = min(union[i][j] for i, j in combinations(book, 2))
        if worst is None or best > worst:
            worst = best
            if best > bound:
                violation = tuple(format(words[i], f"0{n}b") for i in book)
                return PlotkinCheck(n, M, w, bound, total, checked, worst, violation)
    return PlotkinCheck(n, M, w, bound, total, checked, worst)


def corollary1_bound(n: int, w, eps) -> tuple[int, Fraction]:
    """Code size 1 + 1/eps (rounded up when 1/eps is not integral) and n(2w - w^2) + eps n."""
    w, eps = as_fraction(w), as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    M = 1 + ceil(1 / eps)
    bound = n * (2 * w - w * w) + eps * n
    exact = plotkin_bound(M, n, w)
    if exact > bound:
        raise AssertionError(f"pair bound {exact} exceeds relaxed bound {bound}")
    return M, bound


def _integral(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ValueError(f"{what} must be an integer, got {x}")
    return int(x)


def sr_gap_report_nonsecure(eps) -> dict:
    """Key-cast rate on the three-layer network versus the SR ceiling 3/4 + eps."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    ell = 1 + _integral(1 / eps, "1/eps")
    inst = gen_fig3(ell)
    res = construct(inst)
    bound = Fraction(3, 4) + eps
    return {
        "setting": "nonsecure",
        "eps": eps,
        "ell": ell,
        "instance": {"nodes": len(inst.nodes), "edges": len(inst.edges), "terminal_sets": ell},
        "keycast_rate": res.rate,
        "sr_upper_bound": bound,
        "strict_gap": bound < res.rate,
        "verified": res.ok,
        "field_k": res.code.field.k if res.code else None,
        "checks": res.report.counts() if res.report else None,
    }


def sr_gap_report_secure(eps) -> dict:
    """Secure key-cast rate on the many-set tight example versus 3/4 + eps."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    t = _integral(9 / eps, "9/eps")
    ell = t * (1 + t)
    inst = gen_fig4(ell)
    res = construct_secure(inst)
    bound = Fraction(3, 4) + eps
    return {
        "setting": "secure",
        "eps": eps,
        "ell": ell,
        "instance": {"nodes": len(inst.nodes), "edges": len(inst.edges), "terminal_sets": ell},
        "keycast_rate": res.rate,
        "sr_upper_bound": bound,
        "strict_gap": bound < res.rate,
        "verified": res.ok,
        "field_k": res.code.field.k if res.code else None,
        "checks": res.report.counts() if res.report else None,
    }


def format_report(report: dict) -> str:
    lines = [f"setting:          {report['setting']}"]
    lines.append(f"eps:              {report['eps']}")
    lines.append(f"terminal sets:    {report['ell']}")
    inst = report["instance"]
    lines.append(f"instance:         {inst['nodes']} nodes, {inst['edges']} edges")
    lines.append(f"key-cast rate:    {report['keycast_rate']} (code verified: {report['verified']})")
    lines.append(f"SR upper bound:   {report['sr_upper_bound']}")
    gap = "yes" if report["strict_gap"] else "no (bound >= 1, vacuous)"
    lines.append(f"strict gap:       {gap}")
    return "\n".join(lines)


def jsonable(report: dict) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in report.items()}
