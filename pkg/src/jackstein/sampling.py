"""Exact sampling from Jack measure by growing a partition one box at a time.

Randomness comes from :class:`random.Random` (MT19937) and is consumed only
through ``getrandbits``, whose output stream for a given seed is fixed across
Python versions.  Every draw is an exact integer comparison against the
rational step probabilities, so sampled laws carry no floating-point bias.
"""
from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

from .chains import _up_transition, check_chain_alpha, down_transition
from .partitions import Partition, ScalarLike, check_alpha

MASK64 = (1 << 64) - 1


def make_rng(seed: int) -> random.Random:
    if not 0 <= seed <= MASK64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return random.Random(seed)


def randbelow(rng: random.Random, bound: int) -> int:
    """Uniform integer in ``[0, bound)`` by rejection on ``getrandbits``."""
    k = bound.bit_length()
    while True:
        r = rng.getrandbits(k)
        if r < bound:
            return r


@dataclass(frozen=True)
class _Table:
    outcomes: tuple
    cumulative: tuple[int, ...]
    total: int


def _table(pairs: Iterable[tuple[object, Fraction]]) -> _Table:
    pairs = [(o, p) for o, p in pairs if p]
    den = lcm(*(p.denominator for _, p in pairs))
    acc, cum = 0, []
    for _, p in pairs:
        acc += p.numerator * (den // p.denominator)
        cum.append(acc)
    if acc != den:
        raise ArithmeticError("step probabilities do not sum to one")
    return _Table(tuple(o for o, _ in pairs), tuple(cum), den)


def draw(rng: random.Random, table: _Table):
    u = randbelow(rng, table.total)
    return table.outcomes[bisect_right(table.cumulative, u)]


@lru_cache(maxsize=None)
def _up_table(small: Partition, alpha: Fraction) -> _Table:
    return _table(_up_transition(small, alpha))


@lru_cache(maxsize=None)
def _down_table(big: Partition, alpha: Fraction) -> _Table:
    return _table(down_transition(big, alpha).items())


class GrowthPath(tuple):
    """Chain of shapes from the empty partition, one box added per step."""

    __slots__ = ()

    def __new__(cls, shapes: Sequence[Partition]):
        shapes = tuple(Partition(s) for s in shapes)
        if not shapes or shapes[0] != Partition():
            raise ValueError("growth path must start at the empty partition")
        for a, b in zip(shapes, shapes[1:]):
            if sum(b) != sum(a) + 1 or len(a) > len(b) or any(x > y for x, y in zip(a, b)):
                raise ValueError(f"{b} is not {a} plus one box")
        return super().__new__(cls, shapes)

    @property
    def shape(self) -> Partition:
        return self[-1]


def grow_sample(n: int, alpha: ScalarLike, rng: random.Random) -> GrowthPath:
    """Grow a partition of ``n`` whose law is exactly Jack_alpha measure."""
    a = check_alpha(alpha)
    path = [Partition()]
    for _ in range(n):
        path.append(draw(rng, _up_table(path[-1], a)))
    return GrowthPath(path)


def sample_shapes(n: int, alpha: ScalarLike, rng: random.Random, count: int) -> list[Partition]:
    a = check_alpha(alpha)
    out = []
    for _ in range(count):
        lam = Partition()
        for _ in range(n):
            lam = draw(rng, _up_table(lam, a))
        out.append(lam)
    return out


def m_step(lam: Partition, alpha: ScalarLike, rng: random.Random) -> Partition:
    """One step of the remove-then-add chain from ``lam``."""
    a = check_chain_alpha(alpha)
    tau = draw(rng, _down_table(Partition(lam), a))
    return draw(rng, _up_table(tau, a))


def exchangeable_pair_sample(n: int, alpha: ScalarLike, rng: random.Random) -> tuple[Partition, Partition]:
    if n < 2:
        raise ValueError("n must be at least 2")
    a = check_chain_alpha(alpha)
    lam = grow_sample(n, a, rng).shape
    return lam, m_step(lam, a, rng)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    critical: float
    level: float
    bins: int

    @property
    def passed(self) -> bool:
        return self.statistic <= self.critical


def chi_square_test(counts: dict, probs: dict, level: float = 0.999, min_expected: float = 5.0) -> ChiSquareResult:
    """Pearson goodness of fit of ``counts`` against exact ``probs``.

    Outcomes with expected count below ``min_expected`` are pooled into one
    bin (smallest first) so the chi-square approximation is valid.
    """
    from scipy.stats import chi2

    total = sum(counts.values())
    stray = set(counts) - set(probs)
    if stray:
        raise ValueError(f"sampled outcomes outside the support: {sorted(stray)[:3]}")
    cells = sorted(((total * float(p), counts.get(k, 0)) for k, p in probs.items() if p), reverse=True)
    bins: list[list[float]] = []
    pool = [0.0, 0]
    for exp, obs in cells:
        if exp >= min_expected:
            bins.append([exp, obs])
        else:
            pool[0] += exp
            pool[1] += obs
    if pool[0] > 0:
        if pool[0] >= min_expected or not bins:
            bins.append(pool)
        else:
            bins[-1][0] += pool[0]
            bins[-1][1] += pool[1]
    stat = sum((obs - exp) ** 2 / exp for exp, obs in bins)
    dof = max(len(bins) - 1, 1)
    return ChiSquareResult(
        statistic=stat,
        dof=dof,
        p_value=float(chi2.sf(stat, dof)),
        critical=float(chi2.ppf(level, dof)),
        level=level,
        bins=len(bins),
    )
