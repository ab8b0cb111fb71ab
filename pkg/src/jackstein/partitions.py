"""Integer partitions, cell statistics and the alpha-deformed hook products.

Every exact quantity in the package is a :class:`fractions.Fraction`; alpha is
always a fixed positive rational.  Cell coordinates are 1-based ``(row, col)``.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, Union

ScalarLike = Union[int, str, Fraction]


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Ordinary tuple comparison is reverse-lexicographic once lists are sorted
    descending, which is the canonical order used for every matrix here.
    """

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 1:
            raise ValueError(f"parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicity(self, i: int) -> int:
        return self.count(i)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def removable_rows(self) -> list[int]:
        """Rows (1-based) whose last box can be removed leaving a partition."""
        k = len(self)
        return [i + 1 for i in range(k) if i == k - 1 or self[i] > self[i + 1]]

    def addable_rows(self) -> list[int]:
        """Rows (1-based, possibly ``length + 1``) where a box can be added."""
        rows = [1] + [i + 1 for i in range(1, len(self)) if self[i] < self[i - 1]]
        if self:
            rows.append(len(self) + 1)
        return rows

    def remove_box(self, row: int) -> "Partition":
        parts = list(self)
        parts[row - 1] -= 1
        if parts[row - 1] == 0:
            parts.pop()
        return Partition(parts)

    def add_box(self, row: int) -> "Partition":
        parts = list(self)
        if row == len(parts) + 1:
            parts.append(1)
        else:
            parts[row - 1] += 1
        return Partition(parts)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    def __str__(self) -> str:
        return format_partition(self)


class Dominance(enum.Enum):
    LEQ = "less-or-equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


_PART_TOKEN = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_partition(text: str) -> Partition:
    """Parse ``"[3,2]"`` or exponent shorthand ``"[2,1^3]"``; ``"[]"`` is empty."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    elif body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts: list[int] = []
    if body.strip():
        for token in body.split(","):
            m = _PART_TOKEN.match(token)
            if not m:
                raise ValueError(f"bad partition text {text!r}")
            part, exp = int(m.group(1)), int(m.group(2) or 1)
            if part == 0:
                continue
            parts.extend([part] * exp)
    parts.sort(reverse=True)
    return Partition(parts)


def format_partition(lam: Partition) -> str:
    return "[" + ",".join(str(p) for p in lam) + "]"


def as_scalar(x: ScalarLike) -> Fraction:
    if isinstance(x, str):
        return parse_scalar(x)
    return Fraction(x)


def parse_scalar(text: str) -> Fraction:
    """Parse ``"num/den"`` or an integer; decimals are rejected to stay exact."""
    t = text.strip()
    if not re.fullmatch(r"[+-]?\d+(\s*/\s*\d+)?", t):
        raise ValueError(f"expected 'p/q' or integer, got {text!r}")
    try:
        return Fraction(t.replace(" ", ""))
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def check_alpha(alpha: ScalarLike) -> Fraction:
    a = as_scalar(alpha)
    if a <= 0:
        raise ValueError(f"alpha must be positive, got {a}")
    return a


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return Partition()
    return Partition(sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1))


def arm_leg(lam: Partition, row: int, col: int) -> tuple[int, int]:
    """Return ``(arm, leg)`` of the cell at 1-based ``(row, col)``."""
    if not (1 <= row <= len(lam) and 1 <= col <= lam[row - 1]):
        raise ValueError(f"cell ({row}, {col}) is not in {format_partition(lam)}")
    leg = sum(1 for p in lam[row:] if p >= col)
    return lam[row - 1] - col, leg


def n_stat(lam: Partition) -> int:
    return sum(i * p for i, p in enumerate(lam))


def n_stat_conjugate(lam: Partition) -> int:
    """``n(lam')`` computed without conjugating, as a sum of row binomials."""
    return sum(comb(p, 2) for p in lam)


def _cell_factors(lam: Partition):
    lam_c = conjugate(lam)
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            yield row - j, lam_c[j - 1] - i


@lru_cache(maxsize=None)
def _c_products(lam: Partition, alpha: Fraction) -> tuple[Fraction, Fraction]:
    # integer products of p*a + q*(...) with alpha = p/q, one division at the end
    p, q = alpha.numerator, alpha.denominator
    c = cp = 1
    for a, l in _cell_factors(lam):
        c *= p * a + q * (l + 1)
        cp *= p * (a + 1) + q * l
    den = q ** sum(lam)
    return Fraction(c, den), Fraction(cp, den)


def c_product(lam: Partition, alpha: ScalarLike) -> Fraction:
    """Product over cells of ``alpha*arm + leg + 1``."""
    return _c_products(Partition(lam), check_alpha(alpha))[0]


def c_prime_product(lam: Partition, alpha: ScalarLike) -> Fraction:
    """Product over cells of ``alpha*arm + leg + alpha``."""
    return _c_products(Partition(lam), check_alpha(alpha))[1]


def z_stat(lam: Partition) -> int:
    z = 1
    for i in set(lam):
        m = lam.count(i)
        z *= i**m * factorial(m)
    return z


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in reverse-lexicographic order, ``(n)`` first."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return tuple(Partition(p) for p in _partitions(n, n))


@lru_cache(maxsize=None)
def partition_index(n: int) -> dict[Partition, int]:
    return {lam: i for i, lam in enumerate(enumerate_partitions(n))}


def dominance_leq(mu: Partition, nu: Partition) -> Dominance:
    """Compare ``mu`` against ``nu`` in dominance order.

    ``LEQ`` means every partial sum of ``mu`` is at most that of ``nu``;
    ``GREATER`` means ``nu`` is strictly dominated by ``mu``.
    """
    if sum(mu) != sum(nu):
        raise ValueError("dominance needs partitions of the same size")
    k = max(len(mu), len(nu))
    sm = sn = 0
    le = ge = True
    for i in range(k):
        sm += mu[i] if i < len(mu) else 0
        sn += nu[i] if i < len(nu) else 0
        if sm > sn:
            le = False
        if sm < sn:
            ge = False
    if le:
        return Dominance.LEQ
    if ge:
        return Dominance.GREATER
    return Dominance.INCOMPARABLE


def skew_box(lam: Partition, tau: Partition) -> tuple[int, int]:
    """The single box of ``lam / tau`` as 1-based ``(row, col)``."""
    if sum(lam) - sum(tau) != 1 or len(tau) > len(lam):
        raise ValueError(f"{format_partition(tau)} is not lam minus one box")
    diff = [i for i in range(len(lam)) if lam[i] != (tau[i] if i < len(tau) else 0)]
    if len(diff) != 1 or lam[diff[0]] - (tau[diff[0]] if diff[0] < len(tau) else 0) != 1:
        raise ValueError(
            f"{format_partition(lam)}/{format_partition(tau)} is not a single box"
        )
    row = diff[0] + 1
    return row, lam[row - 1]


@lru_cache(maxsize=None)
def _psi_prime(lam: Partition, tau: Partition, alpha: Fraction) -> Fraction:
    row, col = skew_box(lam, tau)
    p, q = alpha.numerator, alpha.denominator
    num = den = 1
    # column of the box minus its row: the cells strictly above the box
    for k in range(1, row):
        a_l, l_l = arm_leg(lam, k, col)
        a_t, l_t = arm_leg(tau, k, col)
        num *= (p * a_l + q * (l_l + 1)) * (p * (a_t + 1) + q * l_t)
        den *= (p * (a_l + 1) + q * l_l) * (p * a_t + q * (l_t + 1))
    return Fraction(num, den)


def psi_prime(lam: Partition, tau: Partition, alpha: ScalarLike) -> Fraction:
    """Branching weight of the single-box skew shape ``lam / tau``."""
    return _psi_prime(Partition(lam), Partition(tau), check_alpha(alpha))


def dim_alpha(lam: Partition, alpha: ScalarLike) -> Fraction:
    a = check_alpha(alpha)
    n = sum(lam)
    return factorial(n) * a**n / c_prime_product(lam, a)
