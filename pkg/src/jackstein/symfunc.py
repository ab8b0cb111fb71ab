"""Power-sum arithmetic, the alpha inner product and Jack theta tables.

A Jack polynomial ``J_lambda`` of degree ``n`` is stored by its power-sum
coefficients ``theta[lambda][mu]``.  Tables are built by Gram-Schmidt on the
monomial basis (written in power sums) along the canonical partition order,
then rescaled so the coefficient of ``p_(1^n)`` is one.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .partitions import (
    Partition,
    ScalarLike,
    c_prime_product,
    check_alpha,
    enumerate_partitions,
    format_partition,
    format_scalar,
    parse_partition,
    parse_scalar,
    partition_index,
    psi_prime,
    z_stat,
)
from .residual import Residual

Matrix = list[list[Fraction]]


def exact_inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    k = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
         for i, row in enumerate(a)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if m[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(k):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[k:] for row in m]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, colv)), Fraction(0)) for colv in bt]
            for row in a]


@dataclass(frozen=True)
class PowerSumExpr:
    """A homogeneous symmetric function in the power-sum basis.

    ``annihilated`` is set only on the result of ``p1_perp`` applied to a
    degree-0 expression.
    """

    degree: int
    coeffs: Mapping[Partition, Fraction] = field(default_factory=dict)
    annihilated: bool = False

    def __post_init__(self):
        clean = {}
        for mu, c in self.coeffs.items():
            mu = Partition(mu)
            if sum(mu) != self.degree:
                raise ValueError(f"{format_partition(mu)} has wrong degree for {self.degree}")
            c = Fraction(c)
            if c:
                clean[mu] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def p(cls, mu, coeff: ScalarLike = 1) -> "PowerSumExpr":
        mu = Partition(mu)
        return cls(sum(mu), {mu: Fraction(coeff)})

    def __getitem__(self, mu) -> Fraction:
        return self.coeffs.get(Partition(mu), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same_degree(self, other: "PowerSumExpr"):
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "PowerSumExpr") -> "PowerSumExpr":
        self._same_degree(other)
        out = dict(self.coeffs)
        for mu, c in other.coeffs.items():
            out[mu] = out.get(mu, 0) + c
        return PowerSumExpr(self.degree, out)

    def __neg__(self) -> "PowerSumExpr":
        return PowerSumExpr(self.degree, {mu: -c for mu, c in self.coeffs.items()})

    def __sub__(self, other: "PowerSumExpr") -> "PowerSumExpr":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PowerSumExpr):
            out: dict[Partition, Fraction] = {}
            for mu, a in self.coeffs.items():
                for nu, b in other.coeffs.items():
                    key = Partition(sorted(mu + nu, reverse=True))
                    out[key] = out.get(key, 0) + a * b
            return PowerSumExpr(self.degree + other.degree, out)
        s = Fraction(other)
        return PowerSumExpr(self.degree, {mu: s * c for mu, c in self.coeffs.items()})

    __rmul__ = __mul__


def _monomial_count(parts: tuple[int, ...], remaining: tuple[int, ...]) -> int:
    return _count(parts, tuple(sorted(remaining, reverse=True)))


@lru_cache(maxsize=None)
def _count(parts: tuple[int, ...], remaining: tuple[int, ...]) -> int:
    # ways to drop the parts into rows with the given capacities, filling them exactly;
    # only the multiset of capacities matters
    if not parts:
        return int(not any(remaining))
    first, rest = parts[0], parts[1:]
    total = 0
    for j, r in enumerate(remaining):
        if r >= first:
            nxt = remaining[:j] + (r - first,) + remaining[j + 1:]
            total += _count(rest, tuple(sorted(nxt, reverse=True)))
    return total


@lru_cache(maxsize=None)
def p_to_m_expansion(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row ``mu`` holds the monomial-basis coefficients of ``p_mu``."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    parts = enumerate_partitions(n)
    return tuple(
        tuple(Fraction(_monomial_count(tuple(mu), tuple(lam))) for lam in parts)
        for mu in parts
    )


@dataclass(frozen=True)
class MonomialToPowerSum:
    """Row ``lam`` holds the power-sum coefficients of ``m_lam``."""

    n: int
    partitions: tuple[Partition, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    def expr(self, lam) -> PowerSumExpr:
        i = partition_index(self.n)[Partition(lam)]
        return PowerSumExpr(self.n, dict(zip(self.partitions, self.matrix[i])))


@lru_cache(maxsize=None)
def m_to_p_expansion(n: int) -> MonomialToPowerSum:
    inv = exact_inverse(p_to_m_expansion(n))
    return MonomialToPowerSum(n, enumerate_partitions(n), tuple(tuple(r) for r in inv))


@lru_cache(maxsize=None)
def power_sum_weight(mu: Partition, alpha: Fraction) -> Fraction:
    """``<p_mu, p_mu>_alpha = z_mu * alpha**l(mu)``."""
    return z_stat(mu) * alpha ** len(mu)


def alpha_inner(f: PowerSumExpr, g: PowerSumExpr, alpha: ScalarLike) -> Fraction:
    a = check_alpha(alpha)
    f._same_degree(g)
    return sum(
        (c * g.coeffs[mu] * power_sum_weight(mu, a)
         for mu, c in f.coeffs.items() if mu in g.coeffs),
        Fraction(0),
    )


@dataclass(frozen=True)
class ThetaTable:
    """Power-sum coefficients of the Jack polynomials of one degree.

    ``values[i][j]`` is the coefficient of ``p_{partitions[j]}`` in
    ``J_{partitions[i]}``.
    """

    n: int
    alpha: Fraction
    partitions: tuple[Partition, ...]
    values: tuple[tuple[Fraction, ...], ...]

    def index(self, lam) -> int:
        return partition_index(self.n)[Partition(lam)]

    def __getitem__(self, key) -> Fraction:
        lam, mu = key
        return self.values[self.index(lam)][self.index(mu)]

    def column(self, mu) -> list[Fraction]:
        j = self.index(mu)
        return [row[j] for row in self.values]

    def jack(self, lam) -> PowerSumExpr:
        return PowerSumExpr(self.n, dict(zip(self.partitions, self.values[self.index(lam)])))

    def with_entry(self, lam, mu, value: ScalarLike) -> "ThetaTable":
        """A copy with one entry replaced; used to test that checks catch drift."""
        i, j = self.index(lam), self.index(mu)
        rows = [list(r) for r in self.values]
        rows[i][j] = Fraction(value)
        return ThetaTable(self.n, self.alpha, self.partitions, tuple(tuple(r) for r in rows))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda"] + [format_partition(mu) for mu in self.partitions])
        for lam, row in zip(self.partitions, self.values):
            w.writerow([format_partition(lam)] + [format_scalar(x) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, alpha: ScalarLike) -> "ThetaTable":
        rows = list(csv.reader(io.StringIO(text)))
        header = [parse_partition(h) for h in rows[0][1:]]
        n = sum(header[0])
        if tuple(header) != enumerate_partitions(n):
            raise ValueError("columns are not in canonical order")
        values = []
        for lam, row in zip(header, rows[1:]):
            if parse_partition(row[0]) != lam:
                raise ValueError("rows are not in canonical order")
            values.append(tuple(parse_scalar(x) for x in row[1:]))
        return cls(n, check_alpha(alpha), tuple(header), tuple(values))


@lru_cache(maxsize=None)
def _theta_table(n: int, alpha: Fraction) -> ThetaTable:
    parts = enumerate_partitions(n)
    weights = [power_sum_weight(mu, alpha) for mu in parts]
    m_in_p = m_to_p_expansion(n).matrix

    def inner(u, v):
        return sum((x * y * w for x, y, w in zip(u, v, weights) if x and y), Fraction(0))

    # smallest partition first so each m_lam is reduced against everything below it
    done: list[tuple[list[Fraction], Fraction]] = []
    rows: dict[int, list[Fraction]] = {}
    for i in reversed(range(len(parts))):
        v = list(m_in_p[i])
        for u, norm in done:
            coef = inner(v, u) / norm
            if coef:
                v = [x - coef * y for x, y in zip(v, u)]
        norm = inner(v, v)
        if norm == 0:
            raise ArithmeticError(f"zero norm at {format_partition(parts[i])}")
        done.append((v, norm))
        rows[i] = v

    last = len(parts) - 1  # index of (1^n)
    values = []
    for i in range(len(parts)):
        lead = rows[i][last]
        if lead == 0:
            raise ArithmeticError(f"p_(1^n) coefficient vanishes for {format_partition(parts[i])}")
        values.append(tuple(x / lead for x in rows[i]))
    return ThetaTable(n, alpha, parts, tuple(values))


def jack_theta_table(n: int, alpha: ScalarLike) -> ThetaTable:
    if n < 1:
        raise ValueError("degree must be at least 1")
    return _theta_table(n, check_alpha(alpha))


def p1_perp(f: PowerSumExpr, alpha: ScalarLike) -> PowerSumExpr:
    """Adjoint of multiplication by ``p_1``: ``alpha * d/dp_1``."""
    a = check_alpha(alpha)
    if f.degree == 0:
        return PowerSumExpr(0, {}, annihilated=True)
    out: dict[Partition, Fraction] = {}
    for mu, c in f.coeffs.items():
        ones = mu.count(1)
        if ones:
            nu = Partition(mu[:-1])
            out[nu] = out.get(nu, 0) + a * ones * c
    return PowerSumExpr(f.degree - 1, out)


def verify_p1perp_pieri(n: int, alpha: ScalarLike) -> Residual:
    """Check ``p1_perp J_lam = sum_tau c'_lam psi'_{lam/tau} / c'_tau J_tau``.

    The left side differentiates the degree-``n`` table; the right side is
    assembled from the degree ``n - 1`` table and the branching weights.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    a = check_alpha(alpha)
    upper = jack_theta_table(n, a)
    lower = jack_theta_table(n - 1, a)
    worst = Residual.zero()
    for lam in upper.partitions:
        lhs = p1_perp(upper.jack(lam), a)
        rhs = PowerSumExpr(n - 1)
        cp_lam = c_prime_product(lam, a)
        for row in lam.removable_rows():
            tau = lam.remove_box(row)
            weight = cp_lam * psi_prime(lam, tau, a) / c_prime_product(tau, a)
            rhs = rhs + lower.jack(tau) * weight
        diff = lhs - rhs
        worst = worst.worse(
            max((abs(c) for c in diff.coeffs.values()), default=Fraction(0)),
            format_partition(lam),
        )
    return worst
