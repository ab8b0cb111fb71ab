"""The statistic W, its exchangeable pair, and normal-approximation diagnostics.

``raw(lam) = alpha * n(lam') - n(lam)`` is kept exact everywhere; the
normalized statistic is ``raw / sqrt(alpha * C(n, 2))`` and the square root is
only taken when a float is reported.  Identities that involve the
normalization are compared through squares or through the ratio
``raw / (alpha * C(n, 2))``, which is rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional

from .chains import (
    DistOverPartitions,
    chain_step_distribution,
    check_chain_alpha,
    jack_distribution,
    k_chain,
    l_chain,
    m_chain,
)
from .partitions import (
    Partition,
    ScalarLike,
    check_alpha,
    enumerate_partitions,
    format_partition,
    n_stat,
    n_stat_conjugate,
    z_stat,
)
from .residual import Residual
from .symfunc import jack_theta_table

SQRT2 = math.sqrt(2.0)


def w_scale(n: int, alpha: Fraction) -> Fraction:
    """Variance normalizer ``alpha * C(n, 2)``."""
    return alpha * comb(n, 2)


def raw_w(lam: Partition, alpha: Fraction) -> Fraction:
    return alpha * n_stat_conjugate(lam) - n_stat(lam)


@dataclass(frozen=True)
class WValue:
    raw: Fraction
    scale: Fraction

    @property
    def normalized(self) -> float:
        return float(self.raw) / math.sqrt(self.scale)

    @property
    def signed_square(self) -> Fraction:
        """``sign(W) * W**2``, exact."""
        return self.raw * abs(self.raw) / self.scale


def w_statistic(lam: Partition, alpha: ScalarLike) -> WValue:
    lam = Partition(lam)
    a = check_alpha(alpha)
    n = sum(lam)
    if n < 2:
        raise ValueError("W needs n >= 2")
    return WValue(raw_w(lam, a), w_scale(n, a))


def _raw_vector(n: int, a: Fraction) -> list[Fraction]:
    return [raw_w(lam, a) for lam in enumerate_partitions(n)]


def w_law(n: int, alpha: ScalarLike) -> list[tuple[Fraction, Fraction]]:
    """Exact law of ``raw`` under Jack measure as sorted ``(value, prob)`` atoms."""
    a = check_alpha(alpha)
    law: dict[Fraction, Fraction] = {}
    for w, p in zip(_raw_vector(n, a), jack_distribution(n, a).probs):
        law[w] = law.get(w, Fraction(0)) + p
    return sorted(law.items())


def signed_square_law(n: int, alpha: ScalarLike) -> dict[Fraction, Fraction]:
    """Law of ``sign(W) W**2``; determines the law of the normalized W exactly."""
    a = check_alpha(alpha)
    s = w_scale(n, a)
    return {w * abs(w) / s: p for w, p in w_law(n, a)}


def conditional_mean_eigencheck(n: int, alpha: ScalarLike) -> Residual:
    """Residual of ``E[raw(lam*) | lam] = (1 - 2/n) raw(lam)`` over all ``lam``."""
    a = check_chain_alpha(alpha)
    raw = _raw_vector(n, a)
    expected = m_chain(n, a).right_apply(raw)
    factor = 1 - Fraction(2, n)
    worst = Residual.zero()
    for lam, e, w in zip(enumerate_partitions(n), expected, raw):
        worst = worst.worse(e - factor * w, format_partition(lam))
    return worst


@dataclass(frozen=True)
class EigenReport:
    nu: Partition
    l_eigenvalue: Fraction
    m_eigenvalue: Fraction
    l_residual: Residual
    m_residual: Residual

    @property
    def exact(self) -> bool:
        return self.l_residual.exact and self.m_residual.exact


def general_eigencheck(n: int, nu: Partition, alpha: ScalarLike) -> EigenReport:
    """Check that ``lam -> theta^lam_nu`` is an eigenvector of both chains."""
    nu = Partition(nu)
    if sum(nu) != n:
        raise ValueError(f"{format_partition(nu)} is not a partition of {n}")
    a = check_chain_alpha(alpha)
    theta = jack_theta_table(n, a)
    vec = theta.column(nu)
    hook = theta[Partition([n - 1, 1]), nu]
    eig_l = z_stat(nu) * hook / (a ** (n - len(nu)) * math.factorial(n))
    ratio = a * (n - 1) / (a * (n - 1) + 1)
    eig_m = 1 + ratio * (eig_l - 1)
    reports = []
    for chain, eig in ((l_chain(n, a, theta), eig_l), (m_chain(n, a), eig_m)):
        worst = Residual.zero()
        for lam, got, v in zip(theta.partitions, chain.right_apply(vec), vec):
            worst = worst.worse(got - eig * v, format_partition(lam))
        reports.append(worst)
    return EigenReport(nu, eig_l, eig_m, reports[0], reports[1])


@dataclass(frozen=True)
class MomentReport:
    """``r``-th moment of ``raw / (alpha C(n,2))`` computed two ways.

    ``via_chain`` is the ``r``-step return probability of the lumped
    Metropolis chain to ``(1^n)``; ``direct`` sums over Jack measure.  The
    moment of the normalized W is ``direct * (alpha C(n,2))**(r/2)``.
    """

    n: int
    alpha: Fraction
    r: int
    via_chain: Fraction
    direct: Fraction

    @property
    def scale(self) -> Fraction:
        return w_scale(self.n, self.alpha)

    @property
    def w_moment_squared(self) -> Fraction:
        return self.direct**2 * self.scale**self.r

    @property
    def w_moment(self) -> float:
        return float(self.direct) * math.sqrt(self.scale) ** self.r


def moments(n: int, alpha: ScalarLike, r: int) -> MomentReport:
    if n < 2 or r < 0:
        raise ValueError("need n >= 2 and r >= 0")
    a = check_chain_alpha(alpha)
    ones = Partition([1] * n)
    via_chain = chain_step_distribution(k_chain(n, a), ones, r)[ones]
    s = w_scale(n, a)
    pi = jack_distribution(n, a)
    direct = sum((p * (w / s) ** r for w, p in zip(_raw_vector(n, a), pi.probs)), Fraction(0))
    return MomentReport(n, a, r, via_chain, direct)


def conditional_second_moment(lam: Partition, alpha: ScalarLike) -> Fraction:
    """Closed form for ``E[W'^2 | lam]`` under the theta-defined chain."""
    lam = Partition(lam)
    n = sum(lam)
    if n < 4:
        raise ValueError("closed form needs n >= 4; use conditional_second_moment_direct")
    a = check_chain_alpha(alpha)
    theta = jack_theta_table(n, a)
    den = a**2 * n**2 * (n - 1) ** 2
    t2 = theta[lam, Partition([2] + [1] * (n - 2))]
    t3 = theta[lam, Partition([3] + [1] * (n - 3))]
    t22 = theta[lam, Partition([2, 2] + [1] * (n - 4))]
    return (
        1
        + t2 * 4 * (a - 1) * (a * comb(n - 1, 2) - 1) / den
        + t3 * 6 * (a * (n - 1) * (n - 3) - 3) / den
        + t22 * 4 * (a * (n - 1) * (n - 4) - 4) / den
    )


def conditional_second_moment_direct(lam: Partition, alpha: ScalarLike) -> Fraction:
    """``sum_rho L(lam, rho) W(rho)**2`` evaluated term by term."""
    lam = Partition(lam)
    n = sum(lam)
    a = check_chain_alpha(alpha)
    s = w_scale(n, a)
    row = l_chain(n, a).row(lam)
    return sum((p * raw_w(rho, a) ** 2 / s for rho, p in row.items()), Fraction(0))


@lru_cache(maxsize=None)
def _conditional_sq_jump(n: int, a: Fraction) -> tuple[Fraction, ...]:
    """``E[(W* - W)**2 | lam]`` for each ``lam``, in normalized units."""
    raw = _raw_vector(n, a)
    s = w_scale(n, a)
    out = []
    for i, row in enumerate(m_chain(n, a).rows):
        out.append(sum((p * (raw[j] - raw[i]) ** 2 for j, p in row.items()), Fraction(0)) / s)
    return tuple(out)


def term1_formula(n: int, alpha: ScalarLike) -> Fraction:
    a = check_alpha(alpha)
    return (3 * a * n + 2 * a**2 - 10 * a + 2) / (4 * a * n * (n - 1))


def term1_lambda(n: int, alpha: ScalarLike) -> Fraction:
    """``E(-1 + (n/4) E[(W*-W)^2 | lam])**2`` computed directly."""
    a = check_chain_alpha(alpha)
    pi = jack_distribution(n, a).probs
    q = Fraction(n, 4)
    return sum((p * (q * v - 1) ** 2 for p, v in zip(pi, _conditional_sq_jump(n, a))), Fraction(0))


def term1_w(n: int, alpha: ScalarLike) -> Fraction:
    """Same as :func:`term1_lambda` but conditioning on the value of W only."""
    a = check_chain_alpha(alpha)
    pi = jack_distribution(n, a).probs
    mass: dict[Fraction, Fraction] = {}
    moment: dict[Fraction, Fraction] = {}
    for w, p, v in zip(_raw_vector(n, a), pi, _conditional_sq_jump(n, a)):
        mass[w] = mass.get(w, Fraction(0)) + p
        moment[w] = moment.get(w, Fraction(0)) + p * v
    q = Fraction(n, 4)
    return sum((m * (q * moment[w] / m - 1) ** 2 for w, m in mass.items()), Fraction(0))


def stein_error_term1(n: int, alpha: ScalarLike) -> tuple[Fraction, Fraction]:
    """``(computed, closed form)`` for the first Stein error term."""
    if n < 5:
        raise ValueError("the closed form is checked for n >= 5")
    return term1_lambda(n, alpha), term1_formula(n, alpha)


def stein_error_term3(n: int, alpha: ScalarLike) -> Fraction:
    """Exact ``E|raw* - raw|**3``; divide by ``(alpha C(n,2))**1.5`` for W units."""
    if n < 2:
        raise ValueError("n must be at least 2")
    a = check_chain_alpha(alpha)
    raw = _raw_vector(n, a)
    pi = jack_distribution(n, a).probs
    total = Fraction(0)
    for i, row in enumerate(m_chain(n, a).rows):
        total += pi[i] * sum((p * abs(raw[j] - raw[i]) ** 3 for j, p in row.items()), Fraction(0))
    return total


def third_abs_moment(n: int, alpha: ScalarLike) -> float:
    a = check_chain_alpha(alpha)
    return float(stein_error_term3(n, a)) / float(w_scale(n, a)) ** 1.5


def max_jump_violation(n: int, alpha: ScalarLike) -> Optional[tuple[Partition, Partition]]:
    """First realized move breaking ``|raw*-raw| <= alpha(lam_1+1) + lam'_1 + 1``."""
    a = check_chain_alpha(alpha)
    for lam in enumerate_partitions(n):
        limit = a * (lam[0] + 1) + len(lam) + 1
        w = raw_w(lam, a)
        for rho in m_chain(n, a).row(lam):
            if abs(raw_w(rho, a) - w) > limit:
                return lam, rho
    return None


@dataclass(frozen=True)
class TailReport:
    n: int
    alpha: Fraction
    row_threshold: float
    row_tail: Fraction
    row_bound: float
    col_threshold: float
    col_tail: Fraction
    col_bound: float

    @property
    def holds(self) -> bool:
        return self.row_tail <= self.row_bound and self.col_tail <= self.col_bound


def tail_probability(dist: DistOverPartitions, threshold: float, columns: bool = False) -> Fraction:
    """``P(lam_1 >= threshold)``, or ``P(lam'_1 >= threshold)`` with ``columns``."""
    total = Fraction(0)
    for lam, p in dist.items():
        size = len(lam) if columns else (lam[0] if lam else 0)
        if size >= threshold:
            total += p
    return total


def tail_bound_check(n: int, alpha: ScalarLike) -> TailReport:
    """Exact tails of the first row and column against the exponential bounds."""
    a = check_alpha(alpha)
    af = float(a)
    dist = jack_distribution(n, a)
    t_row = 2 * math.e * math.sqrt(n / af)
    t_col = 2 * math.e * math.sqrt(n * af)
    return TailReport(
        n,
        a,
        t_row,
        tail_probability(dist, t_row),
        af * n**2 / 4.0**t_row,
        t_col,
        tail_probability(dist, t_col, columns=True),
        n**2 / (af * 4.0**t_col),
    )


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the C library ``erfc`` (absolute error < 1e-15)."""
    if not math.isfinite(x):
        raise ValueError(f"normal_cdf needs a finite argument, got {x}")
    return 0.5 * math.erfc(-x / SQRT2)


def kolmogorov_distance(n: int, alpha: ScalarLike) -> float:
    """Exact-law sup distance between the CDF of normalized W and the normal CDF."""
    if n < 2:
        raise ValueError("n must be at least 2")
    a = check_alpha(alpha)
    root = math.sqrt(w_scale(n, a))
    below = Fraction(0)
    worst = 0.0
    for w, p in w_law(n, a):
        phi = normal_cdf(float(w) / root)
        upto = below + p
        worst = max(worst, abs(float(below) - phi), abs(float(upto) - phi))
        below = upto
    return worst


@dataclass(frozen=True)
class SteinReport:
    """Ingredients and value of the exchangeable-pair bound for one ``(n, alpha)``.

    ``term1`` conditions on the partition, ``term1_w`` on the value of W (the
    form the bound actually needs); ``term3_raw`` is ``E|raw*-raw|^3``.
    ``bound`` uses ``term1_w``; ``bound_lambda`` the cruder ``term1``.
    """

    n: int
    alpha: Fraction
    tau: Fraction
    term1: Fraction
    term1_formula: Optional[Fraction]
    term1_w: Fraction
    term3_raw: Fraction
    term3: float
    bound: float
    bound_lambda: float
    kolmogorov: float


def stein_upper_bound(n: int, alpha: ScalarLike) -> SteinReport:
    if n < 2:
        raise ValueError("n must be at least 2")
    a = check_chain_alpha(alpha)
    tau = Fraction(2, n)
    t1 = term1_lambda(n, a)
    t1w = term1_w(n, a)
    t3_raw = stein_error_term3(n, a)
    t3 = float(t3_raw) / float(w_scale(n, a)) ** 1.5
    tail = (2 * math.pi) ** -0.25 * math.sqrt(t3 / float(tau))
    return SteinReport(
        n=n,
        alpha=a,
        tau=tau,
        term1=t1,
        term1_formula=term1_formula(n, a),
        term1_w=t1w,
        term3_raw=t3_raw,
        term3=t3,
        bound=2 * math.sqrt(t1w) + tail,
        bound_lambda=2 * math.sqrt(t1) + tail,
        kolmogorov=kolmogorov_distance(n, a),
    )
