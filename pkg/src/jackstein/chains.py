"""Jack measure and the exact transition matrices built on it.

``m_chain`` is the remove-a-box / add-a-box chain, ``l_chain`` the chain defined
through theta coefficients, ``k_chain`` the Metropolis chain on permutations
lumped to cycle types.  ``t_chain_toy`` is the unlumped Metropolis chain for
``n <= 5`` and exists to cross-check ``k_chain``.

All chains require ``alpha >= 1``; for ``alpha < 1`` conjugate the partitions
and use ``1/alpha`` instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Optional, Sequence

from .partitions import (
    Partition,
    ScalarLike,
    c_prime_product,
    c_product,
    check_alpha,
    dim_alpha,
    enumerate_partitions,
    format_partition,
    n_stat,
    n_stat_conjugate,
    partition_index,
    psi_prime,
    z_stat,
)
from .residual import Residual
from .symfunc import ThetaTable, jack_theta_table, power_sum_weight

KINDS = ("M", "L", "K")


class AlphaRangeError(ValueError):
    pass


def check_chain_alpha(alpha: ScalarLike) -> Fraction:
    a = check_alpha(alpha)
    if a < 1:
        raise AlphaRangeError(
            f"chains need alpha >= 1 (got {a}); Jack_alpha of lam equals "
            f"Jack_(1/alpha) of lam', so run with alpha={1 / a} on conjugate partitions"
        )
    return a


@dataclass(frozen=True)
class DistOverPartitions:
    n: int
    alpha: Fraction
    probs: tuple[Fraction, ...]

    @property
    def partitions(self) -> tuple[Partition, ...]:
        return enumerate_partitions(self.n)

    def __getitem__(self, lam) -> Fraction:
        return self.probs[partition_index(self.n)[Partition(lam)]]

    def items(self):
        return zip(self.partitions, self.probs)

    def total(self) -> Fraction:
        return sum(self.probs, Fraction(0))


@dataclass(frozen=True)
class TransitionMatrix:
    """Square exact matrix in canonical partition order, stored by sparse rows."""

    n: int
    alpha: Fraction
    kind: str
    rows: tuple[dict[int, Fraction], ...]

    @property
    def partitions(self) -> tuple[Partition, ...]:
        return enumerate_partitions(self.n)

    def __getitem__(self, key) -> Fraction:
        lam, rho = key
        idx = partition_index(self.n)
        return self.rows[idx[Partition(lam)]].get(idx[Partition(rho)], Fraction(0))

    def row(self, lam) -> dict[Partition, Fraction]:
        parts = self.partitions
        return {parts[j]: v for j, v in self.rows[partition_index(self.n)[Partition(lam)]].items()}

    def dense(self) -> list[list[Fraction]]:
        k = len(self.rows)
        return [[r.get(j, Fraction(0)) for j in range(k)] for r in self.rows]

    def row_sums(self) -> list[Fraction]:
        return [sum(r.values(), Fraction(0)) for r in self.rows]

    def left_apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """``vec^T @ self``: one step of the distribution."""
        out = [Fraction(0)] * len(self.rows)
        for i, v in enumerate(vec):
            if v:
                for j, t in self.rows[i].items():
                    out[j] += v * t
        return out

    def right_apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """``self @ vec``: conditional expectation of a function of the next state."""
        return [sum((t * vec[j] for j, t in r.items()), Fraction(0)) for r in self.rows]


def jack_measure(lam: Partition, alpha: ScalarLike) -> Fraction:
    a = check_alpha(alpha)
    n = sum(lam)
    return a**n * factorial(n) / (c_product(lam, a) * c_prime_product(lam, a))


@lru_cache(maxsize=None)
def _jack_distribution(n: int, alpha: Fraction) -> DistOverPartitions:
    return DistOverPartitions(
        n, alpha, tuple(jack_measure(lam, alpha) for lam in enumerate_partitions(n))
    )


def jack_distribution(n: int, alpha: ScalarLike) -> DistOverPartitions:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _jack_distribution(n, check_alpha(alpha))


def _from_dense(n, alpha, kind, dense) -> TransitionMatrix:
    return TransitionMatrix(
        n, alpha, kind, tuple({j: v for j, v in enumerate(r) if v} for r in dense)
    )


@lru_cache(maxsize=None)
def _m_chain(n: int, alpha: Fraction) -> TransitionMatrix:
    idx = partition_index(n)
    rows = []
    for lam in enumerate_partitions(n):
        scale = c_prime_product(lam, alpha) / (alpha * n)
        row: dict[int, Fraction] = {}
        for r_out in lam.removable_rows():
            tau = lam.remove_box(r_out)
            w_tau = psi_prime(lam, tau, alpha) * c_product(tau, alpha) / c_prime_product(tau, alpha)
            for r_in in tau.addable_rows():
                rho = tau.add_box(r_in)
                j = idx[rho]
                term = w_tau * psi_prime(rho, tau, alpha) / c_product(rho, alpha)
                row[j] = row.get(j, Fraction(0)) + scale * term
        rows.append(row)
    return TransitionMatrix(n, alpha, "M", tuple(rows))


def m_chain(n: int, alpha: ScalarLike) -> TransitionMatrix:
    """Remove a box, then add a box, weighted by Jack branching coefficients."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return _m_chain(n, check_chain_alpha(alpha))


def down_transition(big: Partition, alpha: ScalarLike) -> dict[Partition, Fraction]:
    """Probabilities of removing each removable box of ``big``."""
    a = check_alpha(alpha)
    d_big = dim_alpha(big, a)
    out = {}
    for row in big.removable_rows():
        small = big.remove_box(row)
        out[small] = dim_alpha(small, a) * psi_prime(big, small, a) / d_big
    return out


@lru_cache(maxsize=None)
def _up_transition(small: Partition, alpha: Fraction) -> tuple[tuple[Partition, Fraction], ...]:
    d_small = dim_alpha(small, alpha)
    p_small = jack_measure(small, alpha)
    out = []
    for row in small.addable_rows():
        big = small.add_box(row)
        p = psi_prime(big, small, alpha) * jack_measure(big, alpha) * d_small
        out.append((big, p / (p_small * dim_alpha(big, alpha))))
    return tuple(out)


def up_transition(small: Partition, alpha: ScalarLike) -> dict[Partition, Fraction]:
    """Probabilities of adding each addable box to ``small`` (coherent growth)."""
    return dict(_up_transition(Partition(small), check_alpha(alpha)))


def m_chain_down_up(n: int, alpha: ScalarLike) -> TransitionMatrix:
    """``m_chain`` rebuilt as a literal down step followed by an up step."""
    a = check_chain_alpha(alpha)
    idx = partition_index(n)
    rows = []
    for lam in enumerate_partitions(n):
        row: dict[int, Fraction] = {}
        for tau, p_down in down_transition(lam, a).items():
            for rho, p_up in up_transition(tau, a).items():
                j = idx[rho]
                row[j] = row.get(j, Fraction(0)) + p_down * p_up
        rows.append(row)
    return TransitionMatrix(n, a, "M", tuple(rows))


def l_chain(n: int, alpha: ScalarLike, theta: Optional[ThetaTable] = None) -> TransitionMatrix:
    """Chain defined by theta coefficients; its diagonal may in principle be negative."""
    if n < 2:
        raise ValueError("n must be at least 2")
    a = check_chain_alpha(alpha)
    if theta is None:
        theta = jack_theta_table(n, a)
    elif theta.n != n or theta.alpha != a:
        raise ValueError(f"theta table is for n={theta.n}, alpha={theta.alpha}")
    return _l_chain(theta)


def _l_chain(theta: ThetaTable) -> TransitionMatrix:
    n, a = theta.n, theta.alpha
    parts = theta.partitions
    hook = theta.values[theta.index(Partition([n - 1, 1]))]
    weights = [power_sum_weight(mu, a) ** 2 * h for mu, h in zip(parts, hook)]
    denom = a**n * factorial(n)
    norms = [c_product(rho, a) * c_prime_product(rho, a) * denom for rho in parts]
    dense = []
    for row_l in theta.values:
        left = [x * w for x, w in zip(row_l, weights)]
        dense.append([
            sum((x * y for x, y in zip(left, row_r) if x and y), Fraction(0)) / norm
            for row_r, norm in zip(theta.values, norms)
        ])
    return _from_dense(n, a, "L", dense)


def k_row(mu: Partition, alpha: Fraction) -> dict[Partition, Fraction]:
    """One row of the lumped Metropolis chain, by counting transpositions."""
    n = sum(mu)
    pairs = comb(n, 2)
    out: dict[Partition, Fraction] = {}

    def add(parts, weight):
        key = Partition(sorted(parts, reverse=True))
        out[key] = out.get(key, Fraction(0)) + weight

    cycles = list(mu)
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            rest = cycles[:i] + cycles[i + 1:j] + cycles[j + 1:]
            add(rest + [cycles[i] + cycles[j]], Fraction(cycles[i] * cycles[j], pairs))
    for i, c in enumerate(cycles):
        rest = cycles[:i] + cycles[i + 1:]
        for k in range(1, c // 2 + 1):
            ways = Fraction(c, 2) if 2 * k == c else Fraction(c)
            add(rest + [k, c - k], ways / (alpha * pairs))
    hold = (alpha - 1) * n_stat_conjugate(mu) / (alpha * pairs)
    if hold:
        add(cycles, hold)
    return out


@lru_cache(maxsize=None)
def _k_chain(n: int, alpha: Fraction) -> TransitionMatrix:
    idx = partition_index(n)
    rows = tuple(
        {idx[nu]: v for nu, v in k_row(mu, alpha).items() if v}
        for mu in enumerate_partitions(n)
    )
    return TransitionMatrix(n, alpha, "K", rows)


def k_chain(n: int, alpha: ScalarLike) -> TransitionMatrix:
    if n < 2:
        raise ValueError("n must be at least 2")
    return _k_chain(n, check_chain_alpha(alpha))


def k_stationary(n: int, alpha: ScalarLike) -> DistOverPartitions:
    """Cycle-type law of a permutation drawn with weight ``alpha**(-cycles)``."""
    a = check_alpha(alpha)
    w = [Fraction(factorial(n), z_stat(mu)) / a ** len(mu) for mu in enumerate_partitions(n)]
    total = sum(w)
    return DistOverPartitions(n, a, tuple(x / total for x in w))


def cycle_type(perm: Sequence[int]) -> Partition:
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if not seen[start]:
            k, x = 0, start
            while not seen[x]:
                seen[x] = True
                x = perm[x]
                k += 1
            lengths.append(k)
    return Partition(sorted(lengths, reverse=True))


def t_chain_toy(n: int, alpha: ScalarLike) -> tuple[list[tuple[int, ...]], list[list[Fraction]]]:
    """Metropolis chain on all ``n!`` permutations (``n <= 5``).

    Returns the permutations (as images of ``0..n-1``, lexicographic) and the
    dense transition matrix.  Moves are right multiplication by a transposition.
    """
    if n > 5:
        raise ValueError("t_chain_toy is limited to n <= 5 (120 states)")
    if n < 2:
        raise ValueError("n must be at least 2")
    a = check_chain_alpha(alpha)
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    pairs = comb(n, 2)
    mat = [[Fraction(0)] * len(perms) for _ in perms]
    for i, x in enumerate(perms):
        cx = len(cycle_type(x))
        for s in range(n):
            for t in range(s + 1, n):
                y = list(x)
                y[s], y[t] = y[t], y[s]  # x composed with (s t)
                cy = len(cycle_type(y))
                j = index[tuple(y)]
                mat[i][j] += Fraction(1, pairs) if cy == cx - 1 else 1 / (a * pairs)
        mat[i][i] += (a - 1) * n_stat(cycle_type(x).conjugate()) / (a * pairs)
    return perms, mat


def lump_by_cycle_type(perms, mat) -> list[list[Fraction]]:
    """Lump a conjugation-invariant permutation chain to cycle types.

    Every permutation of a class must give the same lumped row, otherwise
    the chain is not lumpable and ``ValueError`` is raised.
    """
    n = len(perms[0])
    idx = partition_index(n)
    types = [idx[cycle_type(p)] for p in perms]
    k = len(idx)
    lumped: list[Optional[list[Fraction]]] = [None] * k
    for i, row in enumerate(mat):
        acc = [Fraction(0)] * k
        for j, v in enumerate(row):
            acc[types[j]] += v
        if lumped[types[i]] is None:
            lumped[types[i]] = acc
        elif lumped[types[i]] != acc:
            raise ValueError(f"not lumpable at {format_partition(enumerate_partitions(n)[types[i]])}")
    return lumped  # type: ignore[return-value]


def point_mass(n: int, lam: Partition) -> list[Fraction]:
    vec = [Fraction(0)] * len(enumerate_partitions(n))
    vec[partition_index(n)[Partition(lam)]] = Fraction(1)
    return vec


def chain_step_distribution(chain: TransitionMatrix, start: Partition, r: int) -> DistOverPartitions:
    if sum(start) != chain.n:
        raise ValueError(f"start {format_partition(start)} does not have size {chain.n}")
    if r < 0:
        raise ValueError("r must be nonnegative")
    vec = point_mass(chain.n, start)
    for _ in range(r):
        vec = chain.left_apply(vec)
    return DistOverPartitions(chain.n, chain.alpha, tuple(vec))


def hanlon_spectral(n: int, alpha: ScalarLike, r: int) -> list[Fraction]:
    """Theta-side prediction of the ``r``-step law of ``k_chain`` from ``(1^n)``."""
    a = check_chain_alpha(alpha)
    theta = jack_theta_table(n, a)
    scale = a * comb(n, 2)
    coeffs = []
    for rho in theta.partitions:
        eig = (a * n_stat_conjugate(rho) - n_stat(rho)) / scale
        coeffs.append(eig**r / (c_product(rho, a) * c_prime_product(rho, a)))
    front = a**n * factorial(n)
    return [
        front * sum((c * theta.values[i][j] for i, c in enumerate(coeffs)), Fraction(0))
        for j in range(len(theta.partitions))
    ]


def hanlon_identity_check(n: int, alpha: ScalarLike, r: int) -> Residual:
    a = check_chain_alpha(alpha)
    walk = chain_step_distribution(k_chain(n, a), Partition([1] * n), r)
    worst = Residual.zero()
    for mu, p, q in zip(walk.partitions, walk.probs, hanlon_spectral(n, a, r)):
        worst = worst.worse(p - q, format_partition(mu))
    return worst


def get_chain(kind: str, n: int, alpha: ScalarLike) -> TransitionMatrix:
    kind = kind.upper()
    if kind == "M":
        return m_chain(n, alpha)
    if kind == "L":
        return l_chain(n, alpha)
    if kind == "K":
        return k_chain(n, alpha)
    raise ValueError(f"unknown chain kind {kind!r}; expected one of {', '.join(KINDS)}")
