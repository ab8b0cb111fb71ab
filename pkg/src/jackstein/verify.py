"""One-shot run of every exact identity the package relies on.

Each check returns ``None`` on success or a witness describing the first
failure.  Theta tables come from ``theta_factory`` so tests can inject a
corrupted table and confirm the relevant checks notice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Any, Callable, Iterable, Optional

from . import fixtures
from .chains import (
    chain_step_distribution,
    jack_distribution,
    k_chain,
    k_stationary,
    l_chain,
    lump_by_cycle_type,
    m_chain,
    m_chain_down_up,
    hanlon_identity_check,
    t_chain_toy,
)
from .partitions import (
    Partition,
    c_prime_product,
    c_product,
    conjugate,
    enumerate_partitions,
    format_partition,
    format_scalar,
    n_stat,
    z_stat,
)
from .stein import (
    conditional_mean_eigencheck,
    conditional_second_moment,
    conditional_second_moment_direct,
    general_eigencheck,
    moments,
    signed_square_law,
    tail_bound_check,
    term1_formula,
    term1_lambda,
    w_scale,
)
from .symfunc import ThetaTable, jack_theta_table, verify_p1perp_pieri

DEFAULT_ALPHAS = (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))
DEFAULT_CAP = 8


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: str = ""

    def __post_init__(self):
        if self.passed == bool(self.witness):
            raise ValueError("a witness is required exactly when a check fails")


@dataclass
class VerifySuiteResult:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]


ThetaFactory = Callable[[int, Fraction], ThetaTable]


# ---- theta engine ---------------------------------------------------------

def check_theta_row_orthogonality(theta: ThetaTable) -> Optional[str]:
    a = theta.alpha
    weights = [z_stat(mu) * a ** len(mu) for mu in theta.partitions]
    for i, rho in enumerate(theta.partitions):
        for j, lam in enumerate(theta.partitions):
            s = sum(w * x * y for w, x, y in zip(weights, theta.values[i], theta.values[j]))
            want = c_product(rho, a) * c_prime_product(rho, a) if i == j else 0
            if s != want:
                return f"(rho, lam) = ({format_partition(rho)}, {format_partition(lam)})"
    return None


def check_theta_column_orthogonality(theta: ThetaTable) -> Optional[str]:
    a = theta.alpha
    norms = [c_product(r, a) * c_prime_product(r, a) for r in theta.partitions]
    for j, mu in enumerate(theta.partitions):
        for k, nu in enumerate(theta.partitions):
            s = sum(row[j] * row[k] / c for row, c in zip(theta.values, norms))
            want = 1 / (z_stat(mu) * a ** len(mu)) if j == k else 0
            if s != want:
                return f"(mu, nu) = ({format_partition(mu)}, {format_partition(nu)})"
    return None


def check_theta_special_values(theta: ThetaTable) -> Optional[str]:
    n, a = theta.n, theta.alpha
    ones = Partition([1] * n)
    for lam in theta.partitions:
        if theta[lam, ones] != 1:
            return f"coefficient of p_(1^n) in J_{format_partition(lam)}"
        if n >= 2:
            want = n_stat(conjugate(lam)) * a - n_stat(lam)
            if theta[lam, Partition([2] + [1] * (n - 2))] != want:
                return f"transposition column at {format_partition(lam)}"
    for mu in theta.partitions:
        if theta[Partition([n]), mu] != Fraction(factorial(n), z_stat(mu)) * a ** (n - len(mu)):
            return f"one-row shape at mu={format_partition(mu)}"
        if n >= 2:
            m1 = mu.count(1)
            want = (a ** (n - len(mu)) * Fraction(factorial(n), z_stat(mu))
                    * ((a * (n - 1) + 1) * m1 - n) / (a * n * (n - 1)))
            if theta[Partition([n - 1, 1]), mu] != want:
                return f"hook (n-1,1) at mu={format_partition(mu)}"
    return None


# ---- chains ---------------------------------------------------------------

def _compare_matrix(got, want, labels) -> Optional[str]:
    for i, (gr, wr) in enumerate(zip(got, want)):
        for j, (g, w) in enumerate(zip(gr, wr)):
            if g != w:
                return f"entry ({labels[i]}, {labels[j]}): {format_scalar(g)} != {format_scalar(w)}"
    return None


def _reorder(dense, labels, n):
    idx = {lam: i for i, lam in enumerate(enumerate_partitions(n))}
    order = [idx[lam] for lam in labels]
    return [[dense[i][j] for j in order] for i in order]


def check_n3_fixtures(a: Fraction) -> Optional[str]:
    labels = [format_partition(p) for p in fixtures.N3_LABELS]
    for name, chain, fixture in (
        ("M", m_chain(3, a), fixtures.m_matrix_n3),
        ("L", l_chain(3, a), fixtures.l_matrix_n3),
    ):
        bad = _compare_matrix(_reorder(chain.dense(), fixtures.N3_LABELS, 3), fixture(a), labels)
        if bad:
            return f"{name} {bad}"
    k_labels = [format_partition(p) for p in fixtures.N3_K_LABELS]
    bad = _compare_matrix(_reorder(k_chain(3, a).dense(), fixtures.N3_K_LABELS, 3),
                          fixtures.k_matrix_n3(a), k_labels)
    if bad:
        return f"K {bad}"
    perms, t = t_chain_toy(3, a)
    pos = [perms.index(p) for p in fixtures.N3_T_LABELS]
    got = [[t[i][j] for j in pos] for i in pos]
    bad = _compare_matrix(got, fixtures.t_matrix_n3(a), [str(p) for p in fixtures.N3_T_LABELS])
    return f"T {bad}" if bad else None


def check_rows_and_signs(n: int, a: Fraction, theta: ThetaTable) -> Optional[str]:
    for chain in (m_chain(n, a), l_chain(n, a, theta), k_chain(n, a)):
        for lam, s in zip(chain.partitions, chain.row_sums()):
            if s != 1:
                return f"{chain.kind} row {format_partition(lam)} sums to {format_scalar(s)}"
        for i, row in enumerate(chain.rows):
            for j, v in row.items():
                if v < 0 and (chain.kind != "L" or i != j):
                    return f"{chain.kind} negative entry at ({i}, {j})"
    return None


def _reversible(chain, pi) -> Optional[str]:
    for i, row in enumerate(chain.rows):
        for j, v in row.items():
            if pi[i] * v != pi[j] * chain.rows[j].get(i, 0):
                return f"{chain.kind} pair ({format_partition(chain.partitions[i])}, " \
                       f"{format_partition(chain.partitions[j])})"
    return None


def check_reversibility(n: int, a: Fraction, theta: ThetaTable) -> Optional[str]:
    pi = jack_distribution(n, a).probs
    return (_reversible(m_chain(n, a), pi) or _reversible(l_chain(n, a, theta), pi)
            or _reversible(k_chain(n, a), k_stationary(n, a).probs))


def check_stationarity(n: int, a: Fraction) -> Optional[str]:
    pi = jack_distribution(n, a).probs
    if tuple(m_chain(n, a).left_apply(pi)) != pi:
        return "pi M != pi"
    return None


def check_l_m_ratio(n: int, a: Fraction, theta: ThetaTable) -> Optional[str]:
    lm, mm = l_chain(n, a, theta), m_chain(n, a)
    for i, lam in enumerate(lm.partitions):
        for j, rho in enumerate(lm.partitions):
            if i != j:
                lv = lm.rows[i].get(j, 0)
                mv = mm.rows[i].get(j, 0)
                if lv * a * (n - 1) != mv * (a * (n - 1) + 1):
                    return f"({format_partition(lam)}, {format_partition(rho)})"
    return None


def check_down_up(n: int, a: Fraction) -> Optional[str]:
    if m_chain(n, a).rows != m_chain_down_up(n, a).rows:
        return "closed-form M differs from down-then-up construction"
    return None


def check_lumping(n: int, a: Fraction) -> Optional[str]:
    if n > 5:
        return None
    perms, t = t_chain_toy(n, a)
    if lump_by_cycle_type(perms, t) != k_chain(n, a).dense():
        return "lumped permutation chain differs from k_chain"
    return None


def check_hanlon(n: int, a: Fraction, r_max: int = 5) -> Optional[str]:
    for r in range(r_max + 1):
        res = hanlon_identity_check(n, a, r)
        if not res.exact:
            return f"r={r} at mu={res.witness}"
    return None


def check_step_formulas(n: int, a: Fraction) -> Optional[str]:
    if n < 5:
        return None
    ones = Partition([1] * n)
    k = k_chain(n, a)
    two = chain_step_distribution(k, ones, 2)
    for mu, want in fixtures.k_two_step_from_identity(n, a).items():
        if two[mu] != want:
            return f"two steps to {format_partition(mu)}"
    three = chain_step_distribution(k, ones, 3)
    if three[Partition([2] + [1] * (n - 2))] != fixtures.k_three_step_to_transposition(n, a):
        return "three steps to (2,1^(n-2))"
    return None


# ---- statistic W ----------------------------------------------------------

def check_eigen(n: int, a: Fraction) -> Optional[str]:
    res = conditional_mean_eigencheck(n, a)
    if not res.exact:
        return f"conditional mean at {res.witness}"
    if n <= 6:
        for nu in enumerate_partitions(n):
            rep = general_eigencheck(n, nu, a)
            if not rep.exact:
                return f"eigenvector theta^._{format_partition(nu)}"
    return None


def check_moments(n: int, a: Fraction, r_max: int = 6) -> Optional[str]:
    s = w_scale(n, a)
    for r in range(r_max + 1):
        rep = moments(n, a, r)
        if rep.via_chain != rep.direct:
            return f"r={r}: chain {format_scalar(rep.via_chain)} vs direct {format_scalar(rep.direct)}"
    if moments(n, a, 1).direct != 0:
        return "E W != 0"
    if moments(n, a, 2).w_moment_squared != 1:
        return "E W^2 != 1"
    if moments(n, a, 3).w_moment_squared != (a - 1) ** 2 / s:
        return "(E W^3)^2 != (alpha-1)^2/(alpha C(n,2))"
    return None


def check_error_terms(n: int, a: Fraction) -> Optional[str]:
    if n >= 4:
        for lam in enumerate_partitions(n):
            if conditional_second_moment(lam, a) != conditional_second_moment_direct(lam, a):
                return f"conditional second moment at {format_partition(lam)}"
    if n >= 5 and term1_lambda(n, a) != term1_formula(n, a):
        return "first Stein error term differs from closed form"
    return None


def check_tails(n: int, a: Fraction) -> Optional[str]:
    rep = tail_bound_check(n, a)
    return None if rep.holds else f"tail report {rep}"


def check_duality(n: int, a: Fraction) -> Optional[str]:
    p, q = jack_distribution(n, a), jack_distribution(n, 1 / a)
    for lam, prob in p.items():
        if prob != q[conjugate(lam)]:
            return f"Jack measure at {format_partition(lam)}"
    if n >= 2:
        mirrored = {-k: v for k, v in signed_square_law(n, 1 / a).items()}
        if signed_square_law(n, a) != mirrored:
            return "law of W at alpha vs -W at 1/alpha"
    return None


# ---- driver ---------------------------------------------------------------

def _run(results: list[CheckResult], name: str, fn: Callable[[], Optional[str]]):
    try:
        witness = fn()
    except Exception as exc:  # a crash is a failed check with the error as witness
        witness = f"{type(exc).__name__}: {exc}"
    results.append(CheckResult(name, witness is None, witness or ""))


def run_suite(
    n_max: int = DEFAULT_CAP,
    alphas: Iterable[Fraction] = DEFAULT_ALPHAS,
    cap: int = DEFAULT_CAP,
    theta_factory: ThetaFactory = jack_theta_table,
    progress: Optional[Callable[[CheckResult], Any]] = None,
) -> VerifySuiteResult:
    if n_max > cap:
        raise ValueError(f"verify is capped at n <= {cap}; got n={n_max}")
    out = VerifySuiteResult()

    def run(name, fn):
        _run(out.results, name, fn)
        if progress:
            progress(out.results[-1])

    for a in alphas:
        a = Fraction(a)
        tag = f"alpha={format_scalar(a)}"
        if n_max >= 3:
            run(f"n=3 reference matrices {tag}", lambda: check_n3_fixtures(a))
        for n in range(1, n_max + 1):
            where = f"n={n} {tag}"
            theta = theta_factory(n, a)
            run(f"theta row orthogonality {where}", lambda: check_theta_row_orthogonality(theta))
            run(f"theta column orthogonality {where}", lambda: check_theta_column_orthogonality(theta))
            run(f"theta special values {where}", lambda: check_theta_special_values(theta))
            run(f"jack measure duality {where}", lambda: check_duality(n, a))
            run(f"tail bounds {where}", lambda: check_tails(n, a))
            if n < 2:
                continue
            run(f"p1-perp branching rule {where}",
                lambda: (None if (r := verify_p1perp_pieri(n, a)).exact else f"lam={r.witness}"))
            run(f"row sums and signs {where}", lambda: check_rows_and_signs(n, a, theta))
            run(f"reversibility {where}", lambda: check_reversibility(n, a, theta))
            run(f"stationarity of M {where}", lambda: check_stationarity(n, a))
            run(f"L/M off-diagonal ratio {where}", lambda: check_l_m_ratio(n, a, theta))
            run(f"M equals down-then-up {where}", lambda: check_down_up(n, a))
            run(f"permutation chain lumps to K {where}", lambda: check_lumping(n, a))
            if n <= 7:
                run(f"K walk vs theta spectral sum {where}", lambda: check_hanlon(n, a))
            run(f"K step formulas {where}", lambda: check_step_formulas(n, a))
            run(f"W eigenvector relations {where}", lambda: check_eigen(n, a))
            run(f"moments via K return probabilities {where}", lambda: check_moments(n, a))
            run(f"Stein error term formulas {where}", lambda: check_error_terms(n, a))
    return out
