"""Closed forms transcribed by hand, used as regression anchors.

Each n=3 matrix is a function of alpha returning rows in the order given by
the accompanying label tuple (not necessarily the canonical order).
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

from .partitions import Partition

ONE = Fraction(1)

N3_LABELS = (Partition([3]), Partition([2, 1]), Partition([1, 1, 1]))
N3_K_LABELS = (Partition([1, 1, 1]), Partition([2, 1]), Partition([3]))
# permutations of {0,1,2} as image tuples: id, (12), (13), (23), (123), (132)
N3_T_LABELS = ((0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1))


def m_matrix_n3(a: Fraction) -> list[list[Fraction]]:
    return [
        [1 / (2 * a + 1), 2 * a / (2 * a + 1), Fraction(0)],
        [
            (a + 2) / (3 * (a + 1) * (2 * a + 1)),
            2 * (a**2 + 7 * a + 1) / (3 * (a + 2) * (2 * a + 1)),
            a * (2 * a + 1) / (3 * (a + 1) * (a + 2)),
        ],
        [Fraction(0), 2 / (a + 2), a / (a + 2)],
    ]


def l_matrix_n3(a: Fraction) -> list[list[Fraction]]:
    return [
        [Fraction(0), ONE, Fraction(0)],
        [
            (a + 2) / (6 * a * (a + 1)),
            (2 * a**2 + 11 * a - 4) / (6 * a * (a + 2)),
            (2 * a + 1) ** 2 / (6 * (a + 1) * (a + 2)),
        ],
        [Fraction(0), (2 * a + 1) / (a * (a + 2)), (a**2 - 1) / (a * (a + 2))],
    ]


def k_matrix_n3(a: Fraction) -> list[list[Fraction]]:
    return [
        [Fraction(0), ONE, Fraction(0)],
        [1 / (3 * a), (a - 1) / (3 * a), Fraction(2, 3)],
        [Fraction(0), 1 / a, 1 - 1 / a],
    ]


def t_matrix_n3(a: Fraction) -> list[list[Fraction]]:
    z = Fraction(0)
    s = 1 / (3 * a)
    h = (a - 1) / (3 * a)
    t = Fraction(1, 3)
    return [
        [z, t, t, t, z, z],
        [s, h, z, z, t, t],
        [s, z, h, z, t, t],
        [s, z, z, h, t, t],
        [z, s, s, s, 1 - 1 / a, z],
        [z, s, s, s, z, 1 - 1 / a],
    ]


def jack_measure_32(a: Fraction) -> Fraction:
    """Jack measure of the shape (3,2)."""
    return 60 * a**2 / ((2 * a + 2) * (3 * a + 1) * (a + 2) * (2 * a + 1) * (a + 1))


def k_two_step_from_identity(n: int, a: Fraction) -> dict[Partition, Fraction]:
    """Two-step law of the lumped Metropolis chain from (1^n), for n >= 4."""
    pairs = comb(n, 2)
    ones = [1] * n
    return {
        Partition(ones): 1 / (a * pairs),
        Partition([2] + ones[2:]): (a - 1) / (a * pairs),
        Partition([3] + ones[3:]): Fraction(4 * (n - 2), n * (n - 1)),
        Partition([2, 2] + ones[4:]): Fraction((n - 2) * (n - 3), n * (n - 1)),
    }


def k_three_step_to_transposition(n: int, a: Fraction) -> Fraction:
    return 2 * (3 * a * n**2 + a * n + 2 * a**2 - 16 * a + 2) / (a**2 * n**2 * (n - 1) ** 2)
