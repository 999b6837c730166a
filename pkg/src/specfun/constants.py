"""
Mathematical Constants Module
Euler's constant, exact Bernoulli numbers and related values
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple

import numpy as np

EULER_GAMMA = float(np.euler_gamma)
LOG2 = math.log(2.0)
LOG_2PI = math.log(2.0 * math.pi)


class BasicConstants(NamedTuple):
    gamma_euler: float
    bernoulli: List[Fraction]
    log2: float


@lru_cache(maxsize=None)
def _bernoulli_table(n_max: int) -> tuple:
    # Akiyama-Tanigawa; yields B_1 = +1/2, flipped below to the usual -1/2
    row = [Fraction(0)] * (n_max + 1)
    numbers = []
    for m in range(n_max + 1):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
        numbers.append(row[0])
    if n_max >= 1:
        numbers[1] = -numbers[1]
    return tuple(numbers)


def bernoulli_numbers(n_max: int = 20) -> List[Fraction]:
    """
    Exact Bernoulli numbers B_0 .. B_{n_max}.

    Args:
        n_max: Highest index (inclusive)

    Returns:
        List of Fractions, with B_1 = -1/2
    """
    return list(_bernoulli_table(int(n_max)))


def bernoulli_at_half(n: int) -> Fraction:
    """Bernoulli polynomial B_n(1/2) = (2^{1-n} - 1) B_n."""
    b_n = _bernoulli_table(max(n, 1))[n]
    return (Fraction(2) ** (1 - n) - 1) * b_n


@lru_cache(maxsize=None)
def euler_maclaurin_weights(terms: int) -> tuple:
    """Floats B_{2j}/(2j)! for j = 1..terms."""
    table = _bernoulli_table(2 * terms)
    return tuple(float(table[2 * j] / math.factorial(2 * j)) for j in range(1, terms + 1))


def basic_constants() -> BasicConstants:
    """Euler's constant, B_0..B_20 exactly, and log 2."""
    return BasicConstants(gamma_euler=EULER_GAMMA, bernoulli=bernoulli_numbers(20), log2=LOG2)
