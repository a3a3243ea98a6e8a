"""Deterministic pseudo-randomness.

Every randomized check draws from :func:`generator`, a stdlib
``random.Random`` (Mersenne Twister) seeded from a fixed base seed and a
per-purpose label, so reruns reproduce the same draws and witnesses.
"""
from __future__ import annotations

import random
import zlib
from fractions import Fraction

BASE_SEED = 20030521


def generator(label: str = "", seed: int = BASE_SEED) -> random.Random:
    return random.Random(seed ^ zlib.crc32(label.encode("utf-8")))


def rational(rng: random.Random, bound: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, max_den))


def rational_vector(rng: random.Random, n: int, bound: int = 5, max_den: int = 4) -> tuple:
    return tuple(rational(rng, bound, max_den) for _ in range(n))


def integer_matrix(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> list:
    return [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]


def invertible_integer_matrix(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> list:
    from .exact import determinant

    while True:
        m = integer_matrix(rng, n, lo, hi)
        if determinant(m) != 0:
            return m


def uniform_vector(rng: random.Random, n: int, lo: float, hi: float) -> tuple:
    return tuple(rng.uniform(lo, hi) for _ in range(n))
