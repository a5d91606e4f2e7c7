"""Kloosterman, Salie and Gauss sums by direct summation.

Every sum runs over the units ``a`` mod q. Exponential arguments are
reduced as integers modulo the denominator before looking up the root
of unity, so nothing loses precision as q grows. The ``*_table``
helpers evaluate one sum for many (m, n) samples and many characters at
once; the scalar functions are thin wrappers over the same code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .arith import as_modulus, jacobi_symbol, multiplicative_profile, sqrt_mod
from .characters import (
    DirichletCharacter,
    character_group,
    jacobi_character,
    root_table,
    unit_root,
)
from .errors import BadDivisor, ModulusMismatch, NonCoprime, UnsupportedModulus


@dataclass(frozen=True)
class SumResult:
    value: complex
    term_count: int
    params: tuple

    def __abs__(self) -> float:
        return abs(self.value)


class WeilRatio(NamedTuple):
    ratio: float
    bound: float
    value: float


@lru_cache(maxsize=256)
def unit_inverses(q: int) -> tuple[np.ndarray, np.ndarray]:
    """(units, inverses) mod q as aligned int64 arrays."""
    units = character_group(q).units
    if q == 1:
        return units, units.copy()
    inv = np.array([pow(int(a), -1, q) for a in units], dtype=np.int64)
    return units, inv


def _check_modulus(chi: DirichletCharacter, q: int) -> None:
    if chi.q != q:
        raise ModulusMismatch(f"character has modulus {chi.q}, sum requested mod {q}")


def phase_matrix(q: int, d: int, ms, ns) -> np.ndarray:
    """``e((m*a + n*abar)/d)`` for each (m, n) row and each unit ``a`` mod q."""
    units, inv = unit_inverses(q)
    ms = np.asarray(ms, dtype=np.int64).reshape(-1, 1) % d
    ns = np.asarray(ns, dtype=np.int64).reshape(-1, 1) % d
    num = (ms * units + ns * inv) % d
    return root_table(d)[num]


def t_sum_table(q: int, d: int, ms, ns, values: np.ndarray) -> np.ndarray:
    """T sums for every (m, n) sample (rows) and character (columns).

    ``values`` holds character values on the units mod q, one row per
    character, in the order of ``character_group(q).units``.
    """
    if q % d:
        raise BadDivisor(f"{d} does not divide {q}")
    return phase_matrix(q, d, ms, ns) @ np.asarray(values).T


def kloosterman(chi: DirichletCharacter, m: int, n: int, q: int) -> SumResult:
    """Twisted Kloosterman sum; the classical one when chi is principal."""
    _check_modulus(chi, q)
    row = phase_matrix(q, q, [m], [n])[0]
    return SumResult(complex(np.sum(chi.unit_values * row)), len(row), (m, n, q, q, chi.label))


def t_sum(chi: DirichletCharacter, m: int, n: int, d: int, q: int) -> SumResult:
    """Sum of chi(a) e((m a + n abar)/d) over units a mod q; abar is taken mod q."""
    _check_modulus(chi, q)
    if d < 1 or q % d:
        raise BadDivisor(f"{d} does not divide {q}")
    row = phase_matrix(q, d, [m], [n])[0]
    return SumResult(complex(np.sum(chi.unit_values * row)), len(row), (m, n, d, q, chi.label))


def gauss_sum_shifted(s: int, chi: DirichletCharacter) -> SumResult:
    q = chi.q
    units = character_group(q).units
    row = root_table(q)[(units * (s % q)) % q]
    return SumResult(complex(np.sum(chi.unit_values * row)), len(row), (s, 0, q, q, chi.label))


def gauss_sum(chi: DirichletCharacter) -> complex:
    return gauss_sum_shifted(1, chi).value


def salie_sign(q: int) -> complex:
    """The unit factor in the Salie evaluation: 1 if q = 1 mod 4, else i."""
    return 1 + 0j if q % 4 == 1 else 1j


def salie_rhs(m: int, n: int, q: int) -> SumResult:
    """Closed-form Salie evaluation of the Jacobi-twisted Kloosterman sum."""
    mod = as_modulus(q)
    if q % 2 == 0 or not mod.is_squarefree:
        raise UnsupportedModulus(f"Salie evaluation needs odd squarefree q, got {q}")
    if math.gcd(2 * n, q) != 1:
        raise NonCoprime(f"gcd(2n, q) = {math.gcd(2 * n, q)} for n={n}, q={q}")
    roots = sqrt_mod(m * n, mod)
    acc = sum((unit_root(2 * y, q) for y in roots), 0j)
    value = salie_sign(q) * math.sqrt(q) * jacobi_symbol(n, q) * acc
    # term count of the Kloosterman sum this evaluates
    label = jacobi_character(mod).label
    return SumResult(complex(value), multiplicative_profile(mod)[0], (m, n, q, q, label))


def weil_bound(m: int, n: int, q: int) -> float:
    tau = multiplicative_profile(q)[1]
    return math.sqrt(q) * math.sqrt(math.gcd(math.gcd(m, n), q)) * tau


def weil_ratio(chi: DirichletCharacter, m: int, n: int, q: int) -> WeilRatio:
    value = abs(kloosterman(chi, m, n, q).value)
    bound = weil_bound(m, n, q)
    return WeilRatio(value / bound, bound, value)
