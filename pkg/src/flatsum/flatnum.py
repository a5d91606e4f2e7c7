"""Flat numbers mod q and the character sums over them.

An H-flat number mod q is a unit n whose inverse, with both taken in
[1, q], satisfies ``|n - nbar| <= H``. ``w_sum`` adds a character over
that set; ``w_star_sum`` is the congruence variant that counts n once
for each ``t in [1, H]`` with ``n - nbar = t (mod q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Real
from typing import NamedTuple, Sequence, Union

import numpy as np

from .arith import as_modulus, euler_phi, sqrt_mod
from .characters import DirichletCharacter, jacobi_character, root_table
from .errors import BadDelta, BadThreshold, ModulusMismatch, UnsupportedModulus
from .expsums import gauss_sum_shifted, phase_matrix, salie_sign, unit_inverses


@dataclass(frozen=True)
class FlatSet:
    q: int
    h: Real
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, n: int) -> bool:
        return n in set(self.members)

    def to_json(self) -> dict:
        return {"q": self.q, "h": self.h, "members": list(self.members)}


@dataclass(frozen=True)
class FlatSumValue:
    w: complex
    h: Real
    q: int
    chi_label: str

    def __abs__(self) -> float:
        return abs(self.w)


class ZhangCount(NamedTuple):
    count: int
    main_term: float
    error: float


@lru_cache(maxsize=256)
def inverse_gaps(q: int) -> tuple[np.ndarray, np.ndarray]:
    """(|n - nbar|, (n - nbar) mod q) aligned with the units mod q."""
    units, inv = unit_inverses(q)
    gap = np.abs(units - inv)
    return gap, (units - inv) % q


def _check_threshold(q: int, h) -> None:
    if q < 2:
        raise BadThreshold(f"flat sets need q >= 2, got {q}")
    if not 0 <= h <= q:
        raise BadThreshold(f"threshold {h} outside [0, {q}]")


def _check_int_threshold(q: int, h) -> int:
    if isinstance(h, bool) or int(h) != h or not 1 <= h <= q:
        raise BadThreshold(f"integer threshold in [1, {q}] required, got {h}")
    return int(h)


def _check_char(chi: DirichletCharacter, q: int) -> None:
    if chi.q != q:
        raise ModulusMismatch(f"character has modulus {chi.q}, sum requested mod {q}")


def flat_mask(q: int, h) -> np.ndarray:
    """Boolean mask over the units mod q selecting the H-flat ones."""
    _check_threshold(q, h)
    gap, _ = inverse_gaps(q)
    return gap <= h


def w_star_mask(q: int, h: int) -> np.ndarray:
    """Units counted by W*: (n - nbar) mod q hits some t in [1, h]."""
    h = _check_int_threshold(q, h)
    _, res = inverse_gaps(q)
    t = np.where(res == 0, q, res)
    return t <= h


def flat_set(q: int, h) -> FlatSet:
    mask = flat_mask(q, h)
    units, _ = unit_inverses(q)
    return FlatSet(q, h, tuple(int(n) for n in units[mask]))


def w_sum(chi: DirichletCharacter, h, q: int) -> FlatSumValue:
    _check_char(chi, q)
    mask = flat_mask(q, h)
    return FlatSumValue(complex(np.sum(chi.unit_values[mask])), h, q, chi.label)


def w_star_sum(chi: DirichletCharacter, h: int, q: int) -> FlatSumValue:
    _check_char(chi, q)
    mask = w_star_mask(q, h)
    return FlatSumValue(complex(np.sum(chi.unit_values[mask])), h, q, chi.label)


def fourier_coefficients(q: int, h: int) -> np.ndarray:
    """``sum_{t=1}^{h} e(-m t / q)`` for m = 1..q, summed term by term."""
    m = np.arange(1, q + 1, dtype=np.int64).reshape(-1, 1)
    t = np.arange(1, h + 1, dtype=np.int64)
    return root_table(q)[(-m * t) % q].sum(axis=1)


def fourier_w_star_table(q: int, hs: Sequence[int], values: np.ndarray) -> np.ndarray:
    """Fourier side of W* for each h (rows) and character (columns).

    Kloosterman sums S(m, -m; q) are computed once per m = 1..q and
    reused across thresholds.
    """
    ms = np.arange(1, q + 1, dtype=np.int64)
    kloost = phase_matrix(q, q, ms, -ms) @ np.asarray(values).T
    coeffs = np.array([fourier_coefficients(q, _check_int_threshold(q, h)) for h in hs])
    return coeffs @ kloost / q


def fourier_w_star(chi: DirichletCharacter, h: int, q: int) -> FlatSumValue:
    _check_char(chi, q)
    value = fourier_w_star_table(q, [h], chi.unit_values[None, :])[0, 0]
    return FlatSumValue(complex(value), h, q, chi.label)


def salie_w_star(h: int, q: int) -> FlatSumValue:
    """Closed form of W* for the Jacobi character of an odd squarefree q."""
    mod = as_modulus(q)
    if q % 2 == 0 or not mod.is_squarefree:
        raise UnsupportedModulus(f"closed form needs odd squarefree q, got {q}")
    h = _check_int_threshold(q, h)
    chi = jacobi_character(mod)
    deltas = sqrt_mod(-1, mod)
    signs = np.rint(chi.values.real).astype(np.int64)
    t = np.arange(1, h + 1, dtype=np.int64)
    inner = sum(int(signs[(2 * delta - t) % q].sum()) for delta in deltas)
    tau = gauss_sum_shifted(1, chi).value
    value = salie_sign(q) / math.sqrt(q) * tau * inner
    return FlatSumValue(complex(value), h, q, chi.label)


def _as_exact(delta) -> Fraction | None:
    if isinstance(delta, (Fraction, int, str)) and not isinstance(delta, bool):
        return Fraction(delta)
    return None


def zhang_count(q: int, delta: Union[float, Fraction, str]) -> ZhangCount:
    """Units with ``|n - nbar| <= delta*q`` against the main term delta(2-delta)phi(q).

    Ties at the boundary are decided exactly when delta is a Fraction,
    int or decimal string; a float delta is compared in double precision.
    """
    if q < 2:
        raise BadDelta(f"q must be at least 2, got {q}")
    exact = _as_exact(delta)
    value = exact if exact is not None else float(delta)
    if not 0 < value <= 1:
        raise BadDelta(f"delta must lie in (0, 1], got {delta}")
    gap, _ = inverse_gaps(q)
    phi = euler_phi(q)
    if exact is not None:
        count = int(np.count_nonzero(gap * exact.denominator <= exact.numerator * q))
        main = exact * (2 - exact) * phi
        return ZhangCount(count, float(main), float(count - main))
    count = int(np.count_nonzero(gap <= value * q))
    main = value * (2 - value) * phi
    return ZhangCount(count, main, count - main)
