"""Dirichlet characters mod q, represented componentwise.

The unit group mod q is split into cyclic factors, one per odd prime
power (generated by its smallest primitive root) and up to two for the
power of two (generated by -1 and 5). A character is the tuple of its
exponents ("labels") on those generators. Values are kept as integer
exponents ``k`` over the group exponent ``L`` so that ``chi(n) = e(k/L)``
is looked up in a fixed root-of-unity table; real characters then come
out as exact +/-1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .arith import Modulus, ModulusLike, as_modulus, multiplicative_profile
from .errors import BadFactorization, EvenModulus


@lru_cache(maxsize=4096)
def root_table(L: int) -> np.ndarray:
    """``exp(2*pi*i*k/L)`` for ``k = 0..L-1`` with exact quarter points."""
    k = np.arange(L)
    angle = 2.0 * np.pi * k / L
    table = np.cos(angle) + 1j * np.sin(angle)
    for quarter, value in enumerate((1.0, 1j, -1.0, -1j)):
        if (quarter * L) % 4 == 0:
            table[quarter * L // 4] = value
    table.setflags(write=False)
    return table


def unit_root(num: int, den: int) -> complex:
    """``e(num/den)`` with the argument reduced exactly before the trig call."""
    return complex(root_table(den)[num % den])


def _primitive_root(p: int, e: int) -> int:
    """Smallest primitive root of p**e for odd p."""
    n = p - 1
    qs = [f for f in range(2, n + 1) if n % f == 0 and all(f % g for g in range(2, math.isqrt(f) + 1))]
    pe = p**e
    for g in range(2, pe):
        if g % p == 0:
            continue
        if any(pow(g, n // f, p) == 1 for f in qs):
            continue
        if e >= 2 and pow(g, p - 1, p * p) == 1:
            continue
        return g
    raise ArithmeticError(f"no primitive root found mod {p}**{e}")


@dataclass(frozen=True, eq=False)
class Component:
    """One cyclic factor of the unit group mod a prime power."""

    prime: int
    prime_power: int
    generator: int
    order: int
    log_table: np.ndarray = field(repr=False)


@lru_cache(maxsize=512)
def prime_power_components(p: int, e: int) -> tuple[Component, ...]:
    pe = p**e
    if p == 2:
        if e == 1:
            return ()
        if e == 2:
            logs = np.array([-1, 0, -1, 1], dtype=np.int64)
            return (Component(2, 4, 3, 2, logs),)
        half = 1 << (e - 2)
        sign = np.full(pe, -1, dtype=np.int64)
        five = np.full(pe, -1, dtype=np.int64)
        x = 1
        for k in range(half):
            sign[x], five[x] = 0, k
            sign[pe - x], five[pe - x] = 1, k
            x = x * 5 % pe
        return (Component(2, pe, pe - 1, 2, sign), Component(2, pe, 5, half, five))
    g = _primitive_root(p, e)
    order = pe - pe // p
    logs = np.full(pe, -1, dtype=np.int64)
    x = 1
    for k in range(order):
        logs[x] = k
        x = x * g % pe
    return (Component(p, pe, g, order, logs),)


class CharacterGroup:
    """Cached discrete-log data for all characters mod q."""

    def __init__(self, modulus: Modulus):
        self.modulus = modulus
        q = modulus.q
        comps: list[Component] = []
        for p, e in modulus.factors:
            comps.extend(prime_power_components(p, e))
        self.components = tuple(comps)
        self.orders = tuple(c.order for c in comps)
        self.exponent = math.lcm(*self.orders) if comps else 1
        n = np.arange(q, dtype=np.int64)
        self.units = n[np.gcd(n, q) == 1] if q > 1 else np.zeros(1, dtype=np.int64)
        self.unit_index = np.full(q, -1, dtype=np.int64)
        self.unit_index[self.units] = np.arange(len(self.units))
        # (components x units) discrete logs
        self.unit_logs = np.array(
            [c.log_table[self.units % c.prime_power] for c in comps], dtype=np.int64
        ).reshape(len(comps), len(self.units))
        self.weights = np.array([self.exponent // o for o in self.orders], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.units)

    def _rows(self, labels) -> np.ndarray:
        arr = np.asarray(labels, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, len(self.orders))
        return arr

    def all_labels(self) -> np.ndarray:
        """Label rows in lexicographic order; row 0 is principal."""
        if not self.orders:
            return np.zeros((1, 0), dtype=np.int64)
        grid = itertools.product(*(range(o) for o in self.orders))
        return np.array(list(grid), dtype=np.int64).reshape(-1, len(self.orders))

    def exponent_matrix(self, labels: np.ndarray) -> np.ndarray:
        """Exponents over ``self.exponent`` of each labelled character on the units."""
        labels = self._rows(labels)
        if not self.components:
            return np.zeros((len(labels), len(self.units)), dtype=np.int64)
        return ((labels * self.weights) @ self.unit_logs) % self.exponent

    def value_matrix(self, labels: np.ndarray) -> np.ndarray:
        return root_table(self.exponent)[self.exponent_matrix(labels)]

    def label_index(self, labels: np.ndarray) -> np.ndarray:
        """Position of each label row in ``all_labels()`` order."""
        labels = self._rows(labels)
        idx = np.zeros(len(labels), dtype=np.int64)
        for j, o in enumerate(self.orders):
            idx = idx * o + labels[:, j]
        return idx

    def component_mask(self, d: int) -> np.ndarray:
        """Which components belong to the primes dividing d."""
        return np.array([d % c.prime == 0 for c in self.components], dtype=bool)

    def primitive_mask(self, labels: np.ndarray) -> np.ndarray:
        """Rows whose character is primitive mod q."""
        labels = self._rows(labels)
        ok = np.ones(len(labels), dtype=bool)
        for p, e in self.modulus.factors:
            if p == 2 and e == 1:
                return np.zeros(len(labels), dtype=bool)
            cols = [j for j, c in enumerate(self.components) if c.prime == p]
            if p == 2:
                # mod 4: the sign bit; mod 2**e, e >= 3: odd exponent on 5
                ok &= labels[:, cols[-1]] % 2 == 1
            elif e == 1:
                ok &= labels[:, cols[0]] != 0
            else:
                ok &= labels[:, cols[0]] % p != 0
        return ok

    def value_at(self, labels: np.ndarray, n: int) -> np.ndarray:
        """chi(n) for each label row."""
        labels = self._rows(labels)
        i = self.unit_index[n % self.modulus.q] if self.modulus.q > 1 else 0
        if i < 0:
            return np.zeros(len(labels), dtype=complex)
        if not self.components:
            return np.ones(len(labels), dtype=complex)
        exps = ((labels * self.weights) @ self.unit_logs[:, i]) % self.exponent
        return root_table(self.exponent)[exps]


@lru_cache(maxsize=256)
def character_group(q: ModulusLike) -> CharacterGroup:
    return CharacterGroup(as_modulus(q))


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character identified by its generator exponents."""

    modulus: Modulus
    labels: tuple[int, ...]

    def __post_init__(self):
        orders = self.group.orders
        if len(self.labels) != len(orders) or any(
            not 0 <= a < o for a, o in zip(self.labels, orders)
        ):
            raise ValueError(f"labels {self.labels} invalid for modulus {self.q} (orders {orders})")

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def group(self) -> CharacterGroup:
        return character_group(self.modulus.q)

    @property
    def label(self) -> str:
        return f"q={self.q};labels={','.join(map(str, self.labels))}"

    @property
    def is_principal(self) -> bool:
        return not any(self.labels)

    def sort_key(self) -> tuple:
        return (self.q, self.labels)

    @cached_property
    def unit_exponents(self) -> np.ndarray:
        return self.group.exponent_matrix(np.array([self.labels]))[0]

    @cached_property
    def unit_values(self) -> np.ndarray:
        """Values on ``group.units`` in ascending order."""
        return root_table(self.group.exponent)[self.unit_exponents]

    @cached_property
    def values(self) -> np.ndarray:
        """Values at every residue ``0..q-1`` (zero off the units)."""
        out = np.zeros(self.q, dtype=complex)
        out[self.group.units] = self.unit_values
        return out

    def exponent_at(self, n: int) -> int | None:
        """``k`` with ``chi(n) = e(k/L)``, or None when gcd(n, q) > 1."""
        if math.gcd(n, self.q) != 1:
            return None
        g = self.group
        k = 0
        for comp, a, w in zip(g.components, self.labels, g.weights):
            log = comp.log_table[n % comp.prime_power]
            if log < 0:
                return None
            k += a * int(w) * int(log)
        return k % g.exponent

    def __call__(self, n: int) -> complex:
        k = self.exponent_at(int(n))
        return 0j if k is None else complex(root_table(self.group.exponent)[k])

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus, tuple((-a) % o for a, o in zip(self.labels, self.group.orders))
        )


@dataclass(frozen=True)
class CharacterInfo:
    parity: int
    is_principal: bool
    is_primitive: bool
    conductor: int
    order: int


def principal_character(m: ModulusLike) -> DirichletCharacter:
    m = as_modulus(m)
    return DirichletCharacter(m, (0,) * len(character_group(m.q).orders))


def enumerate_characters(m: ModulusLike) -> list[DirichletCharacter]:
    """All phi(q) characters in lexicographic label order."""
    m = as_modulus(m)
    return [DirichletCharacter(m, tuple(int(a) for a in row)) for row in character_group(m.q).all_labels()]


def evaluate(chi: DirichletCharacter, n: int) -> complex:
    return chi(n)


def jacobi_character(m: ModulusLike) -> DirichletCharacter:
    """The character n -> (n/q) for odd q."""
    m = as_modulus(m)
    if m.q % 2 == 0:
        raise EvenModulus(f"Jacobi character needs odd q, got {m.q}")
    labels = []
    for (p, e), comp in zip(m.factors, character_group(m.q).components):
        labels.append((e % 2) * comp.order // 2)
    return DirichletCharacter(m, tuple(labels))


def factor_character(
    chi: DirichletCharacter, d: int, ell: int
) -> tuple[DirichletCharacter, DirichletCharacter]:
    """Split chi mod d*ell into (chi1 mod d, chi2 mod ell), gcd(d, ell) = 1."""
    if d * ell != chi.q or d < 1 or math.gcd(d, ell) != 1:
        raise BadFactorization(f"{d} * {ell} is not a coprime factorization of {chi.q}")
    left, right = [], []
    for comp, a in zip(chi.group.components, chi.labels):
        (left if d % comp.prime == 0 else right).append(a)
    return (
        DirichletCharacter(as_modulus(d), tuple(left)),
        DirichletCharacter(as_modulus(ell), tuple(right)),
    )


def _component_conductor(chi: DirichletCharacter, p: int, e: int) -> int:
    """Smallest p**k such that chi's p-part is trivial on units = 1 mod p**k."""
    g = chi.group
    pe = p**e
    idx = [i for i, c in enumerate(g.components) if c.prime == p]
    for k in range(e + 1):
        step = p**k
        residues = np.arange(pe, dtype=np.int64)
        residues = residues[(residues % step == 1 % step) & (residues % p != 0)]
        total = np.zeros(len(residues), dtype=np.int64)
        for i in idx:
            comp = g.components[i]
            total += chi.labels[i] * int(g.weights[i]) * comp.log_table[residues]
        if not np.any(total % g.exponent):
            return step
    return pe


def character_info(chi: DirichletCharacter) -> CharacterInfo:
    q = chi.q
    parity = int(round(chi(q - 1).real))
    conductor = math.prod(_component_conductor(chi, p, e) for p, e in chi.modulus.factors)
    order = math.lcm(*(o // math.gcd(a, o) for a, o in zip(chi.labels, chi.group.orders))) if chi.labels else 1
    return CharacterInfo(
        parity=parity,
        is_principal=chi.is_principal,
        is_primitive=conductor == q,
        conductor=conductor,
        order=order,
    )


def character_from_label(text: str) -> DirichletCharacter:
    """Parse ``q=<q>;labels=<a,b,...>``."""
    try:
        qpart, lpart = text.split(";")
        key_q, q = qpart.split("=")
        key_l, labels = lpart.split("=")
        if key_q.strip() != "q" or key_l.strip() != "labels":
            raise ValueError
        labs = tuple(int(x) for x in labels.split(",") if x.strip())
        return DirichletCharacter(as_modulus(int(q)), labs)
    except ValueError as exc:
        raise ValueError(f"bad character label {text!r}") from exc


def phi(q: int) -> int:
    return multiplicative_profile(q)[0]
