"""Integer and modular arithmetic primitives.

Everything here works on plain Python ints. Moduli are wrapped in
:class:`Modulus`, which caches the factorization and the
squarefree/squarefull split that the character and sum code relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from .errors import EvenModulus, NonInvertible, UnsupportedModulus

TRIAL_LIMIT = 10**6
MAX_MODULUS = 2**50


@lru_cache(maxsize=1)
def _small_primes(limit: int = TRIAL_LIMIT) -> tuple[int, ...]:
    sieve = bytearray(b"\x01") * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i, v in enumerate(sieve) if v)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin, deterministic for n < 3.3e24 with these bases."""
    if n < 2:
        return False
    bases = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in bases:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's variant; c walks deterministically so results are reproducible.
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, r, g, prod = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    prod = prod * abs(x - y) % n
                g = math.gcd(prod, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    f = _pollard_rho(n)
    _split_large(f, out)
    _split_large(n // f, out)


@dataclass(frozen=True)
class Modulus:
    """A positive integer together with its factorization.

    ``q1`` collects the primes of exponent one and ``q2`` the remaining
    prime powers, so ``q1 * q2 == q`` and ``gcd(q1, q2) == 1``.
    """

    q: int
    factors: tuple[tuple[int, int], ...]
    q1: int
    q2: int

    def __int__(self) -> int:
        return self.q

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    @property
    def is_squarefree(self) -> bool:
        return self.q2 == 1

    @property
    def phi(self) -> int:
        return multiplicative_profile(self)[0]


ModulusLike = Union[int, Modulus]


@lru_cache(maxsize=65536)
def factorize(q: int) -> Modulus:
    """Factor ``q`` by trial division up to 10**6, then Pollard rho."""
    q = int(q)
    if q < 1:
        raise ValueError(f"modulus must be a positive integer, got {q}")
    if q > MAX_MODULUS:
        raise ValueError(f"modulus {q} exceeds supported range 2**50")
    found: dict[int, int] = {}
    n = q
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n > 1:
        if n <= TRIAL_LIMIT**2 or is_probable_prime(n):
            # no factor <= sqrt(n) survived trial division, so n is prime
            found[n] = found.get(n, 0) + 1
        else:
            _split_large(n, found)
    factors = tuple(sorted(found.items()))
    q1 = math.prod(p for p, e in factors if e == 1)
    q2 = math.prod(p**e for p, e in factors if e >= 2)
    return Modulus(q, factors, q1, q2)


def as_modulus(q: ModulusLike) -> Modulus:
    return q if isinstance(q, Modulus) else factorize(int(q))


def squarefree_split(m: ModulusLike) -> tuple[int, int]:
    m = as_modulus(m)
    return m.q1, m.q2


def divisors(m: ModulusLike) -> list[int]:
    out = [1]
    for p, e in as_modulus(m).factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def coprime_splits(m: ModulusLike) -> list[tuple[int, int]]:
    """All ordered pairs (d, l) with d*l = q and gcd(d, l) = 1."""
    m = as_modulus(m)
    powers = m.prime_powers
    out = []
    for mask in range(1 << len(powers)):
        d = math.prod(pp for i, pp in enumerate(powers) if mask >> i & 1)
        out.append((d, m.q // d))
    return sorted(out)


def mod_inverse(n: int, q: int) -> int:
    """Inverse of ``n`` modulo ``q`` in ``[0, q)``; 0 when ``q == 1``."""
    q = int(q)
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    if q == 1:
        return 0
    try:
        return pow(n, -1, q)
    except ValueError:
        raise NonInvertible(f"{n} is not invertible mod {q} (gcd {math.gcd(n, q)})") from None


def jacobi_symbol(a: int, q: int) -> int:
    if q < 1 or q % 2 == 0:
        raise EvenModulus(f"Jacobi symbol needs an odd positive modulus, got {q}")
    a %= q
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if q % 8 in (3, 5):
                result = -result
        a, q = q, a
        if a % 4 == 3 and q % 4 == 3:
            result = -result
        a %= q
    return result if q == 1 else 0


def _sqrt_mod_prime(a: int, p: int) -> list[int]:
    a %= p
    if a == 0:
        return [0]
    if p == 2:
        return [1]
    if pow(a, (p - 1) // 2, p) != 1:
        return []
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks
        s, t = 0, p - 1
        while t % 2 == 0:
            t //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        c, x, b, m = pow(z, t, p), pow(a, (t + 1) // 2, p), pow(a, t, p), s
        while b != 1:
            i, b2 = 0, b
            while b2 != 1:
                b2 = b2 * b2 % p
                i += 1
            f = pow(c, 1 << (m - i - 1), p)
            x, c, m = x * f % p, f * f % p, i
            b = b * c % p
    return sorted({x, p - x})


def crt(residues: Iterable[int], moduli: Iterable[int]) -> int:
    x, n = 0, 1
    for r, m in zip(residues, moduli):
        x += n * ((r - x) * mod_inverse(n, m) % m)
        n *= m
    return x % n


def sqrt_mod(a: int, m: ModulusLike) -> list[int]:
    """All ``y`` in ``[0, q)`` with ``y*y == a (mod q)``, sorted.

    Only odd squarefree moduli are supported.
    """
    m = as_modulus(m)
    if m.q % 2 == 0 or not m.is_squarefree:
        raise UnsupportedModulus(f"sqrt_mod needs an odd squarefree modulus, got {m.q}")
    roots = [0]
    n = 1
    for p in m.primes:
        local = _sqrt_mod_prime(a, p)
        if not local:
            return []
        roots = [crt((r, s), (n, p)) for r in roots for s in local]
        n *= p
    return sorted(roots)


def multiplicative_profile(m: ModulusLike) -> tuple[int, int, int, int]:
    """(phi, tau, mu, omega) of the modulus."""
    m = as_modulus(m)
    phi = math.prod(p ** (e - 1) * (p - 1) for p, e in m.factors)
    tau = math.prod(e + 1 for _, e in m.factors)
    mu = 0 if m.q2 > 1 else (-1) ** len(m.factors)
    return phi, tau, mu, len(m.factors)


def euler_phi(q: int) -> int:
    return multiplicative_profile(q)[0]


def mobius(q: int) -> int:
    return multiplicative_profile(q)[2]


def ramanujan_sum(n: int, q: int) -> int:
    """Closed-form sum of e(m*n/q) over units m mod q."""
    g = math.gcd(n, q)
    k = q // g
    return mobius(k) * euler_phi(q) // euler_phi(k)


def units(q: int) -> list[int]:
    """Residues in ``[0, q)`` coprime to ``q``; ``[0]`` for ``q == 1``."""
    return [n for n in range(q) if math.gcd(n, q) == 1]
