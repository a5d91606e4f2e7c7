"""Sweep configuration and the seeded samplers shared by all suites."""

from __future__ import annotations

import os
import random
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

from ..errors import InvalidConfig

DEFAULT_SEED = 0x5EED
DEFAULT_H_GRID = ("1", "q/8", "q/4", "q/2", "q")
DEFAULT_DELTAS = ("0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1")


@dataclass(frozen=True)
class SweepConfig:
    """Parameters of one suite or sweep run.

    ``q_max=None`` and ``tol=None`` fall back to the per-suite defaults.
    ``workers`` only controls execution and never reaches a report.
    """

    q_min: int = 3
    q_max: Optional[int] = None
    q_list: Optional[tuple[int, ...]] = None
    h_grid: tuple[str, ...] = DEFAULT_H_GRID
    samples: int = 32
    seed: int = DEFAULT_SEED
    tol: Optional[float] = None
    r_values: tuple[int, ...] = (1, 2, 3)
    chi: str = "all"
    deltas: tuple[str, ...] = DEFAULT_DELTAS
    workers: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.q_min < 1:
            raise InvalidConfig(f"q_min must be positive, got {self.q_min}")
        if self.q_max is not None and self.q_max < self.q_min:
            raise InvalidConfig(f"q_max {self.q_max} below q_min {self.q_min}")
        if self.q_list is not None and any(q < 1 for q in self.q_list):
            raise InvalidConfig("q_list entries must be positive")
        if self.samples < 1:
            raise InvalidConfig("samples must be at least 1")
        if any(r < 1 for r in self.r_values):
            raise InvalidConfig("r values must be positive integers")
        if self.tol is not None and not self.tol > 0:
            raise InvalidConfig("tol must be positive")
        if not self.h_grid:
            raise InvalidConfig("empty H grid")
        for token in self.h_grid:
            parse_h_token(token, 1)
        if not (self.chi in ("all", "jacobi", "principal") or self.chi.startswith("index:")):
            raise InvalidConfig(f"unknown character selector {self.chi!r}")

    def with_defaults(self, q_max: int, tol: Optional[float]) -> "SweepConfig":
        return replace(
            self,
            q_max=self.q_max if self.q_max is not None else q_max,
            tol=self.tol if self.tol is not None else tol,
        )

    def moduli(self) -> list[int]:
        if self.q_list is not None:
            return sorted(set(self.q_list))
        return list(range(self.q_min, self.q_max + 1))

    def params(self) -> dict:
        out = asdict(self)
        out.pop("workers")
        for key in ("q_list", "h_grid", "r_values", "deltas"):
            if out[key] is not None:
                out[key] = list(out[key])
        return out

    def worker_count(self) -> int:
        if self.workers is not None:
            return max(1, self.workers)
        env = os.environ.get("FLATSUM_THREADS")
        if env:
            try:
                return max(1, int(env))
            except ValueError:
                raise InvalidConfig(f"FLATSUM_THREADS must be an integer, got {env!r}") from None
        return os.cpu_count() or 1


def parse_h_token(token: str, q: int) -> int:
    """'7' -> 7, 'q' -> q, 'q/4' -> q // 4."""
    text = str(token).strip().replace(" ", "")
    try:
        if text == "q":
            return q
        if text.startswith("q/"):
            div = int(text[2:])
            if div < 1:
                raise ValueError
            return q // div
        return int(text)
    except ValueError:
        raise InvalidConfig(f"bad H grid token {token!r}") from None


def h_values(q: int, grid) -> list[int]:
    """Distinct integer thresholds in [1, q] from the grid, ascending."""
    return sorted({h for h in (parse_h_token(t, q) for t in grid) if 1 <= h <= q})


def _rng(seed: int, q: int, stream: str) -> random.Random:
    return random.Random(f"flatsum/{stream}/{seed}/{q}")


def sample_pairs(seed: int, q: int, count: int) -> list[tuple[int, int]]:
    """Seeded (m, n) pairs in [0, q)^2, reproducible from (seed, q)."""
    rng = _rng(seed, q, "pairs")
    return [(rng.randrange(q), rng.randrange(q)) for _ in range(count)]


def sample_unit_pairs(seed: int, q: int, count: int, units) -> list[tuple[int, int]]:
    """Seeded (m, n) pairs with n drawn from the given units."""
    rng = _rng(seed, q, "unit-pairs")
    units = [int(u) for u in units]
    return [(rng.randrange(q), rng.choice(units)) for _ in range(count)]


def sample_residues(seed: int, q: int, count: int) -> list[int]:
    rng = _rng(seed, q, "residues")
    return [rng.randrange(q) for _ in range(count)]
