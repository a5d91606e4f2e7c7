"""Exact character sums over flat numbers mod q, with verification sweeps."""

from .arith import (
    Modulus,
    factorize,
    jacobi_symbol,
    mod_inverse,
    multiplicative_profile,
    ramanujan_sum,
    sqrt_mod,
    squarefree_split,
)
from .characters import (
    CharacterInfo,
    DirichletCharacter,
    character_from_label,
    character_info,
    enumerate_characters,
    evaluate,
    factor_character,
    jacobi_character,
    principal_character,
)
from .expsums import (
    SumResult,
    gauss_sum_shifted,
    kloosterman,
    salie_rhs,
    t_sum,
    weil_ratio,
)
from .flatnum import (
    FlatSet,
    FlatSumValue,
    flat_set,
    fourier_w_star,
    salie_w_star,
    w_star_sum,
    w_sum,
    zhang_count,
)

__version__ = "0.1.0"
