"""Identity suites: both sides of each exact identity, compared per instance.

The definition side is always a direct sum (``t_sum_table``, masks over
the flat set, direct Gauss sums); the other side goes through the
formula under test. Each record keeps the worst sample of its instance.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from ..arith import as_modulus, coprime_splits, divisors, mod_inverse, multiplicative_profile, ramanujan_sum
from ..characters import character_group, jacobi_character, root_table
from ..errors import InvalidConfig, UnknownSuite
from ..expsums import salie_rhs, t_sum_table
from ..flatnum import fourier_w_star_table, salie_w_star, w_star_mask, flat_mask
from .config import SweepConfig, h_values, sample_pairs, sample_residues, sample_unit_pairs
from .report import RatioRecord, Report

SUITES = ("lemma2", "lemma3", "lemma5", "lemma6", "fourier", "salie-closed", "symmetry")

# (default q_max, default tol, tol scales with q)
SUITE_DEFAULTS = {
    "lemma2": (300, 1e-7, True),
    "lemma3": (500, 1e-7, True),
    "lemma5": (400, 1e-7, True),
    "lemma6": (400, 1e-7, True),
    "fourier": (300, 1e-7, True),
    "salie-closed": (500, 1e-7, True),
    "symmetry": (500, 1e-9, False),
}

ZERO_CASE_TOL = 1e-9


def run_per_modulus(fn, qs, cfg: SweepConfig) -> list[RatioRecord]:
    """Apply ``fn(q, cfg)`` to each modulus; order-independent output."""
    workers = min(cfg.worker_count(), max(1, len(qs)))
    if workers == 1:
        chunks = [fn(q, cfg) for q in qs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(partial(fn, cfg=cfg), qs, chunksize=max(1, len(qs) // (8 * workers))))
    return [rec for chunk in chunks for rec in chunk]


def selected_labels(q: int, selector: str) -> np.ndarray:
    """Label rows chosen by a character selector, possibly empty."""
    group = character_group(q)
    k = len(group.orders)
    if selector == "all":
        return group.all_labels()
    if selector == "principal":
        return np.zeros((1, k), dtype=np.int64)
    if selector == "jacobi":
        if q % 2 == 0:
            return np.zeros((0, k), dtype=np.int64)
        return np.array([jacobi_character(q).labels], dtype=np.int64).reshape(1, k)
    if selector.startswith("index:"):
        try:
            labels = tuple(int(x) for x in selector[6:].split(",") if x.strip())
        except ValueError:
            raise InvalidConfig(f"bad character selector {selector!r}") from None
        if len(labels) != k or any(not 0 <= a < o for a, o in zip(labels, group.orders)):
            return np.zeros((0, k), dtype=np.int64)
        return np.array([labels], dtype=np.int64).reshape(1, k)
    raise InvalidConfig(f"unknown character selector {selector!r}")


def _tol(cfg: SweepConfig, q: int, scaled: bool) -> float:
    return cfg.tol * max(q, 1) if scaled else cfg.tol


def _worst(lhs: np.ndarray, rhs: np.ndarray):
    """Per column: (deviation, |lhs|, |rhs|, row) at the worst row."""
    dev = np.abs(lhs - rhs)
    row = np.argmax(dev, axis=0)
    cols = np.arange(dev.shape[1])
    return dev[row, cols], np.abs(lhs[row, cols]), np.abs(rhs[row, cols]), row


def _labels_tuple(row) -> tuple[int, ...]:
    return tuple(int(a) for a in row)


def _lemma2(q: int, cfg: SweepConfig) -> list[RatioRecord]:
    group = character_group(q)
    labels = selected_labels(q, cfg.chi)
    if not len(labels):
        return []
    values = group.value_matrix(labels)
    pairs = sample_pairs(cfg.seed, q, cfg.samples)
    ms = np.array([m for m, _ in pairs])
    ns = np.array([n for _, n in pairs])
    tol = _tol(cfg, q, True)
    out = []
    for d, ell in coprime_splits(q):
        lhs = t_sum_table(q, d, ms, ns, values)
        sub = character_group(d)
        kloost = t_sum_table(d, d, ms, ns, sub.value_matrix(sub.all_labels()))
        mask = group.component_mask(d)
        idx1 = sub.label_index(labels[:, mask])
        chi2_principal = ~np.any(labels[:, ~mask], axis=1)
        phi_ell = multiplicative_profile(ell)[0]
        rhs = np.where(chi2_principal, phi_ell * kloost[:, idx1], 0)
        dev, a, b, row = _worst(lhs, rhs)
        for j in range(len(labels)):
            i = int(row[j])
            out.append(
                RatioRecord(
                    q, _labels_tuple(labels[j]), None, None, float(a[j]), float(b[j]), float(dev[j]),
                    (("d", d), ("m", int(ms[i])), ("n", int(ns[i]))),
                    asserted=True, passed=bool(dev[j] < tol),
                )
            )
    return out


def _lemma3(q: int, cfg: SweepConfig) -> list[RatioRecord]:
    mod = as_modulus(q)
    if q < 3 or q % 2 == 0 or not mod.is_squarefree:
        return []
    chi = jacobi_character(mod)
    pairs = sample_unit_pairs(cfg.seed, q, cfg.samples, chi.group.units)
    ms = np.array([m for m, _ in pairs])
    ns = np.array([n for _, n in pairs])
    lhs = t_sum_table(q, q, ms, ns, chi.unit_values[None, :])
    rhs = np.array([[salie_rhs(int(m), int(n), q).value] for m, n in pairs])
    dev, a, b, row = _worst(lhs, rhs)
    i = int(row[0])
    return [
        RatioRecord(
            q, chi.labels, None, None, float(a[0]), float(b[0]), float(dev[0]),
            (("m", int(ms[i])), ("n", int(ns[i]))),
            asserted=True, passed=bool(dev[0] < _tol(cfg, q, True)),
        )
    ]


def _lemma5(q: int, cfg: SweepConfig) -> list[RatioRecord]:
    mod = as_modulus(q)
    if mod.q2 == 1:
        return []
    group = character_group(q)
    labels = selected_labels(q, cfg.chi)
    if not len(labels):
        return []
    q1, q2 = mod.q1, mod.q2
    values = group.value_matrix(labels)
    pairs = sample_pairs(cfg.seed, q, cfg.samples)
    ms = np.array([m for m, _ in pairs], dtype=np.int64)
    ns = np.array([n for _, n in pairs], dtype=np.int64)
    g1, g2 = character_group(q1), character_group(q2)
    mask1 = group.component_mask(q1)
    lab1, lab2 = labels[:, mask1], labels[:, ~mask1]
    idx1, idx2 = g1.label_index(lab1), g2.label_index(lab2)
    all1, all2 = g1.all_labels(), g2.all_labels()
    vals1, vals2 = g1.value_matrix(all1), g2.value_matrix(all2)
    # chi1(q2) * chi2(q1)
    twist = g1.value_at(all1, q2)[idx1] * g2.value_at(all2, q1)[idx2]
    inv_q2sq = mod_inverse(q2 * q2 % q1, q1) if q1 > 1 else 0
    inv_q1sq = mod_inverse(q1 * q1 % q2, q2)
    tol = _tol(cfg, q, True)
    out = []
    for d in divisors(q):
        d1 = math.gcd(d, q1)
        d2 = d // d1
        l1, l2 = q1 // d1, q2 // d2
        lhs = t_sum_table(q, d, ms, ns, values)
        m1, n1 = ms * l2, ns * (inv_q2sq * l2 % max(q1, 1))
        m2, n2 = ms * l1, ns * (inv_q1sq * l1 % q2)
        t1 = t_sum_table(q1, d1, m1, n1, vals1)
        t2 = t_sum_table(q2, d2, m2, n2, vals2)
        product = twist * t1[:, idx1] * t2[:, idx2]
        # case form: split chi1 into chi' mod d1 and chi'' mod l1
        gd1 = character_group(d1)
        cmask = g1.component_mask(d1)
        chi_pp_principal = ~np.any(lab1[:, ~cmask], axis=1)
        kl = t_sum_table(d1, d1, m1, n1, gd1.value_matrix(gd1.all_labels()))
        phi_l1 = multiplicative_profile(l1)[0]
        case = np.where(
            chi_pp_principal,
            twist * phi_l1 * kl[:, gd1.label_index(lab1[:, cmask])] * t2[:, idx2],
            0,
        )
        dev_p, a, b, row = _worst(lhs, product)
        dev_c = np.abs(lhs - case).max(axis=0)
        for j in range(len(labels)):
            i = int(row[j])
            dev = max(float(dev_p[j]), float(dev_c[j]))
            out.append(
                RatioRecord(
                    q, _labels_tuple(labels[j]), None, None, float(a[j]), float(b[j]), dev,
                    (
                        ("d", d),
                        ("m", int(ms[i])),
                        ("n", int(ns[i])),
                        ("dev_product", float(dev_p[j])),
                        ("dev_case", float(dev_c[j])),
                        ("vanishing", bool(not chi_pp_principal[j])),
                    ),
                    asserted=True, passed=dev < tol,
                )
            )
    return out


def _gauss_table(q: int, ns: np.ndarray, values: np.ndarray) -> np.ndarray:
    """G(n, chi) by direct summation: rows n, columns characters."""
    units = character_group(q).units
    phases = root_table(q)[(ns.reshape(-1, 1) % q) * units % q]
    return phases @ values.T


def _lemma6(q: int, cfg: SweepConfig) -> list[RatioRecord]:
    if q < 2:
        return []
    mod = as_modulus(q)
    group = character_group(q)
    ns = np.array(sample_residues(cfg.seed, q, cfg.samples), dtype=np.int64)
    tol = _tol(cfg, q, True)
    out = []
    for q1, q2 in coprime_splits(mod):
        if not as_modulus(q1).is_squarefree or q1 == 1:
            continue
        g1, g2 = character_group(q1), character_group(q2)
        all1 = g1.all_labels()
        mask1 = group.component_mask(q1)
        labels = np.zeros((len(all1), len(group.orders)), dtype=np.int64)
        labels[:, mask1] = all1
        keep = np.any(labels, axis=1)  # chi non-principal
        if cfg.chi != "all":
            chosen = {tuple(r) for r in selected_labels(q, cfg.chi)}
            keep &= np.array([tuple(r) in chosen for r in labels], dtype=bool)
        if not keep.any():
            continue
        labels, all1 = labels[keep], all1[keep]
        g_full = _gauss_table(q, ns, group.value_matrix(labels))
        g_one = _gauss_table(q1, ns, g1.value_matrix(all1))
        g_two = _gauss_table(q2, ns, g2.value_matrix(np.zeros((1, len(g2.orders)), dtype=np.int64)))[:, 0]
        chi1_q2 = g1.value_at(all1, q2)
        # multiplicativity (chi2 principal, so chi2(q1) = 1)
        mult = chi1_q2[None, :] * g_one * g_two[:, None]
        ram = np.array([ramanujan_sum(int(n), q2) for n in ns], dtype=float)
        dev_ram = float(np.abs(g_two - ram).max())
        # combined closed form, valid for primitive chi1
        primitive = g1.primitive_mask(all1)
        tau1 = _gauss_table(q1, np.array([1]), g1.value_matrix(all1))[0]
        chi1_n = np.stack([g1.value_at(all1, int(n)) for n in ns])
        closed = np.conj(chi1_n) * (chi1_q2 * tau1)[None, :] * ram[:, None]
        dev_m, a, b, row = _worst(g_full, mult)
        dev_c = np.where(primitive, np.abs(g_full - closed).max(axis=0), 0.0)
        for j in range(len(labels)):
            i = int(row[j])
            dev = max(float(dev_m[j]), dev_ram, float(dev_c[j]))
            out.append(
                RatioRecord(
                    q, _labels_tuple(labels[j]), None, None, float(a[j]), float(b[j]), dev,
                    (
                        ("q1", q1),
                        ("q2", q2),
                        ("n", int(ns[i])),
                        ("dev_multiplicative", float(dev_m[j])),
                        ("dev_ramanujan", dev_ram),
                        ("dev_closed", float(dev_c[j])),
                        ("primitive", bool(primitive[j])),
                    ),
                    asserted=True, passed=dev < tol,
                )
            )
    return out


def _fourier(q: int, cfg: SweepConfig) -> list[RatioRecord]:
    if q < 2:
        return []
    group = character_group(q)
    labels = selected_labels(q, cfg.chi)
    labels = labels[np.any(labels, axis=1)]
    if not len(labels):
        return []
    values = group.value_matrix(labels)
    hs = h_values(q, cfg.h_grid)
    rhs = fourier_w_star_table(q, hs, values)
    tol = _tol(cfg, q, True)
    out = []
    for k, h in enumerate(hs):
        lhs = values[:, w_star_mask(q, h)].sum(axis=1)
        dev = np.abs(lhs - rhs[k])
        for j in range(len(labels)):
            out.append(
                RatioRecord(
                    q, _labels_tuple(labels[j]), h, None, float(abs(lhs[j])), float(abs(rhs[k, j])),
                    float(dev[j]), asserted=True, passed=bool(dev[j] < tol),
                )
            )
    return out


def _salie_closed(q: int, cfg: SweepConfig) -> list[RatioRecord]:
    mod = as_modulus(q)
    if q < 3 or q % 2 == 0 or not mod.is_squarefree:
        return []
    chi = jacobi_character(mod)
    zero_case = any(p % 4 == 3 for p in mod.primes)
    tol = ZERO_CASE_TOL * q if zero_case else _tol(cfg, q, True)
    out = []
    for h in h_values(q, cfg.h_grid):
        lhs = complex(chi.unit_values[w_star_mask(q, h)].sum())
        rhs = salie_w_star(h, q).w
        dev = abs(lhs - rhs)
        if zero_case:
            dev = max(dev, abs(lhs))
        out.append(
            RatioRecord(
                q, chi.labels, h, None, abs(lhs), abs(rhs), dev, (("zero_case", zero_case),),
                asserted=True, passed=dev < tol,
            )
        )
    return out


def _symmetry(q: int, cfg: SweepConfig) -> list[RatioRecord]:
    if q < 3:
        return []
    group = character_group(q)
    labels = selected_labels(q, cfg.chi)
    if not len(labels):
        return []
    odd = group.value_at(labels, q - 1).real < 0
    labels = labels[odd]
    if not len(labels):
        return []
    values = group.value_matrix(labels)
    tol = _tol(cfg, q, False)
    out = []
    for h in h_values(q, cfg.h_grid):
        w = np.abs(values[:, flat_mask(q, h)].sum(axis=1))
        for j in range(len(labels)):
            out.append(
                RatioRecord(
                    q, _labels_tuple(labels[j]), h, None, float(w[j]), 0.0, float(w[j]),
                    asserted=True, passed=bool(w[j] < tol),
                )
            )
    return out


_SUITE_FUNCS = {
    "lemma2": _lemma2,
    "lemma3": _lemma3,
    "lemma5": _lemma5,
    "lemma6": _lemma6,
    "fourier": _fourier,
    "salie-closed": _salie_closed,
    "symmetry": _symmetry,
}


def run_identity_suite(name: str, config: SweepConfig | None = None) -> Report:
    """Run one identity suite and collect a per-instance deviation report."""
    if name not in _SUITE_FUNCS:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    q_max, tol, scaled = SUITE_DEFAULTS[name]
    cfg = (config or SweepConfig()).with_defaults(q_max, tol)
    records = run_per_modulus(_SUITE_FUNCS[name], cfg.moduli(), cfg)
    params = cfg.params()
    params["tol_scaled_by_q"] = scaled
    return Report(name, "identity", params, records)
