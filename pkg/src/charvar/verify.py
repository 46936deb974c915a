"""Randomized property suites behind ``charvar verify``.

Every property draws its own samples from a seeded generator, measures a
residual per sample and compares the worst one with a fixed bound. Suites
never raise on a failed property; an exception inside a property counts as
a failure and is reported with its message.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import characters, groups, kempfness, linalg, retraction
from .groups import GroupElement, RepresentationTuple, parse_descriptor

DESCRIPTORS = ("GL2R", "SL2R", "GL2C", "SL2C", "SL3R", "SL3C")
RETRACTION_TIMES = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    worst: float
    bound: float
    samples: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: worst {self.worst:.3e} (bound {self.bound:.1e}, {self.samples} samples)"
        return text + (f" {self.detail}" if self.detail else "")


def _rng(seed: int, name: str) -> np.random.Generator:
    # independent stream per property so suites can run in any order
    return np.random.default_rng([seed, sum(map(ord, name)) * 7919 + len(name)])


def _random_hermitian(rng, n: int, max_norm: float, real: bool = False) -> np.ndarray:
    z = rng.standard_normal((n, n)) + (0 if real else 1j * rng.standard_normal((n, n)))
    x = 0.5 * (z + z.conj().T)
    return x * (max_norm * rng.uniform() / max(linalg.fnorm(x), 1e-300))


def _random_tuple(rng, i: int, spread: float = 2.0, max_rank: int = 4) -> RepresentationTuple:
    desc = DESCRIPTORS[i % len(DESCRIPTORS)]
    return groups.sample_tuple(desc, 1 + i % max_rank, spread, rng)


def _compact_tuple(rng, i: int) -> RepresentationTuple:
    desc = parse_descriptor(DESCRIPTORS[i % len(DESCRIPTORS)])
    return RepresentationTuple(
        desc, tuple(groups.sample_compact(desc, rng) for _ in range(1 + i % 4))
    )


def _max_norm(rho: RepresentationTuple) -> float:
    return max(linalg.fnorm(m) for m in rho.matrices)


# --------------------------------------------------------------------- linalg


def linalg_exp_log_roundtrip(samples, seed):
    rng = _rng(seed, "linalg.exp_log_roundtrip")
    worst = 0.0
    for i in range(samples):
        x = _random_hermitian(rng, 1 + i % 4, 2.0, real=i % 2 == 0)
        worst = max(worst, linalg.fnorm(linalg.log_posdef(linalg.exp_hermitian(x)) - x))
    return worst, 1e-9


def linalg_polar_reconstruction(samples, seed):
    rng = _rng(seed, "linalg.polar_reconstruction")
    worst = 0.0
    for i in range(samples):
        n = 1 + i % 4
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        u, p = linalg.polar_decompose(g)
        eye = np.eye(n)
        worst = max(
            worst,
            linalg.fnorm(u @ p - g) / (1.0 + linalg.fnorm(g)),
            linalg.fnorm(linalg.dagger(u) @ u - eye),
        )
    return worst, 1e-10


def linalg_power_semigroup(samples, seed):
    rng = _rng(seed, "linalg.power_semigroup")
    worst = 0.0
    for i in range(samples):
        p = linalg.exp_hermitian(_random_hermitian(rng, 1 + i % 4, 2.0))
        s, t = rng.uniform(-1.0, 1.0, size=2)
        lhs = linalg.posdef_power(p, s) @ linalg.posdef_power(p, t)
        worst = max(worst, linalg.fnorm(lhs - linalg.posdef_power(p, s + t)))
    return worst, 1e-9


def linalg_eigen_residual(samples, seed):
    rng = _rng(seed, "linalg.eigen_residual")
    worst = 0.0
    for i in range(samples):
        n = 1 + i % 4
        m = _random_hermitian(rng, n, 10.0)
        w, v = linalg.hermitian_eig(m)
        if linalg.fnorm(linalg.dagger(v) @ v - np.eye(n)) > 1e-10:
            return math.inf, 1e-9
        worst = max(worst, linalg.fnorm(m @ v - v * w) / (1.0 + linalg.fnorm(m)))
    return worst, 1e-9


def linalg_eig_vs_lapack(samples, seed):
    rng = _rng(seed, "linalg.eig_vs_lapack")
    worst = 0.0
    for i in range(samples):
        m = _random_hermitian(rng, 1 + i % 4, 10.0)
        ours = linalg.hermitian_eig(m).eigenvalues
        worst = max(worst, float(np.max(np.abs(ours - np.linalg.eigvalsh(m)))) / (1.0 + linalg.fnorm(m)))
    return worst, 1e-10


# --------------------------------------------------------------------- groups


def _group_samples(rng, samples, spread=2.0):
    for i in range(samples):
        desc = DESCRIPTORS[i % len(DESCRIPTORS)]
        yield groups.sample_group(desc, spread, rng)


def groups_involution(samples, seed):
    worst = 0.0
    for g in _group_samples(_rng(seed, "groups.involution"), samples):
        back = groups.cartan_involution(groups.cartan_involution(g))
        worst = max(worst, linalg.fnorm(back.matrix - g.matrix) / (1.0 + linalg.fnorm(g.matrix)))
    return worst, 1e-10


def groups_fixed_points(samples, seed):
    """K = Fix(Theta), checked on compact samples and on samples at distance 1 from K."""
    rng = _rng(seed, "groups.fixed_points")
    worst = 0.0
    for i in range(samples):
        desc = parse_descriptor(DESCRIPTORS[i % len(DESCRIPTORS)])
        k = groups.sample_compact(desc, rng)
        off = linalg.fnorm(groups.cartan_involution(k).matrix - k.matrix) / (1.0 + linalg.fnorm(k.matrix))
        if not groups.in_maximal_compact(k)[0]:
            return math.inf, 1e-8
        worst = max(worst, off)
        x = groups.random_p_direction(desc, rng, 1.0)
        if not np.any(x):
            continue
        g = GroupElement(desc, k.matrix @ linalg.exp_hermitian(x))
        moved = linalg.fnorm(groups.cartan_involution(g).matrix - g.matrix) / (1.0 + linalg.fnorm(g.matrix))
        if groups.in_maximal_compact(g)[0] or moved <= 1e-8:
            return math.inf, 1e-8
    return worst, 1e-8


def groups_decomposition_uniqueness(samples, seed):
    rng = _rng(seed, "groups.decomposition_uniqueness")
    worst = 0.0
    for i in range(samples):
        desc = parse_descriptor(DESCRIPTORS[i % len(DESCRIPTORS)])
        k = groups.sample_compact(desc, rng)
        x = groups.random_p_direction(desc, rng, 2.0 * rng.uniform())
        g = GroupElement(desc, k.matrix @ linalg.exp_hermitian(x))
        pair = groups.cartan_decompose(g)
        worst = max(worst, linalg.fnorm(pair.k.matrix - k.matrix), linalg.fnorm(pair.X - x))
    return worst, 1e-8


def groups_sl_closure(samples, seed):
    rng = _rng(seed, "groups.sl_closure")
    worst = 0.0
    special = [d for d in DESCRIPTORS if d.startswith("SL")]
    for i in range(samples):
        g = groups.sample_group(special[i % len(special)], 2.0, rng)
        outputs = [
            g,
            groups.cartan_involution(g),
            groups.cartan_decompose(g).k,
            retraction.retract_element(g, rng.uniform()),
        ]
        worst = max(worst, *(abs(h.det - 1.0) for h in outputs))
    return worst, 1e-9


# ----------------------------------------------------------------- retraction


def retraction_endpoint(samples, seed):
    """Every component of f_1(rho) is in K; ``samples`` tuples per descriptor."""
    rng = _rng(seed, "retraction.endpoint")
    worst = 0.0
    for desc in DESCRIPTORS:
        for i in range(samples):
            rho = groups.sample_tuple(desc, 1 + i % 4, 2.0, rng)
            for g in retraction.retract_tuple(rho, 1.0):
                m = g.matrix
                worst = max(worst, linalg.fnorm(linalg.dagger(m) @ m - np.eye(g.n)))
                if g.descriptor.is_special:
                    worst = max(worst, abs(g.det - 1.0))
    return worst, 1e-9


def retraction_identity_at_zero(samples, seed):
    rng = _rng(seed, "retraction.identity_at_zero")
    worst = 0.0
    for i in range(samples):
        rho = _random_tuple(rng, i)
        for a, b in zip(retraction.retract_tuple(rho, 0.0), rho):
            worst = max(worst, linalg.fnorm(a.matrix - b.matrix))
    return worst, 1e-10


def retraction_compact_fixed(samples, seed):
    rng = _rng(seed, "retraction.compact_fixed")
    worst = 0.0
    for i in range(samples):
        rho = _compact_tuple(rng, i)
        for t in RETRACTION_TIMES:
            for a, b in zip(retraction.retract_tuple(rho, t), rho):
                worst = max(worst, linalg.fnorm(a.matrix - b.matrix))
    return worst, 1e-10


def retraction_equivariance(samples, seed):
    rng = _rng(seed, "retraction.equivariance")
    worst = 0.0
    for i in range(samples):
        rho = _random_tuple(rng, i)
        h = groups.sample_compact(rho.descriptor, rng)
        t = rng.uniform()
        worst = max(worst, retraction.check_equivariance(rho, h, t) / (1.0 + _max_norm(rho)))
    return worst, 1e-9


def retraction_flow_law(samples, seed):
    rng = _rng(seed, "retraction.flow_law")
    worst = 0.0
    for i in range(samples):
        g = groups.sample_group(DESCRIPTORS[i % len(DESCRIPTORS)], 2.0, rng)
        s, t = rng.uniform(size=2)
        lhs = retraction.retract_element(retraction.retract_element(g, t), s)
        rhs = retraction.retract_element(g, retraction.flow_time(s, t))
        worst = max(worst, linalg.fnorm(lhs.matrix - rhs.matrix))
    return worst, 1e-9


def retraction_group_closure(samples, seed):
    rng = _rng(seed, "retraction.group_closure")
    worst = 0.0
    for i in range(samples):
        g = groups.sample_group(DESCRIPTORS[i % len(DESCRIPTORS)], 2.0, rng)
        image = retraction.retract_element(g, rng.uniform())
        worst = max(worst, groups.contains(g.descriptor, image.matrix)[1])
    return worst, 1e-9


def retraction_literal_formula(samples, seed):
    rng = _rng(seed, "retraction.literal_formula")
    worst = 0.0
    for i in range(samples):
        g = groups.sample_group(DESCRIPTORS[i % len(DESCRIPTORS)], 2.0, rng)
        t = rng.uniform()
        a = retraction.retract_element(g, t).matrix
        b = retraction.retract_literal(g, t).matrix
        worst = max(worst, linalg.fnorm(a - b))
    return worst, 1e-9


# ----------------------------------------------------------------- kempf-ness

FLOW_OPTIONS = kempfness.FlowOptions(max_iterations=2000)


@lru_cache(maxsize=4)
def _flow_runs(samples: int, seed: int):
    rng = _rng(seed, "flow_runs")
    runs = []
    for i in range(samples):
        rho = _random_tuple(rng, i, spread=1.0, max_rank=3)
        runs.append((rho, kempfness.balance_flow(rho, FLOW_OPTIONS)))
    return runs


def _trace_drift(rho, final, max_length=4) -> float:
    words = characters.word_list_for(rho, max_length)
    before = characters.trace_coordinates(rho, words).values
    after = characters.trace_coordinates(final, words).values
    return float(np.max(np.abs(before - after) / (1.0 + np.abs(before))))


def kempfness_residual_equivariance(samples, seed):
    rng = _rng(seed, "kempfness.residual_equivariance")
    worst = 0.0
    for i in range(samples):
        rho = _random_tuple(rng, i)
        h = groups.sample_compact(rho.descriptor, rng).matrix
        lhs = kempfness.kn_residual(rho.conjugated(h)).matrix
        rhs = h @ kempfness.kn_residual(rho).matrix @ linalg.dagger(h)
        worst = max(worst, linalg.fnorm(lhs - rhs) / (1.0 + kempfness.orbit_norm(rho)))
    return worst, 1e-9


def kempfness_residual_trace(samples, seed):
    rng = _rng(seed, "kempfness.residual_trace")
    worst = 0.0
    for i in range(samples):
        res = kempfness.kn_residual(_random_tuple(rng, i))
        worst = max(worst, abs(np.trace(res.matrix)) / (1.0 + res.norm))
    return worst, 1e-9


def kempfness_descent(samples, seed):
    """Largest change between consecutive recorded orbit norms (must be <= 0)."""
    worst = -math.inf
    for _, report in _flow_runs(samples, seed):
        norms = report.norm_trajectory
        if report.iterations and not norms[-1] < norms[0]:
            return math.inf, 0.0
        if len(norms) > 1:
            worst = max(worst, float(np.max(np.diff(norms))))
    return (worst if math.isfinite(worst) else 0.0), 0.0


def kempfness_flow_invariants(samples, seed):
    worst = 0.0
    for rho, report in _flow_runs(samples, seed):
        worst = max(worst, _trace_drift(rho, report.final))
    return worst, 1e-7


def kempfness_compact_in_kn(samples, seed):
    rng = _rng(seed, "kempfness.compact_in_kn")
    worst = 0.0
    for i in range(samples):
        rho = _compact_tuple(rng, i)
        if not kempfness.is_minimal_candidate(rho, 1e-10):
            return math.inf, 1e-12
        worst = max(worst, kempfness.kn_residual(rho).norm / (1.0 + kempfness.orbit_norm(rho)))
    return worst, 1e-12


def kempfness_gradient_identity(samples, seed, delta=1e-5):
    rng = _rng(seed, "kempfness.gradient_identity")
    worst = 0.0
    for i in range(samples):
        rho = _random_tuple(rng, i, spread=1.0)
        a = groups.random_p_direction(rho.descriptor, rng)
        plus = kempfness.orbit_norm(kempfness.conjugate_by_exp(rho, a, delta))
        minus = kempfness.orbit_norm(kempfness.conjugate_by_exp(rho, a, -delta))
        fd = (plus - minus) / (2.0 * delta)
        exact = kempfness.norm_derivative(rho, a)
        worst = max(worst, abs(fd - exact) / (1.0 + abs(exact)))
    return worst, 1e-5


# ----------------------------------------------------------------- characters


def characters_conjugation_invariance(samples, seed):
    rng = _rng(seed, "characters.conjugation_invariance")
    worst = 0.0
    for i in range(samples):
        rho = _random_tuple(rng, i, spread=1.0)
        h = groups.sample_group(rho.descriptor, 1.0, rng)
        words = characters.word_list_for(rho, 3)
        before = characters.trace_coordinates(rho, words).values
        after = characters.trace_coordinates(rho.conjugated(h), words).values
        worst = max(worst, float(np.max(np.abs(before - after))) / (1.0 + float(np.max(np.abs(before)))))
    return worst, 1e-9


def _random_word(rng, rank: int, length: int) -> characters.FreeWord:
    letters = [int(rng.integers(1, rank + 1)) * (1 if rng.uniform() < 0.5 else -1) for _ in range(length)]
    return characters.reduce_word(letters, rank)


def characters_cyclic_invariance(samples, seed):
    rng = _rng(seed, "characters.cyclic_invariance")
    worst = 0.0
    for i in range(samples):
        rho = _random_tuple(rng, i, spread=1.0)
        w1 = _random_word(rng, rho.rank, 1 + i % 3)
        w2 = _random_word(rng, rho.rank, 1 + (i // 3) % 3)
        a, b = characters.trace_coordinates(rho, [w1 * w2, w2 * w1]).values
        worst = max(worst, abs(a - b) / (1.0 + abs(a)))
    return worst, 1e-9


def characters_homomorphism(samples, seed):
    rng = _rng(seed, "characters.homomorphism")
    worst = 0.0
    for i in range(samples):
        rho = _random_tuple(rng, i, spread=1.0)
        w1 = _random_word(rng, rho.rank, 1 + i % 4)
        w2 = _random_word(rng, rho.rank, 1 + (i // 4) % 4)

        def ev(w):
            return characters.evaluate_word(rho, w).matrix

        prod = ev(w1) @ ev(w2)
        worst = max(
            worst,
            linalg.fnorm(ev(w1 * w2) - prod) / (1.0 + linalg.fnorm(prod)),
            linalg.fnorm(ev(w1) @ ev(w1.inverse()) - np.eye(rho.descriptor.n)),
        )
    return worst, 1e-9


def characters_endpoint_realness(samples, seed):
    """Traces of f_1(rho) for SL(2,R) and SL(2,C) tuples: real, and at most 2 for SU(2)."""
    rng = _rng(seed, "characters.endpoint_realness")
    worst = 0.0
    for i in range(samples):
        desc = ("SL2R", "SL2C")[i % 2]
        rho = groups.sample_tuple(desc, 1 + i % 3, 2.0, rng)
        end = retraction.retract_tuple(rho, 1.0)
        values = characters.trace_coordinates(end, characters.word_list_for(end, 3)).values
        worst = max(worst, float(np.max(np.abs(values.imag))))
        worst = max(worst, float(np.max(np.abs(values))) - 2.0)
    return worst, 1e-9


def characters_flow_invariance(samples, seed):
    worst = 0.0
    for rho, report in _flow_runs(samples, seed):
        worst = max(worst, _trace_drift(rho, report.final))
    return worst, 1e-7


SUITES: dict[str, dict[str, Callable]] = {
    "linalg": {
        "linalg.eig_vs_lapack": linalg_eig_vs_lapack,
        "linalg.eigen_residual": linalg_eigen_residual,
        "linalg.exp_log_roundtrip": linalg_exp_log_roundtrip,
        "linalg.polar_reconstruction": linalg_polar_reconstruction,
        "linalg.power_semigroup": linalg_power_semigroup,
    },
    "groups": {
        "groups.decomposition_uniqueness": groups_decomposition_uniqueness,
        "groups.fixed_points": groups_fixed_points,
        "groups.involution": groups_involution,
        "groups.sl_closure": groups_sl_closure,
    },
    "retraction": {
        "retraction.compact_fixed": retraction_compact_fixed,
        "retraction.endpoint": retraction_endpoint,
        "retraction.equivariance": retraction_equivariance,
        "retraction.flow_law": retraction_flow_law,
        "retraction.group_closure": retraction_group_closure,
        "retraction.identity_at_zero": retraction_identity_at_zero,
        "retraction.literal_formula": retraction_literal_formula,
    },
    "kempfness": {
        "kempfness.compact_in_kn": kempfness_compact_in_kn,
        "kempfness.descent": kempfness_descent,
        "kempfness.flow_invariants": kempfness_flow_invariants,
        "kempfness.gradient_identity": kempfness_gradient_identity,
        "kempfness.residual_equivariance": kempfness_residual_equivariance,
        "kempfness.residual_trace": kempfness_residual_trace,
    },
    "characters": {
        "characters.conjugation_invariance": characters_conjugation_invariance,
        "characters.cyclic_invariance": characters_cyclic_invariance,
        "characters.endpoint_realness": characters_endpoint_realness,
        "characters.flow_invariance": characters_flow_invariance,
        "characters.homomorphism": characters_homomorphism,
    },
}


def run_property(name: str, fn: Callable, samples: int, seed: int) -> PropertyResult:
    try:
        worst, bound = fn(samples, seed)
    except Exception as exc:  # reported, not raised
        return PropertyResult(name, False, math.inf, math.nan, samples, f"error: {exc!r}")
    return PropertyResult(name, bool(worst <= bound), float(worst), float(bound), samples)


def run_suite(suite: str, samples: int, seed: int) -> list[PropertyResult]:
    """Run one suite (or ``"all"``); results are sorted by property name."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if suite == "all":
        selected = {k: v for table in SUITES.values() for k, v in table.items()}
    elif suite in SUITES:
        selected = SUITES[suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES) + ['all']}")
    _flow_runs.cache_clear()
    results = [run_property(name, selected[name], samples, seed) for name in sorted(selected)]
    _flow_runs.cache_clear()
    return results
