"""Kempf-Ness residual and the balancing flow for simultaneous conjugation.

G acts on tuples by ``g . (X_1, ..., X_r) = (g X_1 g^-1, ..., g X_r g^-1)``
and the orbit norm is ``sum_i tr(X_i* X_i)``. Because the norm is invariant
under the compact part, only conjugation by ``exp(A)`` with ``A`` Hermitian
can lower it, and

    d/ds ||exp(sA) . rho||^2 at s = 0  =  -2 Re tr(A R),
    R = sum_i (g_i* g_i - g_i g_i*).

Minimal vectors are exactly the tuples with ``R = 0``. :func:`balance_flow`
descends along ``R`` with an Armijo line search and watches the accumulated
conjugator to tell closed orbits from orbits whose infimum lies on the
boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DirectionNotInP
from .groups import (
    REAL_IMAG_TOL,
    GroupDescriptor,
    RepresentationTuple,
    random_p_direction,
)
from .linalg import (
    as_matrix,
    checked_inverse,
    condition_number,
    dagger,
    exp_hermitian,
    fnorm,
    hermitian_defect,
    hermitian_eig,
)


@dataclass(frozen=True, eq=False)
class KNResidual:
    """``R = sum g_i* g_i - sum g_i g_i*`` and its Frobenius norm."""

    matrix: np.ndarray
    norm: float


class Verdict(str, enum.Enum):
    CONVERGED = "Converged"
    BOUNDARY_DEGENERATION = "BoundaryDegeneration"
    MAX_ITERATIONS = "MaxIterations"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FlowOptions:
    """Knobs for :func:`balance_flow`.

    ``initial_step=None`` starts every line search at ``0.25 / (1 + ||R||_F)``.
    A run is declared converged once the relative residual is below
    ``residual_tol`` *and* the last accepted step is at most ``step_tol``,
    i.e. the conjugator has stopped moving. Near a boundary point the flow
    keeps taking full-length steps while the residual shrinks, so this second
    condition is what lets the conjugator blow up and be detected.
    """

    residual_tol: float = 1e-8
    max_iterations: int = 10_000
    condition_threshold: float = 1e8
    armijo_c: float = 1e-4
    initial_step: Optional[float] = None
    step_tol: float = 1e-4
    min_step: float = 1e-16

    def __post_init__(self):
        for name in ("residual_tol", "condition_threshold", "armijo_c", "step_tol", "min_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.residual_tol < 1:
            raise ValueError("residual_tol must be below 1")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.initial_step is not None and not self.initial_step > 0:
            raise ValueError("initial_step must be positive")


@dataclass(frozen=True, eq=False)
class BalanceReport:
    iterations: int
    norm_trajectory: list
    residual_trajectory: list
    conjugator_condition: float
    verdict: Verdict
    final: RepresentationTuple
    conjugator: np.ndarray = field(repr=False)
    """Accumulated ``h`` with ``final ~ h . initial``."""


def _residual_matrix(mats) -> np.ndarray:
    r = sum(dagger(g) @ g - g @ dagger(g) for g in mats)
    return 0.5 * (r + dagger(r))


def kn_residual(rho: RepresentationTuple) -> KNResidual:
    r = _residual_matrix(rho.matrices)
    return KNResidual(r, fnorm(r))


def orbit_norm(rho: RepresentationTuple) -> float:
    """Squared norm ``sum_i ||g_i||_F^2`` of the tuple."""
    return _norm2(rho.matrices)


def _norm2(mats) -> float:
    return float(sum(np.sum(np.abs(g) ** 2) for g in mats))


def relative_residual(rho: RepresentationTuple) -> float:
    return kn_residual(rho).norm / (1.0 + orbit_norm(rho))


def is_minimal_candidate(rho: RepresentationTuple, tol: float = 1e-8) -> bool:
    """True when ``||R||_F <= tol (1 + orbit_norm)``, i.e. rho is a critical point."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    return relative_residual(rho) <= tol


def check_p_direction(desc: GroupDescriptor, a) -> np.ndarray:
    """Validate that ``a`` lies in the Hermitian part of the Lie algebra of ``desc``."""
    a = as_matrix(a)
    if a.shape != (desc.n, desc.n):
        raise DirectionNotInP(f"direction must be {desc.n}x{desc.n}")
    if hermitian_defect(a) > 1e-12:
        raise DirectionNotInP("direction is not Hermitian")
    if desc.is_real and np.max(np.abs(a.imag)) > REAL_IMAG_TOL:
        raise DirectionNotInP(f"direction must be real symmetric for {desc}")
    if desc.is_special and abs(np.trace(a)) > 1e-9 * (1.0 + fnorm(a)):
        raise DirectionNotInP(f"direction must be traceless for {desc}")
    return 0.5 * (a + dagger(a))


def conjugate_by_exp(rho: RepresentationTuple, a, s: float) -> RepresentationTuple:
    """``exp(sA) . rho`` for ``A`` in the Hermitian part of the Lie algebra."""
    a = check_p_direction(rho.descriptor, a)
    e = exp_hermitian(s * a)
    einv = exp_hermitian(-s * a)
    return RepresentationTuple.from_matrices(
        rho.descriptor, [e @ g @ einv for g in rho.matrices], rho[0].tol
    )


def norm_derivative(rho: RepresentationTuple, a) -> float:
    """Analytic ``d/ds orbit_norm(exp(sA) . rho)`` at ``s = 0``: ``-2 Re tr(A R)``."""
    a = check_p_direction(rho.descriptor, a)
    return -2.0 * float(np.real(np.trace(a @ kn_residual(rho).matrix)))


def balance_flow(rho: RepresentationTuple, opts: Optional[FlowOptions] = None) -> BalanceReport:
    """Drive ``rho`` toward the Kempf-Ness set by normalized gradient descent.

    Each step conjugates by ``exp(s R / ||R||)``, with ``s`` found by Armijo
    backtracking (halving) on the orbit norm. Verdicts:

    * ``BoundaryDegeneration`` as soon as the accumulated conjugator's
      condition number exceeds ``opts.condition_threshold``;
    * ``Converged`` once the relative residual is below ``opts.residual_tol``
      and the flow has come to rest (see :class:`FlowOptions`), or the line
      search can no longer improve a residual that is already below tolerance;
    * ``MaxIterations`` when the budget runs out or the line search stalls
      above tolerance.
    """
    opts = opts or FlowOptions()
    desc = rho.descriptor
    mats = [np.array(g) for g in rho.matrices]
    h = np.eye(desc.n, dtype=np.complex128)
    f = _norm2(mats)
    r = _residual_matrix(mats)
    rnorm = fnorm(r)
    norms = [f]
    residuals = [rnorm]
    last_step = 0.0
    iterations = 0
    cond = 1.0

    while True:
        rel = rnorm / (1.0 + f)
        cond = condition_number(h)
        if cond > opts.condition_threshold:
            verdict = Verdict.BOUNDARY_DEGENERATION
            break
        if rnorm == 0.0 or (rel <= opts.residual_tol and last_step <= opts.step_tol):
            verdict = Verdict.CONVERGED
            break
        if iterations >= opts.max_iterations:
            verdict = Verdict.MAX_ITERATIONS
            break

        # In the eigenbasis of the unit direction, conjugation by exp(s A) scales
        # entry (j, k) by exp(s (w_j - w_k)), so the norm change is an exact
        # expm1 sum that stays resolvable long after f itself stops changing.
        w, v = hermitian_eig(r / rnorm)
        gaps = w[:, None] - w[None, :]
        rotated = [dagger(v) @ g @ v for g in mats]
        weights = sum(np.abs(g) ** 2 for g in rotated)
        slope = -2.0 * rnorm
        s = opts.initial_step if opts.initial_step is not None else 0.25 / (1.0 + rnorm)
        while s >= opts.min_step:
            delta = float(np.sum(weights * np.expm1(2.0 * s * gaps)))
            if delta < 0.0 and delta <= opts.armijo_c * s * slope:
                break
            s *= 0.5
        else:
            verdict = Verdict.CONVERGED if rel <= opts.residual_tol else Verdict.MAX_ITERATIONS
            break

        scale = np.exp(s * gaps)
        mats = [v @ (g * scale) @ dagger(v) for g in rotated]
        h = ((v * np.exp(s * w)) @ dagger(v)) @ h
        f += delta
        r = _residual_matrix(mats)
        rnorm = fnorm(r)
        last_step = s
        iterations += 1
        norms.append(f)
        residuals.append(rnorm)

    final = RepresentationTuple.from_matrices(desc, mats, rho[0].tol)
    return BalanceReport(
        iterations=iterations,
        norm_trajectory=norms,
        residual_trajectory=residuals,
        conjugator_condition=cond,
        verdict=verdict,
        final=final,
        conjugator=h,
    )


def conjugation_witness(rho: RepresentationTuple, report: BalanceReport) -> float:
    """Relative mismatch ``max_i ||h g_i h^-1 - final_i|| / (1 + ||final_i||)``."""
    h = report.conjugator
    hinv = checked_inverse(h)
    return max(
        fnorm(h @ g @ hinv - f) / (1.0 + fnorm(f))
        for g, f in zip(rho.matrices, report.final.matrices)
    )


_CERTIFICATE_STEPS = (-1e-1, -1e-2, 1e-2, 1e-1)


def minimality_certificate(rho: RepresentationTuple, directions: int, seed) -> float:
    """Largest norm decrease found by probing random unit directions.

    For each of ``directions`` random unit ``A`` and each ``s`` in
    ``{+-1e-2, +-1e-1}`` this measures ``orbit_norm(rho) -
    orbit_norm(exp(sA) . rho)``. A value at most ``1e-6 * orbit_norm(rho)``
    certifies (locally) that rho is a minimal vector.
    """
    if directions < 1:
        raise ValueError("need at least one direction")
    rng = np.random.default_rng(seed)
    desc = rho.descriptor
    mats = rho.matrices
    base = _norm2(mats)
    worst = -math.inf
    for _ in range(directions):
        a = random_p_direction(desc, rng)
        if not np.any(a):
            worst = max(worst, 0.0)
            continue
        for s in _CERTIFICATE_STEPS:
            e = exp_hermitian(s * a)
            einv = exp_hermitian(-s * a)
            worst = max(worst, base - _norm2([e @ g @ einv for g in mats]))
    return worst
