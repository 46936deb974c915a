"""Deformation retraction of G onto its maximal compact K.

With ``g = k exp(X)`` the homotopy ``f_t(g) = g (Theta(g)^-1 g)^(-t/2)``
equals ``k exp((1 - t) X)``: it slides ``g`` along the non-compact direction
until only the compact factor is left. Tuples are retracted componentwise,
which commutes with simultaneous conjugation by K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotInCompact, ParameterOutOfRange
from .groups import (
    CartanPair,
    GroupElement,
    RepresentationTuple,
    cartan_decompose,
    cartan_involution,
    in_maximal_compact,
)
from .linalg import checked_inverse, fnorm, posdef_power


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"retraction parameter must lie in [0, 1], got {t}")
    return t


def _from_pair(pair: CartanPair, t: float) -> GroupElement:
    return GroupElement(pair.descriptor, pair.compose(1.0 - t), pair.k.tol)


def retract_element(g: GroupElement, t: float) -> GroupElement:
    """``f_t(g) = k exp((1 - t) X)`` for ``0 <= t <= 1``."""
    t = _check_t(t)
    return _from_pair(cartan_decompose(g), t)


def retract_literal(g: GroupElement, t: float) -> GroupElement:
    """``f_t`` evaluated straight from ``g (Theta(g)^-1 g)^(-t/2)``.

    Independent of :func:`cartan_decompose`; used to cross-check
    :func:`retract_element`.
    """
    t = _check_t(t)
    theta_inv = checked_inverse(cartan_involution(g).matrix)
    return GroupElement(g.descriptor, g.matrix @ posdef_power(theta_inv @ g.matrix, -t / 2), g.tol)


def retract_tuple(rho: RepresentationTuple, t: float) -> RepresentationTuple:
    t = _check_t(t)
    return RepresentationTuple(rho.descriptor, tuple(retract_element(g, t) for g in rho))


@dataclass(frozen=True, eq=False)
class RetractionPath:
    """Uniform samples ``(t, f_t(rho))`` of the retraction from t = 0 to t = 1."""

    tuple: RepresentationTuple
    samples: list

    @property
    def times(self) -> list[float]:
        return [t for t, _ in self.samples]

    @property
    def images(self) -> list[RepresentationTuple]:
        return [image for _, image in self.samples]

    def max_step(self) -> float:
        """Largest Frobenius jump of any component between consecutive samples."""
        worst = 0.0
        for (_, a), (_, b) in zip(self.samples, self.samples[1:]):
            for ga, gb in zip(a, b):
                worst = max(worst, fnorm(ga.matrix - gb.matrix))
        return worst


def retraction_path(rho: RepresentationTuple, steps: int) -> RetractionPath:
    if steps < 1:
        raise ParameterOutOfRange(f"steps must be at least 1, got {steps}")
    pairs = [cartan_decompose(g) for g in rho]
    samples = []
    for i in range(steps + 1):
        t = i / steps
        image = RepresentationTuple(rho.descriptor, tuple(_from_pair(p, t) for p in pairs))
        samples.append((t, image))
    return RetractionPath(rho, samples)


def check_equivariance(rho: RepresentationTuple, h: GroupElement, t: float) -> float:
    """Largest ``||f_t(h g h^-1) - h f_t(g) h^-1||_F`` over the components of ``rho``."""
    ok, residual = in_maximal_compact(h)
    if not ok:
        raise NotInCompact(f"conjugator is not in {h.descriptor.compact_name} ({residual:.3e})")
    t = _check_t(t)
    hm = h.matrix
    hinv = checked_inverse(hm)
    worst = 0.0
    for g in rho:
        moved = GroupElement(g.descriptor, hm @ g.matrix @ hinv, g.tol)
        lhs = retract_element(moved, t).matrix
        rhs = hm @ retract_element(g, t).matrix @ hinv
        worst = max(worst, fnorm(lhs - rhs))
    return worst


def flow_time(s: float, t: float) -> float:
    """Parameter ``u`` with ``f_s o f_t = f_u``, namely ``1 - (1 - s)(1 - t)``."""
    return 1.0 - (1.0 - s) * (1.0 - t)
