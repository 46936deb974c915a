"""Small dense complex linear algebra.

Everything here works on square ``complex128`` numpy arrays. Hermitian
eigenproblems are solved with a cyclic Jacobi method, which is accurate and
fully deterministic at the sizes this package cares about (n <= 16). The
matrix functions (exp, log, fractional powers, polar factors) are all built
on top of that one kernel.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    ConvergenceFailure,
    NonHermitianInput,
    NotPositiveDefinite,
    SingularInput,
    SizeMismatch,
)

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 40
POSDEF_CUTOFF = 1e-14
MAX_CONDITION = 1e12


class EigenSystem(NamedTuple):
    """Eigenvalues in ascending order and the unitary matrix of eigenvectors."""

    eigenvalues: np.ndarray
    basis: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite square complex128 array (always a copy)."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise SizeMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def fnorm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitian_defect(m: np.ndarray) -> float:
    """Relative distance of ``m`` from its conjugate transpose."""
    return fnorm(m - dagger(m)) / (1.0 + fnorm(m))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermitian_defect(as_matrix(m)) <= tol


def _hermitian(m) -> np.ndarray:
    a = as_matrix(m)
    if hermitian_defect(a) > HERMITIAN_TOL:
        raise NonHermitianInput(
            f"matrix is not Hermitian (relative defect {hermitian_defect(a):.3e})"
        )
    return 0.5 * (a + dagger(a))


def _normalize_phases(v: np.ndarray) -> np.ndarray:
    # first component of non-negligible size made real-positive
    for j in range(v.shape[1]):
        col = v[:, j]
        big = np.abs(col)
        k = int(np.argmax(big > 1e-12 * big.max()))
        v[:, j] = col * (abs(col[k]) / col[k])
    return v


def hermitian_eig(m) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation with the smaller angle. Sweeps
    stop once the off-diagonal Frobenius mass drops below
    ``JACOBI_TOL * ||m||_F``.

    Raises
    ------
    NonHermitianInput
        If ``||m - m*||_F > 1e-12 (1 + ||m||_F)``.
    ConvergenceFailure
        If ``JACOBI_MAX_SWEEPS`` sweeps do not reach the tolerance.
    """
    h = _hermitian(m)
    n = h.shape[0]
    a = h.tolist()
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    tol2 = (JACOBI_TOL * fnorm(h)) ** 2

    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off2 = 2.0 * sum(
            abs(a[p][q]) ** 2 for p in range(n - 1) for q in range(p + 1, n)
        )
        if off2 <= tol2:
            break
        if sweep == JACOBI_MAX_SWEEPS:
            raise ConvergenceFailure(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off={math.sqrt(off2):.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)

    w = np.array([a[i][i].real for i in range(n)])
    v = np.array(v, dtype=np.complex128)
    order = np.argsort(w, kind="stable")
    return EigenSystem(w[order], _normalize_phases(v[:, order]))


def _rotate(a: list, v: list, p: int, q: int) -> None:
    # a <- J* a J, v <- v J with J = [[c, sp], [-conj(sp), c]] on rows/cols (p, q),
    # chosen so that the new a[p][q] vanishes
    apq = a[p][q]
    mag = abs(apq)
    if mag < 1e-300:
        return
    zeta = (a[q][q].real - a[p][p].real) / (2.0 * mag)
    t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
    c = 1.0 / math.hypot(1.0, t)
    sp = (t * c) * (apq / mag)
    spc = sp.conjugate()
    for row in a:
        x, y = row[p], row[q]
        row[p] = c * x - spc * y
        row[q] = sp * x + c * y
    rp, rq = a[p], a[q]
    for j in range(len(rp)):
        x, y = rp[j], rq[j]
        rp[j] = c * x - sp * y
        rq[j] = spc * x + c * y
    a[p][q] = a[q][p] = 0j
    a[p][p] = complex(a[p][p].real, 0.0)
    a[q][q] = complex(a[q][q].real, 0.0)
    for row in v:
        x, y = row[p], row[q]
        row[p] = c * x - spc * y
        row[q] = sp * x + c * y


def hermitian_function(m, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    w, v = hermitian_eig(m)
    return _assemble(v, f(w))


def _assemble(v: np.ndarray, w) -> np.ndarray:
    out = (v * w) @ dagger(v)
    if np.isrealobj(w):
        out = 0.5 * (out + dagger(out))
    return out


def exp_hermitian(x) -> np.ndarray:
    """Matrix exponential of a Hermitian matrix (Hermitian positive definite)."""
    return hermitian_function(x, np.exp)


def _posdef_eig(p) -> EigenSystem:
    w, v = hermitian_eig(p)
    if w[-1] <= 0.0 or w[0] <= POSDEF_CUTOFF * w[-1]:
        raise NotPositiveDefinite(
            f"eigenvalue range [{w[0]:.3e}, {w[-1]:.3e}] is not safely positive"
        )
    return EigenSystem(w, v)


def log_posdef(p) -> np.ndarray:
    """Hermitian logarithm of a Hermitian positive definite matrix.

    Near-singular inputs (smallest eigenvalue below ``1e-14`` times the
    largest) raise ``NotPositiveDefinite`` rather than being clamped.
    """
    w, v = _posdef_eig(p)
    return _assemble(v, np.log(w))


def posdef_power(p, t: float) -> np.ndarray:
    """``p**t`` for Hermitian positive definite ``p`` and any real ``t``."""
    w, v = _posdef_eig(p)
    return _assemble(v, w ** float(t))


def condition_number(g) -> float:
    """2-norm condition number; ``inf`` for singular input."""
    s = np.linalg.svd(as_matrix(g), compute_uv=False)
    if s[-1] == 0.0:
        return math.inf
    return float(s[0] / s[-1])


def checked_inverse(g, max_condition: float = MAX_CONDITION) -> np.ndarray:
    a = as_matrix(g)
    cond = condition_number(a)
    if not cond <= max_condition:
        raise SingularInput(f"condition number {cond:.3e} exceeds {max_condition:.1e}")
    return np.linalg.inv(a)


def polar_decompose(g) -> tuple[np.ndarray, np.ndarray]:
    """Right polar decomposition ``g = U P``.

    ``P = (g* g)^(1/2)`` is Hermitian positive definite and ``U`` is unitary.
    Both factors come from one Jacobi eigendecomposition of ``g* g``; this
    squares the condition number, which is harmless for the well-conditioned
    matrices used here.
    """
    a = as_matrix(g)
    cond = condition_number(a)
    if not cond <= MAX_CONDITION:
        raise SingularInput(f"condition number {cond:.3e} exceeds {MAX_CONDITION:.1e}")
    try:
        w, v = _posdef_eig(dagger(a) @ a)
    except NotPositiveDefinite as exc:
        raise SingularInput(f"g* g is numerically singular: {exc}") from exc
    root = np.sqrt(w)
    u = a @ _assemble(v, 1.0 / root)
    # one Newton step u <- (u + u^-*)/2 squares the unitarity defect, which
    # forming g* g inflated by cond(g)^2
    u = 0.5 * (u + dagger(np.linalg.inv(u)))
    p = dagger(u) @ a
    return u, 0.5 * (p + dagger(p))


def frobenius_inner(a, b) -> complex:
    """``tr(a* b)``, conjugate-linear in the first slot."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise SizeMismatch(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.vdot(a, b))
