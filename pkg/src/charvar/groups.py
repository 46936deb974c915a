"""Classical real reductive matrix groups GL(n)/SL(n) over R and C.

A :class:`GroupDescriptor` fixes the family, the size and the base field.
Its maximal compact subgroup is O(n), SO(n), U(n) or SU(n), the Cartan
involution is ``g -> (g*)^-1`` and every element factors uniquely as
``g = k exp(X)`` with ``k`` compact and ``X`` Hermitian.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    BadDescriptor,
    NotInGroup,
    SingularInput,
    SizeMismatch,
)
from .linalg import (
    MAX_CONDITION,
    as_matrix,
    checked_inverse,
    condition_number,
    dagger,
    exp_hermitian,
    fnorm,
    hermitian_defect,
    hermitian_eig,
)

MEMBERSHIP_TOL = 1e-9
REAL_IMAG_TOL = 1e-12

_DESCRIPTOR_RE = re.compile(r"^(GL|SL)([1-9][0-9]*)(R|C)$")


@dataclass(frozen=True)
class GroupDescriptor:
    """Names a group: ``family`` is "GL" or "SL", ``field`` is "R" or "C"."""

    family: str
    n: int
    field: str

    def __post_init__(self):
        if self.family not in ("GL", "SL"):
            raise BadDescriptor(f"unknown family {self.family!r}")
        if self.field not in ("R", "C"):
            raise BadDescriptor(f"unknown field {self.field!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise BadDescriptor(f"matrix size must be a positive integer, got {self.n!r}")

    @classmethod
    def parse(cls, text: str) -> "GroupDescriptor":
        """Parse strings such as ``"SL2R"`` or ``"GL3C"`` (case-sensitive)."""
        match = _DESCRIPTOR_RE.match(text)
        if match is None:
            raise BadDescriptor(f"bad group descriptor {text!r}")
        family, n, fld = match.groups()
        return cls(family, int(n), fld)

    def __str__(self) -> str:
        return f"{self.family}{self.n}{self.field}"

    @property
    def is_real(self) -> bool:
        return self.field == "R"

    @property
    def is_special(self) -> bool:
        return self.family == "SL"

    @property
    def compact_name(self) -> str:
        base = "O" if self.is_real else "U"
        return f"{'S' if self.is_special else ''}{base}({self.n})"


def parse_descriptor(text) -> GroupDescriptor:
    if isinstance(text, GroupDescriptor):
        return text
    return GroupDescriptor.parse(text)


def contains(desc: GroupDescriptor, m, tol: float = MEMBERSHIP_TOL) -> tuple[bool, float]:
    """Numeric membership test; returns ``(is_member, residual)``.

    The residual is ``|det - 1|`` for SL families (0 for GL once the matrix is
    invertible with condition number at most 1e12), plus the largest
    imaginary part for real groups. Ill-conditioned or non-finite matrices get
    an infinite residual.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.shape != (desc.n, desc.n):
        raise SizeMismatch(f"{desc} needs {desc.n}x{desc.n} matrices, got {a.shape}")
    if not np.all(np.isfinite(a)):
        return False, math.inf
    if not condition_number(a) <= MAX_CONDITION:
        return False, math.inf
    residual = abs(np.linalg.det(a) - 1.0) if desc.is_special else 0.0
    if desc.is_real:
        residual += float(np.max(np.abs(a.imag)))
    return residual <= tol, float(residual)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An n x n matrix validated against its descriptor at construction.

    The stored matrix is a read-only complex128 array. For real groups the
    imaginary part must vanish to 1e-12 and is then dropped exactly.
    """

    descriptor: GroupDescriptor
    matrix: np.ndarray
    tol: float = field(default=MEMBERSHIP_TOL, repr=False)

    def __post_init__(self):
        a = np.array(self.matrix, dtype=np.complex128)
        ok, residual = contains(self.descriptor, a, self.tol)
        if not ok:
            raise NotInGroup(f"matrix is not in {self.descriptor} (residual {residual:.3e})")
        if self.descriptor.is_real:
            if np.max(np.abs(a.imag)) > REAL_IMAG_TOL:
                raise NotInGroup(f"{self.descriptor} needs real entries")
            a = a.real.astype(np.complex128)
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def n(self) -> int:
        return self.descriptor.n

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    @property
    def det_sign(self) -> int:
        """Sign of the determinant for real groups (+1 on the identity component).

        Complex groups are connected, so this is always +1 there.
        """
        if not self.descriptor.is_real:
            return 1
        return 1 if self.det.real > 0 else -1

    def inverse(self) -> "GroupElement":
        return GroupElement(self.descriptor, checked_inverse(self.matrix), self.tol)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.descriptor, self.matrix @ other.matrix, self.tol)


def element(desc, m, tol: float = MEMBERSHIP_TOL) -> GroupElement:
    return GroupElement(parse_descriptor(desc), m, tol)


def identity(desc: GroupDescriptor) -> GroupElement:
    return GroupElement(desc, np.eye(desc.n))


@dataclass(frozen=True, eq=False)
class RepresentationTuple:
    """Images of the free generators: a point of G^r."""

    descriptor: GroupDescriptor
    elements: tuple

    def __post_init__(self):
        elements = tuple(self.elements)
        if not elements:
            raise ValueError("a representation needs at least one generator")
        for g in elements:
            if not isinstance(g, GroupElement) or g.descriptor != self.descriptor:
                raise NotInGroup(f"every component must be an element of {self.descriptor}")
        object.__setattr__(self, "elements", elements)

    @classmethod
    def from_matrices(
        cls, desc, matrices: Iterable, tol: float = MEMBERSHIP_TOL
    ) -> "RepresentationTuple":
        desc = parse_descriptor(desc)
        return cls(desc, tuple(GroupElement(desc, m, tol) for m in matrices))

    @property
    def rank(self) -> int:
        return len(self.elements)

    @property
    def matrices(self) -> list[np.ndarray]:
        return [g.matrix for g in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i) -> GroupElement:
        return self.elements[i]

    def conjugated(self, h) -> "RepresentationTuple":
        """The tuple ``(h g_1 h^-1, ..., h g_r h^-1)``."""
        hm = h.matrix if isinstance(h, GroupElement) else as_matrix(h)
        hinv = checked_inverse(hm)
        return RepresentationTuple.from_matrices(
            self.descriptor, [hm @ g @ hinv for g in self.matrices]
        )


def cartan_involution(g: GroupElement) -> GroupElement:
    """``(g*)^-1``; equal to ``(g^-1)^t`` on real matrices."""
    return GroupElement(g.descriptor, dagger(checked_inverse(g.matrix)), g.tol)


def in_maximal_compact(g: GroupElement, tol: float = MEMBERSHIP_TOL) -> tuple[bool, float]:
    m = g.matrix if isinstance(g, GroupElement) else as_matrix(g)
    residual = fnorm(dagger(m) @ m - np.eye(m.shape[0]))
    if isinstance(g, GroupElement) and g.descriptor.is_special:
        residual += abs(np.linalg.det(m) - 1.0)
    return residual <= tol, float(residual)


def _gaussian(desc: GroupDescriptor, rng: np.random.Generator) -> np.ndarray:
    n = desc.n
    if desc.is_real:
        return rng.standard_normal((n, n)).astype(np.complex128)
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)


def _haar(desc: GroupDescriptor, rng: np.random.Generator) -> np.ndarray:
    while True:
        q, r = np.linalg.qr(_gaussian(desc, rng))
        d = np.diagonal(r)
        q = q * (np.abs(d) / d)
        if not desc.is_special:
            return q
        det = np.linalg.det(q)
        if desc.is_real:
            if det.real > 0:
                return q
            continue
        # n-th root of det with phase in (-pi/n, pi/n]
        angle = np.angle(det)
        if angle == -math.pi:
            angle = math.pi
        return q * np.exp(-1j * angle / desc.n)


def sample_compact(desc, seed) -> GroupElement:
    """Haar-random element of the maximal compact subgroup.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts, including
    an existing generator (which is then advanced).
    """
    desc = parse_descriptor(desc)
    return GroupElement(desc, _haar(desc, np.random.default_rng(seed)))


def random_p_direction(desc, rng, norm: float = 1.0) -> np.ndarray:
    """Random Hermitian matrix (real symmetric for R, traceless for SL) of given norm."""
    desc = parse_descriptor(desc)
    rng = np.random.default_rng(rng)
    z = _gaussian(desc, rng)
    x = 0.5 * (z + dagger(z))
    if desc.is_special:
        x -= np.trace(x) / desc.n * np.eye(desc.n)
    size = fnorm(x)
    if size == 0.0:
        return np.zeros_like(x)
    return x * (norm / size)


def sample_group(desc, spread: float, seed) -> GroupElement:
    """Random ``k exp(X)`` with ``k`` Haar-compact and ``||X||_F <= spread``.

    The norm of ``X`` is drawn uniformly from ``[0, spread]``; ``spread = 0``
    yields an element of the maximal compact.
    """
    desc = parse_descriptor(desc)
    if not spread >= 0.0:
        raise ValueError(f"spread must be non-negative, got {spread}")
    rng = np.random.default_rng(seed)
    k = _haar(desc, rng)
    x = random_p_direction(desc, rng, spread * rng.uniform())
    return GroupElement(desc, k @ exp_hermitian(x))


def sample_tuple(desc, rank: int, spread: float, seed) -> RepresentationTuple:
    """``rank`` independent :func:`sample_group` draws from one generator."""
    desc = parse_descriptor(desc)
    if rank < 1:
        raise ValueError("rank must be at least 1")
    rng = np.random.default_rng(seed)
    return RepresentationTuple(desc, tuple(sample_group(desc, spread, rng) for _ in range(rank)))


@dataclass(frozen=True, eq=False)
class CartanPair:
    """``g = k exp(X)`` with ``k`` in the maximal compact and ``X`` Hermitian."""

    k: GroupElement
    X: np.ndarray

    def __post_init__(self):
        desc = self.k.descriptor
        ok, residual = in_maximal_compact(self.k, MEMBERSHIP_TOL)
        if not ok:
            raise NotInGroup(f"compact factor misses {desc.compact_name} by {residual:.3e}")
        x = np.array(self.X, dtype=np.complex128)
        if hermitian_defect(x) > 1e-12:
            raise ValueError("X must be Hermitian")
        if desc.is_real and np.max(np.abs(x.imag)) > REAL_IMAG_TOL:
            raise ValueError("X must be real symmetric for a real group")
        if desc.is_special and abs(np.trace(x)) > MEMBERSHIP_TOL:
            raise ValueError("X must be traceless for SL")
        x.setflags(write=False)
        object.__setattr__(self, "X", x)

    @property
    def descriptor(self) -> GroupDescriptor:
        return self.k.descriptor

    def compose(self, scale: float = 1.0) -> np.ndarray:
        """The matrix ``k exp(scale X)``."""
        return self.k.matrix @ exp_hermitian(scale * self.X)


def cartan_decompose(g: GroupElement) -> CartanPair:
    """Split ``g = k exp(X)``; ``X = log(g* g) / 2`` and ``k = g exp(-X)``."""
    m = g.matrix
    w, v = hermitian_eig(dagger(m) @ m)
    if w[-1] <= 0.0 or w[0] <= 1e-14 * w[-1]:
        raise SingularInput(f"g* g is numerically singular ({w[0]:.3e} / {w[-1]:.3e})")
    x = (v * (0.5 * np.log(w))) @ dagger(v)
    k = m @ ((v * w ** -0.5) @ dagger(v))
    if g.descriptor.is_real:
        x = x.real.astype(np.complex128)
    return CartanPair(GroupElement(g.descriptor, k, g.tol), 0.5 * (x + dagger(x)))


__all__ = [
    "GroupDescriptor",
    "GroupElement",
    "RepresentationTuple",
    "CartanPair",
    "parse_descriptor",
    "element",
    "identity",
    "contains",
    "cartan_involution",
    "in_maximal_compact",
    "sample_compact",
    "sample_group",
    "sample_tuple",
    "random_p_direction",
    "cartan_decompose",
]
