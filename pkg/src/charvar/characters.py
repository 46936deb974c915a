"""Free-group words, their evaluation on representations, and trace coordinates.

Words are tuples of signed generator indices: ``1`` is the first generator
``a``, ``-1`` its inverse ``a'``. The string syntax uses letters ``a``..``z``
in generator order with a trailing apostrophe for inverses, so ``"aba'b'"``
is the commutator of the first two generators and ``"1"`` is the identity.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import IndexOutOfRange, WordSyntaxError, WrongSignature
from .groups import GroupElement, RepresentationTuple
from .linalg import checked_inverse

LETTERS = string.ascii_lowercase


def _letter_key(i: int) -> tuple[int, int]:
    # a < a' < b < b' < ...
    return abs(i), 0 if i > 0 else 1


@dataclass(frozen=True)
class FreeWord:
    """A reduced word; the empty word is the identity."""

    letters: tuple = ()

    def __post_init__(self):
        letters = tuple(int(i) for i in self.letters)
        for i in letters:
            if i == 0:
                raise IndexOutOfRange("generator indices start at 1")
        for x, y in zip(letters, letters[1:]):
            if x == -y:
                raise ValueError(f"word {letters} is not reduced; use reduce_word")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(LETTERS[abs(i) - 1] + ("'" if i < 0 else "") for i in self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return reduce_word(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(-i for i in reversed(self.letters)))

    @property
    def rank_needed(self) -> int:
        return max((abs(i) for i in self.letters), default=0)

    def sort_key(self):
        return len(self.letters), tuple(_letter_key(i) for i in self.letters)


def reduce_word(letters: Iterable[int], rank: Optional[int] = None) -> FreeWord:
    """Cancel adjacent ``x x^-1`` pairs; optionally check indices against ``rank``."""
    stack: list[int] = []
    for i in letters:
        i = int(i)
        if i == 0 or (rank is not None and abs(i) > rank):
            raise IndexOutOfRange(f"generator index {i} is outside 1..{rank}")
        if stack and stack[-1] == -i:
            stack.pop()
        else:
            stack.append(i)
    return FreeWord(tuple(stack))


def parse_word(text: str, rank: Optional[int] = None) -> FreeWord:
    """Parse the apostrophe syntax, e.g. ``"ab'a"``; ``"1"`` is the identity."""
    text = text.strip()
    if text == "1":
        return FreeWord()
    letters = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch not in LETTERS:
            raise WordSyntaxError(f"unexpected {ch!r} at position {pos} in {text!r}")
        index = LETTERS.index(ch) + 1
        pos += 1
        if pos < len(text) and text[pos] == "'":
            index = -index
            pos += 1
        letters.append(index)
    if not letters:
        raise WordSyntaxError("empty word; write '1' for the identity")
    try:
        return reduce_word(letters, rank)
    except IndexOutOfRange as exc:
        raise WordSyntaxError(str(exc)) from exc


def _word_matrix(rho: RepresentationTuple, w: FreeWord) -> np.ndarray:
    if w.rank_needed > rho.rank:
        raise IndexOutOfRange(f"word {w} needs {w.rank_needed} generators, tuple has {rho.rank}")
    mats = rho.matrices
    inverses: dict[int, np.ndarray] = {}
    out = np.eye(rho.descriptor.n, dtype=np.complex128)
    for i in w.letters:
        if i > 0:
            out = out @ mats[i - 1]
        else:
            if i not in inverses:
                inverses[i] = checked_inverse(mats[-i - 1])
            out = out @ inverses[i]
    return out


def evaluate_word(rho: RepresentationTuple, w: FreeWord) -> GroupElement:
    """Image of ``w`` under the homomorphism sending generator i to ``rho[i]``."""
    return GroupElement(rho.descriptor, _word_matrix(rho, w), rho[0].tol)


@dataclass(frozen=True, eq=False)
class TraceVector:
    words: tuple
    values: np.ndarray

    def __post_init__(self):
        if len(self.words) != len(self.values):
            raise ValueError("words and values differ in length")

    def as_rows(self) -> list[tuple[str, float, float]]:
        return [(str(w), float(v.real), float(v.imag)) for w, v in zip(self.words, self.values)]


def trace_coordinates(rho: RepresentationTuple, words: Sequence[FreeWord]) -> TraceVector:
    """``tr rho(w)`` for each word; constant on conjugation orbits."""
    words = tuple(words)
    values = np.array([np.trace(_word_matrix(rho, w)) for w in words], dtype=np.complex128)
    return TraceVector(words, values)


def sl2_triple(rho: RepresentationTuple) -> tuple[complex, complex, complex]:
    """``(tr A, tr B, tr AB)`` for a pair ``(A, B)`` in SL(2)."""
    desc = rho.descriptor
    if desc.family != "SL" or desc.n != 2 or rho.rank != 2:
        raise WrongSignature(f"sl2_triple needs a pair in SL(2), got rank {rho.rank} in {desc}")
    a, b = rho.matrices
    return complex(np.trace(a)), complex(np.trace(b)), complex(np.trace(a @ b))


def _canonical(letters: tuple, collapse_inverses: bool) -> tuple:
    variants = [letters]
    if collapse_inverses:
        variants.append(tuple(-i for i in reversed(letters)))
    best = None
    for word in variants:
        for k in range(len(word)):
            rotated = word[k:] + word[:k]
            key = tuple(_letter_key(i) for i in rotated)
            if best is None or key < best[0]:
                best = (key, rotated)
    return best[1]


def word_list(max_length: int, rank: int, collapse_inverses: bool = True) -> list[FreeWord]:
    """One representative per trace class among cyclically reduced words.

    Words of length 1..``max_length`` are identified up to cyclic rotation
    and, when ``collapse_inverses`` is set, up to inversion. The latter is
    only sound for SL(2), where ``tr M = tr M^-1``; pass ``False`` elsewhere.
    Representatives are the smallest rotation under the order
    ``a < a' < b < b' < ...`` and the list is sorted by length, then
    lexicographically.
    """
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    if rank < 1 or rank > len(LETTERS):
        raise IndexOutOfRange(f"rank must be in 1..{len(LETTERS)}")
    alphabet = sorted([i for g in range(1, rank + 1) for i in (g, -g)], key=_letter_key)
    out = []
    layer: list[tuple] = [()]
    for length in range(1, max_length + 1):
        layer = [w + (i,) for w in layer for i in alphabet if not w or w[-1] != -i]
        for w in layer:
            if length > 1 and w[0] == -w[-1]:
                continue
            if _canonical(w, collapse_inverses) == w:
                out.append(FreeWord(w))
    return out


def word_list_for(rho_or_desc, max_length: int, rank: Optional[int] = None) -> list[FreeWord]:
    """:func:`word_list` with inversion collapsing switched on only for SL(2)."""
    desc = getattr(rho_or_desc, "descriptor", rho_or_desc)
    if rank is None:
        rank = rho_or_desc.rank
    return word_list(max_length, rank, collapse_inverses=desc.family == "SL" and desc.n == 2)
