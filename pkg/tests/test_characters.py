import itertools
import math

import numpy as np
import pytest

from charvar.characters import (
    FreeWord,
    evaluate_word,
    parse_word,
    reduce_word,
    sl2_triple,
    trace_coordinates,
    word_list,
    word_list_for,
)
from charvar.errors import IndexOutOfRange, WordSyntaxError, WrongSignature
from charvar.groups import RepresentationTuple, sample_tuple

from conftest import HYPERBOLIC, UNIPOTENT


def words(*texts):
    return [parse_word(t) for t in texts]


class TestWords:
    @pytest.mark.parametrize(
        "letters,expected",
        [((1, -1), ()), ((1, 2, -2, 1), (1, 1)), ((1, 2, -2, -1, 2), (2,)), ((-2, 1), (-2, 1))],
    )
    def test_reduce(self, letters, expected):
        assert reduce_word(letters).letters == expected

    def test_reduce_checks_rank(self):
        with pytest.raises(IndexOutOfRange):
            reduce_word((1, 3), rank=2)
        with pytest.raises(IndexOutOfRange):
            reduce_word((0,))

    def test_unreduced_construction_rejected(self):
        with pytest.raises(ValueError):
            FreeWord((1, -1))

    @pytest.mark.parametrize("text", ["a", "ab", "a'b", "aba'b'", "1", "zz'"])
    def test_parse_round_trip(self, text):
        w = parse_word(text)
        assert str(w) == ("1" if text == "zz'" else text)

    def test_parse_reduces(self):
        assert parse_word("a'a") == FreeWord()
        assert parse_word("abb'a").letters == (1, 1)

    @pytest.mark.parametrize("text", ["", "A", "'a", "a''", "a b", "2", "ab-"])
    def test_parse_syntax_errors(self, text):
        with pytest.raises(WordSyntaxError):
            parse_word(text)

    def test_parse_rank(self):
        with pytest.raises(WordSyntaxError):
            parse_word("ac", rank=2)

    def test_product_and_inverse(self):
        w = parse_word("ab'")
        assert str(w * w.inverse()) == "1"
        assert str(w.inverse()) == "ba'"
        assert w.rank_needed == 2


class TestEvaluation:
    def test_fixture_pair(self, fixture_pair):
        ab = evaluate_word(fixture_pair, parse_word("ab"))
        np.testing.assert_allclose(ab.matrix, [[2.0, 2.0], [0.0, 0.5]])
        tv = trace_coordinates(fixture_pair, words("a", "b", "ab"))
        np.testing.assert_allclose(tv.values, [2.5, 2.0, 2.5])
        assert tv.as_rows()[2] == ("ab", 2.5, 0.0)

    def test_inverse_letters(self, fixture_pair):
        m = evaluate_word(fixture_pair, parse_word("a'b")).matrix
        np.testing.assert_allclose(m, np.diag([0.5, 2.0]) @ UNIPOTENT, atol=1e-15)

    def test_identity_word(self, fixture_pair):
        np.testing.assert_array_equal(evaluate_word(fixture_pair, FreeWord()).matrix, np.eye(2))
        tv = trace_coordinates(fixture_pair, words("1", "a'a"))
        np.testing.assert_allclose(tv.values, [2.0, 2.0])

    def test_identity_tuple(self):
        rho = RepresentationTuple.from_matrices("SL3C", [np.eye(3), np.eye(3)])
        np.testing.assert_allclose(trace_coordinates(rho, words("a", "b", "ab")).values, [3, 3, 3])

    def test_rank_too_small(self):
        rho = RepresentationTuple.from_matrices("SL2R", [HYPERBOLIC])
        with pytest.raises(IndexOutOfRange):
            evaluate_word(rho, parse_word("ab"))

    def test_homomorphism(self):
        rng = np.random.default_rng(2)
        rho = sample_tuple("SL3C", 3, 1.0, 7)
        pool = word_list(3, 3, collapse_inverses=False)
        for _ in range(30):
            u, v = rng.choice(len(pool), 2)
            lhs = evaluate_word(rho, pool[u] * pool[v]).matrix
            rhs = evaluate_word(rho, pool[u]).matrix @ evaluate_word(rho, pool[v]).matrix
            np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_conjugation_invariance(self):
        rho = sample_tuple("GL2C", 2, 1.5, 3)
        h = sample_tuple("GL2C", 1, 2.0, 4)[0].matrix
        ws = word_list(4, 2, collapse_inverses=False)
        a = trace_coordinates(rho, ws).values
        b = trace_coordinates(rho.conjugated(h), ws).values
        np.testing.assert_allclose(b, a, rtol=1e-9, atol=1e-9)

    def test_cyclic_invariance(self):
        rho = sample_tuple("SL3R", 2, 1.0, 5)
        vals = trace_coordinates(rho, words("aab'", "ab'a", "b'aa")).values
        np.testing.assert_allclose(vals, vals[0], rtol=1e-12)


class TestSl2Triple:
    def test_fixture(self, fixture_pair):
        assert sl2_triple(fixture_pair) == (2.5, 2.0, 2.5)

    def test_su2_is_real_and_bounded(self):
        for seed in range(50):
            rho = sample_tuple("SL2C", 2, 0.0, seed)
            for value in sl2_triple(rho):
                assert abs(value.imag) <= 1e-12
                assert -2 - 1e-12 <= value.real <= 2 + 1e-12

    def test_fricke_identity(self):
        # tr[a, b] = x^2 + y^2 + z^2 - xyz - 2 for SL(2)
        rho = sample_tuple("SL2C", 2, 1.0, 6)
        x, y, z = sl2_triple(rho)
        comm = trace_coordinates(rho, words("aba'b'")).values[0]
        assert comm == pytest.approx(x * x + y * y + z * z - x * y * z - 2, abs=1e-10)

    @pytest.mark.parametrize("desc,rank", [("SL3C", 2), ("GL2R", 2), ("SL2R", 1), ("SL2R", 3)])
    def test_wrong_signature(self, desc, rank):
        n = int(desc[2])
        rho = RepresentationTuple.from_matrices(desc, [np.eye(n)] * rank)
        with pytest.raises(WrongSignature):
            sl2_triple(rho)


def brute_force_classes(max_length, rank, collapse):
    """Trace classes counted by string manipulation, independent of the library."""
    gens = [c for g in "abcdefgh"[:rank] for c in (g, g.upper())]
    inv = {c: c.swapcase() for c in gens}
    order = {c: i for i, c in enumerate(gens)}
    classes = set()
    for length in range(1, max_length + 1):
        for w in itertools.product(gens, repeat=length):
            cyclic = w + w[:1]
            if length > 1 and any(inv[x] == y for x, y in zip(cyclic, cyclic[1:])):
                continue
            variants = [w]
            if collapse:
                variants.append(tuple(inv[c] for c in reversed(w)))
            rotations = [v[k:] + v[:k] for v in variants for k in range(length)]
            classes.add(min(rotations, key=lambda r: [order[c] for c in r]))
    key = lambda r: (len(r), [order[c] for c in r])
    return ["".join(c if c.islower() else c.lower() + "'" for c in r) for r in sorted(classes, key=key)]


class TestWordList:
    def test_small_cases(self):
        assert [str(w) for w in word_list(2, 2)] == ["a", "b", "aa", "ab", "ab'", "bb"]
        assert [str(w) for w in word_list(1, 2)] == ["a", "b"]
        assert [str(w) for w in word_list(1, 2, collapse_inverses=False)] == ["a", "a'", "b", "b'"]

    @pytest.mark.parametrize("max_length,rank,collapse", [(4, 2, True), (4, 2, False), (3, 3, True), (4, 1, False), (3, 4, True)])
    def test_against_brute_force(self, max_length, rank, collapse):
        got = [str(w) for w in word_list(max_length, rank, collapse)]
        assert got == brute_force_classes(max_length, rank, collapse)

    def test_words_are_cyclically_reduced(self):
        for w in word_list(4, 3, collapse_inverses=False):
            assert len(w) == 1 or w.letters[0] != -w.letters[-1]

    def test_for_descriptor(self, fixture_pair):
        assert len(word_list_for(fixture_pair, 4)) == len(word_list(4, 2, True))
        rho = sample_tuple("SL3C", 2, 1.0, 0)
        assert len(word_list_for(rho, 4)) == len(word_list(4, 2, False))

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            word_list(0, 2)
        with pytest.raises(IndexOutOfRange):
            word_list(2, 0)

    def test_trace_classes_are_real_classes(self):
        # distinct representatives give distinct trace functions on a generic tuple
        rho = sample_tuple("SL2C", 2, 1.5, 11)
        vals = trace_coordinates(rho, word_list(3, 2)).values
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(len(vals))
        assert gaps.min() > 1e-6
        assert not math.isnan(gaps.min())
