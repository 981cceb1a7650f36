"""Tests for the cohn module."""

import random

import pytest
from flint import fmpz_mat
from hypothesis import given, settings, strategies as st

from markov_fock.cohn import (
    Mat2,
    MatrixWord,
    christoffel_word,
    commutator_trace,
    fricke_check,
    generator,
    random_sl2,
    trace_of,
    verify_trace_route,
    word_matrix,
)
from markov_fock.errors import DomainError
from markov_fock.farey import HALF, ZERO, Fraction
from markov_fock.markov import SurfaceParam, trace_at


class TestMat2:

    def test_product_and_inverse(self):
        A = Mat2(1, 1, 1, 2)
        assert A @ A.inverse() == Mat2.identity()
        assert (A @ A).trace() == 7

    def test_non_unimodular_inverse(self):
        with pytest.raises(DomainError, match="not unimodular"):
            Mat2(2, 0, 0, 1).inverse()

    def test_json(self):
        assert Mat2(1, 2, 3, 7).to_json() == [["1", "2"], ["3", "7"]]

    def test_backed_by_flint(self, classical):
        x = Fraction(13, 34)
        m = word_matrix(str(christoffel_word(x, classical)), classical)
        assert isinstance(m.mat, fmpz_mat)
        assert m.det() == 1
        assert m.trace() == trace_at(x, classical)
        assert Mat2.wrap(m.mat) == m
        assert hash(Mat2.wrap(m.mat)) == hash(m)


class TestGenerators:

    def test_classical_pair(self, classical):
        assert generator(classical, "A") == Mat2(1, 1, 1, 2)
        assert generator(classical, "B") == Mat2(3, 4, 2, 3)

    def test_a_family_pair(self, a2):
        A, B = generator(a2, "A"), generator(a2, "B")
        assert A.det() == 1 and B.det() == 1
        assert A.trace() == 6
        assert B.trace() == 18

    def test_unknown_generator(self, classical):
        with pytest.raises(DomainError, match="A or B"):
            generator(classical, "C")

    def test_fricke_has_no_generators(self, fricke_surface):
        with pytest.raises(DomainError, match="no canonical generator"):
            generator(fricke_surface, "A")


class TestWords:

    def test_words_at_boundary(self):
        assert str(christoffel_word(ZERO)) == "A"
        assert str(christoffel_word(HALF)) == "B"

    def test_first_words(self):
        assert str(christoffel_word(Fraction(1, 3))) == "AB"
        assert str(christoffel_word(Fraction(1, 4))) == "AAB"
        assert str(christoffel_word(Fraction(2, 5))) == "ABB"

    def test_trace_of_one_third(self, classical, a2):
        assert trace_of(Fraction(1, 3), classical) == 15
        assert trace_of(Fraction(1, 3), a2) == 102

    def test_word_outside_fundamental(self):
        with pytest.raises(DomainError, match=r"\[0, 1/2\]"):
            christoffel_word(Fraction(3, 4))

    def test_empty_word(self):
        with pytest.raises(DomainError, match="nonempty"):
            MatrixWord("")

    def test_bad_letters(self):
        with pytest.raises(DomainError, match="only A, B, a, b"):
            MatrixWord("ABC")

    def test_inverse_letters_cancel(self, classical):
        assert word_matrix("AaBb", classical) == Mat2.identity()

    @settings(max_examples=40)
    @given(
        st.integers(min_value=3, max_value=30).flatmap(
            lambda q: st.tuples(st.integers(min_value=1, max_value=(q - 1) // 2), st.just(q))
        )
    )
    def test_word_length_and_letter_counts(self, pq):
        x = Fraction.of(*pq)
        word = christoffel_word(x).letters
        assert len(word) == x.q - x.p
        assert word.count("B") == x.p
        assert word.count("A") == x.q - 2 * x.p

    @settings(max_examples=40)
    @given(
        st.integers(min_value=1, max_value=4),
        st.integers(min_value=3, max_value=20).flatmap(
            lambda q: st.tuples(st.integers(min_value=1, max_value=(q - 1) // 2), st.just(q))
        ),
    )
    def test_trace_matches_tree(self, a, pq):
        x = Fraction.of(*pq)
        s = SurfaceParam.a_family(a)
        assert trace_of(x, s) == trace_at(x, s)

    def test_trace_route_agrees(self, classical, a2):
        assert verify_trace_route(classical, 15) == []
        assert verify_trace_route(a2, 10) == []


class TestFricke:

    def test_commutator_traces(self, classical):
        assert commutator_trace(classical) == -2
        assert commutator_trace(SurfaceParam.a_family(2)) == -254
        for a in range(1, 7):
            assert commutator_trace(SurfaceParam.a_family(a)) == 2 - 4 * a ** 6

    def test_identities_on_generators(self, a2):
        assert fricke_check(generator(a2, "A"), generator(a2, "B")) == (0, 0)

    def test_rejects_non_unimodular(self):
        with pytest.raises(DomainError, match="det 1"):
            fricke_check(Mat2(2, 0, 0, 1), Mat2(1, 0, 0, 1))

    @given(st.integers(min_value=0, max_value=2 ** 32), st.integers(min_value=1, max_value=200))
    def test_random_pairs(self, seed, bound):
        rng = random.Random(seed)
        A, B = random_sl2(rng, bound), random_sl2(rng, bound)
        assert A.det() == 1 and B.det() == 1
        assert fricke_check(A, B) == (0, 0)

    def test_random_sl2_is_seeded(self):
        first = [random_sl2(random.Random(7), 50) for _ in range(3)]
        second = [random_sl2(random.Random(7), 50) for _ in range(3)]
        assert first == second

    def test_random_sl2_bound(self):
        with pytest.raises(DomainError, match="positive"):
            random_sl2(random.Random(0), 0)
