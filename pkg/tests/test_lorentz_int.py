"""The integral Lorentz group: generators, enumeration, factorization."""

import numpy as np
import pytest

from latticewave import (
    DomainError,
    GeneratorWord,
    IDENTITY,
    IntLorentzMatrix,
    act,
    enumerate_ball,
    eval_word,
    factorize,
    generator,
    matrix_from_json,
    matrix_to_json,
    metric_gram_defect,
    minkowski_square,
    parity_products,
    preserves_metric,
    printed_s4,
    word_from_json,
    word_to_json,
)

ETA = (1, -1, -1, -1)


def oracle_matmul(a, b):
    """Independent 4x4 integer product for cross-checking."""
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4))


def oracle_gram(m, i, j):
    return sum(ETA[r] * m[r][i] * m[r][j] for r in range(4))


class TestGenerators:
    def test_s3_is_z_reflection_and_involution(self):
        s3 = generator("S3")
        assert s3.entries == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, -1))
        assert (s3 @ s3).entries == IDENTITY.entries

    def test_s1_swaps_first_two_spatial_axes(self):
        assert act(generator("S1"), (9, 1, 2, 3)) == (9, 2, 1, 3)

    def test_s2_swaps_last_two_spatial_axes(self):
        assert act(generator("S2"), (9, 1, 2, 3)) == (9, 1, 3, 2)

    def test_all_generators_preserve_metric_exactly(self):
        for name in ("S1", "S2", "S3", "S4"):
            assert preserves_metric(generator(name))

    def test_generators_are_involutions(self):
        for name in ("S1", "S2", "S3", "S4"):
            g = generator(name)
            assert (g @ g).entries == IDENTITY.entries

    def test_printed_s4_fails_with_gram_defect_two(self):
        """The table entry as published: columns 0 and 3 have Minkowski product 2."""
        m = printed_s4()
        assert not preserves_metric(m)
        assert oracle_gram(m, 0, 3) == 2
        assert metric_gram_defect(m, 0, 3) == 2

    def test_corrected_s4_differs_from_printed_in_one_entry(self):
        corrected = generator("S4").entries
        printed = printed_s4()
        diffs = [(i, j) for i in range(4) for j in range(4) if corrected[i][j] != printed[i][j]]
        assert diffs == [(2, 3)]
        assert printed[2][3] == 1 and corrected[2][3] == -1

    def test_unknown_generator(self):
        with pytest.raises(DomainError):
            generator("S5")


class TestParityProducts:
    def test_against_oracle_products(self):
        s1, s2, s3 = (generator(n).entries for n in ("S1", "S2", "S3"))
        p1, p2, p3 = parity_products()
        assert p2.entries == oracle_matmul(oracle_matmul(s2, s3), s2)
        expected_p1 = oracle_matmul(
            oracle_matmul(s1, oracle_matmul(s2, s3)), oracle_matmul(s2, s1)
        )
        assert p1.entries == expected_p1
        assert p3.entries == s3

    def test_each_flips_exactly_one_spatial_axis(self):
        p1, p2, p3 = parity_products()
        assert p1.entries == ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
        assert p2.entries == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, -1, 0), (0, 0, 0, 1))
        assert p3.entries == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, -1))


class TestEvalWord:
    def test_empty_word_is_identity(self):
        assert eval_word(GeneratorWord()).entries == IDENTITY.entries

    def test_involution_word_cancels(self):
        assert eval_word(["S1", "S1"]).entries == IDENTITY.entries

    def test_parity_letter_matches_its_definition(self):
        assert eval_word(["S2", "S3", "S2"]).entries == parity_products()[1].entries
        assert eval_word(["P2"]).entries == parity_products()[1].entries

    def test_unknown_letter_rejected(self):
        with pytest.raises(DomainError):
            GeneratorWord(("S9",))


class TestPreservesMetric:
    def test_identity(self):
        assert preserves_metric(IDENTITY)

    def test_scaling_fails(self):
        assert not preserves_metric(((2, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))

    def test_printed_s4_fails(self):
        assert not preserves_metric(printed_s4())


class TestEnumerateBall:
    def test_word_length_zero(self):
        ball = enumerate_ball(0)
        assert [m.entries for m in ball] == [IDENTITY.entries]

    def test_word_length_one_has_five_elements(self):
        assert len(enumerate_ball(1)) == 5

    def test_sizes_monotone(self):
        sizes = [len(enumerate_ball(k)) for k in range(6)]
        assert sizes == sorted(sizes)
        assert sizes[0] == 1 and sizes[1] == 5

    def test_every_element_is_metric_clean(self):
        for m in enumerate_ball(4):
            assert preserves_metric(m)

    def test_closed_under_inverse(self):
        """Generators are involutions, so the reversed word inverts: each
        ball contains the inverse of each of its elements."""
        ball = {m.entries for m in enumerate_ball(4)}
        for entries in ball:
            inv = IntLorentzMatrix(entries).inverse()
            assert inv.entries in ball
            product = oracle_matmul(entries, inv.entries)
            assert product == IDENTITY.entries

    def test_products_of_ball3_land_in_ball6(self):
        ball3 = enumerate_ball(3)
        ball6 = {m.entries for m in enumerate_ball(6)}
        for a in ball3[:20]:
            for b in ball3[:20]:
                prod = (a @ b).entries
                assert preserves_metric(prod)
                assert prod in ball6

    def test_determinants_are_unimodular(self):
        for m in enumerate_ball(4):
            det = m.determinant()
            assert det in (-1, 1)
            assert det == round(np.linalg.det(np.array(m.entries, dtype=float)))

    def test_orthochronous_throughout(self):
        assert all(m.entries[0][0] >= 1 for m in enumerate_ball(5))

    def test_deterministic_ordering(self):
        a = [m.entries for m in enumerate_ball(3)]
        b = [m.entries for m in enumerate_ball(3)]
        assert a == b
        assert a == sorted(a, key=lambda e: tuple(x for row in e for x in row))

    def test_safety_bound(self):
        with pytest.raises(DomainError):
            enumerate_ball(60)


class TestFactorize:
    def test_identity_gives_empty_word(self):
        assert factorize(IDENTITY).letters == ()

    def test_generators_round_trip_to_single_letters(self):
        for name in ("S1", "S2", "S3", "S4"):
            word = factorize(generator(name))
            assert eval_word(word).entries == generator(name).entries
            assert word.letters == (name,)

    def test_ball4_round_trip(self):
        for m in enumerate_ball(4):
            word = factorize(m)
            assert eval_word(word).entries == m.entries

    def test_words_are_in_normal_form(self):
        """Parity blocks alternate with S4; the tail is a word in S1, S2, S3."""
        import re

        pattern = re.compile(r"^((P1 )?(P2 )?(P3 )?S4 )*((S1|S2|S3) )*$")
        for m in enumerate_ball(5):
            text = " ".join(factorize(m).letters) + " " if factorize(m).letters else ""
            assert pattern.match(text), text

    def test_s4_reduction_strictly_decreases_time_entry(self):
        """The suffix after each S4 letter of the normal form is the reduced
        matrix of that step, so its time-time entry strictly decreases down
        to the signed-permutation tail."""
        for m in enumerate_ball(5):
            letters = list(factorize(m).letters)
            tt = m.entries[0][0]
            steps = 0
            start = 0
            while "S4" in letters[start:]:
                cut = letters.index("S4", start) + 1
                suffix_tt = eval_word(letters[cut:]).entries[0][0]
                assert suffix_tt < tt
                tt = suffix_tt
                start = cut
                steps += 1
            assert tt == 1 if steps else tt == m.entries[0][0]
            assert steps <= m.entries[0][0]  # strict decrease bounds the step count

    def test_s4_has_order_two(self):
        s4 = generator("S4")
        assert (s4 @ s4).entries == IDENTITY.entries

    def test_time_reversing_matrix_rejected(self):
        time_reversal = ((-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1))
        assert preserves_metric(time_reversal)
        with pytest.raises(DomainError):
            factorize(IntLorentzMatrix(time_reversal))


class TestAct:
    def test_identity_action(self):
        assert act(IDENTITY, (3, -1, 4, 1)) == (3, -1, 4, 1)

    def test_s4_on_time_unit_vector(self):
        image = act(generator("S4"), (1, 0, 0, 0))
        assert image == (2, -1, -1, -1)
        assert minkowski_square(image) == 1

    def test_minkowski_square_preserved(self):
        rng = np.random.default_rng(17)
        ball = enumerate_ball(4)
        for _ in range(100):
            m = ball[int(rng.integers(0, len(ball)))]
            v = tuple(int(x) for x in rng.integers(-9, 10, 4))
            assert minkowski_square(act(m, v)) == minkowski_square(v)


class TestSerialization:
    def test_matrix_round_trip(self):
        m = eval_word(["S4", "S1", "S4"])
        packed = matrix_to_json(m)
        assert len(packed) == 16 and all(isinstance(x, int) for x in packed)
        assert matrix_from_json(packed).entries == m.entries

    def test_word_round_trip(self):
        word = GeneratorWord(("P1", "S4", "S2"))
        assert word_from_json(word_to_json(word)) == word

    def test_non_group_matrix_rejected(self):
        with pytest.raises(DomainError):
            matrix_from_json([2] + [0] * 15)
