import itertools
import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from freehaag.cumulants import (DeterminingSequence, GaussianRational, ParticleTensor,
                                abs_cumulant_sum, brute_force_particle_moment,
                                cumulants_from_moments, kappa_block, kappa_pi, mixed_moment,
                                moment_from_cumulants, moment_functional, particle_moment,
                                two_norm)
from freehaag.errors import TruncationError
from freehaag.models import b_model, circular, free_group_moment_oracle, haar_unitary
from freehaag.partitions import Partition, catalan, enumerate_nc, fuss_catalan
from freehaag.patterns import enumerate_star_pairings, pattern

CIRC = circular().seq
HAAR = haar_unitary().seq
B11 = b_model(1, 1).seq
A, S = False, True


def word(text):
    out = []
    for tok in text.split(","):
        out.append((tok.rstrip("*"), tok.endswith("*")))
    return tuple(out)


def all_star_words(length, alphabet):
    letters = [(str(i), s) for i in range(1, alphabet + 1) for s in (False, True)]
    return itertools.product(letters, repeat=length)


@st.composite
def tensors(draw, n_max=2, alphabet=2):
    n = draw(st.integers(1, n_max))
    idx = [str(i) for i in range(1, alphabet + 1)]
    words = draw(st.lists(st.tuples(*[st.sampled_from(idx)] * n), min_size=1, max_size=3,
                          unique=True))
    small = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    coeffs = {w: GaussianRational(draw(small), draw(small)) for w in words}
    return ParticleTensor(n, tuple(idx), coeffs)


class TestGaussianRational:
    def test_arithmetic(self):
        z = GaussianRational(1, 2)
        assert z * z.conjugate() == 5
        assert z.abs2() == 5
        assert z + 1 == GaussianRational(2, 2)
        assert (z * GaussianRational(0, 1)) == GaussianRational(-2, 1)


class TestDeterminingSequence:
    def test_truncation_is_an_error(self):
        seq = DeterminingSequence((1, 0))
        assert seq.alpha(2) == 0
        with pytest.raises(TruncationError):
            seq.alpha(3)
        with pytest.raises(TruncationError):
            seq.beta(3)

    def test_experimental_flag(self):
        assert not CIRC.experimental
        assert DeterminingSequence((1, 2), (1, 3)).experimental


class TestKappaBlock:
    def test_examples(self):
        assert kappa_block(CIRC, [A, S]) == 1
        assert kappa_block(HAAR, [A, A, S, S]) == 0
        assert kappa_block(HAAR, [A, S, A, S]) == -1

    def test_odd_and_non_alternating_vanish(self):
        assert kappa_block(B11, [A]) == 0
        assert kappa_block(B11, [A, S, S, A]) == 0

    def test_start_letter_selects_alpha_or_beta(self):
        seq = DeterminingSequence((F(1), F(2)), (F(1), F(7)))
        assert kappa_block(seq, [A, S, A, S]) == 2
        assert kappa_block(seq, [S, A, S, A]) == 7

    def test_block_longer_than_truncation(self):
        with pytest.raises(TruncationError):
            kappa_block(DeterminingSequence((1,)), [A, S, A, S])


class TestKappaPi:
    def test_rainbow_circular(self):
        for n in range(1, 6):
            (pi,) = enumerate_star_pairings(n, 1)
            assert kappa_pi(CIRC, pattern(n, 1), pi.pairing) == 1

    def test_full_block_on_non_alternating_word(self):
        assert kappa_pi(HAAR, pattern(2, 1), Partition.one(4)) == 0

    def test_full_block_on_alternating_word(self):
        assert kappa_pi(HAAR, pattern(1, 2), Partition.one(4)) == -1

    def test_product_of_pairs(self):
        assert kappa_pi(HAAR, [A, S, A, S], Partition.from_blocks([(1, 2), (3, 4)])) == 1


class TestMomentFromCumulants:
    @pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 9) for m in range(1, 9)
                                      if 2 * n * m <= 12])
    def test_circular_is_fuss_catalan(self, n, m):
        assert moment_from_cumulants(CIRC, n, m) == fuss_catalan(n, m)

    @pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 9) for m in range(1, 9)
                                      if 2 * n * m <= 12])
    def test_haar_is_one(self, n, m):
        assert moment_from_cumulants(HAAR, n, m) == 1

    def test_b_model(self):
        assert moment_from_cumulants(B11, 1, 1) == 1

    def test_truncation(self):
        with pytest.raises(TruncationError):
            moment_from_cumulants(DeterminingSequence((1, 0, 0)), 2, 2)

    def test_parallel_equals_serial(self):
        assert moment_from_cumulants(HAAR, 2, 3, jobs=2) == moment_from_cumulants(HAAR, 2, 3)

    def test_agrees_with_single_index_mixed_moment(self):
        for n, m in [(1, 3), (2, 2), (3, 1)]:
            w = tuple(("1", s) for s in pattern(n, m).stars)
            for seq in (CIRC, HAAR, B11):
                assert mixed_moment(seq, w) == moment_from_cumulants(seq, n, m)


class TestCumulantsFromMoments:
    def test_examples(self):
        phi_c = moment_functional(CIRC)
        assert cumulants_from_moments(phi_c, [A, S], Partition.one(2)) == 1
        assert cumulants_from_moments(phi_c, [A, S, A, S], Partition.one(4)) == 0
        haar_oracle = lambda w: F(free_group_moment_oracle(w))
        assert cumulants_from_moments(haar_oracle, [A, S, A, S], Partition.one(4)) == -1

    @pytest.mark.parametrize("seq", [CIRC, HAAR, B11], ids=["circular", "haar", "b11"])
    def test_inversion_recovers_sequences(self, seq):
        phi = moment_functional(seq)
        for k in range(1, 6):
            alt = [bool(i % 2) for i in range(2 * k)]
            assert cumulants_from_moments(phi, alt, Partition.one(2 * k)) == seq.alpha(k)
            assert cumulants_from_moments(phi, [not x for x in alt],
                                          Partition.one(2 * k)) == seq.beta(k)

    def test_methods_agree(self):
        phi = lambda w: F(free_group_moment_oracle(w))
        for pi in enumerate_nc(6):
            w = [A, S, A, S, A, S]
            assert cumulants_from_moments(phi, w, pi) == \
                cumulants_from_moments(phi, w, pi, mobius_method="recursive")

    def test_non_alternating_haar_cumulants_vanish(self):
        phi = lambda w: F(free_group_moment_oracle(w))
        for flags in itertools.product([A, S], repeat=4):
            if list(flags) not in ([A, S, A, S], [S, A, S, A]):
                assert cumulants_from_moments(phi, list(flags), Partition.one(4)) == 0


class TestMixedMoment:
    def test_examples(self):
        assert mixed_moment(HAAR, word("1,2*,1,2*")) == 0
        assert mixed_moment(CIRC, word("1,1*")) == 1
        assert mixed_moment(HAAR, word("1,1*,2,2*")) == 1

    @pytest.mark.parametrize("length", range(1, 7))
    def test_haar_matches_free_group(self, length):
        for w in all_star_words(length, 3 if length <= 5 else 2):
            assert mixed_moment(HAAR, w) == free_group_moment_oracle(w), w

    @pytest.mark.parametrize("length", [1, 3, 5, 7])
    def test_odd_words_vanish(self, length):
        for flags in itertools.product([A, S], repeat=length):
            w = tuple(("1", s) for s in flags)
            for seq in (CIRC, HAAR, B11):
                assert mixed_moment(seq, w) == 0

    def test_family_mapping(self):
        fam = {"1": CIRC, "2": HAAR}
        # free product of a circular and a Haar unitary: the two blocks factor
        assert mixed_moment(fam, word("1,1*,2,2*")) == 1
        assert mixed_moment(fam, word("2,2*,2,2*")) == 1
        assert mixed_moment(fam, word("1,1*,1,1*")) == 2


class TestParticleMoment:
    def test_examples(self):
        T = ParticleTensor(1, ("1", "2"), {("1",): 1, ("2",): 1})
        assert particle_moment(CIRC, T, 2) == 8
        assert particle_moment(HAAR, T, 2) == 6

    def test_single_word_circular(self):
        for n in range(1, 4):
            T = ParticleTensor(n, ("1",), {("1",) * n: 1})
            for m in range(1, 4):
                assert particle_moment(CIRC, T, m) == fuss_catalan(n, m)

    @pytest.mark.parametrize("seq", [CIRC, HAAR, B11], ids=["circular", "haar", "b11"])
    def test_single_letter_alphabet_scales(self, seq):
        lam = GaussianRational(F(2, 3), F(-1, 2))
        for n, m in [(n, m) for n in range(1, 7) for m in range(1, 7) if 2 * n * m <= 12]:
            T = ParticleTensor(n, ("1",), {("1",) * n: lam})
            assert particle_moment(seq, T, m) == moment_from_cumulants(seq, n, m) * lam.abs2() ** m

    @settings(max_examples=25)
    @given(tensors(), st.sampled_from(["circular", "haar", "b11"]), st.integers(1, 2))
    def test_brute_force_expansion(self, T, name, m):
        seq = {"circular": CIRC, "haar": HAAR, "b11": B11}[name]
        if 2 * T.n * m > 8:
            m = 1
        assert particle_moment(seq, T, m) == brute_force_particle_moment(seq, T, m)

    def test_haar_free_group_brute_force(self):
        # ‖u1+…+uk‖_4^4 by summing the word oracle over every index tuple
        for k in range(2, 5):
            T = ParticleTensor(1, tuple(str(i) for i in range(1, k + 1)),
                               {(str(i),): 1 for i in range(1, k + 1)})
            oracle = sum(free_group_moment_oracle(((a, A), (b, S), (c, A), (d, S)))
                         for a, b, c, d in itertools.product(T.index_set, repeat=4))
            assert particle_moment(HAAR, T, 2) == oracle == k * (2 * k - 1)

    def test_parallel_equals_serial(self):
        T = ParticleTensor(2, ("1", "2"), {("1", "2"): GaussianRational(1, 1), ("2", "2"): F(1, 2)})
        assert particle_moment(HAAR, T, 3, jobs=2) == particle_moment(HAAR, T, 3)

    def test_result_is_non_negative(self):
        T = ParticleTensor(2, ("1", "2"), {("1", "2"): 3, ("2", "1"): GaussianRational(0, -2)})
        for seq in (CIRC, HAAR, B11):
            for m in (1, 2, 3):
                assert particle_moment(seq, T, m) >= 0


class TestTwoNorm:
    def test_examples(self):
        k = 4
        T = ParticleTensor(1, tuple(map(str, range(1, k + 1))), {(str(i),): 1 for i in range(1, k + 1)})
        assert two_norm(HAAR, T) == k
        assert two_norm(CIRC, ParticleTensor(2, ("1", "2"), {("1", "2"): 1})) == 1
        assert two_norm(CIRC, ParticleTensor(1, ("1",), {("1",): 3})) == 9

    @given(tensors(n_max=3))
    def test_equals_first_moment(self, T):
        for seq in (CIRC, HAAR, B11):
            assert particle_moment(seq, T, 1) == two_norm(seq, T)


class TestTensorFormat:
    def test_json_round_trip(self):
        T = ParticleTensor(2, ("a", "b"), {("a", "b"): GaussianRational(F(1, 3), F(-2, 5))})
        data = json.loads(T.dumps())
        assert data["coeffs"] == [{"word": ["a", "b"], "re": "1/3", "im": "-2/5"}]
        assert ParticleTensor.from_json(data) == T

    def test_validation(self):
        with pytest.raises(ValueError):
            ParticleTensor(0, ("1",), {})
        with pytest.raises(ValueError):
            ParticleTensor(2, ("1",), {("1",): 1})
        with pytest.raises(ValueError):
            ParticleTensor(1, ("1",), {("2",): 1})


class TestAbsCumulantSum:
    def test_haar_one_two(self):
        assert abs_cumulant_sum(HAAR, 1, 2) == 3

    def test_equals_moment_for_non_negative_sequences(self):
        for n, m in [(1, 3), (2, 2), (3, 2)]:
            assert abs_cumulant_sum(B11, n, m) == moment_from_cumulants(B11, n, m)
            assert abs_cumulant_sum(CIRC, n, m) == fuss_catalan(n, m)
