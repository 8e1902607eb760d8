"""Tests for liblab.free: moment sequences, free mixed moments and the compression law."""
import itertools

import numpy as np
import pytest

from liblab.errors import CapacityError, ValidationError
from liblab.free import (
    AlternatingWord,
    FreeMomentCalculator,
    MomentSequence,
    compression_density,
    compression_law,
    compression_total_mass,
    cyclic_reduce,
    free_additive_moments,
    free_mixed_moment,
    free_mixed_moment_by_centering,
    free_multiplicative_moments,
    law_moments_by_quadrature,
)


@pytest.fixture
def marginals():
    return {
        "a": MomentSequence.bernoulli(0.3, 8),
        "b": MomentSequence.bernoulli(0.5, 8),
        "c": MomentSequence.symmetric_bernoulli(8),
    }


class TestMomentSequence:
    def test_zeroth_moment(self):
        m = MomentSequence.point_mass(2.0, 3)
        assert m[0] == 1.0
        assert m.moments == (2.0, 4.0, 8.0)
        with pytest.raises(ValidationError):
            m[4]

    def test_hankel_rejects_impossible_moments(self):
        with pytest.raises(ValidationError):
            MomentSequence((0.0, -1.0))
        with pytest.raises(ValidationError):
            MomentSequence((2.0, 1.0))

    def test_nonnegative_law(self):
        assert MomentSequence.bernoulli(0.4, 6).is_nonnegative_law()
        assert not MomentSequence.symmetric_bernoulli(6).is_nonnegative_law()

    def test_from_samples(self):
        m = MomentSequence.from_samples([1.0, 2.0, 3.0], 2)
        np.testing.assert_allclose(m.moments, [2.0, 14.0 / 3.0])
        assert m.radius_hint == 3.0
        with pytest.raises(ValidationError):
            MomentSequence.from_samples([], 2)

    def test_truncated(self):
        m = MomentSequence.symmetric_bernoulli(6).truncated(2)
        assert m.moments == (0.0, 1.0)


class TestAlternatingWord:
    def test_from_labels_merges_runs(self):
        word = AlternatingWord.from_labels("aab")
        assert word.letters == (("a", 2), ("b", 1))
        assert word.degree == 3
        assert word.label_degrees() == {"a": 2, "b": 1}

    def test_rejects_equal_neighbours(self):
        with pytest.raises(ValidationError):
            AlternatingWord((("a", 1), ("a", 2)))
        with pytest.raises(ValidationError):
            AlternatingWord((("a", 0),))


class TestMixedMoments:
    def test_cyclic_reduce(self):
        assert cyclic_reduce([(0, 1), (1, 1), (0, 2)]) == ((0, 3), (1, 1))
        assert cyclic_reduce([(1, 1), (0, 1)]) == ((0, 1), (1, 1))
        assert cyclic_reduce([]) == ()

    def test_factorizes_for_two_letters(self, marginals):
        assert free_mixed_moment(marginals, "ab") == pytest.approx(0.3 * 0.5)

    def test_abab(self, marginals):
        a, b = marginals["a"], marginals["b"]
        expected = a[2] * b[1] ** 2 + a[1] ** 2 * b[2] - a[1] ** 2 * b[1] ** 2
        assert free_mixed_moment(marginals, "abab") == pytest.approx(expected)

    def test_matches_centering_expansion(self, marginals):
        for word in ("abcabc", "aabcb", "abacbc", "cacbab"):
            fast = free_mixed_moment(marginals, word)
            slow = free_mixed_moment_by_centering(marginals, word)
            assert fast == pytest.approx(slow, abs=1e-12)

    def test_cyclic_invariance(self, marginals):
        calc = FreeMomentCalculator(marginals)
        assert calc.moment("abcab") == pytest.approx(calc.moment("bcaba"))

    def test_traciality_for_all_two_variable_words(self):
        calc = FreeMomentCalculator(
            {
                "a": MomentSequence.from_atoms([-1.0, -0.5, 0.25, 0.75, 1.25], [0.1, 0.2, 0.3, 0.25, 0.15], 8),
                "b": MomentSequence.from_atoms([0.0, 0.25, 0.5, 0.75, 1.5], [0.3, 0.2, 0.2, 0.2, 0.1], 8),
            }
        )
        for length in range(1, 9):
            for word in itertools.product("ab", repeat=length):
                reference = calc.linear_moment(word)
                for shift in range(1, length):
                    rotated = word[shift:] + word[:shift]
                    assert calc.linear_moment(rotated) == pytest.approx(reference, abs=1e-10), "".join(word)
                assert calc.moment(word) == pytest.approx(reference, abs=1e-10)

    def test_linear_moment_matches_definition(self, marginals):
        # phi(aba) = phi(a^2) phi(b) for free a, b
        calc = FreeMomentCalculator(marginals)
        assert calc.linear_moment("aba") == pytest.approx(marginals["a"][2] * marginals["b"][1])
        assert calc.linear_moment("") == 1.0

    def test_power_words(self, marginals):
        assert free_mixed_moment(marginals, [("a", 2), ("b", 1)]) == pytest.approx(
            free_mixed_moment(marginals, "aab")
        )

    def test_unknown_label(self, marginals):
        with pytest.raises(ValidationError):
            free_mixed_moment(marginals, "ax")

    def test_order_exceeds_marginal(self):
        with pytest.raises(ValidationError):
            free_mixed_moment({"a": MomentSequence.bernoulli(0.5, 2), "b": MomentSequence.bernoulli(0.5, 2)}, "aaab")


class TestConvolutions:
    def test_additive_arcsine(self):
        m = MomentSequence.symmetric_bernoulli(6)
        result = free_additive_moments(m, m, 6)
        np.testing.assert_allclose(result.moments, [0, 2, 0, 6, 0, 20], atol=1e-12)

    def test_additive_is_symmetric(self):
        a = MomentSequence.bernoulli(0.2, 6)
        b = MomentSequence.symmetric_bernoulli(6)
        assert free_additive_moments(a, b, 6).moments == free_additive_moments(b, a, 6).moments

    def test_additive_point_mass_shifts(self):
        b = MomentSequence.bernoulli(0.5, 4)
        shifted = free_additive_moments(MomentSequence.point_mass(1.0, 4), b, 4)
        expected = MomentSequence.from_atoms([1.0, 2.0], [0.5, 0.5], 4)
        np.testing.assert_allclose(shifted.moments, expected.moments, atol=1e-12)

    @pytest.mark.parametrize("alpha, beta", list(itertools.product((0.3, 0.5, 0.7), repeat=2)))
    def test_multiplicative_matches_compression(self, alpha, beta):
        product = free_multiplicative_moments(
            MomentSequence.bernoulli(alpha, 6), MomentSequence.bernoulli(beta, 6), 6
        )
        reference = law_moments_by_quadrature(compression_law(alpha, beta), 6)
        np.testing.assert_allclose(product.moments, reference.moments, atol=1e-5)
        assert product[1] == pytest.approx(alpha * beta)

    def test_multiplicative_needs_nonnegative_first_factor(self):
        with pytest.raises(ValidationError):
            free_multiplicative_moments(MomentSequence.symmetric_bernoulli(4), MomentSequence.bernoulli(0.5, 4), 4)

    def test_caps(self):
        m = MomentSequence.bernoulli(0.5, 12)
        with pytest.raises(CapacityError):
            free_multiplicative_moments(m, m, 11)
        with pytest.raises(CapacityError):
            free_additive_moments(m, m, 13)


class TestCompressionLaw:
    def test_atoms_and_support(self):
        law = compression_law(0.3, 0.9)
        assert law.atom0 == pytest.approx(0.7)
        assert law.atom1 == pytest.approx(0.2)
        spread = np.sqrt(4 * 0.3 * 0.9 * 0.7 * 0.1)
        assert law.lambda_minus == pytest.approx(0.66 - spread)
        assert law.lambda_plus == pytest.approx(0.66 + spread)

    def test_no_atom_at_one_when_traces_are_small(self):
        assert compression_law(0.3, 0.6).atom1 == 0.0

    def test_total_mass(self):
        for alpha, beta in ((0.3, 0.9), (0.5, 0.5), (0.2, 0.7)):
            assert compression_total_mass(compression_law(alpha, beta)) == pytest.approx(1.0, abs=1e-8)

    def test_first_moment(self):
        law = compression_law(0.3, 0.9)
        assert law_moments_by_quadrature(law, 1)[1] == pytest.approx(0.27, abs=1e-8)

    def test_density_vanishes_off_support(self):
        law = compression_law(0.3, 0.9)
        assert compression_density(law, 0.1) == 0.0
        assert compression_density(law, 0.99) == 0.0
        assert compression_density(law, 0.66) > 0.0
        values = compression_density(law, np.array([0.0, 0.5, 1.0]))
        assert values.shape == (3,)

    def test_invalid_traces(self):
        with pytest.raises(ValidationError):
            compression_law(0.0, 0.5)
        with pytest.raises(ValidationError):
            compression_law(0.5, 1.0)

    def test_quadrature_cap(self):
        with pytest.raises(CapacityError):
            law_moments_by_quadrature(compression_law(0.5, 0.5), 11)
