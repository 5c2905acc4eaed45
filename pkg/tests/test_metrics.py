from itertools import permutations

import numpy as np
import pytest

from npsa.exceptions import (
    DegenerateRowOrColumn,
    ShapeMismatch,
    ZeroVector,
)
from npsa.metrics import (
    correlation,
    evaluate_separation,
    isi,
    match_components,
    mse,
    tmse,
)


class TestIsi:
    def test_identity_is_zero(self):
        assert isi(np.eye(3)) == pytest.approx(0.0, abs=1e-14)

    def test_scaled_permutation_is_zero(self):
        p = np.array([[0.0, 2.5, 0.0], [0.0, 0.0, -0.3], [7.0, 0.0, 0.0]])
        assert isi(p) == pytest.approx(0.0, abs=1e-14)

    def test_all_ones_hand_value(self):
        # each row contributes (1 + 1) - 1 = 1, same for columns: total 4
        assert isi(np.ones((2, 2))) == pytest.approx(4.0, abs=1e-14)

    def test_invariance_under_global_scaling_and_permutation(self, rng):
        p = rng.uniform(0.1, 1.0, size=(4, 4))
        base = isi(p)
        assert isi(3.7 * p) == pytest.approx(base, rel=1e-10)
        perm = rng.permutation(4)
        assert isi(p[perm][:, perm]) == pytest.approx(base, rel=1e-10)

    def test_zero_set_closed_under_diagonal_rescaling(self, rng):
        # a rescaled scaled-permutation is still a scaled permutation
        p = np.diag(rng.uniform(0.5, 2.0, 4)) @ np.eye(4)[rng.permutation(4)]
        p = p @ np.diag(rng.uniform(0.5, 2.0, 4))
        assert isi(p) == pytest.approx(0.0, abs=1e-14)

    def test_degenerate_row_rejected(self):
        with pytest.raises(DegenerateRowOrColumn):
            isi(np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_non_square_rejected(self):
        with pytest.raises(ShapeMismatch):
            isi(np.ones((2, 3)))


class TestMse:
    def test_identical_is_zero(self, rng):
        v = rng.standard_normal(64)
        assert mse(v, v) == 0.0

    def test_sign_flip_of_unit_image(self, rng):
        v = rng.standard_normal(100)
        v /= np.linalg.norm(v)
        assert mse(v, -v) == pytest.approx(4.0 / 100, rel=1e-12)

    def test_matches_direct_formula(self, rng):
        a = rng.standard_normal(50)
        b = rng.standard_normal(50)
        direct = sum((x - y) ** 2 for x, y in zip(a, b)) / 50
        assert mse(a, b) == pytest.approx(direct, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            mse(np.zeros(3), np.zeros(4))


class TestTmse:
    def test_mean_of_squares(self):
        assert tmse([0.1, 0.2, 0.3]) == pytest.approx(
            (0.01 + 0.04 + 0.09) / 3, rel=1e-12
        )

    def test_zero_for_perfect(self):
        assert tmse([0.0, 0.0, 0.0]) == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ShapeMismatch):
            tmse([])


class TestCorrelation:
    def test_identical(self, rng):
        v = rng.standard_normal(30)
        assert correlation(v, v) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        assert correlation([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("c", [3.0, -0.5])
    def test_scale_invariance(self, rng, c):
        v = rng.standard_normal(30)
        assert correlation(v, c * v) == pytest.approx(np.sign(c), abs=1e-12)

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroVector):
            correlation(np.zeros(5), np.ones(5))


class TestMatchComponents:
    def test_recovers_shuffle(self, rng):
        sources = [rng.standard_normal(40) for _ in range(4)]
        shuffle = [2, 0, 3, 1]
        estimates = [sources[j] for j in shuffle]
        perm, signs = match_components(sources, estimates)
        assert [shuffle[j] for j in perm] == [0, 1, 2, 3]
        assert signs == [1.0] * 4

    def test_negated_sources(self, rng):
        sources = [rng.standard_normal(40) for _ in range(3)]
        perm, signs = match_components(sources, [-s for s in sources])
        assert perm == [0, 1, 2]
        assert signs == [-1.0] * 3

    def test_maximizes_total_abs_correlation(self, rng):
        mixing = np.linalg.qr(rng.standard_normal((3, 3)))[0]
        sources = rng.standard_normal((3, 200))
        estimates = mixing @ sources
        perm, _ = match_components(list(sources), list(estimates))

        def total(p):
            return sum(
                abs(correlation(sources[i], estimates[p[i]])) for i in range(3)
            )

        best = max(total(p) for p in permutations(range(3)))
        assert total(perm) == pytest.approx(best, rel=1e-12)

    def test_greedy_path_on_many_components(self, rng):
        sources = [rng.standard_normal(50) for _ in range(6)]
        shuffle = [5, 3, 0, 1, 4, 2]
        estimates = [sources[j] + 0.01 * rng.standard_normal(50) for j in shuffle]
        perm, signs = match_components(sources, estimates)
        assert [shuffle[j] for j in perm] == list(range(6))

    def test_count_mismatch(self, rng):
        with pytest.raises(ShapeMismatch):
            match_components([rng.standard_normal(5)], [])


class TestEvaluateSeparation:
    def test_perfect_separation_scores(self, rng):
        sources = rng.standard_normal((3, 100))
        score = evaluate_separation(
            list(sources), list(-sources[[1, 2, 0]]), np.eye(3)
        )
        assert score.isi == pytest.approx(0.0, abs=1e-12)
        assert score.tmse == pytest.approx(0.0, abs=1e-20)
        assert all(r == pytest.approx(1.0, abs=1e-12) for r in score.correlations)
