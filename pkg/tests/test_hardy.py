"""Disk-sequence diagnostics: separation products, Gramians, decay profiles.

Frozen reference constants in this file were produced by a standalone
direct-evaluation script (plain product/eigenvalue computations at several
truncations) before the library paths existed, and are pinned here as
regression values.
"""
import numpy as np
import pytest

from dynsamp import (
    DegenerateInput,
    DiskSequence,
    HypothesisViolated,
    carleson_products,
    circulant_riesz_demo,
    completeness_truncated,
    frame_failure_profile,
    geometric_sequence,
    gramian_matrix,
    muntz_defect,
    one_point_frame_verdict,
    polynomial_sequence,
    reference_weights,
    truncated_gramian,
)
from dynsamp.hardy import WeightedVector, sequence_from_spec

from oracles import (
    carleson_infimum_direct,
    gram_entry_series_direct,
    gram_entry_series_gaps,
)

# direct-evaluation constants, truncations K = 30 / 60 / 120 and K = 50 / 100
GEOM_CARLESON_INF = {
    30: 0.014676895347,
    50: 0.014671080541,
    60: 0.014671073993,
    100: 0.014671073764,
    120: 0.014671073764,
}
GEOM_GRAM_MIN = {
    50: 2.489079650293e-05,
    100: 2.400655447469e-05,
}
POLY_GRAM_MIN_K10 = 1.159340e-08


class TestDiskSequence:
    def test_rejects_boundary_points(self):
        with pytest.raises(DegenerateInput):
            DiskSequence(np.array([0.5, 1.0]))
        with pytest.raises(DegenerateInput):
            DiskSequence(None, gaps=np.array([0.5, 0.0]))

    def test_rejects_duplicates(self):
        with pytest.raises(DegenerateInput):
            DiskSequence(np.array([0.5, 0.5]))

    def test_gap_representation_survives_tiny_gaps(self):
        seq = geometric_sequence(100)
        assert seq.K == 100
        assert np.all(seq.one_minus_abs_sq() > 0)

    def test_generator_specs(self):
        geo = sequence_from_spec({"family": "geometric", "rate": 0.5, "K": 5})
        np.testing.assert_allclose(geo.gaps, 0.5 ** np.arange(1, 6))
        poly = sequence_from_spec({"family": "polynomial", "power": 2, "K": 4})
        np.testing.assert_allclose(poly.gaps, [1, 1 / 4, 1 / 9, 1 / 16])
        with pytest.raises(DegenerateInput):
            sequence_from_spec({"family": "unknown", "K": 3})


class TestCarlesonProducts:
    def test_single_point_convention(self):
        report = carleson_products(DiskSequence(np.array([0.3])))
        assert report.products.tolist() == [1.0]
        assert report.infimum == 1.0

    def test_two_points(self):
        report = carleson_products(DiskSequence(np.array([0.0, 0.5])))
        np.testing.assert_allclose(report.products, [0.5, 0.5])
        assert report.infimum == pytest.approx(0.5)

    def test_geometric_family_frozen_values(self):
        for K in (30, 60, 120):
            rep = carleson_products(geometric_sequence(K))
            assert rep.infimum == pytest.approx(GEOM_CARLESON_INF[K], rel=1e-8)
        assert not carleson_products(geometric_sequence(30)).coincident

    def test_matches_direct_product_evaluation(self):
        seq = polynomial_sequence(12)
        rep = carleson_products(seq)
        assert rep.infimum == pytest.approx(
            carleson_infimum_direct(seq.lambdas), rel=1e-10)

    def test_coincident_points_reported_not_fatal(self):
        seq = DiskSequence(np.array([0.2, 0.2, 0.5]), strict=False)
        rep = carleson_products(seq)
        assert rep.coincident
        assert rep.infimum == 0.0

    def test_monotone_in_truncation(self):
        full = geometric_sequence(60)
        prev = None
        for K in (15, 30, 45, 60):
            rep = carleson_products(full.truncate(K))
            head = rep.products[:15]
            if prev is not None:
                assert np.all(head <= prev + 1e-15)
            prev = head


class TestTruncatedGramian:
    def test_single_zero_point(self):
        seq = DiskSequence(np.array([0.0]))
        np.testing.assert_allclose(gramian_matrix(seq), [[1.0]])
        rep = truncated_gramian(seq)
        assert rep.min_eigenvalue == pytest.approx(1.0)
        assert rep.max_eigenvalue == pytest.approx(1.0)

    def test_two_point_entry_against_series(self):
        seq = DiskSequence(np.array([0.0, 0.5]))
        G = gramian_matrix(seq)
        assert G[0, 1] == pytest.approx(np.sqrt(3) / 2, rel=1e-14)
        assert G[0, 1] == pytest.approx(
            gram_entry_series_direct(0.0, 0.5).real, rel=1e-12)

    def test_internal_series_check_clean(self):
        rep = truncated_gramian(polynomial_sequence(30))
        assert rep.series_checked_fraction == 1.0
        assert rep.series_max_deviation < 1e-10

    def test_closed_form_vs_series_moderate_moduli(self):
        rng = np.random.default_rng(8)
        lams = np.concatenate([rng.uniform(-0.9, 0.9, 6),
                               np.array([0.999, -0.95])])
        seq = DiskSequence(lams)
        G = gramian_matrix(seq)
        K = seq.K
        worst = 0.0
        for s in range(K):
            for t in range(s, K):
                e = gram_entry_series_direct(lams[s], lams[t])
                worst = max(worst, abs(G[s, t] - e))
        assert worst < 1e-10

    def test_geometric_frozen_minimum(self):
        for K in (50, 100):
            rep = truncated_gramian(geometric_sequence(K))
            assert rep.min_eigenvalue == pytest.approx(GEOM_GRAM_MIN[K], rel=1e-6)

    def test_polynomial_minimum_collapses(self):
        m10 = truncated_gramian(polynomial_sequence(10)).min_eigenvalue
        m20 = truncated_gramian(polynomial_sequence(20)).min_eigenvalue
        m40 = truncated_gramian(polynomial_sequence(40)).min_eigenvalue
        assert m10 == pytest.approx(POLY_GRAM_MIN_K10, rel=1e-5)
        assert m20 < 0.5 * m10
        assert m40 < 0.5 * m10
        assert m40 >= 0.0  # clamped: the matrix is PSD by construction

    def test_high_precision_series_oracle_near_boundary(self):
        seq = geometric_sequence(50)
        G = gramian_matrix(seq)
        u = seq.gaps
        for s, t in ((49, 49), (48, 49), (0, 49), (10, 30)):
            assert G[s, t] == pytest.approx(
                gram_entry_series_gaps(u[s], u[t]), abs=1e-12)


class TestOnePointVerdict:
    def test_geometric_all_pass(self):
        v = one_point_frame_verdict(geometric_sequence(50))
        assert v.overall
        assert all(c.passed for c in v.conditions().values())
        assert "evidence" in v.note

    def test_bounded_moduli_fail_accumulation(self):
        k = np.arange(1, 41)
        lam = 0.5 * np.exp(1j * np.pi / k)
        seq = DiskSequence(lam)
        v = one_point_frame_verdict(seq, reference_weights(seq))
        assert not v.accumulates_at_boundary.passed
        assert not v.overall

    def test_decaying_weights_fail_regularity(self):
        seq = geometric_sequence(50)
        b = (2.0 ** -np.arange(1, 51)) * reference_weights(seq)
        v = one_point_frame_verdict(seq, b)
        assert not v.weight_regularity.passed
        wv = WeightedVector.from_sequence(seq, b)
        np.testing.assert_allclose(np.abs(wv.m), 2.0 ** -np.arange(1, 51), rel=1e-12)

    def test_polynomial_fails_separation(self):
        v = one_point_frame_verdict(polynomial_sequence(50))
        assert not v.separation.passed
        assert not v.overall

    def test_explicit_weight_bounds(self):
        seq = geometric_sequence(20)
        v = one_point_frame_verdict(seq, reference_weights(seq),
                                    c_bounds=(0.5, 2.0))
        assert v.weight_regularity.passed
        v2 = one_point_frame_verdict(seq, 3.0 * reference_weights(seq),
                                     c_bounds=(0.5, 2.0))
        assert not v2.weight_regularity.passed

    def test_verdict_tracks_gramian_floor(self):
        # pass on the well-separated family matches a K-stable Gramian floor;
        # fail on the polynomial family matches a collapsing floor
        geo = [truncated_gramian(geometric_sequence(K)).min_eigenvalue
               for K in (25, 50, 100)]
        assert min(geo) > 0.6 * max(geo)
        assert one_point_frame_verdict(geometric_sequence(100)).overall
        poly = [truncated_gramian(polynomial_sequence(K)).min_eigenvalue
                for K in (10, 40)]
        assert poly[1] < 0.5 * poly[0]
        assert not one_point_frame_verdict(polynomial_sequence(40)).overall


class TestCompleteness:
    def test_dense_single_site_complete(self):
        B = np.array([[1.0, 1.0, 0.0],
                      [1.0, 0.0, 1.0],
                      [1.0, 0.0, 0.0]])
        rep = completeness_truncated([0.9, 0.5, 0.1], [0], basis=B)
        assert rep.complete

    def test_multiplicity_two_needs_two_sites(self):
        rep = completeness_truncated([0.5, 0.25], [0], multiplicities=[1, 2])
        assert not rep.complete
        assert any(e.dimension == 2 and e.achieved < 2 for e in rep.per_eigenvalue)
        rep2 = completeness_truncated(
            [0.5, 0.25], [0, 1, 2], multiplicities=[1, 2],
            basis=np.array([[1.0, 1, 0], [1.0, 0, 1], [1.0, 1, 1]]))
        assert rep2.complete

    def test_zero_coordinate_witnessed(self):
        B = np.array([[1.0, 1.0], [0.0, 1.0]])
        rep = completeness_truncated([0.5, 0.25], [0], basis=B)
        assert not rep.complete
        assert rep.witnesses == [0.25 + 0j]


class TestMuntzDefect:
    def test_target_in_exponents_rejected(self):
        seq = geometric_sequence(10)
        with pytest.raises(DegenerateInput):
            muntz_defect(seq, reference_weights(seq), [0, 1, 2], 1)

    def test_dense_exponents_reproduce_left_out_power(self):
        seq = geometric_sequence(40)
        b = reference_weights(seq)
        rep = muntz_defect(seq, b, [0] + list(range(2, 61)), 1)
        assert rep.relative < 1e-6
        # independent projection oracle: orthonormal basis from an SVD
        lam = seq.lambdas
        cols = np.stack([(lam**n) * b for n in [0] + list(range(2, 61))], axis=1)
        cols = cols / np.linalg.norm(cols, axis=0)[None, :]
        U, s, _ = np.linalg.svd(cols, full_matrices=False)
        Uq = U[:, s > s[0] * 1e-13]
        y = lam * b
        direct = np.linalg.norm(y - Uq @ (Uq.conj().T @ y))
        assert rep.distance == pytest.approx(direct, abs=1e-10)

    def test_empty_exponents_give_target_norm(self):
        seq = geometric_sequence(10)
        b = reference_weights(seq)
        rep = muntz_defect(seq, b, [], 3)
        assert rep.distance == pytest.approx(float(np.linalg.norm((seq.lambdas**3) * b)))


class TestFrameFailureProfile:
    @staticmethod
    def _half_sequence(K=40):
        k = np.arange(1, K + 1)
        lam = 0.5 * (1.0 - 2.0 ** (-k.astype(float)))
        seq = DiskSequence(lam)
        return seq, np.sqrt(1.0 - lam**2)

    def test_decay_below_threshold(self):
        seq, b = self._half_sequence()
        prof = frame_failure_profile(seq, b, [5, 10, 20, 30])
        assert prof[30] < 1e-6
        assert prof[30] <= prof[5]

    def test_normalized_variant_also_decays(self):
        seq, b = self._half_sequence()
        prof = frame_failure_profile(seq, b, [5, 30], normalize=True)
        assert prof[30] < 1e-6

    def test_single_point_gram_is_weight_norm(self):
        seq = DiskSequence(np.array([0.1]))
        prof = frame_failure_profile(seq, np.array([0.7]), [1])
        assert prof[1] == pytest.approx(0.49)

    def test_hypothesis_guard(self):
        seq = geometric_sequence(20)
        with pytest.raises(HypothesisViolated):
            frame_failure_profile(seq, reference_weights(seq), [5])

    def test_iterate_norms_decay_geometrically(self):
        seq, b = self._half_sequence()
        r = float(np.max(np.abs(seq.lambdas)))
        nb = np.linalg.norm(b)
        for l in range(0, 60, 5):
            assert np.linalg.norm((seq.lambdas**l) * b) <= r**l * nb + 1e-15

    def test_scaling_equivalence_of_weight_families(self):
        seq = DiskSequence(np.array([0.9, 0.7, 0.4, -0.2, 0.1]))
        G = gramian_matrix(seq)
        base = np.linalg.eigvalsh(G)
        rng = np.random.default_rng(17)
        m = rng.uniform(0.5, 2.0, seq.K)
        scaled = np.linalg.eigvalsh(np.diag(m) @ G @ np.diag(m))
        c1, c2 = m.min(), m.max()
        assert scaled[0] >= c1**2 * base[0] - 1e-12
        assert scaled[-1] <= c2**2 * base[-1] + 1e-12


class TestCirculantDemo:
    def test_full_rank_and_stable_conditioning(self):
        results = {m: circulant_riesz_demo(m) for m in (2, 4, 10)}
        for m, res in results.items():
            assert res.rank == res.dim == 3 * m
            assert res.is_basis
        conds = [r.condition_number for r in results.values()]
        assert max(conds) <= 2.0 * min(conds)

    def test_sparser_sites_lose_rank(self):
        res = circulant_riesz_demo(4, site_step=4)
        assert not res.is_basis
        assert res.rank < res.dim

    def test_rank_matches_direct_stack(self):
        res = circulant_riesz_demo(2)
        n = 6
        B = np.eye(n)
        for i in range(n):
            B[i, (i + 1) % n] = 0.25
            B[i, (i - 1) % n] = 0.25
        D = np.diag([(2.0, 1.0, -1.0)[i % 3] for i in range(n)])
        A = np.linalg.solve(B, D @ B)
        vecs = []
        for i in (0, 3):
            for l in range(3):
                vecs.append(np.linalg.matrix_power(A, l)[:, i])
        direct_rank = np.linalg.matrix_rank(np.array(vecs))
        assert res.rank == direct_rank == 6

    def test_m_guard(self):
        with pytest.raises(DegenerateInput):
            circulant_riesz_demo(1)
