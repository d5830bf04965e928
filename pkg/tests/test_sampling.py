"""Sampling operator, frame bounds, simulation, reconstruction."""
import numpy as np
import pytest

from dynsamp import (
    DegenerateInput,
    SamplingScheme,
    TimeSpaceSamples,
    brute_force_feasible,
    build_sampling_matrix,
    frame_bounds,
    reconstruct,
    simulate_samples,
)

from oracles import stacked_iterates


class TestBuildSamplingMatrix:
    def test_identity_repeats_rows(self):
        M = build_sampling_matrix(np.eye(2), SamplingScheme([0], None, 1))
        np.testing.assert_array_equal(M, [[1, 0], [1, 0]])

    def test_diagonal_growth(self):
        A = np.diag([2.0, 3.0])
        M = build_sampling_matrix(A, SamplingScheme([0, 1], None, 1))
        np.testing.assert_allclose(M, [[1, 0], [2, 0], [0, 1], [0, 3]])

    def test_rows_reproduce_samples(self, P):
        rng = np.random.default_rng(0)
        scheme = SamplingScheme([1, 3], [2, 1])
        M = build_sampling_matrix(P, scheme)
        f = rng.normal(size=5) + 1j * rng.normal(size=5)
        expected = []
        for i, l in zip(scheme.omega, scheme.budgets):
            g = f.copy()
            for _ in range(l + 1):
                expected.append(g[i])
                g = P @ g
        np.testing.assert_allclose(M @ f, expected, atol=1e-10)

    def test_complex_operator_conjugation(self):
        A = np.array([[1j]])
        M = build_sampling_matrix(A, SamplingScheme([0], None, 1))
        f = np.array([2.0 + 1.0j])
        np.testing.assert_allclose(M @ f, [f[0], 1j * f[0]])

    def test_matches_oracle_stack(self, P):
        scheme = SamplingScheme([1], None, 4)
        M = build_sampling_matrix(P, scheme)
        np.testing.assert_allclose(M, stacked_iterates(P, [1], [4]), atol=1e-12)


class TestFrameBounds:
    def test_orthonormal_rows(self):
        report = frame_bounds(np.eye(3))
        assert report.lower == pytest.approx(1.0)
        assert report.upper == pytest.approx(1.0)
        assert report.condition_number == pytest.approx(1.0)

    def test_repeated_row_raises_lower_bound(self):
        M = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        report = frame_bounds(M)
        assert report.lower == pytest.approx(1.0)
        assert report.upper == pytest.approx(2.0)

    def test_p_scheme_bounds_match_gram_eigenvalues(self, P):
        M = build_sampling_matrix(P, SamplingScheme([1], None, 4))
        report = frame_bounds(M)
        gram_eigs = np.linalg.eigvalsh(M.conj().T @ M)
        assert report.lower == pytest.approx(float(gram_eigs[0]), rel=1e-9)
        assert report.upper == pytest.approx(float(gram_eigs[-1]), rel=1e-12)
        assert report.lower > 0
        assert report.feasible

    def test_empty_rejected(self):
        with pytest.raises(DegenerateInput):
            frame_bounds(np.zeros((0, 0)))

    def test_frame_inequality_on_random_signals(self, P, Q):
        rng = np.random.default_rng(123)
        for A in (P, Q):
            for scheme in (SamplingScheme([0, 1], [3, 2]),
                           SamplingScheme.full([1, 2, 4], 5)):
                M = build_sampling_matrix(A, scheme)
                rep = frame_bounds(M)
                F = rng.normal(size=(200, 5)) + 1j * rng.normal(size=(200, 5))
                nf = np.linalg.norm(F, axis=1) ** 2
                ns = np.linalg.norm(F @ M.T, axis=1) ** 2
                slack = 1e-10 * np.maximum(ns, nf)
                assert np.all(rep.lower * nf <= ns + slack)
                assert np.all(ns <= rep.upper * nf + slack)

    def test_feasibility_agreement_with_oracle(self):
        rng = np.random.default_rng(99)
        for _ in range(40):
            d = int(rng.integers(2, 6))
            A = rng.integers(-3, 4, (d, d)).astype(float)
            omega = sorted(rng.choice(d, size=int(rng.integers(1, d + 1)),
                                      replace=False).tolist())
            scheme = SamplingScheme.full(omega, d)
            rep = frame_bounds(build_sampling_matrix(A, scheme))
            assert rep.feasible == brute_force_feasible(A, scheme)


class TestSimulateSamples:
    def test_noiseless_exact(self, P):
        scheme = SamplingScheme([1], None, 4)
        f = np.arange(1.0, 6.0)
        samples = simulate_samples(P, scheme, f, sigma=0.0)
        M = build_sampling_matrix(P, scheme)
        np.testing.assert_array_equal(samples.values, M @ f.astype(complex))
        assert samples.noise_sigma == 0.0

    def test_seed_reproducibility(self, P):
        scheme = SamplingScheme([1], None, 4)
        f = np.ones(5)
        a = simulate_samples(P, scheme, f, sigma=1e-2, seed=7)
        b = simulate_samples(P, scheme, f, sigma=1e-2, seed=7)
        c = simulate_samples(P, scheme, f, sigma=1e-2, seed=8)
        np.testing.assert_array_equal(a.values, b.values)
        assert np.any(a.values != c.values)

    def test_noise_level(self, P):
        scheme = SamplingScheme.uniform(range(5), 3)
        f = np.zeros(5)
        samples = simulate_samples(P, scheme, f, sigma=1.0, seed=1)
        # E|eta|^2 = 1 per sample
        assert np.mean(np.abs(samples.values) ** 2) == pytest.approx(1.0, rel=0.3)

    def test_value_count_invariant(self, P):
        scheme = SamplingScheme([0, 2, 4], [1, 0, 3])
        samples = simulate_samples(P, scheme, np.ones(5))
        assert samples.values.size == scheme.n_samples
        with pytest.raises(DegenerateInput):
            TimeSpaceSamples(scheme, samples.values[:-1])


class TestReconstruct:
    def test_identity_roundtrip(self):
        A = np.eye(3)
        scheme = SamplingScheme.uniform(range(3), 0)
        f = np.array([1.0, -2.0, 3.0])
        rec = reconstruct(A, simulate_samples(A, scheme, f))
        np.testing.assert_allclose(rec.estimate, f, atol=1e-12)
        assert not rec.underdetermined

    def test_p_single_site_recovery(self, P):
        rng = np.random.default_rng(42)
        scheme = SamplingScheme([1], None, 4)
        for _ in range(20):
            f = rng.normal(size=5) + 1j * rng.normal(size=5)
            rec = reconstruct(P, simulate_samples(P, scheme, f))
            assert np.linalg.norm(rec.estimate - f) <= 1e-8 * np.linalg.norm(f)

    def test_p_bad_site_flagged_underdetermined(self, P):
        scheme = SamplingScheme([2], None, 10)
        f = np.ones(5)
        rec = reconstruct(P, simulate_samples(P, scheme, f))
        assert rec.underdetermined
        assert rec.warnings

    def test_noise_error_bounded(self, P):
        rng = np.random.default_rng(3)
        scheme = SamplingScheme([1], None, 4)
        M = build_sampling_matrix(P, scheme)
        c1 = frame_bounds(M).lower
        for k in range(20):
            f = rng.normal(size=5)
            clean = M @ f.astype(complex)
            samples = simulate_samples(P, scheme, f, sigma=1e-3, seed=k)
            eta = samples.values - clean
            rec = reconstruct(P, samples)
            assert np.linalg.norm(rec.estimate - f) <= \
                np.linalg.norm(eta) / np.sqrt(c1) + 1e-12

    def test_roundtrip_random_operators(self):
        rng = np.random.default_rng(2718)
        for _ in range(30):
            d = int(rng.integers(2, 8))
            A = rng.integers(-3, 4, (d, d)).astype(float)
            omega = sorted(rng.choice(d, size=int(rng.integers(1, d + 1)),
                                      replace=False).tolist())
            scheme = SamplingScheme.full(omega, d)
            if not brute_force_feasible(A, scheme):
                continue
            f = rng.normal(size=d) + 1j * rng.normal(size=d)
            rec = reconstruct(A, simulate_samples(A, scheme, f))
            assert np.linalg.norm(rec.estimate - f) <= 1e-8 * np.linalg.norm(f)
