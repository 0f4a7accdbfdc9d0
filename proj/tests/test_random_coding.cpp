#include <gtest/gtest.h>

#include <cmath>

#include "qcap/errors.hpp"
#include "qcap/random_coding.hpp"

using namespace qcap;

namespace {

KrausChannel random_channel(Index in, Index out, Index n, std::uint64_t seed) {
  RngStream rng(seed, 0, StreamDomain::kChannel);
  return haar_random_channel(in, out, n, rng);
}

}  // namespace

TEST(BForm, Coefficients) {
  const auto c = b_form_coefficients(2, 2);
  EXPECT_DOUBLE_EQ(c.alpha, 0.25);
  EXPECT_DOUBLE_EQ(c.beta, -0.125);
  for (Index m = 2; m <= 6; ++m) {
    for (Index k = 1; k <= m; ++k) {
      const auto q = b_form_coefficients(m, k);
      const double md = static_cast<double>(m);
      const double kd = static_cast<double>(k);
      EXPECT_NEAR(q.alpha + q.beta, (1 - 1 / (kd * kd)) / (md * md + md), 1e-15);
      EXPECT_NEAR(q.alpha * md + q.beta * md * md, 0.0, 1e-15);
    }
  }
  EXPECT_THROW(b_form_coefficients(1, 1), InputError);
}

TEST(BForm, IdentityVanishesPerSample) {
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  for (std::uint64_t i = 0; i < 100; ++i) {
    RngStream rng(9, i, StreamDomain::kSamples);
    EXPECT_LT(std::abs(b_form_sample(id, id, sample_code(4, 2, rng))), 1e-14);
  }
}

TEST(BForm, RankOneProjectorMatchesClosedForm) {
  const Index m = 3;
  const Index k = 2;
  ComplexMatrix psi = ComplexMatrix::Zero(m, m);
  psi(0, 0) = 1.0;
  const auto est = b_form_mc(psi, psi, k, 20000, 17);
  const double target = (1.0 - 1.0 / (k * k)) / (m * m + m);
  EXPECT_LE(std::abs(est.mean.real() - target), 4 * est.std_error_re + 1e-12);
  EXPECT_LE(std::abs(est.mean.imag()), 4 * est.std_error_im + 1e-12);
}

TEST(BForm, RandomOperatorsMatchClosedForm) {
  RngStream rng(4, 0, StreamDomain::kAuxiliary);
  const ComplexMatrix v = complex_gaussian(3, 3, rng);
  const ComplexMatrix w = complex_gaussian(3, 3, rng);
  const auto est = b_form_mc(v, w, 2, 20000, 5);
  const Complex closed = b_form_closed(v, w, 2);
  EXPECT_LE(std::abs(est.mean.real() - closed.real()), 4 * est.std_error_re + 1e-12);
  EXPECT_LE(std::abs(est.mean.imag() - closed.imag()), 4 * est.std_error_im + 1e-12);
}

TEST(ExactAverage, IdentityIsZero) {
  EXPECT_NEAR(exact_average_d2(identity_channel(4), 2), 0.0, 1e-15);
  EXPECT_THROW(exact_average_d2(identity_channel(1), 1), InputError);
}

TEST(ExactAverage, FullCodeIsDeterministic) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Index m = 2 + static_cast<Index>(s % 3);
    const KrausChannel ch = random_channel(m, m, 3, s);
    const ComplexMatrix d = d_operator(CodeSubspace::standard(m, m), ch);
    EXPECT_NEAR(exact_average_d2(ch, m), d.squaredNorm(), 1e-12);
  }
}

TEST(ExactAverage, BelowUpperBound) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Index m = 2 + static_cast<Index>(s % 4);
    const Index out = 2 + static_cast<Index>(s % 3);
    const KrausChannel ch = random_channel(m, out, (m + out - 1) / out + 1, s);
    for (Index k = 1; k <= m; ++k) {
      EXPECT_LE(exact_average_d2(ch, k), upper_bound_d2(ch) + 1e-12);
    }
  }
}

TEST(UpperBound, UnitalChannels) {
  EXPECT_NEAR(upper_bound_d2(identity_channel(2)), 0.5, 1e-15);
  RngStream rng(1, 0, StreamDomain::kChannel);
  EXPECT_NEAR(upper_bound_d2(haar_random_unitary_channel(4, 2, rng)), 0.25, 1e-12);
}

TEST(AveragedBound, Arithmetic) {
  EXPECT_NEAR(averaged_fidelity_bound(identity_channel(4), 1), 0.5, 1e-15);
  EXPECT_NEAR(averaged_fidelity_bound(phase_flip(0.25), 2), 1.0 - 2.0 * std::sqrt(2.0) / 2.0 * 1.0,
              1e-12);
  EXPECT_LT(averaged_fidelity_bound(phase_flip(0.25), 2), 0.0);
}

TEST(Ensemble, MatchesExactAverage) {
  const KrausChannel ch = phase_flip(0.25);
  const auto r = run_ensemble(ch, EnsembleSpec{2, 1, 10000, 3});
  EXPECT_TRUE(r.d2_matches_exact);
  EXPECT_TRUE(r.bound_above_average);
  EXPECT_TRUE(r.jensen_holds);
  EXPECT_GE(r.bound.mean, 0.0);
  EXPECT_LE(r.bound.mean, 1.0);
}

TEST(Ensemble, IdentityHasNoSpread) {
  const auto r = run_ensemble(identity_channel(3), EnsembleSpec{3, 2, 50, 1});
  EXPECT_NEAR(r.bound.mean, 1.0, 1e-12);
  EXPECT_LT(r.bound.std_error, 1e-12);
}

TEST(Ensemble, DeterministicAcrossThreadCounts) {
  const KrausChannel ch = depolarizing(0.3);
  const EnsembleSpec spec{2, 2, 1000, 99};
  const auto a = run_ensemble(ch, spec, 1);
  const auto b = run_ensemble(ch, spec, 3);
  const auto c = run_ensemble(ch, spec, 8);
  EXPECT_EQ(a.bound.mean, b.bound.mean);
  EXPECT_EQ(a.bound.mean, c.bound.mean);
  EXPECT_EQ(a.bound.std_error, c.bound.std_error);
  EXPECT_EQ(a.frobenius_d_sq.mean, c.frobenius_d_sq.mean);
}

TEST(Ensemble, RejectsBadSpecs) {
  EXPECT_THROW(run_ensemble(phase_flip(0.1), EnsembleSpec{2, 3, 10, 1}), InputError);
  EXPECT_THROW(run_ensemble(phase_flip(0.1), EnsembleSpec{3, 1, 10, 1}), InputError);
}

// <π_C> = π entrywise.
TEST(Ensemble, AverageCodeProjectorIsMaximallyMixed) {
  const Index m = 3;
  const std::size_t n = 10000;
  std::vector<std::vector<double>> re(m * m, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(12, i, StreamDomain::kSamples);
    const ComplexMatrix p = sample_code(m, 2, rng).basis();
    const ComplexMatrix pi = p * p.adjoint() / 2.0;
    for (Index a = 0; a < m * m; ++a) re[a][i] = pi(a / m, a % m).real();
  }
  for (Index a = 0; a < m * m; ++a) {
    const auto est = estimate_from_samples(re[a], 12);
    const double target = (a / m == a % m) ? 1.0 / m : 0.0;
    EXPECT_TRUE(within_standard_errors(est, target)) << "entry " << a;
  }
}

TEST(Moments, TargetsAndPasses) {
  const auto r = haar_moment_suite(2, 2, 20000, 8);
  ASSERT_EQ(r.moments.size(), 3u);
  EXPECT_NEAR(r.moments[0].closed_form, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.moments[1].closed_form, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.moments[2].closed_form, 0.25, 1e-15);  // K = M gives 1/M²
  EXPECT_LT(r.moments[2].estimate.std_error, 1e-12);
  EXPECT_TRUE(r.all_pass);
  const auto r3 = haar_moment_suite(3, 1, 20000, 8);
  EXPECT_NEAR(r3.moments[0].closed_form, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r3.moments[1].closed_form, 1.0 / 12.0, 1e-15);
  EXPECT_TRUE(r3.all_pass);
}

TEST(Hamming, Curves) {
  const auto vac = hamming_rate_curve(phase_flip(0.5), 0.5, 1, 10);
  for (const auto& row : vac.rows) EXPECT_LE(row.bound, 0.0);
  EXPECT_FALSE(vac.converges);

  RngStream rng(1, 0, StreamDomain::kChannel);
  const KrausChannel u4 = haar_random_unitary_channel(4, 2, rng);
  const auto good = hamming_rate_curve(u4, 0.5, 1, 40);
  EXPECT_TRUE(good.converges);
  EXPECT_GT(good.rows.back().bound, 0.9);
  for (std::size_t i = 1; i < good.rows.size(); ++i) {
    EXPECT_GT(good.rows[i].bound, good.rows[i - 1].bound);
  }

  const auto edge = hamming_rate_curve(u4, 1.0, 1, 10);
  for (const auto& row : edge.rows) EXPECT_NEAR(row.bound, 0.0, 1e-12);

  EXPECT_THROW(hamming_rate_curve(amplitude_damping(0.3), 0.1, 1, 3), DomainError);
}
