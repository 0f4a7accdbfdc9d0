#include <gtest/gtest.h>

#include <cmath>

#include "qcap/errors.hpp"
#include "qcap/typicality.hpp"

using namespace qcap;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

// Direct scan over all |alphabet|^n sequences.
struct Brute {
  std::uint64_t count = 0;
  double mass = 0.0;
};

Brute brute_typical(const std::vector<double>& p, int n, double eps) {
  double h = 0.0;
  for (double w : p) {
    if (w > 0) h -= w * std::log2(w);
  }
  Brute b;
  const auto a = static_cast<std::uint64_t>(p.size());
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= a;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    double prob = 1.0;
    for (int i = 0; i < n; ++i) {
      prob *= p[c % a];
      c /= a;
    }
    if (prob <= 0.0) continue;
    const double lp = std::log2(prob);
    if (lp >= -n * (h + eps) - 1e-9 && lp <= -n * (h - eps) + 1e-9) {
      ++b.count;
      b.mass += prob;
    }
  }
  return b;
}

KrausChannel random_channel(Index in, Index out, Index n, std::uint64_t seed) {
  RngStream rng(seed, 0, StreamDomain::kChannel);
  return haar_random_channel(in, out, n, rng);
}

// Dense Ñ(π_n) from the materialized Kraus family.
ComplexMatrix dense_reduced_output(const KrausChannel& ch, int n, double eps) {
  const KrausChannel red = epsilon_reduced_channel(ch, n, eps).materialize();
  const Index d = red.input_dim();
  const ComplexMatrix pi = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return qcap::apply(red, pi);
}

}  // namespace

TEST(TypicalSequences, UniformIsFullyTypical) {
  for (int n : {1, 5, 17}) {
    const auto r = typical_sequences({ProbabilityDistribution({0.5, 0.5}), n, 1e-6});
    EXPECT_EQ(r.typical_count, std::uint64_t{1} << n);
    EXPECT_DOUBLE_EQ(r.mass, 1.0);
  }
}

TEST(TypicalSequences, MatchesBruteForce) {
  const std::vector<std::vector<double>> dists = {{0.9, 0.1}, {0.5, 0.3, 0.2}, {0.25, 0.25, 0.5}};
  for (const auto& p : dists) {
    for (int n : {3, 6, 10}) {
      for (double eps : {0.05, 0.1, 0.3}) {
        const auto r = typical_sequences({ProbabilityDistribution(p), n, eps});
        const auto b = brute_typical(p, n, eps);
        EXPECT_EQ(r.typical_count, b.count) << "n=" << n << " eps=" << eps;
        EXPECT_NEAR(r.mass, b.mass, 1e-12);
        EXPECT_TRUE(r.count_within_bound);
      }
    }
  }
}

TEST(TypicalSequences, BinomialOracleAtTen) {
  const auto r = typical_sequences({ProbabilityDistribution({0.9, 0.1}), 10, 0.1});
  EXPECT_NEAR(r.entropy, 0.468995593589281, 1e-12);
  // Only k = 1 minority symbols is typical: 10 sequences of mass 0.9^9 0.1.
  EXPECT_EQ(r.typical_count, 10u);
  EXPECT_NEAR(r.mass, 10 * std::pow(0.9, 9) * 0.1, 1e-15);
  EXPECT_LE(static_cast<double>(r.typical_count), std::exp2(10 * (0.468995593589281 + 0.1)));
}

TEST(TypicalSequences, ZeroWeightsNeverAppear) {
  const ProbabilityDistribution p({0.5, 0.0, 0.5});
  const auto seqs = enumerate_typical_sequences({p, 4, 0.1});
  EXPECT_EQ(seqs.size(), 16u);
  for (const auto& s : seqs) {
    for (auto x : s) EXPECT_NE(x, 1u);
  }
}

TEST(TypicalSequences, MajorityStringDecidedByInequality) {
  // p = (0.7, 0.3), H ≈ 0.881. The all-0.7 string has log2 p = n log2 0.7.
  const ProbabilityDistribution p({0.7, 0.3});
  const double h = shannon_entropy(p);
  const int n = 5;
  for (double eps : {0.2, h - std::log2(1 / 0.7) + 1e-3, 1.0}) {
    const auto seqs = enumerate_typical_sequences({p, n, eps});
    bool has_majority = false;
    for (const auto& s : seqs) {
      has_majority = has_majority || std::all_of(s.begin(), s.end(), [](auto x) { return x == 0; });
    }
    const double lp = n * std::log2(0.7);
    const bool expected = lp >= -n * (h + eps) && lp <= -n * (h - eps);
    EXPECT_EQ(has_majority, expected) << "eps=" << eps;
  }
}

TEST(TypicalSequences, EnumerationCountAgrees) {
  const ProbabilityDistribution p({0.6, 0.3, 0.1});
  const TypicalSetSpec spec{p, 7, 0.15};
  EXPECT_EQ(enumerate_typical_sequences(spec).size(), typical_sequences(spec).typical_count);
  EXPECT_THROW(enumerate_typical_sequences({p, 40, 0.1}), ResourceLimitError);
}

TEST(TypicalSequences, InvalidSpec) {
  const ProbabilityDistribution p({0.6, 0.4});
  EXPECT_THROW(typical_sequences({p, 0, 0.1}), InputError);
  EXPECT_THROW(typical_sequences({p, 3, 0.0}), InputError);
}

TEST(TypicalSubspace, PureStateIsRankOne) {
  ComplexVector psi(2);
  psi << 1.0 / std::sqrt(2.0), Complex(0, 1.0 / std::sqrt(2.0));
  const auto rho = DensityOperator::pure(psi);
  const ComplexMatrix p = typical_subspace_projector(rho, 3, 0.1);
  const ComplexVector psi3 = tensor(tensor(psi, psi), psi);
  EXPECT_LT((p - psi3 * psi3.adjoint()).norm(), 1e-12);
}

TEST(TypicalSubspace, MaximallyMixedIsEverything) {
  const ComplexMatrix p = typical_subspace_projector(DensityOperator::maximally_mixed(2), 4, 0.01);
  EXPECT_LT((p - ComplexMatrix::Identity(16, 16)).norm(), 1e-12);
}

TEST(TypicalSubspace, DiagonalStateMatchesBinomialOracle) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  const DensityOperator rho(d);
  const auto sub = typical_subspace(rho, 8, 0.1);
  const auto b = brute_typical({0.75, 0.25}, 8, 0.1);
  EXPECT_EQ(sub.rank, b.count);
  EXPECT_NEAR(sub.mass, b.mass, 1e-14);
  EXPECT_LE(static_cast<double>(sub.rank), sub.rank_bound);

  const ComplexMatrix p = typical_subspace_projector(rho, 8, 0.1);
  EXPECT_LT((p * p - p).norm(), 1e-10);
  EXPECT_LT(hermitian_deviation(p), 1e-14);
  EXPECT_NEAR(p.trace().real(), static_cast<double>(sub.rank), 1e-9);
  ComplexMatrix rho8 = d;
  for (int i = 1; i < 8; ++i) rho8 = tensor(rho8, d);
  EXPECT_NEAR((p * rho8).trace().real(), b.mass, 1e-12);
}

TEST(TypicalSubspace, RotatedStateProjectorCommutes) {
  RngStream rng(3, 0, StreamDomain::kAuxiliary);
  const DensityOperator rho = random_density(3, rng);
  const ComplexMatrix p = typical_subspace_projector(rho, 3, 0.2);
  ComplexMatrix r3 = tensor(tensor(rho.matrix(), rho.matrix()), rho.matrix());
  EXPECT_LT((p * r3 - r3 * p).norm(), 1e-12);
  EXPECT_THROW(typical_subspace_projector(rho, 12, 0.1), ResourceLimitError);
}

TEST(KrausDistribution, PhaseFlipAndIdentity) {
  const auto p = kraus_distribution(phase_flip(0.25));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0], 0.75, 1e-14);
  EXPECT_NEAR(p[1], 0.25, 1e-14);
  const auto id = kraus_distribution(identity_channel(3));
  ASSERT_EQ(id.size(), 1u);
  EXPECT_NEAR(id[0], 1.0, 1e-15);
  EXPECT_THROW(kraus_distribution(KrausChannel({0.5 * ComplexMatrix::Identity(2, 2)})),
               DomainError);
}

TEST(KrausDistribution, EntropyEqualsEntropyExchange) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index q = 2 + static_cast<Index>(s % 3);
    const KrausChannel ch = random_channel(q, q, 2 + static_cast<Index>(s % 3), s);
    EXPECT_NEAR(shannon_entropy(kraus_distribution(ch)),
                entropy_exchange(DensityOperator::maximally_mixed(q), ch), 1e-10);
  }
}

TEST(TypicalChannel, IdentityStaysIdentity) {
  const auto tc = epsilon_typical_channel(identity_channel(2), 3, 0.1);
  EXPECT_EQ(tc.length(), 1u);
  EXPECT_DOUBLE_EQ(tc.transmission(), 1.0);
  EXPECT_TRUE(channels_equivalent(tc.materialize(), tensor_power(identity_channel(2), 3)));
}

TEST(TypicalChannel, PhaseFlipMassMatchesOracle) {
  const auto tc = epsilon_typical_channel(phase_flip(0.25), 8, 0.1);
  const auto b = brute_typical({0.75, 0.25}, 8, 0.1);
  EXPECT_EQ(tc.length(), b.count);
  EXPECT_NEAR(tc.transmission(), b.mass, 1e-14);
  const KrausChannel dense = tc.materialize();
  EXPECT_NEAR(transmission_probability(dense, DensityOperator::maximally_mixed(256)), b.mass,
              1e-12);
  const double se = h2(0.25);
  for (const auto& a : dense.kraus()) {
    const double pa = a.squaredNorm() / 256.0;
    EXPECT_GE(std::log2(pa), -8 * (se + 0.1) - 1e-9);
    EXPECT_LE(std::log2(pa), -8 * (se - 0.1) + 1e-9);
  }
  EXPECT_LE(static_cast<double>(tc.length()), std::exp2(8 * (se + 0.1)));
}

TEST(TypicalChannel, UniformGramKeepsEverything) {
  // Equal Kraus weights make every sequence typical.
  const KrausChannel u = phase_flip(0.5);
  for (int n : {2, 5}) {
    const auto tc = epsilon_typical_channel(u, n, 1e-3);
    EXPECT_EQ(tc.length(), std::uint64_t{1} << n);
    EXPECT_NEAR(tc.transmission(), 1.0, 1e-14);
  }
}

// The structured evaluation against dense materialization.
TEST(ReducedChannel, StructuredMatchesDense) {
  struct Case {
    KrausChannel ch;
    int n;
    double eps;
  };
  const std::vector<Case> cases = {
      {phase_flip(0.25), 8, 0.1},       {phase_flip(0.1), 6, 0.3},
      {depolarizing(0.3), 5, 0.2},      {amplitude_damping(0.3), 6, 0.25},
      {random_channel(2, 2, 3, 7), 4, 0.3}, {random_channel(2, 3, 2, 8), 4, 0.4},
  };
  for (const auto& c : cases) {
    const ReducedChannel red(c.ch, c.n, c.eps);
    const ComplexMatrix dense = dense_reduced_output(c.ch, c.n, c.eps);
    const Index din = static_cast<Index>(std::llround(std::pow(c.ch.input_dim(), c.n)));
    const auto r = reduced_channel_report(c.ch, c.n, c.eps);
    EXPECT_NEAR(r.transmission, dense.trace().real(), 1e-12) << c.ch.name();
    EXPECT_NEAR(r.frobenius_sq, dense.squaredNorm(), 1e-12) << c.ch.name();
    EXPECT_NEAR(r.typical_transmission,
                transmission_probability(red.typical().materialize(),
                                         DensityOperator::maximally_mixed(din)),
                1e-12);
    const ComplexMatrix p = red.projector();
    EXPECT_NEAR(r.subspace_mass,
                (p * qcap::apply(tensor_power(c.ch, c.n),
                                 ComplexMatrix(ComplexMatrix::Identity(din, din) /
                                               static_cast<double>(din))))
                    .trace()
                    .real(),
                1e-12);
  }
}

TEST(ReducedChannel, IdentityIsIdentity) {
  const ReducedChannel red(identity_channel(2), 3, 0.1);
  EXPECT_TRUE(channels_equivalent(red.materialize(), tensor_power(identity_channel(2), 3)));
  const auto r = reduced_channel_report(identity_channel(2), 3, 0.1);
  EXPECT_DOUBLE_EQ(r.transmission, 1.0);
  EXPECT_NEAR(r.frobenius_sq, 1.0 / 8.0, 1e-15);
}

TEST(ReducedChannel, TransmissionInequality) {
  for (double eps : {0.05, 0.1, 0.3}) {
    for (int n = 2; n <= 7; ++n) {
      for (const auto& ch : {phase_flip(0.25), amplitude_damping(0.2), depolarizing(0.2)}) {
        const auto r = reduced_channel_report(ch, n, eps);
        EXPECT_TRUE(r.transmission_inequality_ok) << ch.name() << " n=" << n;
        EXPECT_GE(r.transmission, 0.0);
        EXPECT_LE(r.transmission, 1.0);
      }
    }
  }
}

TEST(ReducedRelations, PhaseFlipHardRelations) {
  const auto rep = verify_reduced_relations(phase_flip(0.25), 2, 10, 0.1);
  EXPECT_TRUE(rep.hard_relations_hold);
  EXPECT_EQ(rep.rows.size(), 9u);
  for (const auto& r : rep.rows) {
    EXPECT_LE(static_cast<double>(r.length), r.length_bound);
    EXPECT_LE(r.frobenius_sq, r.frobenius_bound);
  }
}

TEST(ReducedRelations, LargeEpsilonKeepsEverything) {
  const auto rep = verify_reduced_relations(amplitude_damping(0.3), 1, 5, 3.0);
  EXPECT_TRUE(rep.hard_relations_hold);
  for (const auto& r : rep.rows) {
    EXPECT_NEAR(r.typical_transmission, 1.0, 1e-12);
    EXPECT_EQ(r.typical_length, std::uint64_t{1} << r.n);
  }
}

TEST(ReducedRelations, BatteryChannels) {
  for (const auto& ch : {depolarizing(0.3), amplitude_damping(0.2), random_channel(2, 2, 3, 4)}) {
    const auto rep = verify_reduced_relations(ch, 2, 7, 0.1);
    EXPECT_TRUE(rep.hard_relations_hold) << ch.name();
  }
}

TEST(DecayFit, RecoversExponentialRate) {
  std::vector<int> ns;
  std::vector<double> dev;
  for (int n = 1; n <= 20; ++n) {
    ns.push_back(n);
    dev.push_back(0.9 * std::exp(-0.13 * n));
  }
  const auto fit = fit_decay(ns, dev, 0.1, 0.5);
  ASSERT_TRUE(fit.fitted_rate.has_value());
  EXPECT_NEAR(*fit.fitted_rate, 0.13, 1e-12);
  EXPECT_NEAR(fit.predicted_rate, 0.01, 1e-15);
}

TEST(DecayFit, NeedsThreeInteriorPoints) {
  const auto fit = fit_decay({1, 2, 3, 4}, {1.0, 0.0, 0.5, 0.25}, 0.1, 1.0);
  EXPECT_FALSE(fit.fitted_rate.has_value());
}

TEST(DecayFit, SurprisalVariance) {
  const ProbabilityDistribution p({0.9, 0.1});
  const double d = std::log2(0.9) - std::log2(0.1);
  EXPECT_NEAR(surprisal_variance(p), 0.09 * d * d, 1e-13);
  EXPECT_NEAR(surprisal_variance(ProbabilityDistribution({0.5, 0.5})), 0.0, 1e-15);
}

TEST(RateDemo, IdentityBoundApproachesOne) {
  // Starting at n = 4 keeps ⌊2^{n/2}⌋ from doubling between neighbours.
  const auto demo = achievable_rate_demo(identity_channel(2), 0.5, 0.1, 4, 10);
  EXPECT_TRUE(demo.rate_condition);
  EXPECT_TRUE(demo.penalty_decays);
  EXPECT_GT(demo.rows.back().bound, 0.8);
  for (std::size_t i = 1; i < demo.rows.size(); ++i) {
    EXPECT_GT(demo.rows[i].bound, demo.rows[i - 1].bound);
  }
  for (const auto& r : demo.rows) EXPECT_DOUBLE_EQ(r.transmission, 1.0);
}

TEST(RateDemo, RowsAreConsistent) {
  const auto demo = achievable_rate_demo(phase_flip(0.25), 0.1, 0.1, 2, 8);
  EXPECT_NEAR(demo.coherent_information, 1 - h2(0.25), 1e-9);
  EXPECT_FALSE(demo.rate_condition);
  ASSERT_EQ(demo.penalty_ratios.size(), demo.rows.size() - 1);
  for (const auto& r : demo.rows) {
    EXPECT_EQ(r.code_dim, std::floor(std::exp2(r.n * 0.1)));
    EXPECT_NEAR(r.bound, r.transmission - r.penalty, 1e-15);
  }
}

TEST(SubspaceInfo, KnownValues) {
  EXPECT_NEAR(subspace_restricted_info(phase_flip(0.25), CodeSubspace::standard(2, 2)),
              1 - h2(0.25), 1e-9);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const KrausChannel ch = random_channel(3, 2, 3, s);
    RngStream rng(s, 0, StreamDomain::kSamples);
    EXPECT_NEAR(subspace_restricted_info(ch, CodeSubspace(haar_isometry(3, 1, rng))), 0.0, 1e-9);
    EXPECT_NEAR(subspace_restricted_info(ch, CodeSubspace::standard(3, 3)),
                coherent_information(DensityOperator::maximally_mixed(3), ch), 1e-12);
  }
}

// F_e(C, N^⊗n) >= F_e(C, N_ε) >= F_e(C, Ñ_ε), checked with one recovery R
// built for Ñ. R ∘ T', with T' the typical projection completed to a
// channel, is a valid recovery for N_ε and for N^⊗n.
TEST(FidelityChain, ReductionNeverHelps) {
  for (int n = 2; n <= 4; ++n) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const KrausChannel ch = s == 0 ? phase_flip(0.2) : random_channel(2, 2, 2, 30 + s);
      const ReducedChannel red(ch, n, 0.3);
      if (red.length() == 0) continue;
      const KrausChannel full = tensor_power(ch, n);
      const KrausChannel typ = red.typical().materialize();
      const KrausChannel reduced = red.materialize();
      const Index d = full.input_dim();
      RngStream rng(s, static_cast<std::uint64_t>(n), StreamDomain::kSamples);
      const CodeSubspace code(haar_isometry(d, 2, rng));
      const DensityOperator pi_c = normalized_projector(code);

      const KrausChannel r = witness::transpose_channel_recovery(code, reduced);
      const ComplexMatrix p = red.projector();
      const ComplexMatrix q = ComplexMatrix::Identity(p.rows(), p.cols()) - p;
      const KrausChannel t_prime({p, q});
      const KrausChannel lifted = compose(r, t_prime);

      const double f_red = entanglement_fidelity(pi_c, compose(r, reduced));
      const double f_typ = entanglement_fidelity(pi_c, compose(lifted, typ));
      const double f_full = entanglement_fidelity(pi_c, compose(lifted, full));
      EXPECT_GE(f_typ, f_red - 1e-12) << "n=" << n;
      EXPECT_GE(f_full, f_typ - 1e-12) << "n=" << n;
    }
  }
}
