#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcap/code_fidelity.hpp"

namespace qcap {

struct TypicalSetSpec {
  ProbabilityDistribution distribution;
  int n = 1;
  double epsilon = 0.0;

  void validate() const;
};

struct TypicalSetReport {
  int n = 0;
  double epsilon = 0.0;
  double entropy = 0.0;              // H(P)
  std::uint64_t typical_count = 0;   // |ℵ_{ε,n}|
  double count_bound = 0.0;          // 2^{n(H+ε)}
  double mass = 0.0;                 // P_{ε,n}
  bool count_within_bound = false;   // typical_count <= count_bound
};

// Inclusive membership test 2^{-n(H+ε)} <= p <= 2^{-n(H-ε)} on log2 p.
bool is_typical_log2(double log2_p, int n, double entropy, double epsilon);

/// Symbols grouped by equal probability. Sequence probabilities depend only
/// on how many symbols of each group occur, so counting and summing work on
/// compositions over groups instead of individual sequences.
struct ProbabilityClasses {
  std::vector<double> probability;            // per-symbol probability
  std::vector<std::uint64_t> multiplicity;    // symbols in the class
  std::vector<std::vector<std::size_t>> members;
};

// Zero-probability symbols are left out.
ProbabilityClasses probability_classes(const std::vector<double>& weights,
                                       double rel_tol = 1e-12);

struct TypeClass {
  std::vector<int> counts;      // occurrences per probability class
  double log2_probability = 0;  // log2 of one sequence's probability
  std::uint64_t sequences = 0;  // number of sequences in the class
  double mass = 0.0;            // sequences * probability
};

// Type classes whose sequences are ε-typical.
std::vector<TypeClass> typical_type_classes(const ProbabilityClasses& classes,
                                            int n, double entropy,
                                            double epsilon);

TypicalSetReport typical_sequences(const TypicalSetSpec& spec);

// Every typical sequence as a list of symbol indices. Exact mode only:
// throws ResourceLimitError when more than 2^23 sequences would be scanned.
std::vector<std::vector<std::size_t>> enumerate_typical_sequences(
    const TypicalSetSpec& spec);

/// Typical subspace of ρ^⊗n in structured form: the eigenbasis of ρ plus the
/// typical multi-indices (base-d digits, first factor most significant).
struct TypicalSubspace {
  ComplexMatrix eigenvectors;
  RealVector eigenvalues;
  int n = 0;
  double epsilon = 0.0;
  double entropy = 0.0;     // S(ρ)
  std::uint64_t rank = 0;   // dim T_{ε,n}
  double rank_bound = 0.0;  // 2^{n(S+ε)}
  double mass = 0.0;        // tr Π ρ^⊗n
  double sum_sq = 0.0;      // Σ over typical eigenvalues of ρ^⊗n squared
};

TypicalSubspace typical_subspace(const DensityOperator& rho, int n, double epsilon);

// Typical multi-indices of a structured subspace (requires d^n <= cap).
std::vector<std::uint64_t> typical_indices(const TypicalSubspace& sub,
                                           Index cap = kDefaultDimensionCap);

// Dense projector onto T_{ε,n}.
ComplexMatrix typical_subspace_projector(const DensityOperator& rho, int n,
                                         double epsilon,
                                         Index cap = kDefaultDimensionCap);

/// P(A) = tr A†A / |Q| over the diagonal minimal Kraus operators; the
/// channel is diagonalized and minimized first. Throws DomainError for
/// trace-decreasing channels.
ProbabilityDistribution kraus_distribution(const KrausChannel& ch);

/// The ε-typical channel N_{ε,n}: the Kraus operators A_{j1} ⊗ ... ⊗ A_{jn}
/// of N^⊗n whose sequence (j1..jn) is ε-typical for kraus_distribution(N).
/// Kept in structured form (single-copy operators plus typical type
/// classes); materialize() builds the dense Kraus family under the caps.
class TypicalChannel {
 public:
  TypicalChannel(const KrausChannel& ch, int n, double epsilon);

  const KrausChannel& base() const { return base_; }
  const ProbabilityDistribution& distribution() const { return distribution_; }
  const ProbabilityClasses& classes() const { return classes_; }
  const std::vector<TypeClass>& typical_classes() const { return typical_; }
  int n() const { return n_; }
  double epsilon() const { return epsilon_; }
  double entropy_exchange() const { return entropy_; }

  std::uint64_t length() const;      // |N_{ε,n}|
  double transmission() const;       // tr N_{ε,n}(π_n) = Σ typical p_A

  // Kraus index lists of the kept operators (first factor first).
  std::vector<std::vector<std::size_t>> sequences() const;

  KrausChannel materialize(Index cap = kDefaultDimensionCap) const;

 private:
  KrausChannel base_;
  ProbabilityDistribution distribution_;
  ProbabilityClasses classes_;
  std::vector<TypeClass> typical_;
  int n_;
  double epsilon_;
  double entropy_;
};

TypicalChannel epsilon_typical_channel(const KrausChannel& ch, int n, double epsilon);

/// The ε-reduced channel Ñ_{ε,n} = T_{ε,n} ∘ N_{ε,n}, with T the projection
/// onto the typical subspace of N(π) in Q'^⊗n.
class ReducedChannel {
 public:
  ReducedChannel(const KrausChannel& ch, int n, double epsilon);

  const TypicalChannel& typical() const { return typical_; }
  const TypicalSubspace& output_subspace() const { return output_subspace_; }
  std::uint64_t length() const { return typical_.length(); }

  // Dense projector Π_{ε,n} on Q'^⊗n.
  ComplexMatrix projector(Index cap = kDefaultDimensionCap) const;

  // Kraus family {Π A : A typical}.
  KrausChannel materialize(Index cap = kDefaultDimensionCap) const;

  /// Ñ_{ε,n}(π_n) written in the eigenbasis of N(π)^⊗n, assembled without
  /// forming any n-fold Kraus operator: the sum over typical sequences of
  /// ⊗ A_j π A_j† is recovered from the multivariate generating polynomial
  /// (Σ_g z_g X_g)^⊗n by a discrete Fourier transform over the class counts.
  ComplexMatrix output_at_uniform_eigenbasis() const;

 private:
  TypicalChannel typical_;
  TypicalSubspace output_subspace_;
};

ReducedChannel epsilon_reduced_channel(const KrausChannel& ch, int n, double epsilon);

struct ReducedChannelReport {
  int n = 0;
  double epsilon = 0.0;
  std::uint64_t typical_length = 0;   // |N_{ε,n}|
  std::uint64_t length = 0;           // |Ñ_{ε,n}|
  double length_bound = 0.0;          // 2^{n(S_e(π,N)+ε)}
  double typical_transmission = 0.0;  // tr N_{ε,n}(π_n)
  double transmission = 0.0;          // tr Ñ_{ε,n}(π_n)
  double subspace_mass = 0.0;         // tr Π N(π)^⊗n
  double frobenius_sq = 0.0;          // ‖Ñ_{ε,n}(π_n)‖²_F
  double frobenius_bound = 0.0;       // 2^{-n(S(N(π)) - 3ε)}
  bool typical_length_ok = false;     // |N_{ε,n}| <= bound
  bool length_ok = false;             // |Ñ_{ε,n}| <= bound
  bool frobenius_ok = false;          // ‖.‖² <= bound
  // tr Ñ >= tr Π N^⊗n(π_n) - tr M_{ε,n}(π_n)
  bool transmission_inequality_ok = false;
};

ReducedChannelReport reduced_channel_report(const KrausChannel& ch, int n,
                                            double epsilon);

struct DecayFit {
  double epsilon = 0.0;
  std::vector<int> ns;
  std::vector<double> deviations;
  double sigma2 = 0.0;          // variance of -log2 P(a)
  double predicted_rate = 0.0;  // ε² / (2σ²)
  // Negative slope of ln(deviation) against n over the points strictly
  // inside (0, 1); empty with fewer than three such points.
  std::optional<double> fitted_rate;
};

// Var(-log2 P(a)) in bits².
double surprisal_variance(const ProbabilityDistribution& p);

DecayFit fit_decay(std::vector<int> ns, std::vector<double> deviations,
                   double epsilon, double sigma2);

// 1 - P_{ε,n} for n in [n_min, n_max] with its log-linear fit.
DecayFit typical_sequence_decay(const ProbabilityDistribution& p, double epsilon,
                                int n_min, int n_max);

struct ReducedRelationsReport {
  double epsilon = 0.0;
  std::vector<ReducedChannelReport> rows;
  DecayFit typical_decay;  // 1 - tr N_{ε,n}(π_n)
  DecayFit reduced_decay;  // 1 - tr Ñ_{ε,n}(π_n)
  bool hard_relations_hold = false;
};

ReducedRelationsReport verify_reduced_relations(const KrausChannel& ch, int n_min, int n_max,
                                  double epsilon);

struct RateRow {
  int n = 0;
  double code_dim = 0.0;  // K_n = ⌊2^{nR}⌋
  std::uint64_t reduced_length = 0;
  double transmission = 0.0;
  double penalty = 0.0;   // √(K_n |Ñ|) ‖Ñ(π_n)‖_F
  double bound = 0.0;     // transmission - penalty
};

struct RateDemo {
  double rate = 0.0;
  double epsilon = 0.0;
  double coherent_information = 0.0;  // I(π, N)
  bool rate_condition = false;        // R + 4ε < I(π, N)
  std::vector<RateRow> rows;
  // penalty[n+1] / penalty[n]; empty where the ratio is undefined.
  std::vector<std::optional<double>> penalty_ratios;
  bool penalty_decays = false;  // every ratio defined and < 1
  bool penalty_grows = false;   // every ratio defined and > 1
};

RateDemo achievable_rate_demo(const KrausChannel& ch, double rate, double epsilon,
                              int n_min, int n_max);

// I(π_V, N) for the normalized projector onto the code space V.
double subspace_restricted_info(const KrausChannel& ch, const CodeSubspace& code);

}  // namespace qcap
