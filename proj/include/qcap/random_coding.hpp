#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcap/code_fidelity.hpp"

namespace qcap {

// Statistical acceptance threshold, in standard errors.
inline constexpr double kStandardErrorThreshold = 4.0;

struct EnsembleSpec {
  Index ambient_dim = 0;
  Index code_dim = 0;
  std::uint64_t sample_count = 0;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct EnsembleEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / √n
  std::uint64_t sample_count = 0;
  std::uint64_t master_seed = 0;
};

// Mean and standard error of per-sample values, aggregated pairwise in index
// order.
EnsembleEstimate estimate_from_samples(std::span<const double> values,
                                       std::uint64_t master_seed);

// |mean - target| <= k SE, with an absolute floor of 1e-12 so that
// zero-variance ensembles compare against exact values.
bool within_standard_errors(const EnsembleEstimate& est, double target,
                            double k = kStandardErrorThreshold);

/// Coefficients of b(V, W) = α tr V†W + β tr V† tr W.
struct BFormCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
};

// Haar-random K-dimensional code: first K columns of a Haar unitary.
CodeSubspace sample_code(Index ambient_dim, Index code_dim, RngStream& rng);

/// Closed-form Haar average of ‖D‖²_F:
///   (1 - K⁻²)/(M² - 1) Σ_ij (tr W_ij†W_ij - |tr W_ij|² / M),  W_ij = A_i†A_j.
double exact_average_d2(const KrausChannel& ch, Index code_dim);

// ‖N(π)‖²_F, the majorant of exact_average_d2.
double upper_bound_d2(const KrausChannel& ch);

// tr N(π) - √(K |N|) ‖N(π)‖_F with |N| the minimal Kraus length.
double averaged_fidelity_bound(const KrausChannel& ch, Index code_dim);

struct EnsembleReport {
  EnsembleSpec spec;
  std::size_t length = 0;          // |N| after minimization
  EnsembleEstimate bound;          // p - ‖D‖₁
  EnsembleEstimate transmission;   // p
  EnsembleEstimate trace_norm_d;   // ‖D‖₁
  EnsembleEstimate frobenius_d_sq; // ‖D‖²_F
  double exact_d2 = 0.0;
  double upper_d2 = 0.0;
  double averaged_bound = 0.0;
  // √(K N ⟨‖D‖²_F⟩) evaluated at the exact average; majorizes ⟨‖D‖₁⟩.
  double jensen_majorant = 0.0;
  bool d2_matches_exact = false;       // MC ⟨‖D‖²⟩ vs closed form at 4 SE
  bool bound_above_average = false;    // MC mean >= averaged bound - 4 SE
  bool exact_below_upper = false;
  bool jensen_holds = false;           // ⟨‖D‖₁⟩ <= majorant + 4 SE
};

// Monte Carlo over Haar codes of the Kraus-form bound and its ingredients.
EnsembleReport run_ensemble(const KrausChannel& ch, const EnsembleSpec& spec,
                            int threads = 1);

EnsembleEstimate mc_average_bound(const KrausChannel& ch, Index code_dim,
                                  std::uint64_t samples, std::uint64_t seed,
                                  int threads = 1);

struct ComplexEstimate {
  Complex mean;
  double std_error_re = 0.0;
  double std_error_im = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t master_seed = 0;
};

// Per-code value of tr(π_C V† π_C W) - tr(π_C V†) tr(π_C W) / K.
Complex b_form_sample(const ComplexMatrix& v, const ComplexMatrix& w,
                      const CodeSubspace& code);

ComplexEstimate b_form_mc(const ComplexMatrix& v, const ComplexMatrix& w,
                          Index code_dim, std::uint64_t samples,
                          std::uint64_t seed, int threads = 1);

/// α = (1 - K⁻²)/(M² - 1), β = -α/M. These satisfy α + β = (1-K⁻²)/(M²+M)
/// and αM + βM² = 0, the latter being b(1, 1) evaluated per sample.
BFormCoefficients b_form_coefficients(Index ambient_dim, Index code_dim);

Complex b_form_closed(const ComplexMatrix& v, const ComplexMatrix& w,
                      Index code_dim);

struct MomentCheck {
  std::string name;
  EnsembleEstimate estimate;
  double closed_form = 0.0;
  bool pass = false;
};

struct HaarMomentReport {
  Index ambient_dim = 0;
  Index code_dim = 0;
  std::vector<MomentCheck> moments;
  bool all_pass = false;
};

// E|U11|⁴ = 2/(M²+M), E|U11|²|U12|² = 1/(M²+M) and
// E<ψ|π_C|ψ>² = (1 + 1/K)/(M²+M), each with a 4 SE pass flag.
HaarMomentReport haar_moment_suite(Index ambient_dim, Index code_dim,
                                   std::uint64_t samples, std::uint64_t seed,
                                   int threads = 1);

struct HammingRow {
  int n = 0;
  double code_dim = 0.0;   // ⌊2^{nR}⌋
  double bound = 0.0;      // 1 - (2^R |U| / |Q'|)^{n/2}
  double bound_floor = 0.0;  // 1 - √(K_n |U|^n / |Q'|^n)
};

struct HammingCurve {
  double rate = 0.0;
  std::size_t length = 0;
  Index output_dim = 0;
  double capacity_bound = 0.0;  // log2|Q'| - log2|U|
  bool converges = false;       // rate < capacity_bound
  std::vector<HammingRow> rows;
};

// Averaged bound for U^⊗n at K_n = ⌊2^{nR}⌋; throws DomainError unless
// the channel is unital.
HammingCurve hamming_rate_curve(const KrausChannel& ch, double rate, int n_min,
                                int n_max);

}  // namespace qcap
