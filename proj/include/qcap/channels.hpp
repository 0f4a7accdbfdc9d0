#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcap/matrix_core.hpp"

namespace qcap {

/// A completely positive map ρ ↦ Σ A_k ρ A_k† given by its Kraus operators.
///
/// Trace-decreasing maps (Σ A_k†A_k ≤ 1) are first-class values: they arise
/// as reductions of trace-preserving channels. Construction rejects Kraus
/// families whose completeness defect Σ A_k†A_k - 1 has an eigenvalue above
/// kHermitianTol.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus, std::string name = {});

  Index input_dim() const { return kraus_.front().cols(); }
  Index output_dim() const { return kraus_.front().rows(); }
  std::size_t size() const { return kraus_.size(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  const ComplexMatrix& operator[](std::size_t k) const { return kraus_[k]; }
  const std::string& name() const { return name_; }

  // Σ A_k† A_k.
  ComplexMatrix completeness() const;
  // Max eigenvalue of Σ A_k†A_k - 1 (<= 0 up to tolerance for valid maps).
  double completeness_defect() const;
  bool is_trace_preserving(double tol = kTraceTol) const;

  KrausChannel renamed(std::string name) const;

 private:
  std::vector<ComplexMatrix> kraus_;
  std::string name_;
};

struct ChannelInfoReport {
  bool is_trace_preserving = false;
  bool is_unital = false;
  bool is_uniform = false;
  std::size_t length = 0;
  // Entropic quantities at π are defined only for trace-preserving channels.
  std::optional<double> output_entropy;
  std::optional<double> entropy_exchange;
  std::optional<double> coherent_information;
};

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho);
ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho);

double transmission_probability(const KrausChannel& ch,
                                const DensityOperator& rho);

// Stacked Kraus operators [A_1; A_2; ...; A_N], i.e. V on E ⊗ Q' with the
// environment index slow: A_k = <k|V.
ComplexMatrix stinespring_isometry(const KrausChannel& ch);

// Splits the rows of v into env_dim blocks. With require_isometry, throws
// DomainError unless V†V = 1 within kHermitianTol.
KrausChannel kraus_from_isometry(const ComplexMatrix& v, Index env_dim,
                                 bool require_isometry = false);

// H_ij = tr A_i† A_j.
ComplexMatrix gram_matrix(const KrausChannel& ch);

// Unitary remixing of the Kraus operators so that the Gram matrix becomes
// diagonal; operators are ordered by decreasing weight tr A†A.
KrausChannel diagonalize_kraus(const KrausChannel& ch);

// Diagonal form with the zero-weight operators dropped (length |N|).
KrausChannel minimize_kraus(const KrausChannel& ch);

// Rank of the Gram matrix, counting eigenvalues > 1e-10 * largest.
std::size_t minimal_length(const KrausChannel& ch);

KrausChannel tensor_product(const KrausChannel& a, const KrausChannel& b,
                            Index cap = kDefaultDimensionCap);
KrausChannel tensor_power(const KrausChannel& ch, int n,
                          Index cap = kDefaultDimensionCap);

// Sub-channel on the given (0-based) Kraus indices.
KrausChannel reduce(const KrausChannel& ch, const std::vector<std::size_t>& indices);

// Kraus family of `second ∘ first`.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

// Minimal purification Σ √λ_i |i_R>|v_i> of ρ with R of dimension rank(ρ);
// returned as a vector on R ⊗ Q together with the R dimension.
struct Purification {
  ComplexVector state;
  Index ancilla_dim = 0;
};
Purification purify(const DensityOperator& rho);

/// S_e(ρ, N) = S(W) with W_ij = tr(A_i ρ A_j†).
double entropy_exchange(const DensityOperator& rho, const KrausChannel& ch);

// S((1_R ⊗ N)(ψ_RQ)) on an explicit purification; independent route.
double entropy_exchange_purified(const DensityOperator& rho,
                                 const KrausChannel& ch);

double coherent_information(const DensityOperator& rho, const KrausChannel& ch);

ChannelInfoReport classify(const KrausChannel& ch);

// Extensional equality: same action on a fixed pseudo-random state battery.
bool channels_equivalent(const KrausChannel& a, const KrausChannel& b,
                         double tol = 1e-10, int battery_size = 20);

// Deterministic battery of random input states used by channels_equivalent.
std::vector<DensityOperator> state_battery(Index dim, int count,
                                           std::uint64_t seed = 0x5eed);

// Random density operator of full rank drawn from the Hilbert-Schmidt
// (Ginibre) ensemble; `rank` limits the support when positive.
DensityOperator random_density(Index dim, RngStream& rng, Index rank = 0);

// Constructors.
KrausChannel identity_channel(Index dim);
KrausChannel phase_flip(double p);
KrausChannel depolarizing(double p);
KrausChannel amplitude_damping(double gamma);
KrausChannel random_unitary(const std::vector<ComplexMatrix>& unitaries,
                            const std::vector<double>& probabilities);
// Isometry Q -> Q' ⊗ E drawn from the Haar measure, split into N Kraus ops.
KrausChannel haar_random_channel(Index input_dim, Index output_dim,
                                 Index kraus_count, RngStream& rng);
// `count` Haar unitaries on C^dim applied with equal probability.
KrausChannel haar_random_unitary_channel(Index dim, Index count, RngStream& rng);

}  // namespace qcap
