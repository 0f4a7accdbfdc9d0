#pragma once

#include <optional>

#include "qcap/channels.hpp"

namespace qcap {

/// A K-dimensional code C inside an M-dimensional input space, stored as an
/// M x K matrix with orthonormal columns.
class CodeSubspace {
 public:
  explicit CodeSubspace(ComplexMatrix basis);

  // The span of the first k computational basis vectors.
  static CodeSubspace standard(Index ambient_dim, Index code_dim);

  const ComplexMatrix& basis() const { return basis_; }
  Index ambient_dim() const { return basis_.rows(); }
  Index code_dim() const { return basis_.cols(); }
  // log2 K qubits.
  double size_qubits() const;

 private:
  ComplexMatrix basis_;
};

struct BoundReport {
  double p = 0.0;               // tr N(π_C)
  double trace_norm_d = 0.0;    // ‖D‖₁
  double bound_kraus = 0.0;     // p - ‖D‖₁
  std::optional<double> bound_states;  // p - p‖ρ'_RE - ρ_R ⊗ ρ'_E‖₁
  double frobenius_d_sq = 0.0;  // ‖D‖²_F
};

// π_C = Π_C / K.
DensityOperator normalized_projector(const CodeSubspace& code);

/// F_e(ρ, E) = Σ_k |tr ρ A_k|². Valid for trace-decreasing channels.
double entanglement_fidelity(const DensityOperator& rho, const KrausChannel& ch);

// <ψ|(1 ⊗ E)(ψ)|ψ> on the minimal purification; needs square channels.
double entanglement_fidelity_purified(const DensityOperator& rho,
                                      const KrausChannel& ch);

// (K F_e + 1) / (K + 1).
double average_fidelity_from_fe(Index code_dim, double fe);

/// The D operator in the compressed code basis, size (N K) x (N K).
///
/// Block (i, j) (environment index slow) is
///   P† W_ij P / K - tr(P† W_ij P) 1_K / K²,   W_ij = A_i† A_j,
/// which is the ambient-space definition restricted to the support of π_C.
ComplexMatrix d_operator(const CodeSubspace& code, const KrausChannel& ch);

// Fills p, ‖D‖₁, ‖D‖²_F and p - ‖D‖₁.
BoundReport fidelity_lower_bound_kraus(const CodeSubspace& code,
                                       const KrausChannel& ch);

/// Evaluates the state form p - p‖ρ'_RE - ρ_R ⊗ ρ'_E‖₁ from the purified
/// final state (1_R ⊗ V)ψ_RQ / √p and returns a report with bound_states set
/// (and the Kraus-form fields left at zero). Throws DomainError when
/// p < 1e-12.
BoundReport fidelity_lower_bound_states(const CodeSubspace& code,
                                        const KrausChannel& ch);

// Both forms in one report.
BoundReport fidelity_bounds(const CodeSubspace& code, const KrausChannel& ch);

// Recovery witnesses for soundness checks. These are not part of the bound
// machinery: they only exhibit some recovery R with a known F_e(π_C, R∘N).
namespace witness {

// Transpose-channel (Petz) recovery for reference state π_C, completed to a
// trace-preserving map on the orthogonal complement of supp N(π_C).
KrausChannel transpose_channel_recovery(const CodeSubspace& code,
                                        const KrausChannel& ch);

// Monotone fixed-point iteration on the Choi operator of the recovery
// (linear objective F_e(π_C, R∘N), constraint tr_Q J = 1_Q').
KrausChannel iterated_recovery(const CodeSubspace& code, const KrausChannel& ch,
                               int iterations = 400);

}  // namespace witness

}  // namespace qcap
