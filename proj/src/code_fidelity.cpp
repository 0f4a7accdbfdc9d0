#include "qcap/code_fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap {

namespace {

void require_code_in_input(const CodeSubspace& code, const KrausChannel& ch) {
  if (code.ambient_dim() != ch.input_dim()) {
    std::ostringstream msg;
    msg << "code of ambient dimension " << code.ambient_dim()
        << " does not live in the channel input of dimension "
        << ch.input_dim();
    throw InputError(msg.str());
  }
}

// A_i P for every Kraus operator.
std::vector<ComplexMatrix> compressed_kraus(const CodeSubspace& code,
                                            const KrausChannel& ch) {
  std::vector<ComplexMatrix> out;
  out.reserve(ch.size());
  for (const auto& a : ch.kraus()) out.push_back(a * code.basis());
  return out;
}

// Pseudo-inverse square root of a PSD operator; eigenvalues at or below
// rel * largest are treated as zero. Also returns the kernel projector.
std::pair<ComplexMatrix, ComplexMatrix> inverse_sqrt_with_kernel(
    const ComplexMatrix& h, double rel) {
  const auto dec = eigh(0.5 * (h + h.adjoint()));
  const double top = std::max(dec.values.maxCoeff(), 0.0);
  const Index n = h.rows();
  RealVector inv(n);
  RealVector ker(n);
  for (Index i = 0; i < n; ++i) {
    const bool kept = top > 0.0 && dec.values[i] > rel * top;
    inv[i] = kept ? 1.0 / std::sqrt(dec.values[i]) : 0.0;
    ker[i] = kept ? 0.0 : 1.0;
  }
  return {dec.vectors * inv.asDiagonal() * dec.vectors.adjoint(),
          dec.vectors * ker.asDiagonal() * dec.vectors.adjoint()};
}

}  // namespace

CodeSubspace::CodeSubspace(ComplexMatrix basis) : basis_(std::move(basis)) {
  const Index m = basis_.rows();
  const Index k = basis_.cols();
  if (k < 1 || m < 1 || k > m) {
    throw InputError("code basis must be M x K with 1 <= K <= M");
  }
  const ComplexMatrix defect =
      basis_.adjoint() * basis_ - ComplexMatrix::Identity(k, k);
  if (defect.cwiseAbs().maxCoeff() > kHermitianTol) {
    throw DomainError("code basis columns are not orthonormal");
  }
}

CodeSubspace CodeSubspace::standard(Index ambient_dim, Index code_dim) {
  if (code_dim < 1 || code_dim > ambient_dim) {
    throw InputError("standard code: need 1 <= K <= M");
  }
  return CodeSubspace(ComplexMatrix::Identity(ambient_dim, code_dim));
}

double CodeSubspace::size_qubits() const {
  return std::log2(static_cast<double>(code_dim()));
}

DensityOperator normalized_projector(const CodeSubspace& code) {
  const ComplexMatrix& p = code.basis();
  ComplexMatrix pi = p * p.adjoint() / static_cast<double>(code.code_dim());
  pi = 0.5 * (pi + pi.adjoint());
  return DensityOperator(std::move(pi));
}

double entanglement_fidelity(const DensityOperator& rho, const KrausChannel& ch) {
  if (rho.dim() != ch.input_dim() || ch.input_dim() != ch.output_dim()) {
    throw InputError("entanglement_fidelity: channel must map the state's space to itself");
  }
  double fe = 0.0;
  for (const auto& a : ch.kraus()) {
    // tr(ρ A) = Σ ρ ∘ A^T
    const Complex t = rho.matrix().cwiseProduct(a.transpose()).sum();
    fe += std::norm(t);
  }
  return fe;
}

double entanglement_fidelity_purified(const DensityOperator& rho,
                                      const KrausChannel& ch) {
  if (rho.dim() != ch.input_dim() || ch.input_dim() != ch.output_dim()) {
    throw InputError("entanglement_fidelity: channel must map the state's space to itself");
  }
  const Purification pur = purify(rho);
  const Index d = rho.dim();
  double fe = 0.0;
  for (const auto& a : ch.kraus()) {
    // <ψ|(1 ⊗ A)|ψ>, then |.|² summed over Kraus operators.
    Complex amp = 0.0;
    for (Index k = 0; k < pur.ancilla_dim; ++k) {
      const auto seg = pur.state.segment(k * d, d);
      amp += seg.dot(a * seg);
    }
    fe += std::norm(amp);
  }
  return fe;
}

double average_fidelity_from_fe(Index code_dim, double fe) {
  if (code_dim < 1) throw InputError("average_fidelity_from_fe: K must be >= 1");
  if (!(fe >= 0.0 && fe <= 1.0)) {
    throw InputError("average_fidelity_from_fe: fe must lie in [0, 1]");
  }
  const double k = static_cast<double>(code_dim);
  return (k * fe + 1.0) / (k + 1.0);
}

ComplexMatrix d_operator(const CodeSubspace& code, const KrausChannel& ch) {
  require_code_in_input(code, ch);
  const auto g = compressed_kraus(code, ch);
  const Index k = code.code_dim();
  const auto n = static_cast<Index>(ch.size());
  const double kd = static_cast<double>(k);
  ComplexMatrix d(n * k, n * k);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      ComplexMatrix block = g[i].adjoint() * g[j];
      const Complex tr = block.trace();
      block /= kd;
      block.diagonal().array() -= tr / (kd * kd);
      d.block(i * k, j * k, k, k) = block;
      if (i != j) d.block(j * k, i * k, k, k) = block.adjoint();
    }
  }
  return d;
}

BoundReport fidelity_lower_bound_kraus(const CodeSubspace& code,
                                       const KrausChannel& ch) {
  const ComplexMatrix d = d_operator(code, ch);
  BoundReport report;
  double p = 0.0;
  const Index k = code.code_dim();
  for (Index i = 0; i < static_cast<Index>(ch.size()); ++i) {
    // tr(π_C A_i† A_i) from the diagonal blocks before centering.
    const ComplexMatrix ap = ch[i] * code.basis();
    p += ap.squaredNorm();
  }
  p /= static_cast<double>(k);
  report.p = p;
  report.trace_norm_d = trace_norm(d);
  report.frobenius_d_sq = d.squaredNorm();
  report.bound_kraus = p - report.trace_norm_d;
  return report;
}

BoundReport fidelity_lower_bound_states(const CodeSubspace& code,
                                        const KrausChannel& ch) {
  require_code_in_input(code, ch);
  const Index k = code.code_dim();
  const auto n = static_cast<Index>(ch.size());
  const Index out = ch.output_dim();
  const double kd = static_cast<double>(k);

  // Unnormalized final state on R ⊗ E ⊗ Q' reshaped to (R E) x Q':
  // row l * N + i holds (A_i c_l)^T / √K.
  ComplexMatrix psi(k * n, out);
  for (Index i = 0; i < n; ++i) {
    const ComplexMatrix ap = ch[i] * code.basis();
    for (Index l = 0; l < k; ++l) {
      psi.row(l * n + i) = ap.col(l).transpose() / std::sqrt(kd);
    }
  }
  const double p = psi.squaredNorm();
  if (p < 1e-12) {
    throw DomainError("state-form bound: transmission probability is zero");
  }
  ComplexMatrix rho_re = psi * psi.adjoint() / p;
  rho_re = 0.5 * (rho_re + rho_re.adjoint());
  const ComplexMatrix rho_e = partial_trace(rho_re, k, n, Subsystem::B);
  const ComplexMatrix rho_r = ComplexMatrix::Identity(k, k) / kd;
  ComplexMatrix diff = rho_re - tensor(rho_r, rho_e);
  diff = 0.5 * (diff + diff.adjoint());

  BoundReport report;
  report.p = p;
  report.bound_states = p - p * trace_norm(diff);
  return report;
}

BoundReport fidelity_bounds(const CodeSubspace& code, const KrausChannel& ch) {
  BoundReport report = fidelity_lower_bound_kraus(code, ch);
  if (report.p >= 1e-12) {
    report.bound_states = fidelity_lower_bound_states(code, ch).bound_states;
  }
  return report;
}

namespace witness {

KrausChannel transpose_channel_recovery(const CodeSubspace& code,
                                        const KrausChannel& ch) {
  require_code_in_input(code, ch);
  const ComplexMatrix sigma = normalized_projector(code).matrix();
  const ComplexMatrix sigma_sqrt = psd_sqrt(sigma);
  const ComplexMatrix out = apply(ch, sigma);
  const auto [inv_sqrt, kernel] = inverse_sqrt_with_kernel(out, 1e-12);

  std::vector<ComplexMatrix> ops;
  for (const auto& a : ch.kraus()) {
    ops.push_back(sigma_sqrt * a.adjoint() * inv_sqrt);
  }
  // Route the complement of supp N(π_C) to the first code vector.
  const auto dec = eigh(0.5 * (kernel + kernel.adjoint()));
  for (Index i = 0; i < dec.values.size(); ++i) {
    if (dec.values[i] > 0.5) {
      ops.push_back(code.basis().col(0) * dec.vectors.col(i).adjoint());
    }
  }
  return KrausChannel(std::move(ops), "transpose_recovery");
}

KrausChannel iterated_recovery(const CodeSubspace& code, const KrausChannel& ch,
                               int iterations) {
  require_code_in_input(code, ch);
  const Index dq = ch.input_dim();
  const Index dout = ch.output_dim();
  const Index dim = dq * dout;
  const ComplexMatrix rho = normalized_projector(code).matrix();

  // F_e(ρ, R∘N) = tr(J X) with r_k(a * dout + b) = (R_k)_ab and
  // J = Σ r_k r_k†, m_l(a * dout + b) = (A_l ρ)_ba, X = Σ conj(m_l) m_l^T.
  ComplexMatrix x = ComplexMatrix::Zero(dim, dim);
  for (const auto& a : ch.kraus()) {
    const ComplexMatrix ar = a * rho;
    ComplexVector m(dim);
    for (Index qa = 0; qa < dq; ++qa) {
      for (Index b = 0; b < dout; ++b) m(qa * dout + b) = ar(b, qa);
    }
    x.noalias() += m.conjugate() * m.transpose();
  }
  x = 0.5 * (x + x.adjoint());

  ComplexMatrix j = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dq);
  const ComplexMatrix id_q = ComplexMatrix::Identity(dq, dq);
  for (int it = 0; it < iterations; ++it) {
    ComplexMatrix next = j * x * j;
    next = 0.5 * (next + next.adjoint());
    const ComplexMatrix lambda = partial_trace(next, dq, dout, Subsystem::B);
    const auto [s, kernel] = inverse_sqrt_with_kernel(lambda, 1e-13);
    const ComplexMatrix lift = tensor(id_q, s);
    j = lift * next * lift.adjoint() +
        tensor(id_q / static_cast<double>(dq), kernel);
    j = 0.5 * (j + j.adjoint());
  }

  const auto dec = eigh(j);
  std::vector<ComplexMatrix> ops;
  for (Index c = 0; c < dec.values.size(); ++c) {
    if (dec.values[c] <= 1e-14) continue;
    const ComplexVector r = std::sqrt(dec.values[c]) * dec.vectors.col(c);
    ComplexMatrix op(dq, dout);
    for (Index qa = 0; qa < dq; ++qa) {
      for (Index b = 0; b < dout; ++b) op(qa, b) = r(qa * dout + b);
    }
    ops.push_back(std::move(op));
  }
  return KrausChannel(std::move(ops), "iterated_recovery");
}

}  // namespace witness

}  // namespace qcap
