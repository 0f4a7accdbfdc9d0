#include "qcap/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap {

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << what << ": parameter " << p << " outside [0, 1]";
    throw InputError(msg.str());
  }
}

void require_trace_preserving(const KrausChannel& ch, const char* what) {
  if (!ch.is_trace_preserving()) {
    std::ostringstream msg;
    msg << what << " is defined for trace-preserving channels only";
    throw DomainError(msg.str());
  }
}

void require_input_dim(const KrausChannel& ch, Index dim, const char* what) {
  if (ch.input_dim() != dim) {
    std::ostringstream msg;
    msg << what << ": state of dimension " << dim
        << " does not match channel input dimension " << ch.input_dim();
    throw InputError(msg.str());
  }
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, std::string name)
    : kraus_(std::move(kraus)), name_(std::move(name)) {
  if (kraus_.empty()) throw InputError("channel needs at least one Kraus operator");
  const Index rows = kraus_.front().rows();
  const Index cols = kraus_.front().cols();
  if (rows < 1 || cols < 1) throw InputError("Kraus operators must be non-empty");
  for (const auto& a : kraus_) {
    if (a.rows() != rows || a.cols() != cols) {
      throw InputError("Kraus operators have inconsistent dimensions");
    }
    if (!a.allFinite()) throw InputError("Kraus operator has non-finite entries");
  }
  const double defect = completeness_defect();
  if (defect > kHermitianTol) {
    std::ostringstream msg;
    msg << "Kraus family is not trace-nonincreasing (completeness defect "
        << defect << ")";
    throw DomainError(msg.str());
  }
}

ComplexMatrix KrausChannel::completeness() const {
  ComplexMatrix sum = ComplexMatrix::Zero(input_dim(), input_dim());
  for (const auto& a : kraus_) sum.noalias() += a.adjoint() * a;
  return sum;
}

double KrausChannel::completeness_defect() const {
  const ComplexMatrix defect =
      completeness() - ComplexMatrix::Identity(input_dim(), input_dim());
  return eigh(defect).values.maxCoeff();
}

bool KrausChannel::is_trace_preserving(double tol) const {
  const ComplexMatrix defect =
      completeness() - ComplexMatrix::Identity(input_dim(), input_dim());
  return eigh(defect).values.cwiseAbs().maxCoeff() <= tol;
}

KrausChannel KrausChannel::renamed(std::string name) const {
  KrausChannel copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.input_dim() || rho.cols() != ch.input_dim()) {
    throw InputError("apply: operator does not match channel input dimension");
  }
  ComplexMatrix out = ComplexMatrix::Zero(ch.output_dim(), ch.output_dim());
  for (const auto& a : ch.kraus()) out.noalias() += a * rho * a.adjoint();
  return out;
}

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho) {
  require_input_dim(ch, rho.dim(), "apply");
  ComplexMatrix out = apply(ch, rho.matrix());
  const double tr = out.trace().real();
  const bool normalized = std::abs(tr - 1.0) <= kTraceTol;
  return DensityOperator(std::move(out), normalized);
}

double transmission_probability(const KrausChannel& ch,
                                const DensityOperator& rho) {
  require_input_dim(ch, rho.dim(), "transmission_probability");
  double tr = 0.0;
  for (const auto& a : ch.kraus()) {
    tr += (a * rho.matrix() * a.adjoint()).trace().real();
  }
  return tr;
}

ComplexMatrix stinespring_isometry(const KrausChannel& ch) {
  const Index out = ch.output_dim();
  ComplexMatrix v(out * static_cast<Index>(ch.size()), ch.input_dim());
  for (std::size_t k = 0; k < ch.size(); ++k) {
    v.middleRows(static_cast<Index>(k) * out, out) = ch[k];
  }
  return v;
}

KrausChannel kraus_from_isometry(const ComplexMatrix& v, Index env_dim,
                                 bool require_isometry) {
  if (env_dim < 1 || v.rows() % env_dim != 0) {
    throw InputError("kraus_from_isometry: rows not divisible by env_dim");
  }
  if (require_isometry) {
    const ComplexMatrix defect =
        v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols());
    if (defect.cwiseAbs().maxCoeff() > kHermitianTol) {
      throw DomainError("kraus_from_isometry: V is not an isometry");
    }
  }
  const Index out = v.rows() / env_dim;
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(static_cast<std::size_t>(env_dim));
  for (Index k = 0; k < env_dim; ++k) kraus.push_back(v.middleRows(k * out, out));
  return KrausChannel(std::move(kraus));
}

ComplexMatrix gram_matrix(const KrausChannel& ch) {
  const auto n = static_cast<Index>(ch.size());
  ComplexMatrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      // tr A_i† A_j = Σ conj(A_i) ∘ A_j
      const Complex v = ch[i].cwiseProduct(ch[j].conjugate()).sum();
      h(i, j) = std::conj(v);
      h(j, i) = v;
    }
  }
  return h;
}

KrausChannel diagonalize_kraus(const KrausChannel& ch) {
  const ComplexMatrix h = gram_matrix(ch);
  const auto dec = eigh(h);
  const Index n = h.rows();
  std::vector<ComplexMatrix> ops;
  ops.reserve(ch.size());
  for (Index m = n - 1; m >= 0; --m) {
    ComplexMatrix a = ComplexMatrix::Zero(ch.output_dim(), ch.input_dim());
    for (Index j = 0; j < n; ++j) a += dec.vectors(j, m) * ch[j];
    ops.push_back(std::move(a));
  }
  return KrausChannel(std::move(ops), ch.name());
}

KrausChannel minimize_kraus(const KrausChannel& ch) {
  const KrausChannel diag = diagonalize_kraus(ch);
  const std::size_t rank = minimal_length(ch);
  if (rank == 0) {
    return KrausChannel({ComplexMatrix::Zero(ch.output_dim(), ch.input_dim())},
                        ch.name());
  }
  std::vector<ComplexMatrix> ops(diag.kraus().begin(),
                                 diag.kraus().begin() + static_cast<long>(rank));
  return KrausChannel(std::move(ops), ch.name());
}

std::size_t minimal_length(const KrausChannel& ch) {
  const RealVector values = eigh(gram_matrix(ch)).values;
  const double top = values.maxCoeff();
  if (!(top > 0.0)) return 0;
  std::size_t rank = 0;
  for (Index i = 0; i < values.size(); ++i) {
    if (values[i] > 1e-10 * top) ++rank;
  }
  return rank;
}

KrausChannel tensor_product(const KrausChannel& a, const KrausChannel& b,
                            Index cap) {
  const Index out = a.output_dim() * b.output_dim();
  const Index count = static_cast<Index>(a.size() * b.size());
  check_dimension_cap(out, a.input_dim() * b.input_dim(), cap);
  check_dimension_cap(out * count, 1, cap);
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(count));
  for (const auto& x : a.kraus()) {
    for (const auto& y : b.kraus()) ops.push_back(tensor(x, y, cap));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel tensor_power(const KrausChannel& ch, int n, Index cap) {
  if (n < 1) throw InputError("tensor_power: n must be >= 1");
  KrausChannel result = ch;
  for (int i = 1; i < n; ++i) result = tensor_product(result, ch, cap);
  std::ostringstream name;
  if (!ch.name().empty()) name << ch.name() << "^" << n;
  return result.renamed(name.str());
}

KrausChannel reduce(const KrausChannel& ch,
                    const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw InputError("reduce: empty Kraus subset");
  std::vector<ComplexMatrix> ops;
  ops.reserve(indices.size());
  for (std::size_t k : indices) {
    if (k >= ch.size()) throw InputError("reduce: Kraus index out of range");
    ops.push_back(ch[k]);
  }
  return KrausChannel(std::move(ops));
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.input_dim() != first.output_dim()) {
    throw InputError("compose: dimension mismatch");
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(second.size() * first.size());
  for (const auto& b : second.kraus()) {
    for (const auto& a : first.kraus()) ops.push_back(b * a);
  }
  return KrausChannel(std::move(ops));
}

Purification purify(const DensityOperator& rho) {
  const auto dec = eigh(rho.matrix());
  const Index d = rho.dim();
  std::vector<Index> support;
  for (Index i = d - 1; i >= 0; --i) {
    if (dec.values[i] > kPsdTol) support.push_back(i);
  }
  const auto r = static_cast<Index>(support.size());
  ComplexVector psi = ComplexVector::Zero(r * d);
  for (Index k = 0; k < r; ++k) {
    const Index i = support[static_cast<std::size_t>(k)];
    psi.segment(k * d, d) = std::sqrt(dec.values[i]) * dec.vectors.col(i);
  }
  return {psi, r};
}

double entropy_exchange(const DensityOperator& rho, const KrausChannel& ch) {
  require_input_dim(ch, rho.dim(), "entropy_exchange");
  require_trace_preserving(ch, "entropy_exchange");
  if (!rho.normalized()) throw DomainError("entropy_exchange needs a normalized state");
  const auto n = static_cast<Index>(ch.size());
  std::vector<ComplexMatrix> rho_a;
  rho_a.reserve(ch.size());
  for (const auto& a : ch.kraus()) rho_a.push_back(a * rho.matrix());
  ComplexMatrix w(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      // tr(A_i ρ A_j†) = Σ (A_i ρ) ∘ conj(A_j)
      const Complex v = rho_a[i].cwiseProduct(ch[j].conjugate()).sum();
      w(i, j) = v;
      w(j, i) = std::conj(v);
    }
  }
  return von_neumann_entropy(DensityOperator(w));
}

double entropy_exchange_purified(const DensityOperator& rho,
                                 const KrausChannel& ch) {
  require_input_dim(ch, rho.dim(), "entropy_exchange_purified");
  require_trace_preserving(ch, "entropy_exchange_purified");
  const Purification pur = purify(rho);
  const Index d = rho.dim();
  const Index out = ch.output_dim();
  const Index r = pur.ancilla_dim;
  ComplexMatrix joint = ComplexMatrix::Zero(r * out, r * out);
  for (const auto& a : ch.kraus()) {
    ComplexVector phi(r * out);
    for (Index k = 0; k < r; ++k) {
      phi.segment(k * out, out) = a * pur.state.segment(k * d, d);
    }
    joint.noalias() += phi * phi.adjoint();
  }
  return von_neumann_entropy(DensityOperator(joint));
}

double coherent_information(const DensityOperator& rho, const KrausChannel& ch) {
  const double se = entropy_exchange(rho, ch);
  const DensityOperator out = apply(ch, rho);
  return von_neumann_entropy(out) - se;
}

ChannelInfoReport classify(const KrausChannel& ch) {
  ChannelInfoReport report;
  report.is_trace_preserving = ch.is_trace_preserving();
  report.length = minimal_length(ch);

  const DensityOperator pi = DensityOperator::maximally_mixed(ch.input_dim());
  const ComplexMatrix out = apply(ch, pi.matrix());
  const ComplexMatrix target =
      ComplexMatrix::Identity(ch.output_dim(), ch.output_dim()) /
      static_cast<double>(ch.output_dim());
  report.is_unital = trace_norm(out - target) <= 1e-9;

  const RealVector weights = eigh(gram_matrix(ch)).values;
  const double top = weights.maxCoeff();
  if (top > 0.0) {
    double lo = top;
    for (Index i = 0; i < weights.size(); ++i) {
      if (weights[i] > 1e-10 * top) lo = std::min(lo, weights[i]);
    }
    report.is_uniform = (top - lo) <= 1e-9 * top;
  }

  if (report.is_trace_preserving) {
    report.output_entropy = von_neumann_entropy(DensityOperator(out));
    report.entropy_exchange = entropy_exchange(pi, ch);
    report.coherent_information = *report.output_entropy - *report.entropy_exchange;
  }
  return report;
}

DensityOperator random_density(Index dim, RngStream& rng, Index rank) {
  const Index r = rank > 0 ? rank : dim;
  const ComplexMatrix g = complex_gaussian(dim, r, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityOperator(rho);
}

std::vector<DensityOperator> state_battery(Index dim, int count,
                                           std::uint64_t seed) {
  std::vector<DensityOperator> states;
  states.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i), StreamDomain::kBattery);
    states.push_back(random_density(dim, rng));
  }
  return states;
}

bool channels_equivalent(const KrausChannel& a, const KrausChannel& b,
                         double tol, int battery_size) {
  if (a.input_dim() != b.input_dim() || a.output_dim() != b.output_dim()) {
    return false;
  }
  for (const auto& rho : state_battery(a.input_dim(), battery_size)) {
    const ComplexMatrix diff = apply(a, rho.matrix()) - apply(b, rho.matrix());
    if (diff.cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

KrausChannel identity_channel(Index dim) {
  if (dim < 1) throw InputError("identity: dimension must be positive");
  return KrausChannel({ComplexMatrix::Identity(dim, dim)}, "identity");
}

KrausChannel phase_flip(double p) {
  require_probability(p, "phase_flip");
  return KrausChannel({std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2),
                       std::sqrt(p) * pauli_z()},
                      "phase_flip");
}

KrausChannel depolarizing(double p) {
  require_probability(p, "depolarizing");
  const double q = std::sqrt(p / 4.0);
  return KrausChannel({std::sqrt(1.0 - 3.0 * p / 4.0) * ComplexMatrix::Identity(2, 2),
                       q * pauli_x(), q * pauli_y(), q * pauli_z()},
                      "depolarizing");
}

KrausChannel amplitude_damping(double gamma) {
  require_probability(gamma, "amplitude_damping");
  ComplexMatrix a0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix a1 = ComplexMatrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - gamma);
  a1(0, 1) = std::sqrt(gamma);
  return KrausChannel({a0, a1}, "amplitude_damping");
}

KrausChannel random_unitary(const std::vector<ComplexMatrix>& unitaries,
                            const std::vector<double>& probabilities) {
  if (unitaries.empty() || unitaries.size() != probabilities.size()) {
    throw InputError("random_unitary: need matching unitaries and probabilities");
  }
  ProbabilityDistribution dist(probabilities);
  std::vector<ComplexMatrix> ops;
  ops.reserve(unitaries.size());
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const auto& u = unitaries[i];
    if (u.rows() != u.cols() ||
        (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()))
                .cwiseAbs()
                .maxCoeff() > kHermitianTol) {
      throw InputError("random_unitary: operator is not unitary");
    }
    ops.push_back(std::sqrt(dist[i]) * u);
  }
  return KrausChannel(std::move(ops), "random_unitary");
}

KrausChannel haar_random_channel(Index input_dim, Index output_dim,
                                 Index kraus_count, RngStream& rng) {
  if (input_dim < 1 || output_dim < 1 || kraus_count < 1 ||
      output_dim * kraus_count < input_dim) {
    throw InputError("haar_random: need output_dim * kraus_count >= input_dim");
  }
  const ComplexMatrix v = haar_isometry(output_dim * kraus_count, input_dim, rng);
  return kraus_from_isometry(v, kraus_count).renamed("haar_random");
}

KrausChannel haar_random_unitary_channel(Index dim, Index count, RngStream& rng) {
  if (count < 1) throw InputError("random_unitary: need at least one unitary");
  std::vector<ComplexMatrix> us;
  for (Index i = 0; i < count; ++i) us.push_back(haar_unitary(dim, rng));
  return random_unitary(us, std::vector<double>(static_cast<std::size_t>(count),
                                                1.0 / static_cast<double>(count)));
}

}  // namespace qcap
