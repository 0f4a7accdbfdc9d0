#include "qcap/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap {

namespace {

constexpr std::uint64_t kMaxEnumeration = std::uint64_t{1} << 23;
constexpr std::uint64_t kMaxCompositions = 10'000'000;
constexpr double kMaxStructuredWork = 17179869184.0;  // 2^34 entry updates

void require_n_eps(int n, double epsilon) {
  if (n < 1) throw InputError("typicality: block length n must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("typicality: epsilon must be a positive finite number");
  }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ResourceLimitError("typicality: sequence count exceeds 64-bit range");
  }
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ResourceLimitError("typicality: sequence count exceeds 64-bit range");
  }
  return out;
}

std::uint64_t binomial(std::uint64_t m, std::uint64_t k) {
  if (k > m) return 0;
  k = std::min(k, m - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (m - k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      throw ResourceLimitError("typicality: sequence count exceeds 64-bit range");
    }
  }
  return static_cast<std::uint64_t>(c);
}

// Checked integer power.
std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

double composition_log2(const ProbabilityClasses& classes, const std::vector<int>& counts) {
  double s = 0.0;
  for (std::size_t g = 0; g < counts.size(); ++g) {
    if (counts[g] > 0) s += counts[g] * std::log2(classes.probability[g]);
  }
  return s;
}

// Calls fn(counts) for every composition of n into `parts` nonnegative parts.
template <class Fn>
void for_each_composition(int n, std::size_t parts, Fn&& fn) {
  std::vector<int> counts(parts, 0);
  auto rec = [&](auto&& self, std::size_t g, int left) -> void {
    if (g + 1 == parts) {
      counts[g] = left;
      fn(counts);
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[g] = c;
      self(self, g + 1, left - c);
    }
  };
  if (parts == 0) return;
  rec(rec, 0, n);
}

double composition_count_estimate(int n, std::size_t parts) {
  // C(n + G - 1, G - 1) in floating point.
  if (parts == 0) return 0.0;
  const double k = static_cast<double>(parts - 1);
  return std::exp(std::lgamma(n + k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n + 1.0));
}

std::set<std::vector<int>> composition_set(const std::vector<TypeClass>& classes) {
  std::set<std::vector<int>> out;
  for (const auto& c : classes) out.insert(c.counts);
  return out;
}

// Normalized spectrum with eigenvalues below 1e-14 of the largest set to 0.
RealVector clean_spectrum(const RealVector& values) {
  RealVector out = values.cwiseMax(0.0);
  const double top = out.size() ? out.maxCoeff() : 0.0;
  if (!(top > 0.0)) throw DomainError("typical subspace: state has zero trace");
  for (Index i = 0; i < out.size(); ++i) {
    if (out[i] <= 1e-14 * top) out[i] = 0.0;
  }
  return out / out.sum();
}

ComplexMatrix power_tensor(const ComplexMatrix& a, int n, Index cap) {
  ComplexMatrix out = a;
  for (int k = 1; k < n; ++k) out = tensor(out, a, cap);
  return out;
}

std::vector<std::size_t> class_of_symbol(const ProbabilityClasses& classes, std::size_t symbols) {
  std::vector<std::size_t> out(symbols, std::numeric_limits<std::size_t>::max());
  for (std::size_t g = 0; g < classes.members.size(); ++g) {
    for (std::size_t s : classes.members[g]) out[s] = g;
  }
  return out;
}

}  // namespace

void TypicalSetSpec::validate() const { require_n_eps(n, epsilon); }

bool is_typical_log2(double log2_p, int n, double entropy, double epsilon) {
  const double slack = 1e-12 * std::max(1.0, std::abs(log2_p));
  const double lo = -n * (entropy + epsilon);
  const double hi = -n * (entropy - epsilon);
  return log2_p >= lo - slack && log2_p <= hi + slack;
}

ProbabilityClasses probability_classes(const std::vector<double>& weights, double rel_tol) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  ProbabilityClasses classes;
  for (std::size_t i : order) {
    const double w = weights[i];
    if (!classes.probability.empty() &&
        std::abs(classes.probability.back() - w) <= rel_tol * classes.probability.back()) {
      classes.multiplicity.back() += 1;
      classes.members.back().push_back(i);
    } else {
      classes.probability.push_back(w);
      classes.multiplicity.push_back(1);
      classes.members.push_back({i});
    }
  }
  return classes;
}

std::vector<TypeClass> typical_type_classes(const ProbabilityClasses& classes, int n,
                                            double entropy, double epsilon) {
  require_n_eps(n, epsilon);
  const std::size_t parts = classes.probability.size();
  if (composition_count_estimate(n, parts) > static_cast<double>(kMaxCompositions)) {
    throw ResourceLimitError("typicality: too many type classes to enumerate");
  }
  std::vector<TypeClass> out;
  for_each_composition(n, parts, [&](const std::vector<int>& counts) {
    const double lp = composition_log2(classes, counts);
    if (!is_typical_log2(lp, n, entropy, epsilon)) return;
    TypeClass tc;
    tc.counts = counts;
    tc.log2_probability = lp;
    std::uint64_t count = 1;
    std::uint64_t left = static_cast<std::uint64_t>(n);
    long double prob = 1.0L;
    for (std::size_t g = 0; g < parts; ++g) {
      const auto t = static_cast<std::uint64_t>(counts[g]);
      count = checked_mul(count, binomial(left, t));
      count = checked_mul(count, ipow(classes.multiplicity[g], counts[g]));
      left -= t;
      prob *= std::pow(static_cast<long double>(classes.probability[g]), counts[g]);
    }
    tc.sequences = count;
    tc.mass = static_cast<double>(static_cast<long double>(count) * prob);
    out.push_back(std::move(tc));
  });
  return out;
}

TypicalSetReport typical_sequences(const TypicalSetSpec& spec) {
  spec.validate();
  TypicalSetReport report;
  report.n = spec.n;
  report.epsilon = spec.epsilon;
  report.entropy = shannon_entropy(spec.distribution);
  const auto classes = probability_classes(spec.distribution.weights());
  std::vector<double> masses;
  for (const auto& tc : typical_type_classes(classes, spec.n, report.entropy, spec.epsilon)) {
    report.typical_count = checked_add(report.typical_count, tc.sequences);
    masses.push_back(tc.mass);
  }
  std::sort(masses.begin(), masses.end());
  long double mass = 0.0L;
  for (double m : masses) mass += m;
  report.mass = std::clamp(static_cast<double>(mass), 0.0, 1.0);
  report.count_bound = std::exp2(spec.n * (report.entropy + spec.epsilon));
  report.count_within_bound = static_cast<long double>(report.typical_count) <=
                              static_cast<long double>(report.count_bound);
  return report;
}

std::vector<std::vector<std::size_t>> enumerate_typical_sequences(const TypicalSetSpec& spec) {
  spec.validate();
  const auto& w = spec.distribution.weights();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) support.push_back(i);
  }
  const double scan = std::pow(static_cast<double>(support.size()), spec.n);
  if (scan > static_cast<double>(kMaxEnumeration)) {
    throw ResourceLimitError("typicality: sequence enumeration exceeds 2^23 sequences");
  }
  const double entropy = shannon_entropy(spec.distribution);
  const auto classes = probability_classes(w);
  const auto typical = composition_set(typical_type_classes(classes, spec.n, entropy, spec.epsilon));
  const auto cls = class_of_symbol(classes, w.size());

  std::vector<std::vector<std::size_t>> out;
  const auto total = static_cast<std::uint64_t>(std::llround(scan));
  std::vector<std::size_t> seq(spec.n);
  std::vector<int> counts(classes.probability.size());
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    std::fill(counts.begin(), counts.end(), 0);
    for (int k = spec.n - 1; k >= 0; --k) {
      seq[k] = support[c % support.size()];
      c /= support.size();
      counts[cls[seq[k]]] += 1;
    }
    if (typical.count(counts)) out.push_back(seq);
  }
  return out;
}

TypicalSubspace typical_subspace(const DensityOperator& rho, int n, double epsilon) {
  require_n_eps(n, epsilon);
  if (!rho.normalized()) throw InputError("typical subspace: state must be normalized");
  const auto dec = eigh(rho.matrix());
  TypicalSubspace sub;
  sub.eigenvectors = dec.vectors;
  sub.eigenvalues = clean_spectrum(dec.values);
  sub.n = n;
  sub.epsilon = epsilon;
  std::vector<double> w(sub.eigenvalues.data(), sub.eigenvalues.data() + sub.eigenvalues.size());
  sub.entropy = spectrum_entropy(w);
  const auto classes = probability_classes(w);
  long double mass = 0.0L;
  long double sum_sq = 0.0L;
  for (const auto& tc : typical_type_classes(classes, n, sub.entropy, epsilon)) {
    sub.rank = checked_add(sub.rank, tc.sequences);
    mass += tc.mass;
    sum_sq += static_cast<long double>(tc.sequences) *
              std::exp2(2.0L * static_cast<long double>(tc.log2_probability));
  }
  sub.mass = std::clamp(static_cast<double>(mass), 0.0, 1.0);
  sub.sum_sq = static_cast<double>(sum_sq);
  sub.rank_bound = std::exp2(n * (sub.entropy + epsilon));
  return sub;
}

std::vector<std::uint64_t> typical_indices(const TypicalSubspace& sub, Index cap) {
  const Index d = sub.eigenvalues.size();
  const double total_d = std::pow(static_cast<double>(d), sub.n);
  if (total_d > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "typical subspace: dimension " << d << "^" << sub.n << " exceeds cap " << cap;
    throw ResourceLimitError(msg.str());
  }
  std::vector<double> w(sub.eigenvalues.data(), sub.eigenvalues.data() + d);
  const auto classes = probability_classes(w);
  const auto typical =
      composition_set(typical_type_classes(classes, sub.n, sub.entropy, sub.epsilon));
  const auto cls = class_of_symbol(classes, w.size());
  const auto total = static_cast<std::uint64_t>(std::llround(total_d));
  std::vector<std::uint64_t> out;
  std::vector<int> counts(classes.probability.size());
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t c = idx;
    std::fill(counts.begin(), counts.end(), 0);
    bool zero = false;
    for (int k = 0; k < sub.n; ++k) {
      const auto digit = static_cast<std::size_t>(c % static_cast<std::uint64_t>(d));
      c /= static_cast<std::uint64_t>(d);
      if (cls[digit] == std::numeric_limits<std::size_t>::max()) {
        zero = true;
        break;
      }
      counts[cls[digit]] += 1;
    }
    if (!zero && typical.count(counts)) out.push_back(idx);
  }
  return out;
}

namespace {

ComplexMatrix projector_from_subspace(const TypicalSubspace& sub, Index cap) {
  const auto idx = typical_indices(sub, cap);
  const ComplexMatrix basis = power_tensor(sub.eigenvectors, sub.n, cap);
  ComplexMatrix cols(basis.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    cols.col(static_cast<Index>(k)) = basis.col(static_cast<Index>(idx[k]));
  }
  ComplexMatrix p = cols * cols.adjoint();
  return 0.5 * (p + p.adjoint());
}

}  // namespace

ComplexMatrix typical_subspace_projector(const DensityOperator& rho, int n, double epsilon,
                                         Index cap) {
  return projector_from_subspace(typical_subspace(rho, n, epsilon), cap);
}

ProbabilityDistribution kraus_distribution(const KrausChannel& ch) {
  if (!ch.is_trace_preserving()) {
    throw DomainError("kraus_distribution requires a trace-preserving channel");
  }
  const KrausChannel minimal = minimize_kraus(ch);
  const double dim = static_cast<double>(ch.input_dim());
  std::vector<double> w;
  w.reserve(minimal.size());
  double total = 0.0;
  for (const auto& a : minimal.kraus()) {
    w.push_back(a.squaredNorm() / dim);
    total += w.back();
  }
  for (double& x : w) x /= total;
  return ProbabilityDistribution(std::move(w));
}

TypicalChannel::TypicalChannel(const KrausChannel& ch, int n, double epsilon)
    : base_(minimize_kraus(ch)),
      distribution_(kraus_distribution(ch)),
      n_(n),
      epsilon_(epsilon) {
  require_n_eps(n, epsilon);
  entropy_ = shannon_entropy(distribution_);
  classes_ = probability_classes(distribution_.weights());
  typical_ = typical_type_classes(classes_, n, entropy_, epsilon);
}

std::uint64_t TypicalChannel::length() const {
  std::uint64_t total = 0;
  for (const auto& tc : typical_) total = checked_add(total, tc.sequences);
  return total;
}

double TypicalChannel::transmission() const {
  std::vector<double> masses;
  for (const auto& tc : typical_) masses.push_back(tc.mass);
  std::sort(masses.begin(), masses.end());
  long double s = 0.0L;
  for (double m : masses) s += m;
  return std::clamp(static_cast<double>(s), 0.0, 1.0);
}

std::vector<std::vector<std::size_t>> TypicalChannel::sequences() const {
  return enumerate_typical_sequences(TypicalSetSpec{distribution_, n_, epsilon_});
}

KrausChannel TypicalChannel::materialize(Index cap) const {
  const double in = std::pow(static_cast<double>(base_.input_dim()), n_);
  const double out = std::pow(static_cast<double>(base_.output_dim()), n_);
  const double count = static_cast<double>(length());
  if (in > cap || out > cap) {
    throw ResourceLimitError("typical channel: dense materialization exceeds dimension cap");
  }
  if (count * in * out > static_cast<double>(kDefaultElementCap)) {
    throw ResourceLimitError("typical channel: dense materialization exceeds element cap");
  }
  const auto seqs = sequences();
  std::vector<ComplexMatrix> ops;
  ops.reserve(seqs.size());
  for (const auto& s : seqs) {
    ComplexMatrix a = base_[s[0]];
    for (std::size_t k = 1; k < s.size(); ++k) a = tensor(a, base_[s[k]], cap);
    ops.push_back(std::move(a));
  }
  if (ops.empty()) {
    ops.push_back(ComplexMatrix::Zero(static_cast<Index>(std::llround(out)),
                                      static_cast<Index>(std::llround(in))));
  }
  return KrausChannel(std::move(ops), base_.name() + "_typical");
}

TypicalChannel epsilon_typical_channel(const KrausChannel& ch, int n, double epsilon) {
  return TypicalChannel(ch, n, epsilon);
}

ReducedChannel::ReducedChannel(const KrausChannel& ch, int n, double epsilon)
    : typical_(ch, n, epsilon),
      output_subspace_(typical_subspace(
          DensityOperator(apply(ch, DensityOperator::maximally_mixed(ch.input_dim())).matrix()),
          n, epsilon)) {}

ComplexMatrix ReducedChannel::projector(Index cap) const {
  return projector_from_subspace(output_subspace_, cap);
}

KrausChannel ReducedChannel::materialize(Index cap) const {
  const KrausChannel kept = typical_.materialize(cap);
  const ComplexMatrix p = projector(cap);
  std::vector<ComplexMatrix> ops;
  ops.reserve(kept.size());
  for (const auto& a : kept.kraus()) ops.push_back(p * a);
  return KrausChannel(std::move(ops), typical_.base().name() + "_reduced");
}

namespace {

// Ñ(π_n) is held densely, so d^n and its square are capped.
void check_reduced_output(Index d, int n) {
  const double dn = std::pow(static_cast<double>(d), n);
  if (dn > static_cast<double>(kDefaultDimensionCap) ||
      dn * dn > static_cast<double>(kDefaultElementCap)) {
    throw ResourceLimitError("reduced channel: output dimension exceeds cap");
  }
}

}  // namespace

ComplexMatrix ReducedChannel::output_at_uniform_eigenbasis() const {
  const KrausChannel& base = typical_.base();
  const Index d = base.output_dim();
  const int n = typical_.n();
  check_reduced_output(d, n);
  const double dn = std::pow(static_cast<double>(d), n);
  const auto dim = static_cast<Index>(std::llround(dn));
  const auto& classes = typical_.classes();
  const std::size_t parts = classes.probability.size();
  const double terms = parts > 1 ? std::pow(n + 1.0, static_cast<double>(parts - 1)) : 1.0;
  if (terms * dn * dn > kMaxStructuredWork) {
    throw ResourceLimitError("reduced channel: structured evaluation exceeds work cap");
  }

  // Single-copy class blocks X_g = Σ_{j in g} A_j π A_j†, in the eigenbasis
  // of N(π).
  const ComplexMatrix& v = output_subspace_.eigenvectors;
  const double q = static_cast<double>(base.input_dim());
  std::vector<ComplexMatrix> x;
  for (const auto& members : classes.members) {
    ComplexMatrix xg = ComplexMatrix::Zero(d, d);
    for (std::size_t j : members) xg += base[j] * base[j].adjoint() / q;
    x.push_back(v.adjoint() * xg * v);
  }

  ComplexMatrix y = ComplexMatrix::Zero(dim, dim);
  const auto& typical = typical_.typical_classes();
  if (typical.empty()) return y;
  if (parts == 1) return power_tensor(x[0], n, kDefaultDimensionCap);

  // Z_t is the coefficient of z^t in (Σ_g z_g X_g)^⊗n with z_G = 1. Counts of
  // the first G-1 classes lie in [0, n], so a length-(n+1) DFT per variable
  // separates every composition.
  const int len = n + 1;
  const std::size_t vars = parts - 1;
  const auto total = static_cast<std::size_t>(std::llround(terms));
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<int> s(vars, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t g = 0; g < vars; ++g) {
      s[g] = static_cast<int>(c % len);
      c /= len;
    }
    Complex coeff = 0.0;
    for (const auto& tc : typical) {
      long long phase = 0;
      for (std::size_t g = 0; g < vars; ++g) phase += static_cast<long long>(s[g]) * tc.counts[g];
      const double angle = -two_pi * static_cast<double>(phase % len) / len;
      coeff += Complex(std::cos(angle), std::sin(angle));
    }
    coeff /= terms;
    if (std::abs(coeff) < 1e-15) continue;
    ComplexMatrix b = x[vars];
    for (std::size_t g = 0; g < vars; ++g) {
      const double angle = two_pi * static_cast<double>(s[g]) / len;
      b += Complex(std::cos(angle), std::sin(angle)) * x[g];
    }
    y.noalias() += coeff * power_tensor(b, n, kDefaultDimensionCap);
  }
  return 0.5 * (y + y.adjoint());
}

ReducedChannel epsilon_reduced_channel(const KrausChannel& ch, int n, double epsilon) {
  return ReducedChannel(ch, n, epsilon);
}

ReducedChannelReport reduced_channel_report(const KrausChannel& ch, int n, double epsilon) {
  const ReducedChannel red(ch, n, epsilon);
  const TypicalChannel& typ = red.typical();
  const TypicalSubspace& sub = red.output_subspace();

  ReducedChannelReport r;
  r.n = n;
  r.epsilon = epsilon;
  r.typical_length = typ.length();
  r.length = red.length();
  r.length_bound = std::exp2(n * (typ.entropy_exchange() + epsilon));
  r.typical_transmission = typ.transmission();
  r.subspace_mass = sub.mass;
  r.frobenius_bound = std::exp2(-n * (sub.entropy - 3.0 * epsilon));

  const ComplexMatrix y = red.output_at_uniform_eigenbasis();
  const auto idx = typical_indices(sub);
  double tr = 0.0;
  double fro = 0.0;
  for (std::uint64_t a : idx) {
    tr += y(static_cast<Index>(a), static_cast<Index>(a)).real();
    for (std::uint64_t b : idx) fro += std::norm(y(static_cast<Index>(a), static_cast<Index>(b)));
  }
  r.transmission = std::clamp(tr, 0.0, 1.0);
  r.frobenius_sq = fro;

  r.typical_length_ok = static_cast<double>(r.typical_length) <= r.length_bound;
  r.length_ok = static_cast<double>(r.length) <= r.length_bound;
  r.frobenius_ok = r.frobenius_sq <= r.frobenius_bound * (1.0 + 1e-12);
  r.transmission_inequality_ok =
      r.transmission >= r.subspace_mass - (1.0 - r.typical_transmission) - 1e-12;
  return r;
}

double surprisal_variance(const ProbabilityDistribution& p) {
  const double h = shannon_entropy(p);
  double var = 0.0;
  for (double w : p.weights()) {
    if (w > 0.0) {
      const double d = -std::log2(w) - h;
      var += w * d * d;
    }
  }
  return var;
}

DecayFit fit_decay(std::vector<int> ns, std::vector<double> deviations, double epsilon,
                   double sigma2) {
  if (ns.size() != deviations.size()) throw InputError("fit_decay: size mismatch");
  DecayFit fit;
  fit.epsilon = epsilon;
  fit.sigma2 = sigma2;
  fit.predicted_rate = sigma2 > 0.0 ? epsilon * epsilon / (2.0 * sigma2)
                                    : std::numeric_limits<double>::infinity();
  for (double& d : deviations) d = std::clamp(d, 0.0, 1.0);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (deviations[i] > 0.0 && deviations[i] < 1.0) {
      xs.push_back(ns[i]);
      ys.push_back(std::log(deviations[i]));
    }
  }
  fit.ns = std::move(ns);
  fit.deviations = std::move(deviations);
  if (xs.size() >= 3) {
    const double m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx > 0.0) fit.fitted_rate = -sxy / sxx;
  }
  return fit;
}

DecayFit typical_sequence_decay(const ProbabilityDistribution& p, double epsilon, int n_min,
                                int n_max) {
  if (n_min < 1 || n_max < n_min) throw InputError("typical_sequence_decay: bad n range");
  std::vector<int> ns;
  std::vector<double> dev;
  for (int n = n_min; n <= n_max; ++n) {
    ns.push_back(n);
    dev.push_back(1.0 - typical_sequences(TypicalSetSpec{p, n, epsilon}).mass);
  }
  return fit_decay(std::move(ns), std::move(dev), epsilon, surprisal_variance(p));
}

ReducedRelationsReport verify_reduced_relations(const KrausChannel& ch, int n_min, int n_max, double epsilon) {
  if (n_min < 1 || n_max < n_min) throw InputError("verify_reduced_relations: bad n range");
  check_reduced_output(ch.output_dim(), n_max);
  ReducedRelationsReport report;
  report.epsilon = epsilon;
  std::vector<int> ns;
  std::vector<double> typ_dev;
  std::vector<double> red_dev;
  bool ok = true;
  for (int n = n_min; n <= n_max; ++n) {
    auto row = reduced_channel_report(ch, n, epsilon);
    ok = ok && row.typical_length_ok && row.length_ok && row.frobenius_ok;
    ns.push_back(n);
    typ_dev.push_back(1.0 - row.typical_transmission);
    red_dev.push_back(1.0 - row.transmission);
    report.rows.push_back(row);
  }
  const double sigma2 = surprisal_variance(kraus_distribution(ch));
  report.typical_decay = fit_decay(ns, typ_dev, epsilon, sigma2);
  report.reduced_decay = fit_decay(ns, red_dev, epsilon, sigma2);
  report.hard_relations_hold = ok;
  return report;
}

RateDemo achievable_rate_demo(const KrausChannel& ch, double rate, double epsilon, int n_min,
                              int n_max) {
  if (n_min < 1 || n_max < n_min) throw InputError("achievable_rate_demo: bad n range");
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw InputError("achievable_rate_demo: rate must be a nonnegative finite number");
  }
  check_reduced_output(ch.output_dim(), n_max);
  RateDemo demo;
  demo.rate = rate;
  demo.epsilon = epsilon;
  demo.coherent_information =
      coherent_information(DensityOperator::maximally_mixed(ch.input_dim()), ch);
  demo.rate_condition = rate + 4.0 * epsilon < demo.coherent_information;
  for (int n = n_min; n <= n_max; ++n) {
    const auto r = reduced_channel_report(ch, n, epsilon);
    RateRow row;
    row.n = n;
    row.code_dim = std::floor(std::exp2(n * rate));
    row.reduced_length = r.length;
    row.transmission = r.transmission;
    row.penalty = std::sqrt(row.code_dim * static_cast<double>(r.length)) *
                  std::sqrt(r.frobenius_sq);
    row.bound = row.transmission - row.penalty;
    demo.rows.push_back(row);
  }
  bool decays = demo.rows.size() > 1;
  bool grows = demo.rows.size() > 1;
  for (std::size_t i = 1; i < demo.rows.size(); ++i) {
    const double prev = demo.rows[i - 1].penalty;
    std::optional<double> ratio;
    if (prev > 0.0) ratio = demo.rows[i].penalty / prev;
    decays = decays && ratio && *ratio < 1.0;
    grows = grows && ratio && *ratio > 1.0;
    demo.penalty_ratios.push_back(ratio);
  }
  demo.penalty_decays = decays;
  demo.penalty_grows = grows;
  return demo;
}

double subspace_restricted_info(const KrausChannel& ch, const CodeSubspace& code) {
  return coherent_information(normalized_projector(code), ch);
}

}  // namespace qcap
