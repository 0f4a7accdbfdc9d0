#include "qcap/random_coding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcap/errors.hpp"
#include "qcap/parallel.hpp"

namespace qcap {

void EnsembleSpec::validate() const {
  if (code_dim < 1 || code_dim > ambient_dim) {
    throw InputError("ensemble: need 1 <= K <= M");
  }
  if (sample_count < 1) throw InputError("ensemble: need at least one sample");
}

EnsembleEstimate estimate_from_samples(std::span<const double> values,
                                       std::uint64_t master_seed) {
  EnsembleEstimate est;
  est.sample_count = values.size();
  est.master_seed = master_seed;
  if (values.empty()) return est;
  const double n = static_cast<double>(values.size());
  est.mean = pairwise_sum(values) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - est.mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

bool within_standard_errors(const EnsembleEstimate& est, double target, double k) {
  return std::abs(est.mean - target) <=
         k * est.std_error + 1e-12 * std::max(1.0, std::abs(target));
}

CodeSubspace sample_code(Index ambient_dim, Index code_dim, RngStream& rng) {
  return CodeSubspace(haar_isometry(ambient_dim, code_dim, rng));
}

double exact_average_d2(const KrausChannel& ch, Index code_dim) {
  const Index m = ch.input_dim();
  if (m < 2) throw InputError("exact_average_d2: input dimension must be >= 2");
  if (code_dim < 1 || code_dim > m) throw InputError("exact_average_d2: need 1 <= K <= M");
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(code_dim);
  double sum = 0.0;
  for (const auto& ai : ch.kraus()) {
    for (const auto& aj : ch.kraus()) {
      const ComplexMatrix w = ai.adjoint() * aj;
      sum += w.squaredNorm() - std::norm(w.trace()) / md;
    }
  }
  return (1.0 - 1.0 / (kd * kd)) / (md * md - 1.0) * sum;
}

double upper_bound_d2(const KrausChannel& ch) {
  const ComplexMatrix out = apply(ch, DensityOperator::maximally_mixed(ch.input_dim()).matrix());
  return out.squaredNorm();
}

double averaged_fidelity_bound(const KrausChannel& ch, Index code_dim) {
  const ComplexMatrix out = apply(ch, DensityOperator::maximally_mixed(ch.input_dim()).matrix());
  const double length = static_cast<double>(minimal_length(ch));
  return out.trace().real() -
         std::sqrt(static_cast<double>(code_dim) * length) * out.norm();
}

EnsembleReport run_ensemble(const KrausChannel& ch, const EnsembleSpec& spec,
                            int threads) {
  spec.validate();
  if (spec.ambient_dim != ch.input_dim()) {
    throw InputError("ensemble: ambient dimension differs from channel input");
  }
  const KrausChannel minimal = minimize_kraus(ch);
  const std::size_t samples = spec.sample_count;
  std::vector<double> bound(samples), p(samples), d1(samples), d2(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    RngStream rng(spec.master_seed, i, StreamDomain::kSamples);
    const CodeSubspace code = sample_code(spec.ambient_dim, spec.code_dim, rng);
    const BoundReport r = fidelity_lower_bound_kraus(code, minimal);
    bound[i] = r.bound_kraus;
    p[i] = r.p;
    d1[i] = r.trace_norm_d;
    d2[i] = r.frobenius_d_sq;
  });

  EnsembleReport report;
  report.spec = spec;
  report.length = minimal_length(ch);
  report.bound = estimate_from_samples(bound, spec.master_seed);
  report.transmission = estimate_from_samples(p, spec.master_seed);
  report.trace_norm_d = estimate_from_samples(d1, spec.master_seed);
  report.frobenius_d_sq = estimate_from_samples(d2, spec.master_seed);
  report.upper_d2 = upper_bound_d2(ch);
  report.averaged_bound = averaged_fidelity_bound(ch, spec.code_dim);
  const double kn = static_cast<double>(spec.code_dim) * static_cast<double>(report.length);
  if (spec.ambient_dim >= 2) {
    report.exact_d2 = exact_average_d2(ch, spec.code_dim);
    report.d2_matches_exact = within_standard_errors(report.frobenius_d_sq, report.exact_d2);
    report.exact_below_upper = report.exact_d2 <= report.upper_d2 + 1e-12;
    report.jensen_majorant = std::sqrt(kn * report.exact_d2);
  } else {
    report.d2_matches_exact = true;
    report.exact_below_upper = true;
    report.jensen_majorant = 0.0;
  }
  report.bound_above_average =
      report.bound.mean >=
      report.averaged_bound - kStandardErrorThreshold * report.bound.std_error - 1e-12;
  report.jensen_holds =
      report.trace_norm_d.mean <=
      report.jensen_majorant + kStandardErrorThreshold * report.trace_norm_d.std_error + 1e-12;
  return report;
}

EnsembleEstimate mc_average_bound(const KrausChannel& ch, Index code_dim,
                                  std::uint64_t samples, std::uint64_t seed,
                                  int threads) {
  EnsembleSpec spec{ch.input_dim(), code_dim, samples, seed};
  return run_ensemble(ch, spec, threads).bound;
}

Complex b_form_sample(const ComplexMatrix& v, const ComplexMatrix& w,
                      const CodeSubspace& code) {
  const ComplexMatrix& p = code.basis();
  const double k = static_cast<double>(code.code_dim());
  const ComplexMatrix vc = p.adjoint() * v * p;
  const ComplexMatrix wc = p.adjoint() * w * p;
  // tr(π_C V† π_C W) = tr(vc† wc) / K², tr(π_C V†) = conj(tr vc) / K.
  const Complex first = vc.cwiseProduct(wc.conjugate()).sum();
  return std::conj(first) / (k * k) -
         std::conj(vc.trace()) * wc.trace() / (k * k * k);
}

ComplexEstimate b_form_mc(const ComplexMatrix& v, const ComplexMatrix& w,
                          Index code_dim, std::uint64_t samples,
                          std::uint64_t seed, int threads) {
  if (v.rows() != v.cols() || w.rows() != w.cols() || v.rows() != w.rows()) {
    throw InputError("b_form_mc: V and W must be square of equal size");
  }
  const Index m = v.rows();
  EnsembleSpec{m, code_dim, samples, seed}.validate();
  std::vector<double> re(samples), im(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    RngStream rng(seed, i, StreamDomain::kSamples);
    const Complex b = b_form_sample(v, w, sample_code(m, code_dim, rng));
    re[i] = b.real();
    im[i] = b.imag();
  });
  const auto er = estimate_from_samples(re, seed);
  const auto ei = estimate_from_samples(im, seed);
  return {Complex(er.mean, ei.mean), er.std_error, ei.std_error, samples, seed};
}

BFormCoefficients b_form_coefficients(Index ambient_dim, Index code_dim) {
  if (ambient_dim < 2) throw InputError("b_form_coefficients: need M >= 2");
  if (code_dim < 1 || code_dim > ambient_dim) {
    throw InputError("b_form_coefficients: need 1 <= K <= M");
  }
  const double m = static_cast<double>(ambient_dim);
  const double k = static_cast<double>(code_dim);
  const double alpha = (1.0 - 1.0 / (k * k)) / (m * m - 1.0);
  return {alpha, -alpha / m};
}

Complex b_form_closed(const ComplexMatrix& v, const ComplexMatrix& w,
                      Index code_dim) {
  const auto c = b_form_coefficients(v.rows(), code_dim);
  const Complex tr_vw = (v.adjoint() * w).trace();
  return c.alpha * tr_vw + c.beta * std::conj(v.trace()) * w.trace();
}

HaarMomentReport haar_moment_suite(Index ambient_dim, Index code_dim,
                                   std::uint64_t samples, std::uint64_t seed,
                                   int threads) {
  if (ambient_dim < 2) throw InputError("haar_moment_suite: need M >= 2");
  if (code_dim < 1 || code_dim > ambient_dim) {
    throw InputError("haar_moment_suite: need 1 <= K <= M");
  }
  if (samples < 1) throw InputError("haar_moment_suite: need at least one sample");
  const Index cols = std::max<Index>(code_dim, 2);
  std::vector<double> u11_4(samples), u11_u12(samples), proj(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    RngStream rng(seed, i, StreamDomain::kSamples);
    const ComplexMatrix u = haar_isometry(ambient_dim, cols, rng);
    const double a = std::norm(u(0, 0));
    const double b = std::norm(u(0, 1));
    u11_4[i] = a * a;
    u11_u12[i] = a * b;
    // <e_1|π_C|e_1> for the code spanned by the first K columns.
    double overlap = 0.0;
    for (Index j = 0; j < code_dim; ++j) overlap += std::norm(u(0, j));
    overlap /= static_cast<double>(code_dim);
    proj[i] = overlap * overlap;
  });

  const double m = static_cast<double>(ambient_dim);
  const double k = static_cast<double>(code_dim);
  const double denom = m * m + m;
  HaarMomentReport report;
  report.ambient_dim = ambient_dim;
  report.code_dim = code_dim;
  auto add = [&](std::string name, const std::vector<double>& values, double target) {
    MomentCheck c{std::move(name), estimate_from_samples(values, seed), target, false};
    c.pass = within_standard_errors(c.estimate, target);
    report.moments.push_back(std::move(c));
  };
  add("abs_u11_pow4", u11_4, 2.0 / denom);
  add("abs_u11_sq_abs_u12_sq", u11_u12, 1.0 / denom);
  add("code_overlap_sq", proj, (1.0 + 1.0 / k) / denom);
  report.all_pass = std::all_of(report.moments.begin(), report.moments.end(),
                                [](const MomentCheck& c) { return c.pass; });
  return report;
}

HammingCurve hamming_rate_curve(const KrausChannel& ch, double rate, int n_min,
                                int n_max) {
  if (n_min < 1 || n_max < n_min) throw InputError("hamming_rate_curve: bad n range");
  if (!classify(ch).is_unital) {
    throw DomainError("hamming_rate_curve requires a unital channel");
  }
  HammingCurve curve;
  curve.rate = rate;
  curve.length = minimal_length(ch);
  curve.output_dim = ch.output_dim();
  const double log_len = std::log2(static_cast<double>(curve.length));
  const double log_out = std::log2(static_cast<double>(curve.output_dim));
  curve.capacity_bound = log_out - log_len;
  curve.converges = rate < curve.capacity_bound;
  for (int n = n_min; n <= n_max; ++n) {
    HammingRow row;
    row.n = n;
    row.code_dim = std::floor(std::exp2(n * rate));
    // (2^R |U| / |Q'|)^{n/2} in log form.
    row.bound = 1.0 - std::exp2(0.5 * n * (rate + log_len - log_out));
    row.bound_floor =
        row.code_dim >= 1.0
            ? 1.0 - std::exp2(0.5 * (std::log2(row.code_dim) + n * (log_len - log_out)))
            : 1.0;
    curve.rows.push_back(row);
  }
  return curve;
}

}  // namespace qcap
