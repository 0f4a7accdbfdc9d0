#include "qcap/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qcap/errors.hpp"

namespace qcap {

void check_dimension_cap(Index rows, Index cols, Index cap) {
  if (rows > cap || cols > cap) {
    std::ostringstream msg;
    msg << "matrix of size " << rows << "x" << cols
        << " exceeds the dimension cap " << cap;
    throw ResourceLimitError(msg.str());
  }
  if (rows > 0 && cols > kDefaultElementCap / rows) {
    std::ostringstream msg;
    msg << "matrix of size " << rows << "x" << cols
        << " exceeds the element cap " << kDefaultElementCap;
    throw ResourceLimitError(msg.str());
  }
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b,
                     Index cap) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  check_dimension_cap(rows, cols, cap);
  ComplexMatrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_a, Index dim_b,
                            Subsystem keep) {
  if (dim_a < 1 || dim_b < 1 || m.rows() != m.cols() ||
      m.rows() != dim_a * dim_b) {
    std::ostringstream msg;
    msg << "partial_trace: operator of size " << m.rows() << "x" << m.cols()
        << " does not act on " << dim_a << " x " << dim_b;
    throw InputError(msg.str());
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i) {
      for (Index j = 0; j < dim_a; ++j) {
        out(i, j) = m.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Index a = 0; a < dim_a; ++a) {
    out += m.block(a * dim_b, a * dim_b, dim_b, dim_b);
  }
  return out;
}

double hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

EigenDecomposition eigh(const ComplexMatrix& h) {
  const double dev = hermitian_deviation(h);
  if (!(dev <= kHermitianTol)) {
    std::ostringstream msg;
    msg << "eigh: matrix is not Hermitian (deviation " << dev << ")";
    throw DomainError(msg.str());
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigh: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector psd_spectrum(const ComplexMatrix& h) {
  RealVector values = eigh(h).values;
  for (Index i = 0; i < values.size(); ++i) {
    if (values[i] < -kPsdTol) {
      std::ostringstream msg;
      msg << "operator is not positive semidefinite (eigenvalue " << values[i]
          << ")";
      throw DomainError(msg.str());
    }
    values[i] = std::max(values[i], 0.0);
  }
  return values;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
  const auto dec = eigh(h);
  RealVector roots(dec.values.size());
  for (Index i = 0; i < roots.size(); ++i) {
    if (dec.values[i] < -kPsdTol) {
      throw DomainError("psd_sqrt: operator is not positive semidefinite");
    }
    roots[i] = std::sqrt(std::max(dec.values[i], 0.0));
  }
  return dec.vectors * roots.asDiagonal() * dec.vectors.adjoint();
}

double trace_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  // Exact-Hermitian inputs (every D operator) go through the eigensolver.
  const double scale = a.cwiseAbs().maxCoeff();
  if (a.rows() == a.cols() && hermitian_deviation(a) <= 1e-14 * scale) {
    return eigh(a).values.cwiseAbs().sum();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues().sum();
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

double spectrum_entropy(std::span<const double> values) {
  double h = 0.0;
  for (double v : values) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

DensityOperator::DensityOperator(ComplexMatrix m, bool normalized)
    : matrix_(std::move(m)), normalized_(normalized) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw InputError("density operator must be a non-empty square matrix");
  }
  if (!matrix_.allFinite()) {
    throw DomainError("density operator has non-finite entries");
  }
  const double dev = hermitian_deviation(matrix_);
  if (dev > kHermitianTol) {
    std::ostringstream msg;
    msg << "density operator is not Hermitian (deviation " << dev << ")";
    throw DomainError(msg.str());
  }
  psd_spectrum(matrix_);
  const double tr = matrix_.trace().real();
  if (normalized_) {
    if (std::abs(tr - 1.0) > kTraceTol) {
      std::ostringstream msg;
      msg << "density operator has trace " << tr << ", expected 1";
      throw DomainError(msg.str());
    }
  } else if (tr < -kTraceTol || tr > 1.0 + kTraceTol) {
    std::ostringstream msg;
    msg << "subnormalized density operator has trace " << tr;
    throw DomainError(msg.str());
  }
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  if (dim < 1) throw InputError("maximally_mixed: dim must be positive");
  return DensityOperator(ComplexMatrix::Identity(dim, dim) /
                         static_cast<double>(dim));
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw InputError("pure: zero vector");
  const ComplexVector unit = psi / n;
  return DensityOperator(unit * unit.adjoint());
}

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InputError("probability distribution is empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InputError("probability weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probability weights sum to " << sum << ", expected 1";
    throw InputError(msg.str());
  }
}

double von_neumann_entropy(const DensityOperator& rho) {
  if (!rho.normalized()) {
    throw DomainError("von_neumann_entropy requires a normalized state");
  }
  const RealVector spectrum = psd_spectrum(rho.matrix());
  return spectrum_entropy({spectrum.data(), static_cast<size_t>(spectrum.size())});
}

double shannon_entropy(const ProbabilityDistribution& p) {
  return spectrum_entropy(p.weights());
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw InputError("fidelity: dimension mismatch");
  }
  const ComplexMatrix overlap = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
  Eigen::JacobiSVD<ComplexMatrix> svd(overlap);
  const double f = svd.singularValues().sum();
  return std::clamp(f * f, 0.0, 1.0);
}

ComplexMatrix complex_gaussian(Index rows, Index cols, RngStream& rng) {
  ComplexMatrix g(rows, cols);
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im) * M_SQRT1_2;
    }
  }
  return g;
}

ComplexMatrix haar_isometry(Index rows, Index cols, RngStream& rng) {
  if (rows < 1 || cols < 1 || cols > rows) {
    throw InputError("haar_isometry: need 1 <= cols <= rows");
  }
  check_dimension_cap(rows, cols);
  const ComplexMatrix g = complex_gaussian(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

ComplexMatrix haar_unitary(Index dim, RngStream& rng) {
  return haar_isometry(dim, dim, rng);
}

}  // namespace qcap
