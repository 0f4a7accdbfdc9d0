#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcap/rng.hpp"

namespace qcap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical cutoffs shared by every module.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;

// Largest row or column count of any constructed dense matrix.
inline constexpr Index kDefaultDimensionCap = Index{1} << 16;
// Largest entry count of any constructed dense matrix (16 bytes each).
inline constexpr Index kDefaultElementCap = Index{1} << 26;

// Throws ResourceLimitError when a rows x cols allocation exceeds the caps.
void check_dimension_cap(Index rows, Index cols,
                         Index cap = kDefaultDimensionCap);

/// Kronecker product a ⊗ b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b,
                     Index cap = kDefaultDimensionCap);

enum class Subsystem { A, B };

/// Partial trace of an operator on H_A ⊗ H_B (row index a * dim_b + b),
/// keeping the named factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, Index dim_a, Index dim_b,
                            Subsystem keep);

// Max abs entry of m - m†; infinity for non-square input.
double hermitian_deviation(const ComplexMatrix& m);

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Hermitian eigendecomposition. Throws DomainError when the input deviates
/// from Hermitian by more than kHermitianTol.
EigenDecomposition eigh(const ComplexMatrix& h);

// Eigenvalues of a Hermitian PSD operator with [-kPsdTol, 0) clamped to zero.
// Throws DomainError on eigenvalues below -kPsdTol.
RealVector psd_spectrum(const ComplexMatrix& h);

// Square root of a PSD operator after clamping.
ComplexMatrix psd_sqrt(const ComplexMatrix& h);

double trace_norm(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);

// -Σ λ log2 λ over a nonnegative spectrum, with 0 log 0 = 0.
double spectrum_entropy(std::span<const double> values);

/// A density operator: Hermitian, PSD, and either trace one or, for outputs
/// of trace-decreasing channels, trace in [0, 1].
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m, bool normalized = true);

  static DensityOperator maximally_mixed(Index dim);
  static DensityOperator pure(const ComplexVector& psi);

  const ComplexMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }
  bool normalized() const { return normalized_; }
  double trace() const { return matrix_.trace().real(); }

 private:
  ComplexMatrix matrix_;
  bool normalized_;
};

class ProbabilityDistribution {
 public:
  explicit ProbabilityDistribution(std::vector<double> weights);

  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

 private:
  std::vector<double> weights_;
};

double von_neumann_entropy(const DensityOperator& rho);
double shannon_entropy(const ProbabilityDistribution& p);

/// F(ρ, σ) = ‖√ρ √σ‖₁².
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

// rows x cols matrix of i.i.d. standard complex Gaussians.
ComplexMatrix complex_gaussian(Index rows, Index cols, RngStream& rng);

/// First `cols` columns of a Haar-distributed unitary on C^rows.
///
/// QR of a complex Gaussian matrix, with each column multiplied by the phase
/// of the matching diagonal entry of R. Without that correction the
/// Householder sign convention biases the distribution.
ComplexMatrix haar_isometry(Index rows, Index cols, RngStream& rng);

ComplexMatrix haar_unitary(Index dim, RngStream& rng);

}  // namespace qcap
