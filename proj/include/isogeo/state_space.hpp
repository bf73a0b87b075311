#pragma once

#include "isogeo/types.hpp"

#include <cstdint>
#include <random>
#include <sstream>

namespace isogeo {

using Rng = std::mt19937_64;

// One run of equal eigenvalues inside a spectrum: columns [offset, offset+size)
// of a purification share the value `value`.
template <typename Real>
struct SpectrumBlock {
  Real value;
  Index offset;
  Index size;
};

/// Decreasing list of the positive eigenvalues of a density operator, listed
/// with multiplicity, together with the dimension of the ambient Hilbert
/// space. Labels one unitary orbit of density operators.
///
/// Degenerate eigenvalues are detected by chaining neighbours that differ by
/// at most `Tolerances::degeneracy`; every block-structured computation in the
/// library runs off `blocks()`.
template <typename Real = double>
class Spectrum {
 public:
  static Spectrum validate(std::vector<Real> values, Index hilbert_dim, const Tolerances& tol = {}) {
    if (values.empty()) fail(ErrorKind::InvalidArgument, "spectrum must be nonempty");
    for (Real p : values) {
      if (!(p > Real(0))) {
        std::ostringstream os;
        os << "eigenvalue " << static_cast<double>(p) << " is not strictly positive";
        fail(ErrorKind::NotPositive, os.str());
      }
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] > values[i - 1] + Real(tol.degeneracy)) {
        fail(ErrorKind::NotDecreasing, "eigenvalues must be listed in non-increasing order");
      }
    }
    Real sum(0);
    for (Real p : values) sum += p;
    if (std::abs(sum - Real(1)) > Real(tol.trace)) {
      std::ostringstream os;
      os << "eigenvalues sum to " << static_cast<double>(sum);
      fail(ErrorKind::TraceNotOne, os.str());
    }
    if (hilbert_dim < static_cast<Index>(values.size())) {
      fail(ErrorKind::DimensionTooSmall, "Hilbert space dimension is smaller than the rank");
    }
    return Spectrum(std::move(values), hilbert_dim, tol.degeneracy);
  }

  const std::vector<Real>& values() const { return values_; }
  Index rank() const { return static_cast<Index>(values_.size()); }
  Index hilbert_dim() const { return hilbert_dim_; }
  const std::vector<SpectrumBlock<Real>>& blocks() const { return blocks_; }
  bool degenerate() const { return static_cast<Index>(blocks_.size()) < rank(); }
  bool full_rank() const { return rank() == hilbert_dim_; }

  std::vector<std::pair<Real, Index>> multiplicities() const {
    std::vector<std::pair<Real, Index>> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.emplace_back(b.value, b.size);
    return out;
  }

  // Index of the block owning column i.
  Index block_of(Index i) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (i >= blocks_[b].offset && i < blocks_[b].offset + blocks_[b].size) return static_cast<Index>(b);
    }
    return -1;
  }

  CMatrix<Real> P() const { return real_diagonal(values_); }

  CMatrix<Real> P_inverse() const {
    std::vector<Real> inv(values_.size());
    std::transform(values_.begin(), values_.end(), inv.begin(), [](Real p) { return Real(1) / p; });
    return real_diagonal(inv);
  }

  CMatrix<Real> P_sqrt() const {
    std::vector<Real> s(values_.size());
    std::transform(values_.begin(), values_.end(), s.begin(), [](Real p) { return std::sqrt(p); });
    return real_diagonal(s);
  }

  CMatrix<Real> P_inverse_sqrt() const {
    std::vector<Real> s(values_.size());
    std::transform(values_.begin(), values_.end(), s.begin(), [](Real p) { return Real(1) / std::sqrt(p); });
    return real_diagonal(s);
  }

  // Same orbit: same rank, same ambient dimension, same values within tol.
  bool matches(const Spectrum& other, double tol = 1e-9) const {
    if (rank() != other.rank() || hilbert_dim_ != other.hilbert_dim_) return false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (std::abs(values_[i] - other.values_[i]) > Real(tol)) return false;
    }
    return true;
  }

 private:
  Spectrum(std::vector<Real> values, Index n, double degeneracy_tol)
      : values_(std::move(values)), hilbert_dim_(n) {
    Index start = 0;
    const auto k = static_cast<Index>(values_.size());
    for (Index i = 1; i <= k; ++i) {
      const bool boundary =
          i == k || values_[static_cast<std::size_t>(i - 1)] - values_[static_cast<std::size_t>(i)] > Real(degeneracy_tol);
      if (boundary) {
        Real mean(0);
        for (Index j = start; j < i; ++j) mean += values_[static_cast<std::size_t>(j)];
        blocks_.push_back({mean / Real(i - start), start, i - start});
        start = i;
      }
    }
  }

  std::vector<Real> values_;
  Index hilbert_dim_;
  std::vector<SpectrumBlock<Real>> blocks_;
};

template <typename Real>
Spectrum<Real> validate_spectrum(std::vector<Real> values, Index hilbert_dim, const Tolerances& tol = {}) {
  return Spectrum<Real>::validate(std::move(values), hilbert_dim, tol);
}

template <typename Real>
void require_same_spectrum(const Spectrum<Real>& a, const Spectrum<Real>& b, const Tolerances& tol = {}) {
  if (!a.matches(b, tol.trace)) fail(ErrorKind::SpectrumMismatch, "operands live on different orbits");
}

/// Hermitian, positive semidefinite, unit-trace n x n matrix together with its
/// spectrum. The two-argument constructor trusts the caller about the
/// spectrum; use `density_from_matrix` to derive it.
template <typename Real = double>
class DensityOperator {
 public:
  DensityOperator(CMatrix<Real> matrix, Spectrum<Real> spectrum)
      : matrix_(std::move(matrix)), spectrum_(std::move(spectrum)) {
    if (!is_square(matrix_) || matrix_.rows() != spectrum_.hilbert_dim()) {
      fail(ErrorKind::ShapeMismatch, "density matrix shape does not match its spectrum");
    }
  }

  const CMatrix<Real>& matrix() const { return matrix_; }
  const Spectrum<Real>& spectrum() const { return spectrum_; }
  Index dim() const { return matrix_.rows(); }

 private:
  CMatrix<Real> matrix_;
  Spectrum<Real> spectrum_;
};

template <typename Real>
DensityOperator<Real> density_from_matrix(const CMatrix<Real>& m, const Tolerances& tol = {}) {
  if (!is_square(m) || m.rows() == 0) fail(ErrorKind::ShapeMismatch, "density matrix must be square and nonempty");
  if (hermiticity_residual(m) > Real(tol.herm)) fail(ErrorKind::NotHermitian, "matrix is not Hermitian");
  const auto eig = hermitian_eigen_descending(m);
  const Index n = m.rows();
  if (eig.values(n - 1) < -Real(tol.psd)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << static_cast<double>(eig.values(n - 1)) << " is negative";
    fail(ErrorKind::NotPSD, os.str());
  }
  const Real trace = m.trace().real();
  if (std::abs(trace - Real(1)) > Real(tol.trace)) {
    std::ostringstream os;
    os << "trace is " << static_cast<double>(trace);
    fail(ErrorKind::TraceNotOne, os.str());
  }
  std::vector<Real> positive;
  for (Index i = 0; i < n; ++i) {
    if (eig.values(i) > Real(tol.psd)) positive.push_back(eig.values(i));
  }
  return DensityOperator<Real>(hermitian_part(m), Spectrum<Real>::validate(std::move(positive), n, tol));
}

/// A point of the purification space: an n x k matrix with
/// Psi^dagger Psi = P(sigma). The constructor validates the fiber condition.
template <typename Real = double>
class Purification {
 public:
  Purification(CMatrix<Real> matrix, Spectrum<Real> spectrum, const Tolerances& tol = {})
      : matrix_(std::move(matrix)), spectrum_(std::move(spectrum)) {
    if (matrix_.rows() != spectrum_.hilbert_dim() || matrix_.cols() != spectrum_.rank()) {
      fail(ErrorKind::ShapeMismatch, "purification must be n x k for its spectrum");
    }
    const Real residual = fiber_residual();
    if (residual > Real(tol.fiber)) {
      std::ostringstream os;
      os << "|Psi^dagger Psi - P(sigma)| = " << static_cast<double>(residual);
      fail(ErrorKind::FiberViolation, os.str());
    }
  }

  const CMatrix<Real>& matrix() const { return matrix_; }
  const Spectrum<Real>& spectrum() const { return spectrum_; }
  Index rows() const { return matrix_.rows(); }
  Index cols() const { return matrix_.cols(); }

  Real fiber_residual() const { return (matrix_.adjoint() * matrix_ - spectrum_.P()).norm(); }

 private:
  CMatrix<Real> matrix_;
  Spectrum<Real> spectrum_;
};

/// Tangent vector X at a purification Psi: Psi^dagger X + X^dagger Psi = 0.
template <typename Real = double>
class TangentVector {
 public:
  TangentVector(Purification<Real> base, CMatrix<Real> matrix, const Tolerances& tol = {})
      : base_(std::move(base)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != base_.rows() || matrix_.cols() != base_.cols()) {
      fail(ErrorKind::ShapeMismatch, "tangent vector must have the shape of its base point");
    }
    const CMatrix<Real> gram = base_.matrix().adjoint() * matrix_;
    const Real residual = (gram + gram.adjoint()).norm();
    if (residual > Real(tol.tangent) * std::max(Real(1), matrix_.norm())) {
      std::ostringstream os;
      os << "tangency residual " << static_cast<double>(residual);
      fail(ErrorKind::NotTangent, os.str());
    }
  }

  const Purification<Real>& base() const { return base_; }
  const CMatrix<Real>& matrix() const { return matrix_; }

 private:
  Purification<Real> base_;
  CMatrix<Real> matrix_;
};

/// Element of the gauge Lie algebra: k x k anti-Hermitian, commuting with
/// P(sigma) (block diagonal in the multiplicity blocks).
template <typename Real = double>
class GaugeAlgebraElement {
 public:
  GaugeAlgebraElement(CMatrix<Real> matrix, Spectrum<Real> spectrum, const Tolerances& tol = {})
      : matrix_(std::move(matrix)), spectrum_(std::move(spectrum)) {
    if (matrix_.rows() != spectrum_.rank() || matrix_.cols() != spectrum_.rank()) {
      fail(ErrorKind::ShapeMismatch, "gauge algebra element must be k x k");
    }
    const Real scale = std::max(Real(1), matrix_.norm());
    if (anti_hermiticity_residual(matrix_) > Real(tol.herm) * scale) {
      fail(ErrorKind::NotAntiHermitian, "gauge algebra element must be anti-Hermitian");
    }
    const CMatrix<Real> p = spectrum_.P();
    if ((matrix_ * p - p * matrix_).norm() > Real(tol.commute) * scale) {
      fail(ErrorKind::NotInGaugeAlgebra, "gauge algebra element must commute with P(sigma)");
    }
  }

  const CMatrix<Real>& matrix() const { return matrix_; }
  const Spectrum<Real>& spectrum() const { return spectrum_; }

  // Eigenvalues of i*xi in increasing order.
  RVector<Real> eigenvalues_of_i_xi() const {
    const CMatrix<Real> h = Complex<Real>(0, 1) * matrix_;
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

 private:
  CMatrix<Real> matrix_;
  Spectrum<Real> spectrum_;
};

// ---------------------------------------------------------------------------

/// Element of the fiber over rho whose columns are sqrt(p_i) v_i, with v_i
/// orthonormal eigenvectors ordered like the spectrum.
template <typename Real>
Purification<Real> standard_purification(const DensityOperator<Real>& rho, const Tolerances& tol = {}) {
  const auto& sigma = rho.spectrum();
  const auto eig = hermitian_eigen_descending(rho.matrix());
  const Index k = sigma.rank();
  Index numerical_rank = 0;
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > Real(tol.psd)) ++numerical_rank;
  }
  if (numerical_rank != k) fail(ErrorKind::RankMismatch, "density operator rank differs from its spectrum");
  CMatrix<Real> psi = eig.vectors.leftCols(k) * sigma.P_sqrt();
  return Purification<Real>(std::move(psi), sigma, tol);
}

template <typename Real>
Purification<Real> standard_purification(const DensityOperator<Real>& rho, const Spectrum<Real>& sigma,
                                         const Tolerances& tol = {}) {
  require_same_spectrum(rho.spectrum(), sigma, tol);
  return standard_purification(rho, tol);
}

template <typename Real>
CMatrix<Real> random_complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  CMatrix<Real> z(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) z(i, j) = Complex<Real>(normal(rng), normal(rng));
  return z;
}

// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
// diag(R) moved into Q.
template <typename Real>
CMatrix<Real> random_unitary(Index n, Rng& rng) {
  const CMatrix<Real> z = random_complex_gaussian<Real>(n, n, rng);
  Eigen::HouseholderQR<CMatrix<Real>> qr(z);
  CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(n, n);
  const CMatrix<Real>& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const Complex<Real> d = r(j, j);
    const Real mag = std::abs(d);
    q.col(j) *= mag > Real(0) ? d / mag : Complex<Real>(1);
  }
  return q;
}

template <typename Real>
CMatrix<Real> random_hermitian(Index n, Rng& rng) {
  const CMatrix<Real> z = random_complex_gaussian<Real>(n, n, rng);
  return hermitian_part(z);
}

// Unitary commuting with P(sigma): independent Haar unitaries per block.
template <typename Real>
CMatrix<Real> random_gauge_unitary(const Spectrum<Real>& sigma, Rng& rng) {
  CMatrix<Real> u = CMatrix<Real>::Zero(sigma.rank(), sigma.rank());
  for (const auto& b : sigma.blocks()) u.block(b.offset, b.offset, b.size, b.size) = random_unitary<Real>(b.size, rng);
  return u;
}

template <typename Real>
GaugeAlgebraElement<Real> random_gauge_algebra(const Spectrum<Real>& sigma, Rng& rng) {
  CMatrix<Real> xi = CMatrix<Real>::Zero(sigma.rank(), sigma.rank());
  for (const auto& b : sigma.blocks()) {
    xi.block(b.offset, b.offset, b.size, b.size) = Complex<Real>(0, 1) * random_hermitian<Real>(b.size, rng);
  }
  return GaugeAlgebraElement<Real>(anti_hermitian_part(xi), sigma);
}

/// rho = U diag(sigma, 0, ..., 0) U^dagger for a seeded Haar unitary U.
template <typename Real>
DensityOperator<Real> random_density(const Spectrum<Real>& sigma, std::uint64_t seed) {
  Rng rng(seed);
  const Index n = sigma.hilbert_dim();
  const CMatrix<Real> u = random_unitary<Real>(n, rng);
  CMatrix<Real> d = CMatrix<Real>::Zero(n, n);
  d.topLeftCorner(sigma.rank(), sigma.rank()) = sigma.P();
  const CMatrix<Real> rho = u * d * u.adjoint();
  return DensityOperator<Real>(hermitian_part(rho), sigma);
}

/// Purification U [P(sigma)^{1/2}; 0] for a seeded Haar unitary U.
template <typename Real>
Purification<Real> random_purification(const Spectrum<Real>& sigma, std::uint64_t seed) {
  Rng rng(seed);
  const Index n = sigma.hilbert_dim();
  const CMatrix<Real> u = random_unitary<Real>(n, rng);
  CMatrix<Real> psi = u.leftCols(sigma.rank()) * sigma.P_sqrt();
  return Purification<Real>(std::move(psi), sigma);
}

/// Orthogonal supports, tested as |rho0 rho1|_F < tol.orth.
template <typename Real>
bool distinguishable(const DensityOperator<Real>& rho0, const DensityOperator<Real>& rho1, const Tolerances& tol = {}) {
  require_same_spectrum(rho0.spectrum(), rho1.spectrum(), tol);
  return (rho0.matrix() * rho1.matrix()).norm() < Real(tol.orth);
}

}  // namespace isogeo
