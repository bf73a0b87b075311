#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace isogeo {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Numerical tolerances shared by every validation in the library. The
// defaults are the library-wide contract; callers may override any field.
struct Tolerances {
  double trace = 1e-9;
  double herm = 1e-9;
  double fiber = 1e-9;
  double tangent = 1e-9;
  double commute = 1e-9;
  double orth = 1e-8;
  double psd = 1e-10;
  double degeneracy = 1e-9;
  double horizontal = 1e-10;
  double radicand = 1e-12;

  // Sets the five structural tolerances (trace, hermiticity, fiber, tangency,
  // commutation) to one value, leaving the rank/degeneracy cuts alone.
  static Tolerances uniform(double tol) {
    Tolerances t;
    t.trace = t.herm = t.fiber = t.tangent = t.commute = tol;
    return t;
  }
};

enum class ErrorKind {
  InvalidArgument,
  NotDecreasing,
  NotPositive,
  TraceNotOne,
  DimensionTooSmall,
  NotHermitian,
  NotPSD,
  RankMismatch,
  SpectrumMismatch,
  FiberViolation,
  NotTangent,
  NotAntiHermitian,
  NotInGaugeAlgebra,
  ShapeMismatch,
  BaseMismatch,
  NegativeRadicand,
  StepTooLarge,
  FiberMismatch,
  GridMismatch,
  NotDistinguishable,
  NotInvertible,
  NotFullRank,
  SingularState,
  InvalidSpectrum,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotDecreasing: return "NotDecreasing";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::SpectrumMismatch: return "SpectrumMismatch";
    case ErrorKind::FiberViolation: return "FiberViolation";
    case ErrorKind::NotTangent: return "NotTangent";
    case ErrorKind::NotAntiHermitian: return "NotAntiHermitian";
    case ErrorKind::NotInGaugeAlgebra: return "NotInGaugeAlgebra";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::FiberMismatch: return "FiberMismatch";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NotDistinguishable: return "NotDistinguishable";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotFullRank: return "NotFullRank";
    case ErrorKind::SingularState: return "SingularState";
    case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
  }
  return "Unknown";
}

// Domain validation failure. Carries a machine-readable kind so the CLI can
// map it onto an exit code and tests can assert on it.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw GeometryError(kind, what);
}

// ---------------------------------------------------------------------------
// Small dense helpers. They accept any Eigen expression and return evaluated
// matrices of the same scalar type.

template <typename Derived>
auto frobenius(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat out = (m + m.adjoint()) / Scalar(2);
  return out;
}

template <typename Derived>
auto anti_hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat out = (m - m.adjoint()) / Scalar(2);
  return out;
}

template <typename Derived>
bool is_square(const Eigen::MatrixBase<Derived>& m) {
  return m.rows() == m.cols();
}

template <typename Derived>
auto hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).norm();
}

template <typename Derived>
auto anti_hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()).norm();
}

// Real part of the Hilbert-Schmidt product, Re Tr(A^dagger B).
template <typename DA, typename DB>
auto hs_real_inner(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

template <typename Real>
CMatrix<Real> real_diagonal(const std::vector<Real>& values) {
  const auto k = static_cast<Index>(values.size());
  CMatrix<Real> d = CMatrix<Real>::Zero(k, k);
  for (Index i = 0; i < k; ++i) d(i, i) = values[static_cast<std::size_t>(i)];
  return d;
}

// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
// decreasing order (Eigen returns them increasing).
template <typename Real>
struct HermitianEigen {
  RVector<Real> values;
  CMatrix<Real> vectors;
};

template <typename Derived>
auto hermitian_eigen_descending(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const CMatrix<Real> h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(h);
  HermitianEigen<Real> out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

// f applied to a Hermitian matrix through its spectral decomposition.
template <typename Real, typename F>
CMatrix<Real> hermitian_function(const CMatrix<Real>& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hermitian_part(h));
  const auto& v = solver.eigenvectors();
  CVector<Real> fl(h.rows());
  for (Index i = 0; i < h.rows(); ++i) fl(i) = f(solver.eigenvalues()(i));
  return v * fl.asDiagonal() * v.adjoint();
}

// Largest absolute eigenvalue of a Hermitian matrix (spectral norm).
template <typename Real>
Real hermitian_spectral_norm(const CMatrix<Real>& h) {
  if (h.size() == 0) return Real(0);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Unitary exp(-i h tau) for Hermitian h.
template <typename Real>
CMatrix<Real> unitary_propagator(const CMatrix<Real>& h, Real tau) {
  const Complex<Real> minus_i(0, -1);
  return hermitian_function<Real>(h, [&](Real lambda) { return std::exp(minus_i * lambda * tau); });
}

// Principal logarithm of a unitary matrix, returned as an anti-Hermitian
// matrix with eigenvalues i*theta, theta in (-pi, pi].
template <typename Real>
CMatrix<Real> unitary_log(const CMatrix<Real>& w) {
  Eigen::ComplexSchur<CMatrix<Real>> schur(w);
  const CMatrix<Real>& t = schur.matrixT();
  const CMatrix<Real>& z = schur.matrixU();
  CVector<Real> logs(w.rows());
  for (Index i = 0; i < w.rows(); ++i) logs(i) = Complex<Real>(0, std::arg(t(i, i)));
  CMatrix<Real> a = z * logs.asDiagonal() * z.adjoint();
  return anti_hermitian_part(a);
}

}  // namespace isogeo
