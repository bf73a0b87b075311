#pragma once

#include "isogeo/bundle_geometry.hpp"

namespace isogeo {

/// Hermitian operator on the Hilbert space together with the value of hbar
/// used when it generates dynamics.
template <typename Real = double>
class Observable {
 public:
  explicit Observable(CMatrix<Real> matrix, Real hbar = Real(1), const Tolerances& tol = {})
      : matrix_(std::move(matrix)), hbar_(hbar) {
    if (!is_square(matrix_)) fail(ErrorKind::ShapeMismatch, "observable must be square");
    if (!(hbar_ > Real(0))) fail(ErrorKind::InvalidArgument, "hbar must be positive");
    if (hermiticity_residual(matrix_) > Real(tol.herm) * std::max(Real(1), matrix_.norm())) {
      fail(ErrorKind::NotHermitian, "observable is not Hermitian");
    }
    matrix_ = hermitian_part(matrix_);
  }

  const CMatrix<Real>& matrix() const { return matrix_; }
  Real hbar() const { return hbar_; }
  Index dim() const { return matrix_.rows(); }

 private:
  CMatrix<Real> matrix_;
  Real hbar_;
};

/// X_A(Psi) = d/de [exp(e A / (i hbar)) Psi] at e = 0 = A Psi / (i hbar).
template <typename Real>
TangentVector<Real> observable_field(const Observable<Real>& a, const Purification<Real>& psi) {
  if (a.dim() != psi.rows()) fail(ErrorKind::ShapeMismatch, "observable and purification dimensions differ");
  const CMatrix<Real> x = (Complex<Real>(0, -1) / a.hbar()) * (a.matrix() * psi.matrix());
  Tolerances loose;
  loose.tangent = 1e-8;
  return TangentVector<Real>(psi, x, loose);
}

/// Delta A(rho) = sqrt(Tr((A - <A>)^2 rho)), equal to
/// sqrt(Tr(A^2 rho) - Tr(A rho)^2). Radicands down to
/// -tol.radicand * max(1, Tr(A^2 rho)) are rounding and clamp to zero.
template <typename Real>
Real uncertainty(const Observable<Real>& a, const DensityOperator<Real>& rho, const Tolerances& tol = {}) {
  if (a.dim() != rho.dim()) fail(ErrorKind::ShapeMismatch, "observable and state dimensions differ");
  const Real mean = (a.matrix() * rho.matrix()).trace().real();
  const CMatrix<Real> centred = a.matrix() - mean * CMatrix<Real>::Identity(a.dim(), a.dim());
  const Real second = (a.matrix() * a.matrix() * rho.matrix()).trace().real();
  const Real radicand = (centred * centred * rho.matrix()).trace().real();
  if (radicand < Real(0)) {
    if (radicand < -Real(tol.radicand) * std::max(Real(1), second)) {
      fail(ErrorKind::NegativeRadicand, "variance is negative beyond rounding");
    }
    return Real(0);
  }
  return std::sqrt(radicand);
}

/// The three terms of Delta A^2 = g_term + square_of_mean_term -
/// second_moment_term, plus the two trace identities they rest on.
template <typename Real = double>
struct VarianceDecomposition {
  Real g_term;                ///< hbar^2 g(X_A, X_A)
  Real square_of_mean_term;   ///< hbar^2 Tr(A(X_A) P)^2   (nonpositive)
  Real second_moment_term;    ///< hbar^2 Tr(A(X_A)^2 P)   (nonpositive)
  Real variance;              ///< Tr(A^2 rho) - Tr(A rho)^2 computed directly

  Real trace_a2_rho;          ///< Tr(A^2 rho)
  Real hbar2_G;               ///< hbar^2 G(X_A, X_A)
  Complex<Real> trace_a_rho;  ///< Tr(A rho)
  Complex<Real> i_hbar_trace_conn_p;  ///< i hbar Tr(A(X_A) P)

  Real recombined() const { return g_term + square_of_mean_term - second_moment_term; }
  Real identity_residual() const { return std::abs(variance - recombined()); }
  Real second_moment_residual() const { return std::abs(trace_a2_rho - hbar2_G); }
  Real mean_residual() const { return std::abs(trace_a_rho - i_hbar_trace_conn_p); }
};

template <typename Real>
VarianceDecomposition<Real> variance_decomposition(const Observable<Real>& a, const Purification<Real>& psi) {
  const auto x = observable_field(a, psi);
  const CMatrix<Real> conn = connection_form(psi, x.matrix());
  const CMatrix<Real> hor = x.matrix() - psi.matrix() * conn;
  const CMatrix<Real> p = psi.spectrum().P();
  const Real h2 = a.hbar() * a.hbar();
  const Complex<Real> tr_ap = (conn * p).trace();
  const Complex<Real> tr_a2p = (conn * conn * p).trace();

  const CMatrix<Real> rho = psi.matrix() * psi.matrix().adjoint();
  const CMatrix<Real> ar = a.matrix() * rho;

  VarianceDecomposition<Real> out{};
  out.g_term = h2 * hs_real_inner(hor, hor);
  out.square_of_mean_term = h2 * (tr_ap * tr_ap).real();
  out.second_moment_term = h2 * tr_a2p.real();
  out.trace_a2_rho = (a.matrix() * ar).trace().real();
  out.trace_a_rho = ar.trace();
  out.variance = out.trace_a2_rho - out.trace_a_rho.real() * out.trace_a_rho.real();
  out.hbar2_G = h2 * hs_real_inner(x.matrix(), x.matrix());
  out.i_hbar_trace_conn_p = Complex<Real>(0, a.hbar()) * tr_ap;
  return out;
}

/// Weighted eigenvalue statistics behind the convexity step: lambda are the
/// eigenvalues of i A(X_A) found blockwise (so the diagonalizing unitary
/// commutes with P), weights the matching entries of P.
template <typename Real = double>
struct ConvexityTerms {
  std::vector<Real> lambdas;
  std::vector<Real> weights;
  Real weighted_mean_squared;   ///< (Sum p_j lambda_j)^2
  Real weighted_second_moment;  ///< Sum p_j lambda_j^2
  CMatrix<Real> diagonalizer;   ///< block-diagonal unitary U
};

template <typename Real>
ConvexityTerms<Real> convexity_terms(const Observable<Real>& a, const Purification<Real>& psi) {
  const auto x = observable_field(a, psi);
  const CMatrix<Real> conn = connection_form(psi, x.matrix());
  const CMatrix<Real> h = hermitian_part(CMatrix<Real>(Complex<Real>(0, 1) * conn));
  const auto& sigma = psi.spectrum();

  ConvexityTerms<Real> out{};
  out.diagonalizer = CMatrix<Real>::Zero(sigma.rank(), sigma.rank());
  out.lambdas.resize(static_cast<std::size_t>(sigma.rank()));
  out.weights = sigma.values();
  for (const auto& b : sigma.blocks()) {
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(h.block(b.offset, b.offset, b.size, b.size));
    out.diagonalizer.block(b.offset, b.offset, b.size, b.size) = solver.eigenvectors().adjoint();
    for (Index i = 0; i < b.size; ++i) out.lambdas[static_cast<std::size_t>(b.offset + i)] = solver.eigenvalues()(i);
  }
  Real mean(0), second(0);
  for (std::size_t j = 0; j < out.lambdas.size(); ++j) {
    mean += out.weights[j] * out.lambdas[j];
    second += out.weights[j] * out.lambdas[j] * out.lambdas[j];
  }
  out.weighted_mean_squared = mean * mean;
  out.weighted_second_moment = second;
  return out;
}

template <typename Real = double>
struct DispersionBound {
  Real lhs;           ///< Delta A
  Real rhs;           ///< hbar sqrt(g(X_A, X_A))
  bool is_equality;   ///< A(X_A) is a multiple of the identity
  bool horizontal;    ///< A(X_A) vanishes
};

/// Delta A >= hbar sqrt(g(X_A, X_A)). Equality holds exactly when the
/// connection form of X_A is a scalar multiple of the identity; the
/// horizontal case (scalar zero) and every pure state are instances.
template <typename Real>
DispersionBound<Real> dispersion_bound_check(const Observable<Real>& a, const DensityOperator<Real>& rho,
                                             const Tolerances& tol = {}) {
  const auto psi = standard_purification(rho, tol);
  const auto x = observable_field(a, psi);
  const CMatrix<Real> conn = connection_form(psi, x.matrix());
  const CMatrix<Real> hor = x.matrix() - psi.matrix() * conn;
  const Complex<Real> mean = (conn * psi.spectrum().P()).trace();
  const CMatrix<Real> spread = conn - mean * CMatrix<Real>::Identity(conn.rows(), conn.cols());

  DispersionBound<Real> out{};
  out.lhs = uncertainty(a, rho, tol);
  out.rhs = a.hbar() * std::sqrt(hs_real_inner(hor, hor));
  out.horizontal = conn.norm() <= Real(tol.horizontal);
  out.is_equality = spread.norm() <= Real(tol.horizontal);
  return out;
}

}  // namespace isogeo
