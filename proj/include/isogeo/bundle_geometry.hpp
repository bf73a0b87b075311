#pragma once

#include "isogeo/state_space.hpp"

namespace isogeo {

/// Diagonal 0/1 projectors E_1, ..., E_l onto the multiplicity blocks of a
/// spectrum. They sum to the identity, are mutually orthogonal and commute
/// with P(sigma).
template <typename Real = double>
struct BlockProjectors {
  std::vector<CMatrix<Real>> projectors;

  explicit BlockProjectors(const Spectrum<Real>& sigma) {
    const Index k = sigma.rank();
    for (const auto& b : sigma.blocks()) {
      CMatrix<Real> e = CMatrix<Real>::Zero(k, k);
      for (Index i = b.offset; i < b.offset + b.size; ++i) e(i, i) = Real(1);
      projectors.push_back(std::move(e));
    }
  }

  std::size_t size() const { return projectors.size(); }
  const CMatrix<Real>& operator[](std::size_t j) const { return projectors[j]; }
};

/// Sum_j E_j M E_j: keeps the diagonal blocks of a k x k matrix.
template <typename Real>
CMatrix<Real> block_diagonal_part(const CMatrix<Real>& m, const Spectrum<Real>& sigma) {
  CMatrix<Real> out = CMatrix<Real>::Zero(m.rows(), m.cols());
  for (const auto& b : sigma.blocks()) {
    out.block(b.offset, b.offset, b.size, b.size) = m.block(b.offset, b.offset, b.size, b.size);
  }
  return out;
}

/// Linear functional on the gauge algebra, xi -> Re Tr(mu^dagger xi).
template <typename Real = double>
struct CotangentValue {
  CMatrix<Real> mu;

  Real pair(const CMatrix<Real>& xi) const { return hs_real_inner(mu, xi); }
  Real pair(const GaugeAlgebraElement<Real>& xi) const { return pair(xi.matrix()); }
};

// ---------------------------------------------------------------------------

/// Bundle projection Psi -> Psi Psi^dagger.
template <typename Real>
DensityOperator<Real> project(const Purification<Real>& psi) {
  const CMatrix<Real> rho = psi.matrix() * psi.matrix().adjoint();
  return DensityOperator<Real>(hermitian_part(rho), psi.spectrum());
}

template <typename Real>
bool same_base(const Purification<Real>& a, const Purification<Real>& b, const Tolerances& tol = {}) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.matrix() - b.matrix()).norm() <= Real(tol.fiber) &&
         a.spectrum().matches(b.spectrum(), tol.trace);
}

/// G(X, Y) = 1/2 Tr(X^dagger Y + Y^dagger X) on raw matrices.
template <typename DA, typename DB>
auto metric_G(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
  return hs_real_inner(x, y);
}

template <typename Real>
Real metric_G(const TangentVector<Real>& x, const TangentVector<Real>& y, const Tolerances& tol = {}) {
  if (!same_base(x.base(), y.base(), tol)) fail(ErrorKind::BaseMismatch, "tangent vectors live at different points");
  return hs_real_inner(x.matrix(), y.matrix());
}

/// Moment of inertia 1/2 Tr((xi^dagger eta + eta^dagger xi) P(sigma)). It does
/// not depend on the point of the purification space.
template <typename Real>
Real moment_of_inertia(const GaugeAlgebraElement<Real>& xi, const GaugeAlgebraElement<Real>& eta,
                       const Tolerances& tol = {}) {
  require_same_spectrum(xi.spectrum(), eta.spectrum(), tol);
  const CMatrix<Real> p = xi.spectrum().P();
  const CMatrix<Real> s = xi.matrix().adjoint() * eta.matrix() + eta.matrix().adjoint() * xi.matrix();
  return (s * p).trace().real() / Real(2);
}

template <typename Real>
CotangentValue<Real> inertia_covector(const GaugeAlgebraElement<Real>& xi) {
  return {xi.matrix() * xi.spectrum().P()};
}

/// Moment map J_Psi(X) . xi = G(X, Psi xi).
template <typename Real>
Real moment_map(const TangentVector<Real>& x, const GaugeAlgebraElement<Real>& xi, const Tolerances& tol = {}) {
  require_same_spectrum(x.base().spectrum(), xi.spectrum(), tol);
  return hs_real_inner(x.matrix(), x.base().matrix() * xi.matrix());
}

template <typename Real>
CotangentValue<Real> momentum_covector(const TangentVector<Real>& x) {
  const CMatrix<Real> m = x.base().matrix().adjoint() * x.matrix();
  return {block_diagonal_part(m, x.base().spectrum())};
}

/// Mechanical connection form A_Psi(X) = Sum_j E_j Psi^dagger X E_j P^{-1}.
/// Defined on any n x k matrix X; the result is anti-Hermitian when X is
/// tangent.
template <typename Real>
CMatrix<Real> connection_form(const Purification<Real>& psi, const CMatrix<Real>& x) {
  if (x.rows() != psi.rows() || x.cols() != psi.cols()) {
    fail(ErrorKind::ShapeMismatch, "connection form argument must have the shape of Psi");
  }
  const CMatrix<Real> m = psi.matrix().adjoint() * x;
  return block_diagonal_part(m, psi.spectrum()) * psi.spectrum().P_inverse();
}

template <typename Real>
GaugeAlgebraElement<Real> connection_form(const TangentVector<Real>& x) {
  const CMatrix<Real> a = connection_form(x.base(), x.matrix());
  Tolerances loose;
  loose.herm = loose.commute = 1e-7;
  return GaugeAlgebraElement<Real>(a, x.base().spectrum(), loose);
}

template <typename Real>
CMatrix<Real> vertical_part(const Purification<Real>& psi, const CMatrix<Real>& x) {
  return psi.matrix() * connection_form(psi, x);
}

template <typename Real>
CMatrix<Real> horizontal_part(const Purification<Real>& psi, const CMatrix<Real>& x) {
  return x - vertical_part(psi, x);
}

template <typename Real>
TangentVector<Real> vertical_projection(const TangentVector<Real>& x) {
  return TangentVector<Real>(x.base(), vertical_part(x.base(), x.matrix()));
}

template <typename Real>
TangentVector<Real> horizontal_projection(const TangentVector<Real>& x) {
  return TangentVector<Real>(x.base(), horizontal_part(x.base(), x.matrix()));
}

/// Orthogonal projection of an ambient n x k matrix onto the tangent space of
/// the purification space at Psi: Y - Psi S with S Hermitian solving
/// P S + S P = Psi^dagger Y + Y^dagger Psi.
template <typename Real>
CMatrix<Real> tangent_part(const Purification<Real>& psi, const CMatrix<Real>& y) {
  const CMatrix<Real> gram = psi.matrix().adjoint() * y;
  const CMatrix<Real> k = gram + gram.adjoint();
  const auto& p = psi.spectrum().values();
  CMatrix<Real> s(k.rows(), k.cols());
  for (Index i = 0; i < k.rows(); ++i)
    for (Index j = 0; j < k.cols(); ++j) s(i, j) = k(i, j) / (p[static_cast<std::size_t>(i)] + p[static_cast<std::size_t>(j)]);
  return y - psi.matrix() * s;
}

/// Pushforward of a tangent vector to the orbit: X Psi^dagger + Psi X^dagger.
template <typename Real>
CMatrix<Real> pushforward(const Purification<Real>& psi, const CMatrix<Real>& x) {
  const CMatrix<Real> m = x * psi.matrix().adjoint();
  return m + m.adjoint();
}

// Unitary whose columns are an orthonormal eigenbasis of rho = Psi Psi^dagger,
// ordered like the spectrum; the trailing n - k columns span the kernel.
template <typename Real>
CMatrix<Real> eigenbasis_from_purification(const Purification<Real>& psi) {
  const Index n = psi.rows();
  const Index k = psi.cols();
  const CMatrix<Real> q = psi.matrix() * psi.spectrum().P_inverse_sqrt();
  CMatrix<Real> v(n, n);
  v.leftCols(k) = q;
  if (n > k) {
    Eigen::HouseholderQR<CMatrix<Real>> qr(q);
    const CMatrix<Real> full = qr.householderQ() * CMatrix<Real>::Identity(n, n);
    CMatrix<Real> complement = full.rightCols(n - k);
    complement -= q * (q.adjoint() * complement);
    Eigen::HouseholderQR<CMatrix<Real>> qr2(complement);
    v.rightCols(n - k) = qr2.householderQ() * CMatrix<Real>::Identity(n, n - k);
  }
  return v;
}

/// Minimal-Frobenius-norm anti-Hermitian a with rhodot = a rho - rho a, where
/// rho = Psi Psi^dagger. Components of rhodot inside a degenerate eigenvalue
/// block (including the kernel) must vanish; otherwise rhodot is not tangent
/// to the orbit.
template <typename Real>
CMatrix<Real> commutator_generator(const Purification<Real>& psi, const CMatrix<Real>& rhodot,
                                   const Tolerances& tol = {}) {
  const Index n = psi.rows();
  const Index k = psi.cols();
  if (rhodot.rows() != n || rhodot.cols() != n) fail(ErrorKind::ShapeMismatch, "rhodot must be n x n");
  const Real scale = std::max(Real(1), rhodot.norm());
  if (hermiticity_residual(rhodot) > Real(tol.herm) * scale) fail(ErrorKind::NotHermitian, "rhodot is not Hermitian");

  const auto& sigma = psi.spectrum();
  const CMatrix<Real> v = eigenbasis_from_purification(psi);
  const CMatrix<Real> d = v.adjoint() * rhodot * v;

  const auto nblocks = static_cast<Index>(sigma.blocks().size());
  auto block_id = [&](Index i) { return i < k ? sigma.block_of(i) : nblocks; };
  auto eigenvalue = [&](Index i) { return i < k ? sigma.values()[static_cast<std::size_t>(i)] : Real(0); };

  CMatrix<Real> a = CMatrix<Real>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (block_id(i) == block_id(j)) {
        if (std::abs(d(i, j)) > Real(tol.tangent) * scale) {
          fail(ErrorKind::NotTangent, "rhodot moves eigenvalues or mixes a degenerate block");
        }
        continue;
      }
      a(i, j) = d(i, j) / (eigenvalue(j) - eigenvalue(i));
    }
  }
  return anti_hermitian_part(CMatrix<Real>(v * a * v.adjoint()));
}

/// Horizontal tangent vector X at Psi with X Psi^dagger + Psi X^dagger = rhodot.
template <typename Real>
TangentVector<Real> tangent_lift(const Purification<Real>& psi, const CMatrix<Real>& rhodot, const Tolerances& tol = {}) {
  const CMatrix<Real> a = commutator_generator(psi, rhodot, tol);
  const CMatrix<Real> x = a * psi.matrix();
  Tolerances loose = tol;
  loose.tangent = std::max(tol.tangent, 1e-8);
  return TangentVector<Real>(psi, horizontal_part(psi, x), loose);
}

/// Submersion metric g(rhodot, rhodot) = G(X^h, X^h) with X^h the horizontal
/// lift of rhodot.
template <typename Real>
Real metric_g(const Purification<Real>& psi, const CMatrix<Real>& rhodot, const Tolerances& tol = {}) {
  const auto x = tangent_lift(psi, rhodot, tol);
  return hs_real_inner(x.matrix(), x.matrix());
}

template <typename Real>
Real metric_g(const DensityOperator<Real>& rho, const CMatrix<Real>& rhodot, const Tolerances& tol = {}) {
  return metric_g(standard_purification(rho, tol), rhodot, tol);
}

}  // namespace isogeo
