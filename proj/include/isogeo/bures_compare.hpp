#pragma once

#include "isogeo/evolution.hpp"

namespace isogeo {

/// Comparison of the isospectral distance with the Bures value for the
/// two-level rotation family.
template <typename Real = double>
struct BuresReport {
  Real p1;
  Real p2;
  Real eps;
  Real dist_g;
  Real dist_B;
  Real gap;
  bool strict;
  Real dittmann_cross_check;  ///< |closed form - Dittmann formula on rho1 - rho0|
};

namespace detail {

template <typename Real>
void require_invertible_unit(const CMatrix<Real>& psi, const Tolerances& tol) {
  if (!is_square(psi)) fail(ErrorKind::NotInvertible, "Uhlmann purifications are n x n");
  Eigen::JacobiSVD<CMatrix<Real>> svd(psi);
  if (svd.singularValues().minCoeff() <= Real(tol.psd)) fail(ErrorKind::NotInvertible, "purification is singular");
  if (std::abs(psi.norm() - Real(1)) > Real(tol.fiber)) fail(ErrorKind::NotInvertible, "purification is not of unit norm");
}

// Real-linear map X -> (Psi^dagger X - X^dagger Psi [, Psi^dagger X + X^dagger Psi])
// written as a matrix on the 2 n^2 real coordinates of X.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> uhlmann_constraint_matrix(const CMatrix<Real>& psi,
                                                                               bool with_tangency) {
  const Index n = psi.rows();
  const Index unknowns = 2 * n * n;
  const Index per_constraint = 2 * n * n;
  const Index rows = with_tangency ? 2 * per_constraint : per_constraint;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> m(rows, unknowns);
  for (Index c = 0; c < unknowns; ++c) {
    CMatrix<Real> x = CMatrix<Real>::Zero(n, n);
    const Index entry = c / 2;
    x(entry % n, entry / n) = (c % 2 == 0) ? Complex<Real>(1, 0) : Complex<Real>(0, 1);
    const CMatrix<Real> g = psi.adjoint() * x;
    const CMatrix<Real> parallel = g - g.adjoint();
    for (Index e = 0; e < n * n; ++e) {
      m(2 * e, c) = parallel(e % n, e / n).real();
      m(2 * e + 1, c) = parallel(e % n, e / n).imag();
    }
    if (with_tangency) {
      const CMatrix<Real> tangency = g + g.adjoint();
      for (Index e = 0; e < n * n; ++e) {
        m(per_constraint + 2 * e, c) = tangency(e % n, e / n).real();
        m(per_constraint + 2 * e + 1, c) = tangency(e % n, e / n).imag();
      }
    }
  }
  return m;
}

}  // namespace detail

/// X is horizontal for Uhlmann's bundle at Psi iff Psi^dagger X - X^dagger Psi = 0.
template <typename Real>
bool uhlmann_horizontal_check(const CMatrix<Real>& psi, const CMatrix<Real>& x, const Tolerances& tol = {}) {
  detail::require_invertible_unit(psi, tol);
  if (x.rows() != psi.rows() || x.cols() != psi.cols()) fail(ErrorKind::ShapeMismatch, "X must have the shape of Psi");
  const CMatrix<Real> g = psi.adjoint() * x;
  return (g - g.adjoint()).norm() <= Real(tol.tangent) * std::max(Real(1), x.norm());
}

/// Dimension of the real solution space of the Uhlmann horizontality
/// condition at Psi, optionally intersected with the tangency condition of
/// the isospectral purification space.
template <typename Real>
Index uhlmann_solution_dimension(const CMatrix<Real>& psi, bool with_tangency, Real rank_tol = Real(1e-10)) {
  const auto m = detail::uhlmann_constraint_matrix(psi, with_tangency);
  Eigen::JacobiSVD<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> svd(m);
  const auto& s = svd.singularValues();
  const Real cut = rank_tol * std::max(Real(1), s(0));
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++rank;
  }
  return m.cols() - rank;
}

/// For an invertible orbit (k = n), checks at Psi and at `trials` seeded
/// gauge-equivalent points that no nonzero tangent vector is Uhlmann
/// horizontal (the joint solution space is zero-dimensional).
template <typename Real>
bool intersection_triviality_check(const Purification<Real>& psi, std::size_t trials, std::uint64_t seed) {
  const auto& sigma = psi.spectrum();
  if (!sigma.full_rank()) fail(ErrorKind::NotFullRank, "the orbit must consist of invertible states (k = n)");
  Eigen::JacobiSVD<CMatrix<Real>> svd(psi.matrix());
  if (svd.singularValues().minCoeff() <= Real(1e-12)) fail(ErrorKind::NotFullRank, "purification is singular");
  if (uhlmann_solution_dimension(psi.matrix(), true) != 0) return false;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const CMatrix<Real> moved = psi.matrix() * random_gauge_unitary(sigma, rng);
    if (uhlmann_solution_dimension(moved, true) != 0) return false;
  }
  return true;
}

/// Dittmann's two-level formula evaluated as printed:
/// dist_B(rho, rho + drho)^2 = 1/4 Tr(drho drho + (drho - rho drho)^2 / det rho).
template <typename Real>
Real dittmann_bures_2x2(const CMatrix<Real>& rho, const CMatrix<Real>& drho, const Tolerances& tol = {}) {
  if (rho.rows() != 2 || rho.cols() != 2 || drho.rows() != 2 || drho.cols() != 2) {
    fail(ErrorKind::ShapeMismatch, "the two-level formula needs 2 x 2 matrices");
  }
  const Real det = rho.determinant().real();
  if (det <= Real(tol.psd)) fail(ErrorKind::SingularState, "rho is not invertible");
  const CMatrix<Real> d = drho - rho * drho;
  const Complex<Real> value = (drho * drho + d * d / det).trace() / Real(4);
  return std::sqrt(std::max(value.real(), Real(0)));
}

template <typename Real>
Real dittmann_bures_2x2(const DensityOperator<Real>& rho, const CMatrix<Real>& drho, const Tolerances& tol = {}) {
  return dittmann_bures_2x2(rho.matrix(), drho, tol);
}

namespace detail {

template <typename Real>
void require_two_level_spectrum(Real p1, Real p2, const Tolerances& tol) {
  if (!(p2 > Real(0)) || p1 < p2 || std::abs(p1 + p2 - Real(1)) > Real(tol.trace)) {
    fail(ErrorKind::InvalidSpectrum, "need p1 >= p2 > 0 with p1 + p2 = 1");
  }
}

}  // namespace detail

/// The rotation family
///   [[p2 sin^2 + p1 cos^2, (p2 - p1) sin cos], [(p2 - p1) sin cos, p1 sin^2 + p2 cos^2]]
/// evaluated at angle eps * t.
template <typename Real>
DensityOperator<Real> example_curve(Real p1, Real p2, Real eps, Real t, const Tolerances& tol = {}) {
  detail::require_two_level_spectrum(p1, p2, tol);
  const Real s = std::sin(eps * t);
  const Real c = std::cos(eps * t);
  CMatrix<Real> m(2, 2);
  m(0, 0) = p2 * s * s + p1 * c * c;
  m(0, 1) = (p2 - p1) * s * c;
  m(1, 0) = (p2 - p1) * s * c;
  m(1, 1) = p1 * s * s + p2 * c * c;
  return DensityOperator<Real>(m, Spectrum<Real>::validate({p1, p2}, 2, tol));
}

/// Sampled rotation family over [0, 1].
template <typename Real>
StateCurve<Real> example_state_curve(Real p1, Real p2, Real eps, std::size_t intervals, const Tolerances& tol = {}) {
  const auto t = uniform_grid(Real(0), Real(1), intervals);
  std::vector<DensityOperator<Real>> states;
  for (Real s : t) states.push_back(example_curve(p1, p2, eps, s, tol));
  return StateCurve<Real>(t, std::move(states), tol);
}

/// Closed form of the Dittmann value between the endpoints of the family:
/// ((p1 - p2)/sqrt 2) |sin eps| sqrt(2 + (p1 - p2)^2 sin^2 eps / (2 p1 p2)).
template <typename Real>
Real example_bures_closed_form(Real p1, Real p2, Real eps) {
  const Real d = p1 - p2;
  const Real s = std::sin(eps);
  return d / std::sqrt(Real(2)) * std::abs(s) * std::sqrt(Real(2) + d * d / (Real(2) * p1 * p2) * s * s);
}

/// Largest eps for which the family is treated as length minimizing.
template <typename Real>
constexpr Real example_eps_limit() {
  return std::numbers::pi_v<Real> / Real(4);
}

template <typename Real>
BuresReport<Real> example_gap_report(Real p1, Real p2, Real eps, const Tolerances& tol = {}) {
  detail::require_two_level_spectrum(p1, p2, tol);
  if (!(eps >= Real(0)) || eps > example_eps_limit<Real>()) {
    fail(ErrorKind::InvalidArgument, "eps must lie in [0, pi/4] for the family to be length minimizing");
  }
  BuresReport<Real> r{};
  r.p1 = p1;
  r.p2 = p2;
  r.eps = eps;
  // equal eigenvalues: the orbit is a single point and the family is constant
  const bool degenerate = p1 - p2 <= Real(tol.degeneracy);
  r.dist_g = degenerate ? Real(0) : eps;
  r.dist_B = example_bures_closed_form(p1, p2, eps);
  const auto rho0 = example_curve(p1, p2, eps, Real(0), tol);
  const auto rho1 = example_curve(p1, p2, eps, Real(1), tol);
  const CMatrix<Real> drho = rho1.matrix() - rho0.matrix();
  r.dittmann_cross_check = std::abs(r.dist_B - dittmann_bures_2x2(rho0, drho, tol));
  r.gap = r.dist_g - r.dist_B;
  r.strict = r.gap > Real(tol.trace);
  return r;
}

}  // namespace isogeo
