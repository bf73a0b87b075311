#pragma once

#include "isogeo/numerics.hpp"
#include "isogeo/observables.hpp"

#include <limits>
#include <numbers>

namespace isogeo {

namespace detail {

template <typename Real>
bool same_grid(const std::vector<Real>& a, const std::vector<Real>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > Real(1e-12) * std::max(Real(1), std::abs(a[i]))) return false;
  }
  return true;
}

template <typename Real>
void require_increasing(const std::vector<Real>& t) {
  if (t.size() < 2) fail(ErrorKind::InvalidArgument, "a time grid needs at least two samples");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) fail(ErrorKind::InvalidArgument, "time grid must be strictly increasing");
  }
}

}  // namespace detail

/// Samples of a curve of isospectral density operators.
template <typename Real = double>
class StateCurve {
 public:
  StateCurve(std::vector<Real> times, std::vector<DensityOperator<Real>> states, const Tolerances& tol = {})
      : times_(std::move(times)), states_(std::move(states)) {
    detail::require_increasing(times_);
    if (times_.size() != states_.size()) fail(ErrorKind::GridMismatch, "one state per time sample is required");
    for (const auto& s : states_) require_same_spectrum(states_.front().spectrum(), s.spectrum(), tol);
  }

  const std::vector<Real>& times() const { return times_; }
  const std::vector<DensityOperator<Real>>& states() const { return states_; }
  const Spectrum<Real>& spectrum() const { return states_.front().spectrum(); }
  std::size_t size() const { return times_.size(); }
  const DensityOperator<Real>& front() const { return states_.front(); }
  const DensityOperator<Real>& back() const { return states_.back(); }

  std::vector<CMatrix<Real>> matrices() const {
    std::vector<CMatrix<Real>> out;
    out.reserve(states_.size());
    for (const auto& s : states_) out.push_back(s.matrix());
    return out;
  }

 private:
  std::vector<Real> times_;
  std::vector<DensityOperator<Real>> states_;
};

/// Samples of a curve in the purification space over a StateCurve.
template <typename Real = double>
struct LiftedCurve {
  std::vector<Real> times;
  std::vector<Purification<Real>> purifications;

  std::vector<CMatrix<Real>> matrices() const {
    std::vector<CMatrix<Real>> out;
    out.reserve(purifications.size());
    for (const auto& p : purifications) out.push_back(p.matrix());
    return out;
  }
};

/// Hamiltonian sampled on a time grid; between samples it is interpolated.
template <typename Real = double>
class HamiltonianSchedule {
 public:
  HamiltonianSchedule(std::vector<Real> times, std::vector<Observable<Real>> operators)
      : times_(std::move(times)), operators_(std::move(operators)) {
    detail::require_increasing(times_);
    if (times_.size() != operators_.size()) fail(ErrorKind::GridMismatch, "one operator per time sample is required");
    for (const auto& h : operators_) {
      if (h.dim() != operators_.front().dim()) fail(ErrorKind::ShapeMismatch, "schedule operators differ in size");
      if (h.hbar() != operators_.front().hbar()) fail(ErrorKind::InvalidArgument, "schedule operators disagree on hbar");
    }
  }

  /// Constant Hamiltonian on a uniform grid with `steps` intervals.
  static HamiltonianSchedule constant(const Observable<Real>& h, Real t0, Real t1, std::size_t steps) {
    if (steps < 1) fail(ErrorKind::InvalidArgument, "need at least one step");
    std::vector<Real> t(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) t[i] = t0 + (t1 - t0) * Real(i) / Real(steps);
    return HamiltonianSchedule(std::move(t), std::vector<Observable<Real>>(steps + 1, h));
  }

  const std::vector<Real>& times() const { return times_; }
  const std::vector<Observable<Real>>& operators() const { return operators_; }
  Real hbar() const { return operators_.front().hbar(); }
  Index dim() const { return operators_.front().dim(); }
  std::size_t size() const { return times_.size(); }

  std::vector<CMatrix<Real>> matrices() const {
    std::vector<CMatrix<Real>> out;
    out.reserve(operators_.size());
    for (const auto& h : operators_) out.push_back(h.matrix());
    return out;
  }

 private:
  std::vector<Real> times_;
  std::vector<Observable<Real>> operators_;
};

template <typename Real>
std::vector<Real> uniform_grid(Real t0, Real t1, std::size_t steps) {
  std::vector<Real> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = t0 + (t1 - t0) * Real(i) / Real(steps);
  return t;
}

// ---------------------------------------------------------------------------
// Purification-space utilities.

/// Y (Y^dagger Y)^{-1/2} P^{1/2}: maps a full-column-rank n x k matrix onto
/// the purification space.
template <typename Real>
CMatrix<Real> retract(const CMatrix<Real>& y, const Spectrum<Real>& sigma) {
  const CMatrix<Real> gram = y.adjoint() * y;
  const CMatrix<Real> inv_sqrt = hermitian_function<Real>(gram, [](Real l) { return Real(1) / std::sqrt(l); });
  return y * inv_sqrt * sigma.P_sqrt();
}

/// Right gauge transform phi U, U commuting with P, maximizing
/// Re Tr(psi^dagger phi U). Writes the smallest block singular value relative
/// to its eigenvalue into `min_overlap` when given.
template <typename Real>
CMatrix<Real> align_gauge(const CMatrix<Real>& phi, const CMatrix<Real>& psi, const Spectrum<Real>& sigma,
                          Real* min_overlap = nullptr) {
  const CMatrix<Real> b = psi.adjoint() * phi;
  CMatrix<Real> u = CMatrix<Real>::Zero(sigma.rank(), sigma.rank());
  Real worst(1);
  for (const auto& blk : sigma.blocks()) {
    const CMatrix<Real> m = b.block(blk.offset, blk.offset, blk.size, blk.size);
    Eigen::JacobiSVD<CMatrix<Real>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // maximize Re Tr(M U): M = W S V^dagger -> U = V W^dagger
    u.block(blk.offset, blk.offset, blk.size, blk.size) = svd.matrixV() * svd.matrixU().adjoint();
    worst = std::min(worst, svd.singularValues().minCoeff() / blk.value);
  }
  if (min_overlap) *min_overlap = worst;
  return phi * u;
}

/// Purification of rho built from the eigenvectors of rho but normalized with
/// the given spectrum (so that it lies exactly on the orbit labelled sigma).
template <typename Real>
CMatrix<Real> fiber_point(const DensityOperator<Real>& rho, const Spectrum<Real>& sigma) {
  const auto eig = hermitian_eigen_descending(rho.matrix());
  return eig.vectors.leftCols(sigma.rank()) * sigma.P_sqrt();
}

/// Unitary W close to the identity with W Q0 = Q1 for isometries Q0, Q1
/// (n x k). The complement of Q0 is carried to the nearest orthonormal frame
/// of the complement of Q1.
template <typename Real>
CMatrix<Real> connecting_unitary(const CMatrix<Real>& q0, const CMatrix<Real>& q1) {
  const Index n = q0.rows();
  const Index k = q0.cols();
  CMatrix<Real> w = q1 * q0.adjoint();
  if (n == k) return w;
  auto complement = [&](const CMatrix<Real>& q) {
    Eigen::HouseholderQR<CMatrix<Real>> qr(q);
    const CMatrix<Real> full = qr.householderQ() * CMatrix<Real>::Identity(n, n);
    CMatrix<Real> c = full.rightCols(n - k);
    c -= q * (q.adjoint() * c);
    Eigen::HouseholderQR<CMatrix<Real>> qr2(c);
    return CMatrix<Real>(qr2.householderQ() * CMatrix<Real>::Identity(n, n - k));
  };
  const CMatrix<Real> c0 = complement(q0);
  const CMatrix<Real> b = c0 - q1 * (q1.adjoint() * c0);
  Eigen::JacobiSVD<CMatrix<Real>> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CMatrix<Real> c1;
  if (svd.singularValues().minCoeff() > Real(1e-6)) {
    c1 = svd.matrixU() * svd.matrixV().adjoint();
  } else {
    c1 = complement(q1);
  }
  w += c1 * c0.adjoint();
  return w;
}

/// Hermitian H with H Psi = i hbar Psidot for a tangent Psidot:
/// H = i hbar (Psidot P^-1 Psi^+ - Psi P^-1 Psidot^+ - Psi P^-1 (Psi^+ Psidot) P^-1 Psi^+).
template <typename Real>
CMatrix<Real> synthesize_hamiltonian(const Purification<Real>& psi, const CMatrix<Real>& psidot, Real hbar) {
  const CMatrix<Real>& p = psi.matrix();
  const CMatrix<Real> pinv = psi.spectrum().P_inverse();
  const CMatrix<Real> h = Complex<Real>(0, hbar) * (psidot * pinv * p.adjoint() - p * pinv * psidot.adjoint() -
                                                   p * pinv * (p.adjoint() * psidot) * pinv * p.adjoint());
  return hermitian_part(h);
}

// ---------------------------------------------------------------------------

/// Integrates rho' = [H, rho] / (i hbar) on the schedule's grid with one
/// unitary step per interval: fourth-order Magnus with H at the two Gauss
/// points of the interval (cubic interpolation of the samples). The spectrum
/// is preserved to rounding.
template <typename Real>
StateCurve<Real> von_neumann_evolve(const HamiltonianSchedule<Real>& h, const DensityOperator<Real>& rho0,
                                    const Tolerances& tol = {}, Real max_phase = Real(0.5)) {
  if (h.dim() != rho0.dim()) fail(ErrorKind::ShapeMismatch, "Hamiltonian and state dimensions differ");
  const auto& t = h.times();
  const auto hs = h.matrices();
  const Real offset = std::sqrt(Real(3)) / Real(6);
  std::vector<DensityOperator<Real>> states;
  states.reserve(t.size());
  states.push_back(rho0);
  CMatrix<Real> rho = rho0.matrix();
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const Real dt = t[i + 1] - t[i];
    const CMatrix<Real> h1 = hermitian_part(numerics::interpolate_in_interval(t, hs, i, Real(0.5) - offset));
    const CMatrix<Real> h2 = hermitian_part(numerics::interpolate_in_interval(t, hs, i, Real(0.5) + offset));
    // exp(Omega) with Omega = -i dt/hbar (H1 + H2)/2 - sqrt(3)/12 (dt/hbar)^2 [H2, H1]
    const CMatrix<Real> comm = h2 * h1 - h1 * h2;
    const CMatrix<Real> eff = hermitian_part(CMatrix<Real>(
        (h1 + h2) / Real(2) + Complex<Real>(0, -std::sqrt(Real(3)) / Real(12) * dt / h.hbar()) * comm));
    if (hermitian_spectral_norm(eff) * dt / h.hbar() > max_phase) {
      fail(ErrorKind::StepTooLarge, "|H| dt / hbar exceeds the unitary step bound");
    }
    const CMatrix<Real> u = unitary_propagator<Real>(eff, dt / h.hbar());
    rho = hermitian_part(CMatrix<Real>(u * rho * u.adjoint()));
    states.emplace_back(rho, rho0.spectrum());
  }
  return StateCurve<Real>(t, std::move(states), tol);
}

/// Horizontal lift through Psi0. Each new sample is the point of the next
/// fiber closest to the previous sample (blockwise polar alignment), so it
/// projects exactly onto the curve and the midpoint connection form of every
/// step vanishes.
template <typename Real>
LiftedCurve<Real> horizontal_lift(const StateCurve<Real>& curve, const Purification<Real>& psi0,
                                  const Tolerances& tol = {}) {
  const auto& sigma = curve.spectrum();
  require_same_spectrum(sigma, psi0.spectrum(), tol);
  if ((psi0.matrix() * psi0.matrix().adjoint() - curve.front().matrix()).norm() > Real(tol.fiber) * Real(10)) {
    fail(ErrorKind::FiberMismatch, "Psi0 does not lie over the first state of the curve");
  }
  LiftedCurve<Real> lift;
  lift.times = curve.times();
  lift.purifications.reserve(curve.size());
  lift.purifications.push_back(psi0);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const CMatrix<Real> phi = fiber_point(curve.states()[i], sigma);
    Real overlap(0);
    const CMatrix<Real> next = align_gauge(phi, lift.purifications.back().matrix(), sigma, &overlap);
    if (overlap < Real(0.5)) fail(ErrorKind::NotTangent, "curve sampling too coarse to lift");
    lift.purifications.emplace_back(next, sigma, tol);
  }
  return lift;
}

/// Largest |Psi_i Psi_i^dagger - rho_i|_F along a lift.
template <typename Real>
Real lift_fiber_residual(const LiftedCurve<Real>& lift, const StateCurve<Real>& curve) {
  Real worst(0);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& p = lift.purifications[i].matrix();
    worst = std::max(worst, Real((p * p.adjoint() - curve.states()[i].matrix()).norm()));
  }
  return worst;
}

/// Largest midpoint connection form |blockdiag(Psi_mid^dagger dPsi)| / dt over
/// the steps of a lift.
template <typename Real>
Real horizontality_residual(const LiftedCurve<Real>& lift) {
  Real worst(0);
  for (std::size_t i = 0; i + 1 < lift.purifications.size(); ++i) {
    const auto& a = lift.purifications[i];
    const auto& b = lift.purifications[i + 1];
    const CMatrix<Real> mid = (a.matrix() + b.matrix()) / Real(2);
    const CMatrix<Real> d = (b.matrix() - a.matrix()) / (lift.times[i + 1] - lift.times[i]);
    const CMatrix<Real> m = mid.adjoint() * d;
    worst = std::max(worst, Real(block_diagonal_part(m, a.spectrum()).norm()));
  }
  return worst;
}

/// Tangent velocities of a lift (fourth-order differences projected onto the
/// tangent spaces).
template <typename Real>
std::vector<CMatrix<Real>> lift_velocities(const LiftedCurve<Real>& lift) {
  auto v = numerics::differentiate(lift.times, lift.matrices());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = tangent_part(lift.purifications[i], v[i]);
  return v;
}

template <typename Real>
Real lift_length(const LiftedCurve<Real>& lift) {
  const auto v = lift_velocities(lift);
  std::vector<Real> speed(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) speed[i] = v[i].norm();
  return numerics::simpson(lift.times, speed);
}

/// sqrt(g(rhodot, rhodot)) at each sample, rhodot from fourth-order
/// differences of the samples.
template <typename Real>
std::vector<Real> curve_speeds(const StateCurve<Real>& curve, const Tolerances& tol = {}) {
  const auto dots = numerics::differentiate(curve.times(), curve.matrices());
  Tolerances fd = tol;
  fd.tangent = std::max(tol.tangent, 1e-6);
  fd.herm = std::max(tol.herm, 1e-6);
  std::vector<Real> speed(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto psi = standard_purification(curve.states()[i], tol);
    const Real g = metric_g(psi, hermitian_part(dots[i]), fd);
    speed[i] = std::sqrt(std::max(g, Real(0)));
  }
  return speed;
}

/// Length of a sampled curve: integral of sqrt(g(rhodot, rhodot)).
template <typename Real>
Real curve_length(const StateCurve<Real>& curve, const Tolerances& tol = {}) {
  return numerics::simpson(curve.times(), curve_speeds(curve, tol));
}

/// Hamiltonian generating the horizontal lift of the curve through the
/// standard purification of its first state. Its energy dispersion equals the
/// curve length.
template <typename Real>
HamiltonianSchedule<Real> min_dispersion_hamiltonian(const StateCurve<Real>& curve, Real hbar = Real(1),
                                                     const Tolerances& tol = {}) {
  const auto lift = horizontal_lift(curve, standard_purification(curve.front(), tol), tol);
  const auto v = lift_velocities(lift);
  std::vector<Observable<Real>> ops;
  ops.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& psi = lift.purifications[i];
    const CMatrix<Real> hor = horizontal_part(psi, v[i]);
    ops.emplace_back(synthesize_hamiltonian(psi, hor, hbar), hbar, tol);
  }
  return HamiltonianSchedule<Real>(curve.times(), std::move(ops));
}

/// (1/hbar) times the time integral of Delta H along the curve.
template <typename Real>
Real energy_dispersion(const HamiltonianSchedule<Real>& h, const StateCurve<Real>& curve, const Tolerances& tol = {}) {
  if (!detail::same_grid(h.times(), curve.times())) fail(ErrorKind::GridMismatch, "schedule and curve grids differ");
  std::vector<Real> spread(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) spread[i] = uncertainty(h.operators()[i], curve.states()[i], tol);
  return numerics::simpson(curve.times(), spread) / h.hbar();
}

/// Psi(t) = cos(t) Psi0 + sin(t) Psi1 on [0, pi/2] between distinguishable
/// states, together with its projection.
template <typename Real>
std::pair<StateCurve<Real>, LiftedCurve<Real>> distinguishable_geodesic(const DensityOperator<Real>& rho0,
                                                                         const DensityOperator<Real>& rho1,
                                                                         std::size_t intervals,
                                                                         const Tolerances& tol = {}) {
  if (!distinguishable(rho0, rho1, tol)) fail(ErrorKind::NotDistinguishable, "states do not have orthogonal supports");
  if (intervals < 1) fail(ErrorKind::InvalidArgument, "need at least one interval");
  const auto& sigma = rho0.spectrum();
  const CMatrix<Real> psi0 = standard_purification(rho0, tol).matrix();
  const CMatrix<Real> psi1 = standard_purification(rho1, sigma, tol).matrix();
  const auto t = uniform_grid(Real(0), std::numbers::pi_v<Real> / Real(2), intervals);
  LiftedCurve<Real> lift;
  lift.times = t;
  std::vector<DensityOperator<Real>> states;
  for (Real s : t) {
    const CMatrix<Real> psi = std::cos(s) * psi0 + std::sin(s) * psi1;
    lift.purifications.emplace_back(psi, sigma, tol);
    states.emplace_back(hermitian_part(CMatrix<Real>(psi * psi.adjoint())), sigma);
  }
  return {StateCurve<Real>(t, std::move(states), tol), std::move(lift)};
}

/// Constant Hamiltonian driving cos(t) Psi0 + sin(t) Psi1 when
/// Psi0^dagger Psi1 = 0: i hbar (Psi1 P^-1 Psi0^dagger - Psi0 P^-1 Psi1^dagger).
template <typename Real>
Observable<Real> geodesic_hamiltonian(const Purification<Real>& psi0, const Purification<Real>& psi1, Real hbar = Real(1)) {
  const CMatrix<Real> pinv = psi0.spectrum().P_inverse();
  const CMatrix<Real> h = Complex<Real>(0, hbar) *
                          (psi1.matrix() * pinv * psi0.matrix().adjoint() - psi0.matrix() * pinv * psi1.matrix().adjoint());
  return Observable<Real>(hermitian_part(h), hbar);
}

// ---------------------------------------------------------------------------
// Distance estimation by path shortening.

template <typename Real = double>
struct DistanceOptions {
  Index segments = 32;
  Real perturbation = Real(0.05);
};

/// Best path found between two states. The path is piecewise generated by
/// constant anti-Hermitian generators, exp(a_m) nodes[m] = nodes[m+1], and
/// `length` is its exact length, hence an upper bound for the distance.
template <typename Real = double>
struct DistanceEstimate {
  Real length;
  std::vector<Real> history;  ///< best length after each iteration; history[0] is the initial path
  std::vector<CMatrix<Real>> nodes;
  std::vector<CMatrix<Real>> generators;

  /// Piecewise-constant Hamiltonians H_m = i hbar a_m / dt reproducing the
  /// path over [0, duration]; H_m acts on [times[m], times[m+1]).
  std::pair<std::vector<Real>, std::vector<CMatrix<Real>>> piecewise_hamiltonians(Real duration, Real hbar) const {
    const auto segments = generators.size();
    const Real dt = duration / Real(segments);
    std::vector<Real> times(segments);
    std::vector<CMatrix<Real>> ops(segments);
    for (std::size_t m = 0; m < segments; ++m) {
      times[m] = dt * Real(m);
      ops[m] = hermitian_part(CMatrix<Real>(Complex<Real>(0, hbar / dt) * generators[m]));
    }
    return {times, ops};
  }
};

namespace detail {

template <typename Real>
struct Segment {
  Real length;
  CMatrix<Real> generator;
  CMatrix<Real> end;  // aligned end node
};

template <typename Real>
Segment<Real> connect(const CMatrix<Real>& a, const CMatrix<Real>& b, const Spectrum<Real>& sigma) {
  const CMatrix<Real> end = align_gauge(b, a, sigma);
  const CMatrix<Real> pis = sigma.P_inverse_sqrt();
  const CMatrix<Real> w = connecting_unitary<Real>(a * pis, end * pis);
  const CMatrix<Real> gen = unitary_log<Real>(w);
  const CMatrix<Real> x = gen * a;
  const CMatrix<Real> conn = block_diagonal_part(CMatrix<Real>(a.adjoint() * x), sigma) * sigma.P_inverse();
  const CMatrix<Real> hor = x - a * conn;
  return {hor.norm(), gen, end};
}

template <typename Real>
Real path_length(const std::vector<CMatrix<Real>>& nodes, const Spectrum<Real>& sigma) {
  Real total(0);
  for (std::size_t m = 0; m + 1 < nodes.size(); ++m) total += connect(nodes[m], nodes[m + 1], sigma).length;
  return total;
}

// One sweep of midpoint shortening over the interior nodes, in random order,
// each move accepted only if it shortens the two adjacent segments.
template <typename Real>
Real shorten(std::vector<CMatrix<Real>>& nodes, const Spectrum<Real>& sigma, Rng& rng) {
  std::vector<std::size_t> order;
  for (std::size_t m = 1; m + 1 < nodes.size(); ++m) order.push_back(m);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t m : order) {
    const auto local = [&](const CMatrix<Real>& node) {
      return connect(nodes[m - 1], node, sigma).length + connect(node, nodes[m + 1], sigma).length;
    };
    Real best = local(nodes[m]);
    const CMatrix<Real> prev = nodes[m - 1];
    const CMatrix<Real> next = align_gauge(nodes[m + 1], prev, sigma);
    const CMatrix<Real> current = align_gauge(nodes[m], prev, sigma);
    const CMatrix<Real> mid = (prev + next) / Real(2);
    for (Real theta : {Real(1), Real(0.5), Real(0.25)}) {
      const CMatrix<Real> y = (Real(1) - theta) * current + theta * mid;
      Eigen::SelfAdjointEigenSolver<CMatrix<Real>> gram(CMatrix<Real>(y.adjoint() * y), Eigen::EigenvaluesOnly);
      if (gram.eigenvalues().minCoeff() < Real(1e-12)) continue;
      const CMatrix<Real> trial = retract(y, sigma);
      const Real len = local(trial);
      if (len < best) {
        best = len;
        nodes[m] = trial;
      }
    }
  }
  return path_length(nodes, sigma);
}

}  // namespace detail

/// Upper bound for the distance between two isospectral states, from a
/// seeded curve-shortening search over piecewise unitary paths. The returned
/// history is non-increasing.
template <typename Real>
DistanceEstimate<Real> distance_upper_bound(const DensityOperator<Real>& rho0, const DensityOperator<Real>& rho1,
                                            std::size_t iterations, std::uint64_t seed,
                                            const DistanceOptions<Real>& options = {}, const Tolerances& tol = {}) {
  require_same_spectrum(rho0.spectrum(), rho1.spectrum(), tol);
  if (options.segments < 1) fail(ErrorKind::InvalidArgument, "need at least one segment");
  const auto& sigma = rho0.spectrum();
  const auto segments = static_cast<std::size_t>(options.segments);
  const CMatrix<Real> start = fiber_point(rho0, sigma);
  const CMatrix<Real> finish = align_gauge(fiber_point(rho1, sigma), start, sigma);

  // straight chord between the aligned endpoints; if it passes near a rank
  // drop, bend it with a fixed seeded bump that vanishes at both ends
  const auto chord_gram_min = [&](const CMatrix<Real>& bump) {
    Real worst = std::numeric_limits<Real>::max();
    for (int j = 1; j < 256; ++j) {
      const Real s = Real(j) / Real(256);
      const CMatrix<Real> y = (Real(1) - s) * start + s * finish + std::sin(std::numbers::pi_v<Real> * s) * bump;
      Eigen::SelfAdjointEigenSolver<CMatrix<Real>> gram(CMatrix<Real>(y.adjoint() * y), Eigen::EigenvaluesOnly);
      worst = std::min(worst, gram.eigenvalues().minCoeff());
    }
    return worst;
  };
  CMatrix<Real> bump = CMatrix<Real>::Zero(start.rows(), start.cols());
  const Real floor = Real(1e-3) * sigma.values().back();
  if (chord_gram_min(bump) < floor) {
    Rng bend(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int attempt = 0; attempt < 16; ++attempt) {
      bump = random_complex_gaussian<Real>(start.rows(), start.cols(), bend);
      bump *= Real(0.3) / bump.norm();
      if (chord_gram_min(bump) >= floor) break;
    }
  }
  std::vector<CMatrix<Real>> nodes(segments + 1);
  nodes.front() = start;
  nodes.back() = finish;
  for (std::size_t m = 1; m < segments; ++m) {
    const Real s = Real(m) / Real(segments);
    nodes[m] = retract(CMatrix<Real>((Real(1) - s) * start + s * finish + std::sin(std::numbers::pi_v<Real> * s) * bump), sigma);
  }

  Rng rng(seed);
  Real best = detail::path_length(nodes, sigma);
  DistanceEstimate<Real> out;
  out.history.push_back(best);
  const Index n = sigma.hilbert_dim();
  for (std::size_t it = 0; it < iterations; ++it) {
    auto candidate = nodes;
    Real len = detail::shorten(candidate, sigma, rng);
    if (len < best) {
      best = len;
      nodes = candidate;
    }
    // restart from a seeded perturbation of the incumbent
    auto perturbed = nodes;
    const Real scale = options.perturbation / Real(1 + it);
    for (std::size_t m = 1; m < segments; ++m) {
      const Real bump = std::sin(std::numbers::pi_v<Real> * Real(m) / Real(segments));
      const CMatrix<Real> u = unitary_propagator<Real>(random_hermitian<Real>(n, rng), scale * bump);
      perturbed[m] = u * perturbed[m];
    }
    len = detail::shorten(perturbed, sigma, rng);
    if (len < best) {
      best = len;
      nodes = perturbed;
    }
    out.history.push_back(best);
  }

  out.length = best;
  out.nodes.push_back(nodes.front());
  for (std::size_t m = 0; m < segments; ++m) {
    auto seg = detail::connect(out.nodes.back(), nodes[m + 1], sigma);
    out.generators.push_back(seg.generator);
    out.nodes.push_back(seg.end);
  }
  return out;
}

// ---------------------------------------------------------------------------

template <typename Real = double>
struct TimeEnergyReport {
  bool applicable;       ///< final state distinguishable from the initial one
  Real mean_dispersion;  ///< <Delta H>
  Real duration;         ///< Delta t
  Real product;          ///< <Delta H> Delta t
  Real bound;            ///< pi hbar / 2
  bool satisfied;
};

/// Evolves rho0 under H and tests <Delta H> Delta t >= pi hbar / 2 when the
/// endpoints are distinguishable. Non-distinguishable endpoints are reported
/// as not applicable.
template <typename Real>
TimeEnergyReport<Real> time_energy_check(const HamiltonianSchedule<Real>& h, const DensityOperator<Real>& rho0,
                                         const Tolerances& tol = {}, Real slack = Real(1e-6)) {
  const auto curve = von_neumann_evolve(h, rho0, tol);
  TimeEnergyReport<Real> out{};
  out.duration = h.times().back() - h.times().front();
  out.product = energy_dispersion(h, curve, tol) * h.hbar();
  out.mean_dispersion = out.product / out.duration;
  out.bound = std::numbers::pi_v<Real> * h.hbar() / Real(2);
  out.applicable = distinguishable(rho0, curve.back(), tol);
  out.satisfied = out.applicable && out.product >= out.bound - slack;
  return out;
}

}  // namespace isogeo
