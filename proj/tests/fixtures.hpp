#pragma once

#include "isogeo/isogeo.hpp"

#include <random>

namespace fixture {

using namespace isogeo;

// Random decreasing spectrum of rank k in dimension n. With `degenerate`,
// neighbouring values are merged into multiplicity blocks.
inline Spectrum<double> random_spectrum(Index n, Index k, Rng& rng, bool degenerate = false) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<double> v(static_cast<std::size_t>(k));
  for (auto& x : v) x = unit(rng);
  std::sort(v.begin(), v.end(), std::greater<>());
  if (degenerate && k > 1) {
    std::uniform_int_distribution<Index> pick(0, k - 2);
    const auto i = static_cast<std::size_t>(pick(rng));
    v[i + 1] = v[i];
    if (k > 3) v[static_cast<std::size_t>(k - 1)] = v[static_cast<std::size_t>(k - 2)];
  }
  double sum = 0;
  for (double x : v) sum += x;
  for (auto& x : v) x /= sum;
  return Spectrum<double>::validate(v, n);
}

// Random Hermitian matrix with operator scale ~1.
inline CMatrix<double> random_observable(Index n, Rng& rng) {
  return random_hermitian<double>(n, rng) / std::sqrt(double(n));
}

// Smooth isospectral curve rho(t) = U(t) rho0 U(t)^dagger on [0, 1] with
// U(t) = exp(-i (t H1 + t^2 H2)).
struct SmoothCurve {
  CMatrix<double> h1, h2;
  DensityOperator<double> rho0;

  DensityOperator<double> at(double t) const {
    const CMatrix<double> u = unitary_propagator<double>(CMatrix<double>(t * h1 + t * t * h2), 1.0);
    return DensityOperator<double>(hermitian_part(CMatrix<double>(u * rho0.matrix() * u.adjoint())), rho0.spectrum());
  }

  StateCurve<double> sample(std::size_t intervals) const {
    const auto t = uniform_grid(0.0, 1.0, intervals);
    std::vector<DensityOperator<double>> s;
    for (double x : t) s.push_back(at(x));
    return StateCurve<double>(t, std::move(s));
  }
};

inline SmoothCurve random_curve(const Spectrum<double>& sigma, Rng& rng, std::uint64_t seed) {
  const Index n = sigma.hilbert_dim();
  return {random_observable(n, rng), 0.5 * random_observable(n, rng), random_density(sigma, seed)};
}

// Pair of states with orthogonal supports sharing spectrum sigma (2k <= n).
inline std::pair<DensityOperator<double>, DensityOperator<double>> distinguishable_pair(const Spectrum<double>& sigma,
                                                                                        Rng& rng) {
  const Index n = sigma.hilbert_dim();
  const Index k = sigma.rank();
  const CMatrix<double> u = random_unitary<double>(n, rng);
  const CMatrix<double> p = sigma.P();
  const CMatrix<double> a = u.leftCols(k) * p * u.leftCols(k).adjoint();
  const CMatrix<double> b = u.middleCols(k, k) * p * u.middleCols(k, k).adjoint();
  return {DensityOperator<double>(hermitian_part(a), sigma), DensityOperator<double>(hermitian_part(b), sigma)};
}

}  // namespace fixture
