#pragma once

#include "isogeo/types.hpp"

namespace isogeo::numerics {

// Fornberg's recursion: weights w such that f^(order)(x0) ~ Sum_i w_i f(x_i).
template <typename Real>
std::vector<Real> fornberg_weights(Real x0, const std::vector<Real>& x, int order) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<Real>> c(static_cast<std::size_t>(n + 1), std::vector<Real>(static_cast<std::size_t>(order + 1), Real(0)));
  Real c1 = Real(1);
  Real c4 = x[0] - x0;
  c[0][0] = Real(1);
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    Real c2 = Real(1);
    const Real c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const Real c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (Real(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - Real(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<Real> w(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) w[static_cast<std::size_t>(i)] = c[i][order];
  return w;
}

// Indices of the `width` samples nearest to i, shifted inward at the ends.
inline std::pair<std::size_t, std::size_t> stencil_window(std::size_t i, std::size_t count, std::size_t width) {
  width = std::min(width, count);
  std::size_t first = i >= width / 2 ? i - width / 2 : 0;
  if (first + width > count) first = count - width;
  return {first, first + width};
}

/// First derivative of sampled values on a possibly non-uniform grid with a
/// five-point stencil (fourth order), centred in the interior and one-sided
/// at the ends.
template <typename Real, typename T>
std::vector<T> differentiate(const std::vector<Real>& t, const std::vector<T>& f, std::size_t width = 5) {
  const std::size_t n = t.size();
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [first, last] = stencil_window(i, n, width);
    std::vector<Real> xs(t.begin() + static_cast<std::ptrdiff_t>(first), t.begin() + static_cast<std::ptrdiff_t>(last));
    const auto w = fornberg_weights(t[i], xs, 1);
    T d = f[first] * w[0];
    for (std::size_t j = 1; j < w.size(); ++j) d = d + f[first + j] * w[j];
    out.push_back(std::move(d));
  }
  return out;
}

/// Composite Simpson rule on an irregular grid; an odd number of intervals is
/// closed with the matching three-point correction on the last interval.
template <typename Real>
Real simpson(const std::vector<Real>& x, const std::vector<Real>& f) {
  const std::size_t intervals = x.size() - 1;
  if (x.size() < 2) return Real(0);
  if (intervals == 1) return (x[1] - x[0]) * (f[0] + f[1]) / Real(2);
  Real result(0);
  for (std::size_t i = 1; i < intervals; i += 2) {
    const Real h0 = x[i] - x[i - 1];
    const Real h1 = x[i + 1] - x[i];
    const Real hph = h1 + h0;
    const Real hdh = h1 / h0;
    const Real hmh = h1 * h0;
    result += (hph / Real(6)) * ((Real(2) - hdh) * f[i - 1] + (hph * hph / hmh) * f[i] + (Real(2) - Real(1) / hdh) * f[i + 1]);
  }
  if (intervals % 2 == 1) {
    const Real h0 = x[intervals - 1] - x[intervals - 2];
    const Real h1 = x[intervals] - x[intervals - 1];
    result += f[intervals] * (Real(2) * h1 * h1 + Real(3) * h0 * h1) / (Real(6) * (h0 + h1));
    result += f[intervals - 1] * (h1 * h1 + Real(3) * h1 * h0) / (Real(6) * h0);
    result -= f[intervals - 2] * h1 * h1 * h1 / (Real(6) * h0 * (h0 + h1));
  }
  return result;
}

/// Cubic Lagrange interpolation of samples at t_i + theta (t_{i+1} - t_i),
/// 0 <= theta <= 1; falls back to linear interpolation with fewer than four
/// samples.
template <typename Real, typename T>
T interpolate_in_interval(const std::vector<Real>& t, const std::vector<T>& f, std::size_t i, Real theta) {
  if (t.size() < 4) return f[i] * (Real(1) - theta) + f[i + 1] * theta;
  const Real tm = t[i] + theta * (t[i + 1] - t[i]);
  std::size_t first = i >= 1 ? i - 1 : 0;
  if (first + 4 > t.size()) first = t.size() - 4;
  T out = f[first] * Real(0);
  for (std::size_t a = first; a < first + 4; ++a) {
    Real w(1);
    for (std::size_t b = first; b < first + 4; ++b) {
      if (a != b) w *= (tm - t[b]) / (t[a] - t[b]);
    }
    out = out + f[a] * w;
  }
  return out;
}

template <typename Real, typename T>
T midpoint_value(const std::vector<Real>& t, const std::vector<T>& f, std::size_t i) {
  return interpolate_in_interval(t, f, i, Real(0.5));
}

}  // namespace isogeo::numerics
