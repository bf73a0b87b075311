#include "isogeo/numerics.hpp"

#include <doctest.h>

#include <numbers>

using namespace isogeo;

TEST_CASE("fornberg weights reproduce the classical stencils") {
  const std::vector<double> x = {-2, -1, 0, 1, 2};
  const auto w = numerics::fornberg_weights(0.0, x, 1);
  const std::vector<double> expected = {1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12};
  for (std::size_t i = 0; i < 5; ++i) CHECK(w[i] == doctest::Approx(expected[i]).epsilon(1e-14));
  const auto w0 = numerics::fornberg_weights(0.5, std::vector<double>{0, 1}, 0);
  CHECK(w0[0] == doctest::Approx(0.5));
  CHECK(w0[1] == doctest::Approx(0.5));
}

TEST_CASE("differentiate is fourth-order on smooth data") {
  auto err = [](std::size_t n) {
    std::vector<double> t(n + 1), f(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      t[i] = double(i) / double(n);
      f[i] = std::sin(3 * t[i]);
    }
    const auto d = numerics::differentiate(t, f);
    double worst = 0;
    for (std::size_t i = 0; i <= n; ++i) worst = std::max(worst, std::abs(d[i] - 3 * std::cos(3 * t[i])));
    return worst;
  };
  const double e1 = err(50), e2 = err(100);
  CHECK(e2 < 1e-5);
  CHECK(e1 / e2 > 12);  // ~16 for fourth order
}

TEST_CASE("differentiate handles short grids and irregular spacing") {
  const std::vector<double> t = {0, 0.1, 0.35, 0.5};
  std::vector<double> f;
  for (double x : t) f.push_back(2 * x * x * x - x);
  const auto d = numerics::differentiate(t, f);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(d[i] == doctest::Approx(6 * t[i] * t[i] - 1).epsilon(1e-12));
  const auto two = numerics::differentiate(std::vector<double>{0, 1}, std::vector<double>{1, 3});
  CHECK(two[0] == doctest::Approx(2));
}

TEST_CASE("simpson: even, odd and irregular grids") {
  auto integrate = [](std::size_t n, bool irregular) {
    std::vector<double> x(n + 1), f(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const double s = double(i) / double(n);
      x[i] = irregular ? s + 0.2 * s * (1 - s) : s;
      f[i] = std::exp(x[i]);
    }
    return numerics::simpson(x, f);
  };
  const double exact = std::exp(1.0) - 1;
  CHECK(std::abs(integrate(100, false) - exact) < 1e-9);
  CHECK(std::abs(integrate(101, false) - exact) < 1e-8);
  CHECK(std::abs(integrate(101, true) - exact) < 1e-8);
  // quadratics integrated exactly on irregular grids of either parity
  for (const std::vector<double>& x : {std::vector<double>{0, 0.3, 0.5, 1.0}, std::vector<double>{0, 0.1, 0.5, 0.7, 1.0}}) {
    std::vector<double> f;
    for (double v : x) f.push_back(3 * v * v - v + 2);
    CHECK(numerics::simpson(x, f) == doctest::Approx(2.5).epsilon(1e-14));
  }
  CHECK(numerics::simpson(std::vector<double>{0, 2}, std::vector<double>{1, 3}) == doctest::Approx(4));
}

TEST_CASE("interpolation inside an interval") {
  std::vector<double> t, f;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.1 * i);
    f.push_back(std::pow(t.back(), 3) - t.back());
  }
  for (std::size_t i = 0; i < 10; ++i) {
    const double tm = t[i] + 0.3 * (t[i + 1] - t[i]);
    CHECK(numerics::interpolate_in_interval(t, f, i, 0.3) == doctest::Approx(tm * tm * tm - tm).epsilon(1e-13));
  }
  CHECK(numerics::midpoint_value(std::vector<double>{0, 1}, std::vector<double>{2, 4}, 0) == doctest::Approx(3));
}
