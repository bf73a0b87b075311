#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace isogeo;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.kind();
  }
  FAIL("expected a GeometryError");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("Uhlmann horizontality") {
  Rng rng(2);
  const auto sigma = Spectrum<double>::validate({0.7, 0.3}, 2);
  const auto psi = random_purification(sigma, 3).matrix();
  const CMatrix<double> s = random_hermitian<double>(2, rng);
  CHECK(uhlmann_horizontal_check(psi, CMatrix<double>(s * psi)));
  CMatrix<double> xi(2, 2);
  xi << Complex<double>(0, 1), 0.5, -0.5, 0;
  CHECK_FALSE(uhlmann_horizontal_check(psi, CMatrix<double>(psi * xi)));
  CHECK(uhlmann_horizontal_check(psi, CMatrix<double>(CMatrix<double>::Zero(2, 2))));

  const CMatrix<double> singular = real_diagonal<double>({1.0, 0.0});
  CHECK(kind_of([&] { uhlmann_horizontal_check(singular, singular); }) == ErrorKind::NotInvertible);
  CHECK(kind_of([&] { uhlmann_horizontal_check(CMatrix<double>(2.0 * psi), psi); }) == ErrorKind::NotInvertible);
}

TEST_CASE("intersection with the tangent space is trivial") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(intersection_triviality_check(random_purification(Spectrum<double>::validate({0.7, 0.3}, 2), seed), 3, seed));
    CHECK(intersection_triviality_check(random_purification(Spectrum<double>::validate({0.5, 0.3, 0.2}, 3), seed), 3, seed));
  }
  // Uhlmann's condition alone leaves an n^2-dimensional (Hermitian) solution space
  const auto psi = random_purification(Spectrum<double>::validate({0.5, 0.3, 0.2}, 3), 1);
  CHECK(uhlmann_solution_dimension(psi.matrix(), false) == 9);
  CHECK(uhlmann_solution_dimension(psi.matrix(), true) == 0);
  const auto partial = random_purification(Spectrum<double>::validate({0.6, 0.4}, 3), 1);
  CHECK(kind_of([&] { intersection_triviality_check(partial, 1, 0); }) == ErrorKind::NotFullRank);
}

TEST_CASE("Dittmann two-level formula") {
  const auto rho = density_from_matrix<double>(real_diagonal<double>({0.7, 0.3}));
  CHECK(dittmann_bures_2x2(rho, CMatrix<double>(CMatrix<double>::Zero(2, 2))) == 0.0);
  CMatrix<double> d(2, 2);
  d << 0, 0.1, 0.1, 0;
  CHECK(dittmann_bures_2x2(rho, d) == doctest::Approx(0.1).epsilon(1e-14));

  const auto mixed = density_from_matrix<double>(real_diagonal<double>({0.5, 0.5}));
  CMatrix<double> s(2, 2);
  s << 0.05, Complex<double>(0.02, -0.03), Complex<double>(0.02, 0.03), -0.05;
  CHECK(std::abs(dittmann_bures_2x2(mixed, s) - oracle::dittmann_expanded(mixed.matrix(), s)) < 1e-15);

  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = random_density(Spectrum<double>::validate({0.8, 0.2}, 2), seed);
    CMatrix<double> h = 0.05 * random_hermitian<double>(2, rng);
    h -= (h.trace() / 2.0) * CMatrix<double>::Identity(2, 2);
    CHECK(std::abs(dittmann_bures_2x2(r, h) - oracle::dittmann_expanded(r.matrix(), h)) < 1e-14);
  }
  const auto pure = density_from_matrix<double>(real_diagonal<double>({1.0, 0.0}));
  CHECK(kind_of([&] { dittmann_bures_2x2(pure, d); }) == ErrorKind::SingularState);
  CHECK(kind_of([&] { dittmann_bures_2x2(CMatrix<double>(CMatrix<double>::Identity(3, 3)), d); }) ==
        ErrorKind::ShapeMismatch);
}

TEST_CASE("example curve") {
  const auto r0 = example_curve(0.7, 0.3, 0.5, 0.0);
  CHECK((r0.matrix() - real_diagonal<double>({0.7, 0.3})).norm() < 1e-15);
  const auto r1 = example_curve(0.7, 0.3, 0.5, 1.0);
  const double c = std::cos(0.5), s = std::sin(0.5);
  CHECK(r1.matrix()(0, 0).real() == doctest::Approx(0.7 * c * c + 0.3 * s * s));
  CHECK(r1.matrix()(1, 1).real() == doctest::Approx(0.7 * s * s + 0.3 * c * c));
  CHECK(r1.matrix()(0, 1).real() == doctest::Approx(-0.4 * s * c));
  CHECK(r1.matrix()(0, 1) == r1.matrix()(1, 0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 100; ++i) {
    const auto r = example_curve(0.7, 0.3, 0.5, u(rng));
    const auto eig = hermitian_eigen_descending(r.matrix());
    CHECK(std::abs(eig.values(0) - 0.7) < 1e-12);
    CHECK(std::abs(eig.values(1) - 0.3) < 1e-12);
  }
  CHECK(kind_of([] { example_curve(0.3, 0.7, 0.5, 0.0); }) == ErrorKind::InvalidSpectrum);
  CHECK(kind_of([] { example_curve(0.6, 0.3, 0.5, 0.0); }) == ErrorKind::InvalidSpectrum);
}

TEST_CASE("gap report for the rotation family") {
  const auto r = example_gap_report(0.7, 0.3, 0.5);
  CHECK(r.dist_g == 0.5);
  CHECK(r.dist_B == doctest::Approx(0.195923167805277).epsilon(1e-13));
  CHECK(r.strict);
  CHECK(r.dittmann_cross_check < 1e-9);
  CHECK(r.gap == doctest::Approx(0.5 - 0.195923167805277).epsilon(1e-13));

  CHECK(example_gap_report(0.9, 0.1, 0.2).dist_B == doctest::Approx(0.16441702937662006).epsilon(1e-13));

  const auto flat = example_gap_report(0.5, 0.5, 0.5);
  CHECK(flat.dist_B == 0.0);
  CHECK(flat.dist_g == 0.0);
  CHECK_FALSE(flat.strict);

  const auto small = example_gap_report(0.7, 0.3, 1e-4);
  CHECK(small.dist_B / small.dist_g == doctest::Approx(0.4).epsilon(1e-7));

  CHECK(kind_of([] { example_gap_report(0.7, 0.3, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { example_gap_report(0.3, 0.7, 0.5); }) == ErrorKind::InvalidSpectrum);
}

TEST_CASE("the gap is strict across the tested grid") {
  for (double p1 : {0.55, 0.6, 0.7, 0.8, 0.9}) {
    for (double eps : {0.01, 0.1, 0.3, 0.5, 0.7, 0.785, 0.9, 1.0}) {
      // past pi/4 the two-point value overshoots eps for strongly unbalanced spectra
      if (p1 > 0.85 && eps > example_eps_limit<double>()) continue;
      const double b = example_bures_closed_form(p1, 1 - p1, eps);
      CHECK(eps - b > 0);
      // the finite-difference value agrees with the formula evaluated on rho1 - rho0
      const auto r0 = example_curve(p1, 1 - p1, eps, 0.0);
      const auto r1 = example_curve(p1, 1 - p1, eps, 1.0);
      CHECK(std::abs(b - dittmann_bures_2x2(r0, CMatrix<double>(r1.matrix() - r0.matrix()))) < 1e-9);
      // the Bures angle sits below the isospectral distance too
      CHECK(oracle::bures_angle(r0.matrix(), r1.matrix()) < eps);
    }
  }
}

TEST_CASE("isospectral distance dominates the Bures value") {
  for (auto [p1, eps] : {std::pair{0.7, 0.5}, std::pair{0.9, 0.2}, std::pair{0.6, 0.7}}) {
    const auto r = example_gap_report(p1, 1 - p1, eps);
    const auto est = distance_upper_bound(example_curve(p1, 1 - p1, eps, 0.0), example_curve(p1, 1 - p1, eps, 1.0), 5, 1);
    CHECK(est.length >= r.dist_B - 1e-9);
    CHECK(std::abs(est.length - eps) < 1e-4);
  }
}
