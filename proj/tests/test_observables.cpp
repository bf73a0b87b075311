#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace isogeo;

namespace {

CMatrix<double> pauli(char which) {
  CMatrix<double> m = CMatrix<double>::Zero(2, 2);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Complex<double>(0, -1), Complex<double>(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

const Spectrum<double> kTwo = Spectrum<double>::validate({0.7, 0.3}, 2);

Purification<double> diag_psi() {
  CMatrix<double> m = CMatrix<double>::Zero(2, 2);
  m(0, 0) = std::sqrt(0.7);
  m(1, 1) = std::sqrt(0.3);
  return Purification<double>(m, kTwo);
}

}  // namespace

TEST_CASE("Observable validation") {
  CMatrix<double> bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(Observable<double>{bad}, GeometryError);
  CHECK_THROWS_AS(Observable<double>(pauli('x'), 0.0), GeometryError);
  CHECK_THROWS_AS(Observable<double>(CMatrix<double>::Zero(2, 3)), GeometryError);
}

TEST_CASE("observable_field examples") {
  const auto psi = diag_psi();
  const double hbar = 0.5;
  const auto id = observable_field(Observable<double>(CMatrix<double>::Identity(2, 2), hbar), psi);
  CHECK((id.matrix() - psi.matrix() / Complex<double>(0, hbar)).norm() < 1e-14);
  CHECK((connection_form(id) .matrix() - CMatrix<double>::Identity(2, 2) / Complex<double>(0, hbar)).norm() < 1e-14);

  const auto z = observable_field(Observable<double>(pauli('z'), hbar), psi);
  const CMatrix<double> expected = real_diagonal<double>({0.7, -0.3}) / Complex<double>(0, hbar);
  CHECK((psi.matrix().adjoint() * z.matrix() - expected).norm() < 1e-14);
  CHECK(horizontal_part(psi, z.matrix()).norm() < 1e-14);

  const auto x = observable_field(Observable<double>(pauli('x'), hbar), psi);
  CHECK(block_diagonal_part(CMatrix<double>(psi.matrix().adjoint() * x.matrix()), kTwo).norm() < 1e-14);
  CHECK(vertical_part(psi, x.matrix()).norm() < 1e-14);

  CHECK_THROWS_AS(observable_field(Observable<double>(CMatrix<double>::Identity(3, 3)), psi), GeometryError);
}

TEST_CASE("uncertainty examples") {
  const auto rho = project(diag_psi());
  CHECK(uncertainty(Observable<double>(CMatrix<double>::Identity(2, 2)), rho) == 0.0);
  CHECK(uncertainty(Observable<double>(pauli('x')), rho) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(uncertainty(Observable<double>(pauli('z')), rho) == doctest::Approx(std::sqrt(0.84)).epsilon(1e-14));
  Rng rng(4);
  const auto sigma = Spectrum<double>::validate({0.5, 0.3, 0.2}, 5);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = random_density(sigma, s);
    const CMatrix<double> a = random_hermitian<double>(5, rng);
    CHECK(std::abs(uncertainty(Observable<double>(a), r) - std::sqrt(oracle::variance(a, r.matrix()))) < 1e-12);
  }
}

TEST_CASE("uncertainty rejects a variance that is negative beyond rounding") {
  // rho deliberately inconsistent (not PSD) to force a negative radicand
  CMatrix<double> m(2, 2);
  m << 1.5, 0, 0, -0.5;
  const DensityOperator<double> fake(m, Spectrum<double>::validate({1.0}, 2));
  CHECK_THROWS_AS(uncertainty(Observable<double>(pauli('z')), fake), GeometryError);
}

TEST_CASE("variance_decomposition examples") {
  const auto psi = diag_psi();
  const auto z = variance_decomposition(Observable<double>(pauli('z')), psi);
  CHECK(std::abs(z.g_term) < 1e-14);
  CHECK(z.identity_residual() < 1e-14);
  CHECK(z.variance == doctest::Approx(0.84));

  const auto x = variance_decomposition(Observable<double>(pauli('x')), psi);
  CHECK(std::abs(x.square_of_mean_term) < 1e-14);
  CHECK(std::abs(x.second_moment_term) < 1e-14);
  CHECK(x.g_term == doctest::Approx(1.0));

  const auto pure = Spectrum<double>::validate({1.0}, 3);
  Rng rng(7);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = random_purification(pure, s);
    const auto d = variance_decomposition(Observable<double>(random_hermitian<double>(3, rng), 1.7), p);
    CHECK(std::abs(d.square_of_mean_term - d.second_moment_term) < 1e-12);
    CHECK(std::abs(d.variance - d.g_term) < 1e-12);
  }
}

TEST_CASE("variance_decomposition identities on random instances") {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const Index n = 1 + i % 6;
    const Index k = 1 + (i / 6) % std::min<Index>(n, 4);
    const auto sigma = fixture::random_spectrum(n, k, rng, i % 2 == 0);
    const auto psi = random_purification(sigma, std::uint64_t(i));
    const auto d = variance_decomposition(Observable<double>(random_hermitian<double>(n, rng), 0.3 + 0.1 * (i % 7)), psi);
    const double scale = std::max(1.0, d.trace_a2_rho);
    CHECK(d.identity_residual() <= 1e-9 * scale);
    CHECK(d.second_moment_residual() <= 1e-9 * scale);
    CHECK(d.mean_residual() <= 1e-9 * scale);
    CHECK(std::abs(d.i_hbar_trace_conn_p.imag()) < 1e-12);
    CHECK(d.square_of_mean_term <= 1e-12);
    CHECK(d.second_moment_term <= 1e-12);
  }
}

TEST_CASE("convexity terms from the blockwise diagonalization") {
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    const auto sigma = fixture::random_spectrum(5, 4, rng, i % 2 == 1);
    const auto psi = random_purification(sigma, std::uint64_t(100 + i));
    const Observable<double> a(random_hermitian<double>(5, rng));
    const auto c = convexity_terms(a, psi);
    CHECK(c.weighted_mean_squared <= c.weighted_second_moment + 1e-12);
    // the diagonalizer is a gauge unitary
    CHECK((c.diagonalizer * sigma.P() - sigma.P() * c.diagonalizer).norm() < 1e-12);
    CHECK((c.diagonalizer.adjoint() * c.diagonalizer - CMatrix<double>::Identity(4, 4)).norm() < 1e-12);
    // and reproduces the Eq.-(8) terms
    const auto d = variance_decomposition(a, psi);
    CHECK(std::abs(-c.weighted_mean_squared - d.square_of_mean_term) < 1e-12);
    CHECK(std::abs(-c.weighted_second_moment - d.second_moment_term) < 1e-12);
  }
}

TEST_CASE("dispersion_bound_check examples") {
  const auto rho = project(diag_psi());
  const auto x = dispersion_bound_check(Observable<double>(pauli('x')), rho);
  CHECK(x.lhs == doctest::Approx(1.0));
  CHECK(x.rhs == doctest::Approx(1.0));
  CHECK(x.is_equality);

  const auto z = dispersion_bound_check(Observable<double>(pauli('z')), rho);
  CHECK(z.lhs == doctest::Approx(std::sqrt(0.84)));
  CHECK(z.rhs < 1e-12);
  CHECK_FALSE(z.is_equality);

  const auto id = dispersion_bound_check(Observable<double>(CMatrix<double>::Identity(2, 2)), rho);
  CHECK(id.lhs == 0.0);
  CHECK(id.rhs < 1e-14);
  CHECK(id.is_equality);
}

TEST_CASE("dispersion bound on 1000 random pairs") {
  Rng rng(1000);
  std::size_t pure_equal = 0, pure = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index n = 1 + i % 6;
    const Index k = 1 + (i / 6) % n;
    const auto sigma = fixture::random_spectrum(n, k, rng, i % 3 == 0);
    const auto rho = random_density(sigma, std::uint64_t(i));
    const auto b = dispersion_bound_check(Observable<double>(random_hermitian<double>(n, rng), 0.8), rho);
    CHECK(b.lhs >= b.rhs - 1e-9);
    if (k == 1) {
      ++pure;
      if (b.is_equality && std::abs(b.lhs - b.rhs) < 1e-9) ++pure_equal;
    }
  }
  CHECK(pure > 0);
  CHECK(pure_equal == pure);
}

TEST_CASE("gauge invariance of the uncertainty and of the bound") {
  Rng rng(17);
  const auto sigma = Spectrum<double>::validate({0.5, 0.3, 0.2}, 4);
  const auto rho = random_density(sigma, 2);
  const CMatrix<double> a = random_hermitian<double>(4, rng);
  const CMatrix<double> u = random_unitary<double>(4, rng);
  const auto b0 = dispersion_bound_check(Observable<double>(a), rho);
  const DensityOperator<double> moved(hermitian_part(CMatrix<double>(u * rho.matrix() * u.adjoint())), sigma);
  const auto b1 = dispersion_bound_check(Observable<double>(hermitian_part(CMatrix<double>(u * a * u.adjoint()))), moved);
  CHECK(std::abs(b0.lhs - b1.lhs) < 1e-12);
  CHECK(std::abs(b0.rhs - b1.rhs) < 1e-12);
}
