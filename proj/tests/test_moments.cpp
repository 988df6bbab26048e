#include <catch_amalgamated.hpp>

#include <cmath>

#include "lrsep/moments.hpp"
#include "lrsep/spectral.hpp"

using namespace lrsep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// (2t)! / (2^t t!) evaluated independently of the double-factorial loop.
double factorial_formula(unsigned t) {
  return std::exp(std::lgamma(2.0 * t + 1) - t * std::log(2.0) - std::lgamma(t + 1.0));
}

template <class Real>
bool is_hankel(const BasicSymMatrix<Real>& m) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      for (std::size_t k = 0; k < m.dim(); ++k)
        if (i + j >= k && i + j - k < m.dim() && !(m(i, j) == m(k, i + j - k))) return false;
  return true;
}

}  // namespace

TEST_CASE("gaussian even moments") {
  REQUIRE(gaussian_even_moment(0, 1.0) == 1.0);
  REQUIRE(gaussian_even_moment(2, 1.0) == 3.0);
  REQUIRE(gaussian_even_moment(2, 2.0) == 48.0);
  for (unsigned t = 0; t <= 40; ++t)
    REQUIRE_THAT(gaussian_even_moment(t, 1.3), WithinRel(factorial_formula(t) * std::pow(1.3, 2.0 * t), 1e-11));
}

TEST_CASE("log mode survives where value mode overflows") {
  REQUIRE_THROWS_AS(gaussian_even_moment(200, 1.0), NumericError);
  const double lv = gaussian_even_moment(200, 1.0, MomentMode::log);
  REQUIRE_THAT(lv, WithinRel(std::lgamma(401.0) - 200 * std::log(2.0) - std::lgamma(201.0), 1e-13));
  REQUIRE_THAT(gaussian_even_moment(10, 2.0, MomentMode::log),
               WithinRel(std::log(gaussian_even_moment(10, 2.0)), 1e-14));
}

TEST_CASE("exact and lgamma paths agree at the switch-over") {
  for (unsigned k : {30u, 31u, 32u}) {
    const double exact = log_odd_double_factorial(k);
    const double viag = std::lgamma(2.0 * k + 1) - k * std::log(2.0) - std::lgamma(k + 1.0);
    REQUIRE_THAT(exact, WithinRel(viag, 1e-13));
    REQUIRE_THAT(log_catalan(k),
                 WithinRel(std::lgamma(2.0 * k + 1) - 2 * std::lgamma(k + 1.0) - std::log(k + 1.0), 1e-13));
  }
  REQUIRE(catalan(0) == 1);
  REQUIRE(catalan(5) == 42);
  REQUIRE(odd_double_factorial(5) == 945);
}

TEST_CASE("gaussian Hankel matrices") {
  REQUIRE(hankel_1d({MomentFamily::gaussian, 1.0, 2}) ==
          SymMatrix::from_rows({{1, 0, 1}, {0, 1, 0}, {1, 0, 3}}));
  for (double rho : {0.3, 1.0, 2.5})
    REQUIRE(hankel_1d({MomentFamily::gaussian, rho, 1}) == SymMatrix::diagonal({1, rho * rho}));
  REQUIRE_THROWS_AS(hankel_1d({MomentFamily::gaussian, 1.0, 200}), NumericError);
  REQUIRE_THROWS_AS(hankel_1d({MomentFamily::gaussian, -1.0, 2}), ValidationError);
  REQUIRE_THROWS_AS(hankel_1d({MomentFamily::semicircle, 1.0, 2}), ValidationError);
}

TEST_CASE("Rademacher Hankel matrix and its spectrum") {
  const auto m = hankel_1d({MomentFamily::rademacher, 1.0, 2});
  REQUIRE(m == SymMatrix::from_rows({{1, 0, 1}, {0, 1, 0}, {1, 0, 1}}));
  const auto s = eigen_sym(m);
  REQUIRE_THAT(s.eigenvalues[0], WithinAbs(2.0, 1e-14));
  REQUIRE_THAT(s.eigenvalues[1], WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(s.eigenvalues[2], WithinAbs(0.0, 1e-14));
}

TEST_CASE("Rademacher closed-form spectrum for T = 1..12") {
  for (unsigned T = 1; T <= 12; ++T) {
    const auto s = eigen_sym(hankel_1d({MomentFamily::rademacher, 1.0, T}));
    std::vector<double> expect(T - 1, 0.0);
    if (T % 2 == 0) {
      expect.insert(expect.begin(), {T / 2 + 1.0, T / 2.0});
    } else {
      expect.insert(expect.begin(), {T / 2 + 1.0, T / 2 + 1.0});
    }
    for (std::size_t i = 0; i <= T; ++i) REQUIRE_THAT(s.eigenvalues[i], WithinAbs(expect[i], 1e-12));
  }
}

TEST_CASE("semicircle Hankel matrices") {
  REQUIRE(semicircle_hankel({MomentFamily::semicircle, 1.0, 2}) ==
          SymMatrix::from_rows({{1, 0, 1}, {0, 1, 0}, {1, 0, 2}}));
  REQUIRE(semicircle_hankel({MomentFamily::semicircle, 1.0, 0}) == SymMatrix::identity(1));
  REQUIRE(semicircle_hankel({MomentFamily::semicircle, 2.0, 2}) ==
          SymMatrix::from_rows({{1, 0, 4}, {0, 4, 0}, {4, 0, 32}}));
  // Catalan recurrence C_{k+1} = sum C_i C_{k-i} cross-checks the large-k path.
  const auto m = semicircle_hankel({MomentFamily::semicircle, 1.0, 64});
  for (unsigned k = 0; k + 1 <= 64; ++k) {
    double rec = 0.0;
    for (unsigned i = 0; i <= k; ++i) rec += m(0, 2 * i) * m(0, 2 * (k - i));
    if (2 * (k + 1) <= 64) REQUIRE_THAT(m(0, 2 * (k + 1)), WithinRel(rec, 1e-12));
  }
}

TEST_CASE("iid limit matrices") {
  REQUIRE(iid_limit_matrix(2, 2.0) == SymMatrix::diagonal({1, 4, 16}));
  REQUIRE(iid_limit_matrix(0, 3.0) == SymMatrix::identity(1));
  REQUIRE(iid_limit_matrix(3, 1.0) == SymMatrix::identity(4));
}

TEST_CASE("every closed-form moment matrix is Hankel and PSD") {
  for (auto fam : {MomentFamily::gaussian, MomentFamily::rademacher, MomentFamily::semicircle}) {
    for (double rho : {0.5, 1.0, 1.7}) {
      for (unsigned T = 0; T <= 12; ++T) {
        const auto m = closed_form_matrix({fam, rho, T});
        REQUIRE(is_hankel(m));
        const auto s = eigen_sym(m);
        REQUIRE(s.lambda_min() >= -1e-10 * s.lambda_max());
        const auto sb = sandwich_bounds(m);
        REQUIRE(sb.lower <= s.lambda_max() * (1 + 1e-12));
        REQUIRE(s.lambda_max() <= sb.upper * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("gaussian Hankel lambda_min stays positive in big-float mode") {
  PrecisionScope scope(80);
  for (unsigned T = 1; T <= 30; ++T) {
    const auto s = eigen_sym(hankel_1d<BigFloat>({MomentFamily::gaussian, 1.0, T}));
    REQUIRE(s.lambda_min() > 0);
  }
}

TEST_CASE("Cauchy interlacing and monotone extremes for T <= 10") {
  PrecisionScope scope(60);
  for (double rho : {0.5, 1.0, 1.5}) {
    auto prev = eigen_sym(hankel_1d<BigFloat>({MomentFamily::gaussian, rho, 0}));
    for (unsigned T = 1; T <= 10; ++T) {
      const auto cur = eigen_sym(hankel_1d<BigFloat>({MomentFamily::gaussian, rho, T}));
      // mu_{i+1} <= lambda_i <= mu_i with lambda from B_{T-1}, mu from B_T.
      for (std::size_t i = 0; i < prev.dim(); ++i) {
        REQUIRE(cur.eigenvalues[i + 1] <= prev.eigenvalues[i] * (1 + BigFloat(1e-40)));
        REQUIRE(prev.eigenvalues[i] <= cur.eigenvalues[i] * (1 + BigFloat(1e-40)));
      }
      REQUIRE(cur.lambda_max() >= prev.lambda_max() * (1 - BigFloat(1e-40)));
      REQUIRE(cur.lambda_min() <= prev.lambda_min() * (1 + BigFloat(1e-40)));
      prev = cur;
    }
  }
}

TEST_CASE("lambda_max asymptotic") {
  REQUIRE_THAT(lambda_max_asymptotic_1d(10, 1.0),
               WithinRel(std::log(std::sqrt(2.0) * std::pow(20.0 / std::exp(1.0), 10)), 1e-14));
  // sqrt(2) (20/e)^10 ~ 6.57e8, close to m_20 = 19!! ~ 6.548e8.
  REQUIRE_THAT(lambda_max_asymptotic_1d_value(10, 1.0), WithinRel(6.57e8, 1e-3));
  REQUIRE_THAT(lambda_max_asymptotic_1d_value(10, 1.0) / gaussian_even_moment(10, 1.0), WithinRel(1.0, 0.01));
  REQUIRE_THAT(lambda_max_asymptotic_1d(1, 1.0), WithinRel(std::log(2 * std::sqrt(2.0) / std::exp(1.0)), 1e-14));
  REQUIRE_THAT(lambda_max_asymptotic_1d(10, 2.0),
               WithinRel(lambda_max_asymptotic_1d(10, 1.0) + 10 * std::log(4.0), 1e-14));
  REQUIRE_THROWS_AS(lambda_max_asymptotic_1d_value(400, 1.0), NumericError);
}

TEST_CASE("lambda_min asymptotic") {
  const double pi = std::acos(-1.0);
  REQUIRE_THAT(lambda_min_asymptotic_1d(100, 1.0),
               WithinRel(std::log(std::pow(2.0, 2.5) * pi * std::pow(100.0, 0.25)) + 0.5 - 20.0, 1e-14));
  const double d = lambda_min_asymptotic_1d(400, 1.0) - lambda_min_asymptotic_1d(100, 1.0);
  REQUIRE_THAT(d, WithinAbs(-2.0 * (20.0 - 10.0), 0.5));
  const double rho = 1e6;
  REQUIRE_THAT(lambda_min_asymptotic_1d(9, rho),
               WithinAbs(std::log(std::pow(2.0, 2.5) * pi * std::pow(9.0, 0.25)) - 1.5 * std::log(rho), 1e-5));
  REQUIRE_THROWS_AS(lambda_min_asymptotic_1d_value(1000000000u, 1.0), NumericError);
  REQUIRE_THROWS_AS(lambda_min_asymptotic_1d(0, 1.0), ValidationError);
}

TEST_CASE("required digit estimate grows with T") {
  REQUIRE(required_digits_1d(5, 1.0) <= 15);
  REQUIRE(required_digits_1d(30, 1.0) > 15);
  REQUIRE(required_digits_1d(60, 1.0) <= 120);
  for (unsigned T = 2; T < 60; ++T) REQUIRE(required_digits_1d(T + 1, 1.0) >= required_digits_1d(T, 1.0));
}
