#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "lrsep/errors.hpp"
#include "lrsep/linalg.hpp"
#include "lrsep/precision.hpp"

namespace lrsep {

using BigInt = boost::multiprecision::cpp_int;

// Exact integer arithmetic is used up to this index in double mode; larger
// indices go through lgamma. Big-float mode is exact at every index.
inline constexpr unsigned kExactMomentLimit = 32;

// (2t-1)!!, with (-1)!! = 1.
inline BigInt odd_double_factorial(unsigned t) {
  BigInt r = 1;
  for (unsigned k = 1; k <= t; ++k) r *= 2 * k - 1;
  return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline BigInt catalan(unsigned k) { return binomial(2 * k, k) / (k + 1); }

inline double log_odd_double_factorial(unsigned t) {
  if (t <= kExactMomentLimit) return std::log(static_cast<double>(odd_double_factorial(t)));
  return std::lgamma(2.0 * t + 1.0) - t * std::log(2.0) - std::lgamma(t + 1.0);
}

inline double log_catalan(unsigned k) {
  if (k <= kExactMomentLimit) return std::log(static_cast<double>(catalan(k)));
  return std::lgamma(2.0 * k + 1.0) - 2.0 * std::lgamma(k + 1.0) - std::log(k + 1.0);
}

enum class MomentMode { value, log };

// m_{2t} = rho^{2t} (2t-1)!! for w ~ N(0, rho^2).
inline double gaussian_even_moment(unsigned t, double rho, MomentMode mode = MomentMode::value) {
  require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
  const double log_value = 2.0 * t * std::log(rho) + log_odd_double_factorial(t);
  if (mode == MomentMode::log) return log_value;
  double v;
  if (t <= kExactMomentLimit) {
    v = static_cast<double>(odd_double_factorial(t)) * std::pow(rho, 2.0 * t);
  } else {
    v = std::exp(log_value);
  }
  if (!std::isfinite(v))
    throw NumericError("gaussian moment m_" + std::to_string(2 * t) +
                       " overflows double precision; use log mode or big-float");
  return v;
}

namespace detail {

template <class Real>
Real real_pow(const Real& x, unsigned k) {
  Real r(1);
  for (unsigned i = 0; i < k; ++i) r *= x;
  return r;
}

template <class Real>
Real integer_as(const BigInt& v) {
  if constexpr (std::is_same_v<Real, double>) {
    return static_cast<double>(v);
  } else {
    return Real(v.str());
  }
}

template <class Real>
Real checked(const Real& v, const std::string& what) {
  if (!is_finite(v))
    throw NumericError(what + " overflows the working precision; use big-float mode");
  return v;
}

}  // namespace detail

// m_{2t} in the requested arithmetic.
template <class Real>
Real gaussian_even_moment_as(unsigned t, double rho) {
  if constexpr (std::is_same_v<Real, double>) {
    return gaussian_even_moment(t, rho);
  } else {
    require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
    return detail::integer_as<Real>(odd_double_factorial(t)) *
           detail::real_pow(Real(rho), 2 * t);
  }
}

template <class Real>
Real catalan_as(unsigned k) {
  if constexpr (std::is_same_v<Real, double>) {
    if (k <= kExactMomentLimit) return static_cast<double>(catalan(k));
    return std::exp(log_catalan(k));
  } else {
    return detail::integer_as<Real>(catalan(k));
  }
}

enum class MomentFamily { gaussian, rademacher, semicircle, iid_limit };

inline std::string to_string(MomentFamily f) {
  switch (f) {
    case MomentFamily::gaussian: return "gaussian";
    case MomentFamily::rademacher: return "rademacher";
    case MomentFamily::semicircle: return "semicircle";
    case MomentFamily::iid_limit: return "iid-limit";
  }
  return "?";
}

struct MomentSpec {
  MomentFamily family = MomentFamily::gaussian;
  double rho = 1.0;
  unsigned T = 0;

  void validate() const {
    require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
  }
};

// (E w^{i+j})_{0<=i,j<=T}. The Rademacher law is taken on {-rho, +rho}, so
// rho = 1 gives m_{2t} = 1.
template <class Real = double>
BasicSymMatrix<Real> hankel_1d(const MomentSpec& spec) {
  spec.validate();
  require(spec.family == MomentFamily::gaussian || spec.family == MomentFamily::rademacher,
          "hankel_1d expects the gaussian or rademacher family");
  BasicSymMatrix<Real> m(spec.T + 1);
  for (unsigned i = 0; i <= spec.T; ++i) {
    for (unsigned j = i; j <= spec.T; ++j) {
      const unsigned k = i + j;
      if (k % 2) continue;
      Real v = spec.family == MomentFamily::gaussian
                   ? gaussian_even_moment_as<Real>(k / 2, spec.rho)
                   : detail::real_pow(Real(spec.rho), k);
      m.set(i, j, detail::checked(v, "moment of order " + std::to_string(k)));
    }
  }
  return m;
}

// Hankel matrix of the semicircle law on [-2 rho, 2 rho]: rho^{2k} Cat(k).
template <class Real = double>
BasicSymMatrix<Real> semicircle_hankel(const MomentSpec& spec) {
  spec.validate();
  require(spec.family == MomentFamily::semicircle, "semicircle_hankel expects the semicircle family");
  BasicSymMatrix<Real> m(spec.T + 1);
  for (unsigned i = 0; i <= spec.T; ++i) {
    for (unsigned j = i; j <= spec.T; ++j) {
      const unsigned k = i + j;
      if (k % 2) continue;
      Real v = detail::real_pow(Real(spec.rho), k) * catalan_as<Real>(k / 2);
      m.set(i, j, detail::checked(v, "semicircle moment of order " + std::to_string(k)));
    }
  }
  return m;
}

template <class Real = double>
BasicSymMatrix<Real> iid_limit_matrix(unsigned T, double rho) {
  require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
  BasicSymMatrix<Real> m(T + 1);
  for (unsigned i = 0; i <= T; ++i)
    m.set(i, i, detail::checked(detail::real_pow(Real(rho), 2 * i), "rho^(2T)"));
  return m;
}

template <class Real = double>
BasicSymMatrix<Real> closed_form_matrix(const MomentSpec& spec) {
  switch (spec.family) {
    case MomentFamily::gaussian:
    case MomentFamily::rademacher: return hankel_1d<Real>(spec);
    case MomentFamily::semicircle: return semicircle_hankel<Real>(spec);
    case MomentFamily::iid_limit: return iid_limit_matrix<Real>(spec.T, spec.rho);
  }
  throw ValidationError("unknown moment family");
}

// ln of sqrt(2) (2 rho^2 T / e)^T.
inline double lambda_max_asymptotic_1d(unsigned T, double rho) {
  require(T >= 1, "T must be at least 1");
  require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
  return 0.5 * std::log(2.0) + T * (std::log(2.0 * rho * rho * T) - 1.0);
}

// ln of 2^{5/2} pi T^{1/4} rho^{-3/2} exp(1/(2 rho^2) - 2 sqrt(T) / rho).
inline double lambda_min_asymptotic_1d(unsigned T, double rho) {
  require(T >= 1, "T must be at least 1");
  require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
  const double pi = 3.14159265358979323846;
  return 2.5 * std::log(2.0) + std::log(pi) + 0.25 * std::log(double(T)) - 1.5 * std::log(rho) +
         1.0 / (2.0 * rho * rho) - 2.0 * std::sqrt(double(T)) / rho;
}

inline double exp_checked(double log_value, const char* what) {
  const double v = std::exp(log_value);
  if (!std::isfinite(v) || v == 0.0)
    throw NumericError(std::string(what) + " leaves double range; use the log-domain value");
  return v;
}

inline double lambda_max_asymptotic_1d_value(unsigned T, double rho) {
  return exp_checked(lambda_max_asymptotic_1d(T, rho), "lambda_max asymptotic");
}

inline double lambda_min_asymptotic_1d_value(unsigned T, double rho) {
  return exp_checked(lambda_min_asymptotic_1d(T, rho), "lambda_min asymptotic");
}

// Decimal digits needed to resolve lambda_min of the Gaussian Hankel matrix
// with a few significant digits left over.
inline unsigned required_digits_1d(unsigned T, double rho) {
  if (T == 0) return 6;
  const double spread = lambda_max_asymptotic_1d(T, rho) - lambda_min_asymptotic_1d(T, rho);
  const double digits = std::ceil(std::max(0.0, spread) / std::log(10.0)) + 6;
  return static_cast<unsigned>(digits);
}

}  // namespace lrsep
