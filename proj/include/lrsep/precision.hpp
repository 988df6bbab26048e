#pragma once

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <string_view>

#include "lrsep/errors.hpp"

namespace lrsep {

using BigFloat = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

// Arithmetic selected at run time: IEEE double or MPFR with a decimal digit
// count. Parsed from "double" or "big:<digits>".
struct Precision {
  enum class Kind { machine, big };
  Kind kind = Kind::machine;
  unsigned digits = 15;

  static Precision machine() { return {}; }
  static Precision big(unsigned d) {
    require(d >= 20 && d <= 10000, "big-float digits must lie in [20, 10000]");
    return {Kind::big, d};
  }
  static Precision parse(std::string_view text) {
    if (text == "double") return machine();
    constexpr std::string_view prefix = "big:";
    if (text.substr(0, prefix.size()) == prefix) {
      auto body = text.substr(prefix.size());
      unsigned d = 0;
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), d);
      if (ec == std::errc() && ptr == body.data() + body.size()) return big(d);
    }
    throw ValidationError("precision must be 'double' or 'big:<digits>', got '" +
                          std::string(text) + "'");
  }
  bool is_big() const { return kind == Kind::big; }
  std::string to_string() const {
    return is_big() ? "big:" + std::to_string(digits) : "double";
  }
  bool operator==(const Precision&) const = default;
};

namespace detail {
inline std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace detail

// MPFR's default precision is process-wide. Every big-float computation runs
// inside a scope that holds a lock and restores the previous setting on exit,
// so concurrent callers are serialised rather than corrupting each other.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits)
      : lock_(detail::precision_mutex()), saved_(BigFloat::default_precision()) {
    BigFloat::default_precision(digits);
  }
  ~PrecisionScope() { BigFloat::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_;
};

template <class Real>
inline bool is_finite(const Real& x) {
  return (boost::math::isfinite)(x);
}

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

// Default convergence tolerance: 1e-14 in doubles, 10^-(digits-10) otherwise.
template <class Real>
inline Real default_tolerance() {
  if constexpr (std::is_same_v<Real, double>) {
    return 1e-14;
  } else {
    const int digits = static_cast<int>(BigFloat::default_precision());
    return boost::multiprecision::pow(Real(10), -(digits - 10));
  }
}

}  // namespace lrsep
