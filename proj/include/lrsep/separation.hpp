#pragma once

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lrsep/errors.hpp"
#include "lrsep/linalg.hpp"
#include "lrsep/moments.hpp"
#include "lrsep/parallel.hpp"
#include "lrsep/reservoir.hpp"
#include "lrsep/rng.hpp"

namespace lrsep {

// Coefficients (a_0, ..., a_T) of f(w) = sum_t a_{T-t} w^t; a_0 leads.
class PolySeries {
 public:
  PolySeries() = default;
  PolySeries(std::initializer_list<double> c) : PolySeries(std::vector<double>(c)) {}
  explicit PolySeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    require(!c_.empty(), "polynomial needs at least one coefficient");
    for (double x : c_) require(std::isfinite(x), "polynomial coefficients must be finite");
  }
  explicit PolySeries(const TimeSeries& a) : PolySeries(a.values()) {}

  std::size_t degree() const { return c_.size() - 1; }
  double operator[](std::size_t t) const { return c_[t]; }
  const std::vector<double>& coeffs() const { return c_; }

  double operator()(double w) const {
    double f = c_[0];
    for (std::size_t t = 1; t < c_.size(); ++t) f = f * w + c_[t];
    return f;
  }

 private:
  std::vector<double> c_;
};

struct RootBound {
  double beta = 0.0;
  bool monomial = false;  // all of a_1..a_T vanish; the only root is 0
};

// beta(f) = 2 max_t |a_t / a_0|^{1/t}.
inline RootBound zassenhaus_bound(const PolySeries& p) {
  require(p.degree() >= 1, "root bound needs degree at least 1");
  require(p[0] != 0.0, "root bound needs a nonzero leading coefficient a_0");
  RootBound out;
  double m = 0.0;
  bool any = false;
  for (std::size_t t = 1; t <= p.degree(); ++t) {
    if (p[t] != 0.0) any = true;
    m = std::max(m, std::pow(std::abs(p[t] / p[0]), 1.0 / static_cast<double>(t)));
  }
  out.beta = 2.0 * m;
  out.monomial = !any;
  return out;
}

enum class WeightLaw { gaussian, rademacher };

inline std::string to_string(WeightLaw d) { return d == WeightLaw::gaussian ? "gaussian" : "rademacher"; }

using TailFunction = std::function<double(double)>;

// P(|rho w| >= t) for w standard normal.
inline TailFunction gaussian_tail(double rho = 1.0) {
  return [rho](double t) { return t <= 0 ? 1.0 : std::erfc(t / (rho * std::sqrt(2.0))); };
}

// P(|rho w| >= t) for w uniform on {-1, +1}.
inline TailFunction rademacher_tail(double rho = 1.0) {
  return [rho](double t) { return t <= rho ? 1.0 : 0.0; };
}

inline double normal_quantile(double p) {
  require(p > 0 && p < 1, "normal quantile needs p in (0, 1)");
  return std::sqrt(2.0) * boost::math::erf_inv(2.0 * p - 1.0);
}

// True when |a_t| <= K^t |a_0| for 0 < t < T and |a_T +- eps| <= K^T |a_0|.
inline bool geometric_hypothesis(const PolySeries& a, double eps, double K) {
  require(a[0] != 0.0, "separation bound needs a nonzero leading coefficient a_0");
  require(eps > 0 && K > 0, "eps and K must be positive");
  const std::size_t T = a.degree();
  const double a0 = std::abs(a[0]);
  for (std::size_t t = 1; t < T; ++t)
    if (std::abs(a[t]) > std::pow(K, double(t)) * a0) return false;
  const double KT = std::pow(K, double(T)) * a0;
  return std::abs(a[T] + eps) <= KT && std::abs(a[T] - eps) <= KT;
}

// P(|f(a, w)| >= eps) >= tail(2K) whenever the geometric hypothesis holds;
// otherwise no claim is made.
inline std::optional<double> geometric_separation_bound(const PolySeries& a, double eps, double K,
                                                        const TailFunction& tail) {
  require(a.degree() >= 1, "separation bound needs degree at least 1");
  if (!geometric_hypothesis(a, eps, K)) return std::nullopt;
  return tail(2.0 * K);
}

// max(|a_t / a_0|^{1/t} for 0 < t < T, |(a_T +- eps) / a_0|^{1/T}).
inline double geometric_rate(const PolySeries& a, double eps) {
  require(a.degree() >= 1, "degree must be at least 1");
  require(a[0] != 0.0, "nonzero leading coefficient a_0 required");
  const std::size_t T = a.degree();
  double m = 0.0;
  for (std::size_t t = 1; t < T; ++t)
    m = std::max(m, std::pow(std::abs(a[t] / a[0]), 1.0 / double(t)));
  for (double s : {1.0, -1.0})
    m = std::max(m, std::pow(std::abs((a[T] + s * eps) / a[0]), 1.0 / double(T)));
  return m;
}

// Scale rho for which P(|f(a, rho w)| >= eps) >= 1 - delta. Rademacher
// weights give probability one, so delta is ignored there.
inline double hyperparameter_for_confidence(const PolySeries& a, double eps, double delta,
                                            WeightLaw law) {
  require(eps > 0, "eps must be positive");
  const double m = geometric_rate(a, eps);
  if (law == WeightLaw::rademacher) return 2.0 * m;
  require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
  return 2.0 * m / normal_quantile((1.0 + delta) / 2.0);
}

// E f(a, w)^2 = a_rev^T B_T a_rev for w ~ N(0, rho^2).
inline double expected_square_1d(const TimeSeries& a, double rho) {
  const auto B = hankel_1d<double>({MomentFamily::gaussian, rho, static_cast<unsigned>(a.T())});
  const std::size_t T = a.T();
  double s = 0.0;
  for (std::size_t i = 0; i <= T; ++i)
    for (std::size_t j = 0; j <= T; ++j) s += a[T - i] * a[T - j] * B(i, j);
  return s;
}

// E[d^k/dw^k f(a, w)^2] for k = 0..k_max, by squaring the polynomial and
// taking Gaussian moments term by term.
inline std::vector<double> derivative_expectations_1d(const TimeSeries& a, double rho,
                                                      unsigned k_max) {
  const std::size_t T = a.T();
  require(k_max <= 2 * T, "k_max must not exceed 2T");
  std::vector<double> sq(2 * T + 1, 0.0);  // coefficient of w^n in f^2
  for (std::size_t i = 0; i <= T; ++i)
    for (std::size_t j = 0; j <= T; ++j) sq[i + j] += a[T - i] * a[T - j];
  std::vector<double> out(k_max + 1, 0.0);
  for (unsigned k = 0; k <= k_max; ++k) {
    double s = 0.0;
    for (std::size_t n = k; n <= 2 * T; ++n) {
      const std::size_t r = n - k;
      if (r % 2) continue;
      double falling = 1.0;
      for (std::size_t q = 0; q < k; ++q) falling *= static_cast<double>(n - q);
      s += sq[n] * falling * gaussian_even_moment(static_cast<unsigned>(r / 2), rho);
    }
    out[k] = s;
  }
  out[0] = expected_square_1d(a, rho);  // same quantity, same rounding
  return out;
}

// min over 1 <= p <= k <= K with d_k != 0 of (t / |d_k|)^{2/p}, where
// d[k] holds the k-th derivative expectation and d[0] is ignored.
inline double eta_from_derivatives(const std::vector<double>& d, double t) {
  require(t > 0, "eta needs t > 0");
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k] == 0.0) continue;
    any = true;
    const double ratio = t / std::abs(d[k]);
    for (std::size_t p = 1; p <= k; ++p) best = std::min(best, std::pow(ratio, 2.0 / double(p)));
  }
  if (!any) throw ValidationError("all derivative expectations vanish; eta is undefined");
  return best;
}

inline double eta_exponent_1d(const TimeSeries& a, double rho, double t) {
  require(a.T() >= 1, "eta needs T >= 1");
  return eta_from_derivatives(derivative_expectations_1d(a, rho, static_cast<unsigned>(2 * a.T())), t);
}

struct PartitionNorms {
  double hs = 0.0;
  double op = 0.0;
};

inline PartitionNorms partition_norms_2tensor(const SymMatrix& m) {
  const auto s = eigen_sym(m);
  return {frobenius(m), std::max(std::abs(s.lambda_max()), std::abs(s.lambda_min()))};
}

struct SeparationEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  // Draws with |rho w| >= 2K yet |f| < eps; only counted when K is given.
  std::uint64_t hard_violations = 0;
};

// Empirical P(|f(a, rho w)| >= eps). Draws come from one stream per block of
// kSampleBlock indices, so the estimate does not depend on thread count.
inline SeparationEstimate mc_separation_probability(const PolySeries& a, double eps, WeightLaw law,
                                                    double rho, std::uint64_t samples,
                                                    std::uint64_t seed,
                                                    std::optional<double> K = std::nullopt,
                                                    unsigned threads = 0) {
  require(samples >= 2, "need at least 2 samples");
  require(eps > 0 && rho > 0, "eps and rho must be positive");
  const auto acc = reduce_samples(2, 0, samples, threads, [&](std::uint64_t k, std::vector<double>& x) {
    NormalStream normals(stream_key(seed, k));
    const double w = law == WeightLaw::gaussian
                         ? rho * normals.next()
                         : ((normals.engine().next() >> 63) ? rho : -rho);
    const bool sep = std::abs(a(w)) >= eps;
    x[0] = sep ? 1.0 : 0.0;
    x[1] = (K && std::abs(w) >= 2.0 * *K && !sep) ? 1.0 : 0.0;
  });
  SeparationEstimate out;
  out.samples = samples;
  out.probability = acc.mean()[0];
  out.std_error = acc.standard_error()[0];
  out.hard_violations = static_cast<std::uint64_t>(std::llround(acc.mean()[1] * double(samples)));
  return out;
}

struct TailEstimate {
  std::vector<double> thresholds;
  std::vector<double> log_prob;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct Histogram {
  std::vector<double> edges;    // bins + 1
  std::vector<double> density;  // integrates to 1
};

struct TailAndDensity {
  TailEstimate tail;
  Histogram histogram;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
};

inline constexpr std::uint64_t kMinTailCount = 10;

// Samples ||f(a, W)||^2 and summarises its density and the tails
// P(|X - mean| >= t). An empty threshold list selects 50 evenly spaced
// values up to the largest observed deviation.
inline TailAndDensity mc_tail_and_density(const TimeSeries& a, const Ensemble& e,
                                          std::uint64_t samples, std::uint64_t seed,
                                          std::vector<double> thresholds, std::size_t bins,
                                          unsigned threads = 0) {
  require(samples >= 1000, "tail estimation needs at least 1000 samples");
  require(bins >= 1, "histogram needs at least one bin");
  e.validate();
  std::vector<double> xs(samples);
  const std::size_t n_blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  parallel_blocks(n_blocks, threads, [&](std::size_t b) {
    const std::uint64_t hi = std::min<std::uint64_t>(samples, (b + 1) * kSampleBlock);
    for (std::uint64_t k = b * kSampleBlock; k < hi; ++k) {
      const auto z = reservoir_state(a, sample_connectivity(e, seed, k));
      double s = 0.0;
      for (double v : z) s += v * v;
      xs[k] = s;
    }
  });

  TailAndDensity out;
  double mean = 0.0;
  for (std::uint64_t k = 0; k < samples; ++k) mean += (xs[k] - mean) / static_cast<double>(k + 1);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  out.mean = mean;
  out.variance = ss / static_cast<double>(samples - 1);

  std::vector<double> dev(samples);
  for (std::uint64_t k = 0; k < samples; ++k) dev[k] = std::abs(xs[k] - mean);
  std::sort(dev.begin(), dev.end());
  if (thresholds.empty()) {
    for (int j = 0; j < 50; ++j) thresholds.push_back(dev.back() * j / 50.0);
  }
  std::sort(thresholds.begin(), thresholds.end());
  out.tail.samples = samples;
  out.tail.seed = seed;
  for (double t : thresholds) {
    const auto count = static_cast<std::uint64_t>(dev.end() - std::lower_bound(dev.begin(), dev.end(), t));
    if (count < kMinTailCount) continue;
    out.tail.thresholds.push_back(t);
    out.tail.log_prob.push_back(std::log(static_cast<double>(count) / static_cast<double>(samples)));
  }

  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi <= lo) hi = lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  out.histogram.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) out.histogram.edges[i] = lo + width * static_cast<double>(i);
  out.histogram.edges[bins] = hi;
  std::vector<std::uint64_t> counts(bins, 0);
  for (double x : xs) {
    auto i = static_cast<std::size_t>((x - lo) / width);
    counts[std::min(i, bins - 1)]++;
  }
  out.histogram.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    out.histogram.density[i] = static_cast<double>(counts[i]) / (static_cast<double>(samples) * width);
  return out;
}

// Normalised figure input a = b / ||b||, b_t = (-1)^t / (6 - t)!, t = 0..5.
inline TimeSeries figure_input_series() {
  std::vector<double> b(6);
  double fact = 720.0, norm = 0.0;
  for (int t = 0; t <= 5; ++t) {
    b[t] = ((t % 2) ? -1.0 : 1.0) / fact;
    fact /= (6 - t);
    norm += b[t] * b[t];
  }
  norm = std::sqrt(norm);
  for (double& x : b) x /= norm;
  return TimeSeries(b);
}

}  // namespace lrsep
