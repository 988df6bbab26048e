#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "lrsep/errors.hpp"
#include "lrsep/linalg.hpp"
#include "lrsep/moment_matrix.hpp"
#include "lrsep/moments.hpp"

namespace lrsep {

// lambda_max / trace. The trace stands in for the eigenvalue sum: equal in
// exact arithmetic and insensitive to slightly negative Monte Carlo
// eigenvalues.
template <class Real>
Real dominance_ratio(const Spectrum<Real>& s) {
  if (!(s.trace > 0)) throw ValidationError("dominance ratio needs a positive trace");
  return s.lambda_max() / s.trace;
}

template <class Real>
struct Sandwich {
  Real lower;  // max row norm
  Real upper;  // trace
};

template <class Real>
Sandwich<Real> sandwich_bounds(const BasicSymMatrix<Real>& m) {
  return {row_norm_2inf(m), trace(m)};
}

struct DominanceReport {
  Spectrum<double> spectrum;
  double r = 0.0;
  double lower_bound_2inf = 0.0;
  double upper_bound_trace = 0.0;
  std::optional<double> closed_form_limit;
};

inline DominanceReport dominance_report(const SymMatrix& m,
                                        std::optional<double> closed_form_limit = std::nullopt) {
  DominanceReport rep;
  rep.spectrum = eigen_sym(m);
  rep.r = dominance_ratio(rep.spectrum);
  const auto sb = sandwich_bounds(m);
  rep.lower_bound_2inf = sb.lower;
  rep.upper_bound_trace = sb.upper;
  rep.closed_form_limit = closed_form_limit;
  return rep;
}

// max(1, rho^2, ..., rho^{2T}) / sum rho^{2i}.
inline double iid_limit_dominance(unsigned T, double rho) {
  require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
  double sum = 0.0, best = 0.0, p = 1.0;
  for (unsigned i = 0; i <= T; ++i) {
    sum += p;
    best = std::max(best, p);
    p *= rho * rho;
  }
  return best / sum;
}

inline double sym_limit_dominance(unsigned T, double rho) {
  return dominance_ratio(eigen_sym(semicircle_hankel<double>({MomentFamily::semicircle, rho, T})));
}

// Upper end of the sandwich lambda_max(B_T) / m_{2T} <= 1 + 1/(rho^2(2T-1))
// + (T-1)/(rho^4 (2T-1)(2T-3)) for the Gaussian Hankel matrix (T >= 2).
template <class Real = double>
Real gaussian_lambda_max_ratio_bound(unsigned T, double rho) {
  require(T >= 2, "the lambda_max sandwich needs T >= 2");
  const Real r2 = Real(rho) * Real(rho);
  const Real a = Real(2 * T - 1), b = Real(2 * T - 3);
  return Real(1) + Real(1) / (r2 * a) + Real(T - 1) / (r2 * r2 * a * b);
}

struct IidDominanceBounds {
  double inv_P = 0.0;
  std::optional<double> inv_Q;
  // Q is only claimed beyond an unspecified threshold in T.
  bool q_asymptotic_only = true;
};

// P(T) = min(T+1, sum_l (sigma^2 N)^{-l}),
// Q(T) = min(2, 1 + 1/(sigma^2 N)) (1 + 1/(2 s^2 (T-3)) + T/(8 s^4 (T-5)^2))
// with s = sigma^2 / N; Q needs T >= 6.
inline IidDominanceBounds iid_dominance_lower_bounds(unsigned T, std::size_t N, double sigma) {
  require(N >= 1, "N must be at least 1");
  require(sigma > 0 && std::isfinite(sigma), "sigma must be positive and finite");
  const double q = 1.0 / (sigma * sigma * static_cast<double>(N));
  double geo = 0.0, p = 1.0;
  for (unsigned l = 0; l <= T; ++l) {
    geo += p;
    p *= q;
  }
  IidDominanceBounds out;
  out.inv_P = 1.0 / std::min(static_cast<double>(T) + 1.0, geo);
  if (T >= 6) {
    const double s = sigma * sigma / static_cast<double>(N);
    const double Q = std::min(2.0, 1.0 + q) *
                     (1.0 + 1.0 / (2.0 * s * s * (T - 3.0)) +
                      T / (8.0 * s * s * s * s * (T - 5.0) * (T - 5.0)));
    out.inv_Q = 1.0 / Q;
  }
  return out;
}

struct DominanceEstimate {
  double r = 0.0;
  double std_error = 0.0;
  std::size_t batches = 0;
};

// Dominance ratio of a Monte Carlo moment matrix with a batch-means standard
// error: the sample range is cut into `batches` contiguous pieces and the
// spread of the per-piece ratios is propagated to the full estimate.
inline DominanceEstimate mc_dominance(const Ensemble& e, unsigned T, std::uint64_t samples,
                                      std::uint64_t seed, std::size_t batches = 20,
                                      McOptions opts = {}) {
  require(batches >= 2 && samples >= 2 * batches, "too few samples for the requested batches");
  DominanceEstimate out;
  out.batches = batches;
  out.r = dominance_ratio(eigen_sym(mc_moment_matrix(e, T, samples, seed, opts).matrix));
  std::vector<double> rs;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::uint64_t lo = samples * b / batches, hi = samples * (b + 1) / batches;
    rs.push_back(dominance_ratio(eigen_sym(mc_moment_matrix_range(e, T, seed, lo, hi, opts).matrix)));
  }
  double mean = 0.0;
  for (double x : rs) mean += x;
  mean /= static_cast<double>(batches);
  double ss = 0.0;
  for (double x : rs) ss += (x - mean) * (x - mean);
  out.std_error = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  return out;
}

}  // namespace lrsep
