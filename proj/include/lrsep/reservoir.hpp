#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lrsep/errors.hpp"
#include "lrsep/rng.hpp"

namespace lrsep {

// Input sequence (a_0, ..., a_T).
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::initializer_list<double> v) : TimeSeries(std::vector<double>(v)) {}
  explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    require(!values_.empty(), "time series must be non-empty");
    for (double x : values_) require(std::isfinite(x), "time series values must be finite");
  }

  std::size_t T() const { return values_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t t) const { return values_[t]; }
  const std::vector<double>& values() const { return values_; }
  bool operator==(const TimeSeries&) const = default;

 private:
  std::vector<double> values_;
};

inline TimeSeries operator-(const TimeSeries& x, const TimeSeries& y) {
  require(x.size() == y.size(), "time series lengths differ");
  std::vector<double> d(x.size());
  for (std::size_t t = 0; t < d.size(); ++t) d[t] = x[t] - y[t];
  return TimeSeries(std::move(d));
}

enum class EnsembleKind { iid, sym };

inline std::string to_string(EnsembleKind k) { return k == EnsembleKind::iid ? "iid" : "sym"; }

inline EnsembleKind parse_kind(const std::string& s) {
  if (s == "iid") return EnsembleKind::iid;
  if (s == "sym") return EnsembleKind::sym;
  throw ValidationError("ensemble kind must be 'iid' or 'sym', got '" + s + "'");
}

// Gaussian connectivity law with entry standard deviation rho / N^alpha.
struct Ensemble {
  EnsembleKind kind = EnsembleKind::iid;
  std::size_t N = 1;
  double rho = 1.0;
  double alpha = 0.0;

  void validate() const {
    require(N >= 1, "reservoir dimension N must be at least 1");
    require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
    require(std::isfinite(alpha), "alpha must be finite");
  }
  double sigma() const { return rho / std::pow(static_cast<double>(N), alpha); }
  bool operator==(const Ensemble&) const = default;
};

struct ConnectivitySample {
  Ensemble ensemble;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<double> matrix;  // row-major N x N

  std::size_t N() const { return ensemble.N; }
  double operator()(std::size_t i, std::size_t j) const { return matrix[i * ensemble.N + j]; }

  // out = W x
  void apply(const std::vector<double>& x, std::vector<double>& out) const {
    const std::size_t n = ensemble.N;
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = matrix.data() + i * n;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
      out[i] = s;
    }
  }
};

// Draw number `index` from the stream rooted at `seed`. The iid kind fills
// N^2 entries in row-major order; the symmetric kind fills the upper
// triangle row by row and mirrors it.
inline ConnectivitySample sample_connectivity(const Ensemble& e, std::uint64_t seed,
                                              std::uint64_t index) {
  e.validate();
  ConnectivitySample w{e, seed, index, std::vector<double>(e.N * e.N)};
  NormalStream normals(stream_key(seed, index));
  const double sigma = e.sigma();
  const std::size_t n = e.N;
  if (e.kind == EnsembleKind::iid) {
    for (auto& x : w.matrix) x = sigma * normals.next();
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double x = sigma * normals.next();
        w.matrix[i * n + j] = x;
        w.matrix[j * n + i] = x;
      }
  }
  return w;
}

inline ConnectivitySample connectivity_from_matrix(const Ensemble& e, std::vector<double> matrix) {
  e.validate();
  require(matrix.size() == e.N * e.N, "connectivity matrix must be N x N");
  return ConnectivitySample{e, 0, 0, std::move(matrix)};
}

// f_T(a, W) = sum_t W^t u a_{T-t} with u the all-ones vector, evaluated by
// z <- W z + u a_t.
inline std::vector<double> reservoir_state(const TimeSeries& a, const ConnectivitySample& W) {
  const std::size_t n = W.N();
  require(W.matrix.size() == n * n, "connectivity matrix has inconsistent size");
  std::vector<double> z(n, a[0]), tmp(n);
  for (std::size_t t = 1; t < a.size(); ++t) {
    W.apply(z, tmp);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = tmp[i] + a[t];
      if (!std::isfinite(z[i]))
        throw OverflowError("reservoir state overflowed at step " + std::to_string(t), t);
    }
  }
  return z;
}

// tau_t(a): T - t leading zeros followed by a_0 .. a_t.
inline TimeSeries delay_embed(const TimeSeries& a, std::size_t t, std::size_t T) {
  require(t <= T, "delay_embed requires t <= T");
  require(t < a.size(), "delay_embed requires t <= length of the series - 1");
  std::vector<double> v(T + 1, 0.0);
  for (std::size_t s = 0; s <= t; ++s) v[T - t + s] = a[s];
  return TimeSeries(std::move(v));
}

inline double euclidean_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double separation_distance(const TimeSeries& x, const TimeSeries& y,
                                  const ConnectivitySample& W) {
  require(x.size() == y.size(), "time series lengths differ");
  const auto fx = reservoir_state(x, W);
  const auto fy = reservoir_state(y, W);
  double s = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) s += (fx[i] - fy[i]) * (fx[i] - fy[i]);
  return std::sqrt(s);
}

}  // namespace lrsep
