#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "lrsep/errors.hpp"
#include "lrsep/linalg.hpp"
#include "lrsep/moments.hpp"
#include "lrsep/parallel.hpp"
#include "lrsep/reservoir.hpp"

namespace lrsep {

enum class Method { exact_wick, monte_carlo };

inline std::string to_string(Method m) {
  return m == Method::exact_wick ? "exact-wick" : "monte-carlo";
}

struct MomentMatrixResult {
  SymMatrix matrix;
  Ensemble ensemble;
  unsigned T = 0;
  Method method = Method::exact_wick;
  std::uint64_t samples = 0;
  std::optional<SymMatrix> std_errors;
};

struct WorkBudget {
  double limit = 1e8;
};

// Work estimate for the largest entry: N^{2T+1} tuples times (2T-1)!!
// matchings.
inline double exact_work(std::size_t N, unsigned T) {
  if (T == 0) return static_cast<double>(N);
  return std::pow(static_cast<double>(N), 2.0 * T + 1.0) *
         static_cast<double>(odd_double_factorial(T));
}

namespace detail {

// Number of perfect matchings of `ids` in which every pair carries the same
// id. Bit k of `used` marks factor k as matched.
inline std::uint64_t same_id_matchings(const std::vector<std::uint32_t>& ids, std::uint32_t used) {
  const std::size_t L = ids.size();
  std::size_t first = 0;
  while (first < L && (used >> first & 1u)) ++first;
  if (first == L) return 1;
  std::uint64_t total = 0;
  const std::uint32_t with_first = used | (1u << first);
  for (std::size_t j = first + 1; j < L; ++j) {
    if ((used >> j & 1u) || ids[j] != ids[first]) continue;
    total += same_id_matchings(ids, with_first | (1u << j));
  }
  return total;
}

// Sum over index tuples s in [N]^{L+1} of the number of admissible
// matchings, where s_{l1} is the shared start of both walks: the first walk
// uses W_{s_m, s_{m-1}} for m = l1..1, the second W_{s_m, s_{m+1}} for
// m = l1..L-1.
inline std::uint64_t wick_count(EnsembleKind kind, std::size_t N, unsigned l1, unsigned l2) {
  const unsigned L = l1 + l2;
  if (L % 2) return 0;
  if (L == 0) return N;
  std::vector<std::uint32_t> s(L + 1, 0), ids(L);
  auto id = [&](std::uint32_t from, std::uint32_t to) -> std::uint32_t {
    if (kind == EnsembleKind::sym && from > to) std::swap(from, to);
    return from * static_cast<std::uint32_t>(N) + to;
  };
  std::uint64_t total = 0;
  while (true) {
    std::size_t k = 0;
    for (unsigned m = l1; m >= 1; --m) ids[k++] = id(s[m], s[m - 1]);
    for (unsigned m = l1; m < L; ++m) ids[k++] = id(s[m], s[m + 1]);
    total += same_id_matchings(ids, 0);
    std::size_t pos = 0;
    while (pos <= L && ++s[pos] == N) s[pos++] = 0;
    if (pos > L) break;
  }
  return total;
}

}  // namespace detail

inline MomentMatrixResult exact_moment_matrix(const Ensemble& e, unsigned T, WorkBudget budget = {}) {
  e.validate();
  const double work = exact_work(e.N, T);
  if (work > budget.limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "exact moment matrix needs about %.3g operations, limit is %.3g",
                  work, budget.limit);
    throw BudgetExceeded(buf, work, budget.limit);
  }
  require(2 * T <= 30, "exact moment matrix supports T <= 15");
  MomentMatrixResult r;
  r.ensemble = e;
  r.T = T;
  r.method = Method::exact_wick;
  r.matrix = SymMatrix(T + 1);
  const double sigma = e.sigma();
  for (unsigned l1 = 0; l1 <= T; ++l1) {
    for (unsigned l2 = l1; l2 <= T; ++l2) {
      const std::uint64_t count = detail::wick_count(e.kind, e.N, l1, l2);
      r.matrix.set(l1, l2, static_cast<double>(count) * std::pow(sigma, double(l1 + l2)));
    }
  }
  return r;
}

namespace detail {

inline std::size_t tri_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

// Upper-triangular Gram entries v_{l1} . v_{l2}, v_l = W^l u, for one draw.
inline void gram_sample(const ConnectivitySample& W, unsigned T, std::vector<double>& out) {
  const std::size_t N = W.N();
  std::vector<std::vector<double>> v(T + 1, std::vector<double>(N, 1.0));
  for (unsigned l = 1; l <= T; ++l) {
    W.apply(v[l - 1], v[l]);
    for (double x : v[l])
      if (!std::isfinite(x))
        throw OverflowError("W^l u overflowed at power " + std::to_string(l), l);
  }
  const std::size_t n = T + 1;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) s += v[a][i] * v[b][i];
      out[tri_index(a, b, n)] = s;
    }
}

inline SymMatrix unpack_tri(const std::vector<double>& tri, std::size_t n) {
  SymMatrix m(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) m.set(a, b, tri[tri_index(a, b, n)]);
  return m;
}

}  // namespace detail

struct McOptions {
  unsigned threads = 0;  // 0: library default
};

// Monte Carlo estimate from sample indices [begin, end) of the stream rooted
// at `seed`.
inline MomentMatrixResult mc_moment_matrix_range(const Ensemble& e, unsigned T, std::uint64_t seed,
                                                 std::uint64_t begin, std::uint64_t end,
                                                 McOptions opts = {}) {
  e.validate();
  require(end >= begin + 2, "Monte Carlo estimation needs at least 2 samples");
  const std::size_t n = T + 1;
  const std::size_t width = n * (n + 1) / 2;
  const auto acc = reduce_samples(width, begin, end, opts.threads,
                                  [&](std::uint64_t k, std::vector<double>& x) {
                                    detail::gram_sample(sample_connectivity(e, seed, k), T, x);
                                  });
  MomentMatrixResult r;
  r.ensemble = e;
  r.T = T;
  r.method = Method::monte_carlo;
  r.samples = end - begin;
  r.matrix = detail::unpack_tri(acc.mean(), n);
  r.std_errors = detail::unpack_tri(acc.standard_error(), n);
  return r;
}

inline MomentMatrixResult mc_moment_matrix(const Ensemble& e, unsigned T, std::uint64_t samples,
                                           std::uint64_t seed, McOptions opts = {}) {
  return mc_moment_matrix_range(e, T, seed, 0, samples, opts);
}

// E ||f(a, W)||^2 = a_rev^T B a_rev with a_rev = (a_T, ..., a_0).
inline double expected_square_norm(const SymMatrix& B, const TimeSeries& a) {
  require(B.dim() == a.size(), "moment matrix and series sizes differ");
  const std::size_t T = a.T();
  double s = 0.0;
  for (std::size_t l1 = 0; l1 <= T; ++l1)
    for (std::size_t l2 = 0; l2 <= T; ++l2) s += a[T - l1] * a[T - l2] * B(l1, l2);
  return s;
}

struct BoundCheck {
  std::string name;
  unsigned l1 = 0, l2 = 0;
  double value = 0.0;
  double bound = 0.0;
  bool is_lower = false;
  bool holds = true;
};

struct BoundReport {
  std::vector<BoundCheck> checks;

  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& c : checks) v += !c.holds;
    return v;
  }
  bool all_hold() const { return violations() == 0; }
};

namespace detail {

inline constexpr double kBoundRtol = 1e-12;

inline void add_check(BoundReport& rep, std::string name, unsigned l1, unsigned l2, double value,
                      double bound, bool is_lower) {
  const double slack = kBoundRtol * std::max(std::abs(value), std::abs(bound));
  const bool ok = is_lower ? value >= bound - slack : value <= bound + slack;
  rep.checks.push_back({std::move(name), l1, l2, value, bound, is_lower, ok});
}

inline void require_exact(const MomentMatrixResult& r, EnsembleKind kind) {
  require(r.method == Method::exact_wick, "bound checks need an exact moment matrix");
  require(r.ensemble.kind == kind, "bound check applied to the wrong ensemble kind");
}

inline double falling(double N, unsigned terms) {
  double p = 1.0;
  for (unsigned k = 0; k < terms; ++k) p *= N - k;
  return p;
}

// rho^L m_L (L/2)^L N^{L(1/2 - alpha)}, with m_L the standard Gaussian moment.
inline double correction_term(const Ensemble& e, unsigned L) {
  const double N = static_cast<double>(e.N);
  return std::pow(e.rho, L) * static_cast<double>(odd_double_factorial(L / 2)) *
         std::pow(L / 2.0, double(L)) * std::pow(N, L * (0.5 - e.alpha));
}

}  // namespace detail

// Two-sided entry bounds for the symmetric ensemble and the long-time step
// bound B(l1,l2) <= B(l1+1,l2+1) / (sigma^2 (L / (N(N+1)/2) + 1)).
inline BoundReport check_sym_entry_bounds(const MomentMatrixResult& r) {
  detail::require_exact(r, EnsembleKind::sym);
  const auto& e = r.ensemble;
  const double N = static_cast<double>(e.N);
  const double sigma = e.sigma();
  BoundReport rep;
  for (unsigned l1 = 0; l1 <= r.T; ++l1) {
    for (unsigned l2 = 0; l2 <= r.T; ++l2) {
      const unsigned L = l1 + l2;
      const double b = r.matrix(l1, l2);
      if (L % 2) {
        rep.checks.push_back({"odd-zero", l1, l2, b, 0.0, false, b == 0.0});
        continue;
      }
      const double cat = static_cast<double>(catalan(L / 2));
      const double main = std::pow(e.rho, L) * cat;
      if (L / 2 + 1 <= e.N)
        detail::add_check(rep, "sym-lower", l1, l2, b,
                          main * detail::falling(N, L / 2 + 1) / std::pow(N, e.alpha * L), true);
      detail::add_check(rep, "sym-upper", l1, l2, b,
                        main * std::pow(N, L * (0.5 - e.alpha) + 1) + detail::correction_term(e, L),
                        false);
    }
  }
  for (unsigned l1 = 0; l1 + 1 <= r.T; ++l1)
    for (unsigned l2 = 0; l2 + 1 <= r.T; ++l2) {
      const double L = l1 + l2;
      const double bound = r.matrix(l1 + 1, l2 + 1) / (sigma * sigma) / (L / (N * (N + 1) / 2) + 1);
      detail::add_check(rep, "sym-step", l1, l2, r.matrix(l1, l2), bound, false);
    }
  return rep;
}

// Kronecker-delta sandwich for the iid ensemble plus the step bounds
// B(l1,l2) <= B(l1+1,l2+1) / (sigma^2 N) and
// B(l1,l2) <= B(l1+2,l2+2) / (sigma^4 (L/N^2 + 1)).
inline BoundReport check_iid_entry_bounds(const MomentMatrixResult& r) {
  detail::require_exact(r, EnsembleKind::iid);
  const auto& e = r.ensemble;
  const double N = static_cast<double>(e.N);
  const double s2 = e.sigma() * e.sigma();
  BoundReport rep;
  for (unsigned l1 = 0; l1 <= r.T; ++l1) {
    for (unsigned l2 = 0; l2 <= r.T; ++l2) {
      const unsigned L = l1 + l2;
      const double b = r.matrix(l1, l2);
      if (L % 2) {
        rep.checks.push_back({"odd-zero", l1, l2, b, 0.0, false, b == 0.0});
        continue;
      }
      const double delta = l1 == l2 ? 1.0 : 0.0;
      if (L / 2 + 1 <= e.N)
        detail::add_check(rep, "iid-lower", l1, l2, b,
                          std::pow(e.rho, L) * detail::falling(N, L / 2 + 1) /
                              std::pow(N, e.alpha * L) * delta,
                          true);
      detail::add_check(rep, "iid-upper", l1, l2, b,
                        std::pow(e.rho, L) * std::pow(N, L * (0.5 - e.alpha) + 1) * delta +
                            detail::correction_term(e, L),
                        false);
    }
  }
  for (unsigned l1 = 0; l1 + 1 <= r.T; ++l1)
    for (unsigned l2 = 0; l2 + 1 <= r.T; ++l2)
      detail::add_check(rep, "iid-step1", l1, l2, r.matrix(l1, l2),
                        r.matrix(l1 + 1, l2 + 1) / (s2 * N), false);
  for (unsigned l1 = 0; l1 + 2 <= r.T; ++l1)
    for (unsigned l2 = 0; l2 + 2 <= r.T; ++l2) {
      const double L = l1 + l2;
      detail::add_check(rep, "iid-step2", l1, l2, r.matrix(l1, l2),
                        r.matrix(l1 + 2, l2 + 2) / (s2 * s2 * (L / (N * N) + 1)), false);
    }
  return rep;
}

inline nlohmann::ordered_json matrix_to_json(const SymMatrix& m) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline SymMatrix matrix_from_json(const nlohmann::ordered_json& j) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) rows.push_back(row.get<std::vector<double>>());
  return SymMatrix::from_rows(rows);
}

inline nlohmann::ordered_json ensemble_to_json(const Ensemble& e) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(e.kind);
  j["N"] = e.N;
  j["rho"] = e.rho;
  j["alpha"] = e.alpha;
  j["sigma"] = e.sigma();
  return j;
}

inline nlohmann::ordered_json to_json(const MomentMatrixResult& r) {
  nlohmann::ordered_json j;
  j["ensemble"] = ensemble_to_json(r.ensemble);
  j["T"] = r.T;
  j["method"] = to_string(r.method);
  j["samples"] = r.samples;
  j["matrix"] = matrix_to_json(r.matrix);
  j["std_errors"] = r.std_errors ? matrix_to_json(*r.std_errors) : nlohmann::ordered_json(nullptr);
  return j;
}

inline MomentMatrixResult moment_matrix_from_json(const nlohmann::ordered_json& j) {
  MomentMatrixResult r;
  const auto& e = j.at("ensemble");
  r.ensemble = {parse_kind(e.at("kind").get<std::string>()), e.at("N").get<std::size_t>(),
                e.at("rho").get<double>(), e.at("alpha").get<double>()};
  r.T = j.at("T").get<unsigned>();
  const auto method = j.at("method").get<std::string>();
  require(method == "exact-wick" || method == "monte-carlo", "unknown method '" + method + "'");
  r.method = method == "exact-wick" ? Method::exact_wick : Method::monte_carlo;
  r.samples = j.at("samples").get<std::uint64_t>();
  r.matrix = matrix_from_json(j.at("matrix"));
  if (!j.at("std_errors").is_null()) r.std_errors = matrix_from_json(j.at("std_errors"));
  return r;
}

}  // namespace lrsep
