#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lrsep/reservoir.hpp"

using namespace lrsep;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ConnectivitySample scalar(double w) {
  return connectivity_from_matrix({EnsembleKind::iid, 1, 1.0, 0.0}, {w});
}

TimeSeries random_series(std::size_t len, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  std::vector<double> v(len);
  for (auto& x : v) x = nd(gen);
  return TimeSeries(v);
}

}  // namespace

TEST_CASE("scalar reservoir outputs") {
  REQUIRE(reservoir_state({1, 2, 3}, scalar(1.0)) == std::vector<double>{6.0});
  REQUIRE(reservoir_state({1, 2, 3}, scalar(0.0)) == std::vector<double>{3.0});
  // a_0 multiplies w^T.
  REQUIRE(reservoir_state({1, 2, 3}, scalar(2.0)) == std::vector<double>{1 * 4 + 2 * 2 + 3.0});
}

TEST_CASE("identity connectivity") {
  const auto W = connectivity_from_matrix({EnsembleKind::sym, 2, 1.0, 0.0}, {1, 0, 0, 1});
  REQUIRE(reservoir_state({1, 1}, W) == std::vector<double>{2.0, 2.0});
}

TEST_CASE("delay embedding") {
  REQUIRE(delay_embed({5, 7}, 1, 2) == TimeSeries{0, 5, 7});
  REQUIRE(delay_embed({1, 2, 3}, 2, 2) == TimeSeries{1, 2, 3});
  REQUIRE(delay_embed({9}, 0, 3) == TimeSeries{0, 0, 0, 9});
  REQUIRE_THROWS_AS(delay_embed({1, 2}, 3, 2), ValidationError);
}

TEST_CASE("time series validation") {
  REQUIRE_THROWS_AS(TimeSeries(std::vector<double>{}), ValidationError);
  REQUIRE_THROWS_AS(TimeSeries({1.0, NAN}), ValidationError);
  REQUIRE_THROWS_AS(Ensemble({EnsembleKind::iid, 0, 1.0, 0.0}).validate(), ValidationError);
  REQUIRE_THROWS_AS(Ensemble({EnsembleKind::iid, 2, 0.0, 0.0}).validate(), ValidationError);
  REQUIRE(parse_kind("sym") == EnsembleKind::sym);
  REQUIRE_THROWS_AS(parse_kind("gue"), ValidationError);
}

TEST_CASE("separation distance") {
  std::mt19937_64 gen(1);
  const Ensemble e{EnsembleKind::iid, 6, 1.0, 0.5};
  const auto W = sample_connectivity(e, 4, 0);
  const auto x = random_series(5, gen), y = random_series(5, gen);
  REQUIRE(separation_distance(x, x, W) == 0.0);
  REQUIRE_THAT(separation_distance(x, y, W), WithinRel(euclidean_norm(reservoir_state(x - y, W)), 1e-12));
  REQUIRE(separation_distance(TimeSeries{1, 2, 3}, TimeSeries{4, 0, -1}, scalar(0.0)) == 4.0);
  REQUIRE_THROWS_AS(separation_distance(TimeSeries{1, 2}, TimeSeries{1}, W), ValidationError);
}

TEST_CASE("overflow names the step") {
  const auto W = connectivity_from_matrix({EnsembleKind::iid, 1, 1.0, 0.0}, {1e200});
  try {
    reservoir_state({1, 0, 0, 0}, W);
    FAIL("expected overflow");
  } catch (const OverflowError& e) {
    REQUIRE(e.step() == 2);
  }
}

TEST_CASE("sampling is deterministic and kind-correct") {
  for (auto kind : {EnsembleKind::iid, EnsembleKind::sym}) {
    const Ensemble e{kind, 7, 1.3, 0.25};
    const auto a = sample_connectivity(e, 99, 5);
    const auto b = sample_connectivity(e, 99, 5);
    const auto c = sample_connectivity(e, 99, 6);
    REQUIRE(a.matrix == b.matrix);
    REQUIRE(a.matrix != c.matrix);
    bool symmetric = true;
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = 0; j < 7; ++j) symmetric &= a(i, j) == a(j, i);
    REQUIRE(symmetric == (kind == EnsembleKind::sym));
  }
}

TEST_CASE("scalar draws have variance sigma^2") {
  const Ensemble e{EnsembleKind::iid, 1, 0.7, 0.0};
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double w = sample_connectivity(e, 2024, k).matrix[0];
    s += w;
    s2 += w * w;
  }
  const double var = s2 / n - (s / n) * (s / n);
  REQUIRE(std::abs(var / (0.49) - 1.0) < 0.03);
}

TEST_CASE("symmetric ensemble entry correlations") {
  const Ensemble e{EnsembleKind::sym, 3, 1.0, 0.0};
  const int n = 20000;
  // Unordered pairs (0,1), (0,2), (1,2), (0,0).
  std::vector<std::vector<double>> x(4, std::vector<double>(n));
  double mirrored = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto W = sample_connectivity(e, 8, k);
    x[0][k] = W(0, 1);
    x[1][k] = W(0, 2);
    x[2][k] = W(1, 2);
    x[3][k] = W(0, 0);
    mirrored += W(1, 0) == W(0, 1);
  }
  REQUIRE(mirrored == n);
  auto corr = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double ma = 0, mb = 0;
    for (int k = 0; k < n; ++k) ma += a[k], mb += b[k];
    ma /= n, mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (int k = 0; k < n; ++k) {
      sab += (a[k] - ma) * (b[k] - mb);
      saa += (a[k] - ma) * (a[k] - ma);
      sbb += (b[k] - mb) * (b[k] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  const double limit = 4.0 / std::sqrt(double(n));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) REQUIRE(std::abs(corr(x[i], x[j])) <= limit);
}

TEST_CASE("linearity of the reservoir map") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ud(-2, 2);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t N = 1 + rep % 50, T = rep % 21;
    const Ensemble e{rep % 2 ? EnsembleKind::sym : EnsembleKind::iid, N, 1.0, 0.5};
    const auto W = sample_connectivity(e, 3, rep);
    const auto x = random_series(T + 1, gen), y = random_series(T + 1, gen);
    const double a = ud(gen), b = ud(gen);
    std::vector<double> comb(T + 1);
    for (std::size_t t = 0; t <= T; ++t) comb[t] = a * x[t] + b * y[t];
    const auto lhs = reservoir_state(TimeSeries(comb), W);
    const auto fx = reservoir_state(x, W), fy = reservoir_state(y, W);
    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) scale = std::max(scale, std::abs(a * fx[i]) + std::abs(b * fy[i]));
    for (std::size_t i = 0; i < N; ++i)
      REQUIRE(std::abs(lhs[i] - (a * fx[i] + b * fy[i])) <= 1e-10 * std::max(scale, 1e-300));
  }
}

TEST_CASE("delay identity holds bit for bit") {
  std::mt19937_64 gen(23);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t N = 1 + rep % 9, T = 1 + rep % 12;
    const Ensemble e{rep % 2 ? EnsembleKind::sym : EnsembleKind::iid, N, 1.0, 0.5};
    const auto W = sample_connectivity(e, 5, rep);
    const auto x = random_series(T + 1, gen);
    for (std::size_t t = 0; t <= T; ++t) {
      std::vector<double> head(x.values().begin(), x.values().begin() + t + 1);
      REQUIRE(reservoir_state(TimeSeries(head), W) == reservoir_state(delay_embed(x, t, T), W));
    }
  }
}
