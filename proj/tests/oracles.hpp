#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "lrsep/linalg.hpp"
#include "lrsep/moments.hpp"
#include "lrsep/reservoir.hpp"

namespace oracle {

// Determinant by LU with partial pivoting.
inline double lu_determinant(const lrsep::SymMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<double> a(m.entries());
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (a[piv * n + k] == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      det = -det;
    }
    det *= a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return det;
}

// Entry B(l1, l2) by summing over set partitions of the L+1 walk positions
// instead of index tuples. A partition with b blocks stands for
// N(N-1)...(N-b+1) tuples; the expectation of the product of entries is the
// product over distinct variables of sigma^c (c-1)!! (zero for odd c).
inline double partition_entry(lrsep::EnsembleKind kind, std::size_t N, double sigma, unsigned l1,
                              unsigned l2) {
  const unsigned L = l1 + l2;
  if (L % 2) return 0.0;
  std::vector<unsigned> rgs(L + 1, 0);
  double total = 0.0;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned blocks) {
    if (pos == L + 1) {
      if (blocks > N) return;
      std::map<std::pair<unsigned, unsigned>, unsigned> mult;
      auto edge = [&](unsigned from, unsigned to) {
        if (kind == lrsep::EnsembleKind::sym && from > to) std::swap(from, to);
        ++mult[{from, to}];
      };
      for (unsigned m = l1; m >= 1; --m) edge(rgs[m], rgs[m - 1]);
      for (unsigned m = l1; m < L; ++m) edge(rgs[m], rgs[m + 1]);
      double e = 1.0;
      for (const auto& [k, c] : mult) {
        if (c % 2) return;
        e *= std::pow(sigma, double(c)) * static_cast<double>(lrsep::odd_double_factorial(c / 2));
      }
      double ways = 1.0;
      for (unsigned b = 0; b < blocks; ++b) ways *= static_cast<double>(N - b);
      total += ways * e;
      return;
    }
    for (unsigned v = 0; v <= blocks; ++v) {
      rgs[pos] = v;
      rec(pos + 1, v == blocks ? blocks + 1 : blocks);
    }
  };
  rgs[0] = 0;
  if (L == 0) return static_cast<double>(N);
  rec(1, 1);
  return total;
}

inline lrsep::SymMatrix partition_matrix(const lrsep::Ensemble& e, unsigned T) {
  lrsep::SymMatrix m(T + 1);
  for (unsigned i = 0; i <= T; ++i)
    for (unsigned j = i; j <= T; ++j) m.set(i, j, partition_entry(e.kind, e.N, e.sigma(), i, j));
  return m;
}

// k-th derivative of f(w) = sum_t a_{T-t} w^t at w.
inline double poly_derivative(const std::vector<double>& a, unsigned k, double w) {
  const std::size_t T = a.size() - 1;
  double s = 0.0;
  for (std::size_t j = k; j <= T; ++j) {
    double c = a[T - j];
    for (unsigned q = 0; q < k; ++q) c *= static_cast<double>(j - q);
    s += c * std::pow(w, double(j - k));
  }
  return s;
}

// d^k/dw^k f(w)^2 by the Leibniz rule.
inline double square_derivative(const std::vector<double>& a, unsigned k, double w) {
  double s = 0.0, binom = 1.0;
  for (unsigned j = 0; j <= k; ++j) {
    s += binom * poly_derivative(a, j, w) * poly_derivative(a, k - j, w);
    binom = binom * (k - j) / (j + 1);
  }
  return s;
}

}  // namespace oracle
