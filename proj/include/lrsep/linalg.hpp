#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lrsep/errors.hpp"
#include "lrsep/precision.hpp"

namespace lrsep {

// Dense symmetric matrix with row-major storage. Writes go through set(),
// which updates both triangles so entries(i,j) == entries(j,i) bit for bit.
template <class Real>
class BasicSymMatrix {
 public:
  using value_type = Real;

  BasicSymMatrix() = default;
  explicit BasicSymMatrix(std::size_t dim, const Real& fill = Real(0))
      : dim_(dim), entries_(dim * dim, fill) {
    require(dim >= 1, "matrix dimension must be at least 1");
  }

  static BasicSymMatrix identity(std::size_t dim) {
    BasicSymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, Real(1));
    return m;
  }

  static BasicSymMatrix diagonal(const std::vector<Real>& d) {
    BasicSymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
    return m;
  }

  static BasicSymMatrix from_rows(const std::vector<std::vector<Real>>& rows) {
    BasicSymMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == rows.size(), "matrix rows must be square");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = i; j < rows.size(); ++j) {
        require(rows[i][j] == rows[j][i], "matrix is not symmetric at (" +
                                              std::to_string(i) + "," +
                                              std::to_string(j) + ")");
        m.set(i, j, rows[i][j]);
      }
    }
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  const Real& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * dim_ + j];
  }
  void set(std::size_t i, std::size_t j, const Real& v) {
    entries_[i * dim_ + j] = v;
    entries_[j * dim_ + i] = v;
  }
  const std::vector<Real>& entries() const noexcept { return entries_; }

  // Leading principal (k x k) submatrix.
  BasicSymMatrix leading(std::size_t k) const {
    require(k >= 1 && k <= dim_, "leading submatrix size out of range");
    BasicSymMatrix m(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) m.set(i, j, (*this)(i, j));
    return m;
  }

  BasicSymMatrix scaled(const Real& c) const {
    BasicSymMatrix m = *this;
    for (auto& x : m.entries_) x *= c;
    return m;
  }

  template <class F>
  auto map(F f) const {
    using Out = std::invoke_result_t<F, const Real&>;
    BasicSymMatrix<Out> m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j) m.set(i, j, f((*this)(i, j)));
    return m;
  }

  bool operator==(const BasicSymMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Real> entries_;
};

using SymMatrix = BasicSymMatrix<double>;
using BigSymMatrix = BasicSymMatrix<BigFloat>;

template <class Real>
struct Spectrum {
  std::vector<Real> eigenvalues;  // descending
  Real trace{};
  int sweeps = 0;

  const Real& lambda_max() const { return eigenvalues.front(); }
  const Real& lambda_min() const { return eigenvalues.back(); }
  std::size_t dim() const { return eigenvalues.size(); }
};

template <class Real>
void check_finite(const BasicSymMatrix<Real>& m) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (!is_finite(m(i, j)))
        throw ValidationError("matrix entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is not finite");
}

template <class Real>
Real trace(const BasicSymMatrix<Real>& m) {
  Real s(0);
  for (std::size_t i = 0; i < m.dim(); ++i) s += m(i, i);
  return s;
}

template <class Real>
Real frobenius(const BasicSymMatrix<Real>& m) {
  using std::sqrt;
  Real s(0);
  for (const auto& x : m.entries()) s += x * x;
  return sqrt(s);
}

template <class Real>
Real row_norm_2inf(const BasicSymMatrix<Real>& m) {
  using std::sqrt;
  check_finite(m);
  Real best(0);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Real s(0);
    for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * m(i, j);
    if (s > best) best = s;
  }
  return sqrt(best);
}

struct JacobiOptions {
  int max_sweeps = 100;
};

// Cyclic Jacobi eigenvalue iteration. The matrix is divided by its largest
// absolute entry first, rotated until the off-diagonal norm drops below
// tol * Frobenius(scaled input), and the eigenvalues are rescaled on output.
template <class Real>
Spectrum<Real> eigen_sym(const BasicSymMatrix<Real>& m, const Real& tol,
                         JacobiOptions opts = {}) {
  using std::abs;
  using std::sqrt;
  require(tol > 0, "eigen_sym tolerance must be positive");
  check_finite(m);
  const std::size_t n = m.dim();

  Spectrum<Real> out;
  out.trace = trace(m);

  Real scale(0);
  for (const auto& x : m.entries())
    if (abs(x) > scale) scale = abs(x);
  if (scale == 0) {
    out.eigenvalues.assign(n, Real(0));
    return out;
  }

  std::vector<Real> a(m.entries());
  for (auto& x : a) x /= scale;
  auto at = [&](std::size_t i, std::size_t j) -> Real& { return a[i * n + j]; };

  Real frob(0);
  for (const auto& x : a) frob += x * x;
  frob = sqrt(frob);
  const Real target = tol * frob;

  auto off_norm = [&] {
    Real s(0);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += at(p, q) * at(p, q);
    return sqrt(Real(2) * s);
  };

  const Real huge = sqrt(std::numeric_limits<double>::max()) / 4;
  Real off = off_norm();
  int sweep = 0;
  while (off > target) {
    if (sweep >= opts.max_sweeps) {
      throw ConvergenceError("Jacobi iteration did not converge after " +
                                 std::to_string(sweep) + " sweeps",
                             to_double(off / frob), sweep);
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Real apq = at(p, q);
        if (apq == 0) continue;
        const Real theta = (at(q, q) - at(p, p)) / (Real(2) * apq);
        Real t;
        if (abs(theta) > huge) {
          t = Real(1) / (Real(2) * theta);
        } else {
          t = Real(1) / (abs(theta) + sqrt(theta * theta + Real(1)));
          if (theta < 0) t = -t;
        }
        const Real c = Real(1) / sqrt(t * t + Real(1));
        const Real s = t * c;
        const Real tau = s / (Real(1) + c);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = Real(0);
        at(q, p) = Real(0);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const Real g = at(r, p);
          const Real h = at(r, q);
          const Real rp = g - s * (h + g * tau);
          const Real rq = h + s * (g - h * tau);
          at(r, p) = rp;
          at(p, r) = rp;
          at(r, q) = rq;
          at(q, r) = rq;
        }
      }
    }
    off = off_norm();
  }

  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = at(i, i) * scale;
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const Real& x, const Real& y) { return x > y; });
  return out;
}

template <class Real>
Spectrum<Real> eigen_sym(const BasicSymMatrix<Real>& m) {
  return eigen_sym(m, default_tolerance<Real>());
}

}  // namespace lrsep
