// Extreme eigenvalues of the Gaussian Hankel matrix in 60-digit arithmetic
// next to their large-T equivalents.
#include <cstdio>

#include "lrsep/lrsep.hpp"

int main() {
  using namespace lrsep;
  PrecisionScope scope(60);
  std::printf("%3s %14s %14s %14s %14s %10s\n", "T", "ln lmax", "ln lmax asym", "ln lmin",
              "ln lmin asym", "r_T");
  for (unsigned T = 2; T <= 20; T += 2) {
    const auto s = eigen_sym(hankel_1d<BigFloat>({MomentFamily::gaussian, 1.0, T}));
    std::printf("%3u %14.6f %14.6f %14.6f %14.6f %10.6f\n", T, to_double(log(s.lambda_max())),
                lambda_max_asymptotic_1d(T, 1.0), to_double(log(s.lambda_min())),
                lambda_min_asymptotic_1d(T, 1.0), to_double(dominance_ratio(s)));
  }
}
