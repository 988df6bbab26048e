// Expected squared separation of two inputs by a 50-unit reservoir, from the
// moment matrix and from direct simulation.
#include <cstdio>

#include "lrsep/lrsep.hpp"

int main() {
  using namespace lrsep;
  const Ensemble e{EnsembleKind::sym, 50, 1.0, 0.5};
  const TimeSeries x{0.3, -1.0, 0.5, 2.0};
  const TimeSeries y{0.1, -0.5, 0.5, 1.0};
  const auto B = mc_moment_matrix(e, 3, 5000, 7);
  const auto rep = dominance_report(B.matrix);
  std::printf("lambda_min %.4f  lambda_max %.4f  r %.4f\n", rep.spectrum.lambda_min(),
              rep.spectrum.lambda_max(), rep.r);
  std::printf("a^T B a            %.4f\n", expected_square_norm(B.matrix, x - y));
  double mean = 0.0;
  for (std::uint64_t k = 0; k < 5000; ++k) {
    const double d = separation_distance(x, y, sample_connectivity(e, 7, k));
    mean += (d * d - mean) / double(k + 1);
  }
  std::printf("mean ||f(x)-f(y)||^2 %.4f\n", mean);
}
