#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lrsep/commands.hpp"
#include "lrsep/lrsep.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

void emit(const std::vector<lrsep::app::OutputFile>& files, const std::string& out_dir) {
  if (out_dir.empty()) {
    for (const auto& f : files) std::cout << f.content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& f : files) {
    const auto path = std::filesystem::path(out_dir) / f.name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw lrsep::ValidationError("cannot write " + path.string());
    os << f.content;
    std::cerr << "wrote " << path.string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separation capacity of random linear reservoirs"};
  app.fallthrough();
  app.require_subcommand(1);

  lrsep::app::RunConfig cfg;
  std::string kind = "iid", precision = "double", out_dir, figure_id;
  std::string law = "gaussian";
  std::vector<double> coeffs;
  double eps = 0.5, K = 1.0, delta = 0.5;
  std::size_t bins = 50;
  bool large_grid = false;

  app.add_option("--kind", kind, "ensemble kind: iid or sym")
      ->check(CLI::IsMember({"iid", "sym"}))->capture_default_str();
  app.add_option("--N", cfg.N, "reservoir dimension")->capture_default_str();
  app.add_option("--T", cfg.T, "maximal input length")->capture_default_str();
  app.add_option("--rho", cfg.rho, "scale rho; entries have std dev rho/N^alpha")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "scaling exponent alpha")->capture_default_str();
  auto* samples_opt = app.add_option("--samples", cfg.samples,
                                     "Monte Carlo samples (2000; sepprob uses 100000)");
  app.add_option("--seed", cfg.seed, "root seed")->capture_default_str();
  app.add_option("--precision", precision, "double or big:<digits>")->capture_default_str();
  app.add_flag("--exact", cfg.exact, "exact Isserlis enumeration instead of Monte Carlo");
  app.add_option("--out", out_dir, "output directory (default: stdout)");
  app.add_option("--threads", cfg.threads, "worker threads, 0 = all cores")->capture_default_str();
  app.add_option("--coeffs", coeffs, "series coefficients a_0 .. a_T")->delimiter(',');
  app.add_option("--eps", eps, "separation threshold eps")->capture_default_str();
  app.add_option("--K", K, "geometric growth rate K")->capture_default_str();
  app.add_option("--delta", delta, "confidence parameter delta in (0,1)")->capture_default_str();
  app.add_option("--law", law, "weight law for sepprob: gaussian or rademacher")
      ->check(CLI::IsMember({"gaussian", "rademacher"}))->capture_default_str();
  app.add_option("--bins", bins, "histogram bins")->capture_default_str();

  auto* spectrum1d = app.add_subcommand("spectrum1d", "spectrum of the 1-d Gaussian Hankel matrix");
  auto* momentmatrix = app.add_subcommand("momentmatrix", "generalised matrix of moments as JSON");
  auto* dominance = app.add_subcommand("dominance", "dominance ratio and its bounds");
  auto* bounds = app.add_subcommand("bounds", "entrywise bound checks on the exact matrix");
  auto* rootbound = app.add_subcommand("rootbound", "root radius and confidence hyperparameters");
  auto* sepprob = app.add_subcommand("sepprob", "separation probability: bound and simulation");
  auto* tails = app.add_subcommand("tails", "tail and density of ||f(a,W)||^2");
  auto* figures = app.add_subcommand("figures", "emit figure datasets");
  figures->add_option("--id", figure_id, "fig1 .. fig10 or all")->required();
  figures->add_flag("--large-grid", large_grid, "extend grids beyond desk scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    cfg.kind = lrsep::parse_kind(kind);
    cfg.precision = lrsep::Precision::parse(precision);
    lrsep::set_default_threads(cfg.threads);
    const bool samples_given = samples_opt->count() > 0;

    if (spectrum1d->parsed()) {
      emit(lrsep::app::cmd_spectrum1d(cfg.T, cfg.rho, cfg.precision), out_dir);
    } else if (momentmatrix->parsed()) {
      auto r = lrsep::app::cmd_momentmatrix(cfg);
      emit(r.files, out_dir);
      std::cerr << r.summary;
    } else if (dominance->parsed()) {
      emit(lrsep::app::cmd_dominance(cfg), out_dir);
    } else if (bounds->parsed()) {
      auto r = lrsep::app::cmd_bounds(cfg);
      emit(r.files, out_dir);
      std::cerr << r.summary;
    } else if (rootbound->parsed()) {
      const bool eps_given = app.get_option("--eps")->count() > 0;
      emit(lrsep::app::cmd_rootbound(coeffs, eps_given ? std::optional<double>(eps) : std::nullopt, delta),
           out_dir);
    } else if (sepprob->parsed()) {
      lrsep::app::SepProbConfig c{coeffs, eps, K, cfg.rho,
                                  law == "gaussian" ? lrsep::WeightLaw::gaussian
                                                    : lrsep::WeightLaw::rademacher,
                                  samples_given ? cfg.samples : 100000, cfg.seed, cfg.threads};
      emit(lrsep::app::cmd_sepprob(c), out_dir);
    } else if (tails->parsed()) {
      emit(lrsep::app::cmd_tails(cfg, coeffs, bins), out_dir);
    } else if (figures->parsed()) {
      emit(lrsep::app::cmd_figures(figure_id, {cfg.seed, cfg.samples, large_grid, cfg.threads}),
           out_dir);
    }
  } catch (const lrsep::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const lrsep::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
