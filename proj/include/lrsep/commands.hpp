#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrsep/errors.hpp"
#include "lrsep/io.hpp"
#include "lrsep/linalg.hpp"
#include "lrsep/moment_matrix.hpp"
#include "lrsep/moments.hpp"
#include "lrsep/precision.hpp"
#include "lrsep/reservoir.hpp"
#include "lrsep/rng.hpp"
#include "lrsep/separation.hpp"
#include "lrsep/spectral.hpp"

// Implementations of the command-line subcommands. Each returns the files it
// would write so that callers can either print them or store them.
namespace lrsep::app {

struct OutputFile {
  std::string name;
  std::string content;
};

using Config = std::vector<std::pair<std::string, std::string>>;

inline std::string g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct RunConfig {
  EnsembleKind kind = EnsembleKind::iid;
  std::size_t N = 2;
  unsigned T = 2;
  double rho = 1.0;
  double alpha = 0.0;
  std::uint64_t samples = 2000;
  std::uint64_t seed = 42;
  Precision precision;
  bool exact = false;
  unsigned threads = 0;

  Ensemble ensemble() const {
    Ensemble e{kind, N, rho, alpha};
    e.validate();
    return e;
  }

  Config echo(const std::string& command) const {
    Config c{{"command", command}, {"kind", to_string(kind)}, {"N", std::to_string(N)},
             {"T", std::to_string(T)}, {"rho", g(rho)}, {"alpha", g(alpha)}};
    if (exact) {
      c.push_back({"method", "exact-wick"});
    } else {
      c.push_back({"method", "monte-carlo"});
      c.push_back({"samples", std::to_string(samples)});
      c.push_back({"seed", std::to_string(seed)});
    }
    return c;
  }
};

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- spectrum1d

struct Spectrum1dRow {
  unsigned T = 0;
  double log_lambda_max = 0.0;
  double log_lambda_min = 0.0;
  double log_asym_max = 0.0;
  double log_asym_min = 0.0;
  double r = 0.0;
};

inline unsigned available_digits(const Precision& p) { return p.is_big() ? p.digits : 15; }

namespace detail {

template <class Real>
Spectrum1dRow spectrum1d_row(unsigned T, double rho) {
  using std::log;
  const auto s = eigen_sym(hankel_1d<Real>({MomentFamily::gaussian, rho, T}));
  if (!(s.lambda_min() > 0))
    throw NumericError("computed lambda_min is not positive at T=" + std::to_string(T) +
                       "; increase the precision");
  Spectrum1dRow row;
  row.T = T;
  row.log_lambda_max = to_double(log(s.lambda_max()));
  row.log_lambda_min = to_double(log(s.lambda_min()));
  row.log_asym_max = lambda_max_asymptotic_1d(T, rho);
  row.log_asym_min = lambda_min_asymptotic_1d(T, rho);
  row.r = to_double(dominance_ratio(s));
  return row;
}

}  // namespace detail

// Rows T' = 1..T of the spectrum of the Gaussian Hankel matrix.
inline std::vector<Spectrum1dRow> spectrum1d_rows(unsigned T, double rho, const Precision& p,
                                                  unsigned first_T = 1) {
  require(T >= 1, "spectrum1d needs T >= 1");
  require(rho > 0 && std::isfinite(rho), "rho must be positive and finite");
  const unsigned need = required_digits_1d(T, rho);
  if (need > available_digits(p))
    throw PrecisionError("precision " + p.to_string() + " is insufficient for T=" +
                             std::to_string(T) + "; at least " + std::to_string(need) +
                             " decimal digits are required (use --precision big:" +
                             std::to_string(need) + ")",
                         need);
  std::vector<Spectrum1dRow> rows;
  if (p.is_big()) {
    PrecisionScope scope(p.digits);
    for (unsigned t = first_T; t <= T; ++t) rows.push_back(detail::spectrum1d_row<BigFloat>(t, rho));
  } else {
    for (unsigned t = first_T; t <= T; ++t) rows.push_back(detail::spectrum1d_row<double>(t, rho));
  }
  return rows;
}

inline std::string spectrum1d_csv(const std::vector<Spectrum1dRow>& rows, const Config& config) {
  CsvWriter w(config, {"T", "log_lambda_max", "log_lambda_min", "log_asym_max", "log_asym_min", "r_T"});
  for (const auto& r : rows)
    w.row({std::int64_t(r.T), r.log_lambda_max, r.log_lambda_min, r.log_asym_max, r.log_asym_min, r.r});
  return w.str();
}

inline std::vector<OutputFile> cmd_spectrum1d(unsigned T, double rho, const Precision& p) {
  const auto rows = spectrum1d_rows(T, rho, p);
  Config c{{"command", "spectrum1d"}, {"T", std::to_string(T)}, {"rho", g(rho)},
           {"precision", p.to_string()}};
  return {{"spectrum1d.csv", spectrum1d_csv(rows, c)}};
}

// ------------------------------------------------------------- momentmatrix

inline MomentMatrixResult compute_moment_matrix(const RunConfig& cfg) {
  const auto e = cfg.ensemble();
  if (cfg.exact) return exact_moment_matrix(e, cfg.T);
  return mc_moment_matrix(e, cfg.T, cfg.samples, cfg.seed, {cfg.threads});
}

inline std::string bound_summary(const MomentMatrixResult& r) {
  const auto rep = r.ensemble.kind == EnsembleKind::sym ? check_sym_entry_bounds(r)
                                                        : check_iid_entry_bounds(r);
  return "entry bound checks: " + std::to_string(rep.checks.size()) + " evaluated, " +
         std::to_string(rep.violations()) + " violated\n";
}

struct CommandResult {
  std::vector<OutputFile> files;
  std::string summary;  // human-readable notes, printed to stderr
};

inline CommandResult cmd_momentmatrix(const RunConfig& cfg) {
  const auto r = compute_moment_matrix(cfg);
  CommandResult out;
  out.files.push_back({"momentmatrix.json", dump(to_json(r))});
  if (r.method == Method::exact_wick) out.summary = bound_summary(r);
  return out;
}

// ---------------------------------------------------------------- dominance

inline nlohmann::ordered_json dominance_json(const RunConfig& cfg) {
  const auto r = compute_moment_matrix(cfg);
  std::optional<double> limit;
  if (cfg.alpha == 0.5)
    limit = cfg.kind == EnsembleKind::iid ? iid_limit_dominance(cfg.T, cfg.rho)
                                          : sym_limit_dominance(cfg.T, cfg.rho);
  const auto rep = dominance_report(r.matrix, limit);
  nlohmann::ordered_json j;
  j["ensemble"] = ensemble_to_json(r.ensemble);
  j["T"] = r.T;
  j["method"] = to_string(r.method);
  j["samples"] = r.samples;
  if (!cfg.exact) j["seed"] = cfg.seed;
  j["r"] = rep.r;
  j["lambda_max"] = rep.spectrum.lambda_max();
  j["lambda_min"] = rep.spectrum.lambda_min();
  j["trace"] = rep.spectrum.trace;
  j["lower_bound_2inf"] = rep.lower_bound_2inf;
  j["upper_bound_trace"] = rep.upper_bound_trace;
  j["eigenvalues"] = rep.spectrum.eigenvalues;
  j["closed_form_limit"] = limit ? nlohmann::ordered_json(*limit) : nlohmann::ordered_json(nullptr);
  if (cfg.kind == EnsembleKind::iid) {
    const auto lb = iid_dominance_lower_bounds(cfg.T, cfg.N, r.ensemble.sigma());
    nlohmann::ordered_json b;
    b["inv_P"] = lb.inv_P;
    b["inv_Q"] = lb.inv_Q ? nlohmann::ordered_json(*lb.inv_Q) : nlohmann::ordered_json(nullptr);
    b["q_asymptotic_only"] = lb.q_asymptotic_only;
    j["iid_lower_bounds"] = b;
  }
  return j;
}

inline std::vector<OutputFile> cmd_dominance(const RunConfig& cfg) {
  return {{"dominance.json", dump(dominance_json(cfg))}};
}

// ------------------------------------------------------------------- bounds

inline CommandResult cmd_bounds(RunConfig cfg) {
  cfg.exact = true;
  const auto r = compute_moment_matrix(cfg);
  const auto rep = cfg.kind == EnsembleKind::sym ? check_sym_entry_bounds(r) : check_iid_entry_bounds(r);
  CsvWriter w(cfg.echo("bounds"), {"check", "l1", "l2", "value", "bound", "side", "holds"});
  for (const auto& c : rep.checks)
    w.row({c.name, std::int64_t(c.l1), std::int64_t(c.l2), c.value, c.bound,
           std::string(c.is_lower ? "lower" : "upper"), std::int64_t(c.holds)});
  return {{{"bounds.csv", w.str()}}, bound_summary(r)};
}

// ---------------------------------------------------------------- rootbound

inline std::vector<OutputFile> cmd_rootbound(const std::vector<double>& coeffs,
                                             std::optional<double> eps, double delta) {
  const PolySeries p(coeffs);
  const auto rb = zassenhaus_bound(p);
  nlohmann::ordered_json j;
  j["coeffs"] = coeffs;
  j["beta"] = rb.beta;
  j["monomial"] = rb.monomial;
  if (eps) {
    j["eps"] = *eps;
    j["delta"] = delta;
    j["geometric_rate"] = geometric_rate(p, *eps);
    j["rho_rademacher"] = hyperparameter_for_confidence(p, *eps, delta, WeightLaw::rademacher);
    j["rho_gaussian"] = hyperparameter_for_confidence(p, *eps, delta, WeightLaw::gaussian);
  }
  return {{"rootbound.json", dump(j)}};
}

// ------------------------------------------------------------------ sepprob

struct SepProbConfig {
  std::vector<double> coeffs;
  double eps = 0.5;
  double K = 1.0;
  double rho = 1.0;
  WeightLaw law = WeightLaw::gaussian;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

inline std::vector<OutputFile> cmd_sepprob(const SepProbConfig& c) {
  const PolySeries p(c.coeffs);
  const auto tail = c.law == WeightLaw::gaussian ? gaussian_tail(c.rho) : rademacher_tail(c.rho);
  const auto bound = geometric_separation_bound(p, c.eps, c.K, tail);
  const auto est = mc_separation_probability(p, c.eps, c.law, c.rho, c.samples, c.seed, c.K, c.threads);
  nlohmann::ordered_json j;
  j["coeffs"] = c.coeffs;
  j["eps"] = c.eps;
  j["K"] = c.K;
  j["rho"] = c.rho;
  j["law"] = to_string(c.law);
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["hypothesis_holds"] = bound.has_value();
  j["bound"] = bound ? nlohmann::ordered_json(*bound) : nlohmann::ordered_json(nullptr);
  j["probability"] = est.probability;
  j["std_error"] = est.std_error;
  j["hard_violations"] = est.hard_violations;
  return {{"sepprob.json", dump(j)}};
}

// -------------------------------------------------------------------- tails

inline std::vector<OutputFile> tails_files(const TimeSeries& a, const Ensemble& e,
                                           std::uint64_t samples, std::uint64_t seed,
                                           std::size_t bins, unsigned threads, const Config& config,
                                           const std::string& stem) {
  const auto td = mc_tail_and_density(a, e, samples, seed, {}, bins, threads);
  Config c = config;
  c.push_back({"mean", format_double(td.mean)});
  c.push_back({"variance", format_double(td.variance)});
  CsvWriter tw(c, {"t", "log_prob"});
  for (std::size_t i = 0; i < td.tail.thresholds.size(); ++i)
    tw.row({td.tail.thresholds[i], td.tail.log_prob[i]});
  CsvWriter dw(c, {"bin_lo", "bin_hi", "density"});
  for (std::size_t i = 0; i < td.histogram.density.size(); ++i)
    dw.row({td.histogram.edges[i], td.histogram.edges[i + 1], td.histogram.density[i]});
  return {{stem + "_tail.csv", tw.str()}, {stem + "_density.csv", dw.str()}};
}

inline std::vector<OutputFile> cmd_tails(const RunConfig& cfg, const std::vector<double>& coeffs,
                                         std::size_t bins) {
  const TimeSeries a = coeffs.empty() ? figure_input_series() : TimeSeries(coeffs);
  auto c = cfg.echo("tails");
  c.push_back({"bins", std::to_string(bins)});
  return tails_files(a, cfg.ensemble(), cfg.samples, cfg.seed, bins, cfg.threads, c, "tails");
}

// ------------------------------------------------------------------ figures

struct FigureOptions {
  std::uint64_t seed = 42;
  std::uint64_t samples = 2000;
  bool large_grid = false;
  unsigned threads = 0;
};

inline const std::vector<double>& rho_grid() {
  static const std::vector<double> v{0.25, 0.5, 1.0, 1.5};
  return v;
}

inline const std::vector<double>& alpha_grid() {
  static const std::vector<double> v{0.0, 0.25, 0.5, 0.75, 1.0};
  return v;
}

inline std::vector<std::size_t> n_grid(bool large) {
  std::vector<std::size_t> v{5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  if (large) v.insert(v.end(), {150, 200});
  return v;
}

inline constexpr std::size_t kFigureBins = 50;
inline constexpr unsigned kFigurePrecisionDigits = 100;

namespace detail {

inline Config figure_echo(int fig, const FigureOptions& o, Config extra) {
  Config c{{"command", "figures"}, {"id", "fig" + std::to_string(fig)}};
  c.insert(c.end(), extra.begin(), extra.end());
  c.push_back({"seed", std::to_string(o.seed)});
  c.push_back({"samples", std::to_string(o.samples)});
  c.push_back({"large_grid", o.large_grid ? "1" : "0"});
  return c;
}

inline std::vector<OutputFile> fig_spectrum(const FigureOptions& o) {
  std::vector<OutputFile> out;
  const unsigned T = o.large_grid ? 40 : 30;
  const auto p = Precision::big(kFigurePrecisionDigits);
  for (double rho : rho_grid()) {
    auto c = figure_echo(1, o, {{"rho", g(rho)}, {"precision", p.to_string()}});
    out.push_back({"fig1_rho" + g(rho) + ".csv", spectrum1d_csv(spectrum1d_rows(T, rho, p), c)});
  }
  return out;
}

inline std::vector<OutputFile> fig_r1d(const FigureOptions& o) {
  const unsigned T = o.large_grid ? 40 : 30;
  CsvWriter w(figure_echo(2, o, {{"T_max", std::to_string(T)}}), {"rho", "T", "r_T"});
  for (double rho : rho_grid())
    for (unsigned t = 0; t <= T; ++t)
      w.row({rho, std::int64_t(t),
             dominance_ratio(eigen_sym(hankel_1d<double>({MomentFamily::gaussian, rho, t})))});
  return {{"fig2.csv", w.str()}};
}

template <class F>
std::vector<OutputFile> fig_limit(int fig, const FigureOptions& o, F limit) {
  const unsigned T = o.large_grid ? 60 : 30;
  CsvWriter w(figure_echo(fig, o, {{"T_max", std::to_string(T)}}), {"rho", "T", "r"});
  for (double rho : rho_grid())
    for (unsigned t = 0; t <= T; ++t) w.row({rho, std::int64_t(t), limit(t, rho)});
  return {{"fig" + std::to_string(fig) + ".csv", w.str()}};
}

inline std::uint64_t grid_seed(const FigureOptions& o, int fig, std::uint64_t panel,
                               std::size_t alpha_index, std::size_t N) {
  return stream_key(o.seed, std::uint64_t(fig), panel, std::uint64_t(alpha_index), std::uint64_t(N));
}

// Dominance ratio against N, one panel per T.
inline std::vector<OutputFile> fig_vs_N(int fig, EnsembleKind kind, const FigureOptions& o) {
  std::vector<OutputFile> out;
  for (unsigned T : {6u, 10u, 12u}) {
    CsvWriter w(figure_echo(fig, o, {{"kind", to_string(kind)}, {"T", std::to_string(T)}, {"rho", "1"}}),
                {"alpha", "N", "r", "lambda_max", "trace"});
    const auto& alphas = alpha_grid();
    for (std::size_t ai = 0; ai < alphas.size(); ++ai)
      for (std::size_t N : n_grid(o.large_grid)) {
        const Ensemble e{kind, N, 1.0, alphas[ai]};
        const auto r = mc_moment_matrix(e, T, o.samples, grid_seed(o, fig, T, ai, N), {o.threads});
        const auto s = eigen_sym(r.matrix);
        w.row({alphas[ai], std::int64_t(N), dominance_ratio(s), s.lambda_max(), s.trace});
      }
    out.push_back({"fig" + std::to_string(fig) + "_T" + std::to_string(T) + ".csv", w.str()});
  }
  return out;
}

// Dominance ratio against T, one panel per N. Each (N, alpha) point runs a
// single simulation at the largest T; smaller T use leading submatrices.
inline std::vector<OutputFile> fig_vs_T(int fig, EnsembleKind kind, const FigureOptions& o) {
  std::vector<OutputFile> out;
  const unsigned T_max = o.large_grid ? 16 : 12;
  for (std::size_t N : {std::size_t(50), std::size_t(75), std::size_t(100)}) {
    CsvWriter w(figure_echo(fig, o, {{"kind", to_string(kind)}, {"N", std::to_string(N)},
                                     {"T_max", std::to_string(T_max)}, {"rho", "1"}}),
                {"alpha", "T", "r"});
    const auto& alphas = alpha_grid();
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const Ensemble e{kind, N, 1.0, alphas[ai]};
      const auto r = mc_moment_matrix(e, T_max, o.samples, grid_seed(o, fig, N, ai, N), {o.threads});
      for (unsigned t = 1; t <= T_max; ++t)
        w.row({alphas[ai], std::int64_t(t), dominance_ratio(eigen_sym(r.matrix.leading(t + 1)))});
    }
    out.push_back({"fig" + std::to_string(fig) + "_N" + std::to_string(N) + ".csv", w.str()});
  }
  return out;
}

// Density (fig9) or tail (fig10) of ||f(a, W)||^2 for both ensembles with
// sigma = 1/sqrt(N), one panel per N.
inline std::vector<OutputFile> fig_distribution(int fig, const FigureOptions& o) {
  std::vector<OutputFile> out;
  const TimeSeries a = figure_input_series();
  CsvWriter summary(figure_echo(fig, o, {{"rho", "1"}, {"alpha", "0.5"}}),
                    {"N", "kind", "mean", "variance", "samples"});
  for (std::size_t N : {std::size_t(10), std::size_t(50), std::size_t(100)}) {
    CsvWriter w(figure_echo(fig, o, {{"N", std::to_string(N)}, {"rho", "1"}, {"alpha", "0.5"},
                                     {"bins", std::to_string(kFigureBins)}}),
                fig == 9 ? std::vector<std::string>{"kind", "bin_lo", "bin_hi", "density"}
                         : std::vector<std::string>{"kind", "t", "log_prob"});
    for (auto kind : {EnsembleKind::iid, EnsembleKind::sym}) {
      const Ensemble e{kind, N, 1.0, 0.5};
      const auto td = mc_tail_and_density(a, e, o.samples,
                                          grid_seed(o, fig, N, kind == EnsembleKind::sym, N), {},
                                          kFigureBins, o.threads);
      const std::string k = to_string(kind);
      if (fig == 9) {
        for (std::size_t i = 0; i < td.histogram.density.size(); ++i)
          w.row({k, td.histogram.edges[i], td.histogram.edges[i + 1], td.histogram.density[i]});
      } else {
        for (std::size_t i = 0; i < td.tail.thresholds.size(); ++i)
          w.row({k, td.tail.thresholds[i], td.tail.log_prob[i]});
      }
      summary.row({std::int64_t(N), k, td.mean, td.variance, std::int64_t(o.samples)});
    }
    out.push_back({"fig" + std::to_string(fig) + "_N" + std::to_string(N) + ".csv", w.str()});
  }
  out.push_back({"fig" + std::to_string(fig) + "_summary.csv", summary.str()});
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig1", "fig2", "fig3", "fig4", "fig5",
                                            "fig6", "fig7", "fig8", "fig9", "fig10"};
  return ids;
}

inline std::vector<OutputFile> cmd_figures(const std::string& id, const FigureOptions& o) {
  require(o.samples >= 1000, "figures need at least 1000 samples");
  using namespace detail;
  if (id == "fig1") return fig_spectrum(o);
  if (id == "fig2") return fig_r1d(o);
  if (id == "fig3") return fig_vs_N(3, EnsembleKind::sym, o);
  if (id == "fig4") return fig_limit(4, o, [](unsigned t, double rho) { return sym_limit_dominance(t, rho); });
  if (id == "fig5") return fig_vs_T(5, EnsembleKind::sym, o);
  if (id == "fig6") return fig_vs_N(6, EnsembleKind::iid, o);
  if (id == "fig7") return fig_limit(7, o, [](unsigned t, double rho) { return iid_limit_dominance(t, rho); });
  if (id == "fig8") return fig_vs_T(8, EnsembleKind::iid, o);
  if (id == "fig9") return fig_distribution(9, o);
  if (id == "fig10") return fig_distribution(10, o);
  if (id == "all") {
    std::vector<OutputFile> all;
    for (const auto& f : figure_ids()) {
      auto part = cmd_figures(f, o);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw ValidationError("unknown figure id '" + id + "' (expected fig1..fig10 or all)");
}

}  // namespace lrsep::app
