#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nearunit/nearunit.hpp"

#ifndef NEARUNIT_VERSION
#define NEARUNIT_VERSION "0.0.0"
#endif

namespace nearunit::cli {

namespace {

// Accepts plain reals and simple fractions such as "1/3".
double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double x = std::stod(text, &used);
      if (used == text.size()) return x;
    } else {
      const std::string num = text.substr(0, slash);
      const std::string den = text.substr(slash + 1);
      std::size_t used_den = 0;
      const double a = std::stod(num, &used);
      const double b = std::stod(den, &used_den);
      if (used == num.size() && used_den == den.size() && b != 0.0) return a / b;
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError("not a number: '" + text + "'");
}

// "re" or "re:im".
cplx parse_complex(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {parse_real(text), 0.0};
  return {parse_real(text.substr(0, colon)), parse_real(text.substr(colon + 1))};
}

struct ModelFlags {
  int p = 3;
  double alpha = 0.5;
  double c = 1.0;
  long n = 5000;
  std::string lambda1 = "+1";
  std::vector<std::string> bulk;
  std::optional<double> d;
  std::optional<double> beta;
  double eps = 0.1;
  std::uint64_t seed = 42;
};

struct NoiseFlags {
  std::string kind = "gaussian";
  std::optional<double> param;
  std::string init = "zero";
  std::vector<double> phi0;
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--p", f.p, "autoregressive order")->capture_default_str()->check(CLI::Range(1, kMaxOrder));
  app->add_option("--alpha", f.alpha, "rate exponent, v_n = n^alpha")->capture_default_str();
  app->add_option("--c", f.c, "drift constant, rho_n = 1 - c / v_n")->capture_default_str();
  app->add_option("--n", f.n, "row index of the triangular array (path length)")->capture_default_str();
  app->add_option("--lambda1", f.lambda1, "limit unit root: +1, -1 or both")->capture_default_str();
  app->add_option("--bulk", f.bulk,
                  "bulk eigenvalues, comma separated, complex as re:im (default: drawn from the seed)")
      ->delimiter(',');
  app->add_option("--d", f.d, "drift constant of lambda_{n,2} under both (default: c)");
  app->add_option("--beta", f.beta, "rate exponent of lambda_{n,2} under both (default: alpha)");
  app->add_option("--eps", f.eps, "margin of the bulk sampling interval")->capture_default_str();
  app->add_option("--seed", f.seed, "master seed")->capture_default_str();
}

void add_noise_flags(CLI::App* app, NoiseFlags& f) {
  app->add_option("--noise", f.kind, "innovation law: gaussian, laplace, student, rademacher, dirac")
      ->capture_default_str();
  app->add_option("--noise-param", f.param,
                  "variance (gaussian), scale (laplace, rademacher) or degrees of freedom (student); default 1, "
                  "or 5 for student");
  app->add_option("--init", f.init, "initial state: zero, stationary or fixed")->capture_default_str();
  app->add_option("--phi0", f.phi0, "fixed initial state X_0, X_-1, ..., comma separated")->delimiter(',');
}

UnitRootMode mode_of(const ModelFlags& f) { return parse_unit_root_mode(f.lambda1); }

std::optional<RateSchedule> second_of(const ModelFlags& f) {
  if (mode_of(f) != UnitRootMode::Both) {
    if (f.d || f.beta) throw ConfigError("--d and --beta only apply with --lambda1 both");
    return std::nullopt;
  }
  return RateSchedule{f.d.value_or(f.c), f.beta.value_or(f.alpha)};
}

std::optional<std::vector<cplx>> explicit_bulk(const ModelFlags& f) {
  if (f.bulk.empty()) return std::nullopt;
  std::vector<cplx> bulk;
  for (const std::string& s : f.bulk) bulk.push_back(parse_complex(s));
  return bulk;
}

NoiseModel noise_of(const NoiseFlags& f) {
  NoiseModel noise;
  noise.kind = parse_noise_kind(f.kind);
  noise.param = f.param.value_or(noise.kind == NoiseModel::Kind::StudentT ? 5.0 : 1.0);
  if (noise.kind == NoiseModel::Kind::Dirac) noise.param = 0.0;
  noise.validate();
  return noise;
}

InitialStatePolicy init_of(const NoiseFlags& f, int p) {
  if (f.init == "zero") {
    if (!f.phi0.empty()) throw ConfigError("--phi0 needs --init fixed");
    return InitialStatePolicy::zero();
  }
  if (f.init == "stationary") {
    if (!f.phi0.empty()) throw ConfigError("--phi0 needs --init fixed");
    return InitialStatePolicy::stationary();
  }
  if (f.init == "fixed") {
    if (static_cast<int>(f.phi0.size()) != p) {
      throw ConfigError("--phi0 must list exactly p = " + std::to_string(p) + " values");
    }
    return InitialStatePolicy::fixed_vector(Eigen::Map<const Vector>(f.phi0.data(), p));
  }
  throw ConfigError("unknown initial state '" + f.init + "' (expected zero, stationary or fixed)");
}

// Builds the spec for a single model. Without --bulk the bulk is drawn from
// `rng` exactly as an experiment replication would.
EigenSpec spec_of(const ModelFlags& f, Rng& rng) {
  EigenSpec spec;
  spec.p = f.p;
  spec.mode = mode_of(f);
  spec.schedule = RateSchedule{f.c, f.alpha};
  spec.second = second_of(f);
  spec.eps = f.eps;
  spec.schedule.validate_at(f.n);
  if (spec.second) spec.second->validate_at(f.n);
  if (auto bulk = explicit_bulk(f)) {
    spec.bulk = std::move(*bulk);
  } else if (spec.bulk_count() > 0) {
    double floor = spec.schedule.rho(f.n);
    if (spec.second) floor = std::min(floor, spec.second->rho(f.n));
    if (!(f.eps > 0.0 && f.eps < floor)) throw ConfigError("--eps must lie in (0, rho_n)");
    const std::vector<double> drawn = sample_bulk_eigenvalues(rng, spec.bulk_count() + 1, floor, f.eps);
    spec.bulk.assign(drawn.begin(), drawn.end());
  }
  return spec;
}

ExperimentConfig experiment_of(const ModelFlags& f, const NoiseFlags& nf, long reps, const std::string& statistic,
                               int workers) {
  ExperimentConfig config;
  config.p = f.p;
  config.alpha = f.alpha;
  config.c = f.c;
  config.n = f.n;
  config.reps = reps;
  config.mode = mode_of(f);
  config.second = second_of(f);
  config.eps = f.eps;
  config.seed = f.seed;
  config.noise = noise_of(nf);
  config.init = init_of(nf, f.p);
  config.statistic = parse_statistic(statistic);
  config.fixed_bulk = explicit_bulk(f);
  config.workers = workers;
  return config;
}

// Opens --out or falls back to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_simulate(const ModelFlags& f, const NoiseFlags& nf, const std::string& out_path, std::ostream& out) {
  Rng rng = substream(f.seed, 0);
  const NoiseModel noise = noise_of(nf);
  const InitialStatePolicy init = init_of(nf, f.p);
  auto model = std::make_shared<const CompanionModel>(companion_model(spec_of(f, rng), f.n));
  const TriangularPath path = simulate(model, noise, init, rng);
  Sink sink(out_path, out);
  write_path_csv(sink.get(), path);
  return kExitOk;
}

int cmd_estimate(const ModelFlags& f, const NoiseFlags& nf, const std::string& in_path, bool plugin,
                 std::ostream& out) {
  json doc;
  if (!in_path.empty()) {
    std::ifstream in(in_path);
    if (!in) throw Error("cannot open '" + in_path + "'");
    const Vector series = read_path_csv(in);
    const EstimationResult fit = ols(path_from_series(series, f.p));
    doc["estimate"] = to_json(fit);
  } else {
    Rng rng = substream(f.seed, 0);
    const NoiseModel noise = noise_of(nf);
    auto model = std::make_shared<const CompanionModel>(companion_model(spec_of(f, rng), f.n));
    const TriangularPath path = simulate(model, noise, init_of(nf, f.p), rng);
    const EstimationResult fit = ols(path);
    doc["model"] = to_json(*model);
    doc["estimate"] = to_json(fit);
    doc["decomposition_residual"] = decomposition_residual(fit, *model);
    doc["scalar_statistic"] = scalar_statistic_complex(fit, *model);
    if (model->has_real_spectrum()) doc["normalized_error"] = vector_to_json(normalized_error_real(fit, *model));
    if (model->mode != UnitRootMode::Both) {
      doc["z_squared"] = z_squared(fit, *model);
      if (plugin) doc["z_squared_plugin"] = z_squared_plugin(fit, *model);
    }
  }
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_theory(const ModelFlags& f, double sigma2, std::ostream& out) {
  if (!(sigma2 > 0.0)) throw ConfigError("--sigma2 must be positive");
  Rng rng = substream(f.seed, 0);
  const CompanionModel model = companion_model(spec_of(f, rng), f.n);
  json doc{{"model", to_json(model)}, {"theory", to_json(theory_bundle(model, sigma2))}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_experiment(const ExperimentConfig& config, const std::string& out_path, std::ostream& out,
                   std::ostream& err) {
  const ExperimentReport report = run_experiment(config);
  if (!out_path.empty()) {
    Sink sink(out_path, out);
    write_reports_csv(sink.get(), std::span<const ExperimentReport>(&report, 1));
  }
  err << "experiment: " << report.config.reps << " replications in " << report.wall_time << " s, " << report.retries
      << " retries\n";
  out << summary_json(report).dump(2) << '\n';
  return kExitOk;
}

int cmd_sweep(const ModelFlags& base, const NoiseFlags& nf, long reps, const std::string& statistic, int workers,
              const std::vector<std::string>& alphas, const std::vector<int>& ps,
              const std::vector<std::string>& modes, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  std::vector<ExperimentConfig> configs;
  for (const std::string& mode : modes) {
    for (int p : ps) {
      for (const std::string& a : alphas) {
        ModelFlags f = base;
        f.p = p;
        f.alpha = parse_real(a);
        f.lambda1 = mode;
        configs.push_back(experiment_of(f, nf, reps, statistic, workers));
        configs.back().validate();
      }
    }
  }
  const std::vector<SweepEntry> entries = sweep(configs);

  std::vector<ExperimentReport> reports;
  json doc = json::array();
  bool failed = false;
  for (const SweepEntry& e : entries) {
    if (e.report) {
      reports.push_back(*e.report);
      doc.push_back(summary_json(*e.report));
    } else {
      failed = true;
      err << "sweep: configuration failed: " << e.error << '\n';
      doc.push_back(json{{"config", to_json(e.config)}, {"error", e.error}});
    }
  }
  if (!out_path.empty()) {
    Sink sink(out_path, out);
    write_reports_csv(sink.get(), reports);
  }
  out << doc.dump(2) << '\n';
  return failed ? kExitRuntime : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and inference for nearly-unstable AR(p) triangular arrays", "nearunit"};
  app.set_version_flag("--version", std::string(NEARUNIT_VERSION));
  app.require_subcommand(1);

  ModelFlags model;
  NoiseFlags noise;
  std::string out_path;
  std::string in_path;
  double sigma2 = 1.0;
  bool plugin = false;
  long reps = 3000;
  std::string statistic = "Z2";
  int workers = 0;
  std::vector<std::string> alphas{"1/5", "1/4", "1/3", "1/2", "2/3", "3/4", "4/5"};
  std::vector<int> ps{3};
  std::vector<std::string> modes{"-1", "+1"};

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate one path and write it as k,x CSV");
  add_model_flags(simulate_cmd, model);
  add_noise_flags(simulate_cmd, noise);
  simulate_cmd->add_option("--out", out_path, "output CSV (default: stdout)");

  auto* estimate_cmd = app.add_subcommand("estimate", "OLS fit of a path read with --in or simulated from the flags");
  add_model_flags(estimate_cmd, model);
  add_noise_flags(estimate_cmd, noise);
  estimate_cmd->add_option("--in", in_path, "k,x CSV to fit; the first p values form the initial state");
  estimate_cmd->add_flag("--plugin", plugin, "also report Z^2 with pi_11 and rho_n estimated from the fit");

  auto* theory_cmd = app.add_subcommand("theory", "print the model and its theoretical matrices as JSON");
  add_model_flags(theory_cmd, model);
  theory_cmd->add_option("--sigma2", sigma2, "innovation variance")->capture_default_str();

  auto add_run_flags = [&](CLI::App* sub) {
    add_model_flags(sub, model);
    add_noise_flags(sub, noise);
    sub->add_option("--reps", reps, "replications")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--statistic", statistic, "Z2, RealVector or ComplexScalar")->capture_default_str();
    sub->add_option("--workers", workers, "worker threads (default: available parallelism)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_path, "report CSV");
  };

  auto* experiment_cmd = app.add_subcommand("experiment", "Monte Carlo run; summary JSON on stdout");
  add_run_flags(experiment_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "grid of experiments over alpha, p and lambda1");
  add_run_flags(sweep_cmd);
  sweep_cmd->add_option("--alphas", alphas, "alpha grid, fractions allowed")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--ps", ps, "order grid")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--lambda1s", modes, "unit-root grid")->delimiter(',')->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(model, noise, out_path, out);
    if (*estimate_cmd) return cmd_estimate(model, noise, in_path, plugin, out);
    if (*theory_cmd) return cmd_theory(model, sigma2, out);
    if (*experiment_cmd) {
      return cmd_experiment(experiment_of(model, noise, reps, statistic, workers), out_path, out, err);
    }
    if (*sweep_cmd) {
      return cmd_sweep(model, noise, reps, statistic, workers, alphas, ps, modes, out_path, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace nearunit::cli
