#include "nearunit/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "nearunit/asymptotics.hpp"
#include "nearunit/errors.hpp"
#include "nearunit/estimation.hpp"
#include "nearunit/linalg.hpp"

namespace nearunit {

namespace {

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<cplx> draw_bulk(const ExperimentConfig& config, Rng& rng) {
  if (config.fixed_bulk) return *config.fixed_bulk;
  const RateSchedule first{config.c, config.alpha};
  double floor = first.rho(config.n);
  int count = config.p;  // sample_bulk_eigenvalues returns count - 1 values
  if (config.mode == UnitRootMode::Both) {
    const RateSchedule second = config.second.value_or(first);
    floor = std::min(floor, second.rho(config.n));
    count = config.p - 1;
  }
  const std::vector<double> real = sample_bulk_eigenvalues(rng, count, floor, config.eps);
  return {real.begin(), real.end()};
}

Replication replicate_once(const ExperimentConfig& config, Rng& rng) {
  auto model = std::make_shared<const CompanionModel>(companion_model(config.spec_with_bulk(draw_bulk(config, rng)), config.n));
  const TriangularPath path = simulate(model, config.noise, config.init, rng);
  const EstimationResult fit = ols(path);
  if (fit.degenerate) throw NumericalError("degenerate Gram matrix");

  Replication out;
  switch (config.statistic) {
    case Statistic::Z2: {
      const double z2 = z_squared(fit, *model);
      out.values = {z2};
      out.chi1 = z2;
      break;
    }
    case Statistic::ComplexScalar: {
      const double s = scalar_statistic_complex(fit, *model);
      out.values = {s};
      out.chi1 = s * s / scalar_statistic_variance(*model);
      break;
    }
    case Statistic::RealVector: {
      const Vector v = normalized_error_real(fit, *model);
      out.values.assign(v.data(), v.data() + v.size());
      // H_0 is block diagonal with leading entry pi_11^2 / 2.
      const double pi11 = model->pi11();
      out.chi1 = v(0) * v(0) * pi11 * pi11 / 2.0;
      break;
    }
  }
  for (double x : out.values) {
    if (!std::isfinite(x)) throw NumericalError("non-finite statistic");
  }
  return out;
}

}  // namespace

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::Z2:
      return "Z2";
    case Statistic::RealVector:
      return "RealVector";
    case Statistic::ComplexScalar:
      return "ComplexScalar";
  }
  return "?";
}

Statistic parse_statistic(std::string_view text) {
  if (text == "Z2" || text == "z2") return Statistic::Z2;
  if (text == "RealVector" || text == "real-vector" || text == "vector") return Statistic::RealVector;
  if (text == "ComplexScalar" || text == "complex-scalar" || text == "scalar") return Statistic::ComplexScalar;
  throw ConfigError("unknown statistic '" + std::string(text) + "' (expected Z2, RealVector or ComplexScalar)");
}

void ExperimentConfig::validate() const {
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (!(eps > 0.0)) throw ConfigError("bulk sampling margin eps must be positive");
  if (mode == UnitRootMode::Both && statistic == Statistic::Z2) {
    throw ConfigError("the Z2 statistic needs a single unit root (lambda1 = +1 or -1)");
  }
  noise.validate(moment_margin);
  if (noise.kind == NoiseModel::Kind::Dirac) throw ConfigError("experiments need non-degenerate noise");
  const RateSchedule first{c, alpha};
  first.validate_at(n);
  if (second) second->validate_at(n);
  if (fixed_bulk) {
    // Surfaces spectrum errors before any work is scheduled.
    (void)eigenvalues_at(spec_with_bulk(*fixed_bulk), n);
  } else {
    double floor = first.rho(n);
    if (mode == UnitRootMode::Both) floor = std::min(floor, second.value_or(first).rho(n));
    if (!(eps < floor)) throw ConfigError("bulk sampling margin eps must be below the spectral radius");
    if (p < 1 || p > kMaxOrder) throw ConfigError("order p out of range");
  }
}

EigenSpec ExperimentConfig::spec_with_bulk(std::vector<cplx> bulk) const {
  EigenSpec spec;
  spec.p = p;
  spec.mode = mode;
  spec.schedule = RateSchedule{c, alpha};
  if (mode == UnitRootMode::Both) spec.second = second.value_or(spec.schedule);
  spec.bulk = std::move(bulk);
  spec.eps = eps;
  return spec;
}

Replication run_replication(const ExperimentConfig& config, long index) {
  std::string last_error;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    Rng rng = substream(config.seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(attempt));
    try {
      Replication r = replicate_once(config, rng);
      r.attempts = attempt + 1;
      return r;
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  throw NumericalError("replication " + std::to_string(index) + " failed after " + std::to_string(kMaxRetries) +
                       " retries: " + last_error);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const auto reps = static_cast<std::size_t>(config.reps);
  std::vector<Replication> results(reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        results[r] = run_replication(config, static_cast<long>(r));
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = reps;
      }
    }
  };

  unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                        : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(reps));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentReport rep;
  rep.config = config;
  rep.dim = config.statistic == Statistic::RealVector ? config.p : 1;
  rep.samples.reserve(reps * static_cast<std::size_t>(rep.dim));
  rep.chi1_values.reserve(reps);
  rep.histogram.assign(kHistogramBins + 1, 0);
  long above = 0;
  for (const Replication& r : results) {
    rep.samples.insert(rep.samples.end(), r.values.begin(), r.values.end());
    rep.chi1_values.push_back(r.chi1);
    rep.retries += r.attempts - 1;
    if (r.chi1 > kTailThreshold) ++above;
    if (r.chi1 >= kHistogramMax) {
      ++rep.histogram.back();
    } else {
      const auto bin = static_cast<std::size_t>(std::max(0.0, r.chi1) / kHistogramMax * kHistogramBins);
      ++rep.histogram[std::min<std::size_t>(bin, kHistogramBins - 1)];
    }
  }
  rep.tail_freq_6p5 = static_cast<double>(above) / static_cast<double>(reps);
  rep.ks_chi1 = ks_distance(rep.chi1_values, [](double x) { return chi1_cdf(std::max(0.0, x)); });

  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> data(
      rep.samples.data(), static_cast<Eigen::Index>(reps), rep.dim);
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Matrix centered = data.rowwise() - mean;
  rep.sample_cov = reps > 1 ? Matrix(centered.transpose() * centered / static_cast<double>(reps - 1))
                            : Matrix::Zero(rep.dim, rep.dim);

  rep.quantile_probs = {0.5, 0.9, 0.95, 0.99};
  for (double prob : rep.quantile_probs) rep.quantiles.push_back(quantile(rep.chi1_values, prob));
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<SweepEntry> sweep(std::span<const ExperimentConfig> configs) {
  if (configs.empty()) throw ConfigError("sweep needs at least one configuration");
  std::vector<SweepEntry> out;
  out.reserve(configs.size());
  for (const ExperimentConfig& config : configs) {
    SweepEntry entry{config, std::nullopt, {}};
    try {
      entry.report = run_experiment(config);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

namespace {

ExperimentConfig headline(int p, double alpha, UnitRootMode mode, std::uint64_t seed) {
  ExperimentConfig c;
  c.p = p;
  c.alpha = alpha;
  c.c = 1.0;
  c.n = 5000;
  c.reps = 3000;
  c.mode = mode;
  c.eps = 0.1;
  c.noise = NoiseModel::gaussian(1.0);
  c.seed = seed;
  c.statistic = Statistic::Z2;
  return c;
}

std::vector<ExperimentConfig> alpha_grid(std::initializer_list<double> alphas, std::uint64_t seed) {
  std::vector<ExperimentConfig> out;
  for (UnitRootMode mode : {UnitRootMode::MinusOne, UnitRootMode::PlusOne}) {
    for (double alpha : alphas) out.push_back(headline(3, alpha, mode, seed));
  }
  return out;
}

}  // namespace

std::vector<ExperimentConfig> histogram_grid(std::uint64_t seed) {
  std::vector<ExperimentConfig> out;
  for (UnitRootMode mode : {UnitRootMode::MinusOne, UnitRootMode::PlusOne}) {
    for (int p : {2, 3, 4}) out.push_back(headline(p, 0.5, mode, seed));
  }
  return out;
}

std::vector<ExperimentConfig> alpha_grid_low(std::uint64_t seed) {
  return alpha_grid({1.0 / 5, 1.0 / 4, 1.0 / 3, 1.0 / 2}, seed);
}

std::vector<ExperimentConfig> alpha_grid_high(std::uint64_t seed) {
  return alpha_grid({1.0 / 2, 2.0 / 3, 3.0 / 4, 4.0 / 5}, seed);
}

void write_reports_csv(std::ostream& os, std::span<const ExperimentReport> reports) {
  const bool with_coord = std::any_of(reports.begin(), reports.end(),
                                      [](const ExperimentReport& r) { return r.dim > 1; });
  os << "rep,p,alpha,c,n,lambda1_mode,statistic,value" << (with_coord ? ",coord\n" : "\n");
  for (const ExperimentReport& r : reports) {
    const std::string prefix_tail = "," + std::to_string(r.config.p) + "," + shortest(r.config.alpha) + "," +
                                    shortest(r.config.c) + "," + std::to_string(r.config.n) + "," +
                                    std::string(to_string(r.config.mode)) + "," +
                                    std::string(to_string(r.config.statistic)) + ",";
    const auto reps = static_cast<long>(r.chi1_values.size());
    for (long i = 0; i < reps; ++i) {
      for (int d = 0; d < r.dim; ++d) {
        os << i << prefix_tail << shortest(r.samples[static_cast<std::size_t>(i * r.dim + d)]);
        if (with_coord) {
          os << ',';
          if (r.dim > 1) os << d;
        }
        os << '\n';
      }
    }
  }
}

}  // namespace nearunit
