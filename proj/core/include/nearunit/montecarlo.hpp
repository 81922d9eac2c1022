#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nearunit/process.hpp"
#include "nearunit/spectrum.hpp"
#include "nearunit/types.hpp"

namespace nearunit {

enum class Statistic {
  Z2,             // chi-square statistic of the leading weighted error
  RealVector,     // sqrt(n) V^{-1/2} P^T (theta_hat - theta), p coordinates
  ComplexScalar,  // sqrt(n v_n) <L_n, theta_hat - theta>
};

std::string_view to_string(Statistic s);
Statistic parse_statistic(std::string_view text);

struct ExperimentConfig {
  int p = 3;
  double alpha = 0.5;
  double c = 1.0;
  long n = 5000;
  long reps = 3000;
  UnitRootMode mode = UnitRootMode::PlusOne;
  double eps = 0.1;
  NoiseModel noise = NoiseModel::gaussian(1.0);
  std::uint64_t seed = 42;
  Statistic statistic = Statistic::Z2;
  InitialStatePolicy init{};
  // Rate schedule of lambda_{n,2} under two unit roots; defaults to (c, alpha).
  std::optional<RateSchedule> second{};
  // Fixed bulk eigenvalues; when empty, a fresh real bulk is drawn per replication.
  std::optional<std::vector<cplx>> fixed_bulk{};
  // Worker threads; 0 means std::thread::hardware_concurrency().
  int workers = 0;
  // nu in the 2 + nu moment condition imposed on the noise law.
  double moment_margin = 0.5;

  void validate() const;
  EigenSpec spec_with_bulk(std::vector<cplx> bulk) const;
};

inline constexpr int kMaxRetries = 10;
inline constexpr int kHistogramBins = 60;
inline constexpr double kHistogramMax = 12.0;
inline constexpr double kTailThreshold = 6.5;

struct ExperimentReport {
  ExperimentConfig config;
  int dim = 1;                       // values per replication (p for RealVector)
  std::vector<double> samples;       // reps * dim, replication-major
  std::vector<double> chi1_values;   // one chi^2_1-referenced value per replication
  double tail_freq_6p5 = 0.0;        // fraction of chi1_values above 6.5
  double ks_chi1 = 0.0;              // KS distance of chi1_values to chi^2_1
  std::vector<long> histogram;       // 60 bins on [0, 12] followed by the overflow count
  Matrix sample_cov;                 // dim x dim
  std::vector<double> quantile_probs;
  std::vector<double> quantiles;     // of chi1_values
  long retries = 0;                  // replications redrawn after a failure
  double wall_time = 0.0;            // seconds
};

// Per-replication outcome, exposed for tests and custom drivers.
struct Replication {
  std::vector<double> values;
  double chi1 = 0.0;
  int attempts = 1;
};

// Runs replication `index` with sub-stream (seed, index, attempt), redrawing
// up to kMaxRetries times on library errors. Throws Error once retries run out.
Replication run_replication(const ExperimentConfig& config, long index);

ExperimentReport run_experiment(const ExperimentConfig& config);

struct SweepEntry {
  ExperimentConfig config;
  std::optional<ExperimentReport> report;
  std::string error;
};

// Runs each configuration independently; a failure is recorded on its entry
// and the sweep continues.
std::vector<SweepEntry> sweep(std::span<const ExperimentConfig> configs);

// Grids of the headline study: all use c = 1, n = 5000, 3000 replications.
std::vector<ExperimentConfig> histogram_grid(std::uint64_t seed);                 // p in {2,3,4} x lambda_1 in {-1,+1}, alpha = 1/2
std::vector<ExperimentConfig> alpha_grid_low(std::uint64_t seed);                 // p = 3, alpha in {1/5,1/4,1/3,1/2}
std::vector<ExperimentConfig> alpha_grid_high(std::uint64_t seed);                // p = 3, alpha in {1/2,2/3,3/4,4/5}

// Report CSV: header rep,p,alpha,c,n,lambda1_mode,statistic,value, plus a
// trailing coord column when any report holds the vector statistic.
void write_reports_csv(std::ostream& os, std::span<const ExperimentReport> reports);

}  // namespace nearunit
