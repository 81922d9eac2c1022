#include <doctest.h>

#include <numeric>
#include <sstream>

#include "fixtures.hpp"

using namespace nearunit;

namespace {

ExperimentConfig small(Statistic stat = Statistic::Z2) {
  ExperimentConfig c;
  c.p = 3;
  c.n = 2000;
  c.reps = 64;
  c.statistic = stat;
  c.workers = 1;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("defaults are the headline configuration") {
  const ExperimentConfig c;
  CHECK(c.p == 3);
  CHECK(c.alpha == 0.5);
  CHECK(c.c == 1.0);
  CHECK(c.n == 5000);
  CHECK(c.reps == 3000);
  CHECK(c.eps == 0.1);
  CHECK(c.noise.kind == NoiseModel::Kind::Gaussian);
  CHECK(c.noise.param == 1.0);
  CHECK(c.statistic == Statistic::Z2);
}

TEST_CASE("reports are identical across worker counts") {
  for (Statistic stat : {Statistic::Z2, Statistic::RealVector, Statistic::ComplexScalar}) {
    ExperimentConfig serial = small(stat);
    ExperimentConfig parallel = serial;
    parallel.workers = 4;
    const ExperimentReport a = run_experiment(serial);
    const ExperimentReport b = run_experiment(parallel);
    CHECK(a.samples == b.samples);
    CHECK(a.chi1_values == b.chi1_values);
    CHECK(a.histogram == b.histogram);
    CHECK(a.ks_chi1 == b.ks_chi1);
    CHECK(a.samples.size() == static_cast<std::size_t>(serial.reps * a.dim));
  }
  ExperimentConfig one = small();
  one.reps = 1;
  CHECK(run_experiment(one).samples == run_experiment(one).samples);
}

TEST_CASE("replications are independent of scheduling order") {
  const ExperimentConfig c = small();
  const ExperimentReport r = run_experiment(c);
  for (long i : {0L, 17L, 63L}) CHECK(run_replication(c, i).values[0] == r.samples[static_cast<std::size_t>(i)]);
}

TEST_CASE("report aggregates") {
  const ExperimentReport r = run_experiment(small());
  CHECK(r.tail_freq_6p5 >= 0.0);
  CHECK(r.tail_freq_6p5 <= 1.0);
  CHECK(r.histogram.size() == static_cast<std::size_t>(kHistogramBins + 1));
  CHECK(std::accumulate(r.histogram.begin(), r.histogram.end(), 0L) == r.config.reps);
  CHECK(r.quantile_probs.size() == r.quantiles.size());
  CHECK(std::is_sorted(r.quantiles.begin(), r.quantiles.end()));
  CHECK(r.sample_cov.rows() == 1);
  CHECK(r.wall_time >= 0.0);

  const ExperimentReport v = run_experiment(small(Statistic::RealVector));
  CHECK(v.dim == 3);
  CHECK(v.sample_cov.rows() == 3);
  CHECK(v.sample_cov.isApprox(v.sample_cov.transpose()));
}

TEST_CASE("fixed bulk and two unit roots") {
  ExperimentConfig c = small(Statistic::ComplexScalar);
  c.mode = UnitRootMode::Both;
  c.p = 3;
  const ExperimentReport r = run_experiment(c);
  CHECK(r.chi1_values.size() == 64);

  ExperimentConfig f = small(Statistic::ComplexScalar);
  f.fixed_bulk = std::vector<cplx>{std::polar(0.6, 0.8), std::polar(0.6, -0.8)};
  CHECK_NOTHROW(run_experiment(f));
}

TEST_CASE("config validation") {
  ExperimentConfig c = small();
  c.reps = 0;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c = small();
  c.mode = UnitRootMode::Both;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c = small();
  c.noise = NoiseModel::student_t(2.3);
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c = small();
  c.noise = NoiseModel::dirac();
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c = small();
  c.alpha = 1.2;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c = small();
  c.fixed_bulk = std::vector<cplx>{cplx(0.99), cplx(0.2)};
  CHECK_THROWS_AS(run_experiment(c), SpectrumError);
  c = small(Statistic::RealVector);
  c.fixed_bulk = std::vector<cplx>{std::polar(0.6, 0.8), std::polar(0.6, -0.8)};
  // the vector statistic cannot be formed for a complex spectrum: every retry fails
  CHECK_THROWS_AS(run_experiment(c), NumericalError);
}

TEST_CASE("sweep") {
  const std::vector<ExperimentConfig> configs{small(), small()};
  const auto entries = sweep(configs);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].report->samples == entries[1].report->samples);

  ExperimentConfig broken = small();
  broken.alpha = 2.0;
  const std::vector<ExperimentConfig> mixed{broken, small()};
  const auto m = sweep(mixed);
  CHECK_FALSE(m[0].report.has_value());
  CHECK_FALSE(m[0].error.empty());
  CHECK(m[1].report.has_value());
  CHECK_THROWS_AS(sweep({}), ConfigError);
}

TEST_CASE("headline grids") {
  const auto h = histogram_grid(42);
  CHECK(h.size() == 6);
  const auto lo = alpha_grid_low(42);
  const auto hi = alpha_grid_high(42);
  CHECK(lo.size() == 8);
  CHECK(hi.size() == 8);
  for (const auto& c : lo) {
    CHECK(c.n == 5000);
    CHECK(c.reps == 3000);
    CHECK(c.p == 3);
  }
}

TEST_CASE("report CSV schema") {
  std::vector<ExperimentReport> reports{run_experiment(small())};
  std::ostringstream os;
  write_reports_csv(os, reports);
  auto rows = lines(os.str());
  REQUIRE(rows.size() == 65);
  CHECK(rows[0] == "rep,p,alpha,c,n,lambda1_mode,statistic,value");
  CHECK(rows[1].rfind("0,3,0.5,1,2000,+1,Z2,", 0) == 0);

  reports.push_back(run_experiment(small(Statistic::RealVector)));
  std::ostringstream ov;
  write_reports_csv(ov, reports);
  rows = lines(ov.str());
  CHECK(rows[0] == "rep,p,alpha,c,n,lambda1_mode,statistic,value,coord");
  CHECK(rows.size() == 1 + 64 + 64 * 3);
  CHECK(rows[1].back() == ',');
  CHECK(rows[65].substr(rows[65].size() - 2) == ",0");
  CHECK(rows[67].substr(rows[67].size() - 2) == ",2");

  // values round-trip exactly
  const std::string& first = lines(os.str())[1];
  CHECK(std::stod(first.substr(first.rfind(',') + 1)) == reports[0].samples[0]);
}

TEST_CASE("statistic names") {
  CHECK(parse_statistic("Z2") == Statistic::Z2);
  CHECK(parse_statistic("RealVector") == Statistic::RealVector);
  CHECK(parse_statistic("ComplexScalar") == Statistic::ComplexScalar);
  CHECK_THROWS_AS(parse_statistic("T"), ConfigError);
}
