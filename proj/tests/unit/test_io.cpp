#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"

using namespace nearunit;
using fixture::reals;
using fixture::spec;

TEST_CASE("matrix JSON") {
  const Matrix m = (Matrix(2, 2) << 1, 2, 3, 4).finished();
  CHECK(matrix_to_json(m) == json::parse("[[1.0,2.0],[3.0,4.0]]"));
  CMatrix c = m.cast<cplx>();
  CHECK(matrix_to_json(c) == matrix_to_json(m));
  c(0, 1) = cplx(2.0, 0.5);
  const json jc = matrix_to_json(c);
  CHECK(jc[0][1]["re"] == 2.0);
  CHECK(jc[0][1]["im"] == 0.5);
  CHECK(jc[1][0]["im"] == 0.0);
}

TEST_CASE("EigenSpec JSON round trip") {
  const cplx z = std::polar(0.6, std::numbers::pi / 4);
  EigenSpec s = spec(4, UnitRootMode::Both, {z, std::conj(z)}, 1.0, 0.5);
  s.second = RateSchedule{2.0, 0.4};
  const json j = to_json(s);
  CHECK(j["unit_root_mode"] == "both");
  CHECK(j["d"] == 2.0);
  CHECK(j["beta"] == 0.4);
  CHECK(j["bulk"].size() == 2);
  const EigenSpec back = eigen_spec_from_json(j);
  CHECK(back.p == 4);
  CHECK(back.mode == UnitRootMode::Both);
  CHECK(back.second->c == 2.0);
  CHECK(back.bulk == s.bulk);
  CHECK(back.eps == s.eps);

  const json plain = to_json(spec(2, UnitRootMode::MinusOne, reals({0.5})));
  CHECK_FALSE(plain.contains("d"));
  CHECK(eigen_spec_from_json(json::parse(R"({"p":2,"unit_root_mode":"-1","bulk":[0.5]})")).bulk[0] == cplx(0.5));
  CHECK_THROWS_AS(eigen_spec_from_json(json::parse(R"({"unit_root_mode":"+1"})")), ConfigError);
}

TEST_CASE("theory and estimate JSON") {
  const CompanionModel m = companion_model(spec(2, UnitRootMode::PlusOne, reals({0.5})), 5000);
  const json t = to_json(theory_bundle(m, 1.0));
  for (const char* key : {"B_inv", "Gamma_n", "Gamma_limit", "A_star", "H0", "V", "W", "memory_sum", "lambda_dets"}) {
    CHECK(t.contains(key));
  }
  CHECK(t["H0"][0][0].get<double>() == doctest::Approx(2.0));
  CHECK(t["H0"][1][1].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(t["B_inv"].size() == 4);
  const json mj = to_json(m);
  CHECK(mj["pi_col"][0].get<double>() == doctest::Approx(2.0));
  CHECK(mj["theta"].size() == 2);

  auto model = std::make_shared<const CompanionModel>(m);
  Rng rng(1);
  const EstimationResult r = ols(simulate(model, NoiseModel::gaussian(1.0), InitialStatePolicy::zero(), rng));
  const json e = to_json(r);
  CHECK(e["theta_hat"].size() == 2);
  CHECK(e.contains("Z"));
  CHECK(e["S"].size() == 2);
}

TEST_CASE("experiment config and summary JSON") {
  ExperimentConfig c;
  c.n = 1000;
  c.reps = 20;
  c.mode = UnitRootMode::MinusOne;
  c.workers = 1;
  const json j = to_json(c);
  CHECK(j["lambda1_mode"] == "-1");
  CHECK(j["statistic"] == "Z2");
  const ExperimentConfig back = experiment_config_from_json(j);
  CHECK(back.n == 1000);
  CHECK(back.mode == UnitRootMode::MinusOne);
  CHECK(back.noise.kind == NoiseModel::Kind::Gaussian);

  const json s = summary_json(run_experiment(c));
  for (const char* key : {"config", "tail_freq_6p5", "ks_chi1", "quantiles", "wall_time", "histogram", "retries"}) {
    CHECK(s.contains(key));
  }
  CHECK(s["quantiles"][0].contains("prob"));
  CHECK(s["quantiles"][0].contains("value"));
  CHECK(s["histogram"]["counts"].size() == 61);
  CHECK(s["config"]["reps"] == 20);
  CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"noise":{"param":1}})")), ConfigError);
}
