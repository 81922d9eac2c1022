#include "nearunit/io.hpp"

#include "nearunit/errors.hpp"

namespace nearunit {

namespace {

json complex_to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at("re").get<double>(), j.value("im", 0.0)};
}

template <typename Fn>
json rows(Eigen::Index r, Eigen::Index c, Fn&& entry) {
  json out = json::array();
  for (Eigen::Index i = 0; i < r; ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < c; ++k) row.push_back(entry(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  return rows(m.rows(), m.cols(), [&](Eigen::Index i, Eigen::Index k) { return json(m(i, k)); });
}

json matrix_to_json(const CMatrix& m) {
  if (is_real(m)) return matrix_to_json(Matrix(m.real()));
  return rows(m.rows(), m.cols(), [&](Eigen::Index i, Eigen::Index k) { return complex_to_json(m(i, k)); });
}

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json vector_to_json(const CVector& v) {
  if (is_real(CMatrix(v))) return vector_to_json(Vector(v.real()));
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

json to_json(const EigenSpec& spec) {
  json j{{"p", spec.p},
         {"unit_root_mode", std::string(to_string(spec.mode))},
         {"c", spec.schedule.c},
         {"alpha", spec.schedule.alpha},
         {"eps", spec.eps}};
  if (spec.mode == UnitRootMode::Both && spec.second) {
    j["d"] = spec.second->c;
    j["beta"] = spec.second->alpha;
  }
  json bulk = json::array();
  for (const cplx& z : spec.bulk) bulk.push_back(complex_to_json(z));
  j["bulk"] = std::move(bulk);
  return j;
}

EigenSpec eigen_spec_from_json(const json& j) {
  try {
    EigenSpec spec;
    spec.p = j.at("p").get<int>();
    spec.mode = parse_unit_root_mode(j.at("unit_root_mode").get<std::string>());
    spec.schedule.c = j.value("c", 1.0);
    spec.schedule.alpha = j.value("alpha", 0.5);
    spec.eps = j.value("eps", 0.1);
    if (spec.mode == UnitRootMode::Both) {
      spec.second = RateSchedule{j.value("d", spec.schedule.c), j.value("beta", spec.schedule.alpha)};
    }
    for (const json& z : j.value("bulk", json::array())) spec.bulk.push_back(complex_from_json(z));
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed eigen spec JSON: ") + e.what());
  }
}

json to_json(const CompanionModel& m) {
  return json{{"n", m.n},
              {"p", m.p},
              {"unit_root_mode", std::string(to_string(m.mode))},
              {"c", m.c},
              {"v_n", m.v},
              {"rho_n", m.rho},
              {"theta", vector_to_json(m.theta)},
              {"A", matrix_to_json(m.A)},
              {"eigenvalues", vector_to_json(m.eigenvalues)},
              {"limit_eigenvalues", vector_to_json(m.limit_eigenvalues)},
              {"P", matrix_to_json(m.P)},
              {"P_inv", matrix_to_json(m.P_inv)},
              {"pi_col", vector_to_json(m.pi_col)}};
}

json to_json(const TheoryBundle& t) {
  return json{{"B_inv", matrix_to_json(t.B_inv)},
              {"Gamma_n", matrix_to_json(t.Gamma_n)},
              {"Gamma_limit", matrix_to_json(t.Gamma_limit)},
              {"A_star", matrix_to_json(t.A_star)},
              {"H0", matrix_to_json(t.H0)},
              {"V", matrix_to_json(t.V)},
              {"W", matrix_to_json(t.W)},
              {"memory_sum", matrix_to_json(t.memory_sum)},
              {"lambda_dets", t.lambda_dets}};
}

json to_json(const EstimationResult& r) {
  json j{{"n", r.n},
         {"p", r.p},
         {"theta_hat", vector_to_json(r.theta_hat)},
         {"S", matrix_to_json(r.S)},
         {"S_full", matrix_to_json(r.S_full)},
         {"ridge_used", r.ridge_used},
         {"normal_residual", r.normal_residual},
         {"degenerate", r.degenerate}};
  if (r.has_noise) {
    j["Z"] = matrix_to_json(r.Z);
    j["L_noise"] = matrix_to_json(r.L_noise);
    j["T_iso"] = matrix_to_json(r.T_iso);
  }
  return j;
}

json to_json(const ExperimentConfig& c) {
  json j{{"p", c.p},
         {"alpha", c.alpha},
         {"c", c.c},
         {"n", c.n},
         {"reps", c.reps},
         {"lambda1_mode", std::string(to_string(c.mode))},
         {"eps", c.eps},
         {"noise", {{"kind", std::string(to_string(c.noise.kind))}, {"param", c.noise.param}}},
         {"seed", c.seed},
         {"statistic", std::string(to_string(c.statistic))}};
  if (c.second) {
    j["d"] = c.second->c;
    j["beta"] = c.second->alpha;
  }
  if (c.fixed_bulk) {
    json bulk = json::array();
    for (const cplx& z : *c.fixed_bulk) bulk.push_back(complex_to_json(z));
    j["bulk"] = std::move(bulk);
  }
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  try {
    ExperimentConfig c;
    c.p = j.value("p", c.p);
    c.alpha = j.value("alpha", c.alpha);
    c.c = j.value("c", c.c);
    c.n = j.value("n", c.n);
    c.reps = j.value("reps", c.reps);
    if (j.contains("lambda1_mode")) c.mode = parse_unit_root_mode(j.at("lambda1_mode").get<std::string>());
    c.eps = j.value("eps", c.eps);
    if (j.contains("noise")) {
      c.noise.kind = parse_noise_kind(j.at("noise").at("kind").get<std::string>());
      c.noise.param = j.at("noise").value("param", 1.0);
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("statistic")) c.statistic = parse_statistic(j.at("statistic").get<std::string>());
    if (j.contains("d") || j.contains("beta")) c.second = RateSchedule{j.value("d", c.c), j.value("beta", c.alpha)};
    if (j.contains("bulk")) {
      std::vector<cplx> bulk;
      for (const json& z : j.at("bulk")) bulk.push_back(complex_from_json(z));
      c.fixed_bulk = std::move(bulk);
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed experiment config JSON: ") + e.what());
  }
}

json summary_json(const ExperimentReport& r) {
  json quantiles = json::array();
  for (std::size_t i = 0; i < r.quantiles.size(); ++i) {
    quantiles.push_back(json{{"prob", r.quantile_probs[i]}, {"value", r.quantiles[i]}});
  }
  return json{{"config", to_json(r.config)},
              {"tail_freq_6p5", r.tail_freq_6p5},
              {"ks_chi1", r.ks_chi1},
              {"quantiles", std::move(quantiles)},
              {"histogram", {{"bins", kHistogramBins}, {"max", kHistogramMax}, {"counts", r.histogram}}},
              {"sample_cov", matrix_to_json(r.sample_cov)},
              {"retries", r.retries},
              {"wall_time", r.wall_time}};
}

}  // namespace nearunit
