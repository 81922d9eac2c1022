#pragma once

#include <nlohmann/json.hpp>

#include "nearunit/estimation.hpp"
#include "nearunit/linalg.hpp"
#include "nearunit/montecarlo.hpp"
#include "nearunit/spectrum.hpp"

namespace nearunit {

using json = nlohmann::json;

// Matrices are row-major nested arrays. Complex matrices collapse to plain
// reals when every imaginary part is below 1e-12 (relative), otherwise each
// entry is {"re": .., "im": ..}.
json matrix_to_json(const Matrix& m);
json matrix_to_json(const CMatrix& m);
json vector_to_json(const Vector& v);
json vector_to_json(const CVector& v);

// {p, unit_root_mode, c, alpha, (d, beta when both), bulk: [{re, im}, ...], eps}
json to_json(const EigenSpec& spec);
EigenSpec eigen_spec_from_json(const json& j);

json to_json(const CompanionModel& model);
json to_json(const TheoryBundle& bundle);
json to_json(const EstimationResult& result);
json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const json& j);

// {config, tail_freq_6p5, ks_chi1, quantiles: [...], wall_time, ...}
json summary_json(const ExperimentReport& report);

}  // namespace nearunit
