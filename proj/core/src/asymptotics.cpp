#include "nearunit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nearunit/errors.hpp"
#include "nearunit/linalg.hpp"

namespace nearunit {

namespace {

Vector error_vector(const EstimationResult& result, const CompanionModel& model) {
  if (result.p != model.p || result.theta_hat.size() != model.theta.size()) {
    throw DimensionError("estimate and model have different orders");
  }
  return result.theta_hat - model.theta;
}

double weighted_error(const Vector& delta, double leading) {
  // sum_i leading^{-(i-1)} delta_i, evaluated by Horner in 1/leading.
  const double inv = 1.0 / leading;
  double acc = 0.0;
  for (Eigen::Index i = delta.size() - 1; i >= 0; --i) acc = acc * inv + delta(i);
  return acc;
}

}  // namespace

Vector normalized_error_real(const EstimationResult& result, const CompanionModel& model) {
  if (!model.has_real_spectrum()) {
    throw BranchError("the vector statistic needs a real limit spectrum; use scalar_statistic_complex");
  }
  const Vector delta = error_vector(result, model);
  const Matrix P = real_view(model.P);
  const Vector scale = rate_matrices(model).V.diagonal().cwiseSqrt().cwiseInverse();
  return std::sqrt(static_cast<double>(result.n)) * scale.asDiagonal() * (P.transpose() * delta);
}

Vector leading_weights(const CompanionModel& model) {
  Vector w(model.p);
  const double inv = 1.0 / model.leading_eigenvalue();
  double power = 1.0;
  for (int i = 0; i < model.p; ++i) {
    w(i) = power;
    power *= inv;
  }
  return w;
}

double scalar_statistic_complex(const EstimationResult& result, const CompanionModel& model) {
  const Vector delta = error_vector(result, model);
  return std::sqrt(static_cast<double>(result.n) * model.v) * weighted_error(delta, model.leading_eigenvalue());
}

double scalar_statistic_variance(const CompanionModel& model) {
  const double pi11 = model.pi11();
  return 2.0 * model.c / (pi11 * pi11);
}

double z_squared(const EstimationResult& result, const CompanionModel& model) {
  if (model.mode == UnitRootMode::Both) {
    throw BranchError("the chi-square statistic is defined for a single unit root at +1 or -1");
  }
  const Vector delta = error_vector(result, model);
  const double w = weighted_error(delta, model.leading_eigenvalue());
  const double pi11 = model.pi11();
  return pi11 * pi11 * static_cast<double>(result.n) * model.v / (2.0 * model.c) * w * w;
}

double z_squared_plugin(const EstimationResult& result, const CompanionModel& model) {
  if (model.mode == UnitRootMode::Both) {
    throw BranchError("the chi-square statistic is defined for a single unit root at +1 or -1");
  }
  const Vector delta = error_vector(result, model);
  const Eigen::EigenSolver<Matrix> solver(companion_matrix(result.theta_hat), false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen solver failed on the fitted companion matrix");
  std::vector<cplx> fitted(solver.eigenvalues().data(), solver.eigenvalues().data() + model.p);
  sort_spectrum(fitted);
  const cplx lead = fitted.front();
  const double rho_hat = std::abs(lead);
  if (!(rho_hat < 1.0)) throw NumericalError("fitted companion matrix is not stable");
  if (std::abs(lead.imag()) > 1e-8) throw NumericalError("fitted leading eigenvalue is not real");
  std::vector<cplx> limit = fitted;
  limit.front() = cplx{lead.real() >= 0.0 ? 1.0 : -1.0, 0.0};
  const double pi11 = pi_column(limit)(0).real();
  const double w = weighted_error(delta, lead.real());
  return pi11 * pi11 * static_cast<double>(result.n) / (2.0 * (1.0 - rho_hat)) * w * w;
}

double chi1_cdf(double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("chi1_cdf: argument must be non-negative");
  return std::erf(std::sqrt(x / 2.0));
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_distance: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double below = static_cast<double>(i) / count;
    const double above = static_cast<double>(i + 1) / count;
    sup = std::max({sup, above - f, f - below});
  }
  return sup;
}

double quantile(std::span<const double> samples, double prob) {
  if (samples.empty()) throw DomainError("quantile: empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("quantile: probability outside [0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace nearunit
