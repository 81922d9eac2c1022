#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nearunit/estimation.hpp"
#include "nearunit/spectrum.hpp"
#include "nearunit/types.hpp"

namespace nearunit {

// sqrt(n) V_n^{-1/2} P_n^T (theta_hat - theta_n). Asymptotically N_p(0, H_0^{-1})
// when the limit spectrum is real. Throws BranchError for complex spectra.
Vector normalized_error_real(const EstimationResult& result, const CompanionModel& model);

// Weight vector (1, 1/lambda_{n,1}, ..., 1/lambda_{n,1}^{p-1}), i.e. the first
// column of P_n.
Vector leading_weights(const CompanionModel& model);

// sqrt(n v_n) <L_n, theta_hat - theta_n>. Asymptotically N(0, 2c / pi_11^2)
// for any limit spectrum.
double scalar_statistic_complex(const EstimationResult& result, const CompanionModel& model);

// Asymptotic variance 2c / pi_11^2 of scalar_statistic_complex.
double scalar_statistic_variance(const CompanionModel& model);

// (pi_11^2 n v_n / 2c) [sum_i lambda_{n,1}^{-(i-1)} (theta_hat_i - theta_{n,i})]^2,
// asymptotically chi^2_1. Uses the true theta_n, rho_n and limit pi_11.
// Throws BranchError under two unit roots.
double z_squared(const EstimationResult& result, const CompanionModel& model);

// z_squared with pi_11, rho_n and lambda_{n,1} re-estimated from the
// spectrum of the fitted companion matrix. theta_n is still the
// hypothesised value. Not used by the acceptance checks.
double z_squared_plugin(const EstimationResult& result, const CompanionModel& model);

// Reference chi^2_1 distribution: erf(sqrt(x / 2)). Throws DomainError for x < 0.
double chi1_cdf(double x);

// Sup-distance between the empirical CDF of `samples` and `cdf`.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

// Linear-interpolation quantile of an unsorted sample (type 7).
double quantile(std::span<const double> samples, double prob);

}  // namespace nearunit
