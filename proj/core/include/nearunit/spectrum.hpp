#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nearunit/rng.hpp"
#include "nearunit/types.hpp"

namespace nearunit {

// Drift schedule for the near-unit eigenvalue: v(n) = n^alpha and
// rho(n) = 1 - c / v(n).
struct RateSchedule {
  double c = 1.0;
  double alpha = 0.5;

  double v(long n) const;
  double rho(long n) const;

  // Throws ConfigError unless c > 0 and 0 < alpha < 1.
  void validate() const;
  // Throws ConfigError unless 1 < v(n) < n and rho(n) lies in (0, 1).
  void validate_at(long n) const;
};

// Declarative description of the time-varying spectrum of A_n.
//
// `bulk` holds the fixed eigenvalues that stay strictly inside the unit disk:
// p - 1 of them for a single unit root, p - 2 under UnitRootMode::Both. Under
// Both, `schedule` drives lambda_{n,1} = 1 - c/v_n and `second` drives
// lambda_{n,2} = -1 + d/w_n.
struct EigenSpec {
  int p = 1;
  UnitRootMode mode = UnitRootMode::PlusOne;
  RateSchedule schedule{};
  std::optional<RateSchedule> second{};
  std::vector<cplx> bulk{};
  double eps = 0.1;

  int unit_root_count() const { return mode == UnitRootMode::Both ? 2 : 1; }
  int bulk_count() const { return p - unit_root_count(); }

  // Structural checks that do not depend on n.
  void validate() const;
};

std::string_view to_string(UnitRootMode mode);
UnitRootMode parse_unit_root_mode(std::string_view text);

// Orders a spectrum by descending modulus, ties broken by descending
// (real, imag). Stable for equal-modulus conjugate pairs.
void sort_spectrum(std::vector<cplx>& lambdas);

// Limit spectrum of A: the unit root(s) followed by the bulk, sorted.
std::vector<cplx> limit_eigenvalues(const EigenSpec& spec);

// Spectrum of A_n, sorted. Throws SpectrumError if a bulk eigenvalue is not
// strictly dominated by the near-unit ones or if eigenvalues collide.
std::vector<cplx> eigenvalues_at(const EigenSpec& spec, long n);

// Real coefficients theta with prod_i (z - lambda_i) = z^p - theta_1 z^{p-1} - ... - theta_p.
Vector coefficients_from_eigenvalues(std::span<const cplx> lambdas);

// p x p companion matrix: theta on the first row, identity on the subdiagonal.
Matrix companion_matrix(const Vector& theta);

// Eigenvector basis with entry (i, j) = lambda_j^{-i} (0-based i).
CMatrix vandermonde_basis(std::span<const cplx> lambdas);

// Closed form of the first column of the inverse basis:
// pi_k = (-lambda_k)^{p-1} / prod_{l != k} (lambda_l - lambda_k).
CVector pi_column(std::span<const cplx> lambdas);

struct CompanionModel {
  long n = 0;
  int p = 0;
  UnitRootMode mode = UnitRootMode::PlusOne;
  double c = 0.0;    // drift constant of lambda_{n,1}
  double v = 0.0;    // v_n
  double rho = 0.0;  // spectral radius 1 - c / v_n
  Vector theta;
  Matrix A;
  CVector eigenvalues;        // lambda_{n,1..p}
  CVector limit_eigenvalues;  // lambda_{1..p}
  CMatrix P;
  CMatrix P_inv;
  CVector pi_col;  // first column of the limit P^{-1}

  bool has_real_spectrum(double tol = 1e-12) const;
  // lambda_{n,1} = lambda_1 * rho_n
  double leading_eigenvalue() const { return eigenvalues(0).real(); }
  double pi11() const { return pi_col(0).real(); }
};

inline constexpr double kConditionCap = 1e12;

// Assembles theta, A_n, P_n, P_n^{-1} (by direct solve) and the limit pi column.
// Throws NumericalError when cond(P_n) exceeds `condition_cap`.
CompanionModel companion_model(const EigenSpec& spec, long n, double condition_cap = kConditionCap);

// Residuals of the structural identities a CompanionModel must satisfy.
struct ModelDiagnostics {
  double eigenpair_residual;      // max_j ||A P_j - lambda_j P_j|| / ||P_j||
  double inverse_residual;       // ||P P^{-1} - I||_max
  double first_row_imag;         // max |Im (P^{-1})_{1k}|
  double min_abs_pi;             // min_k |pi_k|
  double spectral_radius_error;  // | max_j |lambda_j| - rho_n |
};
ModelDiagnostics diagnose(const CompanionModel& model);

// Draws p - 1 real bulk eigenvalues uniformly on [-rho + eps, rho - eps],
// redrawing values closer than 1e-3 to zero or to an earlier draw. Throws
// SamplingError after 1000 redraws.
std::vector<double> sample_bulk_eigenvalues(Rng& rng, int p, double rho, double eps);

}  // namespace nearunit
