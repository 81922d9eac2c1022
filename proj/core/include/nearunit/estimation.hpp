#pragma once

#include "nearunit/process.hpp"
#include "nearunit/spectrum.hpp"
#include "nearunit/types.hpp"

namespace nearunit {

// Least-squares fit of one path together with the second-moment objects of
// the variance decomposition. Z, L_noise and T_iso need the innovations and
// are only filled when the path carries them (has_noise).
struct EstimationResult {
  long n = 0;
  int p = 0;
  Vector theta_hat;
  Matrix S;       // sum_{k=0}^{n-1} Phi_k Phi_k^T
  Matrix S_full;  // sum_{k=0}^{n} Phi_k Phi_k^T
  Vector cross;   // sum_{k=1}^{n} Phi_{k-1} X_k
  Matrix Z;       // sum_{k=1}^{n} Phi_{k-1} E_k^T; only column 0 is non-zero
  Matrix L_noise; // sum_{k=1}^{n} E_k E_k^T; only entry (0, 0) is non-zero
  Matrix T_iso;   // Phi_0 Phi_0^T - Phi_n Phi_n^T
  double ridge_used = 0.0;
  double normal_residual = 0.0;  // ||(S + ridge I) theta_hat - cross|| / ||cross||
  bool degenerate = false;       // S was identically zero; theta_hat is zero
  bool has_noise = false;
};

// OLS estimate theta_hat = S^{-1} sum Phi_{k-1} X_k. A ridge of
// 1e-10 * tr(S) / p is added only if S is numerically singular.
EstimationResult ols(const TriangularPath& path);

// Builds a path from raw observations x_0..x_m, using the first p values as the
// initial state Phi_{p-1}. The result carries no model and no innovations.
TriangularPath path_from_series(const Vector& series, int p);

// Relative Frobenius residual of
// vec(S) = B^{-1} [vec(T) + (I (x) A) vec(Z) + (A (x) I) vec(Z^T) + vec(L)].
// Exact algebra, so anything above ~1e-10 means S, Z, L or T is inconsistent
// with the model.
double decomposition_residual(const EstimationResult& result, const CompanionModel& model);

// (1 - rho_n) * || S_n / n - Gamma_n ||_F.
double empirical_covariance_check(const EstimationResult& result, const CompanionModel& model, double sigma2);

}  // namespace nearunit
