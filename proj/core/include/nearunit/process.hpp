#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nearunit/rng.hpp"
#include "nearunit/spectrum.hpp"
#include "nearunit/types.hpp"

namespace nearunit {

// Zero-mean i.i.d. innovation law.
struct NoiseModel {
  enum class Kind {
    Gaussian,    // param = variance
    Laplace,     // param = scale b, variance 2 b^2
    StudentT,    // param = degrees of freedom, variance df / (df - 2)
    Rademacher,  // param = scale s, values +-s
    Dirac,       // always zero; test hook for noise-free paths
  };

  Kind kind = Kind::Gaussian;
  double param = 1.0;

  static NoiseModel gaussian(double variance = 1.0) { return {Kind::Gaussian, variance}; }
  static NoiseModel laplace(double scale) { return {Kind::Laplace, scale}; }
  static NoiseModel student_t(double df) { return {Kind::StudentT, df}; }
  static NoiseModel rademacher(double scale = 1.0) { return {Kind::Rademacher, scale}; }
  static NoiseModel dirac() { return {Kind::Dirac, 0.0}; }

  double variance() const;

  // Throws ConfigError for non-positive parameters or infinite variance.
  // With `moment_margin` = nu > 0, also requires a finite 2 + nu moment
  // (StudentT needs df > 2 + nu).
  void validate(double moment_margin = 0.0) const;

  double draw(Rng& rng) const;
};

std::string_view to_string(NoiseModel::Kind kind);
NoiseModel::Kind parse_noise_kind(std::string_view text);

enum class InitialState { Zero, Stationary, Fixed };

struct InitialStatePolicy {
  InitialState kind = InitialState::Zero;
  Vector fixed{};  // used when kind == Fixed; length p

  static InitialStatePolicy zero() { return {}; }
  static InitialStatePolicy stationary() { return {InitialState::Stationary, {}}; }
  static InitialStatePolicy fixed_vector(Vector v) { return {InitialState::Fixed, std::move(v)}; }
};

// One row of the triangular array: X_{n,0..n} together with the initial
// state Phi_{n,0} = (X_{n,0}, X_{n,-1}, ..., X_{n,1-p}) and the innovations
// that produced it.
struct TriangularPath {
  long n = 0;
  int p = 0;
  Vector x;      // length n + 1, x[k] = X_{n,k}
  Vector phi0;   // length p, phi0[0] = x[0]
  Vector noise;  // length n, noise[k-1] = eps_k
  std::shared_ptr<const CompanionModel> model;

  // Lag vector Phi_{n,k} = (X_{n,k}, ..., X_{n,k-p+1}); lags before 0 come from phi0.
  Vector state(long k) const;
  double lag(long k) const;  // X_{n,k} for k >= 1 - p
};

// Draws the initial state and n innovations from `rng` (in that order) and
// runs the scalar recursion X_k = sum_i theta_i X_{k-i} + eps_k.
TriangularPath simulate(std::shared_ptr<const CompanionModel> model, const NoiseModel& noise,
                        const InitialStatePolicy& init, Rng& rng);

// Same draws, propagated through Phi_k = A Phi_{k-1} + E_k. Bitwise equal to
// simulate() for the same stream.
TriangularPath simulate_vector_form(std::shared_ptr<const CompanionModel> model, const NoiseModel& noise,
                                    const InitialStatePolicy& init, Rng& rng);

// CSV with header "k,x" and one row per observation k = 0..n, values printed
// with 17 significant digits.
void write_path_csv(std::ostream& os, const TriangularPath& path);

// Parses the "k,x" CSV back into the observation vector.
Vector read_path_csv(std::istream& is);

}  // namespace nearunit
