#pragma once

#include <initializer_list>
#include <memory>
#include <vector>

#include "nearunit/nearunit.hpp"

namespace fixture {

using namespace nearunit;

inline EigenSpec spec(int p, UnitRootMode mode, std::vector<cplx> bulk, double c = 1.0, double alpha = 0.5) {
  EigenSpec s;
  s.p = p;
  s.mode = mode;
  s.schedule = RateSchedule{c, alpha};
  if (mode == UnitRootMode::Both) s.second = s.schedule;
  s.bulk = std::move(bulk);
  return s;
}

inline std::vector<cplx> reals(std::initializer_list<double> xs) { return {xs.begin(), xs.end()}; }

inline std::shared_ptr<const CompanionModel> shared_model(const EigenSpec& s, long n) {
  return std::make_shared<const CompanionModel>(companion_model(s, n));
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

// Fixed-spectrum companion model with a stable spectrum, bypassing the
// near-unit schedule (for ergodic sanity checks).
inline CompanionModel stable_model(std::vector<cplx> lambdas, long n) {
  CompanionModel m;
  m.n = n;
  m.p = static_cast<int>(lambdas.size());
  m.theta = coefficients_from_eigenvalues(lambdas);
  m.A = companion_matrix(m.theta);
  m.eigenvalues = Eigen::Map<CVector>(lambdas.data(), m.p);
  m.limit_eigenvalues = m.eigenvalues;
  m.P = vandermonde_basis(lambdas);
  m.P_inv = m.P.inverse();
  m.pi_col = pi_column(lambdas);
  m.rho = std::abs(lambdas.front());
  m.v = 1.0;
  m.c = 1.0 - m.rho;
  return m;
}

}  // namespace fixture
