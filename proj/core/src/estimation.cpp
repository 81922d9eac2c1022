#include "nearunit/estimation.hpp"

#include <vector>

#include "nearunit/errors.hpp"
#include "nearunit/linalg.hpp"

namespace nearunit {

EstimationResult ols(const TriangularPath& path) {
  const int p = path.p;
  const long n = path.n;
  if (p < 1) throw DimensionError("ols: order must be positive");
  if (n <= p) throw DimensionError("ols: need n > p observations");
  if (path.x.size() != n + 1 || path.phi0.size() != p) throw DimensionError("ols: inconsistent path lengths");

  EstimationResult r;
  r.n = n;
  r.p = p;
  r.has_noise = path.noise.size() == n;

  // buf[j + p - 1] = X_j for j = 1 - p, ..., n.
  std::vector<double> buf(static_cast<std::size_t>(n + p));
  for (int i = 0; i < p; ++i) buf[static_cast<std::size_t>(p - 1 - i)] = path.phi0(i);
  for (long k = 1; k <= n; ++k) buf[static_cast<std::size_t>(k + p - 1)] = path.x(k);

  const auto up = static_cast<std::size_t>(p);
  std::vector<double> gram(up * up, 0.0);
  std::vector<double> cross(up, 0.0);
  std::vector<double> zcol(up, 0.0);
  double lsum = 0.0;
  for (long k = 1; k <= n; ++k) {
    // Phi_{k-1}(i) = X_{k-1-i} = buf[k - 1 - i + p - 1]
    const double* phi = &buf[static_cast<std::size_t>(k + p - 2)];
    const double xk = buf[static_cast<std::size_t>(k + p - 1)];
    for (std::size_t i = 0; i < up; ++i) {
      const double pi = *(phi - i);
      for (std::size_t j = i; j < up; ++j) gram[i * up + j] += pi * *(phi - j);
      cross[i] += pi * xk;
    }
    if (r.has_noise) {
      const double e = path.noise(k - 1);
      for (std::size_t i = 0; i < up; ++i) zcol[i] += *(phi - i) * e;
      lsum += e * e;
    }
  }

  r.S.resize(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) r.S(i, j) = r.S(j, i) = gram[static_cast<std::size_t>(i) * up + j];
  }
  r.cross = Eigen::Map<const Vector>(cross.data(), p);
  const Vector phi_n = path.state(n);
  const Vector phi_0 = path.phi0;
  r.S_full = r.S + phi_n * phi_n.transpose();
  r.Z = Matrix::Zero(p, p);
  r.L_noise = Matrix::Zero(p, p);
  r.T_iso = phi_0 * phi_0.transpose() - phi_n * phi_n.transpose();
  if (r.has_noise) {
    r.Z.col(0) = Eigen::Map<const Vector>(zcol.data(), p);
    r.L_noise(0, 0) = lsum;
  }

  if (r.S.cwiseAbs().maxCoeff() == 0.0) {
    r.degenerate = true;
    r.theta_hat = Vector::Zero(p);
    return r;
  }

  Eigen::LLT<Matrix> llt(r.S);
  Matrix system = r.S;
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-13) {
    r.ridge_used = 1e-10 * r.S.trace() / p;
    system += r.ridge_used * Matrix::Identity(p, p);
    llt.compute(system);
    if (llt.info() != Eigen::Success) {
      r.theta_hat = system.fullPivLu().solve(r.cross);
    } else {
      r.theta_hat = llt.solve(r.cross);
    }
  } else {
    r.theta_hat = llt.solve(r.cross);
  }
  const double scale = r.cross.norm();
  r.normal_residual = scale > 0.0 ? (system * r.theta_hat - r.cross).norm() / scale : 0.0;
  return r;
}

TriangularPath path_from_series(const Vector& series, int p) {
  if (p < 1) throw DimensionError("path_from_series: order must be positive");
  if (series.size() < p + 2) throw DimensionError("path_from_series: series too short for the order");
  TriangularPath path;
  path.p = p;
  path.n = series.size() - p;
  path.phi0.resize(p);
  for (int i = 0; i < p; ++i) path.phi0(i) = series(p - 1 - i);
  path.x = series.tail(path.n + 1);
  return path;
}

double decomposition_residual(const EstimationResult& r, const CompanionModel& model) {
  if (r.p != model.p) throw DimensionError("decomposition_residual: order mismatch");
  if (!r.has_noise) throw DimensionError("decomposition_residual: result carries no innovations");
  const Eigen::Index p = r.p;
  const Matrix I = Matrix::Identity(p, p);
  const Vector rhs = vec(r.T_iso) + kron(I, model.A) * vec(r.Z) + kron(model.A, I) * vec(Matrix(r.Z.transpose())) +
                     vec(r.L_noise);
  const Vector lhs = vec(r.S);
  const Vector solved = b_inverse(model.A) * rhs;
  return (lhs - solved).norm() / lhs.norm();
}

double empirical_covariance_check(const EstimationResult& r, const CompanionModel& model, double sigma2) {
  if (r.p != model.p) throw DimensionError("empirical_covariance_check: order mismatch");
  const Matrix gamma = stationary_covariance(model.A, sigma2);
  return (1.0 - model.rho) * (r.S_full / static_cast<double>(r.n) - gamma).norm();
}

}  // namespace nearunit
