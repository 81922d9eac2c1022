#include "nearunit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nearunit {

namespace {

constexpr double kSingularRcond = 1e-14;

template <typename MatrixType>
Eigen::FullPivLU<MatrixType> checked_lu(const MatrixType& m, const char* what) {
  Eigen::FullPivLU<MatrixType> lu(m);
  if (!lu.isInvertible() || lu.rcond() < kSingularRcond) {
    throw NumericalError(std::string(what) + " is numerically singular (rcond = " + std::to_string(lu.rcond()) +
                         ")");
  }
  return lu;
}

CMatrix limit_basis_inverse(std::span<const cplx> lambdas) {
  const CMatrix P = vandermonde_basis(lambdas);
  return checked_lu(P, "limit eigenvector basis").solve(CMatrix::Identity(P.rows(), P.cols()));
}

int leading_block(UnitRootMode mode) { return mode == UnitRootMode::Both ? 2 : 1; }

}  // namespace

Matrix k_matrix(Eigen::Index p) {
  Matrix K = Matrix::Zero(p, p);
  K(0, 0) = 1.0;
  return K;
}

bool is_real(const CMatrix& m, double tol) {
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return m.imag().cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix real_view(const CMatrix& m, double tol) {
  if (!is_real(m, tol)) {
    throw NumericalError("matrix has a non-negligible imaginary part (" +
                         std::to_string(m.imag().cwiseAbs().maxCoeff()) + ")");
  }
  return m.real();
}

Vector real_view(const CVector& v, double tol) { return real_view(CMatrix(v), tol).col(0); }

Matrix b_inverse(const Matrix& A) {
  if (A.rows() != A.cols()) throw DimensionError("b_inverse: A must be square");
  const Eigen::Index q = A.rows() * A.rows();
  const Matrix B = Matrix::Identity(q, q) - kron(A, A);
  return checked_lu(B, "I - A (x) A").solve(Matrix::Identity(q, q));
}

Matrix stationary_covariance(const Matrix& A, double sigma2) {
  if (A.rows() != A.cols()) throw DimensionError("stationary_covariance: A must be square");
  if (!(sigma2 > 0.0)) throw DomainError("noise variance must be positive");
  const Eigen::Index p = A.rows();
  const Eigen::Index q = p * p;
  const Matrix B = Matrix::Identity(q, q) - kron(A, A);
  Vector rhs = Vector::Zero(q);
  rhs(0) = sigma2;
  const Vector g = checked_lu(B, "I - A (x) A").solve(rhs);
  const Matrix gamma = vec_inv(g, p);
  return 0.5 * (gamma + gamma.transpose());
}

Matrix autocovariance(const Matrix& A, const Matrix& gamma0, int h) {
  if (A.rows() != A.cols() || gamma0.rows() != A.rows() || gamma0.cols() != A.cols()) {
    throw DimensionError("autocovariance: A and Gamma0 must be p x p");
  }
  Matrix power = Matrix::Identity(A.rows(), A.cols());
  for (int k = 0; k < std::abs(h); ++k) power = A * power;
  const Matrix out = power * gamma0;
  return h >= 0 ? out : Matrix(out.transpose());
}

Matrix memory_sum(const Matrix& A, const Matrix& gamma0) {
  if (A.rows() != A.cols() || gamma0.rows() != A.rows()) throw DimensionError("memory_sum: shape mismatch");
  const Matrix I = Matrix::Identity(A.rows(), A.cols());
  const Matrix tail = A * checked_lu(Matrix(I - A), "I - A").solve(gamma0);
  return gamma0 + tail + tail.transpose();
}

Matrix a_star(std::span<const cplx> limit_lambdas) {
  const CMatrix P = vandermonde_basis(limit_lambdas);
  const CMatrix P_inv = limit_basis_inverse(limit_lambdas);
  const Eigen::Index p = P.rows();
  return real_view(CMatrix(P * k_matrix(p).cast<cplx>() * P_inv), 1e-10);
}

Matrix scaled_b_inverse_limit(std::span<const cplx> limit_lambdas, UnitRootMode mode) {
  const CMatrix P = vandermonde_basis(limit_lambdas);
  const CMatrix P_inv = limit_basis_inverse(limit_lambdas);
  const Eigen::Index p = P.rows();
  CVector selector = CVector::Zero(p * p);
  selector(0) = 1.0;
  if (mode == UnitRootMode::Both) selector(p + 1) = 1.0;
  const CMatrix out = 0.5 * kron(P, P) * selector.asDiagonal() * kron(P_inv, P_inv);
  return real_view(out, 1e-10);
}

Matrix limit_covariance(std::span<const cplx> limit_lambdas, double sigma2, UnitRootMode mode) {
  if (!(sigma2 > 0.0)) throw DomainError("noise variance must be positive");
  const auto p = static_cast<Eigen::Index>(limit_lambdas.size());
  Vector e = Vector::Zero(p * p);
  e(0) = 1.0;
  if (mode == UnitRootMode::Both) {
    return vec_inv(Vector(sigma2 * scaled_b_inverse_limit(limit_lambdas, mode) * e), p);
  }
  const Matrix As = a_star(limit_lambdas);
  return vec_inv(Vector(0.5 * sigma2 * kron(As, As) * e), p);
}

CMatrix h0_matrix(std::span<const cplx> limit_lambdas, UnitRootMode mode) {
  const auto p = static_cast<Eigen::Index>(limit_lambdas.size());
  const int lead = leading_block(mode);
  if (p < lead) throw SpectrumError("spectrum too short for the requested unit-root mode");
  const CVector pi = pi_column(limit_lambdas);
  CMatrix H = CMatrix::Zero(p, p);
  for (Eigen::Index i = 0; i < lead; ++i) H(i, i) = pi(i) * pi(i) / 2.0;
  for (Eigen::Index i = lead; i < p; ++i) {
    for (Eigen::Index j = lead; j < p; ++j) {
      const cplx denom = 1.0 - limit_lambdas[static_cast<std::size_t>(i)] * limit_lambdas[static_cast<std::size_t>(j)];
      if (std::abs(denom) < 1e-14) throw SpectrumError("1 - lambda_i lambda_j vanishes in H0");
      H(i, j) = pi(i) * pi(j) / denom;
    }
  }
  return H;
}

CMatrix lambda_block(std::span<const cplx> limit_lambdas) {
  const CMatrix H = h0_matrix(limit_lambdas, UnitRootMode::PlusOne);
  const Eigen::Index m = H.rows() - 1;
  return H.bottomRightCorner(m, m);
}

std::vector<double> lambda_det_recurrence(std::span<const cplx> limit_lambdas) {
  const auto p = static_cast<Eigen::Index>(limit_lambdas.size());
  if (p < 2) throw SpectrumError("lambda_det_recurrence needs p >= 2");
  const CVector pi = pi_column(limit_lambdas);
  const auto lam = [&](Eigen::Index k) { return limit_lambdas[static_cast<std::size_t>(k)]; };

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(p - 1));
  cplx diagonal_part{1.0, 0.0};
  cplx cauchy_part{1.0, 0.0};
  for (Eigen::Index k = 1; k < p; ++k) {
    const cplx self = 1.0 - lam(k) * lam(k);
    if (std::abs(self) < 1e-14) throw SpectrumError("1 - lambda_k^2 vanishes");
    diagonal_part *= pi(k) * pi(k) / self;
    for (Eigen::Index i = 1; i < k; ++i) {
      const cplx cross = 1.0 - lam(i) * lam(k);
      if (std::abs(cross) < 1e-14) throw SpectrumError("1 - lambda_i lambda_k vanishes");
      const cplx ratio = (lam(i) - lam(k)) / cross;
      cauchy_part *= ratio * ratio;
    }
    const cplx d = diagonal_part * cauchy_part;
    if (std::abs(d.imag()) > 1e-8 * std::max(1.0, std::abs(d))) {
      throw SpectrumError("minor d_" + std::to_string(k + 1) + " is not real; spectrum not conjugate-closed");
    }
    out.push_back(d.real());
  }
  return out;
}

CMatrix wb_limit(std::span<const cplx> limit_lambdas) {
  const auto p = static_cast<Eigen::Index>(limit_lambdas.size());
  const CMatrix P_inv = limit_basis_inverse(limit_lambdas);
  CVector diagonal = CVector::Zero(p * p);
  diagonal(0) = 0.5;
  for (Eigen::Index i = 1; i < p; ++i) {
    for (Eigen::Index j = 1; j < p; ++j) {
      diagonal(i * p + j) =
          1.0 / (1.0 - limit_lambdas[static_cast<std::size_t>(i)] * limit_lambdas[static_cast<std::size_t>(j)]);
    }
  }
  return diagonal.asDiagonal() * kron(P_inv, P_inv);
}

RateMatrices rate_matrices(const CompanionModel& model) {
  const Eigen::Index p = model.p;
  Vector diag = Vector::Ones(p);
  if (model.mode == UnitRootMode::Both) {
    diag(0) = 1.0 - model.eigenvalues(0).real();
    diag(1) = 1.0 + model.eigenvalues(1).real();
  } else {
    diag(0) = 1.0 - model.rho;
  }
  RateMatrices out;
  out.V = diag.asDiagonal();
  const CMatrix scaled = diag.cwiseSqrt().cast<cplx>().asDiagonal() * model.P_inv;
  out.W = kron(scaled, scaled);
  return out;
}

TheoryBundle theory_bundle(const CompanionModel& model, double sigma2) {
  const std::span<const cplx> limit(model.limit_eigenvalues.data(), static_cast<std::size_t>(model.p));
  TheoryBundle t;
  t.B_inv = b_inverse(model.A);
  t.Gamma_n = stationary_covariance(model.A, sigma2);
  t.Gamma_limit = limit_covariance(limit, sigma2, model.mode);
  t.A_star = a_star(limit);
  t.H0 = h0_matrix(limit, model.mode);
  auto rates = rate_matrices(model);
  t.V = std::move(rates.V);
  t.W = std::move(rates.W);
  t.memory_sum = memory_sum(model.A, t.Gamma_n);
  if (model.p >= 2 && model.mode != UnitRootMode::Both) t.lambda_dets = lambda_det_recurrence(limit);
  return t;
}

}  // namespace nearunit
