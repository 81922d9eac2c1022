#pragma once

#include <span>
#include <vector>

#include "nearunit/errors.hpp"
#include "nearunit/spectrum.hpp"
#include "nearunit/types.hpp"

namespace nearunit {

// Kronecker product. Works for any pair of dense Eigen matrices with the
// same scalar type.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                              a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Column-major stacking, so vec(K_p) is the first canonical vector of R^{p^2}.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = m;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(dense.data(),
                                                                                      dense.size());
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> vec_inv(
    const Eigen::MatrixBase<Derived>& v, Eigen::Index p) {
  if (v.cols() != 1 || v.rows() != p * p) {
    throw DimensionError("vec_inv: vector of length " + std::to_string(v.rows()) + " cannot form a " +
                         std::to_string(p) + "x" + std::to_string(p) + " matrix");
  }
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> dense = v;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>(dense.data(), p,
                                                                                                  p);
}

// p x p matrix with a single 1 in position (0, 0).
Matrix k_matrix(Eigen::Index p);

// Real part of `m`, throwing NumericalError if any imaginary part exceeds
// tol * max(1, max |m_ij|).
Matrix real_view(const CMatrix& m, double tol = 1e-12);
Vector real_view(const CVector& v, double tol = 1e-12);
bool is_real(const CMatrix& m, double tol = 1e-12);

// (I - A (x) A)^{-1} by dense LU. Throws NumericalError if the factorization
// is singular, which means rho(A) >= 1 slipped through upstream.
Matrix b_inverse(const Matrix& A);

// Gamma(0) of the stationary VAR(1) driven by sigma2 * K_p noise, via
// vec(Gamma) = sigma2 * B^{-1} e_{p^2}. Symmetrized on return.
Matrix stationary_covariance(const Matrix& A, double sigma2);

// Gamma(h) = A^h Gamma(0) for h >= 0 and Gamma(h)^T for h < 0.
Matrix autocovariance(const Matrix& A, const Matrix& gamma0, int h);

// sum_{h in Z} Gamma(h) = Gamma0 + A (I - A)^{-1} Gamma0 + its transpose.
Matrix memory_sum(const Matrix& A, const Matrix& gamma0);

// A* = P K_p P^{-1} built from the limit spectrum.
Matrix a_star(std::span<const cplx> limit_lambdas);

// Limit of (1 - rho_n) B_n^{-1}: (1/2) (P (x) P) K* (P^{-1} (x) P^{-1}), where K*
// selects the (1,1) diagonal slot, plus the (2,2) slot under two unit roots.
Matrix scaled_b_inverse_limit(std::span<const cplx> limit_lambdas, UnitRootMode mode);

// Limit of (1 - rho_n) S_n / n: (sigma2 / 2) vec^{-1}((A* (x) A*) e_{p^2}) for one
// unit root; the two-unit-root variant uses the adjusted selector.
Matrix limit_covariance(std::span<const cplx> limit_lambdas, double sigma2,
                        UnitRootMode mode = UnitRootMode::PlusOne);

// Standardized precision matrix H_0. The leading block is diag(pi_1^2 / 2) for
// one unit root and diag(pi_1^2 / 2, pi_2^2 / 2) for two; the remaining block
// has entries pi_i pi_j / (1 - lambda_i lambda_j). Complex for complex spectra.
CMatrix h0_matrix(std::span<const cplx> limit_lambdas, UnitRootMode mode);

// The trailing (p-1) x (p-1) block of h0_matrix for one unit root.
CMatrix lambda_block(std::span<const cplx> limit_lambdas);

// Leading principal minors d_2, ..., d_p of lambda_block, from the closed-form
// product rather than a determinant. Throws SpectrumError if some
// 1 - lambda_i lambda_j vanishes.
std::vector<double> lambda_det_recurrence(std::span<const cplx> limit_lambdas);

// Limit of W_n B_n^{-1} for one unit root:
// diag(K_p / 2, Delta_2, ..., Delta_p) (P^{-1} (x) P^{-1}).
CMatrix wb_limit(std::span<const cplx> limit_lambdas);

struct RateMatrices {
  Matrix V;   // p x p diagonal
  CMatrix W;  // (V^{1/2} P_n^{-1}) (x) (V^{1/2} P_n^{-1})
};

// V_n = diag(1 - rho_n, 1, ..., 1) for one unit root (rho_n is the spectral
// radius, also under -1), diag(1 - lambda_{n,1}, 1 + lambda_{n,2}, 1, ...) for two.
RateMatrices rate_matrices(const CompanionModel& model);

struct TheoryBundle {
  Matrix B_inv;
  Matrix Gamma_n;
  Matrix Gamma_limit;
  Matrix A_star;
  CMatrix H0;
  Matrix V;
  CMatrix W;
  Matrix memory_sum;
  std::vector<double> lambda_dets;
};

TheoryBundle theory_bundle(const CompanionModel& model, double sigma2);

}  // namespace nearunit
