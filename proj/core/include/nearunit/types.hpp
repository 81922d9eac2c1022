#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nearunit {

using cplx = std::complex<double>;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Largest supported autoregressive order; p^2 x p^2 Kronecker objects stay small.
inline constexpr int kMaxOrder = 12;

enum class UnitRootMode {
  PlusOne,   // single limit unit root at +1
  MinusOne,  // single limit unit root at -1
  Both,      // limit unit roots at +1 and -1
};

}  // namespace nearunit
