#include "nearunit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nearunit/errors.hpp"

namespace nearunit {

namespace {

constexpr double kModulusTieTol = 1e-12;
constexpr double kDistinctTol = 1e-12;
constexpr double kConjugateTol = 1e-12;

std::string describe(cplx z) {
  return "(" + std::to_string(z.real()) + (z.imag() < 0 ? "-" : "+") +
         std::to_string(std::abs(z.imag())) + "i)";
}

void check_distinct_nonzero(std::span<const cplx> lambdas) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (std::abs(lambdas[i]) <= kDistinctTol) {
      throw SpectrumError("eigenvalue " + describe(lambdas[i]) + " is zero");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(lambdas[i] - lambdas[j]) <= kDistinctTol) {
        throw SpectrumError("eigenvalue " + describe(lambdas[i]) + " is repeated");
      }
    }
  }
}

void check_conjugate_closed(std::span<const cplx> lambdas) {
  for (const cplx& z : lambdas) {
    if (std::abs(z.imag()) <= kConjugateTol) continue;
    const bool paired = std::any_of(lambdas.begin(), lambdas.end(), [&](const cplx& w) {
      return std::abs(w - std::conj(z)) <= kConjugateTol * std::max(1.0, std::abs(z));
    });
    if (!paired) {
      throw SpectrumError("eigenvalue " + describe(z) + " has no conjugate partner");
    }
  }
}

}  // namespace

double RateSchedule::v(long n) const { return std::pow(static_cast<double>(n), alpha); }

double RateSchedule::rho(long n) const { return 1.0 - c / v(n); }

void RateSchedule::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ConfigError("drift constant c must be positive, got " + std::to_string(c));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("rate exponent alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

void RateSchedule::validate_at(long n) const {
  validate();
  if (n < 2) throw ConfigError("sample size n must be at least 2");
  const double vn = v(n);
  if (!(vn > 1.0) || !(vn < static_cast<double>(n))) {
    throw ConfigError("v(n) = " + std::to_string(vn) + " must satisfy 1 < v(n) < n");
  }
  const double r = rho(n);
  if (!(r > 0.0 && r < 1.0)) {
    throw ConfigError("rho(n) = " + std::to_string(r) + " is outside (0, 1); n = " +
                      std::to_string(n) + " is too small for c = " + std::to_string(c));
  }
}

void EigenSpec::validate() const {
  if (p < 1 || p > kMaxOrder) {
    throw ConfigError("order p must lie in [1, " + std::to_string(kMaxOrder) + "]");
  }
  if (mode == UnitRootMode::Both && p < 2) {
    throw ConfigError("two unit roots need p >= 2");
  }
  if (mode == UnitRootMode::Both && !second) {
    throw ConfigError("UnitRootMode::Both needs a second rate schedule");
  }
  schedule.validate();
  if (second) second->validate();
  if (static_cast<int>(bulk.size()) != bulk_count()) {
    throw SpectrumError("expected " + std::to_string(bulk_count()) + " bulk eigenvalues, got " +
                        std::to_string(bulk.size()));
  }
  for (const cplx& z : bulk) {
    if (!(std::abs(z) < 1.0)) {
      throw SpectrumError("bulk eigenvalue " + describe(z) + " must lie strictly inside the unit disk");
    }
  }
  check_conjugate_closed(bulk);
  check_distinct_nonzero(limit_eigenvalues(*this));
}

std::string_view to_string(UnitRootMode mode) {
  switch (mode) {
    case UnitRootMode::PlusOne:
      return "+1";
    case UnitRootMode::MinusOne:
      return "-1";
    case UnitRootMode::Both:
      return "both";
  }
  return "?";
}

UnitRootMode parse_unit_root_mode(std::string_view text) {
  if (text == "+1" || text == "1" || text == "plus" || text == "PlusOne") return UnitRootMode::PlusOne;
  if (text == "-1" || text == "minus" || text == "MinusOne") return UnitRootMode::MinusOne;
  if (text == "both" || text == "Both") return UnitRootMode::Both;
  throw ConfigError("unknown unit-root mode '" + std::string(text) + "' (expected +1, -1 or both)");
}

void sort_spectrum(std::vector<cplx>& lambdas) {
  std::stable_sort(lambdas.begin(), lambdas.end(), [](const cplx& a, const cplx& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (std::abs(ma - mb) > kModulusTieTol * std::max(ma, mb)) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

std::vector<cplx> limit_eigenvalues(const EigenSpec& spec) {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(spec.p));
  switch (spec.mode) {
    case UnitRootMode::PlusOne:
      out.emplace_back(1.0, 0.0);
      break;
    case UnitRootMode::MinusOne:
      out.emplace_back(-1.0, 0.0);
      break;
    case UnitRootMode::Both:
      out.emplace_back(1.0, 0.0);
      out.emplace_back(-1.0, 0.0);
      break;
  }
  out.insert(out.end(), spec.bulk.begin(), spec.bulk.end());
  sort_spectrum(out);
  return out;
}

std::vector<cplx> eigenvalues_at(const EigenSpec& spec, long n) {
  spec.validate();
  spec.schedule.validate_at(n);

  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(spec.p));
  const double rho = spec.schedule.rho(n);
  double floor = rho;
  switch (spec.mode) {
    case UnitRootMode::PlusOne:
      out.emplace_back(rho, 0.0);
      break;
    case UnitRootMode::MinusOne:
      out.emplace_back(-rho, 0.0);
      break;
    case UnitRootMode::Both: {
      spec.second->validate_at(n);
      const double gap1 = spec.schedule.c / spec.schedule.v(n);
      const double gap2 = spec.second->c / spec.second->v(n);
      if (gap1 > gap2) {
        throw SpectrumError("under two unit roots the schedules must satisfy c/v_n <= d/w_n");
      }
      out.emplace_back(1.0 - gap1, 0.0);
      out.emplace_back(-1.0 + gap2, 0.0);
      floor = 1.0 - gap2;
      break;
    }
  }
  for (const cplx& z : spec.bulk) {
    if (!(std::abs(z) < floor)) {
      throw SpectrumError("bulk eigenvalue " + describe(z) + " is not dominated by the near-unit root(s) at n = " +
                          std::to_string(n));
    }
    out.push_back(z);
  }
  check_distinct_nonzero(out);
  sort_spectrum(out);
  return out;
}

Vector coefficients_from_eigenvalues(std::span<const cplx> lambdas) {
  // poly[k] is the coefficient of z^{p-k} in prod (z - lambda_i).
  std::vector<cplx> poly{cplx{1.0, 0.0}};
  for (const cplx& lambda : lambdas) {
    poly.emplace_back(0.0, 0.0);
    for (std::size_t k = poly.size() - 1; k > 0; --k) poly[k] -= lambda * poly[k - 1];
  }
  const auto p = static_cast<Eigen::Index>(lambdas.size());
  Vector theta(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const cplx coef = -poly[static_cast<std::size_t>(i) + 1];
    if (std::abs(coef.imag()) > 1e-12 * std::max(1.0, std::abs(coef))) {
      throw SpectrumError("spectrum is not closed under conjugation (imaginary coefficient residue " +
                          std::to_string(coef.imag()) + ")");
    }
    theta(i) = coef.real();
  }
  return theta;
}

Matrix companion_matrix(const Vector& theta) {
  const auto p = theta.size();
  Matrix A = Matrix::Zero(p, p);
  A.row(0) = theta.transpose();
  for (Eigen::Index i = 1; i < p; ++i) A(i, i - 1) = 1.0;
  return A;
}

CMatrix vandermonde_basis(std::span<const cplx> lambdas) {
  const auto p = static_cast<Eigen::Index>(lambdas.size());
  CMatrix P(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const cplx inv = 1.0 / lambdas[static_cast<std::size_t>(j)];
    cplx power{1.0, 0.0};
    for (Eigen::Index i = 0; i < p; ++i) {
      P(i, j) = power;
      power *= inv;
    }
  }
  return P;
}

CVector pi_column(std::span<const cplx> lambdas) {
  const auto p = static_cast<Eigen::Index>(lambdas.size());
  CVector pi(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const cplx lk = lambdas[static_cast<std::size_t>(k)];
    cplx denom{1.0, 0.0};
    for (Eigen::Index l = 0; l < p; ++l) {
      if (l != k) denom *= lambdas[static_cast<std::size_t>(l)] - lk;
    }
    if (std::abs(denom) == 0.0) throw SpectrumError("repeated eigenvalue in pi column");
    pi(k) = std::pow(-lk, static_cast<int>(p - 1)) / denom;
  }
  return pi;
}

bool CompanionModel::has_real_spectrum(double tol) const {
  return (limit_eigenvalues.imag().cwiseAbs().maxCoeff() <= tol) &&
         (eigenvalues.imag().cwiseAbs().maxCoeff() <= tol);
}

CompanionModel companion_model(const EigenSpec& spec, long n, double condition_cap) {
  const std::vector<cplx> lambdas = eigenvalues_at(spec, n);
  const std::vector<cplx> limit = limit_eigenvalues(spec);

  CompanionModel m;
  m.n = n;
  m.p = spec.p;
  m.mode = spec.mode;
  m.c = spec.schedule.c;
  m.v = spec.schedule.v(n);
  m.rho = spec.schedule.rho(n);
  m.theta = coefficients_from_eigenvalues(lambdas);
  m.A = companion_matrix(m.theta);
  m.eigenvalues = Eigen::Map<const CVector>(lambdas.data(), spec.p);
  m.limit_eigenvalues = Eigen::Map<const CVector>(limit.data(), spec.p);
  m.P = vandermonde_basis(lambdas);

  const Eigen::JacobiSVD<CMatrix> svd(m.P);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond <= condition_cap)) {
    throw NumericalError("eigenvector basis is ill-conditioned (cond = " + std::to_string(cond) + ")");
  }
  m.P_inv = m.P.fullPivLu().solve(CMatrix::Identity(spec.p, spec.p));
  m.pi_col = pi_column(limit);
  return m;
}

ModelDiagnostics diagnose(const CompanionModel& m) {
  ModelDiagnostics d{};
  const CMatrix A = m.A.cast<cplx>();
  for (Eigen::Index j = 0; j < m.p; ++j) {
    const CVector col = m.P.col(j);
    const double r = (A * col - m.eigenvalues(j) * col).norm() / col.norm();
    d.eigenpair_residual = std::max(d.eigenpair_residual, r);
  }
  d.inverse_residual = (m.P * m.P_inv - CMatrix::Identity(m.p, m.p)).cwiseAbs().maxCoeff();
  d.first_row_imag = m.P_inv.row(0).imag().cwiseAbs().maxCoeff();
  d.min_abs_pi = m.pi_col.cwiseAbs().minCoeff();
  d.spectral_radius_error = std::abs(m.eigenvalues.cwiseAbs().maxCoeff() - m.rho);
  return d;
}

std::vector<double> sample_bulk_eigenvalues(Rng& rng, int p, double rho, double eps) {
  if (p < 1) throw ConfigError("order p must be positive");
  if (p == 1) return {};
  if (!(eps > 0.0 && eps < rho)) {
    throw ConfigError("bulk sampling margin must satisfy 0 < eps < rho");
  }
  constexpr double kMinGap = 1e-3;
  constexpr int kMaxRedraws = 1000;

  std::uniform_real_distribution<double> draw(-rho + eps, rho - eps);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(p - 1));
  int redraws = 0;
  while (static_cast<int>(out.size()) < p - 1) {
    const double x = draw(rng);
    const bool ok = std::abs(x) >= kMinGap &&
                    std::none_of(out.begin(), out.end(), [x](double y) { return std::abs(x - y) < kMinGap; });
    if (ok) {
      out.push_back(x);
    } else if (++redraws > kMaxRedraws) {
      throw SamplingError("could not draw " + std::to_string(p - 1) + " separated bulk eigenvalues in " +
                          std::to_string(kMaxRedraws) + " redraws");
    }
  }
  return out;
}

}  // namespace nearunit
