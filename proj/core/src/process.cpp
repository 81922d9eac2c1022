#include "nearunit/process.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "nearunit/errors.hpp"
#include "nearunit/linalg.hpp"

namespace nearunit {

namespace {

// Fills `out` with i.i.d. draws, constructing the distribution once.
void fill_noise(const NoiseModel& noise, Rng& rng, Vector& out) {
  switch (noise.kind) {
    case NoiseModel::Kind::Gaussian: {
      std::normal_distribution<double> dist(0.0, std::sqrt(noise.param));
      for (auto& e : out) e = dist(rng);
      return;
    }
    case NoiseModel::Kind::Laplace: {
      std::exponential_distribution<double> dist(1.0 / noise.param);
      for (auto& e : out) {
        const bool negative = (rng() & 1U) != 0U;
        const double magnitude = dist(rng);
        e = negative ? -magnitude : magnitude;
      }
      return;
    }
    case NoiseModel::Kind::StudentT: {
      std::student_t_distribution<double> dist(noise.param);
      for (auto& e : out) e = dist(rng);
      return;
    }
    case NoiseModel::Kind::Rademacher:
      for (auto& e : out) e = (rng() & 1U) != 0U ? noise.param : -noise.param;
      return;
    case NoiseModel::Kind::Dirac:
      out.setZero();
      return;
  }
}

Vector initial_state(const CompanionModel& model, const NoiseModel& noise, const InitialStatePolicy& init,
                     Rng& rng) {
  const Eigen::Index p = model.p;
  switch (init.kind) {
    case InitialState::Zero:
      return Vector::Zero(p);
    case InitialState::Fixed:
      if (init.fixed.size() != p) {
        throw DimensionError("fixed initial state has length " + std::to_string(init.fixed.size()) +
                             ", expected " + std::to_string(p));
      }
      return init.fixed;
    case InitialState::Stationary: {
      const double sigma2 = noise.variance();
      if (sigma2 == 0.0) return Vector::Zero(p);
      const Matrix gamma = stationary_covariance(model.A, sigma2);
      // Gamma(0) is positive definite for a stable companion matrix, but it
      // can be badly scaled near the unit circle; fall back to a symmetric
      // eigen square root if Cholesky refuses.
      Matrix root;
      Eigen::LLT<Matrix> llt(gamma);
      if (llt.info() == Eigen::Success) {
        root = llt.matrixL();
      } else {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gamma);
        root = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
      }
      std::normal_distribution<double> dist(0.0, 1.0);
      Vector z(p);
      for (auto& zi : z) zi = dist(rng);
      return root * z;
    }
  }
  return Vector::Zero(p);
}

TriangularPath prepare(std::shared_ptr<const CompanionModel> model, const NoiseModel& noise,
                       const InitialStatePolicy& init, Rng& rng) {
  if (!model) throw ConfigError("simulate: null model");
  noise.validate();
  if (model->n < model->p) throw ConfigError("simulate: need n >= p");
  TriangularPath path;
  path.n = model->n;
  path.p = model->p;
  path.phi0 = initial_state(*model, noise, init, rng);
  path.noise.resize(model->n);
  fill_noise(noise, rng, path.noise);
  path.x.resize(model->n + 1);
  path.x(0) = path.phi0(0);
  path.model = std::move(model);
  return path;
}

}  // namespace

double NoiseModel::variance() const {
  switch (kind) {
    case Kind::Gaussian:
      return param;
    case Kind::Laplace:
      return 2.0 * param * param;
    case Kind::StudentT:
      return param / (param - 2.0);
    case Kind::Rademacher:
      return param * param;
    case Kind::Dirac:
      return 0.0;
  }
  return 0.0;
}

void NoiseModel::validate(double moment_margin) const {
  if (kind == Kind::Dirac) return;
  if (!(param > 0.0) || !std::isfinite(param)) {
    throw ConfigError(std::string("noise parameter for ") + std::string(to_string(kind)) + " must be positive");
  }
  if (kind == Kind::StudentT && !(param > 2.0 + moment_margin)) {
    throw ConfigError("Student t noise needs df > " + std::to_string(2.0 + moment_margin) +
                      " for the required moments, got " + std::to_string(param));
  }
}

double NoiseModel::draw(Rng& rng) const {
  Vector one(1);
  fill_noise(*this, rng, one);
  return one(0);
}

std::string_view to_string(NoiseModel::Kind kind) {
  switch (kind) {
    case NoiseModel::Kind::Gaussian:
      return "gaussian";
    case NoiseModel::Kind::Laplace:
      return "laplace";
    case NoiseModel::Kind::StudentT:
      return "student";
    case NoiseModel::Kind::Rademacher:
      return "rademacher";
    case NoiseModel::Kind::Dirac:
      return "dirac";
  }
  return "?";
}

NoiseModel::Kind parse_noise_kind(std::string_view text) {
  if (text == "gaussian" || text == "normal") return NoiseModel::Kind::Gaussian;
  if (text == "laplace") return NoiseModel::Kind::Laplace;
  if (text == "student" || text == "student-t" || text == "t") return NoiseModel::Kind::StudentT;
  if (text == "rademacher") return NoiseModel::Kind::Rademacher;
  if (text == "dirac" || text == "none") return NoiseModel::Kind::Dirac;
  throw ConfigError("unknown noise law '" + std::string(text) + "'");
}

double TriangularPath::lag(long k) const {
  if (k >= 0) return x(k);
  if (k <= -p) throw DimensionError("lag index before the initial state");
  return phi0(-k);
}

Vector TriangularPath::state(long k) const {
  Vector phi(p);
  for (int i = 0; i < p; ++i) phi(i) = lag(k - i);
  return phi;
}

TriangularPath simulate(std::shared_ptr<const CompanionModel> model, const NoiseModel& noise,
                        const InitialStatePolicy& init, Rng& rng) {
  TriangularPath path = prepare(std::move(model), noise, init, rng);
  const int p = path.p;
  const long n = path.n;
  const Vector& theta = path.model->theta;

  // buf[j + p - 1] holds X_j for j = 1 - p, ..., n.
  std::vector<double> buf(static_cast<std::size_t>(n + p));
  for (int i = 0; i < p; ++i) buf[static_cast<std::size_t>(p - 1 - i)] = path.phi0(i);
  for (long k = 1; k <= n; ++k) {
    const std::size_t at = static_cast<std::size_t>(k + p - 1);
    double acc = 0.0;
    for (int i = 0; i < p; ++i) acc += theta(i) * buf[at - 1 - static_cast<std::size_t>(i)];
    buf[at] = acc + path.noise(k - 1);
  }
  for (long k = 0; k <= n; ++k) path.x(k) = buf[static_cast<std::size_t>(k + p - 1)];
  return path;
}

TriangularPath simulate_vector_form(std::shared_ptr<const CompanionModel> model, const NoiseModel& noise,
                                    const InitialStatePolicy& init, Rng& rng) {
  TriangularPath path = prepare(std::move(model), noise, init, rng);
  const Matrix& A = path.model->A;
  const int p = path.p;
  Vector phi = path.phi0;
  Vector next(p);
  for (long k = 1; k <= path.n; ++k) {
    for (int r = 0; r < p; ++r) {
      double acc = 0.0;
      for (int i = 0; i < p; ++i) acc += A(r, i) * phi(i);
      next(r) = r == 0 ? acc + path.noise(k - 1) : acc;
    }
    phi.swap(next);
    path.x(k) = phi(0);
  }
  return path;
}

void write_path_csv(std::ostream& os, const TriangularPath& path) {
  os << "k,x\n";
  char buf[64];
  for (long k = 0; k <= path.n; ++k) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g\n", k, path.x(k));
    os << buf;
  }
}

Vector read_path_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("k,x", 0) != 0) {
    throw ConfigError("path CSV must start with the header 'k,x'");
  }
  std::vector<double> values;
  long expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("malformed path CSV row: " + line);
    const long k = std::stol(line.substr(0, comma));
    if (k != expected) throw ConfigError("path CSV rows must be consecutive starting at k = 0");
    values.push_back(std::stod(line.substr(comma + 1)));
    ++expected;
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace nearunit
