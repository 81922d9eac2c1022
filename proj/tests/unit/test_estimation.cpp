#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace nearunit;
using fixture::reals;
using fixture::spec;

namespace {

std::vector<double> with_initial_lags(const TriangularPath& path) {
  std::vector<double> x;
  for (int i = path.p - 1; i >= 1; --i) x.push_back(path.phi0(i));
  for (Eigen::Index k = 0; k < path.x.size(); ++k) x.push_back(path.x(k));
  return x;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("hand example p = 1") {
  const TriangularPath path = path_from_series((Vector(3) << 0.0, 1.0, 2.0).finished(), 1);
  const EstimationResult r = ols(path);
  CHECK(r.theta_hat(0) == doctest::Approx(2.0));
  CHECK(r.S(0, 0) == doctest::Approx(1.0));
  CHECK(r.S_full(0, 0) == doctest::Approx(5.0));
  CHECK_FALSE(r.has_noise);
}

TEST_CASE("noise-free identification") {
  auto model = fixture::shared_model(spec(3, UnitRootMode::PlusOne, reals({0.5, -0.4})), 200);
  Rng rng(1);
  const TriangularPath path =
      simulate(model, NoiseModel::dirac(), InitialStatePolicy::fixed_vector((Vector(3) << 1, -2, 0.5).finished()), rng);
  const EstimationResult r = ols(path);
  CHECK((r.theta_hat - model->theta).norm() < 1e-8);
  CHECK(r.normal_residual < 1e-8);
}

TEST_CASE("ols matches the Gram-assembly oracle") {
  for (int p : {1, 2, 3, 5}) {
    std::vector<cplx> bulk;
    for (int i = 1; i < p; ++i) bulk.emplace_back(0.8 - 0.3 * i);
    auto model = fixture::shared_model(spec(p, UnitRootMode::PlusOne, bulk), 3000);
    Rng rng(static_cast<std::uint64_t>(p));
    const TriangularPath path = simulate(model, NoiseModel::gaussian(1.0), InitialStatePolicy::stationary(), rng);
    const EstimationResult r = ols(path);
    const std::vector<double> ref = oracle::gram_ols(with_initial_lags(path), static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) CHECK(std::abs(r.theta_hat(i) - ref[i]) <= 1e-10 * std::max(1.0, std::abs(ref[i])));
    CHECK(r.ridge_used == 0.0);
    CHECK(r.normal_residual < 1e-8);
    CHECK(r.S.isApprox(r.S.transpose()));
    // L and Z supports
    CHECK(r.L_noise.cwiseAbs().sum() == doctest::Approx(std::abs(r.L_noise(0, 0))));
    CHECK(r.Z.rightCols(p - 1).cwiseAbs().sum() == 0.0);
  }
}

TEST_CASE("degenerate and singular designs") {
  auto model = fixture::shared_model(spec(2, UnitRootMode::PlusOne, reals({0.5})), 100);
  Rng rng(1);
  const TriangularPath zero = simulate(model, NoiseModel::dirac(), InitialStatePolicy::zero(), rng);
  const EstimationResult r = ols(zero);
  CHECK(r.degenerate);
  CHECK(r.theta_hat.isZero());

  // A constant series makes the p = 2 Gram matrix rank one.
  const TriangularPath flat = path_from_series(Vector::Ones(50), 2);
  const EstimationResult f = ols(flat);
  CHECK_FALSE(f.degenerate);
  CHECK(f.ridge_used > 0.0);
  CHECK(f.theta_hat.allFinite());
  CHECK_THROWS_AS(ols(path_from_series(Vector::Ones(3), 2)), DimensionError);
}

TEST_CASE("variance decomposition identity") {
  Rng draw(17);
  for (int p = 1; p <= 5; ++p) {
    for (UnitRootMode mode : {UnitRootMode::PlusOne, UnitRootMode::MinusOne}) {
      for (long n : {100L, 5000L}) {
        const auto bulk = sample_bulk_eigenvalues(draw, p, RateSchedule{}.rho(n), 0.1);
        auto model = fixture::shared_model(spec(p, mode, {bulk.begin(), bulk.end()}), n);
        Rng rng(static_cast<std::uint64_t>(n + p));
        const TriangularPath path = simulate(model, NoiseModel::gaussian(1.0), InitialStatePolicy::stationary(), rng);
        const EstimationResult r = ols(path);
        CHECK(decomposition_residual(r, *model) < 1e-8);

        EstimationResult tampered = r;
        tampered.S(0, 0) += 1e-3 * r.S.norm();
        CHECK(decomposition_residual(tampered, *model) > 1e-6);
      }
    }
  }
  const TriangularPath bare = path_from_series(Vector::LinSpaced(20, 1.0, 2.0), 1);
  auto model = fixture::shared_model(spec(1, UnitRootMode::PlusOne, {}), 100);
  CHECK_THROWS_AS(decomposition_residual(ols(bare), *model), DimensionError);
}

TEST_CASE("empirical covariance diagnostics") {
  auto model = fixture::shared_model(spec(2, UnitRootMode::PlusOne, reals({0.5})), 1000);
  Rng rng(1);
  const TriangularPath zero =
      simulate(model, NoiseModel::dirac(), InitialStatePolicy::fixed_vector(Vector::Zero(2)), rng);
  const double expected = (1 - model->rho) * stationary_covariance(model->A, 1.0).norm();
  CHECK(empirical_covariance_check(ols(zero), *model, 1.0) == doctest::Approx(expected));

  auto ar1 = std::make_shared<const CompanionModel>(fixture::stable_model(reals({0.5}), 100000));
  Rng rng2(2);
  const TriangularPath path = simulate(ar1, NoiseModel::gaussian(1.0), InitialStatePolicy::zero(), rng2);
  const EstimationResult r = ols(path);
  CHECK(r.S(0, 0) / static_cast<double>(r.n) == doctest::Approx(1.0 / 0.75).epsilon(0.05));
}

TEST_CASE("consistency: median estimation error shrinks with n") {
  const EigenSpec s = spec(3, UnitRootMode::PlusOne, reals({0.5, -0.5}));
  double prev = 1e300;
  for (long n : {1000L, 10000L, 100000L}) {
    auto model = fixture::shared_model(s, n);
    std::vector<double> errs;
    for (int rep = 0; rep < 200; ++rep) {
      Rng rng = substream(5, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(n));
      const TriangularPath path = simulate(model, NoiseModel::gaussian(1.0), InitialStatePolicy::zero(), rng);
      errs.push_back((ols(path).theta_hat - model->theta).norm());
    }
    const double med = median(errs);
    CHECK(med < prev);
    prev = med;
  }
}
