#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"

using namespace nearunit;
using fixture::reals;
using fixture::spec;

namespace {

EstimationResult fit(const std::shared_ptr<const CompanionModel>& model, std::uint64_t seed) {
  Rng rng(seed);
  return ols(simulate(model, NoiseModel::gaussian(1.0), InitialStatePolicy::zero(), rng));
}

}  // namespace

TEST_CASE("chi1_cdf") {
  CHECK(chi1_cdf(0.0) == 0.0);
  CHECK(1.0 - chi1_cdf(6.5) == doctest::Approx(0.0108).epsilon(0.01));
  CHECK(chi1_cdf(3.841458820694124) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK_THROWS_AS(chi1_cdf(-1e-9), DomainError);
}

TEST_CASE("ks_distance and quantile") {
  const std::vector<double> one{0.5};
  CHECK(ks_distance(one, [](double x) { return x; }) == doctest::Approx(0.5));
  const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
  CHECK(ks_distance(grid, [](double x) { return x; }) == doctest::Approx(0.1));
  CHECK(quantile(grid, 0.5) == doctest::Approx(0.5));
  CHECK(quantile(grid, 0.125) == doctest::Approx(0.2));
  CHECK(quantile(grid, 1.0) == doctest::Approx(0.9));
  CHECK_THROWS_AS(ks_distance({}, [](double x) { return x; }), DomainError);
  CHECK_THROWS_AS(quantile(grid, 1.5), DomainError);
}

TEST_CASE("KS null calibration by direct simulation") {
  // 95th percentile of the KS distance for N = 3000 draws from chi^2_1
  // itself should sit near 1.36 / sqrt(3000) = 0.0248.
  Rng rng(2024);
  std::normal_distribution<double> gauss;
  std::vector<double> dists;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<double> s(3000);
    for (double& x : s) {
      const double z = gauss(rng);
      x = z * z;
    }
    dists.push_back(ks_distance(s, chi1_cdf));
  }
  const double q95 = quantile(dists, 0.95);
  CHECK(q95 == doctest::Approx(1.36 / std::sqrt(3000.0)).epsilon(0.12));
}

TEST_CASE("statistics vanish at the truth") {
  auto model = fixture::shared_model(spec(3, UnitRootMode::PlusOne, reals({0.5, -0.5})), 5000);
  EstimationResult r = fit(model, 1);
  r.theta_hat = model->theta;
  CHECK(normalized_error_real(r, *model).isZero());
  CHECK(scalar_statistic_complex(r, *model) == 0.0);
  CHECK(z_squared(r, *model) == 0.0);
}

TEST_CASE("z_squared equals the rescaled square of the scalar statistic") {
  for (UnitRootMode mode : {UnitRootMode::PlusOne, UnitRootMode::MinusOne}) {
    for (int p : {1, 2, 4}) {
      std::vector<cplx> bulk;
      for (int i = 1; i < p; ++i) bulk.emplace_back(0.7 - 0.4 * i);
      auto model = fixture::shared_model(spec(p, mode, bulk, 1.5, 0.4), 4000);
      const EstimationResult r = fit(model, static_cast<std::uint64_t>(p));
      const double s = scalar_statistic_complex(r, *model);
      const double pi11 = model->pi11();
      CHECK(z_squared(r, *model) == doctest::Approx(pi11 * pi11 / (2 * 1.5) * s * s).epsilon(1e-12));
      CHECK(z_squared(r, *model) >= 0.0);
      CHECK(scalar_statistic_variance(*model) == doctest::Approx(2 * 1.5 / (pi11 * pi11)));
    }
  }
}

TEST_CASE("p = 1 reductions") {
  auto model = fixture::shared_model(spec(1, UnitRootMode::PlusOne, {}), 10000);
  const EstimationResult r = fit(model, 3);
  const double d = r.theta_hat(0) - model->theta(0);
  const double nv = 10000.0 * 100.0;
  CHECK(scalar_statistic_complex(r, *model) == doctest::Approx(std::sqrt(nv) * d).epsilon(1e-12));
  CHECK(z_squared(r, *model) == doctest::Approx(nv / 2 * d * d).epsilon(1e-12));
  const double u = normalized_error_real(r, *model)(0);
  CHECK(u == doctest::Approx(std::sqrt(10000.0 / 0.01) * d).epsilon(1e-12));
  // H_0 = 1/2 turns the squared normalized error into Z^2
  CHECK(u * u * 0.5 == doctest::Approx(z_squared(r, *model)).epsilon(1e-12));
  CHECK(leading_weights(*model) == Vector::Ones(1));
}

TEST_CASE("branch errors") {
  const cplx z = std::polar(0.6, std::numbers::pi / 4);
  auto complex_model = fixture::shared_model(spec(3, UnitRootMode::PlusOne, {z, std::conj(z)}), 5000);
  const EstimationResult rc = fit(complex_model, 4);
  CHECK_THROWS_AS(normalized_error_real(rc, *complex_model), BranchError);
  CHECK(std::isfinite(scalar_statistic_complex(rc, *complex_model)));

  auto both = fixture::shared_model(spec(3, UnitRootMode::Both, reals({0.4})), 5000);
  const EstimationResult rb = fit(both, 5);
  CHECK_THROWS_AS(z_squared(rb, *both), BranchError);
  CHECK_THROWS_AS(z_squared_plugin(rb, *both), BranchError);
  CHECK(normalized_error_real(rb, *both).allFinite());
}

TEST_CASE("plug-in statistic is close to the oracle one on long paths") {
  auto model = fixture::shared_model(spec(2, UnitRootMode::PlusOne, reals({0.3})), 100000);
  const EstimationResult r = fit(model, 6);
  const double oracle = z_squared(r, *model);
  const double plug = z_squared_plugin(r, *model);
  CHECK(plug >= 0.0);
  CHECK(std::isfinite(plug));
  CHECK(std::abs(plug - oracle) < 0.5 * (1.0 + oracle));
}

TEST_CASE("leading weights") {
  auto model = fixture::shared_model(spec(3, UnitRootMode::MinusOne, reals({0.5, -0.2})), 10000);
  const Vector w = leading_weights(*model);
  CHECK(w(0) == 1.0);
  CHECK(w(1) == doctest::Approx(-1.0 / 0.99));
  CHECK(w(2) == doctest::Approx(1.0 / (0.99 * 0.99)));
  CHECK((w - real_view(CVector(model->P.col(0)))).norm() < 1e-12);
}

TEST_CASE("normalized error covariance tracks the finite-n Gram inverse") {
  ExperimentConfig c;
  c.p = 2;
  c.n = 20000;
  c.reps = 2000;
  c.seed = 7;
  c.statistic = Statistic::RealVector;
  c.fixed_bulk = reals({0.5});
  const Matrix cov = run_experiment(c).sample_cov;
  const CompanionModel m = companion_model(c.spec_with_bulk(*c.fixed_bulk), c.n);
  const Matrix P = real_view(m.P);
  const Vector scale = rate_matrices(m).V.diagonal().cwiseSqrt().cwiseInverse();
  const Matrix exact =
      scale.asDiagonal() * P.transpose() * stationary_covariance(m.A, 1.0).inverse() * P * scale.asDiagonal();
  CHECK((cov - exact).norm() / exact.norm() < 0.1);

  // the exact covariance reaches H_0^{-1} at rate sqrt(1 - rho_n)
  const Matrix limit = real_view(h0_matrix(reals({1.0, 0.5}), UnitRootMode::PlusOne)).inverse();
  double prev = 1e300;
  for (long n : {20000L, 2000000L, 200000000L}) {
    const CompanionModel mn = companion_model(c.spec_with_bulk(*c.fixed_bulk), n);
    const Matrix Pn = real_view(mn.P);
    const Vector sn = rate_matrices(mn).V.diagonal().cwiseSqrt().cwiseInverse();
    const Matrix en = sn.asDiagonal() * Pn.transpose() * stationary_covariance(mn.A, 1.0).inverse() * Pn * sn.asDiagonal();
    const double dist = (en - limit).norm() / limit.norm();
    CHECK(dist < prev);
    CHECK(dist / std::sqrt(1 - mn.rho) < 3.0);
    prev = dist;
  }
}
