#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvsc/weighting.hpp"

#include <cmath>
#include <random>
#include <vector>

using mvsc::WeightRegularizer;

TEST_CASE("psi matches its closed form") {
  WeightRegularizer unit(1.0);
  CHECK(unit.psi(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(unit.psi(2.0) == doctest::Approx(0.5).epsilon(1e-15));
  WeightRegularizer tiny(1e-5);
  CHECK(tiny.psi(1.0) == doctest::Approx(-0.99999).epsilon(1e-12));
  CHECK_THROWS_AS(unit.psi(0.0), std::invalid_argument);
  CHECK_THROWS_AS(unit.psi(-1.0), std::invalid_argument);
}

TEST_CASE("latent loss matches its closed form") {
  WeightRegularizer unit(1.0);
  CHECK(unit.latent_loss(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(unit.latent_loss(3.0) == doctest::Approx(2.0).epsilon(1e-15));
  WeightRegularizer zero(0.0);
  CHECK(zero.latent_loss(4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(unit.latent_loss(-0.1), std::invalid_argument);
}

TEST_CASE("minimizer matches its closed form") {
  WeightRegularizer unit(1.0);
  CHECK(unit.minimizer(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(unit.minimizer(3.0) == doctest::Approx(0.5).epsilon(1e-15));
  WeightRegularizer tiny(1e-5);
  CHECK(tiny.minimizer(0.0) == doctest::Approx(316.2277660168379).epsilon(1e-12));
  WeightRegularizer zero(0.0);
  CHECK_THROWS_AS(zero.minimizer(0.0), std::invalid_argument);
}

TEST_CASE("conjugacy residual vanishes when the grid holds the minimizer") {
  WeightRegularizer unit(1.0);
  std::vector<double> with_opt = {0.1, 0.5, 2.0};
  CHECK(unit.conjugacy_residual(3.0, with_opt) == doctest::Approx(0.0).epsilon(1e-14));
  std::vector<double> around_zero = {0.5, 1.0, 2.0};
  CHECK(unit.conjugacy_residual(0.0, around_zero) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(unit.conjugacy_residual(1.0, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("conjugacy residual small on dense log grids around the minimizer") {
  WeightRegularizer reg(1e-5);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 100.0);
  for (int trial = 0; trial < 25; ++trial) {
    double ell = unif(rng);
    double center = reg.minimizer(ell);
    std::vector<double> grid;
    for (int i = 0; i < 20000; ++i)
      grid.push_back(center * std::pow(10.0, -0.1 + 0.2 * i / 19999.0));
    CHECK(reg.conjugacy_residual(ell, grid) <= 1e-8);
  }
}

TEST_CASE("minimizer satisfies the first-order condition and beats grid search") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 50.0);
  for (double gamma : {1e-5, 1.0, 10.0}) {
    WeightRegularizer reg(gamma);
    for (int trial = 0; trial < 20; ++trial) {
      double ell = unif(rng);
      double p = reg.minimizer(ell);
      // d/dp [p*ell + psi(p)] = ell + gamma - 1/p^2 = 0 at the minimizer.
      CHECK(std::abs(gamma + ell - 1.0 / (p * p)) <= 1e-8 * (1.0 + gamma + ell));
      double at_min = p * ell + reg.psi(p);
      for (double factor : {0.5, 0.9, 1.1, 2.0}) {
        double q = p * factor;
        CHECK(at_min <= q * ell + reg.psi(q) + 1e-12);
      }
    }
  }
}

TEST_CASE("latent loss is concave and the weighting is anti-monotone") {
  WeightRegularizer reg(1e-5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double a = unif(rng), b = unif(rng), t = unit(rng);
    double mix = reg.latent_loss(t * a + (1 - t) * b);
    CHECK(mix >= t * reg.latent_loss(a) + (1 - t) * reg.latent_loss(b) - 1e-12);
    double lo = std::min(a, b), hi = std::max(a, b);
    if (lo < hi) CHECK(reg.minimizer(lo) > reg.minimizer(hi));
  }
}

TEST_CASE("psi is midpoint convex on positive weights") {
  WeightRegularizer reg(1e-5);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(1e-3, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    double a = unif(rng), b = unif(rng);
    CHECK(reg.psi(0.5 * (a + b)) <= 0.5 * (reg.psi(a) + reg.psi(b)) + 1e-12);
  }
}

TEST_CASE("gamma = 1 reproduces the qualitative shape of both curves") {
  WeightRegularizer reg(1.0);
  CHECK(reg.minimizer(0.0) == doctest::Approx(1.0));
  CHECK(reg.latent_loss(0.0) == doctest::Approx(0.0));
  double prev_sigma = reg.minimizer(0.0);
  double prev_phi = reg.latent_loss(0.0);
  for (double ell = 0.5; ell <= 10.0; ell += 0.5) {
    CHECK(reg.minimizer(ell) < prev_sigma);
    CHECK(reg.latent_loss(ell) > prev_phi);
    prev_sigma = reg.minimizer(ell);
    prev_phi = reg.latent_loss(ell);
  }
}

TEST_CASE("negative gamma is rejected") {
  CHECK_THROWS_AS(WeightRegularizer(-0.5), std::invalid_argument);
}
