// Apache License, Version 2.0, refer to LICENSE.txt

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "genrec/errors.hpp"
#include "genrec/latent.hpp"

using namespace genrec;

TEST_CASE("partitions split users and items into contiguous equal groups") {
  const PartitionSpec half = build_partitions(4, 4, 4, 2, 2);
  CHECK(half.user_population == std::vector<std::uint32_t>{0, 0, 1, 1});
  CHECK(half.item_category == std::vector<std::uint32_t>{0, 0, 1, 1});
  CHECK(half.block_begin(0) == 0);
  CHECK(half.block_end(0) == 2);
  CHECK(half.block_begin(1) == 2);
  CHECK(half.block_end(1) == 4);

  const PartitionSpec worked = build_partitions(3, 2, 4, 3, 2);
  CHECK(worked.user_population == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(worked.item_category == std::vector<std::uint32_t>{0, 1});
  CHECK(worked.block_size() == 2);

  const PartitionSpec trivial = build_partitions(1, 1, 1, 1, 1);
  CHECK(trivial.user_population == std::vector<std::uint32_t>{0});
  CHECK(trivial.block_size() == 1);

  // remainder goes to the last group
  const PartitionSpec uneven = build_partitions(5, 7, 4, 2, 2);
  CHECK(uneven.user_population == std::vector<std::uint32_t>{0, 0, 1, 1, 1});
  CHECK(uneven.item_category == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("partition constraint violations") {
  CHECK_THROWS_AS(build_partitions(4, 4, 4, 2, 5), ConfigError);   // c > K
  CHECK_THROWS_AS(build_partitions(4, 4, 4, 2, 3), ConfigError);   // K % c != 0
  CHECK_THROWS_AS(build_partitions(1, 4, 4, 2, 2), ConfigError);   // p > n_users
  CHECK_THROWS_AS(build_partitions(4, 1, 4, 2, 2), ConfigError);   // c > n_items
  CHECK_THROWS_AS(build_partitions(0, 4, 4, 1, 1), ConfigError);
}

TEST_CASE("affinity defaults and validation") {
  const AffinityMatrix id2 = AffinityMatrix::default_for(2, 2);
  CHECK(id2.prefers(0, 0));
  CHECK_FALSE(id2.prefers(0, 1));
  CHECK(id2.prefers(1, 1));

  const AffinityMatrix with_neutral = AffinityMatrix::default_for(3, 2);
  CHECK(with_neutral.prefers(0, 0));
  CHECK_FALSE(with_neutral.prefers(0, 1));
  CHECK(with_neutral.prefers(2, 0));
  CHECK(with_neutral.prefers(2, 1));

  const AffinityMatrix single = AffinityMatrix::default_for(4, 1);
  for (std::uint32_t j = 0; j < 4; ++j) CHECK(single.prefers(j, 0));

  CHECK_THROWS_AS(AffinityMatrix::default_for(5, 3), ConfigError);
  CHECK_THROWS_AS(AffinityMatrix(2, 2, {true, false, false, false}), ConfigError);
}

TEST_CASE("item concentration masks everything outside the category block") {
  const PartitionSpec spec = build_partitions(4, 4, 4, 2, 2);
  RandomStream rng(37, {"t", 0});

  const ConcentrationVector conc = item_concentration(0, spec, 0.01, rng);
  CHECK(conc.size() == 4);
  CHECK(conc[2] == 0.01);
  CHECK(conc[3] == 0.01);
  CHECK(conc[0] + conc[1] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(conc[0] > 0.0);
  CHECK(conc[1] > 0.0);

  const ConcentrationVector wide = item_concentration(3, spec, 0.5, rng);
  CHECK(wide[0] == 0.5);
  CHECK(wide[1] == 0.5);
  CHECK(wide[2] + wide[3] == doctest::Approx(0.1).epsilon(1e-9));

  const PartitionSpec single = build_partitions(4, 4, 4, 2, 1);
  const ConcentrationVector full = item_concentration(0, single, 0.01, rng);
  double sum = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) sum += full[k];
  CHECK(sum == doctest::Approx(0.1).epsilon(1e-9));

  CHECK_THROWS_AS(item_concentration(0, spec, 0.0, rng), ParameterError);
}

TEST_CASE("user concentration covers the union of preferred blocks") {
  const PartitionSpec spec = build_partitions(4, 4, 4, 2, 2);
  RandomStream rng(37, {"t", 1});

  const AffinityMatrix id2 = AffinityMatrix::identity(2);
  const ConcentrationVector first = user_concentration(0, spec, id2, 0.01, rng);
  CHECK(first[2] == 0.01);
  CHECK(first[3] == 0.01);
  CHECK(first[0] + first[1] == doctest::Approx(10.0).epsilon(1e-9));

  const AffinityMatrix neutral(2, 2, {true, true, true, true});
  const ConcentrationVector wide = user_concentration(0, spec, neutral, 0.01, rng);
  double sum = 0.0;
  for (std::size_t k = 0; k < wide.size(); ++k) sum += wide[k];
  CHECK(sum == doctest::Approx(10.0).epsilon(1e-9));

  const PartitionSpec trivial = build_partitions(2, 2, 4, 1, 1);
  const ConcentrationVector full =
      user_concentration(0, trivial, AffinityMatrix::default_for(1, 1), 0.01, rng);
  double full_sum = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) full_sum += full[k];
  CHECK(full_sum == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("latent factor rows are simplex vectors with the expected masking") {
  const std::uint32_t n = 10000;
  const PartitionSpec spec = build_partitions(n, 200, 4, 2, 2);
  const AffinityMatrix affinity = AffinityMatrix::identity(2);
  const double eps = 0.01;
  const LatentFactors lf = sample_latent_factors(spec, affinity, eps, 41);

  double off_mass = 0.0;
  std::uint32_t masked_users = 0;
  for (std::uint32_t u = 0; u < n; ++u) {
    double sum = 0.0;
    for (std::uint32_t k = 0; k < 4; ++k) {
      REQUIRE(lf.rho.at(u, k) >= 0.0);
      sum += lf.rho.at(u, k);
    }
    REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    if (spec.user_population[u] == 0) {
      off_mass += lf.rho.at(u, 2) + lf.rho.at(u, 3);
      ++masked_users;
      CHECK(lf.mu_rho.at(u, 2) == eps);
      CHECK(lf.mu_rho.at(u, 3) == eps);
    }
  }
  // Dirichlet mean: off-block mass = 2 eps / (10 + 2 eps); the mass is
  // Beta(2 eps, 10) distributed, which pins the Monte Carlo band.
  const double expected = 2.0 * eps / (10.0 + 2.0 * eps);
  const double var =
      (2.0 * eps) * 10.0 / ((10.02 * 10.02) * (10.02 + 1.0));
  const double se = std::sqrt(var / masked_users);
  CHECK(std::abs(off_mass / masked_users - expected) < 3.0 * se);
}

TEST_CASE("vanishing eps removes off-block mass entirely") {
  const PartitionSpec spec = build_partitions(200, 10, 4, 2, 2);
  const LatentFactors lf =
      sample_latent_factors(spec, AffinityMatrix::identity(2), 1e-9, 42);
  double worst = 0.0;
  for (std::uint32_t u = 0; u < 200; ++u) {
    if (spec.user_population[u] != 0) continue;
    worst = std::max(worst, lf.rho.at(u, 2) + lf.rho.at(u, 3));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("neutral users spread mass evenly across dimensions") {
  const std::uint32_t n = 10000;
  const PartitionSpec spec = build_partitions(n, 10, 4, 1, 2);
  const AffinityMatrix affinity = AffinityMatrix::default_for(1, 2);
  const LatentFactors lf = sample_latent_factors(spec, affinity, 0.01, 43);
  std::vector<double> mean(4, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t k = 0; k < 4; ++k) mean[k] += lf.rho.at(u, k);
  }
  // per-dim mean 1/K; component variance of Dirichlet(2.5 x4) is about
  // 0.25*0.75/11, widened by the two-stage draw, hence the loose band
  for (std::uint32_t k = 0; k < 4; ++k) {
    CHECK(std::abs(mean[k] / n - 0.25) < 0.01);
  }
}

TEST_CASE("cross-affinity utilities are far below matched ones") {
  const PartitionSpec spec = build_partitions(100, 100, 4, 2, 2);
  const LatentFactors lf =
      sample_latent_factors(spec, AffinityMatrix::identity(2), 0.01, 47);
  double matched = 0.0;
  double crossed = 0.0;
  std::uint64_t n_matched = 0;
  std::uint64_t n_crossed = 0;
  for (std::uint32_t u = 0; u < 100; ++u) {
    for (std::uint32_t i = 0; i < 100; ++i) {
      double dot = 0.0;
      for (std::uint32_t k = 0; k < 4; ++k) dot += lf.rho.at(u, k) * lf.alpha.at(i, k);
      if (spec.user_population[u] == spec.item_category[i]) {
        matched += dot;
        ++n_matched;
      } else {
        crossed += dot;
        ++n_crossed;
      }
    }
  }
  // Items keep 2 eps / (0.1 + 2 eps) = 1/6 of their factor mass outside
  // their block, so the raw mean separation at K=4 is (5/12)/(1/12) = 5;
  // the Bernoulli exponent later amplifies it much further.
  CHECK(matched / double(n_matched) > 4.0 * (crossed / double(n_crossed)));
}

TEST_CASE("true utility draws concentrate at the factor dot product") {
  // Handcrafted factors: all users and items uniform over 4 dimensions.
  LatentFactors lf;
  lf.rho = Matrix(100, 4);
  lf.alpha = Matrix(100, 4);
  std::fill(lf.rho.data.begin(), lf.rho.data.end(), 0.25);
  std::fill(lf.alpha.data.begin(), lf.alpha.data.end(), 0.25);
  const Matrix v = true_utility(lf, 1e-5, 53);
  double mean = 0.0;
  for (double x : v.data) {
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
    mean += x;
  }
  mean /= double(v.data.size());
  CHECK(std::abs(mean - 0.25) < 3.0 * std::sqrt(1e-5 / double(v.data.size())));
}

TEST_CASE("aligned one-hot factors saturate the utility") {
  LatentFactors lf;
  lf.rho = Matrix(1, 4);
  lf.alpha = Matrix(1, 4);
  lf.rho.at(0, 0) = 1.0;
  lf.alpha.at(0, 0) = 1.0;
  const Matrix v = true_utility(lf, 1e-5, 59);
  CHECK(v.at(0, 0) > 0.98);
}

TEST_CASE("true utility spread matches the fixed variance") {
  LatentFactors lf;
  lf.rho = Matrix(100, 2);
  lf.alpha = Matrix(100, 2);
  std::fill(lf.rho.data.begin(), lf.rho.data.end(), 0.5);
  std::fill(lf.alpha.data.begin(), lf.alpha.data.end(), 0.5);
  const Matrix v = true_utility(lf, 1e-5, 61);
  double mean = 0.0;
  for (double x : v.data) mean += x;
  mean /= double(v.data.size());
  double var = 0.0;
  for (double x : v.data) var += (x - mean) * (x - mean);
  var /= double(v.data.size());
  CHECK(std::sqrt(var) == doctest::Approx(std::sqrt(1e-5)).epsilon(0.1));
}

TEST_CASE("blurring multiplies by a beta factor with the requested mean") {
  Matrix v(100, 100);
  std::fill(v.data.begin(), v.data.end(), 0.5);
  v.at(0, 0) = 0.0;
  const Matrix t = blur_utility(v, 0.98, 1e-5, NoiseMode::per_entry, 67);
  CHECK(t.at(0, 0) == 0.0);
  double ratio = 0.0;
  std::uint64_t count = 0;
  for (std::size_t k = 1; k < v.data.size(); ++k) {
    REQUIRE(t.data[k] >= 0.0);
    REQUIRE(t.data[k] <= v.data[k]);  // omega < 1 in practice at this sigma
    ratio += t.data[k] / v.data[k];
    ++count;
  }
  CHECK(std::abs(ratio / double(count) - 0.98) <
        3.0 * std::sqrt(1e-5 / double(count)));
}

TEST_CASE("global noise mode applies one shared factor") {
  Matrix v(10, 10);
  for (std::size_t k = 0; k < v.data.size(); ++k) v.data[k] = 0.1 + 0.008 * double(k);
  const Matrix t = blur_utility(v, 0.9, 1e-5, NoiseMode::global_scalar, 71);
  const double omega = t.data[0] / v.data[0];
  for (std::size_t k = 0; k < v.data.size(); ++k) {
    CHECK(t.data[k] / v.data[k] == doctest::Approx(omega).epsilon(1e-12));
  }
}

TEST_CASE("noiseless limit leaves utilities nearly unchanged") {
  Matrix v(20, 20);
  std::fill(v.data.begin(), v.data.end(), 0.4);
  const Matrix t = blur_utility(v, 1.0 - 1e-9, 1e-12, NoiseMode::per_entry, 73);
  for (std::size_t k = 0; k < v.data.size(); ++k) {
    CHECK(t.data[k] == doctest::Approx(v.data[k]).epsilon(1e-4));
  }
}

TEST_CASE("latent stage parameter errors propagate") {
  LatentFactors lf;
  lf.rho = Matrix(1, 2);
  lf.alpha = Matrix(1, 2);
  CHECK_THROWS_AS(true_utility(lf, 0.0, 1), ParameterError);
  Matrix v(1, 1);
  CHECK_THROWS_AS(blur_utility(v, 0.0, 1e-5, NoiseMode::per_entry, 1), ParameterError);
  CHECK_THROWS_AS(blur_utility(v, 1.0, 1e-5, NoiseMode::per_entry, 1), ParameterError);
}
