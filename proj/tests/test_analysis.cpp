// Apache License, Version 2.0, refer to LICENSE.txt

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "genrec/analysis.hpp"
#include "genrec/errors.hpp"
#include "genrec/generator.hpp"
#include "genrec/random.hpp"

using namespace genrec;

namespace {

Interactions tiny_dataset() {
  // user 0 -> items {0, 1}, user 1 -> item {1}
  Interactions data;
  data.n_users = 2;
  data.n_items = 3;
  data.histories = {{0, 1}, {1}};
  return data;
}

std::vector<double> power_law_sample(double exponent, std::size_t n,
                                     std::uint64_t seed) {
  RandomStream rng(seed, {"pl", 0});
  std::vector<double> out(n);
  const LongTailSpec spec = PowerLawSpec{exponent, 1.0};
  for (auto& x : out) x = sample_long_tail(spec, rng);
  return out;
}

}  // namespace

TEST_CASE("degree counting includes zero-degree entities") {
  const Interactions data = tiny_dataset();
  const DegreeHistogram items = degree_histogram(data, DegreeAxis::items);
  CHECK(items.total_entities == 3);
  CHECK(items.bins.at(0) == 1);  // item 2 untouched
  CHECK(items.bins.at(1) == 1);
  CHECK(items.bins.at(2) == 1);

  const DegreeHistogram users = degree_histogram(data, DegreeAxis::users);
  CHECK(users.total_entities == 2);
  CHECK(users.bins.at(1) == 1);
  CHECK(users.bins.at(2) == 1);
}

TEST_CASE("subset degrees equal a brute-force recount") {
  GeneratorConfig cfg;
  cfg.n_users = 10;
  cfg.n_items = 12;
  cfg.latent_dim = 4;
  cfg.populations = 2;
  cfg.categories = 2;
  cfg.tau = 2;
  cfg.master_seed = 77;
  const InteractionDataset ds = generate_dataset(cfg);
  const PartitionSpec part = build_partitions(10, 12, 4, 2, 2);

  const auto subset =
      degree_vector(ds.data, DegreeAxis::items, &part, SubsetFilter::population(0));
  std::vector<std::uint32_t> brute(12, 0);
  for (std::uint32_t u = 0; u < 10; ++u) {
    if (part.user_population[u] != 0) continue;
    for (auto i : ds.data.histories[u]) ++brute[i];
  }
  CHECK(subset == brute);

  const auto user_subset =
      degree_vector(ds.data, DegreeAxis::users, &part, SubsetFilter::population(1));
  std::vector<std::uint32_t> expected;
  for (std::uint32_t u = 0; u < 10; ++u) {
    if (part.user_population[u] == 1) {
      expected.push_back(static_cast<std::uint32_t>(ds.data.histories[u].size()));
    }
  }
  CHECK(user_subset == expected);

  CHECK_THROWS_AS(
      degree_vector(ds.data, DegreeAxis::users, &part, SubsetFilter::population(7)),
      ParameterError);
  CHECK_THROWS_AS(
      degree_vector(ds.data, DegreeAxis::users, nullptr, SubsetFilter::population(0)),
      ParameterError);
}

TEST_CASE("degree mass is conserved across axes") {
  GeneratorConfig cfg;
  cfg.n_users = 100;
  cfg.n_items = 80;
  cfg.latent_dim = 4;
  cfg.populations = 2;
  cfg.categories = 2;
  cfg.master_seed = 78;
  const InteractionDataset ds = generate_dataset(cfg);
  const DegreeHistogram users = degree_histogram(ds.data, DegreeAxis::users);
  const DegreeHistogram items = degree_histogram(ds.data, DegreeAxis::items);
  std::uint64_t user_mass = 0;
  for (const auto& [d, c] : users.bins) user_mass += std::uint64_t(d) * c;
  std::uint64_t item_mass = 0;
  for (const auto& [d, c] : items.bins) item_mass += std::uint64_t(d) * c;
  CHECK(user_mass == item_mass);
  CHECK(user_mass == ds.data.total());
}

TEST_CASE("category shares") {
  Interactions data;
  data.n_users = 3;
  data.n_items = 4;
  data.histories = {{0, 1, 2, 3}, {0, 2}, {}};
  const PartitionSpec part = build_partitions(3, 4, 4, 3, 2);

  const CategoryShareDistribution shares = category_share(data, part, 0);
  REQUIRE(shares.shares_by_population.size() == 3);
  CHECK(shares.shares_by_population[0] == std::vector<double>{0.5});
  CHECK(shares.shares_by_population[1] == std::vector<double>{0.5});
  CHECK(shares.shares_by_population[2].empty());
  CHECK(shares.excluded_users == 1);

  data.histories = {{0, 1}, {2, 3}, {0}};
  const CategoryShareDistribution pure = category_share(data, part, 0);
  CHECK(pure.shares_by_population[0] == std::vector<double>{1.0});
  CHECK(pure.shares_by_population[1] == std::vector<double>{0.0});
  CHECK(pure.shares_by_population[2] == std::vector<double>{1.0});

  CHECK_THROWS_AS(category_share(data, part, 2), ParameterError);
}

TEST_CASE("interaction coordinates are sorted and complete") {
  const Interactions data = tiny_dataset();
  const auto coords = interaction_coords(data);
  REQUIRE(coords.size() == data.total());
  CHECK(std::is_sorted(coords.begin(), coords.end()));
  CHECK(coords[0] == std::pair<std::uint32_t, std::uint32_t>{0, 0});
  CHECK(coords[1] == std::pair<std::uint32_t, std::uint32_t>{0, 1});
  CHECK(coords[2] == std::pair<std::uint32_t, std::uint32_t>{1, 1});

  Interactions empty;
  empty.n_users = 2;
  empty.n_items = 2;
  empty.histories = {{}, {}};
  CHECK(interaction_coords(empty).empty());
}

TEST_CASE("power-law fit recovers the sampler exponent") {
  const auto s25 = power_law_sample(2.5, 10000, 81);
  const PowerLawFit given = fit_power_law(s25, 1.0);
  CHECK(given.exponent_hat > 2.45);
  CHECK(given.exponent_hat < 2.55);
  CHECK(given.n_tail == 10000);

  const auto s199 = power_law_sample(1.99, 10000, 82);
  const PowerLawFit scanned = fit_power_law(s199);
  CHECK(scanned.exponent_hat > 1.89);
  CHECK(scanned.exponent_hat < 2.09);
}

TEST_CASE("fit recovery holds across the exponent range") {
  for (double exponent : {1.5, 2.0, 2.8, 3.5}) {
    const auto sample =
        power_law_sample(exponent, 10000, 83 + std::uint64_t(exponent * 10));
    const PowerLawFit fit = fit_power_law(sample, 1.0);
    CHECK(std::abs(fit.exponent_hat - exponent) < 0.1);
  }
}

TEST_CASE("degenerate fits raise estimation errors") {
  const std::vector<double> equal(100, 3.0);
  CHECK_THROWS_AS(fit_power_law(equal), EstimationError);
  CHECK_THROWS_AS(fit_power_law(equal, 3.0), EstimationError);
  const std::vector<double> few = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_power_law(few), EstimationError);
  const std::vector<double> negative = {-1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
  CHECK_THROWS_AS(fit_power_law(negative), ParameterError);
}

TEST_CASE("x_min scan lands near a planted truncation") {
  // uniform noise below 5.0 plus a power-law tail anchored at 5.0
  RandomStream rng(87, {"mix", 0});
  std::vector<double> mixed;
  const LongTailSpec tail = PowerLawSpec{2.2, 5.0};
  for (int i = 0; i < 3000; ++i) mixed.push_back(0.5 + 4.0 * rng.next_double());
  for (int i = 0; i < 7000; ++i) mixed.push_back(sample_long_tail(tail, rng));
  const PowerLawFit fit = fit_power_law(mixed);
  CHECK(fit.x_min > 3.0);
  CHECK(fit.x_min < 8.0);
  CHECK(std::abs(fit.exponent_hat - 2.2) < 0.2);
}

TEST_CASE("ks distance basics") {
  const std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
  CHECK(ks_distance(a, a) == 0.0);
  const std::vector<double> shifted = {101.0, 102.0, 103.0, 104.0};
  CHECK(ks_distance(a, shifted) == 1.0);
  CHECK(ks_distance(shifted, a) == 1.0);

  RandomStream rng(91, {"ks", 0});
  const LongTailSpec spec = PowerLawSpec{2.5, 1.0};
  std::vector<double> draws(10000);
  for (auto& d : draws) d = sample_long_tail(spec, rng);
  CHECK(ks_distance(draws, spec) < 0.02);

  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, a), ParameterError);
}

TEST_CASE("ks distance is symmetric and detects equal laws") {
  RandomStream rng(93, {"ks", 1});
  const LongTailSpec spec = LogNormalSpec{0.0, 1.0};
  std::vector<double> a(2000);
  std::vector<double> b(3000);
  for (auto& x : a) x = sample_long_tail(spec, rng);
  for (auto& x : b) x = sample_long_tail(spec, rng);
  const double d_ab = ks_distance(a, b);
  CHECK(d_ab == ks_distance(b, a));
  CHECK(d_ab < 0.05);
}

TEST_CASE("normal versus power-law comparison separates the two shapes") {
  const auto heavy = power_law_sample(1.99, 5000, 95);
  const LikelihoodComparison on_heavy = power_law_vs_normal(heavy);
  CHECK(on_heavy.power_law_preferred);

  RandomStream rng(95, {"norm", 0});
  std::vector<double> bell(5000);
  for (auto& x : bell) x = std::max(0.1, 20.0 + 2.0 * rng.next_normal());
  const LikelihoodComparison on_bell = power_law_vs_normal(bell);
  CHECK_FALSE(on_bell.power_law_preferred);
}

TEST_CASE("single-point grid returns that point") {
  GeneratorConfig base;
  base.n_users = 120;
  base.n_items = 110;
  base.latent_dim = 4;
  base.populations = 2;
  base.categories = 2;
  base.tau = 3;
  base.master_seed = 1;
  const InteractionDataset reference = generate_dataset(base);

  ParameterGrid grid;
  grid.beta = {1.91};
  grid.lambda = {1.99};
  grid.delta = {1.0};
  grid.tau = {3};
  const std::vector<std::uint64_t> seeds = {9};
  const FitResult result = grid_search_fit(reference.data, grid, base, seeds);
  REQUIRE(result.evaluations.size() == 1);
  CHECK(result.best.beta == 1.91);
  CHECK(result.best.lambda == 1.99);
  CHECK(result.best.tau == 3);
  CHECK(result.best.objective >= 0.0);
  CHECK(std::isfinite(result.best.objective));
}

TEST_CASE("grid objective ignores user and item relabeling") {
  GeneratorConfig base;
  base.n_users = 120;
  base.n_items = 110;
  base.latent_dim = 4;
  base.populations = 2;
  base.categories = 2;
  base.master_seed = 2;
  const InteractionDataset reference = generate_dataset(base);

  // reverse user order and relabel items i -> n-1-i
  Interactions relabeled = reference.data;
  std::reverse(relabeled.histories.begin(), relabeled.histories.end());
  for (auto& h : relabeled.histories) {
    for (auto& i : h) i = relabeled.n_items - 1 - i;
  }

  ParameterGrid grid;
  grid.beta = {1.91};
  grid.lambda = {1.99};
  grid.delta = {1.0};
  grid.tau = {5};
  const std::vector<std::uint64_t> seeds = {11};
  const double original =
      grid_search_fit(reference.data, grid, base, seeds).best.objective;
  const double permuted =
      grid_search_fit(relabeled, grid, base, seeds).best.objective;
  CHECK(original == permuted);
}

TEST_CASE("a failing grid point gets an infinite objective and the search continues") {
  GeneratorConfig base;
  base.n_users = 120;
  base.n_items = 110;
  base.latent_dim = 4;
  base.master_seed = 6;
  const InteractionDataset reference = generate_dataset(base);

  ParameterGrid grid;
  grid.beta = {0.5, 1.91};  // 0.5 is an invalid power-law exponent
  grid.lambda = {1.99};
  grid.delta = {1.0};
  grid.tau = {5};
  const std::vector<std::uint64_t> seeds = {3};
  const FitResult result = grid_search_fit(reference.data, grid, base, seeds);
  REQUIRE(result.evaluations.size() == 2);
  CHECK(std::isinf(result.evaluations[0].objective));
  CHECK(std::isfinite(result.evaluations[1].objective));
  CHECK(result.best.beta == 1.91);
}

TEST_CASE("grid search rejects unusable inputs") {
  GeneratorConfig base;
  base.n_users = 120;
  base.n_items = 110;
  base.latent_dim = 4;
  base.master_seed = 3;
  const InteractionDataset reference = generate_dataset(base);

  ParameterGrid empty;
  const std::vector<std::uint64_t> seeds = {1};
  CHECK_THROWS_AS(grid_search_fit(reference.data, empty, base, seeds),
                  ParameterError);

  ParameterGrid grid;
  grid.beta = {1.9};
  grid.lambda = {2.0};
  grid.delta = {1.0};
  grid.tau = {5};
  GeneratorConfig bad = base;
  bad.item_pop_spec = LogNormalSpec{0.0, 1.0};
  CHECK_THROWS_AS(grid_search_fit(reference.data, grid, bad, seeds), ConfigError);

  Interactions small;
  small.n_users = 10;
  small.n_items = 10;
  small.histories.assign(10, {0});
  CHECK_THROWS_AS(grid_search_fit(small, grid, base, seeds), ParameterError);
}
