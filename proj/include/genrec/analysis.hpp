// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "genrec/generator.hpp"
#include "genrec/interactions.hpp"
#include "genrec/latent.hpp"
#include "genrec/long_tail.hpp"

namespace genrec {

enum class DegreeAxis { users, items };

// Restricts a degree count to one side of the partition. On the entity
// axis the filter selects which entities are reported; on the opposite
// axis it restricts which interactions are counted.
struct SubsetFilter {
  enum class Kind { all, population, category };
  Kind kind = Kind::all;
  std::uint32_t index = 0;

  static SubsetFilter all() { return {}; }
  static SubsetFilter population(std::uint32_t j) { return {Kind::population, j}; }
  static SubsetFilter category(std::uint32_t j) { return {Kind::category, j}; }
};

struct DegreeHistogram {
  DegreeAxis axis = DegreeAxis::users;
  std::map<std::uint32_t, std::uint64_t> bins;  // degree -> entity count
  std::uint64_t total_entities = 0;             // zero-degree entities included
};

// Per-entity interaction counts; zero-degree entities included.
std::vector<std::uint32_t> degree_vector(const Interactions& data, DegreeAxis axis,
                                         const PartitionSpec* partition = nullptr,
                                         SubsetFilter filter = SubsetFilter::all());

DegreeHistogram degree_histogram(const Interactions& data, DegreeAxis axis,
                                 const PartitionSpec* partition = nullptr,
                                 SubsetFilter filter = SubsetFilter::all());

// Per-user fraction of the history falling in the reference category,
// grouped by population. Users with empty histories are excluded and
// tallied.
struct CategoryShareDistribution {
  std::uint32_t reference_category = 0;
  std::vector<std::vector<double>> shares_by_population;
  std::uint64_t excluded_users = 0;
};

CategoryShareDistribution category_share(const Interactions& data,
                                         const PartitionSpec& partition,
                                         std::uint32_t reference_category);

// Lexicographically sorted (user, item) pairs, one per interaction.
std::vector<std::pair<std::uint32_t, std::uint32_t>> interaction_coords(
    const Interactions& data);

// Continuous maximum-likelihood power-law tail fit. When x_min is absent
// it is chosen by scanning observed values and minimizing the tail KS
// distance. Zero or negative samples are ignored by the caller's choice of
// input; at least 10 tail samples are required.
struct PowerLawFit {
  double exponent_hat = 0.0;
  double x_min = 0.0;
  std::size_t n_tail = 0;
  double ks_at_xmin = 0.0;
};

PowerLawFit fit_power_law(std::span<const double> samples,
                          std::optional<double> x_min = std::nullopt);

// Total log-likelihood of the samples under the MLE power law anchored at
// the sample minimum versus the MLE normal; used to tell bell-shaped
// degree profiles from heavy-tailed ones.
struct LikelihoodComparison {
  double loglik_power_law = 0.0;
  double loglik_normal = 0.0;
  bool power_law_preferred = false;
};

LikelihoodComparison power_law_vs_normal(std::span<const double> samples);

// Sup-norm distance between the empirical CDF and an analytic law, or
// between two empirical CDFs.
double ks_distance(std::span<const double> sample, const LongTailSpec& reference);
double ks_distance(std::span<const double> a, std::span<const double> b);

// Exhaustive grid search calibrating (beta, lambda, delta, tau) against a
// reference dataset. beta and lambda are the power-law exponents of the
// budget and popularity specs, so both specs in the base config must be
// power laws. The objective is the two-sample KS distance on log user
// degrees plus the same on log item degrees, averaged over seeds; ties are
// broken by lexicographic parameter order.
struct ParameterGrid {
  std::vector<double> beta;
  std::vector<double> lambda;
  std::vector<double> delta;
  std::vector<std::uint32_t> tau;
};

struct GridPoint {
  double beta = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
  std::uint32_t tau = 0;
  double objective = 0.0;
};

struct FitResult {
  GridPoint best;
  std::vector<GridPoint> evaluations;
};

FitResult grid_search_fit(const Interactions& reference, const ParameterGrid& grid,
                          const GeneratorConfig& base_config,
                          std::span<const std::uint64_t> seeds, int n_threads = 0);

}  // namespace genrec
