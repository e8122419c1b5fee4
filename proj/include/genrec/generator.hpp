// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "genrec/interactions.hpp"
#include "genrec/latent.hpp"
#include "genrec/long_tail.hpp"
#include "genrec/random.hpp"

namespace genrec {

// How a raw popularity score pop_i is normalized into [0, 1] before it
// enters the acceptance exponent. `rank` (the default) uses the empirical
// CDF over the sampled popularity multiset, so the most popular item maps
// to 1 and acceptance collapses to certainty there. `max_normalized_density`
// uses a log-binned histogram density divided by its maximum; it is kept as
// an alternative reading but inverts the popularity effect under
// long-tailed shapes.
enum class PdfMode { cdf, max_normalized_density };

struct GeneratorConfig {
  std::uint32_t n_users = 0;
  std::uint32_t n_items = 0;
  std::uint32_t latent_dim = 0;   // K
  std::uint32_t populations = 1;  // p
  std::uint32_t categories = 1;   // c

  double eps = 0.01;    // masked-concentration value
  double delta = 1.0;   // popularity coefficient
  std::uint32_t tau = 5;  // minimum history length
  double sigma = 1e-5;  // utility Beta variance
  double mu_omega = 0.98;  // blur factor mean

  LongTailSpec item_pop_spec = PowerLawSpec{1.99, 1.0};
  LongTailSpec user_budget_spec = PowerLawSpec{1.91, 1.0};

  std::optional<AffinityMatrix> affinity;  // defaulted when absent

  PdfMode pdf_mode = PdfMode::cdf;
  NoiseMode noise_mode = NoiseMode::per_entry;
  std::uint32_t max_passes = 1000;
  std::uint64_t master_seed = 0;

  void validate() const;  // ConfigError naming the offending field
  AffinityMatrix effective_affinity() const;
};

bool operator==(const GeneratorConfig& a, const GeneratorConfig& b);

// The generated preference set plus everything needed to audit it.
struct InteractionDataset {
  GeneratorConfig config;
  Interactions data;
  std::vector<double> popularity;      // pop_i
  std::vector<std::uint32_t> budgets;  // n_u after flooring and clamping
  std::uint32_t degenerate_rows = 0;   // rows completed by the weighted fill
};

// Intermediate products, exposed for debugging dumps and tests.
struct GenerationArtifacts {
  InteractionDataset dataset;
  LatentFactors factors;
  UtilityMatrices utilities;
};

std::vector<double> sample_popularities(std::uint32_t n_items,
                                        const LongTailSpec& spec, RandomStream& rng);

// round(draw) + tau, floored at max(tau, 1) and clamped to n_items.
std::vector<std::uint32_t> sample_budgets(std::uint32_t n_users,
                                          const LongTailSpec& spec, std::uint32_t tau,
                                          std::uint32_t n_items, RandomStream& rng);

// Per-item normalized popularity scores under the given mode.
std::vector<double> popularity_scores(std::span<const double> popularity,
                                      PdfMode mode);

// t^(delta * (1 - pop_score)), with 0^0 == 1.
double interaction_probability(double t, double pop_score, double delta);

// One user's history: full Bernoulli passes over the items until the
// candidate set reaches the budget (capped at max_passes, then a weighted
// fill marks the row degenerate), followed by a uniform without-replacement
// subsample of exactly `budget` items.
std::vector<std::uint32_t> generate_history(std::span<const double> utility_row,
                                            std::span<const double> pop_scores,
                                            std::uint32_t budget, double delta,
                                            std::uint32_t max_passes, RandomStream& rng,
                                            bool* degenerate = nullptr);

InteractionDataset generate_dataset(const GeneratorConfig& config, int n_threads = 0);

// Same pipeline, also returning factors and utility matrices.
GenerationArtifacts generate_with_artifacts(const GeneratorConfig& config,
                                            int n_threads = 0);

}  // namespace genrec
