// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/generator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <utility>

#include "genrec/errors.hpp"
#include "genrec/parallel.hpp"

namespace genrec {

void GeneratorConfig::validate() const {
  if (n_users == 0) throw ConfigError("n_users must be >= 1");
  if (n_items == 0) throw ConfigError("n_items must be >= 1");
  if (latent_dim == 0) throw ConfigError("latent_dim must be >= 1");
  if (populations == 0) throw ConfigError("populations must be >= 1");
  if (categories == 0) throw ConfigError("categories must be >= 1");
  if (categories > latent_dim) throw ConfigError("categories must not exceed latent_dim");
  if (latent_dim % categories != 0) {
    throw ConfigError("latent_dim must be divisible by categories");
  }
  if (populations > n_users) throw ConfigError("populations must not exceed n_users");
  if (categories > n_items) throw ConfigError("categories must not exceed n_items");
  if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
  if (!(delta >= 0.0)) throw ConfigError("delta must be >= 0");
  if (tau > n_items) throw ConfigError("tau must not exceed n_items");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (!(mu_omega > 0.0 && mu_omega < 1.0)) throw ConfigError("mu_omega must lie in (0, 1)");
  if (max_passes == 0) throw ConfigError("max_passes must be >= 1");
  try {
    validate_spec(item_pop_spec);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("item_popularity: ") + e.what());
  }
  try {
    validate_spec(user_budget_spec);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("user_budget: ") + e.what());
  }
  if (affinity) {
    if (affinity->populations() != populations || affinity->categories() != categories) {
      throw ConfigError("affinity shape must be populations x categories");
    }
  } else {
    AffinityMatrix::default_for(populations, categories);  // throws if none exists
  }
}

AffinityMatrix GeneratorConfig::effective_affinity() const {
  if (affinity) return *affinity;
  return AffinityMatrix::default_for(populations, categories);
}

bool operator==(const GeneratorConfig& a, const GeneratorConfig& b) {
  const auto affinity_entries = [](const GeneratorConfig& c) {
    return c.affinity ? c.affinity->entries() : std::vector<bool>{};
  };
  return a.n_users == b.n_users && a.n_items == b.n_items &&
         a.latent_dim == b.latent_dim && a.populations == b.populations &&
         a.categories == b.categories && a.eps == b.eps && a.delta == b.delta &&
         a.tau == b.tau && a.sigma == b.sigma && a.mu_omega == b.mu_omega &&
         a.item_pop_spec == b.item_pop_spec &&
         a.user_budget_spec == b.user_budget_spec &&
         a.affinity.has_value() == b.affinity.has_value() &&
         affinity_entries(a) == affinity_entries(b) && a.pdf_mode == b.pdf_mode &&
         a.noise_mode == b.noise_mode && a.max_passes == b.max_passes &&
         a.master_seed == b.master_seed;
}

std::vector<double> sample_popularities(std::uint32_t n_items,
                                        const LongTailSpec& spec, RandomStream& rng) {
  validate_spec(spec);
  std::vector<double> pop(n_items);
  for (auto& v : pop) v = sample_long_tail(spec, rng);
  return pop;
}

std::vector<std::uint32_t> sample_budgets(std::uint32_t n_users,
                                          const LongTailSpec& spec, std::uint32_t tau,
                                          std::uint32_t n_items, RandomStream& rng) {
  validate_spec(spec);
  std::vector<std::uint32_t> budgets(n_users);
  const std::uint64_t floor_value = std::max<std::uint64_t>(tau, 1);
  for (auto& b : budgets) {
    const double draw = sample_long_tail(spec, rng);
    std::uint64_t n = static_cast<std::uint64_t>(std::llround(draw)) + tau;
    n = std::max(n, floor_value);
    n = std::min<std::uint64_t>(n, n_items);
    b = static_cast<std::uint32_t>(n);
  }
  return budgets;
}

std::vector<double> popularity_scores(std::span<const double> popularity,
                                      PdfMode mode) {
  if (popularity.empty()) throw ParameterError("popularity sample must be nonempty");
  std::vector<double> scores(popularity.size());
  if (mode == PdfMode::cdf) {
    EmpiricalCdf cdf(std::vector<double>(popularity.begin(), popularity.end()));
    for (std::size_t i = 0; i < popularity.size(); ++i) scores[i] = cdf(popularity[i]);
    return scores;
  }
  // Log-binned histogram density, normalized by the densest bin.
  const auto [lo_it, hi_it] = std::minmax_element(popularity.begin(), popularity.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(lo > 0.0)) throw ParameterError("popularity values must be > 0");
  if (hi <= lo) {
    std::fill(scores.begin(), scores.end(), 1.0);
    return scores;
  }
  const std::size_t n_bins = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(std::sqrt(double(popularity.size())))), 8, 512);
  const double log_lo = std::log(lo);
  const double log_span = std::log(hi) - log_lo;
  const auto bin_of = [&](double x) {
    const auto b = static_cast<std::size_t>((std::log(x) - log_lo) / log_span * n_bins);
    return std::min(b, n_bins - 1);
  };
  std::vector<std::uint64_t> counts(n_bins, 0);
  for (double x : popularity) ++counts[bin_of(x)];
  std::vector<double> density(n_bins);
  double max_density = 0.0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double left = std::exp(log_lo + log_span * double(b) / n_bins);
    const double right = std::exp(log_lo + log_span * double(b + 1) / n_bins);
    density[b] = double(counts[b]) / (double(popularity.size()) * (right - left));
    max_density = std::max(max_density, density[b]);
  }
  for (std::size_t i = 0; i < popularity.size(); ++i) {
    scores[i] = density[bin_of(popularity[i])] / max_density;
  }
  return scores;
}

double interaction_probability(double t, double pop_score, double delta) {
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("utility must lie in [0, 1]");
  if (!(pop_score >= 0.0 && pop_score <= 1.0)) {
    throw ParameterError("popularity score must lie in [0, 1]");
  }
  if (!(delta >= 0.0)) throw ParameterError("delta must be >= 0");
  const double exponent = delta * (1.0 - pop_score);
  if (exponent == 0.0) return 1.0;  // includes 0^0
  return std::pow(t, exponent);
}

std::vector<std::uint32_t> generate_history(std::span<const double> utility_row,
                                            std::span<const double> pop_scores,
                                            std::uint32_t budget, double delta,
                                            std::uint32_t max_passes, RandomStream& rng,
                                            bool* degenerate) {
  const std::size_t n_items = utility_row.size();
  if (pop_scores.size() != n_items) {
    throw ParameterError("popularity scores must match the utility row length");
  }
  if (budget > n_items) throw ParameterError("budget must not exceed the catalog size");
  if (degenerate) *degenerate = false;

  std::vector<double> probs(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    probs[i] = interaction_probability(utility_row[i], pop_scores[i], delta);
  }

  std::vector<std::uint32_t> candidates;
  candidates.reserve(n_items);
  std::vector<std::uint8_t> taken(n_items, 0);
  for (std::uint32_t pass = 0; candidates.size() < budget && pass < max_passes; ++pass) {
    for (std::size_t i = 0; i < n_items; ++i) {
      if (taken[i]) continue;
      if (rng.next_double() < probs[i]) {
        taken[i] = 1;
        candidates.push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  if (candidates.size() < budget) {
    // Degenerate row: fill the shortfall by weighted sampling without
    // replacement over the missing items.
    if (degenerate) *degenerate = true;
    std::vector<double> weights(n_items, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n_items; ++i) {
      if (!taken[i]) {
        weights[i] = probs[i] + 1e-12;
        total += weights[i];
      }
    }
    while (candidates.size() < budget) {
      double target = rng.next_double() * total;
      std::size_t chosen = n_items;
      for (std::size_t i = 0; i < n_items; ++i) {
        if (taken[i]) continue;
        target -= weights[i];
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
      if (chosen == n_items) {  // numeric edge: pick the last free item
        for (std::size_t i = n_items; i-- > 0;) {
          if (!taken[i]) {
            chosen = i;
            break;
          }
        }
      }
      taken[chosen] = 1;
      total -= weights[chosen];
      candidates.push_back(static_cast<std::uint32_t>(chosen));
    }
  }

  // Uniform without-replacement subsample of exactly `budget` candidates.
  for (std::uint32_t j = 0; j < budget; ++j) {
    const std::uint64_t pick = j + rng.next_below(candidates.size() - j);
    std::swap(candidates[j], candidates[pick]);
  }
  candidates.resize(budget);
  return candidates;
}

GenerationArtifacts generate_with_artifacts(const GeneratorConfig& config,
                                            int n_threads) {
  config.validate();
  const int threads = thread_budget(n_threads);
  const PartitionSpec part =
      build_partitions(config.n_users, config.n_items, config.latent_dim,
                       config.populations, config.categories);
  const AffinityMatrix affinity = config.effective_affinity();

  GenerationArtifacts out;
  out.factors =
      sample_latent_factors(part, affinity, config.eps, config.master_seed, threads);
  out.utilities.true_utility =
      true_utility(out.factors, config.sigma, config.master_seed, threads);
  out.utilities.observed_utility =
      blur_utility(out.utilities.true_utility, config.mu_omega, config.sigma,
                   config.noise_mode, config.master_seed, threads);

  InteractionDataset& ds = out.dataset;
  ds.config = config;
  RandomStream pop_rng(config.master_seed, {"popularity", 0});
  ds.popularity = sample_popularities(config.n_items, config.item_pop_spec, pop_rng);
  RandomStream budget_rng(config.master_seed, {"budget", 0});
  ds.budgets = sample_budgets(config.n_users, config.user_budget_spec, config.tau,
                              config.n_items, budget_rng);
  const std::vector<double> scores = popularity_scores(ds.popularity, config.pdf_mode);

  ds.data.n_users = config.n_users;
  ds.data.n_items = config.n_items;
  ds.data.histories.resize(config.n_users);
  std::atomic<std::uint32_t> degenerate{0};
  const Matrix& observed = out.utilities.observed_utility;
  parallel_for(config.n_users, threads, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint32_t local_degenerate = 0;
    for (std::uint64_t u = begin; u < end; ++u) {
      RandomStream rng(config.master_seed, {"history", u});
      bool row_degenerate = false;
      ds.data.histories[u] = generate_history(
          std::span<const double>(observed.row(static_cast<std::uint32_t>(u)),
                                  config.n_items),
          scores, ds.budgets[u], config.delta, config.max_passes, rng, &row_degenerate);
      if (row_degenerate) ++local_degenerate;
    }
    degenerate += local_degenerate;
  });
  ds.degenerate_rows = degenerate.load();
  return out;
}

InteractionDataset generate_dataset(const GeneratorConfig& config, int n_threads) {
  return generate_with_artifacts(config, n_threads).dataset;
}

}  // namespace genrec
