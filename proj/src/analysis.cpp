// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "genrec/errors.hpp"
#include "genrec/parallel.hpp"

namespace genrec {

namespace {

void require_partition_for(const SubsetFilter& filter, const PartitionSpec* partition) {
  if (filter.kind != SubsetFilter::Kind::all && partition == nullptr) {
    throw ParameterError("subset filters require a partition");
  }
}

void check_filter_index(const SubsetFilter& filter, const PartitionSpec& partition) {
  if (filter.kind == SubsetFilter::Kind::population &&
      filter.index >= partition.populations) {
    throw ParameterError("unknown population subset");
  }
  if (filter.kind == SubsetFilter::Kind::category &&
      filter.index >= partition.categories) {
    throw ParameterError("unknown category subset");
  }
}

}  // namespace

std::vector<std::uint32_t> degree_vector(const Interactions& data, DegreeAxis axis,
                                         const PartitionSpec* partition,
                                         SubsetFilter filter) {
  require_partition_for(filter, partition);
  if (partition) check_filter_index(filter, *partition);

  const auto user_selected = [&](std::uint32_t u) {
    return filter.kind != SubsetFilter::Kind::population ||
           partition->user_population[u] == filter.index;
  };
  const auto item_selected = [&](std::uint32_t i) {
    return filter.kind != SubsetFilter::Kind::category ||
           partition->item_category[i] == filter.index;
  };

  if (axis == DegreeAxis::users) {
    std::vector<std::uint32_t> degrees;
    for (std::uint32_t u = 0; u < data.n_users; ++u) {
      if (!user_selected(u)) continue;
      std::uint32_t d = 0;
      for (std::uint32_t i : data.histories[u]) {
        if (item_selected(i)) ++d;
      }
      degrees.push_back(d);
    }
    return degrees;
  }

  std::vector<std::uint32_t> counts(data.n_items, 0);
  for (std::uint32_t u = 0; u < data.n_users; ++u) {
    if (!user_selected(u)) continue;
    for (std::uint32_t i : data.histories[u]) ++counts[i];
  }
  std::vector<std::uint32_t> degrees;
  for (std::uint32_t i = 0; i < data.n_items; ++i) {
    if (item_selected(i)) degrees.push_back(counts[i]);
  }
  return degrees;
}

DegreeHistogram degree_histogram(const Interactions& data, DegreeAxis axis,
                                 const PartitionSpec* partition, SubsetFilter filter) {
  DegreeHistogram hist;
  hist.axis = axis;
  for (std::uint32_t d : degree_vector(data, axis, partition, filter)) {
    ++hist.bins[d];
    ++hist.total_entities;
  }
  return hist;
}

CategoryShareDistribution category_share(const Interactions& data,
                                         const PartitionSpec& partition,
                                         std::uint32_t reference_category) {
  if (reference_category >= partition.categories) {
    throw ParameterError("unknown reference category");
  }
  CategoryShareDistribution out;
  out.reference_category = reference_category;
  out.shares_by_population.resize(partition.populations);
  for (std::uint32_t u = 0; u < data.n_users; ++u) {
    const auto& history = data.histories[u];
    if (history.empty()) {
      ++out.excluded_users;
      continue;
    }
    std::uint32_t in_reference = 0;
    for (std::uint32_t i : history) {
      if (partition.item_category[i] == reference_category) ++in_reference;
    }
    out.shares_by_population[partition.user_population[u]].push_back(
        double(in_reference) / double(history.size()));
  }
  return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> interaction_coords(
    const Interactions& data) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  coords.reserve(data.total());
  for (std::uint32_t u = 0; u < data.n_users; ++u) {
    for (std::uint32_t i : data.histories[u]) coords.emplace_back(u, i);
  }
  std::sort(coords.begin(), coords.end());
  return coords;
}

namespace {

// KS distance of the ascending tail sample against the fitted power law.
double tail_ks(std::span<const double> tail, double x_min, double exponent) {
  const double n = double(tail.size());
  double d = 0.0;
  for (std::size_t j = 0; j < tail.size(); ++j) {
    const double f = 1.0 - std::pow(tail[j] / x_min, 1.0 - exponent);
    d = std::max(d, std::abs(f - double(j) / n));
    d = std::max(d, std::abs(double(j + 1) / n - f));
  }
  return d;
}

double mle_exponent(std::span<const double> tail, double x_min) {
  double log_sum = 0.0;
  for (double x : tail) log_sum += std::log(x / x_min);
  if (!(log_sum > 0.0)) {
    throw EstimationError("zero log-spread: all tail samples equal x_min");
  }
  return 1.0 + double(tail.size()) / log_sum;
}

}  // namespace

PowerLawFit fit_power_law(std::span<const double> samples,
                          std::optional<double> x_min) {
  constexpr std::size_t kMinTail = 10;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && !(sorted.front() > 0.0)) {
    throw ParameterError("power-law fit requires positive samples");
  }

  if (x_min) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), *x_min);
    const std::span<const double> tail(&*it, sorted.end() - it);
    if (tail.size() < kMinTail) {
      throw EstimationError("too few samples at or above x_min");
    }
    PowerLawFit fit;
    fit.x_min = *x_min;
    fit.n_tail = tail.size();
    fit.exponent_hat = mle_exponent(tail, *x_min);
    fit.ks_at_xmin = tail_ks(tail, *x_min, fit.exponent_hat);
    return fit;
  }

  if (sorted.size() < kMinTail) throw EstimationError("too few samples to fit");

  // Candidate x_min values: first index of each distinct value, thinned to
  // at most 1024 candidates; pick the candidate minimizing tail KS.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i + kMinTail <= sorted.size(); ++i) {
    if (i == 0 || sorted[i] > sorted[i - 1]) candidates.push_back(i);
  }
  if (candidates.empty()) {
    throw EstimationError("zero log-spread: all samples equal");
  }
  if (candidates.size() > 1024) {
    std::vector<std::size_t> thinned;
    const double step = double(candidates.size()) / 1024.0;
    for (std::size_t k = 0; k < 1024; ++k) {
      thinned.push_back(candidates[static_cast<std::size_t>(k * step)]);
    }
    candidates = std::move(thinned);
  }

  std::optional<PowerLawFit> best;
  for (std::size_t start : candidates) {
    const std::span<const double> tail(sorted.data() + start, sorted.size() - start);
    const double xm = sorted[start];
    double exponent;
    try {
      exponent = mle_exponent(tail, xm);
    } catch (const EstimationError&) {
      continue;
    }
    const double ks = tail_ks(tail, xm, exponent);
    if (!best || ks < best->ks_at_xmin) {
      best = PowerLawFit{exponent, xm, tail.size(), ks};
    }
  }
  if (!best) throw EstimationError("no feasible x_min candidate");
  return *best;
}

LikelihoodComparison power_law_vs_normal(std::span<const double> samples) {
  if (samples.size() < 2) throw EstimationError("need at least two samples");
  std::vector<double> values(samples.begin(), samples.end());
  std::sort(values.begin(), values.end());
  if (!(values.front() > 0.0)) {
    throw ParameterError("comparison requires positive samples");
  }
  const double n = double(values.size());
  const double x_min = values.front();

  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : values) var += (x - mean) * (x - mean);
  var /= n;
  if (!(var > 0.0)) throw EstimationError("degenerate sample: zero variance");

  LikelihoodComparison cmp;
  double log_sum = 0.0;
  for (double x : values) log_sum += std::log(x / x_min);
  if (log_sum > 0.0) {
    const double a = 1.0 + n / log_sum;
    cmp.loglik_power_law = n * std::log((a - 1.0) / x_min) - a * log_sum;
  } else {
    cmp.loglik_power_law = -std::numeric_limits<double>::infinity();
  }
  cmp.loglik_normal = -0.5 * n * std::log(2.0 * M_PI * var) - 0.5 * n;
  cmp.power_law_preferred = cmp.loglik_power_law > cmp.loglik_normal;
  return cmp;
}

double ks_distance(std::span<const double> sample, const LongTailSpec& reference) {
  if (sample.empty()) throw ParameterError("KS distance requires a nonempty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = double(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = long_tail_cdf(reference, sorted[i]);
    d = std::max(d, std::abs(f - double(i) / n));
    d = std::max(d, std::abs(double(i + 1) / n - f));
  }
  return d;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw ParameterError("KS distance requires nonempty samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = double(sa.size());
  const double nb = double(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    const double x = std::min(i < sa.size() ? sa[i] : std::numeric_limits<double>::infinity(),
                              j < sb.size() ? sb[j] : std::numeric_limits<double>::infinity());
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  return d;
}

namespace {

std::vector<double> positive_log_degrees(const std::vector<std::uint32_t>& degrees) {
  std::vector<double> out;
  out.reserve(degrees.size());
  for (std::uint32_t d : degrees) {
    if (d > 0) out.push_back(std::log(double(d)));
  }
  return out;
}

}  // namespace

FitResult grid_search_fit(const Interactions& reference, const ParameterGrid& grid,
                          const GeneratorConfig& base_config,
                          std::span<const std::uint64_t> seeds, int n_threads) {
  if (grid.beta.empty() || grid.lambda.empty() || grid.delta.empty() ||
      grid.tau.empty()) {
    throw ParameterError("empty grid");
  }
  if (seeds.empty()) throw ParameterError("grid search requires at least one seed");
  if (reference.n_users < 100 || reference.n_items < 100) {
    throw ParameterError("reference dataset must have at least 100 users and items");
  }
  if (!std::holds_alternative<PowerLawSpec>(base_config.item_pop_spec) ||
      !std::holds_alternative<PowerLawSpec>(base_config.user_budget_spec)) {
    throw ConfigError(
        "grid search varies power-law exponents; both distribution specs in "
        "the base config must be power laws");
  }

  const std::vector<double> ref_user_log =
      positive_log_degrees(degree_vector(reference, DegreeAxis::users));
  const std::vector<double> ref_item_log =
      positive_log_degrees(degree_vector(reference, DegreeAxis::items));
  if (ref_user_log.empty() || ref_item_log.empty()) {
    throw ParameterError("reference dataset has no interactions");
  }

  std::vector<GridPoint> points;
  for (double beta : grid.beta) {
    for (double lambda : grid.lambda) {
      for (double delta : grid.delta) {
        for (std::uint32_t tau : grid.tau) {
          points.push_back({beta, lambda, delta, tau, 0.0});
        }
      }
    }
  }

  const auto evaluate = [&](GridPoint& point) {
    GeneratorConfig cfg = base_config;
    cfg.n_users = reference.n_users;
    cfg.n_items = reference.n_items;
    std::get<PowerLawSpec>(cfg.user_budget_spec).exponent = point.beta;
    std::get<PowerLawSpec>(cfg.item_pop_spec).exponent = point.lambda;
    cfg.delta = point.delta;
    cfg.tau = point.tau;
    double objective = 0.0;
    for (std::uint64_t seed : seeds) {
      cfg.master_seed = seed;
      // Each grid point runs single-threaded; the grid itself is parallel.
      const InteractionDataset ds = generate_dataset(cfg, 1);
      const std::vector<double> user_log =
          positive_log_degrees(degree_vector(ds.data, DegreeAxis::users));
      const std::vector<double> item_log =
          positive_log_degrees(degree_vector(ds.data, DegreeAxis::items));
      if (user_log.empty() || item_log.empty()) {
        objective = std::numeric_limits<double>::infinity();
        break;
      }
      objective += ks_distance(std::span<const double>(user_log), ref_user_log) +
                   ks_distance(std::span<const double>(item_log), ref_item_log);
    }
    if (std::isfinite(objective)) objective /= double(seeds.size());
    point.objective = objective;
  };

  parallel_for(points.size(), thread_budget(n_threads),
               [&](std::uint64_t begin, std::uint64_t end) {
                 for (std::uint64_t k = begin; k < end; ++k) {
                   try {
                     evaluate(points[k]);
                   } catch (const std::exception&) {
                     points[k].objective = std::numeric_limits<double>::infinity();
                   }
                 }
               });

  // Points were enumerated in lexicographic parameter order; a strict
  // comparison keeps the lexicographically first among ties.
  FitResult result;
  result.evaluations = points;
  result.best = points.front();
  for (const GridPoint& p : points) {
    if (p.objective < result.best.objective) result.best = p;
  }
  return result;
}

}  // namespace genrec
