// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/latent.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "genrec/errors.hpp"
#include "genrec/parallel.hpp"

namespace genrec {

namespace {

std::vector<std::uint32_t> contiguous_assignment(std::uint32_t n, std::uint32_t groups) {
  // Equal-size contiguous runs; the remainder goes to the last group.
  std::vector<std::uint32_t> out(n);
  const std::uint32_t base = n / groups;
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = std::min(i / base, groups - 1);
  }
  return out;
}

}  // namespace

PartitionSpec build_partitions(std::uint32_t n_users, std::uint32_t n_items,
                               std::uint32_t latent_dim, std::uint32_t populations,
                               std::uint32_t categories) {
  if (n_users == 0) throw ConfigError("n_users must be >= 1");
  if (n_items == 0) throw ConfigError("n_items must be >= 1");
  if (latent_dim == 0) throw ConfigError("latent_dim must be >= 1");
  if (populations == 0) throw ConfigError("populations must be >= 1");
  if (categories == 0) throw ConfigError("categories must be >= 1");
  if (categories > latent_dim) {
    throw ConfigError("categories must not exceed latent_dim");
  }
  if (latent_dim % categories != 0) {
    throw ConfigError("latent_dim must be divisible by categories");
  }
  if (populations > n_users) throw ConfigError("populations must not exceed n_users");
  if (categories > n_items) throw ConfigError("categories must not exceed n_items");

  PartitionSpec spec;
  spec.n_users = n_users;
  spec.n_items = n_items;
  spec.latent_dim = latent_dim;
  spec.populations = populations;
  spec.categories = categories;
  spec.user_population = contiguous_assignment(n_users, populations);
  spec.item_category = contiguous_assignment(n_items, categories);
  return spec;
}

AffinityMatrix::AffinityMatrix(std::uint32_t populations, std::uint32_t categories,
                               std::vector<bool> entries)
    : populations_(populations), categories_(categories), entries_(std::move(entries)) {
  if (populations_ == 0 || categories_ == 0) {
    throw ConfigError("affinity matrix must have at least one row and column");
  }
  if (entries_.size() != std::size_t(populations_) * categories_) {
    throw ConfigError("affinity matrix entries do not match its shape");
  }
  for (std::uint32_t j = 0; j < populations_; ++j) {
    bool any = false;
    for (std::uint32_t k = 0; k < categories_; ++k) {
      any = any || prefers(j, k);
    }
    if (!any) {
      throw ConfigError("every affinity row must prefer at least one category");
    }
  }
}

AffinityMatrix AffinityMatrix::identity(std::uint32_t n) {
  std::vector<bool> e(std::size_t(n) * n, false);
  for (std::uint32_t j = 0; j < n; ++j) e[std::size_t(j) * n + j] = true;
  return AffinityMatrix(n, n, std::move(e));
}

AffinityMatrix AffinityMatrix::default_for(std::uint32_t populations,
                                           std::uint32_t categories) {
  if (populations == 1 || categories == 1) {
    return AffinityMatrix(populations, categories,
                          std::vector<bool>(std::size_t(populations) * categories, true));
  }
  if (populations == categories) return identity(populations);
  if (populations == categories + 1) {
    std::vector<bool> e(std::size_t(populations) * categories, false);
    for (std::uint32_t j = 0; j < categories; ++j) e[std::size_t(j) * categories + j] = true;
    for (std::uint32_t k = 0; k < categories; ++k) {
      e[std::size_t(categories) * categories + k] = true;  // neutral extra population
    }
    return AffinityMatrix(populations, categories, std::move(e));
  }
  throw ConfigError(
      "no default affinity for this populations/categories combination; "
      "specify the affinity matrix explicitly");
}

ConcentrationVector item_concentration(std::uint32_t item, const PartitionSpec& spec,
                                       double eps, RandomStream& rng) {
  if (!(eps > 0.0)) throw ParameterError("eps must be > 0");
  const std::uint32_t category = spec.item_category[item];
  const std::uint32_t bs = spec.block_size();
  const SimplexVector block = sample_dirichlet(
      ConcentrationVector(std::vector<double>(bs, kItemBlockConcentration)), rng);
  std::vector<double> conc(spec.latent_dim, eps);
  const std::uint32_t begin = spec.block_begin(category);
  for (std::uint32_t k = 0; k < bs; ++k) {
    conc[begin + k] = block[k] * kItemBlockScale;
  }
  return ConcentrationVector(std::move(conc));
}

ConcentrationVector user_concentration(std::uint32_t user, const PartitionSpec& spec,
                                       const AffinityMatrix& affinity, double eps,
                                       RandomStream& rng) {
  if (!(eps > 0.0)) throw ParameterError("eps must be > 0");
  const std::uint32_t population = spec.user_population[user];
  std::vector<std::uint32_t> active;
  active.reserve(spec.latent_dim);
  for (std::uint32_t cat = 0; cat < spec.categories; ++cat) {
    if (!affinity.prefers(population, cat)) continue;
    for (std::uint32_t k = spec.block_begin(cat); k < spec.block_end(cat); ++k) {
      active.push_back(k);
    }
  }
  const SimplexVector block = sample_dirichlet(
      ConcentrationVector(std::vector<double>(active.size(), kUserBlockConcentration)),
      rng);
  std::vector<double> conc(spec.latent_dim, eps);
  for (std::size_t k = 0; k < active.size(); ++k) {
    conc[active[k]] = block[k] * kUserBlockScale;
  }
  return ConcentrationVector(std::move(conc));
}

LatentFactors sample_latent_factors(const PartitionSpec& spec,
                                    const AffinityMatrix& affinity, double eps,
                                    std::uint64_t master_seed, int n_threads) {
  if (affinity.populations() != spec.populations ||
      affinity.categories() != spec.categories) {
    throw ConfigError("affinity matrix shape does not match the partition");
  }
  LatentFactors out;
  out.rho = Matrix(spec.n_users, spec.latent_dim);
  out.alpha = Matrix(spec.n_items, spec.latent_dim);
  out.mu_rho = Matrix(spec.n_users, spec.latent_dim);
  out.mu_alpha = Matrix(spec.n_items, spec.latent_dim);

  const int threads = thread_budget(n_threads);
  parallel_for(spec.n_users, threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t u = begin; u < end; ++u) {
      RandomStream rng(master_seed, {"user", u});
      const ConcentrationVector conc =
          user_concentration(static_cast<std::uint32_t>(u), spec, affinity, eps, rng);
      const SimplexVector row = sample_dirichlet(conc, rng);
      std::copy(conc.values().begin(), conc.values().end(),
                out.mu_rho.row(static_cast<std::uint32_t>(u)));
      std::copy(row.values().begin(), row.values().end(),
                out.rho.row(static_cast<std::uint32_t>(u)));
    }
  });
  parallel_for(spec.n_items, threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      RandomStream rng(master_seed, {"item", i});
      const ConcentrationVector conc =
          item_concentration(static_cast<std::uint32_t>(i), spec, eps, rng);
      const SimplexVector row = sample_dirichlet(conc, rng);
      std::copy(conc.values().begin(), conc.values().end(),
                out.mu_alpha.row(static_cast<std::uint32_t>(i)));
      std::copy(row.values().begin(), row.values().end(),
                out.alpha.row(static_cast<std::uint32_t>(i)));
    }
  });
  return out;
}

Matrix true_utility(const LatentFactors& factors, double sigma,
                    std::uint64_t master_seed, int n_threads) {
  if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
  const std::uint32_t n_users = factors.rho.rows;
  const std::uint32_t n_items = factors.alpha.rows;
  const std::uint32_t dim = factors.rho.cols;
  Matrix v(n_users, n_items);
  parallel_for(n_users, thread_budget(n_threads),
               [&](std::uint64_t begin, std::uint64_t end) {
                 for (std::uint64_t u = begin; u < end; ++u) {
                   RandomStream rng(master_seed, {"utility", u});
                   const double* rho = factors.rho.row(static_cast<std::uint32_t>(u));
                   double* out = v.row(static_cast<std::uint32_t>(u));
                   for (std::uint32_t i = 0; i < n_items; ++i) {
                     const double* alpha = factors.alpha.row(i);
                     double dot = 0.0;
                     for (std::uint32_t k = 0; k < dim; ++k) dot += rho[k] * alpha[k];
                     const double mean = std::clamp(dot, 1e-6, 1.0 - 1e-6);
                     out[i] = sample_beta_mean_var(mean, sigma, rng);
                   }
                 }
               });
  return v;
}

Matrix blur_utility(const Matrix& true_util, double mu_omega, double sigma,
                    NoiseMode mode, std::uint64_t master_seed, int n_threads) {
  if (!(mu_omega > 0.0 && mu_omega < 1.0)) {
    throw ParameterError("mu_omega must lie in (0, 1)");
  }
  if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
  Matrix t(true_util.rows, true_util.cols);
  if (mode == NoiseMode::global_scalar) {
    RandomStream rng(master_seed, {"noise", 0});
    const double omega = sample_beta_mean_var(mu_omega, sigma, rng);
    for (std::size_t k = 0; k < true_util.data.size(); ++k) {
      t.data[k] = true_util.data[k] * omega;
    }
    return t;
  }
  const BetaShape noise_shape = beta_shape_from_mean_var(mu_omega, sigma);
  parallel_for(true_util.rows, thread_budget(n_threads),
               [&](std::uint64_t begin, std::uint64_t end) {
                 for (std::uint64_t u = begin; u < end; ++u) {
                   RandomStream rng(master_seed, {"noise", u});
                   const double* in = true_util.row(static_cast<std::uint32_t>(u));
                   double* out = t.row(static_cast<std::uint32_t>(u));
                   for (std::uint32_t i = 0; i < true_util.cols; ++i) {
                     out[i] = in[i] * sample_beta(noise_shape, rng);
                   }
                 }
               });
  return t;
}

}  // namespace genrec
