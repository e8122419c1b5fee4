// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <vector>

#include "genrec/distributions.hpp"
#include "genrec/random.hpp"

namespace genrec {

// Dense row-major matrix, just enough for factor/utility storage.
struct Matrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), data(std::size_t(r) * c) {}

  double& at(std::uint32_t r, std::uint32_t c) { return data[std::size_t(r) * cols + c]; }
  double at(std::uint32_t r, std::uint32_t c) const { return data[std::size_t(r) * cols + c]; }
  const double* row(std::uint32_t r) const { return data.data() + std::size_t(r) * cols; }
  double* row(std::uint32_t r) { return data.data() + std::size_t(r) * cols; }
};

// Contiguous equal-size split of users into populations and items into
// categories, plus the category -> latent-dimension block map. Blocks are
// contiguous runs of K/c dimensions, so K must be divisible by c.
struct PartitionSpec {
  std::uint32_t n_users = 0;
  std::uint32_t n_items = 0;
  std::uint32_t latent_dim = 0;   // K
  std::uint32_t populations = 1;  // p
  std::uint32_t categories = 1;   // c

  std::vector<std::uint32_t> user_population;  // size n_users, values in [0, p)
  std::vector<std::uint32_t> item_category;    // size n_items, values in [0, c)

  std::uint32_t block_size() const { return latent_dim / categories; }
  std::uint32_t block_begin(std::uint32_t category) const { return category * block_size(); }
  std::uint32_t block_end(std::uint32_t category) const { return (category + 1) * block_size(); }
};

PartitionSpec build_partitions(std::uint32_t n_users, std::uint32_t n_items,
                               std::uint32_t latent_dim, std::uint32_t populations,
                               std::uint32_t categories);

// p x c boolean relation: which item categories each population prefers.
// Every row must select at least one category.
class AffinityMatrix {
 public:
  AffinityMatrix(std::uint32_t populations, std::uint32_t categories,
                 std::vector<bool> entries);

  static AffinityMatrix identity(std::uint32_t n);

  // Default relation: identity when p == c; identity plus one all-true
  // neutral row when p == c+1; all-true when p == 1 or c == 1. Anything
  // else must be given explicitly.
  static AffinityMatrix default_for(std::uint32_t populations, std::uint32_t categories);

  std::uint32_t populations() const { return populations_; }
  std::uint32_t categories() const { return categories_; }
  bool prefers(std::uint32_t population, std::uint32_t category) const {
    return entries_[std::size_t(population) * categories_ + category];
  }
  const std::vector<bool>& entries() const { return entries_; }

 private:
  std::uint32_t populations_;
  std::uint32_t categories_;
  std::vector<bool> entries_;
};

// User rho and item alpha rows on the simplex plus the per-entity
// concentration vectors they were drawn from.
struct LatentFactors {
  Matrix rho;       // n_users x K
  Matrix alpha;     // n_items x K
  Matrix mu_rho;    // per-user concentration, n_users x K
  Matrix mu_alpha;  // per-item concentration, n_items x K
};

struct UtilityMatrices {
  Matrix true_utility;      // V
  Matrix observed_utility;  // T
};

enum class NoiseMode { per_entry, global_scalar };

// Scale of the symmetric Dirichlet the active block is drawn from, and the
// factor the draw is multiplied by, for users and items respectively.
inline constexpr double kUserBlockConcentration = 1.0;
inline constexpr double kUserBlockScale = 10.0;
inline constexpr double kItemBlockConcentration = 100.0;
inline constexpr double kItemBlockScale = 0.1;

// Concentration for one item: a fresh symmetric Dirichlet draw scaled to
// kItemBlockScale on the item's category block, eps everywhere else.
ConcentrationVector item_concentration(std::uint32_t item, const PartitionSpec& spec,
                                       double eps, RandomStream& rng);

// Concentration for one user: scaled Dirichlet draw over the union of the
// blocks of the user's preferred categories, eps elsewhere.
ConcentrationVector user_concentration(std::uint32_t user, const PartitionSpec& spec,
                                       const AffinityMatrix& affinity, double eps,
                                       RandomStream& rng);

// One concentration + one Dirichlet draw per entity, parallel over
// entities with streams labeled ("user"|"item", index).
LatentFactors sample_latent_factors(const PartitionSpec& spec,
                                    const AffinityMatrix& affinity, double eps,
                                    std::uint64_t master_seed, int n_threads = 0);

// V[u][i] ~ Beta with mean clamp(rho_u . alpha_i) and fixed variance sigma.
Matrix true_utility(const LatentFactors& factors, double sigma,
                    std::uint64_t master_seed, int n_threads = 0);

// T = V * omega with omega ~ Beta(mean mu_omega, variance sigma), drawn per
// entry or once globally depending on the mode.
Matrix blur_utility(const Matrix& true_util, double mu_omega, double sigma,
                    NoiseMode mode, std::uint64_t master_seed, int n_threads = 0);

}  // namespace genrec
