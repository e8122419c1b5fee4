// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/manifest.hpp"

#include <cstdio>

#include <json.hpp>

#include "genrec/config.hpp"
#include "genrec/latent.hpp"

namespace genrec {

RunSummary summarize(const InteractionDataset& dataset) {
  const GeneratorConfig& cfg = dataset.config;
  const PartitionSpec part = build_partitions(cfg.n_users, cfg.n_items, cfg.latent_dim,
                                              cfg.populations, cfg.categories);
  RunSummary s;
  s.per_population.assign(cfg.populations, 0);
  s.per_category.assign(cfg.categories, 0);
  s.degenerate_rows = dataset.degenerate_rows;
  for (std::uint32_t u = 0; u < cfg.n_users; ++u) {
    for (std::uint32_t i : dataset.data.histories[u]) {
      ++s.n_interactions;
      ++s.per_population[part.user_population[u]];
      ++s.per_category[part.item_category[i]];
    }
  }
  return s;
}

std::string manifest_json(const GeneratorConfig& config, std::uint64_t checksum,
                          const RunSummary& summary) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(checksum));
  nlohmann::json doc;
  doc["tool_version"] = std::string(kToolVersion);
  doc["master_seed"] = config.master_seed;
  doc["config"] = nlohmann::json::parse(serialize_config(config));
  doc["dataset_checksum"] = std::string(hex);
  doc["summary"]["n_interactions"] = summary.n_interactions;
  doc["summary"]["per_population_interactions"] = summary.per_population;
  doc["summary"]["per_category_interactions"] = summary.per_category;
  doc["summary"]["degenerate_rows"] = summary.degenerate_rows;
  return doc.dump(2) + "\n";
}

}  // namespace genrec
