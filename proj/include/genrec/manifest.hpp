// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genrec/generator.hpp"

namespace genrec {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunSummary {
  std::uint64_t n_interactions = 0;
  std::vector<std::uint64_t> per_population;  // interactions by user population
  std::vector<std::uint64_t> per_category;    // interactions by item category
  std::uint32_t degenerate_rows = 0;
};

RunSummary summarize(const InteractionDataset& dataset);

// JSON run manifest: config echo, seed, tool version, dataset checksum
// (hex FNV-1a 64 of the CSV bytes) and the summary counts.
std::string manifest_json(const GeneratorConfig& config, std::uint64_t checksum,
                          const RunSummary& summary);

}  // namespace genrec
