// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "genrec/interactions.hpp"

namespace genrec {

// Interaction CSV: header "user_id,item_id", one row per interaction,
// 1-based contiguous integer ids, rows sorted by (user_id, item_id), LF
// line endings, no duplicates.

// Exact file bytes for a dataset; writing is this plus a rename.
std::string serialize_dataset(const Interactions& data);

// FNV-1a 64 over the serialized bytes.
std::uint64_t dataset_checksum(const Interactions& data);

// Writes atomically (temp file + rename) and returns the checksum.
std::uint64_t write_dataset(const Interactions& data, const std::filesystem::path& path);

// How external ids were mapped onto 1-based contiguous indices.
struct IngestReport {
  std::uint64_t n_rows = 0;
  // Additive shift applied to raw ids (0 for already 1-based files, 1 for
  // 0-based ones). Meaningless when compacted.
  std::int64_t user_id_offset = 0;
  std::int64_t item_id_offset = 0;
  // Sparse ids were compacted onto a dense range.
  bool users_compacted = false;
  bool items_compacted = false;
};

// Reads and validates a dataset file. Raw ids starting at 0 or 1 are
// treated as contiguous (entities with no rows keep zero degree); anything
// else is compacted in sorted order. Declared sizes, when given, fix the
// entity counts and are validated against the ids seen.
Interactions read_dataset(const std::filesystem::path& path,
                          IngestReport* report = nullptr,
                          std::optional<std::uint32_t> declared_users = std::nullopt,
                          std::optional<std::uint32_t> declared_items = std::nullopt);

// Writes bytes to path atomically via a sibling temp file.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace genrec
