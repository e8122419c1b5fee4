// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace genrec {

// Command implementations behind the CLI. Each returns a process exit
// status and reports errors on `err` instead of throwing.

int run_generate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed_override, bool dump_factors,
                 std::ostream& out, std::ostream& err);

int run_analyze(const std::filesystem::path& dataset_path,
                const std::filesystem::path& out_dir,
                std::optional<std::uint32_t> populations,
                std::optional<std::uint32_t> categories,
                std::optional<std::uint32_t> declared_users,
                std::optional<std::uint32_t> declared_items, std::ostream& out,
                std::ostream& err);

int run_fit(const std::filesystem::path& reference_path,
            const std::filesystem::path& grid_path,
            const std::filesystem::path& base_config_path,
            const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);

}  // namespace genrec
