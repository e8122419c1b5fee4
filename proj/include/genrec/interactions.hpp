// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <vector>

namespace genrec {

// A bare preference set: one ordered list of distinct item indices per
// user. Indices are 0-based internally; file formats are 1-based.
struct Interactions {
  std::uint32_t n_users = 0;
  std::uint32_t n_items = 0;
  std::vector<std::vector<std::uint32_t>> histories;

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (const auto& h : histories) n += h.size();
    return n;
  }
};

}  // namespace genrec
