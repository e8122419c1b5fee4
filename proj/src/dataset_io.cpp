// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <unordered_set>
#include <vector>

#include "genrec/errors.hpp"
#include "genrec/random.hpp"

namespace genrec {

namespace {

std::string line_message(const std::string& what, std::uint64_t line) {
  return what + " at line " + std::to_string(line);
}

std::uint64_t parse_id(std::string_view field, std::uint64_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw IngestError(line_message("non-integer id", line));
  }
  return value;
}

}  // namespace

std::string serialize_dataset(const Interactions& data) {
  std::string out = "user_id,item_id\n";
  std::vector<std::uint32_t> items;
  for (std::uint32_t u = 0; u < data.n_users; ++u) {
    items.assign(data.histories[u].begin(), data.histories[u].end());
    std::sort(items.begin(), items.end());
    for (std::uint32_t i : items) {
      out += std::to_string(u + 1);
      out += ',';
      out += std::to_string(i + 1);
      out += '\n';
    }
  }
  return out;
}

std::uint64_t dataset_checksum(const Interactions& data) {
  return fnv1a64(serialize_dataset(data));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestError("cannot open for writing: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IngestError("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t write_dataset(const Interactions& data,
                            const std::filesystem::path& path) {
  const std::string bytes = serialize_dataset(data);
  write_file_atomic(path, bytes);
  return fnv1a64(bytes);
}

Interactions read_dataset(const std::filesystem::path& path, IngestReport* report,
                          std::optional<std::uint32_t> declared_users,
                          std::optional<std::uint32_t> declared_items) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open dataset file: " + path.string());

  std::string line;
  std::uint64_t line_no = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
  std::unordered_set<std::uint64_t> seen;
  bool header_checked = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_checked) {
      header_checked = true;
      if (line == "user_id,item_id") continue;  // header optional on ingest
    }
    if (line.empty()) {
      if (in.eof()) break;
      throw IngestError(line_message("empty row", line_no));
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw IngestError(line_message("malformed row (expected user,item)", line_no));
    }
    const std::uint64_t user = parse_id(std::string_view(line).substr(0, comma), line_no);
    const std::uint64_t item = parse_id(std::string_view(line).substr(comma + 1), line_no);
    if (user > 0xffffffffULL || item > 0xffffffffULL) {
      throw IngestError(line_message("id out of range", line_no));
    }
    if (!seen.insert((user << 32) | item).second) {
      throw IngestError(line_message("duplicate row", line_no));
    }
    rows.emplace_back(user, item);
  }
  if (rows.empty()) throw IngestError("dataset file has no interaction rows");

  // Map raw ids to 0-based internal indices.
  const auto build_map = [](const std::vector<std::uint64_t>& sorted_unique,
                            std::int64_t* offset, bool* compacted)
      -> std::map<std::uint64_t, std::uint32_t> {
    std::map<std::uint64_t, std::uint32_t> map;
    const std::uint64_t lo = sorted_unique.front();
    if (lo <= 1) {
      *offset = static_cast<std::int64_t>(1 - static_cast<std::int64_t>(lo));
      *compacted = false;
      for (std::uint64_t raw : sorted_unique) {
        map[raw] = static_cast<std::uint32_t>(raw - lo);
      }
    } else {
      *offset = 0;
      *compacted = true;
      std::uint32_t next = 0;
      for (std::uint64_t raw : sorted_unique) map[raw] = next++;
    }
    return map;
  };

  std::vector<std::uint64_t> user_ids;
  std::vector<std::uint64_t> item_ids;
  for (const auto& [u, i] : rows) {
    user_ids.push_back(u);
    item_ids.push_back(i);
  }
  std::sort(user_ids.begin(), user_ids.end());
  user_ids.erase(std::unique(user_ids.begin(), user_ids.end()), user_ids.end());
  std::sort(item_ids.begin(), item_ids.end());
  item_ids.erase(std::unique(item_ids.begin(), item_ids.end()), item_ids.end());

  IngestReport rep;
  rep.n_rows = rows.size();
  const auto user_map =
      build_map(user_ids, &rep.user_id_offset, &rep.users_compacted);
  const auto item_map =
      build_map(item_ids, &rep.item_id_offset, &rep.items_compacted);

  const std::uint32_t max_user = user_map.rbegin()->second;
  const std::uint32_t max_item = item_map.rbegin()->second;

  Interactions data;
  data.n_users = declared_users.value_or(max_user + 1);
  data.n_items = declared_items.value_or(max_item + 1);
  if (max_user >= data.n_users) {
    throw IngestError("user id exceeds the declared user count");
  }
  if (max_item >= data.n_items) {
    throw IngestError("item id exceeds the declared item count");
  }
  data.histories.resize(data.n_users);
  for (const auto& [u, i] : rows) {
    data.histories[user_map.at(u)].push_back(item_map.at(i));
  }
  for (auto& h : data.histories) std::sort(h.begin(), h.end());

  if (report) *report = rep;
  return data;
}

}  // namespace genrec
