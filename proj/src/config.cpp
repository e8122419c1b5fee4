// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/config.hpp"

#include <set>
#include <string>

#include <json.hpp>

#include "genrec/errors.hpp"

namespace genrec {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw ConfigError(field + ": " + why);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      bad_field(context.empty() ? it.key() : context + "." + it.key(),
                "unknown field");
    }
  }
}

double require_number(const json& obj, const std::string& field) {
  if (!obj.contains(field)) bad_field(field, "missing required field");
  if (!obj[field].is_number()) bad_field(field, "must be a number");
  return obj[field].get<double>();
}

std::uint64_t require_unsigned(const json& obj, const std::string& field) {
  if (!obj.contains(field)) bad_field(field, "missing required field");
  if (!obj[field].is_number_unsigned()) bad_field(field, "must be a nonnegative integer");
  return obj[field].get<std::uint64_t>();
}

LongTailSpec parse_spec(const json& obj, const std::string& field) {
  if (!obj.is_object()) bad_field(field, "must be an object");
  if (!obj.contains("family") || !obj["family"].is_string()) {
    bad_field(field + ".family", "missing or non-string");
  }
  const std::string family = obj["family"].get<std::string>();
  const auto num = [&](const char* key, std::optional<double> fallback =
                                            std::nullopt) -> double {
    if (!obj.contains(key)) {
      if (fallback) return *fallback;
      bad_field(field + "." + key, "missing required field");
    }
    if (!obj[key].is_number()) bad_field(field + "." + key, "must be a number");
    return obj[key].get<double>();
  };
  LongTailSpec spec;
  if (family == "power_law") {
    reject_unknown_keys(obj, {"family", "exponent", "x_min"}, field);
    spec = PowerLawSpec{num("exponent"), num("x_min", 1.0)};
  } else if (family == "power_law_cutoff") {
    reject_unknown_keys(obj, {"family", "exponent", "rate", "x_min"}, field);
    spec = PowerLawCutoffSpec{num("exponent"), num("rate"), num("x_min", 1.0)};
  } else if (family == "stretched_exponential") {
    reject_unknown_keys(obj, {"family", "rate", "shape", "x_min"}, field);
    spec = StretchedExponentialSpec{num("rate"), num("shape"), num("x_min", 1.0)};
  } else if (family == "log_normal") {
    reject_unknown_keys(obj, {"family", "log_mean", "log_sd"}, field);
    spec = LogNormalSpec{num("log_mean"), num("log_sd")};
  } else {
    bad_field(field + ".family",
              "must be one of power_law, power_law_cutoff, "
              "stretched_exponential, log_normal");
  }
  try {
    validate_spec(spec);
  } catch (const ParameterError& e) {
    bad_field(field, e.what());
  }
  return spec;
}

json spec_to_json(const LongTailSpec& spec) {
  json out;
  if (const auto* pl = std::get_if<PowerLawSpec>(&spec)) {
    out["family"] = "power_law";
    out["exponent"] = pl->exponent;
    out["x_min"] = pl->x_min;
  } else if (const auto* co = std::get_if<PowerLawCutoffSpec>(&spec)) {
    out["family"] = "power_law_cutoff";
    out["exponent"] = co->exponent;
    out["rate"] = co->rate;
    out["x_min"] = co->x_min;
  } else if (const auto* se = std::get_if<StretchedExponentialSpec>(&spec)) {
    out["family"] = "stretched_exponential";
    out["rate"] = se->rate;
    out["shape"] = se->shape;
    out["x_min"] = se->x_min;
  } else {
    const auto& ln = std::get<LogNormalSpec>(spec);
    out["family"] = "log_normal";
    out["log_mean"] = ln.log_mean;
    out["log_sd"] = ln.log_sd;
  }
  return out;
}

AffinityMatrix parse_affinity(const json& arr, std::uint32_t populations,
                              std::uint32_t categories) {
  if (!arr.is_array() || arr.size() != populations) {
    bad_field("affinity", "must be an array of " + std::to_string(populations) +
                              " rows of " + std::to_string(categories) + " booleans");
  }
  std::vector<bool> entries;
  entries.reserve(std::size_t(populations) * categories);
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != categories) {
      bad_field("affinity", "every row must have one boolean per category");
    }
    for (const auto& cell : row) {
      if (!cell.is_boolean()) bad_field("affinity", "entries must be booleans");
      entries.push_back(cell.get<bool>());
    }
  }
  try {
    return AffinityMatrix(populations, categories, std::move(entries));
  } catch (const ConfigError& e) {
    bad_field("affinity", e.what());
  }
}

}  // namespace

GeneratorConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  reject_unknown_keys(doc,
                      {"n_users", "n_items", "latent_dim", "populations",
                       "categories", "eps", "delta", "tau", "sigma", "mu_omega",
                       "item_popularity", "user_budget", "affinity", "pdf_mode",
                       "noise_mode", "max_passes", "master_seed"},
                      "");

  GeneratorConfig cfg;
  cfg.n_users = static_cast<std::uint32_t>(require_unsigned(doc, "n_users"));
  cfg.n_items = static_cast<std::uint32_t>(require_unsigned(doc, "n_items"));
  cfg.latent_dim = static_cast<std::uint32_t>(require_unsigned(doc, "latent_dim"));
  if (doc.contains("populations")) {
    cfg.populations = static_cast<std::uint32_t>(require_unsigned(doc, "populations"));
  }
  if (doc.contains("categories")) {
    cfg.categories = static_cast<std::uint32_t>(require_unsigned(doc, "categories"));
  }
  if (doc.contains("eps")) cfg.eps = require_number(doc, "eps");
  if (doc.contains("delta")) cfg.delta = require_number(doc, "delta");
  if (doc.contains("tau")) {
    cfg.tau = static_cast<std::uint32_t>(require_unsigned(doc, "tau"));
  }
  if (doc.contains("sigma")) cfg.sigma = require_number(doc, "sigma");
  if (doc.contains("mu_omega")) cfg.mu_omega = require_number(doc, "mu_omega");
  if (!doc.contains("item_popularity")) {
    bad_field("item_popularity", "missing required field");
  }
  cfg.item_pop_spec = parse_spec(doc["item_popularity"], "item_popularity");
  if (!doc.contains("user_budget")) bad_field("user_budget", "missing required field");
  cfg.user_budget_spec = parse_spec(doc["user_budget"], "user_budget");
  if (doc.contains("affinity")) {
    cfg.affinity = parse_affinity(doc["affinity"], cfg.populations, cfg.categories);
  }
  if (doc.contains("pdf_mode")) {
    const std::string mode = doc["pdf_mode"].is_string()
                                 ? doc["pdf_mode"].get<std::string>()
                                 : std::string();
    if (mode == "cdf") {
      cfg.pdf_mode = PdfMode::cdf;
    } else if (mode == "max_normalized_density") {
      cfg.pdf_mode = PdfMode::max_normalized_density;
    } else {
      bad_field("pdf_mode", "must be \"cdf\" or \"max_normalized_density\"");
    }
  }
  if (doc.contains("noise_mode")) {
    const std::string mode = doc["noise_mode"].is_string()
                                 ? doc["noise_mode"].get<std::string>()
                                 : std::string();
    if (mode == "per_entry") {
      cfg.noise_mode = NoiseMode::per_entry;
    } else if (mode == "global") {
      cfg.noise_mode = NoiseMode::global_scalar;
    } else {
      bad_field("noise_mode", "must be \"per_entry\" or \"global\"");
    }
  }
  if (doc.contains("max_passes")) {
    cfg.max_passes = static_cast<std::uint32_t>(require_unsigned(doc, "max_passes"));
  }
  if (doc.contains("master_seed")) {
    cfg.master_seed = require_unsigned(doc, "master_seed");
  }

  cfg.validate();
  return cfg;
}

std::string serialize_config(const GeneratorConfig& config) {
  json doc;
  doc["n_users"] = config.n_users;
  doc["n_items"] = config.n_items;
  doc["latent_dim"] = config.latent_dim;
  doc["populations"] = config.populations;
  doc["categories"] = config.categories;
  doc["eps"] = config.eps;
  doc["delta"] = config.delta;
  doc["tau"] = config.tau;
  doc["sigma"] = config.sigma;
  doc["mu_omega"] = config.mu_omega;
  doc["item_popularity"] = spec_to_json(config.item_pop_spec);
  doc["user_budget"] = spec_to_json(config.user_budget_spec);
  if (config.affinity) {
    json rows = json::array();
    for (std::uint32_t j = 0; j < config.affinity->populations(); ++j) {
      json row = json::array();
      for (std::uint32_t k = 0; k < config.affinity->categories(); ++k) {
        row.push_back(config.affinity->prefers(j, k));
      }
      rows.push_back(row);
    }
    doc["affinity"] = rows;
  }
  doc["pdf_mode"] = config.pdf_mode == PdfMode::cdf ? "cdf" : "max_normalized_density";
  doc["noise_mode"] =
      config.noise_mode == NoiseMode::per_entry ? "per_entry" : "global";
  doc["max_passes"] = config.max_passes;
  doc["master_seed"] = config.master_seed;
  return doc.dump(2) + "\n";
}

}  // namespace genrec
