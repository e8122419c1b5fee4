// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <string_view>

#include "genrec/generator.hpp"

namespace genrec {

// JSON configuration document. Required fields: n_users, n_items,
// latent_dim, item_popularity, user_budget. Everything else has defaults.
// Unknown keys are rejected so typos surface as errors.
GeneratorConfig parse_config(std::string_view json_text);

// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const GeneratorConfig& config);

}  // namespace genrec
