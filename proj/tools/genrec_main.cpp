// Apache License, Version 2.0, refer to LICENSE.txt
//
// genrec: synthetic user-item interaction generator.
//
//   genrec generate --config cfg.json --out dir [--seed N] [--dump-factors]
//   genrec analyze  --dataset interactions.csv --out dir
//                   [--populations p --categories c] [--users N --items M]
//   genrec fit      --reference ref.csv --grid grid.json --config base.json --out dir
//
// GENREC_THREADS caps internal parallelism.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "genrec/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synthetic user-item interaction generator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string dataset_path;
  std::string reference_path;
  std::string grid_path;
  std::uint64_t seed = 0;
  bool dump_factors = false;
  std::uint32_t populations = 0;
  std::uint32_t categories = 0;
  std::uint32_t declared_users = 0;
  std::uint32_t declared_items = 0;

  CLI::App* generate = app.add_subcommand("generate", "generate a dataset");
  generate->add_option("--config", config_path, "generator config (JSON)")->required();
  generate->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* seed_opt =
      generate->add_option("--seed", seed, "override the config master seed");
  generate->add_flag("--dump-factors", dump_factors,
                     "also write latent factors and utility matrices");

  CLI::App* analyze = app.add_subcommand("analyze", "measure a dataset");
  analyze->add_option("--dataset", dataset_path, "interaction CSV")->required();
  analyze->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* pop_opt =
      analyze->add_option("--populations", populations, "user population count");
  CLI::Option* cat_opt =
      analyze->add_option("--categories", categories, "item category count");
  CLI::Option* users_opt =
      analyze->add_option("--users", declared_users, "declared user count");
  CLI::Option* items_opt =
      analyze->add_option("--items", declared_items, "declared item count");

  CLI::App* fit = app.add_subcommand("fit", "calibrate parameters to a reference");
  fit->add_option("--reference", reference_path, "reference interaction CSV")->required();
  fit->add_option("--grid", grid_path, "parameter grid (JSON)")->required();
  fit->add_option("--config", config_path, "base generator config (JSON)")->required();
  fit->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  const auto opt_u32 = [](CLI::Option* opt, std::uint32_t value) {
    return opt->count() > 0 ? std::optional<std::uint32_t>(value) : std::nullopt;
  };

  if (generate->parsed()) {
    return genrec::run_generate(config_path, out_dir,
                                seed_opt->count() > 0
                                    ? std::optional<std::uint64_t>(seed)
                                    : std::nullopt,
                                dump_factors, std::cout, std::cerr);
  }
  if (analyze->parsed()) {
    return genrec::run_analyze(dataset_path, out_dir, opt_u32(pop_opt, populations),
                               opt_u32(cat_opt, categories),
                               opt_u32(users_opt, declared_users),
                               opt_u32(items_opt, declared_items), std::cout,
                               std::cerr);
  }
  return genrec::run_fit(reference_path, grid_path, config_path, out_dir, std::cout,
                         std::cerr);
}
