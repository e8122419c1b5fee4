// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "genrec/analysis.hpp"
#include "genrec/config.hpp"
#include "genrec/dataset_io.hpp"
#include "genrec/errors.hpp"
#include "genrec/manifest.hpp"

namespace genrec {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const Matrix& m, std::string_view row_label,
                      std::string_view col_prefix,
                      const std::filesystem::path& path) {
  std::string out(row_label);
  for (std::uint32_t c = 0; c < m.cols; ++c) {
    out += ',';
    out += col_prefix;
    out += std::to_string(c + 1);
  }
  out += '\n';
  for (std::uint32_t r = 0; r < m.rows; ++r) {
    out += std::to_string(r + 1);
    for (std::uint32_t c = 0; c < m.cols; ++c) {
      out += ',';
      out += format_double(m.at(r, c));
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_degree_csv(const DegreeHistogram& hist, const std::filesystem::path& path) {
  std::string out = "degree,count\n";
  for (const auto& [degree, count] : hist.bins) {
    out += std::to_string(degree);
    out += ',';
    out += std::to_string(count);
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_share_csv(const std::vector<double>& shares,
                     const std::filesystem::path& path) {
  // share values aggregated at 1e-4 resolution, frequency = user fraction
  std::map<std::int64_t, std::uint64_t> counts;
  for (double s : shares) counts[std::llround(s * 10000.0)]++;
  std::string out = "share,frequency\n";
  for (const auto& [key, count] : counts) {
    out += format_double(double(key) / 10000.0);
    out += ',';
    out += format_double(double(count) / double(shares.size()));
    out += '\n';
  }
  write_file_atomic(path, out);
}

struct FitSummaryLine {
  std::string label;
  std::optional<PowerLawFit> fit;
  std::uint64_t zero_degree_excluded = 0;
};

FitSummaryLine fit_line(const std::string& label,
                        const std::vector<std::uint32_t>& degrees) {
  std::vector<double> positive;
  for (std::uint32_t d : degrees) {
    if (d > 0) positive.push_back(double(d));
  }
  FitSummaryLine line{label, std::nullopt, degrees.size() - positive.size()};
  try {
    line.fit = fit_power_law(positive);
  } catch (const std::exception&) {
    // left empty; reported as not estimable
  }
  return line;
}

int fail(std::ostream& err, const std::string& message) {
  err << "error: " << message << "\n";
  return 1;
}

}  // namespace

int run_generate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed_override, bool dump_factors,
                 std::ostream& out, std::ostream& err) {
  try {
    GeneratorConfig cfg = parse_config(read_text_file(config_path));
    if (seed_override) cfg.master_seed = *seed_override;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return fail(err, "cannot create output directory: " + out_dir.string());

    const GenerationArtifacts artifacts = generate_with_artifacts(cfg);
    const InteractionDataset& ds = artifacts.dataset;

    const std::uint64_t checksum =
        write_dataset(ds.data, out_dir / "interactions.csv");
    const RunSummary summary = summarize(ds);
    write_file_atomic(out_dir / "manifest.json",
                      manifest_json(cfg, checksum, summary));

    if (dump_factors) {
      write_matrix_csv(artifacts.factors.rho, "user_id", "dim_", out_dir / "rho.csv");
      write_matrix_csv(artifacts.factors.alpha, "item_id", "dim_",
                       out_dir / "alpha.csv");
      write_matrix_csv(artifacts.utilities.true_utility, "user_id", "item_",
                       out_dir / "true_utility.csv");
      write_matrix_csv(artifacts.utilities.observed_utility, "user_id", "item_",
                       out_dir / "observed_utility.csv");
    }

    out << "wrote " << summary.n_interactions << " interactions for "
        << cfg.n_users << " users x " << cfg.n_items << " items (seed "
        << cfg.master_seed << ")\n";
    if (summary.degenerate_rows > 0) {
      out << "note: " << summary.degenerate_rows
          << " degenerate rows were completed by weighted fill\n";
    }
    return 0;
  } catch (const std::exception& e) {
    return fail(err, e.what());
  }
}

int run_analyze(const std::filesystem::path& dataset_path,
                const std::filesystem::path& out_dir,
                std::optional<std::uint32_t> populations,
                std::optional<std::uint32_t> categories,
                std::optional<std::uint32_t> declared_users,
                std::optional<std::uint32_t> declared_items, std::ostream& out,
                std::ostream& err) {
  try {
    IngestReport report;
    const Interactions data =
        read_dataset(dataset_path, &report, declared_users, declared_items);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return fail(err, "cannot create output directory: " + out_dir.string());

    std::ostringstream summary;
    summary << "dataset: " << dataset_path.string() << "\n";
    summary << "users: " << data.n_users << "  items: " << data.n_items
            << "  interactions: " << data.total() << "\n";
    if (report.users_compacted || report.items_compacted) {
      summary << "ids were compacted onto a dense 1-based range\n";
    } else if (report.user_id_offset != 0 || report.item_id_offset != 0) {
      summary << "ids were shifted by (" << report.user_id_offset << ", "
              << report.item_id_offset << ") onto a 1-based range\n";
    }

    write_degree_csv(degree_histogram(data, DegreeAxis::users),
                     out_dir / "user_degrees.csv");
    write_degree_csv(degree_histogram(data, DegreeAxis::items),
                     out_dir / "item_degrees.csv");

    // Coordinate list for interaction-matrix plots.
    {
      std::string coords = "user,item\n";
      for (const auto& [u, i] : interaction_coords(data)) {
        coords += std::to_string(u + 1);
        coords += ',';
        coords += std::to_string(i + 1);
        coords += '\n';
      }
      write_file_atomic(out_dir / "coords.csv", coords);
    }

    std::vector<FitSummaryLine> fits;
    fits.push_back(fit_line("users", degree_vector(data, DegreeAxis::users)));
    fits.push_back(fit_line("items", degree_vector(data, DegreeAxis::items)));

    if (populations && categories) {
      // Latent dimensionality is irrelevant for partition-only analysis;
      // any multiple of `categories` works.
      const PartitionSpec part =
          build_partitions(data.n_users, data.n_items, *categories, *populations,
                           *categories);
      for (std::uint32_t j = 0; j < *populations; ++j) {
        write_degree_csv(degree_histogram(data, DegreeAxis::users, &part,
                                          SubsetFilter::population(j)),
                         out_dir / ("user_degrees_pop" + std::to_string(j + 1) + ".csv"));
        fits.push_back(fit_line("users pop" + std::to_string(j + 1),
                                degree_vector(data, DegreeAxis::users, &part,
                                              SubsetFilter::population(j))));
      }
      for (std::uint32_t k = 0; k < *categories; ++k) {
        write_degree_csv(degree_histogram(data, DegreeAxis::items, &part,
                                          SubsetFilter::category(k)),
                         out_dir / ("item_degrees_cat" + std::to_string(k + 1) + ".csv"));
        fits.push_back(fit_line("items cat" + std::to_string(k + 1),
                                degree_vector(data, DegreeAxis::items, &part,
                                              SubsetFilter::category(k))));
      }
      const CategoryShareDistribution shares = category_share(data, part, 0);
      for (std::uint32_t j = 0; j < *populations; ++j) {
        write_share_csv(shares.shares_by_population[j],
                        out_dir / ("category_share_pop" + std::to_string(j + 1) + ".csv"));
      }
      if (shares.excluded_users > 0) {
        summary << "users excluded from category shares (empty history): "
                << shares.excluded_users << "\n";
      }
    } else if (populations.has_value() != categories.has_value()) {
      return fail(err, "--populations and --categories must be given together");
    }

    summary << "\npower-law fits (degree > 0, x_min by KS minimization):\n";
    for (const auto& line : fits) {
      if (line.fit) {
        summary << "  " << line.label << ": exponent " << line.fit->exponent_hat
                << "  x_min " << line.fit->x_min << "  tail " << line.fit->n_tail
                << "  ks " << line.fit->ks_at_xmin;
      } else {
        summary << "  " << line.label << ": not estimable";
      }
      if (line.zero_degree_excluded > 0) {
        summary << "  (" << line.zero_degree_excluded << " zero-degree excluded)";
      }
      summary << "\n";
    }
    write_file_atomic(out_dir / "summary.txt", summary.str());
    out << summary.str();
    return 0;
  } catch (const std::exception& e) {
    return fail(err, e.what());
  }
}

int run_fit(const std::filesystem::path& reference_path,
            const std::filesystem::path& grid_path,
            const std::filesystem::path& base_config_path,
            const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err) {
  try {
    const Interactions reference = read_dataset(reference_path);
    const GeneratorConfig base = parse_config(read_text_file(base_config_path));

    nlohmann::json grid_doc;
    try {
      grid_doc = nlohmann::json::parse(read_text_file(grid_path));
    } catch (const nlohmann::json::parse_error& e) {
      return fail(err, std::string("grid file is not valid JSON: ") + e.what());
    }
    ParameterGrid grid;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    try {
      if (grid_doc.contains("beta")) grid.beta = grid_doc["beta"].get<std::vector<double>>();
      if (grid_doc.contains("lambda")) {
        grid.lambda = grid_doc["lambda"].get<std::vector<double>>();
      }
      if (grid_doc.contains("delta")) grid.delta = grid_doc["delta"].get<std::vector<double>>();
      if (grid_doc.contains("tau")) {
        grid.tau = grid_doc["tau"].get<std::vector<std::uint32_t>>();
      }
      if (grid_doc.contains("seeds")) {
        seeds = grid_doc["seeds"].get<std::vector<std::uint64_t>>();
      }
    } catch (const nlohmann::json::exception& e) {
      return fail(err, std::string("malformed grid file: ") + e.what());
    }
    if (grid.beta.empty() || grid.lambda.empty() || grid.delta.empty() ||
        grid.tau.empty()) {
      return fail(err, "empty grid");
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return fail(err, "cannot create output directory: " + out_dir.string());

    const FitResult result = grid_search_fit(reference, grid, base, seeds);

    std::string table = "beta,lambda,delta,tau,objective\n";
    for (const GridPoint& p : result.evaluations) {
      table += format_double(p.beta);
      table += ',';
      table += format_double(p.lambda);
      table += ',';
      table += format_double(p.delta);
      table += ',';
      table += std::to_string(p.tau);
      table += ',';
      table += format_double(p.objective);
      table += '\n';
    }
    write_file_atomic(out_dir / "grid.csv", table);

    GeneratorConfig best = base;
    best.n_users = reference.n_users;
    best.n_items = reference.n_items;
    std::get<PowerLawSpec>(best.user_budget_spec).exponent = result.best.beta;
    std::get<PowerLawSpec>(best.item_pop_spec).exponent = result.best.lambda;
    best.delta = result.best.delta;
    best.tau = result.best.tau;
    write_file_atomic(out_dir / "best_config.json", serialize_config(best));

    out << "best: beta " << result.best.beta << "  lambda " << result.best.lambda
        << "  delta " << result.best.delta << "  tau " << result.best.tau
        << "  objective " << result.best.objective << "\n";
    return 0;
  } catch (const std::exception& e) {
    return fail(err, e.what());
  }
}

}  // namespace genrec
