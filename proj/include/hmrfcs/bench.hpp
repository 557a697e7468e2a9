#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hmrfcs/cs_variants.hpp"
#include "hmrfcs/energy.hpp"

namespace hmrfcs {

// Parsed experiment description. The file format is line-oriented
// `key = value` with `,`-separated lists and `#` comments; unknown or
// duplicate keys are errors. Grid lists are canonicalized (sorted,
// deduplicated) at parse time so the row order below is well defined.
struct ExperimentConfig {
  std::filesystem::path dataset_dir;
  std::filesystem::path output_dir;
  std::vector<Variant> variants;
  std::vector<int> n_values;
  std::vector<int> ni_values;
  std::vector<double> temp_values;
  double b = 1.0;
  int k = 2;
  Neighborhood neighborhood = Neighborhood::EightConnected;
  std::vector<std::uint64_t> seeds;
  bool both_polarities = false;
};

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// One grid cell on one image with one base seed. Rows that fail carry the
// reason in `error` and blank metric fields in the CSVs.
struct RunRecord {
  std::string image_name;
  Variant variant = Variant::Scs;
  int n = 0;
  int ni = 0;
  double t_param = 0.0;
  double b = 0.0;
  std::uint64_t seed = 0;  // base seed from the config, not the derived one
  double me = 0.0;
  double energy = 0.0;
  double duration_s = 0.0;
  std::vector<double> mu_star;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct BenchResult {
  std::vector<RunRecord> rows;  // image, variant, n, ni, temp, seed order
  std::size_t ok_rows = 0;
  std::size_t error_rows = 0;
};

// Row seed = base seed mixed with a stable hash of
// "<image>|<variant>|<n>|<ni>|<temp>", so any row reruns in isolation.
std::uint64_t derive_row_seed(std::uint64_t base_seed,
                              const std::string& image_name, Variant variant,
                              int n, int ni, double temp);

// Executes the full cross product with up to `jobs` worker threads. Row
// order and content are independent of the thread count.
BenchResult run_bench(const ExperimentConfig& config, int jobs = 1);

// HMRF_CS_JOBS when set to a positive integer, else 1.
int jobs_from_env();

// results.csv: one row per RunRecord, header
// image,variant,n,ni,temp,b,seed,me,energy,duration_s,mu_star,error
// (mu_star components are ';'-joined inside the one field).
void write_results_csv(const std::filesystem::path& path,
                       const std::vector<RunRecord>& rows);

// summary.csv: per (variant,n,ni,temp) arithmetic mean of me and duration
// over the rows that succeeded.
void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<RunRecord>& rows);

// best_params.csv: per variant the (n,ni,temp) with the smallest mean me,
// ties broken by the smaller mean duration.
void write_best_params_csv(const std::filesystem::path& path,
                           const std::vector<RunRecord>& rows);

// Shortest round-trip decimal form ('.' separator, no grouping).
std::string format_double(double value);

}  // namespace hmrfcs
