#include "hmrfcs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "hmrfcs/evaluation.hpp"
#include "hmrfcs/image.hpp"
#include "hmrfcs/rng.hpp"

namespace hmrfcs {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string::npos) comma = value.size();
    std::string item = trim(value.substr(start, comma - start));
    if (item.empty()) {
      throw std::invalid_argument("experiment config: empty list item");
    }
    items.push_back(std::move(item));
    start = comma + 1;
  }
  return items;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  std::from_chars_result res;
  if constexpr (std::is_floating_point_v<T>) {
    res = std::from_chars(first, last, value);
  } else {
    res = std::from_chars(first, last, value, 10);
  }
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::invalid_argument(std::string("experiment config: bad ") + what +
                                " value '" + text + "'");
  }
  return value;
}

Neighborhood parse_neighborhood(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (text == "4" || text == "four") return Neighborhood::FourConnected;
  if (text == "8" || text == "eight") return Neighborhood::EightConnected;
  throw std::invalid_argument(
      "experiment config: neighborhood must be 4 or 8");
}

bool parse_bool(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("experiment config: bad boolean '" + text + "'");
}

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string sanitize_csv_field(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

struct GroupKey {
  std::string variant;
  int n;
  int ni;
  double temp;

  bool operator<(const GroupKey& o) const {
    return std::tie(variant, n, ni, temp) <
           std::tie(o.variant, o.n, o.ni, o.temp);
  }
};

struct GroupAccum {
  double sum_me = 0.0;
  double sum_duration = 0.0;
  std::size_t count = 0;
};

std::map<GroupKey, GroupAccum> aggregate(const std::vector<RunRecord>& rows) {
  std::map<GroupKey, GroupAccum> groups;
  for (const RunRecord& r : rows) {
    if (!r.ok()) continue;
    GroupAccum& g = groups[{variant_name(r.variant), r.n, r.ni, r.t_param}];
    g.sum_me += r.me;
    g.sum_duration += r.duration_s;
    ++g.count;
  }
  return groups;
}

void open_or_throw(std::ofstream& out, const std::filesystem::path& path) {
  out.open(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (std::size_t hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("experiment config line " +
                                  std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("experiment config line " +
                                  std::to_string(lineno) +
                                  ": expected key = value");
    }
    if (!seen.insert(key).second) {
      throw std::invalid_argument("experiment config: duplicate key '" + key +
                                  "'");
    }

    if (key == "dataset_dir") {
      cfg.dataset_dir = value;
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "variants") {
      for (const std::string& item : split_list(value)) {
        cfg.variants.push_back(parse_variant(item));
      }
    } else if (key == "n") {
      for (const std::string& item : split_list(value)) {
        cfg.n_values.push_back(parse_number<int>(item, "n"));
      }
    } else if (key == "ni") {
      for (const std::string& item : split_list(value)) {
        cfg.ni_values.push_back(parse_number<int>(item, "ni"));
      }
    } else if (key == "temp") {
      for (const std::string& item : split_list(value)) {
        cfg.temp_values.push_back(parse_number<double>(item, "temp"));
      }
    } else if (key == "b") {
      cfg.b = parse_number<double>(value, "b");
    } else if (key == "k") {
      cfg.k = parse_number<int>(value, "k");
    } else if (key == "neighborhood") {
      cfg.neighborhood = parse_neighborhood(value);
    } else if (key == "seeds") {
      for (const std::string& item : split_list(value)) {
        cfg.seeds.push_back(parse_number<std::uint64_t>(item, "seed"));
      }
    } else if (key == "both_polarities") {
      cfg.both_polarities = parse_bool(value);
    } else {
      throw std::invalid_argument("experiment config: unknown key '" + key +
                                  "'");
    }
  }

  if (cfg.dataset_dir.empty()) {
    throw std::invalid_argument("experiment config: dataset_dir is required");
  }
  if (cfg.output_dir.empty()) {
    throw std::invalid_argument("experiment config: output_dir is required");
  }
  if (cfg.variants.empty() || cfg.n_values.empty() || cfg.ni_values.empty() ||
      cfg.temp_values.empty() || cfg.seeds.empty()) {
    throw std::invalid_argument(
        "experiment config: variants, n, ni, temp and seeds must all be "
        "nonempty lists");
  }
  for (int n : cfg.n_values) {
    if (n < 1) throw std::invalid_argument("experiment config: n must be >= 1");
  }
  for (int ni : cfg.ni_values) {
    if (ni < 1) {
      throw std::invalid_argument("experiment config: ni must be >= 1");
    }
  }
  for (double t : cfg.temp_values) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("experiment config: temp must be > 0");
    }
  }
  if (!(cfg.b > 0.0)) {
    throw std::invalid_argument("experiment config: b must be > 0");
  }
  if (cfg.k < 2) {
    throw std::invalid_argument("experiment config: k must be >= 2");
  }

  std::sort(cfg.variants.begin(), cfg.variants.end(),
            [](Variant a, Variant b) {
              return std::strcmp(variant_name(a), variant_name(b)) < 0;
            });
  cfg.variants.erase(std::unique(cfg.variants.begin(), cfg.variants.end()),
                     cfg.variants.end());
  sort_unique(cfg.n_values);
  sort_unique(cfg.ni_values);
  sort_unique(cfg.temp_values);
  sort_unique(cfg.seeds);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path.string());
  }
  return parse_experiment_config(in);
}

std::uint64_t derive_row_seed(std::uint64_t base_seed,
                              const std::string& image_name, Variant variant,
                              int n, int ni, double temp) {
  std::string key = image_name;
  key += '|';
  key += variant_name(variant);
  key += '|';
  key += std::to_string(n);
  key += '|';
  key += std::to_string(ni);
  key += '|';
  key += format_double(temp);
  return mix_seed(base_seed, fnv1a64(key.data(), key.size()));
}

int jobs_from_env() {
  const char* env = std::getenv("HMRF_CS_JOBS");
  if (env == nullptr) return 1;
  int jobs = 0;
  auto res = std::from_chars(env, env + std::strlen(env), jobs, 10);
  if (res.ec != std::errc{} || *res.ptr != '\0' || jobs < 1) return 1;
  return jobs;
}

BenchResult run_bench(const ExperimentConfig& config, int jobs) {
  if (config.k != 2) {
    throw std::invalid_argument(
        "bench requires k = 2 (ground truths are binary)");
  }

  // Dataset scan: every <stem>.pgm needs its <stem>.gt.pgm partner.
  std::vector<std::string> stems;
  for (const auto& entry :
       std::filesystem::directory_iterator(config.dataset_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() < 4 || name.substr(name.size() - 4) != ".pgm") continue;
    if (name.size() >= 7 && name.substr(name.size() - 7) == ".gt.pgm") {
      continue;
    }
    stems.push_back(name.substr(0, name.size() - 4));
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) {
    throw std::runtime_error("no .pgm images in " +
                             config.dataset_dir.string());
  }

  struct LoadedImage {
    std::string stem;
    GrayImage image;
    BinaryMask gt;
  };
  std::vector<LoadedImage> images;
  images.reserve(stems.size());
  for (const std::string& stem : stems) {
    const auto gt_path = config.dataset_dir / (stem + ".gt.pgm");
    if (!std::filesystem::exists(gt_path)) {
      throw std::runtime_error("missing ground truth " + gt_path.string());
    }
    LoadedImage li;
    li.stem = stem;
    li.image = load_pgm(config.dataset_dir / (stem + ".pgm"));
    li.gt = mask_from_image(load_pgm(gt_path));
    if (li.gt.width != li.image.width || li.gt.height != li.image.height) {
      throw std::runtime_error("ground truth dimensions differ for " + stem);
    }
    images.push_back(std::move(li));
  }

  // Row skeletons in their final deterministic order.
  BenchResult result;
  std::vector<std::size_t> task_image;
  for (std::size_t ii = 0; ii < images.size(); ++ii) {
    for (Variant v : config.variants) {
      for (int n : config.n_values) {
        for (int ni : config.ni_values) {
          for (double temp : config.temp_values) {
            for (std::uint64_t seed : config.seeds) {
              RunRecord row;
              row.image_name = images[ii].stem;
              row.variant = v;
              row.n = n;
              row.ni = ni;
              row.t_param = temp;
              row.b = config.b;
              row.seed = seed;
              result.rows.push_back(std::move(row));
              task_image.push_back(ii);
            }
          }
        }
      }
    }
  }

  auto execute_row = [&](std::size_t idx) {
    RunRecord& row = result.rows[idx];
    const LoadedImage& li = images[task_image[idx]];
    try {
      VariantConfig vc;
      vc.variant = row.variant;
      vc.common.n = row.n;
      vc.common.ni = row.ni;
      vc.common.seed = derive_row_seed(row.seed, row.image_name, row.variant,
                                       row.n, row.ni, row.t_param);
      EnergyParams ep;
      ep.b = row.b;
      ep.temperature = row.t_param;
      ep.neighborhood = config.neighborhood;

      const RunResult rr = run(li.image, config.k, vc, ep);
      row.energy = rr.energy;
      row.duration_s = rr.duration_s;
      row.mu_star = rr.mu_star;

      const ClassStatistics stats = class_statistics(li.image, rr.labels);
      const BinaryMask seg = binarize_labels(rr.labels, stats);
      row.me = misclassification_error(li.gt, seg, config.both_polarities).me;
    } catch (const std::exception& e) {
      row.error = e.what();
    } catch (...) {
      row.error = "unknown error";
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1 || result.rows.size() <= 1) {
    for (std::size_t i = 0; i < result.rows.size(); ++i) execute_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= result.rows.size()) break;
        execute_row(i);
      }
    };
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(static_cast<std::size_t>(jobs),
                                       result.rows.size());
    pool.reserve(spawn);
    for (std::size_t j = 0; j < spawn; ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (const RunRecord& row : result.rows) {
    if (row.ok()) {
      ++result.ok_rows;
    } else {
      ++result.error_rows;
    }
  }
  return result;
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<RunRecord>& rows) {
  std::ofstream out;
  open_or_throw(out, path);
  out << "image,variant,n,ni,temp,b,seed,me,energy,duration_s,mu_star,error\n";
  for (const RunRecord& r : rows) {
    out << sanitize_csv_field(r.image_name) << ',' << variant_name(r.variant)
        << ',' << r.n << ',' << r.ni << ',' << format_double(r.t_param) << ','
        << format_double(r.b) << ',' << r.seed << ',';
    if (r.ok()) {
      out << format_double(r.me) << ',' << format_double(r.energy) << ','
          << format_double(r.duration_s) << ',';
      for (std::size_t j = 0; j < r.mu_star.size(); ++j) {
        if (j > 0) out << ';';
        out << format_double(r.mu_star[j]);
      }
      out << ',';
    } else {
      out << ",,,,";
    }
    out << sanitize_csv_field(r.error) << '\n';
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<RunRecord>& rows) {
  std::ofstream out;
  open_or_throw(out, path);
  out << "variant,n,ni,temp,rows,mean_me,mean_duration_s\n";
  for (const auto& [key, acc] : aggregate(rows)) {
    out << key.variant << ',' << key.n << ',' << key.ni << ','
        << format_double(key.temp) << ',' << acc.count << ','
        << format_double(acc.sum_me / static_cast<double>(acc.count)) << ','
        << format_double(acc.sum_duration / static_cast<double>(acc.count))
        << '\n';
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

void write_best_params_csv(const std::filesystem::path& path,
                           const std::vector<RunRecord>& rows) {
  struct Best {
    GroupKey key;
    double mean_me = 0.0;
    double mean_duration = 0.0;
    bool set = false;
  };
  std::map<std::string, Best> best;  // by variant name
  for (const auto& [key, acc] : aggregate(rows)) {
    const double mean_me = acc.sum_me / static_cast<double>(acc.count);
    const double mean_dur = acc.sum_duration / static_cast<double>(acc.count);
    Best& b = best[key.variant];
    const bool better =
        !b.set || mean_me < b.mean_me ||
        (mean_me == b.mean_me && mean_dur < b.mean_duration);
    if (better) {
      b.key = key;
      b.mean_me = mean_me;
      b.mean_duration = mean_dur;
      b.set = true;
    }
  }

  std::ofstream out;
  open_or_throw(out, path);
  out << "variant,n,ni,temp,mean_me,mean_duration_s\n";
  for (const auto& [name, b] : best) {
    out << name << ',' << b.key.n << ',' << b.key.ni << ','
        << format_double(b.key.temp) << ',' << format_double(b.mean_me) << ','
        << format_double(b.mean_duration) << '\n';
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace hmrfcs
