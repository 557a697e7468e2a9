// Command-line front end: segment one image, run a benchmark grid from a
// config file, score a segmentation against a ground truth, or generate a
// synthetic dataset.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hmrfcs/bench.hpp"
#include "hmrfcs/cs_variants.hpp"
#include "hmrfcs/evaluation.hpp"
#include "hmrfcs/image.hpp"
#include "hmrfcs/synth.hpp"

namespace {

hmrfcs::Neighborhood neighborhood_from_flag(const std::string& text) {
  if (text == "4" || text == "four") return hmrfcs::Neighborhood::FourConnected;
  if (text == "8" || text == "eight") {
    return hmrfcs::Neighborhood::EightConnected;
  }
  throw std::invalid_argument("--neighborhood must be 4 or 8");
}

// format_double, but always with a fractional part ("0" -> "0.0") so the
// value reads unambiguously as a real.
std::string format_real(double value) {
  std::string s = hmrfcs::format_double(value);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos &&
      s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

struct SegmentArgs {
  std::string image;
  std::string variant = "ics";
  int n = -1;
  int ni = -1;
  double temp = -1.0;
  double b = 1.0;
  int k = 2;
  std::string neighborhood = "8";
  std::uint64_t seed = 1;
  std::string out;
};

int run_segment(const SegmentArgs& args) {
  const hmrfcs::Variant variant = hmrfcs::parse_variant(args.variant);
  hmrfcs::VariantPreset preset = hmrfcs::default_preset(variant);
  if (args.n > 0) preset.config.common.n = args.n;
  if (args.ni > 0) preset.config.common.ni = args.ni;
  if (args.temp > 0.0) preset.temperature = args.temp;
  preset.config.common.seed = args.seed;

  hmrfcs::EnergyParams eparams;
  eparams.b = args.b;
  eparams.temperature = preset.temperature;
  eparams.neighborhood = neighborhood_from_flag(args.neighborhood);

  const hmrfcs::GrayImage image = hmrfcs::load_pgm(args.image);
  const hmrfcs::RunResult result =
      hmrfcs::run(image, args.k, preset.config, eparams);

  std::filesystem::path out_path = args.out;
  if (out_path.empty()) {
    out_path = std::filesystem::path(args.image).replace_extension(".seg.pgm");
  }
  hmrfcs::save_pgm(hmrfcs::labels_to_image(result.labels), out_path);

  std::cout << "variant=" << hmrfcs::variant_name(variant)
            << " n=" << preset.config.common.n
            << " ni=" << preset.config.common.ni
            << " temp=" << hmrfcs::format_double(preset.temperature)
            << " b=" << hmrfcs::format_double(args.b) << " k=" << args.k
            << " neighborhood=" << args.neighborhood << " seed=" << args.seed
            << " energy=" << hmrfcs::format_double(result.energy)
            << " duration_s=" << hmrfcs::format_double(result.duration_s)
            << " mu_star=";
  for (std::size_t j = 0; j < result.mu_star.size(); ++j) {
    if (j > 0) std::cout << ';';
    std::cout << hmrfcs::format_double(result.mu_star[j]);
  }
  std::cout << " out=" << out_path.string() << '\n';
  return 0;
}

struct BenchArgs {
  std::string config;
  int jobs = 0;  // 0: use HMRF_CS_JOBS or 1
};

int run_bench_cmd(const BenchArgs& args) {
  const hmrfcs::ExperimentConfig config =
      hmrfcs::load_experiment_config(args.config);
  const int jobs = args.jobs > 0 ? args.jobs : hmrfcs::jobs_from_env();

  const hmrfcs::BenchResult result = hmrfcs::run_bench(config, jobs);

  std::filesystem::create_directories(config.output_dir);
  hmrfcs::write_results_csv(config.output_dir / "results.csv", result.rows);
  hmrfcs::write_summary_csv(config.output_dir / "summary.csv", result.rows);
  hmrfcs::write_best_params_csv(config.output_dir / "best_params.csv",
                                result.rows);

  std::cout << "rows=" << result.rows.size() << " ok=" << result.ok_rows
            << " errors=" << result.error_rows
            << " output_dir=" << config.output_dir.string() << '\n';
  if (result.error_rows > 0) {
    for (const hmrfcs::RunRecord& row : result.rows) {
      if (!row.ok()) {
        std::cerr << "row error: " << row.image_name << ' '
                  << hmrfcs::variant_name(row.variant) << " n=" << row.n
                  << " ni=" << row.ni << ": " << row.error << '\n';
      }
    }
  }
  return result.ok_rows == 0 ? 1 : 0;
}

struct EvalArgs {
  std::string gt;
  std::string seg;
  bool both_polarities = false;
};

int run_eval(const EvalArgs& args) {
  const hmrfcs::BinaryMask gt =
      hmrfcs::mask_from_image(hmrfcs::load_pgm(args.gt));
  const hmrfcs::BinaryMask seg =
      hmrfcs::mask_from_image(hmrfcs::load_pgm(args.seg));
  const hmrfcs::MEReport report =
      hmrfcs::misclassification_error(gt, seg, args.both_polarities);
  std::cout << format_real(report.me);
  if (args.both_polarities) {
    std::cout << " polarity_flipped="
              << (report.polarity_flipped ? "true" : "false");
  }
  std::cout << '\n';
  return 0;
}

struct SynthArgs {
  std::string out;
  hmrfcs::SynthOptions options;
};

int run_synth(const SynthArgs& args) {
  const auto stems = hmrfcs::synth_dataset(args.out, args.options);
  std::cout << "wrote " << stems.size() << " image/GT pairs to " << args.out
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HMRF segmentation with cuckoo-search variants"};
  app.require_subcommand(1);

  SegmentArgs seg_args;
  CLI::App* seg = app.add_subcommand("segment", "Segment one PGM image");
  seg->add_option("--image", seg_args.image, "Input PGM (P2 or P5)")
      ->required();
  seg->add_option("--variant", seg_args.variant,
                  "One of scs, ics, aacs, mcs, nmcs");
  seg->add_option("--n", seg_args.n, "Population size (default: preset)");
  seg->add_option("--ni", seg_args.ni, "Generations (default: preset)");
  seg->add_option("--temp", seg_args.temp,
                  "Temperature T (default: preset)");
  seg->add_option("--b", seg_args.b, "Clique coefficient B");
  seg->add_option("--k", seg_args.k, "Number of classes");
  seg->add_option("--neighborhood", seg_args.neighborhood, "4 or 8");
  seg->add_option("--seed", seg_args.seed, "RNG seed");
  seg->add_option("--out", seg_args.out,
                  "Output label PGM (default: <image>.seg.pgm)");

  BenchArgs bench_args;
  CLI::App* bench =
      app.add_subcommand("bench", "Run a benchmark grid from a config file");
  bench->add_option("--config", bench_args.config, "key = value config file")
      ->required();
  bench->add_option("--jobs", bench_args.jobs,
                    "Worker threads (default: HMRF_CS_JOBS or 1)");

  EvalArgs eval_args;
  CLI::App* eval =
      app.add_subcommand("eval", "Misclassification error of seg vs GT");
  eval->add_option("--gt", eval_args.gt, "Ground-truth PGM (0 = background)")
      ->required();
  eval->add_option("--seg", eval_args.seg, "Segmentation PGM")->required();
  eval->add_flag("--both-polarities", eval_args.both_polarities,
                 "Score both polarities, report the smaller ME");

  SynthArgs synth_args;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->add_option("--count", synth_args.options.count, "Image count");
  synth->add_option("--size", synth_args.options.size, "Image side length");
  synth->add_option("--bg-mean", synth_args.options.bg_mean,
                    "Background intensity");
  synth->add_option("--fg-mean", synth_args.options.fg_mean,
                    "Foreground intensity");
  synth->add_option("--noise-sigma", synth_args.options.noise_sigma,
                    "Gaussian noise sigma");
  synth->add_option("--seed", synth_args.options.seed, "RNG seed");

  try {
    app.parse(argc, argv);
    if (seg->parsed()) return run_segment(seg_args);
    if (bench->parsed()) return run_bench_cmd(bench_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (synth->parsed()) return run_synth(synth_args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
