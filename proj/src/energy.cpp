#include "hmrfcs/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hmrfcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_params(const EnergyParams& p) {
  if (!(p.b > 0.0)) throw std::invalid_argument("energy: B must be > 0");
  if (!(p.temperature > 0.0))
    throw std::invalid_argument("energy: temperature must be > 0");
  if (!(p.sigma_floor > 0.0))
    throw std::invalid_argument("energy: sigma_floor must be > 0");
}

}  // namespace

double smoothness_term(const LabelField& labels, Neighborhood neighborhood) {
  const int w = labels.width;
  const int h = labels.height;
  const bool diag = neighborhood == Neighborhood::EightConnected;
  std::int64_t sum = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = labels.at(x, y);
      if (x + 1 < w) sum += (a == labels.at(x + 1, y)) ? -1 : 1;
      if (y + 1 < h) {
        sum += (a == labels.at(x, y + 1)) ? -1 : 1;
        if (diag) {
          if (x + 1 < w) sum += (a == labels.at(x + 1, y + 1)) ? -1 : 1;
          if (x > 0) sum += (a == labels.at(x - 1, y + 1)) ? -1 : 1;
        }
      }
    }
  }
  return static_cast<double>(sum);
}

EnergyEvaluator::EnergyEvaluator(const GrayImage& image,
                                 const EnergyParams& params)
    : params_(params) {
  check_params(params);
  for (std::uint8_t v : image.pixels) ++hist_[v];

  // Pair counts C[a][b] over unordered neighbor pairs keyed by
  // (min,max) intensity, then 2-D prefix sums with a one-cell border.
  std::vector<std::int64_t> c(256 * 256, 0);
  const int w = image.width;
  const int h = image.height;
  const bool diag = params.neighborhood == Neighborhood::EightConnected;
  auto add_pair = [&](int v1, int v2) {
    const int lo = v1 < v2 ? v1 : v2;
    const int hi = v1 < v2 ? v2 : v1;
    ++c[lo * 256 + hi];
    ++total_pairs_;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int v = image.at(x, y);
      if (x + 1 < w) add_pair(v, image.at(x + 1, y));
      if (y + 1 < h) {
        add_pair(v, image.at(x, y + 1));
        if (diag) {
          if (x + 1 < w) add_pair(v, image.at(x + 1, y + 1));
          if (x > 0) add_pair(v, image.at(x - 1, y + 1));
        }
      }
    }
  }

  pair_prefix_.assign(257 * 257, 0);
  for (int a = 0; a < 256; ++a) {
    for (int b = 0; b < 256; ++b) {
      pair_prefix_[(a + 1) * 257 + (b + 1)] =
          c[a * 256 + b] + pair_prefix_[a * 257 + (b + 1)] +
          pair_prefix_[(a + 1) * 257 + b] - pair_prefix_[a * 257 + b];
    }
  }
}

std::int64_t EnergyEvaluator::pairs_within(int lo1, int hi1, int lo2,
                                           int hi2) const {
  // pairs whose (min,max) intensities land in [lo1,hi1] x [lo2,hi2]
  const auto& s = pair_prefix_;
  return s[(hi1 + 1) * 257 + (hi2 + 1)] - s[lo1 * 257 + (hi2 + 1)] -
         s[(hi1 + 1) * 257 + lo2] + s[lo1 * 257 + lo2];
}

double EnergyEvaluator::eval_runs(std::span<const IntensityRun> runs,
                                  int k) const {
  // Data term: empirical mean and floored population deviation per class.
  double data = 0.0;
  std::vector<double> sums(k, 0.0);
  std::vector<std::int64_t> counts(k, 0);
  for (const auto& r : runs) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (int v = r.lo; v <= r.hi; ++v) {
      count += hist_[v];
      sum += static_cast<double>(v) * static_cast<double>(hist_[v]);
    }
    sums[r.label] += sum;
    counts[r.label] += count;
  }
  for (int j = 0; j < k; ++j) {
    if (counts[j] == 0) continue;  // empty class contributes nothing
    const double mean = sums[j] / static_cast<double>(counts[j]);
    double sq = 0.0;
    for (const auto& r : runs) {
      if (r.label != j) continue;
      for (int v = r.lo; v <= r.hi; ++v) {
        if (hist_[v] == 0) continue;
        const double d = static_cast<double>(v) - mean;
        sq += static_cast<double>(hist_[v]) * d * d;
      }
    }
    const double sigma =
        std::max(params_.sigma_floor,
                 std::sqrt(sq / static_cast<double>(counts[j])));
    data += static_cast<double>(counts[j]) * std::log(sigma) +
            sq / (2.0 * sigma * sigma);
  }

  // Clique term: same-label pairs via rectangle sums over run pairs.
  std::int64_t same = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i; j < runs.size(); ++j) {
      if (runs[i].label != runs[j].label) continue;
      same += pairs_within(runs[i].lo, runs[i].hi, runs[j].lo, runs[j].hi);
    }
  }
  const double smoothness = static_cast<double>(total_pairs_ - 2 * same);
  return data + (params_.b / params_.temperature) * smoothness;
}

double EnergyEvaluator::value(std::span<const double> mu) const {
  for (double m : mu) {
    if (!(m >= 0.0 && m <= 255.0)) return kInf;
  }
  std::uint8_t lut[256];
  detail::nearest_mean_lut(mu, lut);

  std::vector<IntensityRun> runs;
  runs.reserve(mu.size() + 2);
  int lo = 0;
  for (int v = 1; v <= 256; ++v) {
    if (v == 256 || lut[v] != lut[lo]) {
      runs.push_back({lo, v - 1, lut[lo] - 1});
      lo = v;
    }
  }
  return eval_runs(runs, static_cast<int>(mu.size()));
}

double EnergyEvaluator::threshold_value(int t) const {
  if (t < 0 || t > 255)
    throw std::invalid_argument("threshold_value: t outside [0,255]");
  if (t == 255) {
    const IntensityRun all{0, 255, 0};
    return eval_runs(std::span<const IntensityRun>(&all, 1), 2);
  }
  const IntensityRun runs[2] = {{0, t, 0}, {t + 1, 255, 1}};
  return eval_runs(runs, 2);
}

double energy(const GrayImage& image, std::span<const double> mu,
              const EnergyParams& params) {
  return EnergyEvaluator(image, params).value(mu);
}

ThresholdScan threshold_oracle(const GrayImage& image,
                               const EnergyParams& params) {
  const EnergyEvaluator ev(image, params);
  ThresholdScan best{kInf, 0};
  for (int t = 0; t < 256; ++t) {
    const double e = ev.threshold_value(t);
    if (e < best.best_energy) {
      best.best_energy = e;
      best.best_threshold = t;
    }
  }
  return best;
}

}  // namespace hmrfcs
