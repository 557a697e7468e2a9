#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hmrfcs/image.hpp"

namespace hmrfcs {

// Second-order clique system over the pixel grid.
enum class Neighborhood { FourConnected, EightConnected };

struct EnergyParams {
  double b = 1.0;            // clique weight B, must be > 0
  double temperature = 2.0;  // control parameter T, must be > 0
  Neighborhood neighborhood = Neighborhood::EightConnected;
  double sigma_floor = kDefaultSigmaFloor;
};

// Potts clique sum: over each unordered neighboring pair {s,t}, counted
// once, adds 1 - 2*delta(x_s, x_t). Not scaled by B/T.
double smoothness_term(const LabelField& labels, Neighborhood neighborhood);

// Evaluates the segmentation energy of candidate mean vectors against one
// image. The labeling induced by a candidate depends on pixel intensities
// only through the 256-value gray space, so the evaluator precomputes the
// intensity histogram and a prefix-summed neighbor-pair count matrix once
// and then scores each candidate in O(256*K) instead of O(M).
//
// value() returns exactly the energy of the labeling classify_nearest_mean
// would induce: the classification lookup is shared code.
class EnergyEvaluator {
 public:
  EnergyEvaluator(const GrayImage& image, const EnergyParams& params);

  // Energy of a candidate mu. +infinity whenever any component falls
  // outside [0, 255] (non-finite components included).
  double value(std::span<const double> mu) const;

  // Energy of the two-class labeling x_s = 1 iff y_s <= t.
  double threshold_value(int t) const;

  std::int64_t pair_count() const { return total_pairs_; }

 private:
  struct IntensityRun {
    int lo;
    int hi;
    int label;  // 0-based
  };

  double eval_runs(std::span<const IntensityRun> runs, int k) const;
  std::int64_t pairs_within(int lo1, int hi1, int lo2, int hi2) const;

  EnergyParams params_;
  std::int64_t hist_[256] = {};
  std::vector<std::int64_t> pair_prefix_;  // (257)x(257), row-major
  std::int64_t total_pairs_ = 0;
};

// One-shot energy evaluation: data term from the empirical class
// statistics of the induced labeling, plus (B/T) times the clique sum;
// +infinity outside [0,255]^K.
double energy(const GrayImage& image, std::span<const double> mu,
              const EnergyParams& params);

struct ThresholdScan {
  double best_energy;
  int best_threshold;  // smallest minimizing threshold
};

// Exhaustive scan over the 256 two-class threshold labelings
// (x_s = 1 iff y_s <= t). For K = 2 every labeling reachable through
// classify_nearest_mean is such a threshold labeling, so the returned
// minimum lower-bounds the energy of any K=2 candidate.
ThresholdScan threshold_oracle(const GrayImage& image,
                               const EnergyParams& params);

}  // namespace hmrfcs
