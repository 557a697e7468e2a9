#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hmrfcs/image.hpp"

namespace hmrfcs {

// Row-major binary mask: 0 = background, 1 = foreground.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
};

struct MEReport {
  double me = 0.0;
  std::size_t matched_bg = 0;
  std::size_t matched_fg = 0;
  std::size_t total = 0;
  bool polarity_flipped = false;
};

// K=2 only: the class with the lower mean intensity becomes background.
// Ties (and degenerate NaN means) keep class 1 as background.
BinaryMask binarize_labels(const LabelField& labels,
                           const ClassStatistics& stats);

// ME = 1 - (|B_O ∩ B_T| + |F_O ∩ F_T|) / total.  With try_both_polarities
// the inverted segmentation is scored too and the smaller ME wins;
// polarity_flipped records which one was reported.
MEReport misclassification_error(const BinaryMask& gt, const BinaryMask& seg,
                                 bool try_both_polarities = false);

// GT ingestion convention: pixel 0 = background, anything else = foreground.
BinaryMask mask_from_image(const GrayImage& img);

}  // namespace hmrfcs
