#include "hmrfcs/evaluation.hpp"

#include <cstddef>
#include <stdexcept>

namespace hmrfcs {

BinaryMask binarize_labels(const LabelField& labels,
                           const ClassStatistics& stats) {
  if (labels.k != 2 || stats.means.size() != 2) {
    throw std::invalid_argument("binarize_labels: requires exactly 2 classes");
  }
  // Class 1 is background unless class 2 has a strictly lower mean; NaN
  // comparisons are false, so degenerate stats fall back to class 1 = bg.
  const int bg_label = (stats.means[1] < stats.means[0]) ? 2 : 1;

  BinaryMask mask;
  mask.width = labels.width;
  mask.height = labels.height;
  mask.bits.resize(labels.labels.size());
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    mask.bits[i] = (labels.labels[i] == bg_label) ? 0 : 1;
  }
  return mask;
}

MEReport misclassification_error(const BinaryMask& gt, const BinaryMask& seg,
                                 bool try_both_polarities) {
  if (gt.width != seg.width || gt.height != seg.height ||
      gt.bits.size() != seg.bits.size()) {
    throw std::invalid_argument(
        "misclassification_error: mask dimensions differ");
  }
  if (gt.bits.empty()) {
    throw std::invalid_argument("misclassification_error: empty masks");
  }

  std::size_t bg_same = 0;  // gt bg, seg bg
  std::size_t fg_same = 0;  // gt fg, seg fg
  std::size_t bg_diff = 0;  // gt bg, seg fg  (matches after flipping seg)
  std::size_t fg_diff = 0;  // gt fg, seg bg
  for (std::size_t i = 0; i < gt.bits.size(); ++i) {
    const bool g = gt.bits[i] != 0;
    const bool s = seg.bits[i] != 0;
    if (!g && !s) {
      ++bg_same;
    } else if (g && s) {
      ++fg_same;
    } else if (!g) {
      ++bg_diff;
    } else {
      ++fg_diff;
    }
  }

  MEReport report;
  report.total = gt.bits.size();
  report.matched_bg = bg_same;
  report.matched_fg = fg_same;
  report.me = 1.0 - static_cast<double>(bg_same + fg_same) /
                        static_cast<double>(report.total);

  if (try_both_polarities) {
    const double flipped_me =
        1.0 - static_cast<double>(bg_diff + fg_diff) /
                  static_cast<double>(report.total);
    if (flipped_me < report.me) {
      report.me = flipped_me;
      report.matched_bg = bg_diff;
      report.matched_fg = fg_diff;
      report.polarity_flipped = true;
    }
  }
  return report;
}

BinaryMask mask_from_image(const GrayImage& img) {
  BinaryMask mask;
  mask.width = img.width;
  mask.height = img.height;
  mask.bits.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    mask.bits[i] = (img.pixels[i] != 0) ? 1 : 0;
  }
  return mask;
}

}  // namespace hmrfcs
