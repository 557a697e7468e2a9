#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hmrfcs {

// Default lower bound on per-class standard deviations. A zero-variance
// class would make the energy's ln(sigma) and 1/sigma^2 terms singular.
inline constexpr double kDefaultSigmaFloor = 1e-4;

// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::size_t size() const { return pixels.size(); }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

// Per-pixel class assignment in {1..k}, row-major, dimensions matching the
// source image.
struct LabelField {
  int width = 0;
  int height = 0;
  int k = 0;
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  std::uint8_t at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
};

// Per-class empirical statistics. Empty classes (counts[j] == 0) carry NaN
// sentinels in means/stds; consumers decide how to treat them.
struct ClassStatistics {
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<std::int64_t> counts;
};

// Reads a P5 (binary) or P2 (ASCII) PGM with maxval <= 255. '#' comments in
// the header are tolerated. Throws std::runtime_error on I/O or format
// errors, including 16-bit files.
GrayImage load_pgm(const std::filesystem::path& path);

// Writes a P5 PGM with maxval 255. Round trips through load_pgm bit-exactly.
void save_pgm(const GrayImage& image, const std::filesystem::path& path);

// Assigns every pixel to the class with the nearest mean; ties go to the
// smallest class index. mu must have k >= 2 finite components.
LabelField classify_nearest_mean(const GrayImage& image,
                                 std::span<const double> mu);

// Empirical per-class mean, population standard deviation (divisor |S_j|)
// floored at sigma_floor, and site counts.
ClassStatistics class_statistics(const GrayImage& image,
                                 const LabelField& labels,
                                 double sigma_floor = kDefaultSigmaFloor);

// Renders labels to intensities: class j -> round((j-1)*255/(k-1)),
// round-half-up. K=2 yields {0, 255}.
GrayImage labels_to_image(const LabelField& labels);

namespace detail {
// Nearest-mean decision per intensity value; lut[v] is the 1-based class of
// intensity v. classify_nearest_mean and the energy evaluator share this so
// both paths classify identically, bit for bit.
void nearest_mean_lut(std::span<const double> mu, std::uint8_t lut[256]);
}  // namespace detail

}  // namespace hmrfcs
