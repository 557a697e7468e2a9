#include "hmrfcs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hmrfcs/image.hpp"
#include "hmrfcs/rng.hpp"

namespace hmrfcs {

namespace {

void check_options(const SynthOptions& opt) {
  if (opt.count < 0) {
    throw std::invalid_argument("synth_dataset: count must be >= 0");
  }
  if (opt.size < 8) {
    throw std::invalid_argument("synth_dataset: size must be >= 8");
  }
  const bool means_ok = opt.bg_mean >= 0.0 && opt.bg_mean <= 255.0 &&
                        opt.fg_mean >= 0.0 && opt.fg_mean <= 255.0;
  if (!means_ok) {
    throw std::invalid_argument("synth_dataset: means must lie in [0,255]");
  }
  if (!(opt.noise_sigma >= 0.0)) {
    throw std::invalid_argument("synth_dataset: noise_sigma must be >= 0");
  }
}

// Fills mask (0/1) with one random shape.  Draw order: shape kind, then its
// geometry parameters, each via next_below so the stream is platform-stable.
void draw_shape(RandomSource& rng, int size, std::vector<std::uint8_t>& mask) {
  std::fill(mask.begin(), mask.end(), std::uint8_t{0});
  const std::uint64_t kind = rng.next_below(2);
  if (kind == 0) {
    // Axis-aligned rectangle, sides in [size/4, size/2], fully inside.
    const int w = size / 4 + static_cast<int>(rng.next_below(
                                 static_cast<std::uint64_t>(size / 4 + 1)));
    const int h = size / 4 + static_cast<int>(rng.next_below(
                                 static_cast<std::uint64_t>(size / 4 + 1)));
    const int x0 = static_cast<int>(
        rng.next_below(static_cast<std::uint64_t>(size - w + 1)));
    const int y0 = static_cast<int>(
        rng.next_below(static_cast<std::uint64_t>(size - h + 1)));
    for (int y = y0; y < y0 + h; ++y) {
      for (int x = x0; x < x0 + w; ++x) {
        mask[static_cast<std::size_t>(y) * size + x] = 1;
      }
    }
  } else {
    // Disc with radius in [size/6, size/3], fully inside.
    const int r = size / 6 + static_cast<int>(rng.next_below(
                                 static_cast<std::uint64_t>(size / 6 + 1)));
    const int cx = r + static_cast<int>(rng.next_below(
                           static_cast<std::uint64_t>(size - 2 * r)));
    const int cy = r + static_cast<int>(rng.next_below(
                           static_cast<std::uint64_t>(size - 2 * r)));
    const long rr = static_cast<long>(r) * r;
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const long dx = x - cx;
        const long dy = y - cy;
        if (dx * dx + dy * dy <= rr) {
          mask[static_cast<std::size_t>(y) * size + x] = 1;
        }
      }
    }
  }
}

std::uint8_t noisy_pixel(double mean, double sigma, RandomSource& rng) {
  double v = mean;
  if (sigma > 0.0) {
    v += sigma * rng.normal();
  }
  const long q = std::lround(v);
  return static_cast<std::uint8_t>(std::clamp(q, 0L, 255L));
}

}  // namespace

std::vector<std::string> synth_dataset(const std::filesystem::path& out_dir,
                                       const SynthOptions& options) {
  check_options(options);
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> stems;
  stems.reserve(static_cast<std::size_t>(options.count));
  const int size = options.size;
  std::vector<std::uint8_t> shape(static_cast<std::size_t>(size) * size);

  for (int i = 0; i < options.count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "synth_%03d", i);
    const std::string stem = name;

    RandomSource rng(mix_seed(options.seed, fnv1a64(stem.data(), stem.size())));
    draw_shape(rng, size, shape);

    GrayImage img;
    img.width = size;
    img.height = size;
    img.pixels.resize(shape.size());
    GrayImage gt = img;
    for (std::size_t p = 0; p < shape.size(); ++p) {
      const double mean = shape[p] ? options.fg_mean : options.bg_mean;
      img.pixels[p] = noisy_pixel(mean, options.noise_sigma, rng);
      gt.pixels[p] = shape[p] ? 255 : 0;
    }

    save_pgm(img, out_dir / (stem + ".pgm"));
    save_pgm(gt, out_dir / (stem + ".gt.pgm"));
    stems.push_back(stem);
  }
  return stems;
}

}  // namespace hmrfcs
