#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hmrfcs {

struct SynthOptions {
  int count = 10;
  int size = 64;          // images are size x size
  double bg_mean = 80.0;
  double fg_mean = 170.0;
  double noise_sigma = 20.0;
  std::uint64_t seed = 1;
};

// Writes <stem>.pgm / <stem>.gt.pgm pairs into out_dir (created if absent)
// and returns the stems.  Each image is one random foreground shape
// (rectangle or disc) at fg_mean over bg_mean, plus i.i.d. Gaussian noise
// clamped to [0,255].  The GT is the noiseless mask (0 background,
// 255 foreground).  Every image derives its own RNG stream from the stem,
// so a fixed seed reproduces the dataset byte-for-byte.
std::vector<std::string> synth_dataset(const std::filesystem::path& out_dir,
                                       const SynthOptions& options);

}  // namespace hmrfcs
