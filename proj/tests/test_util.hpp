#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

#include "hmrfcs/image.hpp"
#include "hmrfcs/rng.hpp"

namespace testutil {

// Fresh scratch directory per call, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hmrfcs_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline hmrfcs::GrayImage make_image(int w, int h,
                                    std::initializer_list<int> pixels) {
  hmrfcs::GrayImage img;
  img.width = w;
  img.height = h;
  for (int v : pixels) img.pixels.push_back(static_cast<std::uint8_t>(v));
  return img;
}

inline hmrfcs::GrayImage random_image(int w, int h, hmrfcs::RandomSource& rng) {
  hmrfcs::GrayImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<std::size_t>(w) * h);
  for (auto& p : img.pixels) {
    p = static_cast<std::uint8_t>(rng.next_below(256));
  }
  return img;
}

inline hmrfcs::LabelField make_labels(int w, int h, int k,
                                      std::initializer_list<int> labels) {
  hmrfcs::LabelField lf;
  lf.width = w;
  lf.height = h;
  lf.k = k;
  for (int v : labels) lf.labels.push_back(static_cast<std::uint8_t>(v));
  return lf;
}

}  // namespace testutil
