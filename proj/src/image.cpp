#include "hmrfcs/image.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

namespace hmrfcs {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path,
                       const std::string& what) {
  throw std::runtime_error("pgm: " + path.string() + ": " + what);
}

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) continue;
    tok.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') {
      tok.push_back(static_cast<char>(c));
    }
    if (c == '#') in.unget();
    break;
  }
  return tok;
}

long parse_header_int(std::istream& in, const std::filesystem::path& path,
                      const char* field) {
  const std::string tok = next_token(in);
  if (tok.empty()) fail(path, std::string("missing ") + field);
  std::size_t pos = 0;
  long value = 0;
  try {
    value = std::stol(tok, &pos);
  } catch (const std::exception&) {
    fail(path, std::string("bad ") + field + " '" + tok + "'");
  }
  if (pos != tok.size()) fail(path, std::string("bad ") + field + " '" + tok + "'");
  return value;
}

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");

  const std::string magic = next_token(in);
  if (magic != "P5" && magic != "P2") fail(path, "not a P2/P5 PGM");

  const long width = parse_header_int(in, path, "width");
  const long height = parse_header_int(in, path, "height");
  const long maxval = parse_header_int(in, path, "maxval");
  if (width <= 0 || height <= 0) fail(path, "non-positive dimensions");
  if (maxval < 1) fail(path, "invalid maxval");
  if (maxval > 255) fail(path, "maxval > 255 (16-bit PGM unsupported)");

  GrayImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  const std::size_t count = static_cast<std::size_t>(width) * height;
  img.pixels.resize(count);

  if (magic == "P5") {
    // exactly one whitespace byte separates maxval from raster data, and
    // next_token has already consumed it
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
      fail(path, "truncated pixel data");
    if (maxval < 255) {
      for (std::uint8_t v : img.pixels) {
        if (v > maxval) fail(path, "pixel value out of range");
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long v = parse_header_int(in, path, "pixel");
      if (v < 0 || v > maxval) fail(path, "pixel value out of range");
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("pgm: cannot write " + path.string());
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  out.flush();
  if (!out) throw std::runtime_error("pgm: write failed " + path.string());
}

namespace detail {

void nearest_mean_lut(std::span<const double> mu, std::uint8_t lut[256]) {
  const int k = static_cast<int>(mu.size());
  for (int v = 0; v < 256; ++v) {
    int best = 0;
    double best_d = std::abs(static_cast<double>(v) - mu[0]);
    for (int j = 1; j < k; ++j) {
      const double d = std::abs(static_cast<double>(v) - mu[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    lut[v] = static_cast<std::uint8_t>(best + 1);
  }
}

}  // namespace detail

LabelField classify_nearest_mean(const GrayImage& image,
                                 std::span<const double> mu) {
  const int k = static_cast<int>(mu.size());
  if (k < 2) throw std::invalid_argument("classify_nearest_mean: need k >= 2");
  for (double m : mu) {
    if (!std::isfinite(m))
      throw std::invalid_argument("classify_nearest_mean: non-finite mean");
  }

  // All pixels share the 256-entry intensity space; classify once per value.
  std::uint8_t lut[256];
  detail::nearest_mean_lut(mu, lut);

  LabelField out;
  out.width = image.width;
  out.height = image.height;
  out.k = k;
  out.labels.resize(image.size());
  for (std::size_t s = 0; s < image.size(); ++s)
    out.labels[s] = lut[image.pixels[s]];
  return out;
}

ClassStatistics class_statistics(const GrayImage& image,
                                 const LabelField& labels,
                                 double sigma_floor) {
  if (image.width != labels.width || image.height != labels.height)
    throw std::invalid_argument("class_statistics: dimension mismatch");

  const int k = labels.k;
  ClassStatistics st;
  st.counts.assign(k, 0);
  st.means.assign(k, 0.0);
  st.stds.assign(k, 0.0);

  std::vector<double> sums(k, 0.0);
  for (std::size_t s = 0; s < image.size(); ++s) {
    const int j = labels.labels[s] - 1;
    ++st.counts[j];
    sums[j] += image.pixels[s];
  }
  for (int j = 0; j < k; ++j) {
    if (st.counts[j] > 0) st.means[j] = sums[j] / st.counts[j];
  }

  std::vector<double> sq(k, 0.0);
  for (std::size_t s = 0; s < image.size(); ++s) {
    const int j = labels.labels[s] - 1;
    const double d = image.pixels[s] - st.means[j];
    sq[j] += d * d;
  }
  for (int j = 0; j < k; ++j) {
    if (st.counts[j] > 0) {
      st.stds[j] = std::max(sigma_floor, std::sqrt(sq[j] / st.counts[j]));
    } else {
      st.means[j] = std::numeric_limits<double>::quiet_NaN();
      st.stds[j] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return st;
}

GrayImage labels_to_image(const LabelField& labels) {
  GrayImage out;
  out.width = labels.width;
  out.height = labels.height;
  out.pixels.resize(labels.size());
  const double scale = 255.0 / (labels.k - 1);
  std::uint8_t lut[256];
  for (int j = 0; j < labels.k; ++j) {
    // lround rounds half away from zero, i.e. half-up for non-negatives
    lut[j + 1] = static_cast<std::uint8_t>(std::lround(j * scale));
  }
  for (std::size_t s = 0; s < labels.size(); ++s)
    out.pixels[s] = lut[labels.labels[s]];
  return out;
}

}  // namespace hmrfcs
