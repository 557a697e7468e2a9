#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "hmrfcs/image.hpp"
#include "hmrfcs/rng.hpp"
#include "test_util.hpp"

using hmrfcs::GrayImage;
using hmrfcs::LabelField;
using hmrfcs::load_pgm;
using hmrfcs::save_pgm;
using testutil::make_image;
using testutil::make_labels;
using testutil::TempDir;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("P5 save/load round trip is bit exact") {
  TempDir tmp;
  hmrfcs::RandomSource rng(77);
  for (auto [w, h] : {std::pair{1, 1}, {3, 5}, {16, 9}, {64, 64}}) {
    const GrayImage img = testutil::random_image(w, h, rng);
    const auto path = tmp.path() / "img.pgm";
    save_pgm(img, path);
    const GrayImage back = load_pgm(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.pixels == img.pixels);
  }
}

TEST_CASE("save_pgm writes a canonical P5 header") {
  TempDir tmp;
  const auto path = tmp.path() / "hdr.pgm";
  save_pgm(make_image(3, 2, {0, 1, 2, 3, 4, 255}), path);
  const std::string bytes = read_bytes(path);
  const std::string expected_header = "P5\n3 2\n255\n";
  REQUIRE(bytes.size() == expected_header.size() + 6);
  CHECK(bytes.substr(0, expected_header.size()) == expected_header);
  CHECK(static_cast<unsigned char>(bytes.back()) == 255);
}

TEST_CASE("P2 parsing handles comments and arbitrary whitespace") {
  TempDir tmp;
  const auto path = tmp.path() / "ascii.pgm";
  write_text(path,
             "P2 # magic\n"
             "# a full comment line\n"
             "3 # width\n 2\n255\n"
             "0 10 20\n"
             "30   40\t250\n");
  const GrayImage img = load_pgm(path);
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.pixels == std::vector<std::uint8_t>{0, 10, 20, 30, 40, 250});
}

TEST_CASE("P2 with a reduced maxval rescales nothing but bounds values") {
  TempDir tmp;
  const auto path = tmp.path() / "small_maxval.pgm";
  write_text(path, "P2\n2 1\n100\n100 0\n");
  CHECK(load_pgm(path).pixels == std::vector<std::uint8_t>{100, 0});

  write_text(path, "P2\n2 1\n100\n101 0\n");
  CHECK_THROWS_AS(load_pgm(path), std::runtime_error);
}

TEST_CASE("P5 pixels above a reduced maxval are rejected") {
  TempDir tmp;
  const auto path = tmp.path() / "p5_maxval.pgm";
  std::string bytes = "P5\n2 1\n100\n";
  bytes.push_back(static_cast<char>(100));
  bytes.push_back(static_cast<char>(101));
  write_text(path, bytes);
  CHECK_THROWS_AS(load_pgm(path), std::runtime_error);
}

TEST_CASE("malformed PGM inputs are rejected") {
  TempDir tmp;
  const auto path = tmp.path() / "bad.pgm";

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_pgm(tmp.path() / "nope.pgm"), std::runtime_error);
  }
  SUBCASE("wrong magic") {
    write_text(path, "P6\n1 1\n255\n x");
    CHECK_THROWS_AS(load_pgm(path), std::runtime_error);
  }
  SUBCASE("16-bit maxval") {
    write_text(path, "P2\n1 1\n65535\n1000\n");
    CHECK_THROWS_AS(load_pgm(path), std::runtime_error);
  }
  SUBCASE("non-positive dimensions") {
    write_text(path, "P2\n0 1\n255\n");
    CHECK_THROWS_AS(load_pgm(path), std::runtime_error);
  }
  SUBCASE("truncated P5 raster") {
    write_text(path, std::string("P5\n2 2\n255\nab"));
    CHECK_THROWS_AS(load_pgm(path), std::runtime_error);
  }
  SUBCASE("non-numeric header") {
    write_text(path, "P2\nthree 1\n255\n1\n");
    CHECK_THROWS_AS(load_pgm(path), std::runtime_error);
  }
  SUBCASE("truncated P2 raster") {
    write_text(path, "P2\n2 2\n255\n1 2 3\n");
    CHECK_THROWS_AS(load_pgm(path), std::runtime_error);
  }
}

TEST_CASE("classify_nearest_mean picks the closest mean") {
  const GrayImage img = make_image(4, 1, {0, 60, 200, 255});
  const double mu[2] = {100.0, 50.0};
  const LabelField out = hmrfcs::classify_nearest_mean(img, mu);
  CHECK(out.k == 2);
  // 0 -> 50 (class 2), 60 -> 50 (class 2), 200 -> 100 (class 1), 255 -> 100
  CHECK(out.labels == std::vector<std::uint8_t>{2, 2, 1, 1});
}

TEST_CASE("classification ties go to the smallest class index") {
  const GrayImage img = make_image(1, 1, {50});
  const double mu[2] = {40.0, 60.0};
  CHECK(hmrfcs::classify_nearest_mean(img, mu).labels[0] == 1);

  const double mu_rev[2] = {60.0, 40.0};
  CHECK(hmrfcs::classify_nearest_mean(img, mu_rev).labels[0] == 1);

  const double mu_eq[3] = {50.0, 50.0, 50.0};
  CHECK(hmrfcs::classify_nearest_mean(img, mu_eq).labels[0] == 1);
}

TEST_CASE("classify_nearest_mean validates its mean vector") {
  const GrayImage img = make_image(1, 1, {0});
  const double one[1] = {5.0};
  CHECK_THROWS_AS(hmrfcs::classify_nearest_mean(img, one),
                  std::invalid_argument);
  const double bad[2] = {5.0, std::nan("")};
  CHECK_THROWS_AS(hmrfcs::classify_nearest_mean(img, bad),
                  std::invalid_argument);
}

TEST_CASE("class_statistics computes population moments per class") {
  const GrayImage img = make_image(4, 1, {0, 2, 255, 255});
  const LabelField labels = make_labels(4, 1, 2, {1, 1, 2, 2});
  const auto st = hmrfcs::class_statistics(img, labels);
  REQUIRE(st.counts == std::vector<std::int64_t>{2, 2});
  CHECK(st.means[0] == doctest::Approx(1.0));
  // population deviation: sqrt(((0-1)^2 + (2-1)^2)/2) = 1, not sqrt(2)
  CHECK(st.stds[0] == doctest::Approx(1.0));
  CHECK(st.means[1] == doctest::Approx(255.0));
  CHECK(st.stds[1] == doctest::Approx(hmrfcs::kDefaultSigmaFloor));
}

TEST_CASE("class_statistics marks empty classes with NaN") {
  const GrayImage img = make_image(2, 1, {10, 20});
  const LabelField lf = make_labels(2, 1, 3, {1, 1});
  const auto st = hmrfcs::class_statistics(img, lf);
  CHECK(st.counts == std::vector<std::int64_t>{2, 0, 0});
  CHECK(st.means[0] == doctest::Approx(15.0));
  CHECK(std::isnan(st.means[1]));
  CHECK(std::isnan(st.stds[2]));
}

TEST_CASE("class_statistics respects a custom sigma floor") {
  const GrayImage img = make_image(2, 1, {7, 7});
  const LabelField lf = make_labels(2, 1, 2, {1, 1});
  const auto st = hmrfcs::class_statistics(img, lf, 0.5);
  CHECK(st.stds[0] == doctest::Approx(0.5));
}

TEST_CASE("class_statistics rejects mismatched dimensions") {
  const GrayImage img = make_image(2, 1, {1, 2});
  const LabelField lf = make_labels(1, 2, 2, {1, 1});
  CHECK_THROWS_AS(hmrfcs::class_statistics(img, lf), std::invalid_argument);
}

TEST_CASE("labels_to_image spreads classes over [0,255]") {
  SUBCASE("two classes") {
    const auto img = hmrfcs::labels_to_image(make_labels(2, 1, 2, {1, 2}));
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 255});
  }
  SUBCASE("three classes round half up") {
    const auto img = hmrfcs::labels_to_image(make_labels(3, 1, 3, {1, 2, 3}));
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 128, 255});
  }
  SUBCASE("five classes") {
    const auto img =
        hmrfcs::labels_to_image(make_labels(5, 1, 5, {1, 2, 3, 4, 5}));
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 64, 128, 191, 255});
  }
}
