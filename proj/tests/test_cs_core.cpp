#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hmrfcs/cs_core.hpp"

using hmrfcs::CommonConfig;
using hmrfcs::Nest;
using hmrfcs::Population;
using hmrfcs::RandomSource;

namespace {

// Simple smooth objective with minimum at (100, ..., 100).
double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += (v - 100.0) * (v - 100.0);
  return s;
}

Population hand_population(std::vector<std::vector<double>> positions) {
  Population pop;
  pop.k = static_cast<int>(positions[0].size());
  for (auto& p : positions) {
    Nest nest;
    nest.fitness = sphere(p);
    nest.position = std::move(p);
    pop.nests.push_back(std::move(nest));
  }
  pop.best = pop.nests[0];
  for (const auto& nest : pop.nests) {
    if (nest.fitness < pop.best.fitness) pop.best = nest;
  }
  return pop;
}

}  // namespace

TEST_CASE("validate_common_config rejects out-of-range values") {
  CommonConfig ok;
  CHECK_NOTHROW(hmrfcs::validate_common_config(ok));

  CommonConfig bad = ok;
  bad.n = 1;
  CHECK_THROWS_AS(hmrfcs::validate_common_config(bad), std::invalid_argument);
  bad = ok;
  bad.ni = 0;
  CHECK_THROWS_AS(hmrfcs::validate_common_config(bad), std::invalid_argument);
  bad = ok;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(hmrfcs::validate_common_config(bad), std::invalid_argument);
  bad = ok;
  bad.pa = 1.5;
  CHECK_THROWS_AS(hmrfcs::validate_common_config(bad), std::invalid_argument);
  bad = ok;
  bad.beta = 1.0;  // open at the low end
  CHECK_THROWS_AS(hmrfcs::validate_common_config(bad), std::invalid_argument);
  bad = ok;
  bad.beta = 2.0;  // closed at the high end
  CHECK_NOTHROW(hmrfcs::validate_common_config(bad));
}

TEST_CASE("mantegna_sigma_u at beta = 1.5 matches the Gamma formula") {
  // frozen from a high-precision evaluation of
  // [G(1+b) sin(pi b/2) / (G((1+b)/2) b 2^((b-1)/2))]^(1/b)
  CHECK(hmrfcs::mantegna_sigma_u(1.5) ==
        doctest::Approx(0.696574502557696792721522).epsilon(1e-14));
  CHECK_THROWS_AS(hmrfcs::mantegna_sigma_u(1.0), std::invalid_argument);
  CHECK_THROWS_AS(hmrfcs::mantegna_sigma_u(2.1), std::invalid_argument);
}

TEST_CASE("levy_step replays as u/|v|^(1/beta) with the documented order") {
  const double beta = 1.5;
  RandomSource rng(8);
  const auto step = hmrfcs::levy_step(3, beta, rng);

  RandomSource replay(8);
  const double sigma_u = hmrfcs::mantegna_sigma_u(beta);
  for (int j = 0; j < 3; ++j) {
    const double u = sigma_u * replay.normal();
    const double v = replay.normal();
    CHECK(step[j] == u / std::pow(std::abs(v), 1.0 / beta));
  }
}

TEST_CASE("init_population draws nest-major and tracks the best nest") {
  CommonConfig cfg;
  cfg.n = 6;
  RandomSource rng(21);
  const Population pop = hmrfcs::init_population(4, cfg, sphere, rng);

  REQUIRE(pop.nests.size() == 6);
  CHECK(pop.t == 0);
  CHECK(pop.k == 4);

  RandomSource replay(21);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double expect = 255.0 * replay.uniform01();
      CHECK(pop.nests[i].position[j] == expect);
      CHECK(expect > 0.0);
      CHECK(expect < 255.0);
    }
    CHECK(pop.nests[i].fitness == sphere(pop.nests[i].position));
    if (pop.nests[i].fitness < best) {
      best = pop.nests[i].fitness;
      best_i = i;
    }
  }
  CHECK(pop.best.fitness == best);
  CHECK(pop.best.position == pop.nests[best_i].position);
}

TEST_CASE("init_population tie on fitness keeps the smallest index") {
  CommonConfig cfg;
  cfg.n = 5;
  RandomSource rng(3);
  auto constant = [](std::span<const double>) { return 1.0; };
  const Population pop = hmrfcs::init_population(2, cfg, constant, rng);
  CHECK(pop.best.position == pop.nests[0].position);
}

TEST_CASE("init_population validates k and config") {
  CommonConfig cfg;
  RandomSource rng(1);
  CHECK_THROWS_AS(hmrfcs::init_population(1, cfg, sphere, rng),
                  std::invalid_argument);
  cfg.n = 0;
  CHECK_THROWS_AS(hmrfcs::init_population(2, cfg, sphere, rng),
                  std::invalid_argument);
}

TEST_CASE("generate_cuckoos follows the Levy update rule exactly") {
  Population pop = hand_population({{10.0, 240.0}, {90.0, 110.0}});
  const double alpha = 0.7;
  const double beta = 1.5;

  RandomSource rng(55);
  const auto cuckoos = hmrfcs::generate_cuckoos(pop, alpha, beta, rng, sphere);
  REQUIRE(cuckoos.size() == 2);

  RandomSource replay(55);
  const double sigma_u = hmrfcs::mantegna_sigma_u(beta);
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> step(2);
    for (int j = 0; j < 2; ++j) {
      const double u = sigma_u * replay.normal();
      const double v = replay.normal();
      step[j] = u / std::pow(std::abs(v), 1.0 / beta);
    }
    for (int j = 0; j < 2; ++j) {
      const double g = replay.normal();
      const double expect =
          pop.nests[i].position[j] +
          alpha * step[j] *
              (pop.nests[i].position[j] - pop.best.position[j]) * g;
      CHECK(cuckoos[i].position[j] == expect);
    }
    CHECK(cuckoos[i].fitness == sphere(cuckoos[i].position));
  }

  // the best nest perturbs around itself: mu - best = 0 in every component
  const std::size_t best_index = 1;  // (90,110) is closer to (100,100)
  CHECK(cuckoos[best_index].position == pop.nests[best_index].position);
}

TEST_CASE("greedy_update replaces on ties and keeps strict winners") {
  Population pop = hand_population({{10.0, 10.0}, {90.0, 110.0}});
  std::vector<Nest> cuckoos(2);
  cuckoos[0].position = {200.0, 200.0};
  cuckoos[0].fitness = pop.nests[0].fitness;  // tie: must replace
  cuckoos[1].position = {0.0, 0.0};
  cuckoos[1].fitness = pop.nests[1].fitness + 1.0;  // worse: must keep
  const auto kept = pop.nests[1].position;

  hmrfcs::greedy_update(pop, cuckoos);
  CHECK(pop.nests[0].position == cuckoos[0].position);
  CHECK(pop.nests[1].position == kept);

  cuckoos.pop_back();
  CHECK_THROWS_AS(hmrfcs::greedy_update(pop, cuckoos), std::invalid_argument);
}

TEST_CASE("rebuild_abandoned with pa = 0 keeps every position") {
  Population pop =
      hand_population({{10.0, 240.0}, {90.0, 110.0}, {50.0, 50.0}});
  RandomSource rng(14);
  const auto rebuilt = hmrfcs::rebuild_abandoned(pop, 0.0, false, rng, sphere);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rebuilt[i].position == pop.nests[i].position);
  }

  // the draws are consumed even though the gate never opens:
  // per nest, a permutation of 3 (2 bounded draws) + 2 (rand, rand) pairs
  RandomSource replay(14);
  for (int nest = 0; nest < 3; ++nest) {
    replay.permutation(3);
    for (int j = 0; j < 2; ++j) {
      replay.uniform01();
      replay.uniform01();
    }
  }
  CHECK(rng.next_u64() == replay.next_u64());
}

TEST_CASE("rebuild_abandoned with pa = 1 walks every component") {
  Population pop = hand_population({{10.0, 240.0}, {90.0, 110.0}});
  RandomSource rng(14);
  const auto rebuilt = hmrfcs::rebuild_abandoned(pop, 1.0, false, rng, sphere);

  RandomSource replay(14);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto perm = replay.permutation(2);
    const auto& a = pop.nests[perm[0]].position;
    const auto& b = pop.nests[perm[1]].position;
    for (int j = 0; j < 2; ++j) {
      const double w = replay.uniform01();
      replay.uniform01();  // h: gate always open at pa = 1
      const double expect = pop.nests[i].position[j] + w * (a[j] - b[j]);
      CHECK(rebuilt[i].position[j] == expect);
    }
  }
}

TEST_CASE("rebuild_abandoned scalar mode shares one pair across components") {
  Population pop = hand_population({{10.0, 240.0, 70.0}, {90.0, 110.0, 5.0}});
  RandomSource rng(31);
  const auto rebuilt = hmrfcs::rebuild_abandoned(pop, 1.0, true, rng, sphere);

  RandomSource replay(31);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto perm = replay.permutation(2);
    const auto& a = pop.nests[perm[0]].position;
    const auto& b = pop.nests[perm[1]].position;
    const double w = replay.uniform01();
    replay.uniform01();
    for (int j = 0; j < 3; ++j) {
      CHECK(rebuilt[i].position[j] ==
            pop.nests[i].position[j] + w * (a[j] - b[j]));
    }
  }
}

TEST_CASE("elitist_select keeps the best-so-far and advances time") {
  Population pop = hand_population({{90.0, 110.0}, {10.0, 240.0}});
  const Nest frozen_best = pop.best;
  const auto t0 = pop.t;

  // all rebuilt candidates are worse than both nests
  std::vector<Nest> rebuilt(2);
  rebuilt[0].position = {0.0, 0.0};
  rebuilt[0].fitness = 1e12;
  rebuilt[1].position = {0.0, 0.0};
  rebuilt[1].fitness = 1e12;
  hmrfcs::elitist_select(pop, rebuilt);
  CHECK(pop.best.position == frozen_best.position);
  CHECK(pop.best.fitness == frozen_best.fitness);
  CHECK(pop.t == t0 + 1);

  // a strictly better candidate becomes the new best-so-far
  rebuilt[0].position = {100.0, 100.0};
  rebuilt[0].fitness = 0.0;
  hmrfcs::elitist_select(pop, rebuilt);
  CHECK(pop.best.fitness == 0.0);
  CHECK(pop.best.position == std::vector<double>{100.0, 100.0});
  CHECK(pop.t == t0 + 2);
}

TEST_CASE("elitist_select keeps an external best-so-far not in the nests") {
  Population pop = hand_population({{10.0, 240.0}, {0.0, 0.0}});
  pop.best.position = {100.0, 100.0};
  pop.best.fitness = 0.0;

  std::vector<Nest> rebuilt = pop.nests;
  hmrfcs::elitist_select(pop, rebuilt);
  CHECK(pop.best.fitness == 0.0);
}

TEST_CASE("elitist_select resolves ties toward the rebuilt candidate") {
  Population pop = hand_population({{90.0, 110.0}});
  std::vector<Nest> rebuilt(1);
  rebuilt[0].position = {110.0, 90.0};
  rebuilt[0].fitness = pop.nests[0].fitness;
  hmrfcs::elitist_select(pop, rebuilt);
  CHECK(pop.nests[0].position == std::vector<double>{110.0, 90.0});
}
