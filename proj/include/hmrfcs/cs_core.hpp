#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hmrfcs/rng.hpp"

namespace hmrfcs {

using Objective = std::function<double(std::span<const double>)>;

// One candidate mean vector with its cached energy.
struct Nest {
  std::vector<double> position;
  double fitness = 0.0;
};

struct Population {
  std::vector<Nest> nests;
  Nest best;         // best-so-far across all generations
  std::int64_t t = 0;
  int k = 0;
};

// Parameters shared by every variant. alpha scales the Levy perturbation,
// pa is the abandonment fraction, beta the Levy index for Mantegna's
// sampler. scalar_walk_draws switches the biased random walk to one
// (rand, rand) pair per nest instead of per component.
struct CommonConfig {
  int n = 20;
  int ni = 100;
  double alpha = 1.0;
  double pa = 0.25;
  double beta = 1.5;
  std::uint64_t seed = 1;
  bool scalar_walk_draws = false;
};

// Throws std::invalid_argument when a CommonConfig invariant is violated
// (n >= 2, ni >= 1, alpha > 0, pa in [0,1], beta in (1,2]).
void validate_common_config(const CommonConfig& config);

// Mantegna scale sigma_u for the Levy index beta:
//   [Gamma(1+b) sin(pi b/2) / (Gamma((1+b)/2) b 2^((b-1)/2))]^(1/b)
double mantegna_sigma_u(double beta);

// One Levy-flight step vector via Mantegna's algorithm: component
// u/|v|^(1/beta) with u ~ N(0, sigma_u^2), v ~ N(0,1). Draw order per
// component: u, then v.
std::vector<double> levy_step(int k, double beta, RandomSource& rng);

// Uniform positions in [0,255]^k, fitness evaluated, best set to the
// minimum (smallest index on ties), t = 0. Draw order: nest-major,
// component-minor.
Population init_population(int k, const CommonConfig& config,
                           const Objective& objective, RandomSource& rng);

// New cuckoos c^i = mu^i + alpha * step (x) (mu^i - best) (x) randn(1,K).
// Draw order per nest i ascending: the K step components, then the K
// normal factors. Out-of-range positions get the +inf sentinel from the
// objective.
std::vector<Nest> generate_cuckoos(const Population& pop, double alpha,
                                   double beta, RandomSource& rng,
                                   const Objective& objective);

// Nest i is replaced by cuckoo i iff its fitness is <= (ties replace).
void greedy_update(Population& pop, const std::vector<Nest>& cuckoos);

// Biased random walks v^i = mu^i + rand (x) (mu^r1 - mu^r2) (x) H(pa - rand)
// with r1 != r2 taken as the first two entries of a fresh random
// permutation per nest. Draw order per nest i ascending: the permutation,
// then one (rand, rand) pair per component (or a single pair in scalar
// mode). H(z) = 1 for z > 0, else 0.
std::vector<Nest> rebuild_abandoned(const Population& pop, double pa,
                                    bool scalar_draws, RandomSource& rng,
                                    const Objective& objective);

// Keeps the better of nest/rebuilt per slot (ties take the rebuilt), then
// refreshes the best-so-far (previous best kept unless strictly improved)
// and advances t.
void elitist_select(Population& pop, const std::vector<Nest>& rebuilt);

}  // namespace hmrfcs
