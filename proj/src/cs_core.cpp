#include "hmrfcs/cs_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hmrfcs {

void validate_common_config(const CommonConfig& config) {
  if (config.n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (config.ni < 1) throw std::invalid_argument("config: ni must be >= 1");
  if (!(config.alpha > 0.0))
    throw std::invalid_argument("config: alpha must be > 0");
  if (!(config.pa >= 0.0 && config.pa <= 1.0))
    throw std::invalid_argument("config: pa must be in [0,1]");
  if (!(config.beta > 1.0 && config.beta <= 2.0))
    throw std::invalid_argument("config: beta must be in (1,2]");
}

double mantegna_sigma_u(double beta) {
  if (!(beta > 1.0 && beta <= 2.0))
    throw std::invalid_argument("mantegna_sigma_u: beta must be in (1,2]");
  const double num =
      std::tgamma(1.0 + beta) * std::sin(std::numbers::pi * beta / 2.0);
  const double den = std::tgamma((1.0 + beta) / 2.0) * beta *
                     std::pow(2.0, (beta - 1.0) / 2.0);
  return std::pow(num / den, 1.0 / beta);
}

std::vector<double> levy_step(int k, double beta, RandomSource& rng) {
  const double sigma_u = mantegna_sigma_u(beta);
  std::vector<double> step(k);
  for (int j = 0; j < k; ++j) {
    const double u = sigma_u * rng.normal();
    const double v = rng.normal();
    step[j] = u / std::pow(std::abs(v), 1.0 / beta);
  }
  return step;
}

Population init_population(int k, const CommonConfig& config,
                           const Objective& objective, RandomSource& rng) {
  validate_common_config(config);
  if (k < 2) throw std::invalid_argument("init_population: need k >= 2");

  Population pop;
  pop.k = k;
  pop.t = 0;
  pop.nests.resize(config.n);
  for (auto& nest : pop.nests) {
    nest.position.resize(k);
    for (int j = 0; j < k; ++j) nest.position[j] = 255.0 * rng.uniform01();
    nest.fitness = objective(nest.position);
  }
  pop.best = pop.nests[0];
  for (int i = 1; i < config.n; ++i) {
    if (pop.nests[i].fitness < pop.best.fitness) pop.best = pop.nests[i];
  }
  return pop;
}

std::vector<Nest> generate_cuckoos(const Population& pop, double alpha,
                                   double beta, RandomSource& rng,
                                   const Objective& objective) {
  const int k = pop.k;
  std::vector<Nest> cuckoos(pop.nests.size());
  for (std::size_t i = 0; i < pop.nests.size(); ++i) {
    const auto& mu = pop.nests[i].position;
    const std::vector<double> step = levy_step(k, beta, rng);
    std::vector<double> pos(k);
    for (int j = 0; j < k; ++j) {
      const double g = rng.normal();
      pos[j] = mu[j] + alpha * step[j] * (mu[j] - pop.best.position[j]) * g;
    }
    cuckoos[i].fitness = objective(pos);
    cuckoos[i].position = std::move(pos);
  }
  return cuckoos;
}

void greedy_update(Population& pop, const std::vector<Nest>& cuckoos) {
  if (cuckoos.size() != pop.nests.size())
    throw std::invalid_argument("greedy_update: length mismatch");
  for (std::size_t i = 0; i < pop.nests.size(); ++i) {
    if (cuckoos[i].fitness <= pop.nests[i].fitness) pop.nests[i] = cuckoos[i];
  }
}

std::vector<Nest> rebuild_abandoned(const Population& pop, double pa,
                                    bool scalar_draws, RandomSource& rng,
                                    const Objective& objective) {
  const int k = pop.k;
  const std::size_t n = pop.nests.size();
  if (n < 2) throw std::invalid_argument("rebuild_abandoned: need n >= 2");

  std::vector<Nest> rebuilt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto perm = rng.permutation(static_cast<std::uint32_t>(n));
    const auto& a = pop.nests[perm[0]].position;
    const auto& b = pop.nests[perm[1]].position;
    const auto& mu = pop.nests[i].position;

    std::vector<double> pos(k);
    if (scalar_draws) {
      const double w = rng.uniform01();
      const double h = rng.uniform01();
      const double gate = (pa - h > 0.0) ? 1.0 : 0.0;
      for (int j = 0; j < k; ++j) pos[j] = mu[j] + w * (a[j] - b[j]) * gate;
    } else {
      for (int j = 0; j < k; ++j) {
        const double w = rng.uniform01();
        const double h = rng.uniform01();
        const double gate = (pa - h > 0.0) ? 1.0 : 0.0;
        pos[j] = mu[j] + w * (a[j] - b[j]) * gate;
      }
    }
    rebuilt[i].fitness = objective(pos);
    rebuilt[i].position = std::move(pos);
  }
  return rebuilt;
}

void elitist_select(Population& pop, const std::vector<Nest>& rebuilt) {
  if (rebuilt.size() != pop.nests.size())
    throw std::invalid_argument("elitist_select: length mismatch");
  for (std::size_t i = 0; i < pop.nests.size(); ++i) {
    if (rebuilt[i].fitness <= pop.nests[i].fitness) pop.nests[i] = rebuilt[i];
  }
  for (const auto& nest : pop.nests) {
    if (nest.fitness < pop.best.fitness) pop.best = nest;
  }
  ++pop.t;
}

}  // namespace hmrfcs
