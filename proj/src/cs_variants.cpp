#include "hmrfcs/cs_variants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hmrfcs {

namespace {

constexpr double kGoldenRatio = 1.6180339887498948482;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double scale_factor(double omega) {
  return std::pow(10.0, 10.0 * std::tan(std::atan(0.1) * (2.0 * omega - 1.0)));
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Scs: return "scs";
    case Variant::Ics: return "ics";
    case Variant::Aacs: return "aacs";
    case Variant::Mcs: return "mcs";
    case Variant::Nmcs: return "nmcs";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  if (name == "scs") return Variant::Scs;
  if (name == "ics") return Variant::Ics;
  if (name == "aacs") return Variant::Aacs;
  if (name == "mcs") return Variant::Mcs;
  if (name == "nmcs") return Variant::Nmcs;
  throw std::invalid_argument("unknown variant '" + name +
                              "' (expected scs, ics, aacs, mcs or nmcs)");
}

int min_population(Variant v) {
  switch (v) {
    case Variant::Aacs: return 5;
    case Variant::Mcs: return 4;
    default: return 2;
  }
}

void validate_variant_config(const VariantConfig& config) {
  validate_common_config(config.common);
  if (config.common.n < min_population(config.variant))
    throw std::invalid_argument(std::string("config: ") +
                                variant_name(config.variant) + " needs n >= " +
                                std::to_string(min_population(config.variant)));
  auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in01(config.ics_pa_max) || !in01(config.ics_pa_min) ||
      config.ics_pa_min > config.ics_pa_max)
    throw std::invalid_argument("config: need 0 <= ics_pa_min <= ics_pa_max <= 1");
  if (!(config.ics_alpha_min > 0.0) ||
      config.ics_alpha_min > config.ics_alpha_max)
    throw std::invalid_argument("config: need 0 < ics_alpha_min <= ics_alpha_max");
  if (!in01(config.nmcs_pa0))
    throw std::invalid_argument("config: nmcs_pa0 must be in [0,1]");
  if (!(config.nmcs_alpha0 > 0.0))
    throw std::invalid_argument("config: nmcs_alpha0 must be > 0");
  if (!in01(config.aacs_reseed_prob))
    throw std::invalid_argument("config: aacs_reseed_prob must be in [0,1]");
}

VariantPreset default_preset(Variant v) {
  VariantPreset p;
  p.config.variant = v;
  switch (v) {
    case Variant::Scs:
      p.config.common.n = 20; p.config.common.ni = 100; p.temperature = 2.0;
      break;
    case Variant::Ics:
      p.config.common.n = 20; p.config.common.ni = 100; p.temperature = 2.0;
      break;
    case Variant::Aacs:
      p.config.common.n = 25; p.config.common.ni = 100; p.temperature = 2.0;
      break;
    case Variant::Mcs:
      p.config.common.n = 5; p.config.common.ni = 100; p.temperature = 3.0;
      break;
    case Variant::Nmcs:
      p.config.common.n = 5; p.config.common.ni = 50; p.temperature = 2.0;
      break;
  }
  return p;
}

double ics_pa(int t, int ni, double pa_max, double pa_min) {
  if (ni <= 0) throw std::invalid_argument("ics_pa: ni must be positive");
  return pa_max -
         (static_cast<double>(t) / static_cast<double>(ni)) * (pa_max - pa_min);
}

double ics_alpha(int t, int ni, double alpha_max, double alpha_min) {
  if (ni <= 0) throw std::invalid_argument("ics_alpha: ni must be positive");
  if (!(alpha_min > 0.0) || !(alpha_max > 0.0))
    throw std::invalid_argument("ics_alpha: bounds must be positive");
  return alpha_max * std::exp(static_cast<double>(t) *
                              std::log(alpha_min / alpha_max) /
                              static_cast<double>(ni));
}

NmcsState nmcs_factors(double best_now, double best_prev,
                       double mean_fitness) {
  NmcsState st;
  st.prev_best_fitness = best_prev;
  st.omega_s = (best_prev == 0.0) ? 1.0 : clamp01(best_now / best_prev);
  st.omega_a = (mean_fitness == 0.0) ? 1.0 : clamp01(best_now / mean_fitness);
  st.xi = scale_factor(st.omega_s);
  st.theta = scale_factor(st.omega_a);
  return st;
}

double nmcs_pa(double pa0, const NmcsState& state) {
  const double raw = pa0 / state.xi + pa0 * state.theta;
  if (raw < 0.1) return 0.1;
  if (raw > 0.85) return 0.85;
  return raw;
}

double nmcs_alpha(double alpha0, const NmcsState& state) {
  return alpha0 / state.xi + alpha0 * state.theta;
}

AacsState aacs_init_state(int n, RandomSource& rng) {
  AacsState st;
  st.pa_per_nest.resize(n);
  for (auto& pa : st.pa_per_nest) pa = rng.uniform(0.1, 0.85);
  return st;
}

std::vector<Nest> aacs_rebuild(const Population& pop, const AacsState& state,
                               int t, int ni, RandomSource& rng,
                               const Objective& objective) {
  const std::size_t n = pop.nests.size();
  const int k = pop.k;
  if (n < 5) throw std::invalid_argument("aacs_rebuild: need n >= 5");

  const double gate_level =
      1.0 - static_cast<double>(t) / static_cast<double>(ni);
  std::vector<Nest> rebuilt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = rng.uniform01();
    const double accept = rng.uniform01();
    std::vector<double> pos;
    if (accept < state.pa_per_nest[i]) {
      const auto perm = rng.permutation(static_cast<std::uint32_t>(n));
      pos.resize(k);
      if (g >= gate_level) {
        const auto& r1 = pop.nests[perm[0]].position;
        const auto& r2 = pop.nests[perm[1]].position;
        const auto& r3 = pop.nests[perm[2]].position;
        const auto& r4 = pop.nests[perm[3]].position;
        for (int j = 0; j < k; ++j) {
          const double phi = rng.normal(state.phi_mean, state.phi_std);
          pos[j] = pop.best.position[j] +
                   phi * (r1[j] - r2[j] + r3[j] - r4[j]);
        }
      } else {
        const auto& r1 = pop.nests[perm[0]].position;
        const auto& r2 = pop.nests[perm[1]].position;
        const auto& r3 = pop.nests[perm[2]].position;
        for (int j = 0; j < k; ++j) {
          const double phi = rng.normal(state.phi_mean, state.phi_std);
          pos[j] = r1[j] + phi * (r2[j] - r3[j]);
        }
      }
    } else {
      pos = pop.nests[i].position;
    }
    rebuilt[i].fitness = objective(pos);
    rebuilt[i].position = std::move(pos);
  }
  return rebuilt;
}

void aacs_pa_setting(AacsState& state,
                     const std::vector<std::uint8_t>& improved,
                     double reseed_prob, RandomSource& rng) {
  if (improved.size() != state.pa_per_nest.size())
    throw std::invalid_argument("aacs_pa_setting: length mismatch");
  for (std::size_t i = 0; i < improved.size(); ++i) {
    if (improved[i]) continue;
    if (rng.uniform01() < reseed_prob)
      state.pa_per_nest[i] = rng.uniform(0.1, 0.85);
  }
}

void mcs_iteration(Population& pop, int t, double beta, RandomSource& rng,
                   const Objective& objective) {
  const std::size_t n = pop.nests.size();
  const int k = pop.k;
  if (n < 4) throw std::invalid_argument("mcs_iteration: need n >= 4");
  if (t < 1) throw std::invalid_argument("mcs_iteration: t is 1-based");

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return pop.nests[a].fitness < pop.nests[b].fitness;
                   });
  const std::size_t n1 =
      static_cast<std::size_t>(std::ceil(0.25 * static_cast<double>(n)));

  // Attractor for this iteration, snapshotted before any replacement.
  const std::vector<double> best_pos = pop.nests[order[0]].position;

  auto levy_candidate = [&](const std::vector<double>& mu, double alpha) {
    const std::vector<double> step = levy_step(k, beta, rng);
    std::vector<double> pos(k);
    for (int j = 0; j < k; ++j) {
      const double g = rng.normal();
      pos[j] = mu[j] + alpha * step[j] * (mu[j] - best_pos[j]) * g;
    }
    return pos;
  };

  // abandoned group: unconditional replacement
  const double alpha_walk = 1.0 / std::sqrt(static_cast<double>(t));
  for (std::size_t r = n1; r < n; ++r) {
    Nest& nest = pop.nests[order[r]];
    std::vector<double> pos = levy_candidate(nest.position, alpha_walk);
    nest.fitness = objective(pos);
    nest.position = std::move(pos);
  }

  // top group: pairwise exploitation
  const double alpha_top =
      1.0 / (static_cast<double>(t) * static_cast<double>(t));
  for (std::size_t r = 0; r < n1; ++r) {
    const std::size_t i = order[r];
    const std::size_t j = order[rng.next_below(n1)];

    std::vector<double> cand;
    if (pop.nests[i].position == pop.nests[j].position) {
      cand = levy_candidate(pop.nests[i].position, alpha_top);
    } else {
      // move from the worse of the pair toward the better by |diff|/phi;
      // equal fitness treats i as the better one
      const bool j_better = pop.nests[j].fitness < pop.nests[i].fitness;
      const auto& better = j_better ? pop.nests[j].position
                                    : pop.nests[i].position;
      const auto& worse = j_better ? pop.nests[i].position
                                   : pop.nests[j].position;
      cand.resize(k);
      for (int c = 0; c < k; ++c)
        cand[c] = worse[c] + (better[c] - worse[c]) / kGoldenRatio;
    }
    const double cand_fitness = objective(cand);
    Nest& target = pop.nests[rng.next_below(n)];
    if (cand_fitness <= target.fitness) {
      target.fitness = cand_fitness;
      target.position = std::move(cand);
    }
  }

  for (const auto& nest : pop.nests) {
    if (nest.fitness < pop.best.fitness) pop.best = nest;
  }
  ++pop.t;
}

RunResult run(const GrayImage& image, int k, const VariantConfig& config,
              const EnergyParams& eparams, const GenerationObserver& observer) {
  validate_variant_config(config);
  if (k < 2) throw std::invalid_argument("run: need k >= 2");

  const EnergyEvaluator evaluator(image, eparams);
  const Objective objective = [&](std::span<const double> mu) {
    return evaluator.value(mu);
  };

  RandomSource rng(config.common.seed);
  const CommonConfig& cc = config.common;

  const auto t_start = std::chrono::steady_clock::now();
  Population pop = init_population(k, cc, objective, rng);

  auto population_min = [&pop]() {
    double m = pop.nests[0].fitness;
    for (const auto& nest : pop.nests) m = std::min(m, nest.fitness);
    return m;
  };
  auto notify = [&]() {
    if (observer) observer({pop.t, pop.best.fitness, population_min()});
  };
  notify();

  if (config.variant == Variant::Mcs) {
    for (int t = 1; t <= cc.ni; ++t) {
      mcs_iteration(pop, t, cc.beta, rng, objective);
      notify();
    }
  } else {
    AacsState astate;
    if (config.variant == Variant::Aacs)
      astate = aacs_init_state(cc.n, rng);

    double prev_best = pop.best.fitness;
    for (int t = 0; t < cc.ni; ++t) {
      double alpha_t = cc.alpha;
      double pa_t = cc.pa;
      NmcsState nstate;
      if (config.variant == Variant::Ics) {
        alpha_t = ics_alpha(t, cc.ni, config.ics_alpha_max,
                            config.ics_alpha_min);
      } else if (config.variant == Variant::Nmcs) {
        double mean = 0.0;
        for (const auto& nest : pop.nests) mean += nest.fitness;
        mean /= static_cast<double>(cc.n);
        nstate = nmcs_factors(pop.best.fitness,
                              t == 0 ? pop.best.fitness : prev_best, mean);
        prev_best = pop.best.fitness;
        alpha_t = nmcs_alpha(config.nmcs_alpha0, nstate);
      }

      const auto cuckoos =
          generate_cuckoos(pop, alpha_t, cc.beta, rng, objective);

      std::vector<double> before;
      if (config.variant == Variant::Aacs) {
        before.resize(cc.n);
        for (int i = 0; i < cc.n; ++i) before[i] = pop.nests[i].fitness;
      }
      greedy_update(pop, cuckoos);

      if (config.variant == Variant::Ics) {
        pa_t = ics_pa(t, cc.ni, config.ics_pa_max, config.ics_pa_min);
      } else if (config.variant == Variant::Nmcs) {
        pa_t = nmcs_pa(config.nmcs_pa0, nstate);
      } else if (config.variant == Variant::Aacs) {
        std::vector<std::uint8_t> improved(cc.n);
        for (int i = 0; i < cc.n; ++i)
          improved[i] = pop.nests[i].fitness < before[i] ? 1 : 0;
        aacs_pa_setting(astate, improved, config.aacs_reseed_prob, rng);
      }

      const auto rebuilt =
          config.variant == Variant::Aacs
              ? aacs_rebuild(pop, astate, t, cc.ni, rng, objective)
              : rebuild_abandoned(pop, pa_t, cc.scalar_walk_draws, rng,
                                  objective);
      elitist_select(pop, rebuilt);
      notify();
    }
  }
  const auto t_end = std::chrono::steady_clock::now();

  RunResult result;
  result.mu_star = pop.best.position;
  result.energy = pop.best.fitness;
  result.labels = classify_nearest_mean(image, result.mu_star);
  result.iterations = pop.t;
  result.duration_s =
      std::chrono::duration<double>(t_end - t_start).count();
  return result;
}

}  // namespace hmrfcs
