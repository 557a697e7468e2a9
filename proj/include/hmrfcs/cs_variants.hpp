#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmrfcs/cs_core.hpp"
#include "hmrfcs/energy.hpp"
#include "hmrfcs/image.hpp"

namespace hmrfcs {

enum class Variant { Scs, Ics, Aacs, Mcs, Nmcs };

const char* variant_name(Variant v);
// Accepts the lowercase names scs/ics/aacs/mcs/nmcs.
Variant parse_variant(const std::string& name);

struct VariantConfig {
  Variant variant = Variant::Ics;
  CommonConfig common;
  // ICS schedule bounds
  double ics_pa_max = 0.5;
  double ics_pa_min = 0.1;
  double ics_alpha_max = 1.0;
  double ics_alpha_min = 0.01;
  // NMCS initial values
  double nmcs_pa0 = 0.25;
  double nmcs_alpha0 = 1.0;
  // AACS stagnation reseed probability
  double aacs_reseed_prob = 0.1;
};

// Per-variant minimum population size (the biased walk needs two distinct
// partners,
// the AACS mutation four, the MCS grouping both groups nonempty).
int min_population(Variant v);

void validate_variant_config(const VariantConfig& config);

// The parameter rows reported as best per variant (n, NI, T).
struct VariantPreset {
  VariantConfig config;
  double temperature;
};
VariantPreset default_preset(Variant v);

// --- ICS schedules ---
// pa(t) = pa_max - (t/ni)(pa_max - pa_min)
double ics_pa(int t, int ni, double pa_max, double pa_min);
// alpha(t) = alpha_max * exp(t * ln(alpha_min/alpha_max) / ni)
double ics_alpha(int t, int ni, double alpha_max, double alpha_min);

// --- NMCS adaptive parameters ---
struct NmcsState {
  double prev_best_fitness = 0.0;
  double xi = 1.0;
  double theta = 1.0;
  double omega_s = 1.0;
  double omega_a = 1.0;
};

// Speed/aggregation factors clamped to [0,1], then
// factor = 10^(10 tan(arctan(0.1) (2 omega - 1))), which maps
// omega in {0, 1/2, 1} to {0.1, 1, 10}. A zero denominator degenerates
// to omega = 1.
NmcsState nmcs_factors(double best_now, double best_prev,
                       double mean_fitness);
// pa(t) = pa0/xi + pa0*theta, clamped into [0.1, 0.85]
double nmcs_pa(double pa0, const NmcsState& state);
// alpha(t) = alpha0/xi + alpha0*theta (unclamped)
double nmcs_alpha(double alpha0, const NmcsState& state);

// --- AACS ---
struct AacsState {
  std::vector<double> pa_per_nest;  // p_a^i(t), each in [0.1, 0.85]
  double phi_mean = 0.5;            // scale factor distribution
  double phi_std = 0.1;
};

// Fresh per-nest abandonment probabilities, uniform in [0.1, 0.85].
AacsState aacs_init_state(int n, RandomSource& rng);

// Rebuild step with mutation/crossover selection. Per nest i ascending the
// draws are: gate rand; acceptance rand; then (only when accepted) the
// partner permutation and K Gaussian phi components. Gate passes when
// rand >= 1 - t/ni, selecting the best-based four-partner mutation over
// the three-partner crossover.
std::vector<Nest> aacs_rebuild(const Population& pop, const AacsState& state,
                               int t, int ni, RandomSource& rng,
                               const Objective& objective);

// Reseed-on-stagnation parameter setting: every nest that failed to improve
// this generation redraws its p_a^i from [0.1, 0.85] with probability
// reseed_prob. Draws per stagnant nest: the acceptance rand, then the new
// value when accepted.
void aacs_pa_setting(AacsState& state,
                     const std::vector<std::uint8_t>& improved,
                     double reseed_prob, RandomSource& rng);

// --- MCS (two-group scheme) ---
// Ranks nests by fitness (stable on ties), splits off the top
// ceil(0.25 n) as N1 and the rest as N2. N2 nests are replaced
// unconditionally by Levy cuckoos with alpha = 1/sqrt(t); N1 nests pair
// with a random top nest and either sample a cuckoo with alpha = 1/t^2
// (identical positions) or step from the worse of the pair toward the
// better by the golden-ratio fraction, greedily updating a random nest.
// Draw order per N2 rank: step components, normal factors. Per N1 rank:
// partner index; then on the cuckoo branch step components, normal
// factors, target index; on the move branch just the target index.
// t is 1-based here so the alpha schedules start at 1.
void mcs_iteration(Population& pop, int t, double beta, RandomSource& rng,
                   const Objective& objective);

// --- unified driver ---
struct GenerationStats {
  std::int64_t t;
  double best_fitness;     // best-so-far
  double population_min;   // min fitness over current nests
};

struct RunResult {
  std::vector<double> mu_star;
  double energy = 0.0;
  LabelField labels;
  std::int64_t iterations = 0;
  double duration_s = 0.0;
};

using GenerationObserver = std::function<void(const GenerationStats&)>;

// Runs the selected variant for config.common.ni generations and returns
// the best-so-far solution with its induced labeling. The observer, when
// set, fires once after initialization (t = 0) and once per generation.
RunResult run(const GrayImage& image, int k, const VariantConfig& config,
              const EnergyParams& eparams,
              const GenerationObserver& observer = {});

}  // namespace hmrfcs
