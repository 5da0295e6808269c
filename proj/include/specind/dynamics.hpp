#pragma once

#include <array>
#include <functional>

#include "specind/distribution.hpp"
#include "specind/flip.hpp"
#include "specind/rng.hpp"

namespace specind {

// One Glauber move: uniform vertex, exact conditional resampling.
Config glauber_step(const Instance& inst, const Config& sigma, RngStream& rng);

// Deterministic half of the move, exposed for tests: resample vertex v using a
// single uniform draw.
Config glauber_resample(const Instance& inst, const Config& sigma, int v, double u01);

// One flip move; records the component size when a flip is accepted (0 = no
// flip).  sigma must be a proper list-coloring.
Config flip_step(const Instance& inst, const Config& sigma, const FlipParameters& params,
                 RngStream& rng, int* flipped_size = nullptr);

// One down-up move on the element-set encoding (desk scale: needs the exact
// distribution for the resampling step).
Config down_up_step(const ExactDistribution& d, const Config& sigma, RngStream& rng);

struct ChainTrace {
    std::vector<long> times;
    std::vector<Config> snapshots;
    std::array<long, 7> flips_by_size{}; // [0] unused; flip chains only
    long steps = 0;
};

using Stepper = std::function<Config(const Config&, RngStream&)>;

ChainTrace run_chain(const Stepper& step, const Config& start, long steps, long stride,
                     RngStream& rng);

// Empirical distribution of independent chain endpoints over d's support.
Vector empirical_distribution(const ExactDistribution& d, const Stepper& step,
                              const Config& start, int t, int replicas, RngStream& rng);

// One-step transition frequencies from a fixed start.
Vector one_step_frequencies(const ExactDistribution& d, const Stepper& step,
                            const Config& start, long samples, RngStream& rng);

// Chi-square goodness-of-fit p-value of observed counts against expected
// probabilities (cells pooled below a minimum expected count).
double chi_square_pvalue(const Vector& counts, const Vector& probs, double min_expected = 10.0);

} // namespace specind
