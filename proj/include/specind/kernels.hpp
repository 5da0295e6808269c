#pragma once

#include "specind/distribution.hpp"
#include "specind/flip.hpp"

namespace specind {

// Row-stochastic kernel on an explicit support, stored sparsely.
struct TransitionMatrix {
    int size = 0;
    std::vector<std::vector<std::pair<int, double>>> rows; // sorted by column
    Vector stationary;
    std::string name;

    double entry(int s, int t) const;
    Matrix dense() const;
    double max_row_sum_error() const;          // max |sum(row) - 1|
    double stationarity_error() const;          // || pi P - pi ||_inf
    double detailed_balance_error() const;      // max |pi_x P_xy - pi_y P_yx|
    bool irreducible() const;
    int period() const;                         // 1 = aperiodic (requires irreducible)
};

// Single-site resampling chain: pick an active vertex uniformly, resample its
// value from the exact conditional law.
TransitionMatrix glauber_kernel(const ExactDistribution& d);

// Element-set walk: drop one of the current elements uniformly, resample a
// superset proportionally to the distribution.
TransitionMatrix down_up_kernel(const ExactDistribution& d);

// Kempe-component dynamics on proper list-colorings; uniform stationary.
TransitionMatrix flip_kernel(const ExactDistribution& d, const FlipParameters& params);

TransitionMatrix identity_kernel(const ExactDistribution& d);

// Max displacement over transitions with positive probability, in pair-set
// distance (twice the vertex distance).
int measured_locality(const TransitionMatrix& p, const std::vector<Config>& states);

} // namespace specind
