#pragma once

#include <cstdint>
#include <stdexcept>

#include "specind/model.hpp"

namespace specind {

struct EnumerationCaps {
    std::uint64_t max_states_visited = 20'000'000; // product of list sizes
    int max_support = 50'000;
};

// Explicit Gibbs distribution on its support.  Conditionals produced by
// condition() keep the parent's instance and universe; their states are full
// configurations and parent_index maps back into the parent's support.
struct ExactDistribution {
    Instance inst;
    UniverseIndex uni;
    std::vector<Config> support; // lexicographic
    Vector probs;
    double Z = 0.0;
    std::vector<int> active;               // vertices resampled by single-site chains
    PinSet conditioning;                   // empty for an unconditioned distribution
    std::vector<int> parent_index;         // per-state index in the parent support (if conditioned)
    std::unordered_map<Config, int, ConfigHash> index_of;

    int size() const { return static_cast<int>(support.size()); }
    int lookup(const Config& c) const {
        auto it = index_of.find(c);
        return it == index_of.end() ? -1 : it->second;
    }
};

ExactDistribution enumerate_distribution(const Instance& inst,
                                         const EnumerationCaps& caps = {});

// Conditional distribution as a filtered, renormalized copy of d.
ExactDistribution condition(const ExactDistribution& d, const PinSet& pins);

// Entry (v,c) = Pr[sigma(v) = c]; per-vertex blocks each sum to 1.
Vector marginal_vector(const ExactDistribution& d);

double tv_distance(const Vector& p, const Vector& q);

// Expectation of f (a vector over d's support).
double expectation(const ExactDistribution& d, const Vector& f);

} // namespace specind
