#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specind/model.hpp"

namespace specind {

// Flip probabilities p_1..p_J for the Kempe-component dynamics; components of
// size j flip with probability p_j / j and p_j = 0 for j > J.
struct FlipParameters {
    std::vector<double> p; // p[j-1] = p_j
    std::string preset = "custom";

    int max_size() const { return static_cast<int>(p.size()); }
    double prob(int j) const { return (j >= 1 && j <= max_size()) ? p[j - 1] : 0.0; }
    void validate() const;

    static FlipParameters vigoda();
    static FlipParameters cdmpp();
    // Wang-Swendsen-Kotecky choice p_j = j: always flip a flippable component.
    static FlipParameters wsk(int max_size = 6);
    static FlipParameters zero(int max_size = 6);
    static FlipParameters single_site(); // p_1 = 1 only
    static FlipParameters from_name(const std::string& name);
};

// Number of colors required by the strict one-step-contraction regime,
// ceil(11/6 * max_degree).
int vigoda_regime_colors(int max_degree);

// Reference contraction rate (q - lambda* Delta)/(q - Delta - 2) with
// lambda* = 11/6 - 1e-5, reported next to measured values.
double reference_alpha(int q, int max_degree);
double reference_beta_bound(int q, int max_degree, int n);
constexpr double kFlipW = 13.0;      // max interim distance of the one-change coupling
constexpr int kFlipLocality = 12;    // pair-set displacement bound of a size-6 flip

// Kempe component S_sigma(u,c): closure of u under paths alternating between
// colors sigma(u) and c.  If size_cap > 0 the search aborts once the component
// exceeds size_cap vertices and returns the partial set (size > size_cap).
std::vector<int> kempe_component(const Instance& inst, const Config& sigma, int u, int c,
                                 int size_cap = 0);

// Swap the two color classes of S; nullopt if the result is not a proper
// list-coloring.  S must be the Kempe component of (sigma, u, c).
std::optional<Config> flip_apply(const Instance& inst, const Config& sigma,
                                 const std::vector<int>& component, int u, int c);

// One proposed move of the flip chain: the (v, c) draw together with its
// component size and result (result absent when unflippable or oversized).
struct FlipMove {
    int vertex;
    int color;
    int component_size;
    std::optional<Config> result;
};

FlipMove flip_move(const Instance& inst, const Config& sigma, int v, int c,
                   const FlipParameters& params);

} // namespace specind
