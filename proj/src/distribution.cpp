#include "specind/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace specind {

ExactDistribution enumerate_distribution(const Instance& inst, const EnumerationCaps& caps) {
    inst.validate();
    std::uint64_t total = 1;
    for (const auto& l : inst.lists) {
        total *= l.size();
        if (total > caps.max_states_visited)
            throw CapExceeded("enumerate: state space exceeds visit cap");
    }

    ExactDistribution d;
    d.inst = inst;
    d.uni = universe(inst);
    d.active.resize(inst.n());
    for (int v = 0; v < inst.n(); ++v) d.active[v] = v;

    const int n = inst.n();
    std::vector<double> weights;
    if (n == 0) throw std::invalid_argument("enumerate: empty instance");

    std::vector<int> pos(n, 0);
    Config sigma(n);
    for (int v = 0; v < n; ++v) sigma[v] = inst.lists[v][0];
    while (true) {
        double w = gibbs_weight(inst, sigma);
        if (w > 0.0) {
            if (static_cast<int>(d.support.size()) >= caps.max_support)
                throw CapExceeded("enumerate: support exceeds cap");
            d.support.push_back(sigma);
            weights.push_back(w);
        }
        int v = n - 1;
        while (v >= 0 && pos[v] + 1 == static_cast<int>(inst.lists[v].size())) {
            pos[v] = 0;
            sigma[v] = inst.lists[v][0];
            --v;
        }
        if (v < 0) break;
        ++pos[v];
        sigma[v] = inst.lists[v][pos[v]];
    }

    if (d.support.empty()) throw InfeasiblePinning("enumerate: empty support (Z = 0)");
    d.Z = 0.0;
    for (double w : weights) d.Z += w;
    d.probs = Vector::Zero(d.size());
    for (int i = 0; i < d.size(); ++i) d.probs(i) = weights[i] / d.Z;
    d.index_of.reserve(d.support.size() * 2);
    for (int i = 0; i < d.size(); ++i) d.index_of.emplace(d.support[i], i);
    return d;
}

ExactDistribution condition(const ExactDistribution& d, const PinSet& pins) {
    ExactDistribution out;
    out.inst = d.inst;
    out.uni = d.uni;
    out.conditioning = d.conditioning;
    for (auto [v, c] : pins.pins) {
        if (out.conditioning.pinned(v)) throw std::invalid_argument("condition: vertex already pinned");
        out.conditioning.pins.emplace_back(v, c);
    }
    std::sort(out.conditioning.pins.begin(), out.conditioning.pins.end());

    for (int v : d.active)
        if (!pins.pinned(v)) out.active.push_back(v);

    double mass = 0.0;
    std::vector<double> w;
    for (int i = 0; i < d.size(); ++i) {
        bool match = true;
        for (auto [v, c] : pins.pins)
            if (d.support[i][v] != c) { match = false; break; }
        if (!match) continue;
        out.support.push_back(d.support[i]);
        out.parent_index.push_back(d.parent_index.empty() ? i : d.parent_index[i]);
        w.push_back(d.probs(i));
        mass += d.probs(i);
    }
    if (out.support.empty()) throw InfeasiblePinning("condition: conditioning event has probability 0");
    out.Z = d.Z * mass;
    out.probs = Vector::Zero(out.size());
    for (int i = 0; i < out.size(); ++i) out.probs(i) = w[i] / mass;
    out.index_of.reserve(out.support.size() * 2);
    for (int i = 0; i < out.size(); ++i) out.index_of.emplace(out.support[i], i);
    return out;
}

Vector marginal_vector(const ExactDistribution& d) {
    Vector m = Vector::Zero(d.uni.size());
    for (int i = 0; i < d.size(); ++i) {
        const Config& s = d.support[i];
        for (int v = 0; v < d.inst.n(); ++v) m(d.uni.of(v, s[v])) += d.probs(i);
    }
    return m;
}

double tv_distance(const Vector& p, const Vector& q) {
    if (p.size() != q.size()) throw std::invalid_argument("tv_distance: length mismatch");
    return 0.5 * (p - q).lpNorm<1>();
}

double expectation(const ExactDistribution& d, const Vector& f) {
    if (f.size() != d.size()) throw std::invalid_argument("expectation: length mismatch");
    return d.probs.dot(f);
}

} // namespace specind
