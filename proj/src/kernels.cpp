#include "specind/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

namespace specind {

double TransitionMatrix::entry(int s, int t) const {
    const auto& r = rows[s];
    auto it = std::lower_bound(r.begin(), r.end(), std::make_pair(t, -1.0));
    return (it != r.end() && it->first == t) ? it->second : 0.0;
}

Matrix TransitionMatrix::dense() const {
    Matrix m = Matrix::Zero(size, size);
    for (int s = 0; s < size; ++s)
        for (auto [t, p] : rows[s]) m(s, t) += p;
    return m;
}

double TransitionMatrix::max_row_sum_error() const {
    double err = 0.0;
    for (const auto& r : rows) {
        double sum = 0.0;
        for (auto [t, p] : r) sum += p;
        err = std::max(err, std::abs(sum - 1.0));
    }
    return err;
}

double TransitionMatrix::stationarity_error() const {
    Vector out = Vector::Zero(size);
    for (int s = 0; s < size; ++s)
        for (auto [t, p] : rows[s]) out(t) += stationary(s) * p;
    return (out - stationary).lpNorm<Eigen::Infinity>();
}

double TransitionMatrix::detailed_balance_error() const {
    double err = 0.0;
    for (int s = 0; s < size; ++s)
        for (auto [t, p] : rows[s])
            if (t >= s) err = std::max(err, std::abs(stationary(s) * p - stationary(t) * entry(t, s)));
    return err;
}

bool TransitionMatrix::irreducible() const {
    // reversible chains: positive entries come in symmetric pairs, BFS suffices
    std::vector<char> seen(size, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int s = q.front();
        q.pop();
        for (auto [t, p] : rows[s])
            if (p > 0 && !seen[t]) {
                seen[t] = 1;
                ++count;
                q.push(t);
            }
    }
    return count == size;
}

int TransitionMatrix::period() const {
    // gcd of (d[u] + 1 - d[v]) over arcs u->v, d = BFS level
    std::vector<int> dist(size, -1);
    std::queue<int> q;
    q.push(0);
    dist[0] = 0;
    int g = 0;
    while (!q.empty()) {
        int s = q.front();
        q.pop();
        for (auto [t, p] : rows[s]) {
            if (p <= 0) continue;
            if (dist[t] < 0) {
                dist[t] = dist[s] + 1;
                q.push(t);
            } else {
                g = std::gcd(g, std::abs(dist[s] + 1 - dist[t]));
            }
        }
    }
    return g == 0 ? size : g;
}

namespace {

TransitionMatrix from_accumulated(std::vector<std::map<int, double>> acc, const Vector& pi,
                                  std::string name) {
    TransitionMatrix p;
    p.size = static_cast<int>(acc.size());
    p.rows.resize(p.size);
    for (int s = 0; s < p.size; ++s)
        for (auto [t, v] : acc[s])
            if (v != 0.0) p.rows[s].emplace_back(t, v);
    p.stationary = pi;
    p.name = std::move(name);
    return p;
}

} // namespace

TransitionMatrix glauber_kernel(const ExactDistribution& d) {
    const int m = d.size();
    const int na = static_cast<int>(d.active.size());
    if (na == 0) return identity_kernel(d); // fully pinned: the trivial chain
    std::vector<std::map<int, double>> acc(m);
    Config tmp;
    for (int s = 0; s < m; ++s) {
        const Config& sigma = d.support[s];
        for (int v : d.active) {
            Vector cond = conditional_at(d.inst, sigma, v);
            tmp = sigma;
            for (int c : d.inst.lists[v]) {
                if (cond(c) <= 0.0) continue;
                tmp[v] = c;
                int t = d.lookup(tmp);
                if (t < 0) throw std::logic_error("glauber_kernel: positive-conditional state missing from support");
                acc[s][t] += cond(c) / na;
            }
        }
    }
    return from_accumulated(std::move(acc), d.probs, "glauber");
}

TransitionMatrix down_up_kernel(const ExactDistribution& d) {
    const int m = d.size();
    const int na = static_cast<int>(d.active.size());
    if (na == 0) return identity_kernel(d);
    // group states by the context sigma_{-v}; dropping element (v, sigma(v))
    // allows exactly the members of the group, weighted by probability
    std::vector<std::map<int, double>> acc(m);
    std::unordered_map<Config, std::vector<int>, ConfigHash> groups;
    for (int v : d.active) {
        groups.clear();
        for (int s = 0; s < m; ++s) {
            Config key = d.support[s];
            key[v] = -1;
            groups[key].push_back(s);
        }
        for (const auto& [key, members] : groups) {
            double mass = 0.0;
            for (int s : members) mass += d.probs(s);
            for (int s : members)
                for (int t : members) acc[s][t] += d.probs(t) / (mass * na);
        }
    }
    return from_accumulated(std::move(acc), d.probs, "down-up");
}

TransitionMatrix flip_kernel(const ExactDistribution& d, const FlipParameters& params) {
    if (d.inst.kind != ModelKind::list_coloring)
        throw std::invalid_argument("flip_kernel: instance is not a list-coloring");
    if (d.active.size() != static_cast<size_t>(d.inst.n()))
        throw std::invalid_argument(
            "flip_kernel: conditioned distribution; build the kernel on the restricted instance");
    params.validate();
    const int m = d.size();
    const int na = static_cast<int>(d.active.size());
    std::vector<std::map<int, double>> acc(m);
    for (int s = 0; s < m; ++s) {
        const Config& sigma = d.support[s];
        double stay = 1.0;
        for (int v : d.active) {
            const auto& lv = d.inst.lists[v];
            for (int c : lv) {
                FlipMove mv = flip_move(d.inst, sigma, v, c, params);
                if (!mv.result) continue;
                int t = d.lookup(*mv.result);
                if (t < 0) throw std::logic_error("flip_kernel: flip result missing from support");
                if (t == s) continue; // lazy c = sigma(v) move, stays on the diagonal
                double pr = params.prob(mv.component_size) / mv.component_size /
                            (static_cast<double>(na) * lv.size());
                acc[s][t] += pr;
                stay -= pr;
            }
        }
        acc[s][s] += stay;
    }
    Vector uniform = Vector::Constant(m, 1.0 / m);
    auto p = from_accumulated(std::move(acc), uniform, "flip(" + params.preset + ")");
    return p;
}

TransitionMatrix identity_kernel(const ExactDistribution& d) {
    TransitionMatrix p;
    p.size = d.size();
    p.rows.resize(p.size);
    for (int s = 0; s < p.size; ++s) p.rows[s].emplace_back(s, 1.0);
    p.stationary = d.probs;
    p.name = "identity";
    return p;
}

int measured_locality(const TransitionMatrix& p, const std::vector<Config>& states) {
    int ell = 0;
    for (int s = 0; s < p.size; ++s)
        for (auto [t, pr] : p.rows[s])
            if (pr > 0 && t != s) ell = std::max(ell, vertex_hamming(states[s], states[t]));
    return 2 * ell;
}

} // namespace specind
