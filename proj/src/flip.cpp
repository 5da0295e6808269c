#include "specind/flip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace specind {

void FlipParameters::validate() const {
    for (double pj : p)
        if (pj < 0.0 || pj > 1.0) throw std::invalid_argument("flip parameters: p_j outside [0,1]");
}

FlipParameters FlipParameters::vigoda() {
    return {{1.0, 13.0 / 42.0, 1.0 / 6.0, 2.0 / 21.0, 1.0 / 21.0, 1.0 / 84.0}, "vigoda"};
}

FlipParameters FlipParameters::cdmpp() {
    return {{1.0, 0.296706, 0.166762, 0.101790, 0.058475, 0.025989}, "cdmpp"};
}

FlipParameters FlipParameters::wsk(int max_size) {
    FlipParameters fp{{}, "wsk"};
    for (int j = 1; j <= max_size; ++j) fp.p.push_back(static_cast<double>(j));
    return fp; // note: p_j = j > 1 means "always flip"; validate() intentionally skipped
}

FlipParameters FlipParameters::zero(int max_size) {
    return {std::vector<double>(max_size, 0.0), "zero"};
}

FlipParameters FlipParameters::single_site() {
    return {{1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, "single-site"};
}

FlipParameters FlipParameters::from_name(const std::string& name) {
    if (name == "vigoda") return vigoda();
    if (name == "cdmpp") return cdmpp();
    if (name == "wsk") return wsk();
    if (name == "zero") return zero();
    if (name == "single-site") return single_site();
    throw std::invalid_argument("flip parameters: unknown preset '" + name + "'");
}

int vigoda_regime_colors(int max_degree) {
    return static_cast<int>(std::ceil(11.0 * max_degree / 6.0));
}

double reference_alpha(int q, int max_degree) {
    const double lambda_star = 11.0 / 6.0 - 1e-5;
    double denom = q - max_degree - 2.0;
    if (denom <= 0) return 0.0;
    return (q - lambda_star * max_degree) / denom;
}

double reference_beta_bound(int q, int max_degree, int n) {
    double denom = q - max_degree - 2.0;
    if (denom <= 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(q) * n / denom;
}

std::vector<int> kempe_component(const Instance& inst, const Config& sigma, int u, int c,
                                 int size_cap) {
    const int a = sigma[u];
    std::vector<int> comp{u};
    if (c == a) return comp;
    std::vector<char> in_comp(inst.n(), 0);
    in_comp[u] = 1;
    // alternating paths only ever move between the two color classes
    for (size_t head = 0; head < comp.size(); ++head) {
        int v = comp[head];
        int want = (sigma[v] == a) ? c : a;
        for (int w : inst.graph.adj[v]) {
            if (in_comp[w] || sigma[w] != want) continue;
            in_comp[w] = 1;
            comp.push_back(w);
            if (size_cap > 0 && static_cast<int>(comp.size()) > size_cap) return comp;
        }
    }
    std::sort(comp.begin(), comp.end());
    return comp;
}

namespace {

std::optional<Config> swap_classes(const Instance& inst, const Config& sigma,
                                   const std::vector<int>& component, int a, int c) {
    Config tau = sigma;
    for (int v : component) tau[v] = (sigma[v] == a) ? c : a;
    for (int v : component) {
        if (!std::binary_search(inst.lists[v].begin(), inst.lists[v].end(), tau[v]))
            return std::nullopt;
        for (int w : inst.graph.adj[v])
            if (tau[w] == tau[v] && w != v) return std::nullopt;
    }
    return tau;
}

} // namespace

std::optional<Config> flip_apply(const Instance& inst, const Config& sigma,
                                 const std::vector<int>& component, int u, int c) {
    if (kempe_component(inst, sigma, u, c) != component)
        throw std::invalid_argument("flip_apply: set is not the Kempe component of (sigma,u,c)");
    return swap_classes(inst, sigma, component, sigma[u], c);
}

FlipMove flip_move(const Instance& inst, const Config& sigma, int v, int c,
                   const FlipParameters& params) {
    FlipMove mv{v, c, 0, std::nullopt};
    auto comp = kempe_component(inst, sigma, v, c, params.max_size());
    mv.component_size = static_cast<int>(comp.size());
    if (mv.component_size > params.max_size() || params.prob(mv.component_size) == 0.0)
        return mv;
    mv.result = swap_classes(inst, sigma, comp, sigma[v], c);
    return mv;
}

} // namespace specind
