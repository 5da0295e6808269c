#include "specind/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace specind {

int vertex_hamming(const Config& a, const Config& b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

void Instance::validate() const {
    if (q < 1) throw std::invalid_argument("instance: q must be positive");
    if (interaction.rows() != q || interaction.cols() != q)
        throw std::invalid_argument("instance: interaction must be q x q");
    if (!interaction.isApprox(interaction.transpose(), 1e-12))
        throw std::invalid_argument("instance: interaction must be symmetric");
    if ((interaction.array() < 0).any())
        throw std::invalid_argument("instance: interaction must be nonnegative");
    if (static_cast<int>(field.size()) != n() || static_cast<int>(lists.size()) != n())
        throw std::invalid_argument("instance: per-vertex data size mismatch");
    for (int v = 0; v < n(); ++v) {
        if (lists[v].empty()) throw std::invalid_argument("instance: empty list at vertex");
        if (!std::is_sorted(lists[v].begin(), lists[v].end()))
            throw std::invalid_argument("instance: lists must be sorted");
        for (int c : lists[v]) {
            if (c < 0 || c >= q) throw std::invalid_argument("instance: list value out of range");
            if (field[v](c) <= 0) throw std::invalid_argument("instance: field must be positive on admissible values");
        }
    }
}

Instance make_spin_system(const Graph& g, const Matrix& interaction, const Vector& field,
                          std::string label) {
    Instance inst;
    inst.kind = ModelKind::spin_system;
    inst.graph = g;
    inst.q = static_cast<int>(field.size());
    inst.interaction = interaction;
    inst.field.assign(g.n, field);
    std::vector<int> full(inst.q);
    for (int c = 0; c < inst.q; ++c) full[c] = c;
    inst.lists.assign(g.n, full);
    inst.label = std::move(label);
    inst.validate();
    return inst;
}

Instance make_ising(const Graph& g, double beta) {
    Matrix a(2, 2);
    a << std::exp(beta), 1.0, 1.0, std::exp(beta);
    Vector h = Vector::Ones(2);
    auto inst = make_spin_system(g, a, h, "ising(beta=" + std::to_string(beta) + ")");
    return inst;
}

Instance make_hardcore(const Graph& g, double lambda) {
    Matrix a(2, 2);
    a << 0.0, 1.0, 1.0, 1.0; // value 0 = occupied, adjacent occupied pairs forbidden
    Vector h(2);
    h << lambda, 1.0;
    return make_spin_system(g, a, h, "hardcore(lambda=" + std::to_string(lambda) + ")");
}

Instance make_coloring(const Graph& g, int q) {
    std::vector<int> full(q);
    for (int c = 0; c < q; ++c) full[c] = c;
    return make_list_coloring(g, std::vector<std::vector<int>>(g.n, full), q);
}

Instance make_list_coloring(const Graph& g, std::vector<std::vector<int>> lists, int q) {
    Instance inst;
    inst.kind = ModelKind::list_coloring;
    inst.graph = g;
    inst.q = q;
    inst.interaction = Matrix::Ones(q, q) - Matrix::Identity(q, q);
    inst.field.assign(g.n, Vector::Ones(q));
    inst.lists = std::move(lists);
    for (auto& l : inst.lists) std::sort(l.begin(), l.end());
    inst.label = "coloring(q=" + std::to_string(q) + ")";
    inst.validate();
    return inst;
}

double gibbs_weight(const Instance& inst, const Config& sigma) {
    if (static_cast<int>(sigma.size()) != inst.n())
        throw std::invalid_argument("gibbs_weight: configuration length mismatch");
    double w = 1.0;
    for (int v = 0; v < inst.n(); ++v) {
        int c = sigma[v];
        if (c < 0 || c >= inst.q) throw std::invalid_argument("gibbs_weight: value out of range");
        if (!std::binary_search(inst.lists[v].begin(), inst.lists[v].end(), c)) return 0.0;
        w *= inst.field[v](c);
        for (int u : inst.graph.adj[v])
            if (u < v) {
                w *= inst.interaction(sigma[u], c);
                if (w == 0.0) return 0.0;
            }
    }
    return w;
}

bool is_feasible(const Instance& inst, const Config& sigma) {
    return gibbs_weight(inst, sigma) > 0.0;
}

Vector conditional_at(const Instance& inst, const Config& sigma, int v) {
    Vector w = Vector::Zero(inst.q);
    double total = 0.0;
    for (int c : inst.lists[v]) {
        double x = inst.field[v](c);
        for (int u : inst.graph.adj[v]) {
            x *= inst.interaction(c, sigma[u]);
            if (x == 0.0) break;
        }
        w(c) = x;
        total += x;
    }
    if (total <= 0.0)
        throw InfeasiblePinning("conditional_at: no admissible value at vertex " + std::to_string(v));
    return w / total;
}

PinSet PinSet::of(std::vector<std::pair<int, int>> pins) {
    std::sort(pins.begin(), pins.end());
    for (size_t i = 1; i < pins.size(); ++i)
        if (pins[i].first == pins[i - 1].first)
            throw std::invalid_argument("pin set: duplicate vertex");
    return PinSet{std::move(pins)};
}

bool PinSet::pinned(int v) const {
    for (auto [u, c] : pins)
        if (u == v) return true;
    return false;
}

Config Restriction::embed(const Config& restricted) const {
    Config full(old_to_new.size());
    for (auto [v, c] : pins.pins) full[v] = c;
    for (size_t v2 = 0; v2 < new_to_old.size(); ++v2) full[new_to_old[v2]] = restricted[v2];
    return full;
}

Restriction restrict_instance(const Instance& inst, const PinSet& pins) {
    std::vector<int> pin_value(inst.n(), -1);
    for (auto [v, c] : pins.pins) {
        if (v < 0 || v >= inst.n()) throw std::invalid_argument("restrict: pinned vertex out of range");
        if (!std::binary_search(inst.lists[v].begin(), inst.lists[v].end(), c))
            throw InfeasiblePinning("restrict: pinned value not admissible");
        pin_value[v] = c;
    }
    // interactions among pinned vertices must not vanish
    for (auto [v, c] : pins.pins)
        for (int u : inst.graph.adj[v])
            if (pin_value[u] >= 0 && u < v && inst.interaction(pin_value[u], c) == 0.0)
                throw InfeasiblePinning("restrict: pinned neighbors are incompatible");

    Restriction r;
    r.pins = pins;
    r.old_to_new.assign(inst.n(), -1);
    for (int v = 0; v < inst.n(); ++v)
        if (pin_value[v] < 0) {
            r.old_to_new[v] = static_cast<int>(r.new_to_old.size());
            r.new_to_old.push_back(v);
        }

    Instance out;
    out.kind = inst.kind;
    out.q = inst.q;
    out.interaction = inst.interaction;
    out.label = inst.label + "|pin";
    int m = static_cast<int>(r.new_to_old.size());
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < inst.n(); ++v)
        if (pin_value[v] < 0)
            for (int u : inst.graph.adj[v])
                if (pin_value[u] < 0 && u < v) edges.emplace_back(r.old_to_new[u], r.old_to_new[v]);
    out.graph = graph_from_edges(m, edges);
    out.field.resize(m);
    out.lists.resize(m);
    for (int v2 = 0; v2 < m; ++v2) {
        int v = r.new_to_old[v2];
        out.field[v2] = inst.field[v];
        out.lists[v2] = inst.lists[v];
        for (int u : inst.graph.adj[v]) {
            if (pin_value[u] < 0) continue;
            if (inst.kind == ModelKind::list_coloring) {
                auto& l = out.lists[v2];
                l.erase(std::remove(l.begin(), l.end(), pin_value[u]), l.end());
            } else {
                out.field[v2] = out.field[v2].cwiseProduct(inst.interaction.col(pin_value[u]));
            }
        }
        if (inst.kind == ModelKind::list_coloring) {
            if (out.lists[v2].empty())
                throw InfeasiblePinning("restrict: pinning empties a neighbor's list");
        } else {
            bool any = false;
            std::vector<int> kept;
            for (int c : out.lists[v2])
                if (out.field[v2](c) > 0) { kept.push_back(c); any = true; }
            if (!any) throw InfeasiblePinning("restrict: pinning leaves no admissible value");
            out.lists[v2] = std::move(kept);
        }
    }
    out.validate();
    r.instance = std::move(out);
    return r;
}

UniverseIndex universe(const Instance& inst) {
    UniverseIndex u;
    u.index = Eigen::MatrixXi::Constant(inst.n(), inst.q, -1);
    for (int v = 0; v < inst.n(); ++v)
        for (int c : inst.lists[v]) {
            u.index(v, c) = static_cast<int>(u.elements.size());
            u.elements.emplace_back(v, c);
        }
    return u;
}

std::vector<int> UniverseIndex::ids_of(const Config& sigma) const {
    std::vector<int> ids(sigma.size());
    for (size_t v = 0; v < sigma.size(); ++v) ids[v] = index(static_cast<int>(v), sigma[v]);
    return ids;
}

namespace {

void digest_mix(std::uint64_t& h, std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

std::uint64_t double_bits(double d) {
    std::uint64_t u;
    static_assert(sizeof(u) == sizeof(d));
    std::memcpy(&u, &d, sizeof(u));
    return u;
}

} // namespace

std::string instance_digest(const Instance& inst) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    digest_mix(h, inst.kind == ModelKind::list_coloring ? 2 : 1);
    digest_mix(h, static_cast<std::uint64_t>(inst.n()));
    digest_mix(h, static_cast<std::uint64_t>(inst.q));
    for (auto [u, v] : inst.graph.edges()) digest_mix(h, (static_cast<std::uint64_t>(u) << 32) | static_cast<unsigned>(v));
    for (int a = 0; a < inst.q; ++a)
        for (int b = 0; b < inst.q; ++b) digest_mix(h, double_bits(inst.interaction(a, b)));
    for (int v = 0; v < inst.n(); ++v) {
        for (int c : inst.lists[v]) digest_mix(h, static_cast<std::uint64_t>(c) + 17);
        for (int c = 0; c < inst.q; ++c) digest_mix(h, double_bits(inst.field[v](c)));
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::vector<std::vector<int>> read_lists_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lists file: " + path);
    std::vector<std::vector<int>> lists(n);
    std::vector<bool> seen(n, false);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw std::runtime_error("lists file: missing ':' in line");
        int v = std::stoi(line.substr(0, colon));
        if (v < 0 || v >= n) throw std::runtime_error("lists file: vertex out of range");
        if (seen[v]) throw std::runtime_error("lists file: duplicate vertex line");
        seen[v] = true;
        std::istringstream rest(line.substr(colon + 1));
        int c;
        while (rest >> c) lists[v].push_back(c);
        std::sort(lists[v].begin(), lists[v].end());
    }
    for (int v = 0; v < n; ++v)
        if (!seen[v]) throw std::runtime_error("lists file: missing vertex " + std::to_string(v));
    return lists;
}

Instance read_spin_system_json(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spin-system file: " + path);
    nlohmann::json j;
    in >> j;
    int q = j.at("q").get<int>();
    auto a_flat = j.at("A").get<std::vector<double>>();
    auto h_vec = j.at("h").get<std::vector<double>>();
    if (static_cast<int>(a_flat.size()) != q * q)
        throw std::runtime_error("spin-system file: A must have q*q entries (row-major)");
    if (static_cast<int>(h_vec.size()) != q)
        throw std::runtime_error("spin-system file: h must have q entries");
    Matrix a(q, q);
    for (int r = 0; r < q; ++r)
        for (int c = 0; c < q; ++c) a(r, c) = a_flat[r * q + c];
    Vector h(q);
    for (int c = 0; c < q; ++c) h(c) = h_vec[c];
    return make_spin_system(g, a, h, "custom");
}

} // namespace specind
