#include "specind/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace specind {

bool Graph::has_edge(int u, int v) const {
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

int Graph::edge_count() const {
    int deg_sum = 0;
    for (const auto& a : adj) deg_sum += static_cast<int>(a.size());
    return deg_sum / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    Graph g;
    g.n = n;
    g.adj.assign(n, {});
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("graph: self-loop");
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& a : g.adj) {
        std::sort(a.begin(), a.end());
        if (std::adjacent_find(a.begin(), a.end()) != a.end())
            throw std::invalid_argument("graph: duplicate edge");
        g.max_degree = std::max(g.max_degree, static_cast<int>(a.size()));
    }
    return g;
}

Graph make_path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return graph_from_edges(n, e);
}

Graph make_cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle: need n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return graph_from_edges(n, e);
}

Graph make_complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return graph_from_edges(n, e);
}

Graph make_empty(int n) { return graph_from_edges(n, {}); }

Graph make_grid(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("grid: need positive dims");
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<std::pair<int, int>> e;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
        }
    return graph_from_edges(rows * cols, e);
}

Graph make_random_regular(int n, int d, std::uint64_t seed) {
    if (d < 0 || d >= n) throw std::invalid_argument("random_regular: need 0 <= d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0)
        throw std::invalid_argument("random_regular: n*d must be even");
    RngStream rng(seed, /*stream=*/0x5e6);
    const int max_tries = 20000;
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<size_t>(n) * d);
        for (int v = 0; v < n; ++v)
            for (int k = 0; k < d; ++k) stubs.push_back(v);
        for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i)
            std::swap(stubs[i], stubs[rng.next_int(i + 1)]);
        std::vector<std::pair<int, int>> e;
        bool ok = true;
        std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v || seen[u][v]) { ok = false; break; }
            seen[u][v] = seen[v][u] = true;
            e.emplace_back(u, v);
        }
        if (ok) return graph_from_edges(n, e);
    }
    throw std::runtime_error("random_regular: pairing model failed to produce a simple graph");
}

Graph generate_graph(const std::string& kind, const std::vector<int>& params,
                     std::uint64_t seed) {
    auto need = [&](size_t k) {
        if (params.size() != k)
            throw std::invalid_argument("generate_graph: wrong parameter count for " + kind);
    };
    if (kind == "path") { need(1); return make_path(params[0]); }
    if (kind == "cycle") { need(1); return make_cycle(params[0]); }
    if (kind == "complete") { need(1); return make_complete(params[0]); }
    if (kind == "empty") { need(1); return make_empty(params[0]); }
    if (kind == "grid") { need(2); return make_grid(params[0], params[1]); }
    if (kind == "random_regular") { need(2); return make_random_regular(params[0], params[1], seed); }
    throw std::invalid_argument("generate_graph: unknown kind '" + kind + "'");
}

Graph graph_from_name(const std::string& name, std::uint64_t seed) {
    if (name == "triangle") return make_cycle(3);
    if (name == "edge" || name == "k2") return make_complete(2);
    auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
    auto tail_int = [&](size_t off) {
        size_t pos = 0;
        int v = std::stoi(name.substr(off), &pos);
        if (off + pos != name.size()) throw std::invalid_argument("graph name: trailing junk in '" + name + "'");
        return v;
    };
    try {
        if (starts("path")) return make_path(tail_int(4));
        if (starts("cycle")) return make_cycle(tail_int(5));
        if (starts("complete")) return make_complete(tail_int(8));
        if (starts("empty")) return make_empty(tail_int(5));
        if (starts("grid")) {
            auto x = name.find('x');
            if (x == std::string::npos) throw std::invalid_argument("grid name: expected gridRxC");
            return make_grid(std::stoi(name.substr(4, x - 4)), std::stoi(name.substr(x + 1)));
        }
        if (starts("rr")) {
            auto x = name.find('x');
            if (x == std::string::npos) throw std::invalid_argument("rr name: expected rrNxD");
            return make_random_regular(std::stoi(name.substr(2, x - 2)), std::stoi(name.substr(x + 1)), seed);
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("graph name: cannot parse '" + name + "'");
    }
    throw std::invalid_argument("graph name: unknown '" + name + "'");
}

std::vector<int> ball(const Graph& g, int u, int r) {
    if (u < 0 || u >= g.n) throw std::invalid_argument("ball: vertex out of range");
    if (r < 0) throw std::invalid_argument("ball: negative radius");
    std::vector<int> dist(g.n, -1);
    std::queue<int> q;
    dist[u] = 0;
    q.push(u);
    std::vector<int> out;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        out.push_back(v);
        if (dist[v] == r) continue;
        for (int w : g.adj[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_connected(const Graph& g) {
    if (g.n == 0) return true;
    return static_cast<int>(ball(g, 0, g.n).size()) == g.n;
}

namespace {

// bit index of pair (u,v), u<v, within the upper triangle of an n-vertex graph
int pair_bit(int u, int v, int n) {
    int k = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (a == u && b == v) return k;
            ++k;
        }
    (void)n;
    return -1;
}

} // namespace

std::vector<Graph> all_connected_graphs(int max_n, int max_degree) {
    if (max_n > 7) throw std::invalid_argument("all_connected_graphs: max_n too large for exhaustive scan");
    std::vector<Graph> out;
    for (int n = 1; n <= max_n; ++n) {
        int nbits = n * (n - 1) / 2;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::vector<int>> perms;
        do { perms.push_back(perm); } while (std::next_permutation(perm.begin(), perm.end()));

        for (std::uint64_t mask = 0; mask < (1ULL << nbits); ++mask) {
            // keep only the lexicographically-minimal labelling of each class
            bool minimal = true;
            for (const auto& p : perms) {
                std::uint64_t relabeled = 0;
                int k = 0;
                for (int a = 0; a < n && minimal; ++a)
                    for (int b = a + 1; b < n; ++b, ++k)
                        if (mask >> k & 1) {
                            int pa = p[a], pb = p[b];
                            if (pa > pb) std::swap(pa, pb);
                            relabeled |= 1ULL << pair_bit(pa, pb, n);
                        }
                if (relabeled < mask) { minimal = false; break; }
            }
            if (!minimal) continue;
            std::vector<std::pair<int, int>> e;
            int k = 0;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b, ++k)
                    if (mask >> k & 1) e.emplace_back(a, b);
            Graph g = graph_from_edges(n, e);
            if (g.max_degree <= max_degree && is_connected(g)) out.push_back(std::move(g));
        }
    }
    return out;
}

Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    int n, m;
    if (!(in >> n >> m)) throw std::runtime_error("graph file: bad header in " + path);
    std::vector<std::pair<int, int>> e(m);
    for (int i = 0; i < m; ++i)
        if (!(in >> e[i].first >> e[i].second))
            throw std::runtime_error("graph file: truncated edge list in " + path);
    return graph_from_edges(n, e);
}

void write_graph_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    auto e = g.edges();
    out << g.n << " " << e.size() << "\n";
    for (auto [u, v] : e) out << u << " " << v << "\n";
}

} // namespace specind
