#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specind/rng.hpp"

namespace specind {

// Simple undirected graph with sorted adjacency lists.
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;
    int max_degree = 0;

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    bool has_edge(int u, int v) const;
    int edge_count() const;
    std::vector<std::pair<int, int>> edges() const; // u < v, sorted
};

// Builds a graph from an edge list; rejects self-loops and duplicates.
Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

Graph make_path(int n);
Graph make_cycle(int n);
Graph make_complete(int n);
Graph make_empty(int n);
Graph make_grid(int rows, int cols);
// Configuration-model sampler, resampled until simple; deterministic in seed.
Graph make_random_regular(int n, int d, std::uint64_t seed);

// Named generator dispatch: path|cycle|complete|grid|random_regular.
Graph generate_graph(const std::string& kind, const std::vector<int>& params,
                     std::uint64_t seed);

// Accepts compact names used on the command line: "triangle", "edge",
// "path4", "cycle6", "complete5", "grid2x3", "empty3", "rr6x3".
Graph graph_from_name(const std::string& name, std::uint64_t seed);

// B(u,r) = vertices within BFS distance r of u (always contains u).
std::vector<int> ball(const Graph& g, int u, int r);

bool is_connected(const Graph& g);

// All connected graphs with at most max_n vertices and max degree at most
// max_degree, one representative per isomorphism class.  Intended for small
// max_n only (exhaustive over labelled graphs, canonicalized by brute force).
std::vector<Graph> all_connected_graphs(int max_n, int max_degree);

// Text format: first line "n m", then m lines "u v" (0-indexed).
Graph read_graph_file(const std::string& path);
void write_graph_file(const Graph& g, const std::string& path);

} // namespace specind
