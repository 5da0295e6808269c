#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "specind/graph.hpp"

namespace specind {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A full assignment of spins/colors, one value per vertex.
using Config = std::vector<int>;

struct ConfigHash {
    std::size_t operator()(const Config& c) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int v : c) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e37;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

int vertex_hamming(const Config& a, const Config& b);

enum class ModelKind { spin_system, list_coloring };

// Pairwise spin system over a graph, with per-vertex admissible values and
// per-vertex external fields.  Proper list-colorings are the special case
// interaction = J - I with unit fields, tagged so the combinatorial moves
// (Kempe flips) know the lists are hard constraints.
struct Instance {
    ModelKind kind = ModelKind::spin_system;
    Graph graph;
    int q = 0;
    Matrix interaction;                   // q x q, symmetric, entrywise >= 0
    std::vector<Vector> field;            // per vertex, length q, > 0 on admissible values
    std::vector<std::vector<int>> lists;  // sorted admissible values per vertex
    std::string label;

    int n() const { return graph.n; }
    void validate() const;
};

Instance make_spin_system(const Graph& g, const Matrix& interaction, const Vector& field,
                          std::string label = "spin");
Instance make_ising(const Graph& g, double beta);
Instance make_hardcore(const Graph& g, double lambda); // value 0 = occupied
Instance make_coloring(const Graph& g, int q);
Instance make_list_coloring(const Graph& g, std::vector<std::vector<int>> lists, int q);

// Product of edge interactions and vertex fields; 0 encodes infeasibility.
double gibbs_weight(const Instance& inst, const Config& sigma);

bool is_feasible(const Instance& inst, const Config& sigma);

// Exact conditional law of vertex v given the rest of sigma, computed from the
// neighborhood only.  Entries indexed by value 0..q-1 (0 outside the list).
// Throws if no value is admissible in this context.
Vector conditional_at(const Instance& inst, const Config& sigma, int v);

// Boundary condition: a partial pinning vertex -> value.
struct PinSet {
    std::vector<std::pair<int, int>> pins; // sorted by vertex, distinct
    static PinSet of(std::vector<std::pair<int, int>> pins);
    bool pinned(int v) const;
};

struct InfeasiblePinning : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance over the unpinned vertices whose Gibbs distribution equals the
// conditional of the original; colorings drop pinned colors from neighbor
// lists, general systems absorb the interaction into neighbor fields.
struct Restriction {
    Instance instance;
    std::vector<int> old_to_new; // -1 for pinned vertices
    std::vector<int> new_to_old;
    PinSet pins;

    Config embed(const Config& restricted) const; // fill pinned values back in
};

Restriction restrict_instance(const Instance& inst, const PinSet& pins);

// Bijection between admissible (vertex, value) pairs and contiguous indices.
struct UniverseIndex {
    std::vector<std::pair<int, int>> elements; // index -> (v, c)
    Eigen::MatrixXi index;                     // (v, c) -> index, -1 if inadmissible
    int size() const { return static_cast<int>(elements.size()); }
    int of(int v, int c) const { return index(v, c); }
    std::vector<int> ids_of(const Config& sigma) const; // exactly n elements
};

UniverseIndex universe(const Instance& inst);

// Stable content digest used to key reports to instances.
std::string instance_digest(const Instance& inst);

// File readers per the documented text formats.
std::vector<std::vector<int>> read_lists_file(const std::string& path, int n);
Instance read_spin_system_json(const std::string& path, const Graph& g);

} // namespace specind
