#pragma once

#include <functional>

#include "specind/model.hpp"

namespace specind {

struct TransportCaps {
    long max_joint_entries = 5'000; // |supp(p)| * |supp(q)| after dropping zero mass
};

struct TransportResult {
    double cost = 0.0;
    bool dual_feasible = true;  // optimality certificate from reduced costs
    double dual_violation = 0.0;
};

// Exact optimal transport cost between two probability vectors over point sets
// with pairwise distances dist(i, j) >= 0.  Successive shortest augmenting
// paths with potentials; exact for our small integer-valued distances.
TransportResult wasserstein1(const Vector& p, const Vector& q,
                             const std::function<double(int, int)>& dist,
                             const TransportCaps& caps = {});

TransportResult wasserstein1(const Vector& p, const Vector& q, const Matrix& dist,
                             const TransportCaps& caps = {});

} // namespace specind
