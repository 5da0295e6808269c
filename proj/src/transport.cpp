#include "specind/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace specind {

namespace {
constexpr double kMassEps = 1e-15;
}

TransportResult wasserstein1(const Vector& p, const Vector& q,
                             const std::function<double(int, int)>& dist,
                             const TransportCaps& caps) {
    if (std::abs(p.sum() - q.sum()) > 1e-9)
        throw std::invalid_argument("wasserstein1: masses do not match");
    std::vector<int> src, snk;
    for (int i = 0; i < p.size(); ++i)
        if (p(i) > 0) src.push_back(i);
    for (int j = 0; j < q.size(); ++j)
        if (q(j) > 0) snk.push_back(j);
    const int k = static_cast<int>(src.size()), l = static_cast<int>(snk.size());
    if (static_cast<long>(k) * l > caps.max_joint_entries)
        throw CapExceeded("wasserstein1: joint support exceeds transport cap");

    Matrix c(k, l);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) {
            c(i, j) = dist(src[i], snk[j]);
            if (c(i, j) < 0) throw std::invalid_argument("wasserstein1: negative distance");
        }

    std::vector<double> supply(k), demand(l);
    for (int i = 0; i < k; ++i) supply[i] = p(src[i]);
    for (int j = 0; j < l; ++j) demand[j] = q(snk[j]);

    Matrix flow = Matrix::Zero(k, l);
    std::vector<double> pot(k + l, 0.0); // node potentials; sink j is node k+j
    const double inf = std::numeric_limits<double>::infinity();

    double remaining = 0.0;
    for (double s : supply) remaining += s;

    // successive shortest augmenting paths with reduced costs
    while (remaining > kMassEps) {
        const int nv = k + l;
        std::vector<double> d(nv, inf);
        std::vector<int> parent(nv, -1);
        std::vector<char> done(nv, 0);
        for (int i = 0; i < k; ++i)
            if (supply[i] > kMassEps) d[i] = 0.0;
        while (true) {
            int u = -1;
            double best = inf;
            for (int v = 0; v < nv; ++v)
                if (!done[v] && d[v] < best) { best = d[v]; u = v; }
            if (u < 0) break;
            done[u] = 1;
            if (u < k) {
                for (int j = 0; j < l; ++j) {
                    double rc = std::max(0.0, c(u, j) + pot[u] - pot[k + j]);
                    if (d[u] + rc < d[k + j]) {
                        d[k + j] = d[u] + rc;
                        parent[k + j] = u;
                    }
                }
            } else {
                int j = u - k;
                for (int i = 0; i < k; ++i)
                    if (flow(i, j) > kMassEps) {
                        double rc = std::max(0.0, -c(i, j) + pot[u] - pot[i]);
                        if (d[u] + rc < d[i]) {
                            d[i] = d[u] + rc;
                            parent[i] = u;
                        }
                    }
            }
        }
        int tgt = -1;
        double bestd = inf;
        for (int j = 0; j < l; ++j)
            if (demand[j] > kMassEps && d[k + j] < bestd) { bestd = d[k + j]; tgt = j; }
        if (tgt < 0) throw std::runtime_error("wasserstein1: no augmenting path");
        for (int v = 0; v < nv; ++v) pot[v] += std::min(d[v], bestd);

        std::vector<std::pair<int, int>> arcs; // (from, to) walked sink -> source
        int v = k + tgt;
        while (parent[v] >= 0) {
            arcs.emplace_back(parent[v], v);
            v = parent[v];
        }
        double push = std::min({demand[tgt], supply[v], remaining});
        for (auto [a, b] : arcs)
            if (a >= k && b < k) push = std::min(push, flow(b, a - k)); // backward arc
        for (auto [a, b] : arcs) {
            if (a < k && b >= k) flow(a, b - k) += push;
            else flow(b, a - k) -= push;
        }
        supply[v] -= push;
        demand[tgt] -= push;
        remaining -= push;
        if (push <= kMassEps) throw std::runtime_error("wasserstein1: degenerate augmentation");
    }

    TransportResult res;
    res.cost = (flow.array() * c.array()).sum();
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) {
            double rc = c(i, j) + pot[i] - pot[k + j];
            if (rc < 0) res.dual_violation = std::max(res.dual_violation, -rc);
            if (flow(i, j) > kMassEps)
                res.dual_violation = std::max(res.dual_violation, std::abs(rc));
        }
    res.dual_feasible = res.dual_violation <= 1e-9;
    return res;
}

TransportResult wasserstein1(const Vector& p, const Vector& q, const Matrix& dist,
                             const TransportCaps& caps) {
    return wasserstein1(p, q, [&dist](int i, int j) { return dist(i, j); }, caps);
}

} // namespace specind
