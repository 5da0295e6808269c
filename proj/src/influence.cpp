#include "specind/influence.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>

namespace specind {

TopEigen top_eigenvalue(const Matrix& m) {
    if (m.rows() == 0) return {0.0, 0.0};
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("top_eigenvalue: eigensolver failed");
    double best = -std::numeric_limits<double>::infinity();
    double imag = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        best = std::max(best, es.eigenvalues()(i).real());
        imag = std::max(imag, std::abs(es.eigenvalues()(i).imag()));
    }
    return {best, imag};
}

namespace {

struct MarginalData {
    Vector marg;        // Pr[j in S]
    Matrix cooccur;     // Pr[i in S and j in S]
};

MarginalData cooccurrence(const ExactDistribution& d) {
    const int u = d.uni.size();
    MarginalData md{Vector::Zero(u), Matrix::Zero(u, u)};
    std::vector<int> ids;
    for (int s = 0; s < d.size(); ++s) {
        ids = d.uni.ids_of(d.support[s]);
        double p = d.probs(s);
        for (int a : ids) {
            md.marg(a) += p;
            for (int b : ids) md.cooccur(a, b) += p;
        }
    }
    return md;
}

InfluenceReport finish_report(Matrix inf, const Vector& marg, const ExactDistribution& d,
                              const InfluenceOptions& opts) {
    InfluenceReport rep;
    const int u = d.uni.size();
    if (opts.exclude_same_site) {
        for (int a = 0; a < u; ++a)
            for (int b = 0; b < u; ++b)
                if (a != b && d.uni.elements[a].first == d.uni.elements[b].first) inf(a, b) = 0.0;
    }
    for (int a = 0; a < u; ++a) {
        auto [v, c] = d.uni.elements[a];
        bool pinned_vertex = d.conditioning.pinned(v);
        if (marg(a) > 0.0 && !pinned_vertex) rep.live.push_back(a);
        if (marg(a) <= 0.0 || pinned_vertex) inf.row(a).setZero();
    }
    const int nl = static_cast<int>(rep.live.size());
    Matrix sub(nl, nl);
    for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nl; ++b) sub(a, b) = inf(rep.live[a], rep.live[b]);
    auto top = top_eigenvalue(sub);
    rep.lambda_max = top.value;
    rep.max_imag = top.max_imag;
    rep.infnorm = nl ? sub.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
    Matrix zd = sub;
    zd.diagonal().setZero();
    rep.lambda_max_zero_diag = top_eigenvalue(zd).value;
    if (!opts.literal_diagonal) {
        inf.diagonal().setZero();
        rep.lambda_max = rep.lambda_max_zero_diag;
        rep.infnorm = nl ? zd.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
    }
    rep.influence = std::move(inf);
    return rep;
}

} // namespace

InfluenceReport influence_matrix(const ExactDistribution& d, const InfluenceOptions& opts) {
    const int u = d.uni.size();
    MarginalData md = cooccurrence(d);
    Matrix inf = Matrix::Zero(u, u);
    for (int a = 0; a < u; ++a) {
        if (md.marg(a) <= 0.0) continue;
        for (int b = 0; b < u; ++b) inf(a, b) = md.cooccur(a, b) / md.marg(a) - md.marg(b);
    }
    return finish_report(std::move(inf), md.marg, d, opts);
}

Matrix influence_matrix_reenum(const ExactDistribution& d, const InfluenceOptions& opts) {
    const int u = d.uni.size();
    const Instance& inst = d.inst;

    // base marginals from a fresh enumeration of the (possibly pinned) instance
    auto base_marginals = [&](const PinSet& pins) {
        Restriction r = restrict_instance(inst, pins);
        ExactDistribution rd = enumerate_distribution(r.instance);
        Vector m = Vector::Zero(u);
        Vector rm = marginal_vector(rd);
        for (int a = 0; a < rd.uni.size(); ++a) {
            auto [v2, c] = rd.uni.elements[a];
            m(d.uni.of(r.new_to_old[v2], c)) = rm(a);
        }
        for (auto [v, c] : pins.pins) m(d.uni.of(v, c)) = 1.0;
        return m;
    };

    Vector marg = base_marginals(d.conditioning);
    Matrix inf = Matrix::Zero(u, u);
    for (int a = 0; a < u; ++a) {
        auto [v, c] = d.uni.elements[a];
        if (marg(a) <= 0.0 || d.conditioning.pinned(v)) continue;
        PinSet pins = d.conditioning;
        pins.pins.emplace_back(v, c);
        pins = PinSet::of(std::move(pins.pins));
        Vector cond;
        try {
            cond = base_marginals(pins);
        } catch (const InfeasiblePinning&) {
            continue; // zero-probability conditioning, row stays 0
        }
        inf.row(a) = (cond - marg).transpose();
        if (!opts.literal_diagonal) inf(a, a) = 0.0;
        if (opts.exclude_same_site)
            for (int b = 0; b < u; ++b)
                if (b != a && d.uni.elements[b].first == v) inf(a, b) = 0.0;
    }
    for (int a = 0; a < u; ++a) {
        auto [v, c] = d.uni.elements[a];
        if (marg(a) <= 0.0 || d.conditioning.pinned(v)) inf.row(a).setZero();
    }
    return inf;
}

std::vector<PinSet> feasible_pinnings(const ExactDistribution& d, int k) {
    const int n = d.inst.n();
    std::vector<int> unpinned;
    for (int v = 0; v < n; ++v)
        if (!d.conditioning.pinned(v)) unpinned.push_back(v);
    const int m = static_cast<int>(unpinned.size());
    if (k > m) return {};

    std::map<std::vector<std::pair<int, int>>, bool> seen;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<PinSet> out;
    // collect the distinct restrictions of support states to each k-subset;
    // these are exactly the pinnings contained in some support set
    while (true) {
        for (int s = 0; s < d.size(); ++s) {
            std::vector<std::pair<int, int>> key(k);
            for (int i = 0; i < k; ++i) {
                int v = unpinned[idx[i]];
                key[i] = {v, d.support[s][v]};
            }
            auto [it, inserted] = seen.emplace(std::move(key), true);
            if (inserted) out.push_back(PinSet{it->first});
        }
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0 || k == 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

SpectralIndependenceReport spectral_independence(const ExactDistribution& d,
                                                 const InfluenceOptions& opts,
                                                 const SpectralIndependenceCaps& caps) {
    const int n_eff = static_cast<int>(d.active.size());
    SpectralIndependenceReport rep;
    if (n_eff < 2) return rep;

    std::uint64_t total = 0;
    std::vector<std::vector<PinSet>> levels(n_eff - 1);
    for (int k = 0; k + 2 <= n_eff; ++k) {
        levels[k] = feasible_pinnings(d, k);
        total += levels[k].size();
        if (total > caps.max_pinnings_total)
            throw CapExceeded("spectral_independence: pinning count exceeds cap");
    }
    rep.eta.assign(n_eff - 1, -std::numeric_limits<double>::infinity());
    rep.pinnings.assign(n_eff - 1, 0);
    rep.infnorm_bound.assign(n_eff - 1, 0.0);
    for (int k = 0; k + 2 <= n_eff; ++k) {
        rep.pinnings[k] = static_cast<int>(levels[k].size());
        for (const auto& pins : levels[k]) {
            ExactDistribution cd = k == 0 ? d : condition(d, pins);
            InfluenceReport ir = influence_matrix(cd, opts);
            rep.eta[k] = std::max(rep.eta[k], ir.lambda_max - 1.0);
            rep.infnorm_bound[k] = std::max(rep.infnorm_bound[k], ir.infnorm - 1.0);
            rep.max_imag = std::max(rep.max_imag, ir.max_imag);
        }
    }
    return rep;
}

DobrushinReport dobrushin_matrix(const Instance& inst, const DobrushinCaps& caps, bool full_scan) {
    const int n = inst.n();
    DobrushinReport rep{Matrix::Zero(n, n), 0.0};
    for (int u = 0; u < n; ++u) {
        std::vector<int> targets;
        if (full_scan) {
            for (int v = 0; v < n; ++v)
                if (v != u) targets.push_back(v);
        } else {
            targets = inst.graph.adj[u];
        }
        for (int v : targets) {
            // enumerate contexts on V \ {u, v}
            std::vector<int> rest;
            for (int w = 0; w < n; ++w)
                if (w != u && w != v) rest.push_back(w);
            std::uint64_t count = 1;
            for (int w : rest) {
                count *= inst.lists[w].size();
                if (count > caps.max_contexts)
                    throw CapExceeded("dobrushin_matrix: context count exceeds cap");
            }
            double worst = 0.0;
            Config sigma(n, -1);
            std::vector<int> pos(rest.size(), 0);
            for (size_t i = 0; i < rest.size(); ++i) sigma[rest[i]] = inst.lists[rest[i]][0];
            while (true) {
                // context must extend to at least one feasible configuration off v
                std::vector<Vector> conds;
                for (int a : inst.lists[u]) {
                    sigma[u] = a;
                    bool ok = [&] {
                        double w = inst.field[u](a);
                        for (int x : inst.graph.adj[u])
                            if (x != v && sigma[x] >= 0) w *= inst.interaction(a, sigma[x]);
                        if (w <= 0) return false;
                        for (size_t i = 0; i < rest.size(); ++i) {
                            int y = rest[i];
                            double fy = inst.field[y](sigma[y]);
                            for (int x : inst.graph.adj[y])
                                if (x != v && x < y && x != u) fy *= inst.interaction(sigma[x], sigma[y]);
                            if (fy <= 0) return false;
                        }
                        return true;
                    }();
                    if (!ok) continue;
                    try {
                        conds.push_back(conditional_at(inst, sigma, v));
                    } catch (const InfeasiblePinning&) {
                        // context admits no value at v: skip this pair
                    }
                }
                for (size_t i = 0; i < conds.size(); ++i)
                    for (size_t j = i + 1; j < conds.size(); ++j)
                        worst = std::max(worst, tv_distance(conds[i], conds[j]));
                size_t w = 0;
                while (w < rest.size() && pos[w] + 1 == static_cast<int>(inst.lists[rest[w]].size())) {
                    pos[w] = 0;
                    sigma[rest[w]] = inst.lists[rest[w]][0];
                    ++w;
                }
                if (w == rest.size()) break;
                ++pos[w];
                sigma[rest[w]] = inst.lists[rest[w]][pos[w]];
            }
            rep.rho(u, v) = worst;
        }
    }
    rep.gamma = rep.rho.rowwise().sum().maxCoeff();
    return rep;
}

} // namespace specind
