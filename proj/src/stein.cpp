#include "specind/stein.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace specind {

const char* to_string(CertStatus s) {
    switch (s) {
        case CertStatus::pass: return "pass";
        case CertStatus::fail: return "fail";
        case CertStatus::skip: return "skip";
        case CertStatus::inapplicable: return "inapplicable";
    }
    return "?";
}

Certificate Certificate::make(std::string id, double lhs, double rhs, double tol,
                              std::string provenance, std::string instance, std::string note) {
    Certificate c;
    c.id = std::move(id);
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    c.tolerance = tol;
    c.status = c.slack >= -tol ? CertStatus::pass : CertStatus::fail;
    c.provenance = std::move(provenance);
    c.instance = std::move(instance);
    c.note = std::move(note);
    return c;
}

PoissonSolver::PoissonSolver(const TransitionMatrix& p) {
    if (!p.irreducible()) throw std::invalid_argument("poisson: kernel is reducible");
    dense_ = p.dense();
    pi_ = p.stationary;
    // (I - P + 1 pi^T) is nonsingular for irreducible P and pins pi^T h = 0
    Matrix m = Matrix::Identity(p.size, p.size) - dense_;
    for (int s = 0; s < p.size; ++s) m.row(s) += pi_.transpose();
    mnorm_ = m.cwiseAbs().rowwise().sum().maxCoeff();
    lu_.compute(m);
}

PoissonSolution PoissonSolver::solve(const Vector& f) const {
    PoissonSolution sol;
    Vector rhs = f - Vector::Constant(f.size(), pi_.dot(f));
    sol.h = lu_.solve(rhs);
    sol.mean = pi_.dot(sol.h);
    sol.residual = (sol.h - dense_ * sol.h - rhs).lpNorm<Eigen::Infinity>();
    double hn = sol.h.lpNorm<Eigen::Infinity>();
    double rn = rhs.lpNorm<Eigen::Infinity>();
    sol.cond_estimate = rn > 0 ? mnorm_ * hn / rn : 0.0;
    return sol;
}

PoissonSolution poisson_solve(const TransitionMatrix& p, const Vector& f) {
    return PoissonSolver(p).solve(f);
}

double marginal_gap(const ExactDistribution& mu, const ExactDistribution& nu) {
    if (mu.uni.size() != nu.uni.size())
        throw std::invalid_argument("marginal_gap: universe mismatch");
    return (marginal_vector(mu) - marginal_vector(nu)).lpNorm<1>();
}

namespace {

// embedding of nu states into mu's support indices
std::vector<int> embed_indices(const ExactDistribution& mu, const ExactDistribution& nu) {
    std::vector<int> to_mu(nu.size());
    for (int i = 0; i < nu.size(); ++i) {
        to_mu[i] = mu.lookup(nu.support[i]);
        if (to_mu[i] < 0)
            throw std::invalid_argument("stein: supp(nu) is not contained in supp(mu)");
    }
    return to_mu;
}

} // namespace

KernelDifferenceReport kernel_difference(const TransitionMatrix& p_mu,
                                         const ExactDistribution& mu,
                                         const TransitionMatrix& p_nu,
                                         const ExactDistribution& nu) {
    auto to_mu = embed_indices(mu, nu);
    KernelDifferenceReport rep;
    rep.per_state.resize(nu.size());
    std::map<int, double> diff;
    for (int i = 0; i < nu.size(); ++i) {
        int s = to_mu[i];
        diff.clear();
        for (auto [t, pr] : p_mu.rows[s])
            if (t != s) diff[t] += pr;
        for (auto [t, pr] : p_nu.rows[i]) {
            int tm = to_mu[t];
            if (tm != s) diff[tm] -= pr;
        }
        double d = 0.0;
        for (auto [t, v] : diff) d += std::abs(v);
        rep.per_state[i] = d;
        rep.max = std::max(rep.max, d);
        rep.mean_under_nu += nu.probs(i) * d;
    }
    return rep;
}

TransitionMatrix conditional_flip_kernel(const ExactDistribution& nu,
                                         const FlipParameters& params) {
    Restriction r = restrict_instance(nu.inst, nu.conditioning);
    ExactDistribution rd = enumerate_distribution(r.instance);
    if (rd.size() != nu.size())
        throw std::logic_error("conditional_flip_kernel: restricted support size mismatch");
    TransitionMatrix rk = flip_kernel(rd, params);
    std::vector<int> map_to_nu(rd.size());
    for (int i = 0; i < rd.size(); ++i) {
        map_to_nu[i] = nu.lookup(r.embed(rd.support[i]));
        if (map_to_nu[i] < 0)
            throw std::logic_error("conditional_flip_kernel: embedded state missing");
    }
    TransitionMatrix out;
    out.size = nu.size();
    out.rows.resize(out.size);
    for (int i = 0; i < rd.size(); ++i) {
        auto& row = out.rows[map_to_nu[i]];
        for (auto [t, pr] : rk.rows[i]) row.emplace_back(map_to_nu[t], pr);
        std::sort(row.begin(), row.end());
    }
    out.stationary = nu.probs;
    out.name = rk.name + "|pinned";
    return out;
}

SteinBound stein_bound(const ExactDistribution& mu, const TransitionMatrix& p_mu,
                       const ExactDistribution& nu, const TransitionMatrix& p_nu,
                       const AmortizedResult& am, double tolerance,
                       const TransportCaps& transport_caps) {
    SteinBound out;
    const std::string digest = instance_digest(mu.inst);
    if (!am.convergent) {
        out.note = "coupling not convergent: " + am.diagnosis;
        out.marginal = Certificate::make("marginal-gap-vs-coupling-bound", 0, 0, tolerance,
                                         "exact", digest, out.note);
        out.marginal.status = CertStatus::inapplicable;
        out.wasserstein = out.marginal;
        out.wasserstein.id = "wasserstein-vs-coupling-bound";
        return out;
    }
    auto to_mu = embed_indices(mu, nu);
    const int m = mu.size();

    // RHS: E_{S~nu} sum_{T != S} |P_mu - P_nu|(S->T) * (pair-set series)
    double rhs = 0.0;
    std::map<int, double> diff;
    for (int i = 0; i < nu.size(); ++i) {
        int s = to_mu[i];
        diff.clear();
        for (auto [t, pr] : p_mu.rows[s])
            if (t != s) diff[t] += pr;
        for (auto [t, pr] : p_nu.rows[i]) {
            int tm = to_mu[t];
            if (tm != s) diff[tm] -= pr;
        }
        double inner = 0.0;
        for (auto [t, v] : diff)
            inner += std::abs(v) * 2.0 * am.g(static_cast<Eigen::Index>(s) * m + t);
        rhs += nu.probs(i) * inner;
    }
    out.rhs = rhs;
    out.applicable = true;

    double lhs1 = marginal_gap(mu, nu);
    out.marginal = Certificate::make("marginal-gap-vs-coupling-bound", lhs1, rhs, tolerance,
                                     "exact", digest);

    // pair-set W1 = 2 * vertex-metric W1
    try {
        auto w1 = wasserstein1(mu.probs, nu.probs,
                               [&](int i, int j) {
                                   return static_cast<double>(
                                       vertex_hamming(mu.support[i], nu.support[j]));
                               },
                               transport_caps);
        out.wasserstein = Certificate::make("wasserstein-vs-coupling-bound", 2.0 * w1.cost, rhs,
                                            tolerance, "exact", digest);
    } catch (const CapExceeded& e) {
        out.wasserstein = Certificate::make("wasserstein-vs-coupling-bound", 0, rhs, tolerance,
                                            "exact", digest, e.what());
        out.wasserstein.status = CertStatus::skip;
    }
    return out;
}

double stein_identity_error(const ExactDistribution& mu, const TransitionMatrix& p_mu,
                            const ExactDistribution& nu, const TransitionMatrix& p_nu,
                            const PoissonSolver& solver, const Vector& f) {
    auto to_mu = embed_indices(mu, nu);
    PoissonSolution sol = solver.solve(f);
    double emu = mu.probs.dot(f);
    double enu = 0.0;
    for (int i = 0; i < nu.size(); ++i) enu += nu.probs(i) * f(to_mu[i]);
    double steered = 0.0;
    for (int i = 0; i < nu.size(); ++i) {
        int s = to_mu[i];
        double ph_nu = 0.0;
        for (auto [t, pr] : p_nu.rows[i]) ph_nu += pr * sol.h(to_mu[t]);
        double ph_mu = 0.0;
        for (auto [t, pr] : p_mu.rows[s]) ph_mu += pr * sol.h(t);
        steered += nu.probs(i) * (ph_nu - ph_mu);
    }
    return std::abs(enu - emu - steered);
}

double stein_entrywise_violation(const ExactDistribution& mu, const TransitionMatrix& p_mu,
                                 const ExactDistribution& nu, const TransitionMatrix& p_nu,
                                 const PoissonSolver& solver, const AmortizedResult& am) {
    auto to_mu = embed_indices(mu, nu);
    const int m = mu.size();
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < mu.uni.size(); ++j) {
        auto [v, c] = mu.uni.elements[j];
        Vector f(m);
        for (int s = 0; s < m; ++s) f(s) = mu.support[s][v] == c ? 1.0 : 0.0;
        PoissonSolution sol = solver.solve(f);
        for (int i = 0; i < nu.size(); ++i) {
            int s = to_mu[i];
            double ph_nu = 0.0;
            for (auto [t, pr] : p_nu.rows[i]) ph_nu += pr * sol.h(to_mu[t]);
            double ph_mu = 0.0;
            for (auto [t, pr] : p_mu.rows[s]) ph_mu += pr * sol.h(t);
            double lhs = std::abs(ph_nu - ph_mu);
            std::map<int, double> diff;
            for (auto [t, pr] : p_mu.rows[s])
                if (t != s) diff[t] += pr;
            for (auto [t, pr] : p_nu.rows[i]) {
                int tm = to_mu[t];
                if (tm != s) diff[tm] -= pr;
            }
            double rhs = 0.0;
            for (auto [t, val] : diff)
                rhs += std::abs(val) * 2.0 * am.g(static_cast<Eigen::Index>(s) * m + t);
            worst = std::max(worst, lhs - rhs);
        }
    }
    return worst;
}

SpecIndCertificate verify_influence_row_bound(const ExactDistribution& mu,
                                              const TransitionMatrix& p_mu,
                                              const ExactDistribution& nu,
                                              const TransitionMatrix& p_nu,
                                              const AmortizedResult& am, int ell_set,
                                              double tolerance) {
    SpecIndCertificate out;
    const std::string digest = instance_digest(mu.inst);
    if (!am.convergent) {
        out.cert = Certificate::make("influence-row-bound", 0, 0, tolerance, "exact", digest,
                                     "coupling not convergent: " + am.diagnosis);
        out.cert.status = CertStatus::inapplicable;
        return out;
    }
    out.C = am.C;
    out.ell_measured = ell_set;
    auto kd = kernel_difference(p_mu, mu, p_nu, nu);
    out.max_row_diff = kd.max;
    double lhs = marginal_gap(mu, nu);
    double rhs = am.C * ell_set * kd.max;
    out.cert = Certificate::make("influence-row-bound", lhs, rhs, tolerance, "exact", digest);
    return out;
}

ChainFamily make_glauber_family() {
    return [](const ExactDistribution& base, const PinSet& pins) {
        ConditionalChain chain;
        chain.dist = pins.pins.empty() ? base : condition(base, pins);
        chain.kernel = glauber_kernel(chain.dist);
        chain.coupling = std::make_shared<GlauberGreedyCoupling>(chain.dist.inst, chain.dist.active);
        return chain;
    };
}

ChainFamily make_flip_family(FlipParameters params) {
    return [params](const ExactDistribution& base, const PinSet& pins) {
        ConditionalChain chain;
        chain.dist = pins.pins.empty() ? base : condition(base, pins);
        if (pins.pins.empty() && chain.dist.conditioning.pins.empty()) {
            chain.kernel = flip_kernel(chain.dist, params);
            chain.coupling = std::make_shared<FlipGreedyCoupling>(chain.dist.inst, params);
        } else {
            chain.kernel = conditional_flip_kernel(chain.dist, params);
            Restriction r = restrict_instance(chain.dist.inst, chain.dist.conditioning);
            auto inner = std::make_shared<FlipGreedyCoupling>(r.instance, params);
            chain.coupling = std::make_shared<EmbeddedCoupling>(std::move(r), std::move(inner));
        }
        return chain;
    };
}

BlackboxBundle blackbox_certificate(const ExactDistribution& d, const ChainFamily& family,
                                    double const_bound, double tolerance,
                                    const BlackboxCaps& caps) {
    BlackboxBundle bundle;
    const std::string digest = instance_digest(d.inst);
    const int n = static_cast<int>(d.active.size());
    double worst_product = 0.0;
    std::vector<double> eta_bound(n >= 2 ? n - 1 : 0, 0.0);

    long pinning_budget = caps.max_pinnings;
    for (int k = 0; k + 2 <= n; ++k) {
        BlackboxLevel lvl;
        lvl.k = k;
        auto pinnings = feasible_pinnings(d, k);
        lvl.pinnings = static_cast<int>(pinnings.size());
        pinning_budget -= lvl.pinnings;
        if (pinning_budget < 0) throw CapExceeded("blackbox: pinning count exceeds cap");
        for (const auto& pins : pinnings) {
            ConditionalChain chain = family(d, pins);
            JointKernel jk = joint_kernel(*chain.coupling, chain.dist, chain.kernel, caps.joint);
            AmortizedResult am = amortized_constant_exact(jk, chain.dist);
            if (!am.convergent) {
                lvl.applicable = false;
                lvl.note = am.diagnosis;
                break;
            }
            lvl.C = std::max(lvl.C, am.C);
            lvl.ell = std::max(lvl.ell, measured_locality(chain.kernel, chain.dist.support));
            // kernel differences toward each one-element extension
            for (const auto& ext : feasible_pinnings(chain.dist, 1)) {
                ConditionalChain sub = family(d, PinSet::of([&] {
                    auto v = pins.pins;
                    v.push_back(ext.pins[0]);
                    return v;
                }()));
                auto kd = kernel_difference(chain.kernel, chain.dist, sub.kernel, sub.dist);
                lvl.Cprime = std::max(lvl.Cprime, kd.max);
            }
        }
        if (lvl.applicable) {
            lvl.eta_bound = lvl.ell * lvl.C * lvl.Cprime;
            worst_product = std::max(worst_product, lvl.eta_bound);
            eta_bound[k] = lvl.eta_bound;
        } else {
            bundle.applicable = false;
            bundle.note = "level " + std::to_string(k) + ": " + lvl.note;
        }
        bundle.levels.push_back(lvl);
    }

    bundle.product_gate = Certificate::make("locality-coupling-difference-product", worst_product,
                                            const_bound, 0.0, "exact", digest);
    if (!bundle.applicable) {
        bundle.product_gate.status = CertStatus::inapplicable;
        bundle.gap_bound = bundle.product_gate;
        bundle.gap_bound.id = "gap-vs-blackbox-product-bound";
        return bundle;
    }
    double bound = n >= 2 ? local_to_global_bound(eta_bound, n).value
                          : 1.0 / std::max(1, n);
    double gap = spectral_gap(down_up_kernel(d)).gap;
    bundle.gap_bound =
        Certificate::make("gap-vs-blackbox-product-bound", bound, gap + tolerance, 0.0, "exact",
                          digest, "exact down-up gap must dominate the certified bound");
    return bundle;
}

} // namespace specind
