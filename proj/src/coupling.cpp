#include "specind/coupling.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace specind {

std::pair<Config, Config> Coupling::step(const Config& x, const Config& y, RngStream& rng) const {
    auto row = joint_row(x, y);
    double u = rng.next_double();
    double acc = 0.0;
    for (const auto& mv : row) {
        acc += mv.prob;
        if (u < acc) return {mv.x, mv.y};
    }
    return {row.back().x, row.back().y};
}

namespace {

// monotone pairing of the residual masses of two laws after the shared part
// is matched diagonally; outcomes are (value_x, value_y, mass)
std::vector<std::tuple<int, int, double>> maximal_coupling(const std::vector<int>& values,
                                                           const Vector& px, const Vector& py) {
    std::vector<std::tuple<int, int, double>> out;
    std::vector<std::pair<int, double>> rx, ry;
    for (int c : values) {
        double shared = std::min(px(c), py(c));
        if (shared > 0) out.emplace_back(c, c, shared);
        if (px(c) - shared > 1e-18) rx.emplace_back(c, px(c) - shared);
        if (py(c) - shared > 1e-18) ry.emplace_back(c, py(c) - shared);
    }
    size_t i = 0, j = 0;
    double have_x = i < rx.size() ? rx[i].second : 0.0;
    double have_y = j < ry.size() ? ry[j].second : 0.0;
    while (i < rx.size() && j < ry.size()) {
        double m = std::min(have_x, have_y);
        out.emplace_back(rx[i].first, ry[j].first, m);
        have_x -= m;
        have_y -= m;
        if (have_x <= 1e-18) { ++i; have_x = i < rx.size() ? rx[i].second : 0.0; }
        if (have_y <= 1e-18) { ++j; have_y = j < ry.size() ? ry[j].second : 0.0; }
    }
    return out;
}

struct PairKey {
    Config x, y;
    bool operator<(const PairKey& o) const {
        if (x != o.x) return x < o.x;
        return y < o.y;
    }
};

std::vector<JointMove> collect(std::map<PairKey, double>&& acc) {
    std::vector<JointMove> out;
    out.reserve(acc.size());
    for (auto& [k, p] : acc) out.push_back({k.x, k.y, p});
    return out;
}

} // namespace

GlauberGreedyCoupling::GlauberGreedyCoupling(Instance inst, std::vector<int> active)
    : inst_(std::move(inst)), active_(std::move(active)) {
    if (active_.empty())
        for (int v = 0; v < inst_.n(); ++v) active_.push_back(v);
}

std::vector<JointMove> GlauberGreedyCoupling::joint_row(const Config& x, const Config& y) const {
    const double na = static_cast<double>(active_.size());
    std::map<PairKey, double> acc;
    Config nx = x, ny = y;
    for (int v : active_) {
        Vector cx = conditional_at(inst_, x, v);
        Vector cy = conditional_at(inst_, y, v);
        for (auto [a, b, m] : maximal_coupling(inst_.lists[v], cx, cy)) {
            nx[v] = a;
            ny[v] = b;
            acc[{nx, ny}] += m / na;
        }
        nx[v] = x[v];
        ny[v] = y[v];
    }
    return collect(std::move(acc));
}

std::pair<Config, Config> GlauberGreedyCoupling::step(const Config& x, const Config& y,
                                                      RngStream& rng) const {
    int v = active_[rng.next_int(static_cast<int>(active_.size()))];
    Vector cx = conditional_at(inst_, x, v);
    Vector cy = conditional_at(inst_, y, v);
    auto outcomes = maximal_coupling(inst_.lists[v], cx, cy);
    double u = rng.next_double();
    double acc = 0.0;
    Config nx = x, ny = y;
    for (auto [a, b, mmass] : outcomes) {
        acc += mmass;
        if (u < acc) {
            nx[v] = a;
            ny[v] = b;
            return {nx, ny};
        }
    }
    nx[v] = std::get<0>(outcomes.back());
    ny[v] = std::get<1>(outcomes.back());
    return {nx, ny};
}

std::pair<Config, Config> FlipGreedyCoupling::step(const Config& x, const Config& y,
                                                   RngStream& rng) const {
    int v = rng.next_int(inst_.n());
    const auto& lv = inst_.lists[v];
    int c = lv[rng.next_int(static_cast<int>(lv.size()))];
    double u = rng.next_double();
    FlipMove mx = flip_move(inst_, x, v, c, params_);
    FlipMove my = flip_move(inst_, y, v, c, params_);
    double tx = mx.result ? params_.prob(mx.component_size) / mx.component_size : 0.0;
    double ty = my.result ? params_.prob(my.component_size) / my.component_size : 0.0;
    return {u < tx ? *mx.result : x, u < ty ? *my.result : y};
}

std::vector<JointMove> FlipGreedyCoupling::joint_row(const Config& x, const Config& y) const {
    const int n = inst_.n();
    std::map<PairKey, double> acc;
    for (int v = 0; v < n; ++v) {
        const auto& lv = inst_.lists[v];
        const double draw = 1.0 / (static_cast<double>(n) * lv.size());
        for (int c : lv) {
            FlipMove mx = flip_move(inst_, x, v, c, params_);
            FlipMove my = flip_move(inst_, y, v, c, params_);
            double tx = mx.result ? params_.prob(mx.component_size) / mx.component_size : 0.0;
            double ty = my.result ? params_.prob(my.component_size) / my.component_size : 0.0;
            double both = std::min(tx, ty);
            // shared acceptance uniform: accept events are nested
            if (both > 0) acc[{*mx.result, *my.result}] += draw * both;
            if (tx - both > 0) acc[{*mx.result, y}] += draw * (tx - both);
            if (ty - both > 0) acc[{x, *my.result}] += draw * (ty - both);
            double none = 1.0 - std::max(tx, ty);
            if (none > 0) acc[{x, y}] += draw * none;
        }
    }
    return collect(std::move(acc));
}

RowLaw glauber_row_law(const Instance& inst) {
    return [inst](const Config& x) {
        std::map<Config, double> acc;
        const int n = inst.n();
        Config nx = x;
        for (int v = 0; v < n; ++v) {
            Vector cond = conditional_at(inst, x, v);
            for (int c : inst.lists[v])
                if (cond(c) > 0) {
                    nx[v] = c;
                    acc[nx] += cond(c) / n;
                }
            nx[v] = x[v];
        }
        std::vector<std::pair<Config, double>> out(acc.begin(), acc.end());
        return out;
    };
}

RowLaw flip_row_law(const Instance& inst, const FlipParameters& params) {
    return [inst, params](const Config& x) {
        std::map<Config, double> acc;
        const int n = inst.n();
        double stay = 1.0;
        for (int v = 0; v < n; ++v) {
            const auto& lv = inst.lists[v];
            for (int c : lv) {
                FlipMove mv = flip_move(inst, x, v, c, params);
                if (!mv.result || *mv.result == x) continue;
                double pr = params.prob(mv.component_size) / mv.component_size /
                            (static_cast<double>(n) * lv.size());
                acc[*mv.result] += pr;
                stay -= pr;
            }
        }
        acc[x] += stay;
        std::vector<std::pair<Config, double>> out(acc.begin(), acc.end());
        return out;
    };
}

std::vector<JointMove> IndependentCoupling::joint_row(const Config& x, const Config& y) const {
    std::vector<JointMove> out;
    if (x == y) {
        for (auto& [z, p] : law_(x)) out.push_back({z, z, p});
        return out;
    }
    auto rx = law_(x);
    auto ry = law_(y);
    out.reserve(rx.size() * ry.size());
    for (auto& [a, pa] : rx)
        for (auto& [b, pb] : ry) out.push_back({a, b, pa * pb});
    return out;
}

Config EmbeddedCoupling::strip(const Config& full) const {
    Config sub(r_.new_to_old.size());
    for (size_t v2 = 0; v2 < r_.new_to_old.size(); ++v2) sub[v2] = full[r_.new_to_old[v2]];
    return sub;
}

std::vector<JointMove> EmbeddedCoupling::joint_row(const Config& x, const Config& y) const {
    auto inner = inner_->joint_row(strip(x), strip(y));
    std::vector<JointMove> out;
    out.reserve(inner.size());
    for (auto& mv : inner) out.push_back({r_.embed(mv.x), r_.embed(mv.y), mv.prob});
    return out;
}

JointKernel joint_kernel(const Coupling& cpl, const ExactDistribution& d,
                         const TransitionMatrix& base, const JointKernelCaps& caps) {
    const int m = d.size();
    if (m > caps.max_base_states) throw CapExceeded("joint_kernel: base support exceeds cap");
    JointKernel jk;
    jk.m = m;
    jk.rows.resize(static_cast<size_t>(m) * m);
    Vector margx(m), margy(m), baserow(m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            auto row = cpl.joint_row(d.support[x], d.support[y]);
            std::map<std::pair<int, int>, double> acc;
            for (const auto& mv : row) {
                int a = d.lookup(mv.x), b = d.lookup(mv.y);
                if (a < 0 || b < 0) throw std::logic_error("joint_kernel: move leaves the support");
                acc[{a, b}] += mv.prob;
            }
            auto& r = jk.rows[static_cast<size_t>(x) * m + y];
            margx.setZero();
            margy.setZero();
            for (auto [ab, pr] : acc) {
                r.emplace_back(ab.first * m + ab.second, pr);
                margx(ab.first) += pr;
                margy(ab.second) += pr;
                if (x == y && ab.first != ab.second) jk.sticky_error += pr;
            }
            baserow.setZero();
            for (auto [t, pr] : base.rows[x]) baserow(t) += pr;
            jk.marginal_error = std::max(jk.marginal_error,
                                         (margx - baserow).lpNorm<Eigen::Infinity>());
            baserow.setZero();
            for (auto [t, pr] : base.rows[y]) baserow(t) += pr;
            jk.marginal_error = std::max(jk.marginal_error,
                                         (margy - baserow).lpNorm<Eigen::Infinity>());
        }
    return jk;
}

namespace {

std::vector<int> off_diagonal_ids(int m) {
    std::vector<int> ids;
    ids.reserve(static_cast<size_t>(m) * (m - 1));
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (x != y) ids.push_back(x * m + y);
    return ids;
}

} // namespace

Vector amortized_series_truncated(const JointKernel& joint, const ExactDistribution& d, int T) {
    const int m = joint.m;
    Vector dist = Vector::Zero(static_cast<Eigen::Index>(m) * m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (x != y) dist(x * m + y) = vertex_hamming(d.support[x], d.support[y]);
    Vector g = Vector::Zero(dist.size());
    Vector cur = dist;
    for (int t = 0; t < T; ++t) {
        g += cur;
        // cur_{t+1}(p) = sum_q Q(p -> q) cur_t(q); diagonal pairs contribute 0
        Vector nxt = Vector::Zero(dist.size());
        for (size_t p = 0; p < joint.rows.size(); ++p) {
            if (dist(p) == 0.0) continue;
            double s = 0.0;
            for (auto [q, pr] : joint.rows[p])
                if (dist(q) != 0.0) s += pr * cur(q);
            nxt(p) = s;
        }
        cur.swap(nxt);
    }
    return g;
}

AmortizedResult amortized_constant_exact(const JointKernel& joint, const ExactDistribution& d) {
    const int m = joint.m;
    AmortizedResult res;
    if (joint.sticky_error > 1e-12) {
        res.diagnosis = "coupling is not sticky";
        return res;
    }
    auto ids = off_diagonal_ids(m);
    const int nu = static_cast<int>(ids.size());
    std::vector<int> pos(static_cast<size_t>(m) * m, -1);
    for (int i = 0; i < nu; ++i) pos[ids[i]] = i;

    Vector dist(nu);
    for (int i = 0; i < nu; ++i) {
        int x = ids[i] / m, y = ids[i] % m;
        dist(i) = vertex_hamming(d.support[x], d.support[y]);
    }

    // every off-diagonal pair must reach the diagonal for the series to converge
    {
        std::vector<char> reach(nu, 0);
        bool changed = true;
        while (changed) {
            changed = false;
            for (int i = 0; i < nu; ++i) {
                if (reach[i]) continue;
                for (auto [q, pr] : joint.rows[ids[i]]) {
                    if (pr <= 0) continue;
                    if (pos[q] < 0 || reach[pos[q]]) {
                        reach[i] = 1;
                        changed = true;
                        break;
                    }
                }
            }
        }
        for (int i = 0; i < nu; ++i)
            if (!reach[i]) {
                res.diagnosis = "coupling cannot coalesce from some pair";
                return res;
            }
    }

    Eigen::SparseMatrix<double> a(nu, nu);
    {
        std::vector<Eigen::Triplet<double>> trip;
        for (int i = 0; i < nu; ++i) {
            trip.emplace_back(i, i, 1.0);
            for (auto [q, pr] : joint.rows[ids[i]])
                if (pos[q] >= 0 && pr != 0.0) trip.emplace_back(i, pos[q], -pr);
        }
        a.setFromTriplets(trip.begin(), trip.end());
    }

    Vector g;
    if (nu <= 2500) {
        Matrix ad = Matrix(a);
        g = ad.partialPivLu().solve(dist);
        res.solver = "dense-lu";
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> solver;
        solver.setTolerance(1e-14);
        solver.setMaxIterations(100000);
        solver.compute(a);
        g = solver.solve(dist);
        res.solver = "bicgstab";
        if (solver.info() != Eigen::Success) {
            // refine with Gauss-Seidel sweeps; the system is an M-matrix
            res.solver = "bicgstab+gs";
        }
    }
    // always polish with Gauss-Seidel sweeps and verify the residual
    Eigen::SparseMatrix<double, Eigen::RowMajor> ar(a);
    auto residual_inf = [&]() {
        Vector r = ar * g - dist;
        return r.lpNorm<Eigen::Infinity>();
    };
    long max_sweeps = std::max<long>(20, 20'000'000 / std::max(1, nu));
    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        if (residual_inf() <= 1e-12) break;
        for (int i = 0; i < nu; ++i) {
            double s = dist(i);
            double diag = 1.0;
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ar, i); it; ++it) {
                if (it.col() == i) diag = it.value();
                else s -= it.value() * g(it.col());
            }
            g(i) = s / diag;
        }
    }
    res.residual = residual_inf();
    if (res.residual > 1e-9 || !g.allFinite() || g.minCoeff() < -1e-9) {
        res.diagnosis = g.allFinite() && g.minCoeff() >= -1e-9
                            ? "linear solve did not reach the residual target"
                            : "series solution negative or non-finite: coupling not convergent";
        return res;
    }

    res.convergent = true;
    res.C = 0.0;
    res.g = Vector::Zero(static_cast<size_t>(m) * m);
    for (int i = 0; i < nu; ++i) {
        res.g(ids[i]) = g(i);
        res.C = std::max(res.C, g(i) / dist(i));
    }
    return res;
}

ContractionResult one_step_contraction(const JointKernel& joint, const ExactDistribution& d) {
    const int m = joint.m;
    ContractionResult res;
    res.worst_ratio = 0.0;
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            if (x == y) continue;
            double d0 = vertex_hamming(d.support[x], d.support[y]);
            double e = 0.0;
            for (auto [q, pr] : joint.rows[static_cast<size_t>(x) * m + y])
                e += pr * vertex_hamming(d.support[q / m], d.support[q % m]);
            res.worst_ratio = std::max(res.worst_ratio, e / d0);
            ++res.pairs;
        }
    res.alpha = 1.0 - res.worst_ratio;
    return res;
}

double coupling_expected_distance(const Coupling& cpl, const Config& x, const Config& y) {
    double e = 0.0;
    for (const auto& mv : cpl.joint_row(x, y)) e += mv.prob * vertex_hamming(mv.x, mv.y);
    return e;
}

AmortizedMcResult amortized_constant_mc(const Coupling& cpl,
                                        const std::vector<std::pair<Config, Config>>& pairs,
                                        long horizon, long trials, RngStream& rng) {
    if (horizon < 1 || trials < 1)
        throw std::invalid_argument("amortized_constant_mc: need horizon, trials >= 1");
    AmortizedMcResult out;
    for (size_t pi = 0; pi < pairs.size(); ++pi) {
        double sum = 0.0, sumsq = 0.0, tail = 0.0;
        double d0 = vertex_hamming(pairs[pi].first, pairs[pi].second);
        for (long tr = 0; tr < trials; ++tr) {
            RngStream sub = rng.substream((pi << 32) ^ static_cast<std::uint64_t>(tr));
            Config x = pairs[pi].first, y = pairs[pi].second;
            double total = 0.0;
            int dcur = vertex_hamming(x, y);
            for (long t = 0; t <= horizon; ++t) {
                total += dcur;
                if (dcur == 0) break;
                std::tie(x, y) = cpl.step(x, y, sub);
                dcur = vertex_hamming(x, y);
                if (t == horizon - 1) tail += dcur;
            }
            sum += total;
            sumsq += total * total;
        }
        MonteCarloEstimate est;
        est.mean = sum / trials;
        est.stderr_ = trials > 1 ? std::sqrt(std::max(0.0, (sumsq / trials - est.mean * est.mean) /
                                                               (trials - 1)))
                                 : 0.0;
        est.tail_last_term = tail / trials;
        out.per_pair.push_back(est);
        double c = d0 > 0 ? est.mean / d0 : 0.0;
        if (c > out.C) {
            out.C = c;
            out.stderr_ = d0 > 0 ? est.stderr_ / d0 : 0.0;
        }
        out.tail_flag = std::max(out.tail_flag, est.tail_last_term);
    }
    return out;
}

AdjacentPairs adjacent_feasible_pairs(const ExactDistribution& d, long max_pairs) {
    AdjacentPairs out;
    const int m = d.size();
    std::vector<int> comp(m);
    for (int i = 0; i < m; ++i) comp[i] = i;
    std::function<int(int)> find = [&](int a) {
        while (comp[a] != a) a = comp[a] = comp[comp[a]];
        return a;
    };
    std::unordered_map<Config, std::vector<int>, ConfigHash> groups;
    for (int v : d.active) {
        groups.clear();
        for (int s = 0; s < m; ++s) {
            Config key = d.support[s];
            key[v] = -1;
            groups[key].push_back(s);
        }
        for (auto& [key, members] : groups)
            for (size_t i = 0; i < members.size(); ++i)
                for (size_t j = i + 1; j < members.size(); ++j) {
                    out.pairs.emplace_back(members[i], members[j]);
                    if (static_cast<long>(out.pairs.size()) > max_pairs)
                        throw CapExceeded("adjacent_feasible_pairs: pair count exceeds cap");
                    comp[find(members[i])] = find(members[j]);
                }
    }
    int roots = 0;
    for (int i = 0; i < m; ++i) roots += (find(i) == i);
    out.connected = roots <= 1;
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

CurvatureResult ricci_curvature_optimal(const TransitionMatrix& p, const ExactDistribution& d,
                                        const std::vector<std::pair<int, int>>& pairs,
                                        const TransportCaps& caps) {
    CurvatureResult res;
    res.alpha = std::numeric_limits<double>::infinity();
    if (pairs.empty()) {
        res.vacuous = true;
        res.alpha = 0.0;
        return res;
    }
    for (auto [x, y] : pairs) {
        // union of the two row supports
        std::vector<int> states;
        for (auto [t, pr] : p.rows[x]) states.push_back(t);
        for (auto [t, pr] : p.rows[y]) states.push_back(t);
        std::sort(states.begin(), states.end());
        states.erase(std::unique(states.begin(), states.end()), states.end());
        const int k = static_cast<int>(states.size());
        Vector px = Vector::Zero(k), py = Vector::Zero(k);
        auto at = [&](int t) {
            return static_cast<int>(std::lower_bound(states.begin(), states.end(), t) -
                                    states.begin());
        };
        for (auto [t, pr] : p.rows[x]) px(at(t)) += pr;
        for (auto [t, pr] : p.rows[y]) py(at(t)) += pr;
        auto w1 = wasserstein1(px, py,
                               [&](int i, int j) {
                                   return static_cast<double>(vertex_hamming(
                                       d.support[states[i]], d.support[states[j]]));
                               },
                               caps);
        double dxy = vertex_hamming(d.support[x], d.support[y]);
        double a = 1.0 - w1.cost / dxy;
        if (a < res.alpha) {
            res.alpha = a;
            res.argmin = {x, y};
        }
        ++res.pairs;
    }
    return res;
}

CurvatureResult ricci_curvature_coupled(const Coupling& cpl, const ExactDistribution& d,
                                        const std::vector<std::pair<int, int>>& pairs) {
    CurvatureResult res;
    res.alpha = std::numeric_limits<double>::infinity();
    if (pairs.empty()) {
        res.vacuous = true;
        res.alpha = 0.0;
        return res;
    }
    for (auto [x, y] : pairs) {
        double dxy = vertex_hamming(d.support[x], d.support[y]);
        double a = 1.0 - coupling_expected_distance(cpl, d.support[x], d.support[y]) / dxy;
        if (a < res.alpha) {
            res.alpha = a;
            res.argmin = {x, y};
        }
        ++res.pairs;
    }
    return res;
}

StopRule stop_on_distance_change() {
    return [](long, int d0, int dcur) { return dcur != d0; };
}

StopRule stop_at_time(long t) {
    return [t](long cur, int, int) { return cur >= t; };
}

VariableLengthStats variable_length_stats(const Coupling& cpl,
                                          const std::vector<std::pair<Config, Config>>& pairs,
                                          const StopRule& stop, long trials, long horizon,
                                          RngStream& rng, double w_ceiling,
                                          const TrialSink& sink) {
    if (pairs.empty()) throw std::invalid_argument("variable_length_stats: no start pairs");
    VariableLengthStats out;
    out.w_ceiling = w_ceiling;
    double worst_dt = 0.0, worst_dt_var = 0.0;
    for (size_t pi = 0; pi < pairs.size(); ++pi) {
        double sum_dt = 0.0, sumsq_dt = 0.0, sum_t = 0.0, maxw = 0.0;
        int d0 = vertex_hamming(pairs[pi].first, pairs[pi].second);
        for (long tr = 0; tr < trials; ++tr) {
            RngStream sub = rng.substream((0xabcdULL << 40) ^ (pi << 24) ^ static_cast<std::uint64_t>(tr));
            Config x = pairs[pi].first, y = pairs[pi].second;
            int dcur = d0;
            long t = 0;
            int w_trial = dcur;
            while (!stop(t, d0, dcur) && t < horizon) {
                std::tie(x, y) = cpl.step(x, y, sub);
                dcur = vertex_hamming(x, y);
                ++t;
                w_trial = std::max(w_trial, dcur);
            }
            if (t >= horizon && !stop(t, d0, dcur)) ++out.horizon_hits;
            sum_dt += dcur;
            sumsq_dt += static_cast<double>(dcur) * dcur;
            sum_t += t;
            maxw = std::max(maxw, static_cast<double>(w_trial));
            if (sink) sink(static_cast<int>(pi), tr, t, dcur, w_trial);
        }
        VariableLengthStats::PerPair pp{sum_dt / trials, sum_t / trials, maxw, trials};
        out.per_pair.push_back(pp);
        if (pp.mean_dT > worst_dt) {
            worst_dt = pp.mean_dT;
            // variance of the sample mean
            worst_dt_var = (sumsq_dt / trials - pp.mean_dT * pp.mean_dT) /
                           static_cast<double>(std::max<long>(1, trials - 1));
        }
        out.beta = std::max(out.beta, pp.mean_T);
        out.w_observed = std::max(out.w_observed, pp.max_w);
    }
    out.alpha = 1.0 - worst_dt;
    out.alpha_stderr = std::sqrt(std::max(0.0, worst_dt_var));
    out.contractive = out.alpha > 0.0;
    double w = std::max(out.w_observed, out.w_ceiling);
    if (out.contractive) out.m_steps = m_step_count(out.alpha, w, out.beta);
    return out;
}

long m_step_count(double alpha, double w, double beta) {
    if (alpha <= 0) return 0;
    return static_cast<long>(std::ceil(2.0 * beta * w / alpha));
}

} // namespace specind
