#include "specind/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specind {

Config glauber_resample(const Instance& inst, const Config& sigma, int v, double u01) {
    Vector cond = conditional_at(inst, sigma, v);
    Config next = sigma;
    double acc = 0.0;
    for (int c : inst.lists[v]) {
        acc += cond(c);
        if (u01 < acc) {
            next[v] = c;
            return next;
        }
    }
    next[v] = inst.lists[v].back(); // u01 landed in the rounding tail
    return next;
}

Config glauber_step(const Instance& inst, const Config& sigma, RngStream& rng) {
    if (!is_feasible(inst, sigma)) throw std::invalid_argument("glauber_step: infeasible state");
    int v = rng.next_int(inst.n());
    return glauber_resample(inst, sigma, v, rng.next_double());
}

Config flip_step(const Instance& inst, const Config& sigma, const FlipParameters& params,
                 RngStream& rng, int* flipped_size) {
    if (inst.kind != ModelKind::list_coloring)
        throw std::invalid_argument("flip_step: instance is not a list-coloring");
    if (flipped_size) *flipped_size = 0;
    int v = rng.next_int(inst.n());
    const auto& lv = inst.lists[v];
    int c = lv[rng.next_int(static_cast<int>(lv.size()))];
    double u = rng.next_double();
    FlipMove mv = flip_move(inst, sigma, v, c, params);
    if (!mv.result) return sigma;
    if (u < params.prob(mv.component_size) / mv.component_size) {
        if (flipped_size) *flipped_size = mv.component_size;
        return *mv.result;
    }
    return sigma;
}

Config down_up_step(const ExactDistribution& d, const Config& sigma, RngStream& rng) {
    if (d.lookup(sigma) < 0) throw std::invalid_argument("down_up_step: state not in support");
    const auto& active = d.active;
    int v = active[rng.next_int(static_cast<int>(active.size()))];
    // supersets of the remaining elements are exactly the support states that
    // agree off v; resample among them proportionally to probability
    Config cand = sigma;
    double total = 0.0;
    std::vector<std::pair<int, double>> options;
    for (int c : d.inst.lists[v]) {
        cand[v] = c;
        int t = d.lookup(cand);
        if (t >= 0) {
            options.emplace_back(c, d.probs(t));
            total += d.probs(t);
        }
    }
    double u = rng.next_double() * total;
    double acc = 0.0;
    Config next = sigma;
    for (auto [c, pr] : options) {
        acc += pr;
        if (u < acc) {
            next[v] = c;
            return next;
        }
    }
    next[v] = options.back().first;
    return next;
}

ChainTrace run_chain(const Stepper& step, const Config& start, long steps, long stride,
                     RngStream& rng) {
    if (steps < 0) throw std::invalid_argument("run_chain: negative step count");
    if (stride < 1) stride = 1;
    ChainTrace trace;
    Config cur = start;
    trace.times.push_back(0);
    trace.snapshots.push_back(cur);
    for (long t = 1; t <= steps; ++t) {
        cur = step(cur, rng);
        if (t % stride == 0 || t == steps) {
            trace.times.push_back(t);
            trace.snapshots.push_back(cur);
        }
    }
    trace.steps = steps;
    return trace;
}

Vector empirical_distribution(const ExactDistribution& d, const Stepper& step,
                              const Config& start, int t, int replicas, RngStream& rng) {
    Vector counts = Vector::Zero(d.size());
    for (int r = 0; r < replicas; ++r) {
        RngStream sub = rng.substream(r);
        Config cur = start;
        for (int i = 0; i < t; ++i) cur = step(cur, sub);
        int idx = d.lookup(cur);
        if (idx < 0) throw std::logic_error("empirical_distribution: walked outside the support");
        counts(idx) += 1.0;
    }
    return counts / replicas;
}

Vector one_step_frequencies(const ExactDistribution& d, const Stepper& step,
                            const Config& start, long samples, RngStream& rng) {
    Vector counts = Vector::Zero(d.size());
    for (long r = 0; r < samples; ++r) {
        RngStream sub = rng.substream(r);
        Config nxt = step(start, sub);
        int idx = d.lookup(nxt);
        if (idx < 0) throw std::logic_error("one_step_frequencies: stepped outside the support");
        counts(idx) += 1.0;
    }
    return counts;
}

namespace {

// regularized upper incomplete gamma Q(a, x)
double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) {
        // lower series
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        return 1.0 - p;
    }
    // continued fraction
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double chi_square_pvalue(const Vector& counts, const Vector& probs, double min_expected) {
    if (counts.size() != probs.size()) throw std::invalid_argument("chi_square: length mismatch");
    double total = counts.sum();
    double stat = 0.0;
    int cells = 0;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    for (int i = 0; i < counts.size(); ++i) {
        double expd = probs(i) * total;
        if (expd <= 0) {
            if (counts(i) > 0) return 0.0; // observed an impossible outcome
            continue;
        }
        if (expd < min_expected) {
            pooled_obs += counts(i);
            pooled_exp += expd;
            continue;
        }
        stat += (counts(i) - expd) * (counts(i) - expd) / expd;
        ++cells;
    }
    if (pooled_exp > 0) {
        stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++cells;
    }
    if (cells < 2) return 1.0;
    double df = cells - 1;
    return gamma_q(df / 2.0, stat / 2.0);
}

} // namespace specind
