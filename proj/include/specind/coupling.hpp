#pragma once

#include <functional>
#include <memory>

#include "specind/kernels.hpp"
#include "specind/rng.hpp"
#include "specind/transport.hpp"

namespace specind {

// Exact law of one coupled move from a state pair.
struct JointMove {
    Config x, y;
    double prob;
};

// Markovian coupling of two faithful copies of a chain, defined directly on
// configurations so samplers work beyond enumerable supports.  joint_row is
// the exact one-step law; step samples from it.
class Coupling {
public:
    virtual ~Coupling() = default;
    virtual std::vector<JointMove> joint_row(const Config& x, const Config& y) const = 0;
    virtual std::string name() const = 0;
    virtual std::pair<Config, Config> step(const Config& x, const Config& y, RngStream& rng) const;
};

// Same-vertex choice, monotone maximal coupling of the two conditional laws.
// An explicit active list restricts the vertex choice (conditional chains).
class GlauberGreedyCoupling : public Coupling {
public:
    explicit GlauberGreedyCoupling(Instance inst, std::vector<int> active = {});
    std::vector<JointMove> joint_row(const Config& x, const Config& y) const override;
    std::pair<Config, Config> step(const Config& x, const Config& y, RngStream& rng) const override;
    std::string name() const override { return "glauber-greedy"; }

private:
    Instance inst_;
    std::vector<int> active_;
};

// Shared (vertex, color) draw and shared acceptance uniform; components are
// flipped jointly whenever both sides accept.
class FlipGreedyCoupling : public Coupling {
public:
    FlipGreedyCoupling(Instance inst, FlipParameters params)
        : inst_(std::move(inst)), params_(std::move(params)) {}
    std::vector<JointMove> joint_row(const Config& x, const Config& y) const override;
    std::pair<Config, Config> step(const Config& x, const Config& y, RngStream& rng) const override;
    std::string name() const override { return "flip-greedy(" + params_.preset + ")"; }

private:
    Instance inst_;
    FlipParameters params_;
};

using RowLaw = std::function<std::vector<std::pair<Config, double>>(const Config&)>;

RowLaw glauber_row_law(const Instance& inst);
RowLaw flip_row_law(const Instance& inst, const FlipParameters& params);

// Product coupling of two independent copies, made sticky by switching to the
// identity coupling on the diagonal.
class IndependentCoupling : public Coupling {
public:
    IndependentCoupling(RowLaw law, std::string name)
        : law_(std::move(law)), name_(std::move(name)) {}
    std::vector<JointMove> joint_row(const Config& x, const Config& y) const override;
    std::string name() const override { return "independent(" + name_ + ")"; }

private:
    RowLaw law_;
    std::string name_;
};

// Runs an inner coupling on the restricted instance, translating full
// configurations through the pinning (conditional flip chains).
class EmbeddedCoupling : public Coupling {
public:
    EmbeddedCoupling(Restriction restriction, std::shared_ptr<Coupling> inner)
        : r_(std::move(restriction)), inner_(std::move(inner)) {}
    std::vector<JointMove> joint_row(const Config& x, const Config& y) const override;
    std::string name() const override { return inner_->name() + "|pinned"; }

private:
    Config strip(const Config& full) const;
    Restriction r_;
    std::shared_ptr<Coupling> inner_;
};

// Explicit coupled kernel on ordered support pairs (index p = x * m + y).
struct JointKernel {
    int m = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;
    double marginal_error = 0.0; // worst row-marginal deviation from the base kernel
    double sticky_error = 0.0;   // mass leaving the diagonal
};

struct JointKernelCaps {
    int max_base_states = 2'500;
};

JointKernel joint_kernel(const Coupling& cpl, const ExactDistribution& d,
                         const TransitionMatrix& base, const JointKernelCaps& caps = {});

// Cumulative expected-distance vector g(x,y) = sum_t E[d(X_t, Y_t)] for the
// coupled chain, and the amortized constant C = max g / d.  Vertex metric.
struct AmortizedResult {
    bool convergent = false;
    std::string diagnosis;
    double C = 0.0;
    Vector g;               // length m*m, 0 on the diagonal
    double residual = 0.0;  // ||(I - Q_off) g - d||_inf
    std::string solver;
};

AmortizedResult amortized_constant_exact(const JointKernel& joint, const ExactDistribution& d);

// Truncated series sum_{t<T} Q_off^t d, a monotone lower bound on g.
Vector amortized_series_truncated(const JointKernel& joint, const ExactDistribution& d, int T);

// One-step contraction rate of the coupled kernel over off-diagonal pairs:
// alpha = 1 - max E[d(X', Y')]/d(x, y).
struct ContractionResult {
    double alpha = 0.0;
    double worst_ratio = 0.0;
    long pairs = 0;
};
ContractionResult one_step_contraction(const JointKernel& joint, const ExactDistribution& d);

// E[d(X', Y')] under the coupling from one explicit pair.
double coupling_expected_distance(const Coupling& cpl, const Config& x, const Config& y);

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    double tail_last_term = 0.0; // mean distance at the truncation horizon
};

// Truncated-sum Monte Carlo estimate of sum_t E[d] / d0, maximized over pairs.
struct AmortizedMcResult {
    double C = 0.0;
    double stderr_ = 0.0;
    double tail_flag = 0.0;
    std::vector<MonteCarloEstimate> per_pair;
};

AmortizedMcResult amortized_constant_mc(const Coupling& cpl,
                                        const std::vector<std::pair<Config, Config>>& pairs,
                                        long horizon, long trials, RngStream& rng);

// All support pairs at vertex distance one (both endpoints feasible), plus
// whether they connect the support.
struct AdjacentPairs {
    std::vector<std::pair<int, int>> pairs; // s < t
    bool connected = false;
};
AdjacentPairs adjacent_feasible_pairs(const ExactDistribution& d, long max_pairs = 1'000'000);

// Exact transport curvature over the given pairs: min 1 - W1(P(x,.), P(y,.))/d(x,y).
struct CurvatureResult {
    double alpha = 0.0;
    bool vacuous = false; // no pairs to check
    long pairs = 0;
    std::pair<int, int> argmin{-1, -1};
};

CurvatureResult ricci_curvature_optimal(const TransitionMatrix& p, const ExactDistribution& d,
                                        const std::vector<std::pair<int, int>>& pairs,
                                        const TransportCaps& caps = {});

// Curvature certified by a concrete coupling (lower bound on the optimal).
CurvatureResult ricci_curvature_coupled(const Coupling& cpl, const ExactDistribution& d,
                                        const std::vector<std::pair<int, int>>& pairs);

// Variable-length coupling statistics at a stopping time.
using StopRule = std::function<bool(long t, int d_start, int d_current)>;

StopRule stop_on_distance_change();
StopRule stop_at_time(long t);

struct VariableLengthStats {
    double alpha = 0.0;       // 1 - max_pair E[d at T] (unit-distance starts)
    double alpha_stderr = 0.0;
    double beta = 0.0;        // max_pair E[T]
    double w_observed = 0.0;  // max interim distance seen
    double w_ceiling = 0.0;   // a-priori bound reported alongside (flip: 13)
    long m_steps = 0;         // ceil(2 beta W / alpha), 0 if alpha <= 0
    long horizon_hits = 0;
    bool contractive = false;
    struct PerPair {
        double mean_dT, mean_T, max_w;
        long trials;
    };
    std::vector<PerPair> per_pair;
};

// Optional per-trial sink: (pair_id, trial, T, d_T, max interim distance).
using TrialSink = std::function<void(int, long, long, int, int)>;

VariableLengthStats variable_length_stats(const Coupling& cpl,
                                          const std::vector<std::pair<Config, Config>>& pairs,
                                          const StopRule& stop, long trials, long horizon,
                                          RngStream& rng, double w_ceiling = 0.0,
                                          const TrialSink& sink = nullptr);

long m_step_count(double alpha, double w, double beta);

} // namespace specind
