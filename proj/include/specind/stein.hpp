#pragma once

#include <memory>

#include "specind/certificate.hpp"
#include "specind/coupling.hpp"
#include "specind/influence.hpp"
#include "specind/spectral.hpp"

namespace specind {

struct PoissonSolution {
    Vector h;              // mean-zero solution of h - Ph = f - E f
    double residual = 0.0; // ||h - Ph - (f - E f)||_inf
    double mean = 0.0;     // pi^T h (should be ~0)
    double cond_estimate = 0.0;
};

// Factorizes (I - P + 1 pi^T) once; solve() per right-hand side.
class PoissonSolver {
public:
    explicit PoissonSolver(const TransitionMatrix& p);
    PoissonSolution solve(const Vector& f) const;

private:
    Matrix dense_;
    Vector pi_;
    Eigen::PartialPivLU<Matrix> lu_;
    double mnorm_ = 0.0;
};

PoissonSolution poisson_solve(const TransitionMatrix& p, const Vector& f);

// sum_j |Pr_mu[j in S] - Pr_nu[j in S]| over the shared universe.
double marginal_gap(const ExactDistribution& mu, const ExactDistribution& nu);

struct KernelDifferenceReport {
    std::vector<double> per_state; // D(S) for S in supp(nu), nu indexing
    double max = 0.0;
    double mean_under_nu = 0.0;
};

// D(S) = sum_{T != S} |P_mu(S->T) - P_nu(S->T)|, nu rows embedded by zeros.
// Requires supp(nu) within supp(mu).
KernelDifferenceReport kernel_difference(const TransitionMatrix& p_mu,
                                         const ExactDistribution& mu,
                                         const TransitionMatrix& p_nu,
                                         const ExactDistribution& nu);

// Flip chain of the conditional distribution (pinned vertices deleted, lists
// pruned), reindexed onto the conditioned states.
TransitionMatrix conditional_flip_kernel(const ExactDistribution& nu, const FlipParameters& params);

struct SteinBound {
    Certificate marginal;    // sum of marginal gaps vs the coupling bound
    Certificate wasserstein; // pair-set W1 vs the coupling bound
    double rhs = 0.0;
    bool applicable = false;
    std::string note;
};

// Bounds the marginal gap and W1(mu, nu) (pair-set metric) by the expected
// kernel-difference-weighted coupling sums.  g is the cumulative expected
// vertex-distance vector of a coupling of p_mu (see amortized_constant_exact);
// the pair-set series is 2 g.
SteinBound stein_bound(const ExactDistribution& mu, const TransitionMatrix& p_mu,
                       const ExactDistribution& nu, const TransitionMatrix& p_nu,
                       const AmortizedResult& am, double tolerance,
                       const TransportCaps& transport_caps = {});

// |E_nu f - E_mu f - E_nu (P_nu - P_mu) h| for h solving the Poisson equation.
double stein_identity_error(const ExactDistribution& mu, const TransitionMatrix& p_mu,
                            const ExactDistribution& nu, const TransitionMatrix& p_nu,
                            const PoissonSolver& solver, const Vector& f);

// max over S of ((P_nu - P_mu) h_j)(S) - sum_T |dP| 2 g(S,T), over indicator
// test functions h_j; positive values violate the entrywise bound.
double stein_entrywise_violation(const ExactDistribution& mu, const TransitionMatrix& p_mu,
                                 const ExactDistribution& nu, const TransitionMatrix& p_nu,
                                 const PoissonSolver& solver, const AmortizedResult& am);

// Row-sum bound on the conditional marginal shift: marginal_gap(mu, mu|i)
// <= C * ell * max_S D(S), one certificate per universe element.
struct SpecIndCertificate {
    Certificate cert;
    double C = 0.0;
    int ell_measured = 0;
    double max_row_diff = 0.0;
};

SpecIndCertificate verify_influence_row_bound(const ExactDistribution& mu,
                                              const TransitionMatrix& p_mu,
                                              const ExactDistribution& nu,
                                              const TransitionMatrix& p_nu,
                                              const AmortizedResult& am, int ell_set,
                                              double tolerance);

// One conditional chain of a family, with a coupling acting on full configs.
struct ConditionalChain {
    ExactDistribution dist;
    TransitionMatrix kernel;
    std::shared_ptr<Coupling> coupling;
};

using ChainFamily = std::function<ConditionalChain(const ExactDistribution& base, const PinSet&)>;

ChainFamily make_glauber_family();
ChainFamily make_flip_family(FlipParameters params);

struct BlackboxLevel {
    int k = 0;
    int pinnings = 0;
    double C = 0.0;       // worst amortized constant at this level
    double Cprime = 0.0;  // worst kernel-difference row sum
    int ell = 0;          // worst measured locality (pair-set metric)
    double eta_bound = 0.0;
    bool applicable = true;
    std::string note;
};

struct BlackboxBundle {
    std::vector<BlackboxLevel> levels;
    Certificate product_gate;  // max_k ell * C_k * C'_k <= const_bound
    Certificate gap_bound;     // exact gap >= product formula from eta bounds
    bool applicable = true;
    std::string note;
};

struct BlackboxCaps {
    JointKernelCaps joint;
    int max_pinnings = 20'000;
};

BlackboxBundle blackbox_certificate(const ExactDistribution& d, const ChainFamily& family,
                                    double const_bound, double tolerance,
                                    const BlackboxCaps& caps = {});

} // namespace specind
