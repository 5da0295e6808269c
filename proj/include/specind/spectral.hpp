#pragma once

#include "specind/kernels.hpp"

namespace specind {

struct SpectrumReport {
    double gap = 0.0;        // 1 - lambda_2
    double lambda2 = 0.0;    // second-largest eigenvalue
    double lambda_min = 0.0; // smallest eigenvalue
};

// Spectral gap of a reversible kernel via the stationary symmetrization.
SpectrumReport spectral_gap(const TransitionMatrix& p, double reversibility_tol = 1e-9);

struct MixingTimeResult {
    int t = 0;
    int worst_start = 0;
    double tv_at_t = 0.0;
};

// Smallest t with max_x d_TV(P^t(x,.), pi) <= eps, by matrix powering with
// doubling and binary search (worst-case TV is nonincreasing in t).
MixingTimeResult mixing_time_exact(const TransitionMatrix& p, double eps, int t_budget = 1 << 20);

struct ProductBound {
    double value = 0.0;
    bool all_factors_positive = true;
};

// (1/n) * prod_k (1 - eta_k / (n-k-1)); eta must have length n-1.
ProductBound local_to_global_bound(const std::vector<double>& eta, int n);

struct FunctionalReport {
    double dirichlet_ff = 0.0;     // E(f, f)
    double dirichlet_flogf = 0.0;  // E(f, log f), only when f >= 0
    double variance = 0.0;
    double entropy = 0.0;          // only when f >= 0
    double vf = 0.0;               // max_x sum_y P(x,y) (f(x)-f(y))^2
    bool nonnegative_f = false;
};

FunctionalReport functional_report(const TransitionMatrix& p, const Vector& f);

struct ConstantsEstimate {
    double gap = 0.0;           // exact
    double mlsi_upper = 0.0;    // upper bound on the modified log-Sobolev constant
    double lsi_upper = 0.0;     // upper bound on the standard log-Sobolev constant
    bool ordering_flag = true;  // 4*lsi <= mlsi <= 2*gap for the estimates (informational)
    // non-certified report values derived from the constants
    double tmix_bound_gap = 0.0;
    double tmix_bound_mlsi = 0.0;
    double tmix_bound_lsi = 0.0;
};

// Upper bounds on the log-Sobolev constants by minimizing the defining ratios
// over a pool of random, coordinate and eigenvector-derived test functions.
ConstantsEstimate estimate_constants(const TransitionMatrix& p, int pool_size, RngStream& rng,
                                     double eps = 0.25);

// Chernoff-type tail value exp(-const * t^2 / (2 v(f))) for a 1-Lipschitz f.
double chernoff_tail(double constant, double deviation, double vf);

} // namespace specind
