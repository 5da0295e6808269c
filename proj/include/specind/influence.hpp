#pragma once

#include "specind/distribution.hpp"

namespace specind {

struct InfluenceOptions {
    // Keep the literal value Pr[i in S | i in S] - Pr[i in S] = 1 - Pr[i] on
    // the diagonal.  This is the convention under which lambda_max - 1 feeds
    // the product-formula gap bound; the zeroed variant is reported alongside.
    bool literal_diagonal = true;
    // Zero the influence between two values of the same vertex (alternative
    // convention; the literal entries are -Pr[j]).
    bool exclude_same_site = false;
};

struct InfluenceReport {
    Matrix influence;          // |U| x |U|, rows/cols of zero-probability elements are 0
    std::vector<int> live;     // universe indices with positive marginal (and unpinned vertex)
    double lambda_max = 0.0;   // top eigenvalue on the live submatrix
    double max_imag = 0.0;     // largest |imaginary part| seen in the eigensolve
    double infnorm = 0.0;      // max absolute row sum over live rows
    double lambda_max_zero_diag = 0.0; // same with the diagonal zeroed
};

// Pairwise influence from the explicit support (conditionals by filtering).
InfluenceReport influence_matrix(const ExactDistribution& d, const InfluenceOptions& opts = {});

// Independent oracle: recomputes every conditional by re-enumerating the
// pinned instance from scratch.  Same indexing as influence_matrix.
Matrix influence_matrix_reenum(const ExactDistribution& d, const InfluenceOptions& opts = {});

struct SpectralIndependenceReport {
    std::vector<double> eta;           // levels 0..n-2, max over feasible pinnings
    std::vector<int> pinnings;         // count of feasible pinnings per level
    std::vector<double> infnorm_bound; // max row-sum bound per level
    double max_imag = 0.0;
};

struct SpectralIndependenceCaps {
    std::uint64_t max_pinnings_total = 500'000;
};

SpectralIndependenceReport spectral_independence(const ExactDistribution& d,
                                                 const InfluenceOptions& opts = {},
                                                 const SpectralIndependenceCaps& caps = {});

// All pin sets of size k realized by some support configuration.
std::vector<PinSet> feasible_pinnings(const ExactDistribution& d, int k);

struct DobrushinReport {
    Matrix rho;   // n x n, zero diagonal
    double gamma; // max row sum
};

struct DobrushinCaps {
    std::uint64_t max_contexts = 4'000'000;
};

// Worst-case total-variation influence of u's value on v's conditional law,
// maximized over feasible contexts.  Only neighbor pairs can be nonzero for a
// pairwise system; full_scan computes every pair anyway (for tests).
DobrushinReport dobrushin_matrix(const Instance& inst, const DobrushinCaps& caps = {},
                                 bool full_scan = false);

// Top eigenvalue of a real matrix asserted to have a real spectrum.
struct TopEigen {
    double value;
    double max_imag;
};
TopEigen top_eigenvalue(const Matrix& m);

} // namespace specind
