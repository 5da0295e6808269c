#pragma once

#include <iosfwd>

#include "specind/report.hpp"
#include "specind/stein.hpp"

namespace specind {

struct SuiteOptions {
    int max_n = 5;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = SPECIND_THREADS env or hardware concurrency
    EnumerationCaps enum_caps{20'000'000, 50'000};
    int eig_cap = 1'500;        // dense eigensolves and Poisson factorizations
    int joint_cap = 400;        // base states for exact coupled-kernel solves
    long transport_cap = 5'000; // joint entries for full-distribution W1
    long pair_cap = 120'000;    // adjacent pairs for transport curvature
    std::uint64_t pinning_cap = 500'000;
    int poisson_fns = 100;
    int identity_fns = 20;
    long chi2_samples = 1'000'000;
    long mc_trials = 100'000;
    long tv_replicas = 100'000;
    bool with_determinism_check = true; // criterion: rerun a reduced grid and compare bytes
    bool with_sampler_checks = true;
};

struct NamedInstance {
    Instance inst;
    std::string name;
    bool sampler_glauber = false;
    bool sampler_downup = false;
    bool sampler_flip = false;
    bool sampler_tv = false;
    bool product_mc = false; // product instance with known amortized constant
};

std::vector<NamedInstance> default_suite_instances(int max_n, std::uint64_t seed);

struct CriterionOutcome {
    std::string id;
    std::string description;
    int passed = 0;
    int failed = 0;
    int skipped = 0;
    int inapplicable = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double elapsed_seconds = 0.0;
    std::vector<std::string> failures;
    std::vector<std::string> skips;

    bool ok() const { return failed == 0 && passed > 0; }
};

struct SuiteResult {
    std::vector<CriterionOutcome> criteria;
    Json report;
    double wall_seconds = 0.0;
    bool all_pass = false;
    long certificates = 0;
};

SuiteResult run_suite(const SuiteOptions& opts);

// One line per criterion plus a summary line; returns process exit status.
int print_suite(const SuiteResult& res, std::ostream& os);

int suite_thread_count(int requested);

} // namespace specind
