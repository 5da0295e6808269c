// Command-line driver: exact enumeration reports, chain sampling, coupling
// experiments, inequality certification, and the full acceptance suite.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "specind/dynamics.hpp"
#include "specind/report.hpp"
#include "specind/suite.hpp"

using namespace specind;

namespace {

struct InstanceFlags {
    std::string graph;
    std::string graph_file;
    std::string lists_file;
    std::string model = "coloring";
    std::string model_file;
    int q = 0;
    double beta = 0.2;
    double lambda = 1.0;
};

void add_instance_flags(CLI::App* app, InstanceFlags& f) {
    app->add_option("--graph", f.graph, "named graph (triangle, path4, cycle6, complete5, grid2x3, empty3, rr6x3)");
    app->add_option("--graph-file", f.graph_file, "graph file: 'n m' then edge lines");
    app->add_option("--lists-file", f.lists_file, "color lists file: 'v: c1 c2 ...'");
    app->add_option("--model", f.model, "coloring|ising|hardcore|custom")
        ->check(CLI::IsMember({"coloring", "ising", "hardcore", "custom"}));
    app->add_option("--model-file", f.model_file, "spin-system JSON (keys q, A row-major, h)");
    app->add_option("--q", f.q, "number of colors/spins")->check(CLI::PositiveNumber);
    app->add_option("--beta", f.beta, "Ising inverse temperature");
    app->add_option("--lambda", f.lambda, "hardcore fugacity")->check(CLI::PositiveNumber);
}

Instance build_instance(const InstanceFlags& f, std::uint64_t seed) {
    Graph g;
    if (!f.graph_file.empty()) g = read_graph_file(f.graph_file);
    else if (!f.graph.empty()) g = graph_from_name(f.graph, seed);
    else throw CLI::ValidationError("--graph or --graph-file is required");

    if (f.model == "coloring") {
        if (f.q < 1) throw CLI::ValidationError("--q is required for colorings");
        if (!f.lists_file.empty())
            return make_list_coloring(g, read_lists_file(f.lists_file, g.n), f.q);
        return make_coloring(g, f.q);
    }
    if (f.model == "ising") return make_ising(g, f.beta);
    if (f.model == "hardcore") return make_hardcore(g, f.lambda);
    if (f.model == "custom") {
        if (f.model_file.empty()) throw CLI::ValidationError("--model-file is required for custom");
        return read_spin_system_json(f.model_file, g);
    }
    throw CLI::ValidationError("unknown model " + f.model);
}

Json flags_to_json(const InstanceFlags& f, std::uint64_t seed) {
    Json j;
    j["graph"] = f.graph.empty() ? f.graph_file : f.graph;
    j["model"] = f.model;
    if (f.q) j["q"] = f.q;
    if (f.model == "ising") j["beta"] = f.beta;
    if (f.model == "hardcore") j["lambda"] = f.lambda;
    if (!f.lists_file.empty()) j["lists_file"] = f.lists_file;
    if (!f.model_file.empty()) j["model_file"] = f.model_file;
    j["seed"] = seed;
    return j;
}

void emit(const ReportRecord& rec, const std::string& out_path) {
    std::string text = rec.to_json().dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else write_text_file(out_path, text);
}

std::string config_string(const Config& c) {
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
    return s;
}

int certificates_exit(const std::vector<Certificate>& certs) {
    for (const auto& c : certs)
        if (c.status == CertStatus::fail) return 1;
    return 0;
}

Json certs_json(const std::vector<Certificate>& certs) {
    Json arr = Json::array();
    for (const auto& c : certs) arr.push_back(certificate_to_json(c));
    return arr;
}

// ---------------------------------------------------------------------------

int cmd_exact(const InstanceFlags& f, std::uint64_t seed, double tolerance, int max_support,
              const std::string& out) {
    Instance inst = build_instance(f, seed);
    EnumerationCaps caps;
    caps.max_support = max_support;
    ExactDistribution d = enumerate_distribution(inst, caps);
    Json payload;
    payload["instance"] = instance_digest(inst);
    payload["Z"] = d.Z;
    payload["support_size"] = d.size();
    Vector marg = marginal_vector(d);
    payload["marginals"] = std::vector<double>(marg.data(), marg.data() + marg.size());

    InfluenceReport inf = influence_matrix(d);
    payload["influence_infnorm"] = inf.infnorm;
    payload["lambda_max"] = inf.lambda_max;
    payload["lambda_max_zero_diag"] = inf.lambda_max_zero_diag;
    try {
        auto sir = spectral_independence(d);
        payload["eta"] = sir.eta;
    } catch (const CapExceeded& e) {
        payload["eta"] = nullptr;
        payload["notes"].push_back(std::string("eta skipped: ") + e.what());
    }
    auto dob = dobrushin_matrix(inst);
    payload["rho_gamma"] = dob.gamma;
    if (d.size() <= 1500) {
        TransitionMatrix P = glauber_kernel(d);
        payload["gap"] = spectral_gap(P).gap;
        try {
            payload["tmix"] = mixing_time_exact(P, 0.25, 1 << 16).t;
        } catch (const std::exception& e) {
            payload["tmix"] = nullptr;
            payload["notes"].push_back(std::string("tmix: ") + e.what());
        }
    } else {
        payload["gap"] = nullptr;
        payload["tmix"] = nullptr;
        payload["notes"].push_back("support too large for dense spectra");
    }
    Json cfg = flags_to_json(f, seed);
    cfg["command"] = "exact";
    cfg["tolerance"] = tolerance;
    emit(make_record(cfg, payload, 0), out);
    return 0;
}

int cmd_sample(const InstanceFlags& f, const std::string& chain, const std::string& preset,
               long steps, long stride, std::uint64_t seed, const std::string& out) {
    Instance inst = build_instance(f, seed);
    ExactDistribution d = enumerate_distribution(inst);
    RngStream rng(seed, 7);
    Config start = d.support[0];
    ChainTrace trace;
    FlipParameters fp = FlipParameters::from_name(preset);
    if (chain == "glauber") {
        trace = run_chain([&](const Config& c, RngStream& r) { return glauber_step(inst, c, r); },
                          start, steps, stride, rng);
    } else if (chain == "downup") {
        trace = run_chain([&](const Config& c, RngStream& r) { return down_up_step(d, c, r); },
                          start, steps, stride, rng);
    } else if (chain == "flip") {
        std::array<long, 7>* stats = &trace.flips_by_size;
        trace = run_chain(
            [&inst, &fp, stats](const Config& c, RngStream& r) {
                int js = 0;
                Config nxt = flip_step(inst, c, fp, r, &js);
                if (js >= 1 && js <= 6) ++(*stats)[js];
                return nxt;
            },
            start, steps, stride, rng);
    } else {
        throw CLI::ValidationError("--chain must be glauber|flip|downup");
    }

    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < trace.times.size(); ++i)
        rows.push_back({std::to_string(trace.times[i]), config_string(trace.snapshots[i])});
    std::string base = out.empty() ? "sample" : out;
    write_csv(base + ".trace.csv", {"t", "assignment"}, rows);

    // long-run occupation vs the exact distribution
    Vector occupation = Vector::Zero(d.size());
    for (const auto& snap : trace.snapshots) occupation(d.lookup(snap)) += 1.0;
    occupation /= static_cast<double>(trace.snapshots.size());

    Json payload;
    payload["steps"] = steps;
    payload["stride"] = stride;
    payload["tv_occupation_vs_exact"] = tv_distance(occupation, d.probs);
    Json moves;
    for (int j = 1; j <= 6; ++j) moves[std::to_string(j)] = trace.flips_by_size[j];
    payload["flips_by_component_size"] = moves;
    Json cfg = flags_to_json(f, seed);
    cfg["command"] = "sample";
    cfg["chain"] = chain;
    cfg["steps"] = steps;
    cfg["stride"] = stride;
    emit(make_record(cfg, std::move(payload), 0), out.empty() ? "" : out + ".json");
    return 0;
}

int cmd_couple(const InstanceFlags& f, const std::string& chain, const std::string& coupling_kind,
               const std::string& preset, long trials, long horizon, std::uint64_t seed,
               int joint_cap, const std::string& out) {
    Instance inst = build_instance(f, seed);
    ExactDistribution d = enumerate_distribution(inst);
    FlipParameters fp = FlipParameters::from_name(preset);

    std::unique_ptr<Coupling> cpl;
    TransitionMatrix base;
    if (chain == "glauber") {
        base = glauber_kernel(d);
        if (coupling_kind == "greedy") cpl = std::make_unique<GlauberGreedyCoupling>(inst);
        else cpl = std::make_unique<IndependentCoupling>(glauber_row_law(inst), "glauber");
    } else if (chain == "flip") {
        base = flip_kernel(d, fp);
        if (coupling_kind == "greedy") cpl = std::make_unique<FlipGreedyCoupling>(inst, fp);
        else cpl = std::make_unique<IndependentCoupling>(flip_row_law(inst, fp), "flip");
    } else {
        throw CLI::ValidationError("--chain must be glauber|flip for coupling runs");
    }

    auto adj = adjacent_feasible_pairs(d);
    std::vector<std::pair<Config, Config>> pairs;
    for (size_t i = 0; i < adj.pairs.size() && pairs.size() < 8;
         i += std::max<size_t>(1, adj.pairs.size() / 8))
        pairs.emplace_back(d.support[adj.pairs[i].first], d.support[adj.pairs[i].second]);
    if (pairs.empty()) throw std::runtime_error("couple: no adjacent feasible pairs");

    std::vector<std::vector<std::string>> rows;
    RngStream rng(seed, 11);
    double wceil = chain == "flip" ? kFlipW : 0.0;
    auto stats = variable_length_stats(
        *cpl, pairs, stop_on_distance_change(), trials, horizon, rng, wceil,
        [&rows](int pair_id, long trial, long t, int d_t, int w) {
            rows.push_back({std::to_string(pair_id), std::to_string(trial), std::to_string(t),
                            std::to_string(d_t), std::to_string(w)});
        });

    Json payload;
    payload["alpha"] = stats.alpha;
    payload["alpha_stderr"] = stats.alpha_stderr;
    payload["alpha_reference"] =
        inst.kind == ModelKind::list_coloring && chain == "flip"
            ? Json(reference_alpha(inst.q, inst.graph.max_degree))
            : Json(nullptr);
    payload["W"] = stats.w_observed;
    payload["W_ceiling"] = stats.w_ceiling;
    payload["beta"] = stats.beta;
    payload["M"] = stats.m_steps;
    payload["horizon_hits"] = stats.horizon_hits;

    // exact quantities when the joint kernel fits
    if (d.size() <= joint_cap) {
        JointKernel jk = joint_kernel(*cpl, d, base, {joint_cap});
        payload["marginal_error"] = jk.marginal_error;
        auto am = amortized_constant_exact(jk, d);
        payload["C_exact"] = am.convergent ? Json(am.C) : Json(nullptr);
        if (!am.convergent) payload["C_diagnosis"] = am.diagnosis;
        auto ct = one_step_contraction(jk, d);
        payload["alpha_one_step"] = ct.alpha;
        auto cr = ricci_curvature_optimal(base, d, adj.pairs);
        payload["alpha_transport"] = cr.vacuous ? Json(nullptr) : Json(cr.alpha);
        RngStream r2(seed, 13);
        auto mc = amortized_constant_mc(*cpl, pairs, horizon, std::max(1L, trials / 10), r2);
        payload["C_mc"] = mc.C;
        payload["C_mc_stderr"] = mc.stderr_;
        payload["C_mc_tail"] = mc.tail_flag;
    }
    if (stats.contractive && stats.m_steps > 0) {
        RngStream r3(seed, 17);
        long mtrials = std::max(1L, trials / 10);
        double worst = 0.0;
        for (auto& [x, y] : pairs) {
            double sum = 0.0;
            for (long tr = 0; tr < mtrials; ++tr) {
                RngStream sub = r3.substream(tr);
                Config a = x, b = y;
                for (long t = 0; t < stats.m_steps; ++t) std::tie(a, b) = cpl->step(a, b, sub);
                sum += vertex_hamming(a, b);
            }
            worst = std::max(worst, sum / mtrials / vertex_hamming(x, y));
        }
        payload["m_step_contraction"] = worst;
        payload["m_step_target"] = 1.0 - stats.alpha / 2.0;
    }

    std::string base_path = out.empty() ? "couple" : out;
    write_csv(base_path + ".trials.csv", {"pair_id", "trial", "T", "d_T", "W_observed"}, rows);
    Json cfg = flags_to_json(f, seed);
    cfg["command"] = "couple";
    cfg["chain"] = chain;
    cfg["coupling"] = coupling_kind;
    cfg["preset"] = preset;
    cfg["trials"] = trials;
    cfg["horizon"] = horizon;
    emit(make_record(cfg, std::move(payload), 0), out.empty() ? "" : out + ".json");
    return 0;
}

int cmd_verify(const std::string& kind, const InstanceFlags& f, const std::string& chain,
               const std::string& preset, double tolerance, double const_bound,
               std::uint64_t seed, int joint_cap, const std::string& out) {
    Instance inst = build_instance(f, seed);
    ExactDistribution d = enumerate_distribution(inst);
    std::vector<Certificate> certs;
    Json extra;

    if (kind == "stein") {
        TransitionMatrix P = chain == "flip" ? flip_kernel(d, FlipParameters::from_name(preset))
                                             : glauber_kernel(d);
        std::unique_ptr<Coupling> cpl;
        if (chain == "flip")
            cpl = std::make_unique<FlipGreedyCoupling>(inst, FlipParameters::from_name(preset));
        else
            cpl = std::make_unique<GlauberGreedyCoupling>(inst);
        JointKernel jk = joint_kernel(*cpl, d, P, {joint_cap});
        auto am = amortized_constant_exact(jk, d);
        int ell = measured_locality(P, d.support);
        for (int i = 0; i < d.uni.size(); ++i) {
            auto [v, c] = d.uni.elements[i];
            ExactDistribution nu;
            try {
                nu = condition(d, PinSet::of({{v, c}}));
            } catch (const InfeasiblePinning&) {
                continue;
            }
            TransitionMatrix pnu = chain == "flip"
                                       ? conditional_flip_kernel(nu, FlipParameters::from_name(preset))
                                       : glauber_kernel(nu);
            auto sb = stein_bound(d, P, nu, pnu, am, tolerance);
            certs.push_back(sb.marginal);
            certs.push_back(sb.wasserstein);
            auto row = verify_influence_row_bound(d, P, nu, pnu, am, ell, tolerance);
            certs.push_back(row.cert);
        }
        extra["C_exact"] = am.convergent ? Json(am.C) : Json(am.diagnosis);
        extra["ell_measured"] = ell;
    } else if (kind == "blackbox") {
        ChainFamily family = chain == "flip" ? make_flip_family(FlipParameters::from_name(preset))
                                             : make_glauber_family();
        auto bundle = blackbox_certificate(d, family, const_bound, tolerance, {{joint_cap}, 20000});
        certs.push_back(bundle.product_gate);
        certs.push_back(bundle.gap_bound);
        Json lv = Json::array();
        for (auto& l : bundle.levels)
            lv.push_back({{"k", l.k},
                          {"pinnings", l.pinnings},
                          {"C", l.C},
                          {"Cprime", l.Cprime},
                          {"ell", l.ell},
                          {"eta_bound", l.eta_bound},
                          {"applicable", l.applicable}});
        extra["levels"] = std::move(lv);
    } else if (kind == "dobrushin") {
        auto dob = dobrushin_matrix(inst);
        extra["gamma"] = dob.gamma;
        TransitionMatrix P = glauber_kernel(d);
        auto adj = adjacent_feasible_pairs(d);
        if (dob.gamma < 1.0 && !adj.pairs.empty()) {
            auto cr = ricci_curvature_optimal(P, d, adj.pairs);
            certs.push_back(Certificate::make("glauber-curvature-vs-dobrushin",
                                              (1.0 - dob.gamma) / d.inst.n(), cr.alpha, tolerance,
                                              "exact", instance_digest(inst)));
            auto inf = influence_matrix(d);
            certs.push_back(Certificate::make("influence-lmax-vs-dobrushin", inf.lambda_max,
                                              4.0 / (1.0 - dob.gamma), tolerance, "exact",
                                              instance_digest(inst)));
        } else {
            Certificate c;
            c.id = "dobrushin-consequences";
            c.status = CertStatus::skip;
            c.instance = instance_digest(inst);
            c.note = dob.gamma >= 1.0 ? "gamma >= 1" : "no adjacent pairs";
            certs.push_back(c);
        }
    } else if (kind == "ltg") {
        auto sir = spectral_independence(d);
        std::vector<double> eta = sir.eta;
        for (double& e : eta) e = std::max(e, 0.0);
        double bound = d.inst.n() >= 2 ? local_to_global_bound(eta, d.inst.n()).value : 1.0;
        double gap = spectral_gap(down_up_kernel(d)).gap;
        certs.push_back(Certificate::make("gap-vs-influence-product-bound", bound, gap, tolerance,
                                          "exact", instance_digest(inst)));
        extra["eta"] = sir.eta;
    } else if (kind == "fliplemmas") {
        if (inst.kind != ModelKind::list_coloring)
            throw CLI::ValidationError("fliplemmas requires a coloring instance");
        for (auto fp : {FlipParameters::vigoda(), FlipParameters::cdmpp()}) {
            TransitionMatrix F = flip_kernel(d, fp);
            double err = std::max({F.max_row_sum_error(), F.stationarity_error(),
                                   F.detailed_balance_error()});
            certs.push_back(Certificate::make("flip-uniform-reversible-" + fp.preset, err, 0.0,
                                              1e-12, "exact", instance_digest(inst)));
            double worst = -1e300;
            for (int u = 0; u < inst.n(); ++u) {
                double bound = (static_cast<double>(ball(inst.graph, u, 6).size()) + 1.0) / inst.n();
                for (int c : inst.lists[u]) {
                    ExactDistribution nu;
                    try {
                        nu = condition(d, PinSet::of({{u, c}}));
                    } catch (const InfeasiblePinning&) {
                        continue;
                    }
                    auto kd = kernel_difference(F, d, conditional_flip_kernel(nu, fp), nu);
                    worst = std::max(worst, kd.max - bound);
                }
            }
            certs.push_back(Certificate::make("flip-rowdiff-ball-bound-" + fp.preset, worst, 0.0,
                                              1e-12, "exact", instance_digest(inst)));
        }
        // amortized constant growth report on paths (C/n across sizes)
        Json ratio = Json::array();
        for (int pn = 2; pn <= 5; ++pn) {
            Instance pinst = make_coloring(make_path(pn), 4);
            ExactDistribution pd = enumerate_distribution(pinst);
            if (pd.size() > joint_cap) break;
            FlipGreedyCoupling pc(pinst, FlipParameters::cdmpp());
            auto am = amortized_constant_exact(
                joint_kernel(pc, pd, flip_kernel(pd, FlipParameters::cdmpp()), {joint_cap}), pd);
            if (am.convergent)
                ratio.push_back({{"n", pn}, {"C", am.C}, {"C_over_n", am.C / pn}});
        }
        extra["path_amortized_ratio"] = std::move(ratio);
    } else {
        throw CLI::ValidationError("verify kind must be stein|blackbox|dobrushin|ltg|fliplemmas");
    }

    Json payload;
    payload["certificates"] = certs_json(certs);
    if (!extra.empty()) payload["detail"] = std::move(extra);
    Json cfg = flags_to_json(f, seed);
    cfg["command"] = "verify " + kind;
    cfg["tolerance"] = tolerance;
    cfg["chain"] = chain;
    int status = certificates_exit(certs);
    emit(make_record(cfg, std::move(payload), status), out);
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact certification of sampling-chain inequalities on small instances"};
    app.set_config("--config");
    app.require_subcommand(1);

    InstanceFlags flags;
    std::uint64_t seed = 1;
    std::string out, format = "json", chain = "glauber", coupling_kind = "greedy",
                preset = "vigoda";
    long trials = 1000, horizon = 100000, steps = 10000, stride = 1;
    double tolerance = 1e-9, const_bound = 4.0;
    int max_n = 5, joint_cap = 400, max_support = 50000, threads = 0;

    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out, "output path (default: stdout)");
    app.add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--tolerance", tolerance, "certificate tolerance");

    auto* exact = app.add_subcommand("exact", "enumerate and report exact quantities");
    add_instance_flags(exact, flags);
    exact->add_option("--max-support", max_support);

    auto* sample = app.add_subcommand("sample", "run a chain and dump a trace");
    add_instance_flags(sample, flags);
    sample->add_option("--chain", chain)->check(CLI::IsMember({"glauber", "flip", "downup"}));
    sample->add_option("--preset", preset);
    sample->add_option("--steps", steps);
    sample->add_option("--stride", stride);

    auto* couple = app.add_subcommand("couple", "coupling statistics and contraction");
    add_instance_flags(couple, flags);
    couple->add_option("--chain", chain)->check(CLI::IsMember({"glauber", "flip"}));
    couple->add_option("--coupling", coupling_kind)->check(CLI::IsMember({"greedy", "independent"}));
    couple->add_option("--preset", preset);
    couple->add_option("--trials", trials);
    couple->add_option("--horizon", horizon);
    couple->add_option("--cap-joint", joint_cap);

    auto* verify = app.add_subcommand("verify", "certify inequalities");
    std::string kind;
    verify->add_option("kind", kind, "stein|blackbox|dobrushin|ltg|fliplemmas")->required();
    add_instance_flags(verify, flags);
    verify->add_option("--chain", chain)->check(CLI::IsMember({"glauber", "flip"}));
    verify->add_option("--preset", preset);
    verify->add_option("--const-bound", const_bound);
    verify->add_option("--cap-joint", joint_cap);

    auto* suite = app.add_subcommand("suite", "run the acceptance suite");
    suite->add_option("--max-n", max_n);
    suite->add_option("--threads", threads);
    suite->add_option("--cap-joint", joint_cap);

    CLI11_PARSE(app, argc, argv);

    try {
        if (exact->parsed()) return cmd_exact(flags, seed, tolerance, max_support, out);
        if (sample->parsed()) return cmd_sample(flags, chain, preset, steps, stride, seed, out);
        if (couple->parsed())
            return cmd_couple(flags, chain, coupling_kind, preset, trials, horizon, seed,
                              joint_cap, out);
        if (verify->parsed())
            return cmd_verify(kind, flags, chain, preset, tolerance, const_bound, seed, joint_cap,
                              out);
        if (suite->parsed()) {
            SuiteOptions so;
            so.max_n = max_n;
            so.seed = seed;
            so.threads = threads;
            so.joint_cap = joint_cap;
            auto res = run_suite(so);
            int status = print_suite(res, std::cout);
            if (!out.empty()) write_text_file(out, res.report.dump(2) + "\n");
            return status;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
