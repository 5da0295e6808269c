#include "specind/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace specind {

SpectrumReport spectral_gap(const TransitionMatrix& p, double reversibility_tol) {
    if (p.detailed_balance_error() > reversibility_tol)
        throw std::invalid_argument("spectral_gap: kernel is not reversible w.r.t. its stationary vector");
    if (p.size == 1) return {1.0, 0.0, 1.0};
    // D^{1/2} P D^{-1/2} is symmetric for reversible P
    Vector sq = p.stationary.cwiseSqrt();
    Matrix sym = Matrix::Zero(p.size, p.size);
    for (int s = 0; s < p.size; ++s)
        for (auto [t, pr] : p.rows[s])
            if (sq(t) > 0) sym(s, t) += pr * sq(s) / sq(t);
    sym = 0.5 * (sym + sym.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_gap: eigensolver failed");
    const auto& ev = es.eigenvalues(); // ascending
    SpectrumReport rep;
    rep.lambda_min = ev(0);
    rep.lambda2 = ev(p.size - 2);
    rep.gap = 1.0 - rep.lambda2;
    return rep;
}

MixingTimeResult mixing_time_exact(const TransitionMatrix& p, double eps, int t_budget) {
    if (!p.irreducible()) throw std::invalid_argument("mixing_time_exact: kernel is reducible");
    if (p.period() != 1) throw std::invalid_argument("mixing_time_exact: kernel is periodic");
    const int m = p.size;
    Matrix base = p.dense();
    auto worst_tv = [&](const Matrix& pt, int* arg) {
        double worst = 0.0;
        int w = 0;
        for (int x = 0; x < m; ++x) {
            double tv = 0.5 * (pt.row(x).transpose() - p.stationary).lpNorm<1>();
            if (tv > worst) { worst = tv; w = x; }
        }
        if (arg) *arg = w;
        return worst;
    };

    if (m == 1) return {0, 0, 0.0};
    {
        int arg;
        Matrix id = Matrix::Identity(m, m);
        double tv0 = worst_tv(id, &arg);
        if (tv0 <= eps) return {0, arg, tv0};
    }

    // worst-case TV is nonincreasing in t: bracket by squaring, then binary
    // search, assembling P^t from the stored dyadic powers
    std::vector<Matrix> pow2{base}; // pow2[k] = P^(2^k)
    int hi = 1;
    while (worst_tv(pow2.back(), nullptr) > eps) {
        if (2 * hi > t_budget)
            throw std::runtime_error("mixing_time_exact: budget exceeded before reaching target TV");
        pow2.push_back(pow2.back() * pow2.back());
        hi *= 2;
    }
    auto power = [&](int t) {
        Matrix out = Matrix::Identity(m, m);
        for (size_t k = 0; k < pow2.size(); ++k)
            if (t >> k & 1) out = out * pow2[k];
        return out;
    };
    int lo = hi / 2; // worst TV at lo is > eps, at hi is <= eps
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        if (worst_tv(power(mid), nullptr) > eps) lo = mid; else hi = mid;
    }
    int arg = 0;
    double tv = worst_tv(power(hi), &arg);
    return {hi, arg, tv};
}

ProductBound local_to_global_bound(const std::vector<double>& eta, int n) {
    if (static_cast<int>(eta.size()) != n - 1)
        throw std::invalid_argument("local_to_global_bound: eta must have length n-1");
    ProductBound b;
    double prod = 1.0 / n;
    for (int k = 0; k + 2 <= n; ++k) {
        double factor = 1.0 - eta[k] / (n - k - 1);
        if (factor <= 0.0) b.all_factors_positive = false;
        prod *= factor;
    }
    b.value = prod;
    return b;
}

FunctionalReport functional_report(const TransitionMatrix& p, const Vector& f) {
    if (f.size() != p.size) throw std::invalid_argument("functional_report: length mismatch");
    if (!f.allFinite()) throw std::invalid_argument("functional_report: f must be finite");
    FunctionalReport rep;
    const Vector& pi = p.stationary;
    Vector pf = Vector::Zero(p.size);
    for (int s = 0; s < p.size; ++s)
        for (auto [t, pr] : p.rows[s]) pf(s) += pr * f(t);
    rep.dirichlet_ff = pi.dot(f.cwiseProduct(f - pf));
    double ef = pi.dot(f);
    rep.variance = pi.dot(f.cwiseProduct(f)) - ef * ef;
    for (int s = 0; s < p.size; ++s) {
        double vx = 0.0;
        for (auto [t, pr] : p.rows[s]) vx += pr * (f(s) - f(t)) * (f(s) - f(t));
        rep.vf = std::max(rep.vf, vx);
    }
    rep.nonnegative_f = (f.array() >= 0).all();
    if (rep.nonnegative_f) {
        auto xlogx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
        Vector logf(p.size);
        for (int s = 0; s < p.size; ++s) logf(s) = f(s) > 0 ? std::log(f(s)) : 0.0;
        // E(f, log f) with the 0 log 0 = 0 convention
        Vector plogf = Vector::Zero(p.size);
        for (int s = 0; s < p.size; ++s)
            for (auto [t, pr] : p.rows[s]) plogf(s) += pr * logf(t);
        rep.dirichlet_flogf = pi.dot(f.cwiseProduct(logf - plogf));
        double eflogf = 0.0;
        for (int s = 0; s < p.size; ++s) eflogf += pi(s) * xlogx(f(s));
        rep.entropy = eflogf - xlogx(ef);
    }
    return rep;
}

ConstantsEstimate estimate_constants(const TransitionMatrix& p, int pool_size, RngStream& rng,
                                     double eps) {
    ConstantsEstimate est;
    est.gap = spectral_gap(p).gap;
    est.mlsi_upper = std::numeric_limits<double>::infinity();
    est.lsi_upper = std::numeric_limits<double>::infinity();

    auto consider = [&](const Vector& f) {
        if ((f.array() < 0).any()) return;
        FunctionalReport fr = functional_report(p, f);
        if (fr.entropy > 1e-13) {
            est.mlsi_upper = std::min(est.mlsi_upper, fr.dirichlet_flogf / fr.entropy);
            Vector sq = f.cwiseSqrt();
            FunctionalReport fs = functional_report(p, sq);
            est.lsi_upper = std::min(est.lsi_upper, fs.dirichlet_ff / fr.entropy);
        }
    };

    for (int k = 0; k < pool_size; ++k) {
        Vector f(p.size);
        for (int s = 0; s < p.size; ++s) f(s) = std::exp(2.0 * rng.next_double() - 1.0);
        consider(f);
    }
    for (int s = 0; s < std::min(p.size, 64); ++s) {
        Vector f = Vector::Constant(p.size, 0.05);
        f(s) = 1.0;
        consider(f);
    }
    if (p.size >= 2) {
        // second eigenvector of the symmetrized kernel, shifted positive
        Vector sq = p.stationary.cwiseSqrt();
        Matrix sym = Matrix::Zero(p.size, p.size);
        for (int s = 0; s < p.size; ++s)
            for (auto [t, pr] : p.rows[s])
                if (sq(t) > 0) sym(s, t) += pr * sq(s) / sq(t);
        sym = 0.5 * (sym + sym.transpose().eval());
        Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
        Vector psi = es.eigenvectors().col(p.size - 2).cwiseQuotient(sq);
        double lim = psi.cwiseAbs().maxCoeff();
        if (lim > 0) {
            for (double scale : {0.1, 0.5, 0.9})
                consider(Vector::Ones(p.size) + (scale / lim) * psi);
        }
    }

    est.ordering_flag = (4.0 * est.lsi_upper <= est.mlsi_upper + 1e-9) &&
                        (est.mlsi_upper <= 2.0 * est.gap + 1e-9);
    double pi_min = p.stationary.minCoeff();
    est.tmix_bound_gap = (1.0 / est.gap) * (0.5 * std::log(1.0 / pi_min) + std::log(1.0 / (2 * eps)));
    est.tmix_bound_mlsi =
        (1.0 / est.mlsi_upper) * (std::log(std::log(1.0 / pi_min)) + std::log(1.0 / (2 * eps * eps)));
    est.tmix_bound_lsi =
        (1.0 / (4.0 * est.lsi_upper)) * (std::log(std::log(1.0 / pi_min)) + std::log(1.0 / (2 * eps * eps)));
    return est;
}

double chernoff_tail(double constant, double deviation, double vf) {
    if (vf <= 0) return deviation > 0 ? 0.0 : 1.0;
    return std::exp(-constant * deviation * deviation / (2.0 * vf));
}

} // namespace specind
