#include "qrs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qrs {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("linear fit: need >= 2 paired points");
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw NumericalError("linear fit: constant abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

double median(std::vector<double> v) {
    if (v.empty()) throw ConfigError("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

Probs random_logical_distribution(int n, Rng& rng) {
    auto beta = random_angles(n * n, cluster_angle_set(), rng);
    return born_distribution(simulate(cluster_logical_circuit(n, n, beta)));
}

std::vector<double> anticoncentration_ensemble(int n, int instances, Rng& rng) {
    std::vector<double> out;
    for (int i = 0; i < instances; ++i) {
        Rng r = rng.split(std::uint64_t(i));
        out.push_back(anticonc_fraction(random_logical_distribution(n, r), 1.0));
    }
    return out;
}

std::vector<double> porter_thomas_ensemble(int n, int instances, Rng& rng) {
    std::vector<double> out;
    const int bins = default_pt_bins(n);
    for (int i = 0; i < instances; ++i) {
        Rng r = rng.split(std::uint64_t(i));
        out.push_back(tv_to_porter_thomas(random_logical_distribution(n, r), bins));
    }
    return out;
}

std::vector<SignPoint> sign_vs_nonstoquasticity(int n, int instances, double alpha_max, int grid, double beta, int m,
                                                Rng& rng) {
    if (grid < 1 || instances < 1) throw ConfigError("sign trend: grid >= 1, instances >= 1");
    std::vector<SignPoint> pts;
    const double D = std::ldexp(1.0, n);
    std::uint64_t stream = 0;
    for (int i = 0; i < instances; ++i) {
        RealHamiltonian H;
        // redraw the rare instance whose global matrix comes out stoquastic
        do {
            Rng r = rng.split(stream++);
            H = chain_hamiltonian(gaussian_symmetric(4, r), 2, n, false);
        } while (!(positive_offdiagonal(H.matrix).sum() > 0));
        for (int g = 0; g <= grid; ++g) {
            const double a = alpha_max * g / grid;
            auto Ha = h_alpha(H, a);
            pts.push_back({i, a, D * nonstoq(Ha), average_sign_exact(Ha, beta, m)});
        }
    }
    return pts;
}

SignTrend sign_trend(const std::vector<SignPoint>& pts) {
    std::vector<double> x, y;
    std::map<double, std::vector<double>> by_alpha;
    for (const auto& p : pts) {
        if (!(p.sign > 0)) continue;  // log(1/sign) undefined; counted by the caller
        x.push_back(p.d_nu1);
        y.push_back(std::log(1.0 / p.sign));
        by_alpha[p.alpha].push_back(std::log(1.0 / p.sign));
    }
    SignTrend t;
    t.pooled = linear_fit(x, y);
    std::vector<double> mx, my;
    for (auto& [a, v] : by_alpha) {
        mx.push_back(a);
        my.push_back(median(v));
    }
    t.median_fit = linear_fit(mx, my);
    return t;
}

EasingPoint ease_term(const LocalTerm& h, const OptimizerConfig& cfg, Rng& rng, RMat* O_out) {
    auto res = hybrid_minimize(h, cfg, rng);
    if (O_out) *O_out = res.O;
    return {effective_nu1(h), res.nu1};
}

OptimizerConfig ladder_optimizer() {
    OptimizerConfig c;
    c.alpha = 40;
    c.init = InitKind::PerturbedIdentity;
    c.restarts = 4;
    c.max_iters = 500;
    c.grad_tol = 1e-9;
    return c;
}

OptimizerConfig hidden_optimizer() {
    OptimizerConfig c;
    c.alpha = 50;
    c.init = InitKind::Haar;
    c.restarts = 4;
    c.max_iters = 2000;
    c.grad_tol = 1e-13;
    return c;
}

OptimizerConfig jmodel_optimizer() {
    OptimizerConfig c;
    c.alpha = 100;
    c.init = InitKind::Haar;
    c.restarts = 4;
    c.max_iters = 500;
    c.grad_tol = 1e-9;
    return c;
}

}  // namespace qrs
