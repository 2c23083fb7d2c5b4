#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracfilt/io.hpp"
#include "fracfilt/runner.hpp"
#include "world.hpp"

// Acceptance-grade checks. Statistical verdicts use cfg.sigma_mult standard
// errors; deterministic quadrature targets follow the stated sup-error levels
// with mandatory refinement studies.

namespace ff::harness {

namespace {

using frac::FracOrder;
using frac::Grid1D;
using frac::SampledFn1D;
using lattice::Grid2D;

std::string fmt(double v) { return io::format_double(v); }

double rel_sup(const std::vector<double>& got, const std::vector<double>& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num = std::max(num, std::abs(got[i] - want[i]));
        den = std::max(den, std::abs(want[i]));
    }
    return num / (den + 1e-300);
}

bool decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

// mean slope of log2(err_k / err_{k+1}) across a halving sequence
double fitted_order(const std::vector<double>& errs) {
    double s = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 1; i < errs.size(); ++i)
        if (errs[i - 1] > 0 && errs[i] > 0) {
            s += std::log2(errs[i - 1] / errs[i]);
            ++m;
        }
    return m ? s / static_cast<double>(m) : 0.0;
}

std::vector<std::size_t> levels_for(const ExperimentConfig& cfg) {
    if (cfg.check_level == "fast") return {32, 64, 128};
    return cfg.refinement_levels;
}

struct MeanSe {
    double mean = 0.0, se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (static_cast<double>(v.size()) - 1.0)) /
                   std::sqrt(static_cast<double>(v.size()))};
}

} // namespace

std::vector<CheckResult> check_frac_oracles(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    auto levels = levels_for(cfg);
    const double mu = 0.5, al = 0.3;
    const double ci = std::tgamma(mu + 1.0) / std::tgamma(mu + al + 1.0);
    const double mud = 0.8;
    const double cd = std::tgamma(mud + 1.0) / std::tgamma(mud + 1.0 - al);

    std::vector<double> errs_i, errs_d;
    for (std::size_t n : levels) {
        Grid1D g(0.0, 1.0, n);
        auto phi = SampledFn1D::sample(g, [mu](double t) { return std::pow(t, mu); });
        auto got = frac::rl_integral_left(phi, FracOrder{al});
        std::vector<double> want(n);
        for (std::size_t i = 0; i < n; ++i) want[i] = ci * std::pow(g.node(i), mu + al);
        errs_i.push_back(rel_sup(got.values, want));

        auto f = SampledFn1D::sample(g, [mud](double t) { return std::pow(t, mud); });
        auto d = frac::rl_derivative_left(f, FracOrder{al});
        std::vector<double> wantd(n);
        for (std::size_t i = 0; i < n; ++i) wantd[i] = cd * std::pow(g.node(i), mud - al);
        errs_d.push_back(rel_sup(d.fn.values, wantd));
    }
    auto note = [&](const std::vector<double>& errs) {
        std::ostringstream os;
        os << "rel sup errors over n={";
        for (std::size_t k = 0; k < levels.size(); ++k)
            os << (k ? "," : "") << levels[k];
        os << "}: ";
        for (std::size_t k = 0; k < errs.size(); ++k) os << (k ? ", " : "") << fmt(errs[k]);
        return os.str();
    };
    out.push_back({"frac.integral_power_oracle", errs_i.back() <= 1e-2, errs_i.back(), 1e-2,
                   note(errs_i)});
    out.push_back({"frac.integral_power_monotone", decreasing(errs_i),
                   static_cast<double>(decreasing(errs_i)), 1.0, "errors strictly decreasing"});
    out.push_back({"frac.derivative_power_oracle", errs_d.back() <= 1e-2, errs_d.back(), 1e-2,
                   note(errs_d)});
    out.push_back({"frac.derivative_power_monotone", decreasing(errs_d),
                   static_cast<double>(decreasing(errs_d)), 1.0, "errors strictly decreasing"});
    return out;
}

std::vector<CheckResult> check_algebraic_laws(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    auto levels = levels_for(cfg);

    std::vector<double> errs_semi, errs_ibp;
    for (std::size_t n : levels) {
        Grid1D g(0.0, 1.0, n);
        auto phi = SampledFn1D::sample(g, [](double t) { return std::sin(t); });
        auto twice = frac::rl_integral_left(frac::rl_integral_left(phi, FracOrder{0.2}),
                                            FracOrder{0.2});
        auto once = frac::rl_integral_left(phi, FracOrder{0.4});
        errs_semi.push_back(rel_sup(twice.values, once.values));

        auto psi = SampledFn1D::sample(g, [](double t) { return std::cos(2.0 * t); });
        auto ileft = frac::rl_integral_left(psi, FracOrder{0.4});
        auto iright = frac::rl_integral_right(phi, FracOrder{0.4});
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lhs += phi.values[i] * ileft.values[i] * g.h();
            rhs += psi.values[i] * iright.values[i] * g.h();
        }
        errs_ibp.push_back(std::abs(lhs - rhs) / (std::abs(lhs) + 1e-300));
    }
    double order_semi = fitted_order(errs_semi);
    out.push_back({"laws.semigroup_order", order_semi >= cfg.order_min, order_semi, cfg.order_min,
                   "I^0.2 I^0.2 sin vs I^0.4 sin, halving study"});
    out.push_back({"laws.semigroup_level", errs_semi.back() <= 1e-2, errs_semi.back(), 1e-2,
                   "relative sup error at the finest level"});
    bool ibp_exact = *std::max_element(errs_ibp.begin(), errs_ibp.end()) < 1e-12;
    double order_ibp = ibp_exact ? 99.0 : fitted_order(errs_ibp);
    out.push_back({"laws.int_by_parts", ibp_exact || order_ibp >= cfg.order_min,
                   ibp_exact ? errs_ibp.back() : order_ibp,
                   ibp_exact ? 1e-12 : cfg.order_min,
                   ibp_exact ? "exact transpose identity on the uniform midpoint grid"
                             : "halving-study order"});
    return out;
}

std::vector<CheckResult> check_lemma1(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    const bool fast = cfg.check_level == "fast";
    const std::size_t n_hi = fast ? 128 : 512;
    const std::size_t n_lo = n_hi / 2;

    struct Case {
        double H;
        const char* name;
        std::function<double(double)> h;
        std::function<double(double)> integral;
    };
    std::vector<Case> cases;
    for (double H : {0.6, 0.75, 0.9}) {
        cases.push_back({H, "s", [](double s) { return s; },
                         [](double t) { return 0.5 * t * t; }});
        cases.push_back({H, "s^0.9", [](double s) { return std::pow(s, 0.9); },
                         [](double t) { return std::pow(t, 1.9) / 1.9; }});
    }

    auto run_level = [&](double H, const Case& c, std::size_t n) {
        Grid1D g(0.0, 1.0, n);
        auto hfn = SampledFn1D::sample(g, c.h);
        auto d = model::delta_1d(hfn, H);
        Matrix K = gauss::kernel_matrix(g, H, false);
        std::vector<double> lhs(n, 0.0), rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += K(i, j) * d.values[j] * g.dual_w(j);
            lhs[i] = s;
            rhs[i] = c.integral(g.node(i));
        }
        return rel_sup(lhs, rhs);
    };

    double worst = 0.0;
    bool all_decreasing = true;
    std::ostringstream note;
    for (const auto& c : cases) {
        double e_hi = run_level(c.H, c, n_hi);
        double e_lo = run_level(c.H, c, n_lo);
        worst = std::max(worst, e_hi);
        if (!(e_hi < e_lo)) all_decreasing = false;
        note << "H=" << c.H << " h=" << c.name << ": " << fmt(e_hi) << " (half-res "
             << fmt(e_lo) << "); ";
    }
    out.push_back({"lemma1.identity", worst <= 2e-2, worst, 2e-2, note.str()});
    out.push_back({"lemma1.refinement", all_decreasing, static_cast<double>(all_decreasing), 1.0,
                   "error decreases from half resolution in every case"});
    return out;
}

namespace {

struct ProbePair {
    std::size_t i1, j1, i2, j2;
};

std::vector<ProbePair> probe_pairs(const Grid2D& g) {
    auto s1 = [&](double f) { return g.snap1(f * g.T1()); };
    auto s2 = [&](double f) { return g.snap2(f * g.T2()); };
    return {{s1(0.2), s2(0.2), s1(0.2), s2(0.2)},
            {s1(0.3), s2(0.3), s1(0.7), s2(0.7)},
            {s1(0.7), s2(0.7), s1(0.7), s2(0.7)},
            {s1(0.3), s2(0.7), s1(0.7), s2(0.3)},
            {s1(0.95), s2(0.95), s1(0.45), s2(0.55)},
            {s1(0.9), s2(0.4), s1(0.9), s2(0.4)}};
}

} // namespace

std::vector<CheckResult> check_fbs_law(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    const bool fast = cfg.check_level == "fast";
    const std::size_t N = fast ? 2000 : 20000;
    Grid2D g(cfg.T1, cfg.T2, 8, 8);
    gauss::HurstPair H = cfg.make_hurst();
    auto pairs = probe_pairs(g);

    auto gen = rng::stream(cfg.master_seed, 21);
    std::vector<std::vector<double>> prod_c(pairs.size()), prod_k(pairs.size());
    for (std::size_t s = 0; s < N; ++s) {
        auto bc = gauss::simulate_fbs_cholesky(g, H, gen);
        auto w = gauss::simulate_wiener_sheet(g, gen);
        auto bk = gauss::simulate_fbs_kernel(g, H, w);
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            const auto& p = pairs[q];
            prod_c[q].push_back(bc.cumulative.values(p.i1, p.j1) *
                                bc.cumulative.values(p.i2, p.j2));
            prod_k[q].push_back(bk.cumulative.values(p.i1, p.j1) *
                                bk.cumulative.values(p.i2, p.j2));
        }
    }

    // exact discrete-law covariance of the kernel route, for the bias allowance
    Grid1D ax1(0.0, g.T1(), g.n1()), ax2(0.0, g.T2(), g.n2());
    Matrix cc1 = gauss::color_cov_axis(ax1, H.alpha), cc2 = gauss::color_cov_axis(ax2, H.beta);
    Grid1D ax1f(0.0, g.T1(), 2 * g.n1()), ax2f(0.0, g.T2(), 2 * g.n2());
    Matrix cc1f = gauss::color_cov_axis(ax1f, H.alpha);

    double worst_c = 0.0, worst_k = 0.0;
    double bias_measured = 0.0, bias_fine = 0.0;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto& p = pairs[q];
        double target = gauss::gamma_cov(H.alpha, g.node1(p.i1), g.node1(p.i2)) *
                        gauss::gamma_cov(H.beta, g.node2(p.j1), g.node2(p.j2));
        auto mc = mean_se(prod_c[q]);
        worst_c = std::max(worst_c, std::abs(mc.mean - target) / (cfg.sigma_mult * mc.se));
        // kernel route vs target, with the exact discrete bias allowed
        double disc = cc1(p.i1, p.i2) * cc2(p.j1, p.j2);
        double bias = std::abs(disc - target);
        bias_measured = std::max(bias_measured, bias);
        auto mk = mean_se(prod_k[q]);
        worst_k = std::max(worst_k,
                           std::abs(mk.mean - target) / (cfg.sigma_mult * mk.se + bias));
        double t1 = gauss::gamma_cov(H.alpha, ax1f.node(2 * p.i1), ax1f.node(2 * p.i2));
        bias_fine = std::max(bias_fine,
                             std::abs(cc1f(2 * p.i1, 2 * p.i2) - t1));
    }
    out.push_back({"fbs.cholesky_covariance", worst_c <= 1.0, worst_c, 1.0,
                   "max |emp - gamma.gamma| / (5 SE) over 6 probe pairs, N=" + std::to_string(N)});
    out.push_back({"fbs.kernel_route_covariance", worst_k <= 1.0, worst_k, 1.0,
                   "max |emp - gamma.gamma| / (5 SE + measured discrete bias); bias = " +
                       fmt(bias_measured)});
    double bias_coarse = 0.0;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto& p = pairs[q];
        double t1 = gauss::gamma_cov(H.alpha, ax1.node(p.i1), ax1.node(p.i2));
        bias_coarse = std::max(bias_coarse, std::abs(cc1(p.i1, p.i2) - t1));
    }
    out.push_back({"fbs.kernel_bias_shrinks", bias_fine < bias_coarse + 1e-15, bias_fine,
                   bias_coarse, "axis-1 kernel-route covariance bias at 2n vs n"});
    return out;
}

std::vector<CheckResult> check_whitening(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    const bool fast = cfg.check_level == "fast";
    const std::size_t N = fast ? 2000 : 20000;
    Grid2D g(cfg.T1, cfg.T2, 8, 8);
    gauss::HurstPair H = cfg.make_hurst();
    auto pairs = probe_pairs(g);

    auto gen = rng::stream(cfg.master_seed, 22);
    std::vector<std::vector<double>> prod(pairs.size());
    for (std::size_t s = 0; s < N; ++s) {
        auto b = gauss::simulate_fbs_cholesky(g, H, gen);
        auto w = gauss::whiten(b, H);
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            const auto& p = pairs[q];
            prod[q].push_back(w.cumulative.values(p.i1, p.j1) *
                              w.cumulative.values(p.i2, p.j2));
        }
    }

    Grid1D ax1(0.0, g.T1(), g.n1()), ax2(0.0, g.T2(), g.n2());
    Matrix wc1 = gauss::whiten_cov_axis(ax1, H.alpha), wc2 = gauss::whiten_cov_axis(ax2, H.beta);
    Grid1D ax1f(0.0, g.T1(), 2 * g.n1());
    Matrix wc1f = gauss::whiten_cov_axis(ax1f, H.alpha);

    double worst = 0.0, bias_measured = 0.0, bias_coarse = 0.0, bias_fine = 0.0;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto& p = pairs[q];
        double target = std::min(g.node1(p.i1), g.node1(p.i2)) *
                        std::min(g.node2(p.j1), g.node2(p.j2));
        double disc = wc1(p.i1, p.i2) * wc2(p.j1, p.j2);
        double bias = std::abs(disc - target);
        bias_measured = std::max(bias_measured, bias);
        auto m = mean_se(prod[q]);
        worst = std::max(worst, std::abs(m.mean - target) / (cfg.sigma_mult * m.se + bias));
        double mt = std::min(ax1.node(p.i1), ax1.node(p.i2));
        bias_coarse = std::max(bias_coarse, std::abs(wc1(p.i1, p.i2) - mt));
        double mtf = std::min(ax1f.node(2 * p.i1), ax1f.node(2 * p.i2));
        bias_fine = std::max(bias_fine, std::abs(wc1f(2 * p.i1, 2 * p.i2) - mtf));
    }
    out.push_back({"whiten.min_min_covariance", worst <= 1.0, worst, 1.0,
                   "max |emp - min.min| / (5 SE + measured bias); bias = " + fmt(bias_measured) +
                       ", N=" + std::to_string(N)});
    out.push_back({"whiten.bias_shrinks", bias_fine < bias_coarse + 1e-15, bias_fine, bias_coarse,
                   "axis-1 whitened covariance bias at 2n vs n"});
    return out;
}

std::vector<CheckResult> check_likelihood_norm(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    const bool fast = cfg.check_level == "fast";
    const std::size_t N = fast ? 2000 : 20000;
    Grid2D g(cfg.T1, cfg.T2, 8, 8);
    auto sensor = cfg.make_sensor();
    auto drift = cfg.make_drift();
    auto diffusion = cfg.make_diffusion();
    auto x0s = cfg.make_x0_sampler();

    for (auto [ha, hb] : {std::pair{0.6, 0.6}, std::pair{0.75, 0.55}}) {
        gauss::HurstPair H(ha, hb);
        std::vector<double> v(N);
        for (std::size_t k = 0; k < N; ++k) {
            // replicate k draws the signal pieces and the noise driver from
            // distinct particle-range streams
            auto gen_x = rng::stream(cfg.master_seed, rng::kStreamParticleBase + 2 * k);
            auto gen_b = rng::stream(cfg.master_seed, rng::kStreamParticleBase + 2 * k + 1);
            double x0 = x0s(gen_x);
            auto w = gauss::simulate_wiener_sheet(g, gen_x);
            auto X = model::simulate_signal({drift, diffusion, x0}, w, g);
            auto d = model::delta_2d(X, sensor, H);
            auto wb = gauss::simulate_wiener_sheet(g, gen_b);
            double logv = 0.0;
            for (std::size_t i = 0; i < g.n1(); ++i)
                for (std::size_t j = 0; j < g.n2(); ++j) {
                    double dd = d.values.values(i, j);
                    logv += -dd * wb.increments.values(i, j) -
                            0.5 * dd * dd * g.cell_area(i, j);
                }
            v[k] = std::exp(logv);
        }
        auto m = mean_se(v);
        double t = std::abs(m.mean - 1.0) / m.se;
        std::ostringstream name;
        name << "likelihood.evt_H_" << ha << "_" << hb;
        std::ostringstream note;
        note << "E[V_T] = " << fmt(m.mean) << " +- " << fmt(m.se) << ", N=" << N
             << " (V1 form against the driving sheet)";
        out.push_back({name.str(), t <= cfg.sigma_mult, t, cfg.sigma_mult, note.str()});
    }
    return out;
}

std::vector<CheckResult> check_filter_consistency(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    const bool fast = cfg.check_level == "fast";

    ExperimentConfig c = cfg;
    c.n1 = c.n2 = fast ? 8 : 16;
    c.particles = fast ? 500 : 5000;
    c.alpha = c.beta = 0.6;

    World w = simulate_world(c);
    auto F = c.make_test_function();
    auto ens = filter::build_ensemble(w.grid, w.hurst, ensemble_spec(c), w.wy_inc, c.particles,
                                      c.master_seed, c.jobs);

    double worst = 0.0;
    for (const auto& path : {filter::MonotonePath::diagonal(w.grid),
                             filter::MonotonePath::axis1_first(w.grid),
                             filter::MonotonePath::axis2_first(w.grid)}) {
        auto trace = filter::zakai_curve_integrate(ens, F, path);
        for (const auto& pt : trace) {
            auto b = filter::bayes_filter_at(ens, F, pt.i, pt.j);
            double se = std::sqrt(pt.se_sigma * pt.se_sigma + b.se_sigma * b.se_sigma);
            worst = std::max(worst, std::abs(pt.sigma - b.sigma) / (cfg.sigma_mult * se));
        }
    }
    out.push_back({"filter.zakai_vs_bayes", worst <= 1.0, worst, 1.0,
                   "max |sigma_zakai - sigma_bayes| / (5 combined SE) over all nodes of 3 paths, N=" +
                       std::to_string(c.particles)});

    // bitwise agreement in the fully degenerate case (g = 0, a = 0, b = 0)
    ExperimentConfig cd = c;
    cd.sensor = {"zero", {}};
    cd.drift = {"zero", {}};
    cd.diffusion = {"zero", {}};
    World wd = simulate_world(cd);
    auto ensd = filter::build_ensemble(wd.grid, wd.hurst, ensemble_spec(cd), wd.wy_inc,
                                       cd.particles, cd.master_seed, cd.jobs);
    bool bitwise = true;
    auto traced = filter::zakai_curve_integrate(ensd, F, filter::MonotonePath::diagonal(wd.grid));
    for (const auto& pt : traced) {
        auto b = filter::bayes_filter_at(ensd, F, pt.i, pt.j);
        if (pt.sigma != b.sigma || pt.pi != b.pi) bitwise = false;
    }
    out.push_back({"filter.degenerate_bitwise", bitwise, static_cast<double>(bitwise), 1.0,
                   "zakai trace equals bayes values bitwise when g=0, drift=0, diffusion=0"});
    return out;
}

std::vector<CheckResult> check_conjugate(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    const bool fast = cfg.check_level == "fast";

    ExperimentConfig c = cfg;
    c.n1 = c.n2 = 8;
    c.particles = fast ? 2000 : 20000;
    c.drift = {"zero", {}};
    c.diffusion = {"zero", {}};
    c.sensor = {"linear", {{"scale", 1.0}}};
    c.holder_order = 1.0;
    c.x0 = {"gaussian", 0.5, 0.3};
    c.test_function = "linear";

    World w = simulate_world(c);
    auto ens = filter::build_ensemble(w.grid, w.hurst, ensemble_spec(c), w.wy_inc, c.particles,
                                      c.master_seed, c.jobs);
    auto F = c.make_test_function();
    auto pt = filter::bayes_filter_at(ens, F, w.grid.n1() - 1, w.grid.n2() - 1);

    // closed-form Gaussian posterior in whitened coordinates:
    // dWY_c = x0 * u_c a_c + dWB_c with u the delta field of the unit sensor
    auto ones = lattice::SampledField2D::zeros(w.grid);
    for (std::size_t k = 0; k < ones.values.size(); ++k) ones.values.data()[k] = 1.0;
    auto u = model::delta_2d(ones, {[](double) { return 1.0; }, 1.0}, w.hurst);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < w.grid.n1(); ++i)
        for (std::size_t j = 0; j < w.grid.n2(); ++j) {
            double uc = u.values.values(i, j);
            s1 += uc * w.wy_inc(i, j);
            s2 += uc * uc * w.grid.cell_area(i, j);
        }
    const double m0 = c.x0.mean, s0 = c.x0.sd;
    double post_mean = (m0 / (s0 * s0) + s1) / (1.0 / (s0 * s0) + s2);
    double t = std::abs(pt.pi - post_mean) / pt.se;
    std::ostringstream note;
    note << "pi(T) = " << fmt(pt.pi) << " vs conjugate posterior mean " << fmt(post_mean)
         << ", jackknife se " << fmt(pt.se) << ", N=" << c.particles;
    out.push_back({"filter.conjugate_gaussian", t <= cfg.sigma_mult, t, cfg.sigma_mult,
                   note.str()});
    return out;
}

namespace {

filter::DmzResult dmz_at_size(const ExperimentConfig& base, std::size_t n1, std::size_t n2) {
    ExperimentConfig c = base;
    c.n1 = n1;
    c.n2 = n2;
    World w = simulate_world(c);
    auto ens = filter::build_ensemble(w.grid, w.hurst, ensemble_spec(c), w.wy_inc, c.particles,
                                      c.master_seed, c.jobs);
    auto F = c.make_test_function();
    return filter::dmz_2d_residual(ens, F, {w.grid.T1(), w.grid.T2()});
}

} // namespace

std::vector<CheckResult> check_dmz(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    const bool fast = cfg.check_level == "fast";

    ExperimentConfig c = cfg;
    c.particles = fast ? 500 : std::min<std::size_t>(cfg.particles, 5000);
    const std::size_t n1 = fast ? 4 : cfg.n1;
    const std::size_t n2 = fast ? 4 : cfg.n2;

    // reduced case: delta == 0 (g == 0), diffusive signal
    ExperimentConfig cr = c;
    cr.sensor = {"zero", {}};
    auto r_red = dmz_at_size(cr, n1, n2);
    double t_red = std::abs(r_red.residual) / (cfg.sigma_mult * r_red.se);
    out.push_back({"dmz.reduced_delta0", t_red <= 1.0, t_red, 1.0,
                   "residual " + fmt(r_red.residual) + " se " + fmt(r_red.se) +
                       " (Lebesgue terms only)"});

    // full case with an h-refinement allowance measured by halving
    auto r_full = dmz_at_size(c, n1, n2);
    auto r_fine = dmz_at_size(c, 2 * n1, 2 * n2);
    double allowance = 2.0 * std::abs(r_full.residual - r_fine.residual);
    double bound = cfg.sigma_mult * r_full.se + allowance;
    double t_full = std::abs(r_full.residual) / bound;
    std::ostringstream note;
    note << "residual " << fmt(r_full.residual) << " se " << fmt(r_full.se) << " allowance "
         << fmt(allowance) << " (2|R(h)-R(h/2)|), N=" << c.particles;
    out.push_back({"dmz.full_residual", t_full <= 1.0, t_full, 1.0, note.str()});
    return out;
}

std::vector<CheckResult> check_condexp(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    const bool fast = cfg.check_level == "fast";
    const std::size_t N = fast ? 2000 : 20000;
    Grid2D g(cfg.T1, cfg.T2, 4, 4);
    auto rep = filter::cond_exp_identities_check(cfg.master_seed, g, N, cfg.sigma_mult);
    double worst = 0.0;
    for (double v : rep.max_abs_t) worst = std::max(worst, v);
    for (double v : rep.mean_t) worst = std::max(worst, v);
    out.push_back({"condexp.mean_zero_dictionary", worst <= cfg.sigma_mult, worst, cfg.sigma_mult,
                   "worst |t| over 5 statistics x 13 features, N=" + std::to_string(N)});
    out.push_back({"condexp.simple_exact", rep.simple_exact_gap <= 1e-12, rep.simple_exact_gap,
                   1e-12, "2x2-cell brute force, W^Y-measurable integrands"});
    out.push_back({"condexp.coin_tower", rep.coin_lhs_t <= cfg.sigma_mult, rep.coin_lhs_t,
                   cfg.sigma_mult, "sign(dW) coin: conditional form centred at zero"});
    return out;
}

} // namespace ff::harness
