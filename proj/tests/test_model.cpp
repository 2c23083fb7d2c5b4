#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracfilt/model.hpp"
#include "fracfilt/rng.hpp"

using namespace ff;
using namespace ff::model;
using gauss::GaussianFieldSample;
using gauss::HurstPair;
using lattice::Grid2D;
using lattice::SampledField2D;

namespace {

GaussianFieldSample zero_noise(const Grid2D& g) {
    return GaussianFieldSample::from_increments(SampledField2D::zeros(g));
}

} // namespace

TEST_CASE("signal with zero coefficients stays at x0 bitwise") {
    Grid2D g(1.0, 1.0, 6, 6);
    auto gen = rng::stream(1, 1);
    auto w = gauss::simulate_wiener_sheet(g, gen);
    auto X = simulate_signal({[](double) { return 0.0; }, [](double) { return 0.0; }, 0.37}, w, g);
    for (std::size_t k = 0; k < X.values.size(); ++k) CHECK(X.values.data()[k] == 0.37);
}

TEST_CASE("unit drift gives x0 + z1 z2 exactly at the nodes") {
    Grid2D g(1.0, 2.0, 5, 8);
    auto X = simulate_signal({[](double) { return 1.0; }, [](double) { return 0.0; }, 0.2},
                             zero_noise(g), g);
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            CHECK(X.values(i, j) ==
                  doctest::Approx(0.2 + g.node1(i) * g.node2(j)).epsilon(1e-13));
}

TEST_CASE("unit diffusion reproduces the driving sheet") {
    Grid2D g(1.0, 1.0, 6, 6);
    auto gen = rng::stream(5, 1);
    auto w = gauss::simulate_wiener_sheet(g, gen);
    auto X = simulate_signal({[](double) { return 0.0; }, [](double) { return 1.0; }, 0.0}, w, g);
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            CHECK(X.values(i, j) == doctest::Approx(w.cumulative.values(i, j)).epsilon(1e-12));
}

TEST_CASE("numerical blow-up raises an error naming the first bad node") {
    Grid2D g(1.0, 1.0, 4, 4);
    auto gen = rng::stream(5, 1);
    auto w = gauss::simulate_wiener_sheet(g, gen);
    try {
        (void)simulate_signal({[](double x) { return std::exp(x); },
                               [](double) { return 0.0; }, 700.0},
                              w, g);
        FAIL("expected blow-up");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
}

TEST_CASE("lipschitz estimate for affine coefficients") {
    SdeCoefficients c{[](double x) { return 0.15 - 0.3 * x; }, [](double) { return 0.25; }, 0.0};
    CHECK(check_lipschitz(c, -2.0, 2.0) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("holder constant of a linear sensor is its slope") {
    auto gen = rng::stream(9, 9);
    SensorFunction s{[](double x) { return 2.0 * x; }, 1.0};
    CHECK(holder_constant(s, -1.0, 1.0, gen) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("g_star: zero sensor, vanishing exponents, and a direct power evaluation") {
    Grid2D g(1.0, 1.0, 1, 2);  // nodes z1 = 0.5, z2 in {0.25, 0.75}
    Matrix xv(1, 2, 1.0);
    SampledField2D X(g, xv);

    auto zero = g_star(X, {[](double) { return 0.0; }, 1.0}, HurstPair(0.7, 0.6));
    CHECK(zero.values(0, 0) == 0.0);

    auto flat = g_star(X, {[](double) { return 1.0; }, 1.0},
                       HurstPair(0.5 + 1e-12, 0.5 + 1e-12));
    CHECK(flat.values(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(flat.values(0, 1) == doctest::Approx(1.0).epsilon(1e-9));

    auto gs = g_star(X, {[](double x) { return x; }, 1.0}, HurstPair(0.7, 0.6));
    // 0.5^{-0.2} * 0.25^{-0.1}, frozen independently
    CHECK(gs.values(0, 0) == doctest::Approx(1.3195079107728943).epsilon(1e-12));
}

TEST_CASE("delta_1d: zero input, Lemma-1 identity, stable L2 norm") {
    frac::Grid1D g(0.0, 1.0, 256);
    auto zero = delta_1d(frac::SampledFn1D::sample(g, [](double) { return 0.0; }), 0.7);
    for (double v : zero.values) CHECK(v == 0.0);

    // int_0^t K_H(t,s) delta_h(s) ds = int_0^t h(s) ds for h(s) = s
    const double H = 0.7;
    auto d = delta_1d(frac::SampledFn1D::sample(g, [](double s) { return s; }), H);
    Matrix K = gauss::kernel_matrix(g, H, false);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j <= i; ++j) lhs += K(i, j) * d.values[j] * g.dual_w(j);
        double rhs = 0.5 * g.node(i) * g.node(i);
        worst = std::max(worst, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(rhs));
    }
    CHECK(worst / scale < 2e-2);

    // h(s) = s^0.9: discrete L2 norm stays stable when the grid refines
    auto l2 = [](const frac::SampledFn1D& f) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.grid.n(); ++i)
            s += f.values[i] * f.values[i] * f.grid.dual_w(i);
        return std::sqrt(s);
    };
    frac::Grid1D g2(0.0, 1.0, 512);
    double n1 = l2(delta_1d(frac::SampledFn1D::sample(g, [](double s) { return std::pow(s, 0.9); }),
                            H));
    double n2 = l2(delta_1d(frac::SampledFn1D::sample(g2, [](double s) { return std::pow(s, 0.9); }),
                            H));
    CHECK(std::abs(n2 - n1) / n1 < 0.05);
}

TEST_CASE("delta_2d: zero sensor and exact separability for constant sensors") {
    Grid2D g(1.0, 1.0, 8, 8);
    auto gen = rng::stream(4, 1);
    auto w = gauss::simulate_wiener_sheet(g, gen);
    auto X = simulate_signal({[](double x) { return 0.3 - x; }, [](double) { return 0.4; }, 0.5},
                             w, g);
    HurstPair H(0.7, 0.6);

    auto dz = delta_2d(X, {[](double) { return 0.0; }, 1.0}, H);
    for (std::size_t k = 0; k < dz.values.values.size(); ++k)
        CHECK(dz.values.values.data()[k] == 0.0);
    CHECK(dz.l2_norm == 0.0);

    const double c = 2.0;
    auto dc = delta_2d(X, {[c](double) { return c; }, 1.0}, H);
    frac::Grid1D g1(0.0, 1.0, 8), g2axis(0.0, 1.0, 8);
    auto d1 = delta_1d(frac::SampledFn1D::sample(g1, [](double) { return 1.0; }), H.alpha);
    auto d2 = delta_1d(frac::SampledFn1D::sample(g2axis, [](double) { return 1.0; }), H.beta);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(dc.values.values(i, j) ==
                  doctest::Approx(c * d1.values[i] * d2.values[j]).epsilon(1e-10));
}

TEST_CASE("Corollary 1(ii): whitened drift equals integrated delta, refining") {
    auto run = [](std::size_t n) {
        Grid2D g(1.0, 1.0, n, n);
        HurstPair H(0.7, 0.6);
        SensorFunction s{[](double x) { return 0.5 * std::sin(x); }, 1.0};
        // smooth deterministic signal field
        Matrix xv(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                xv(i, j) = std::sin(g.node1(i) + g.node2(j));
        SampledField2D X(g, xv);
        auto d = delta_2d(X, s, H);
        // lhs: whiten applied to the drift increments g(X) * area
        Matrix drift_inc(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                drift_inc(i, j) = s.g(X.values(i, j)) * g.cell_area(i, j);
        auto wh = gauss::whiten(GaussianFieldSample::from_increments({g, drift_inc}), H);
        // rhs: accumulated delta * area
        Matrix d_inc(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d_inc(i, j) = d.values.values(i, j) * g.cell_area(i, j);
        auto acc = lattice::accumulate({g, d_inc});
        double worst = 0.0;
        for (std::size_t k = 0; k < acc.values.size(); ++k)
            worst = std::max(worst, std::abs(acc.values.data()[k] -
                                             wh.cumulative.values.data()[k]));
        return worst;
    };
    double e8 = run(8), e16 = run(16), e32 = run(32);
    CHECK(e16 < e8);
    CHECK(e32 < e16);
}

TEST_CASE("observation: zero sensor copies the noise, unit sensor integrates the area") {
    Grid2D g(1.0, 1.0, 6, 6);
    auto gen = rng::stream(6, 2);
    auto driver = gauss::simulate_wiener_sheet(g, gen);
    auto noise = gauss::simulate_fbs_kernel(g, HurstPair(0.7, 0.6), driver);

    auto y0 = make_observation(SampledField2D::zeros(g), {[](double) { return 0.0; }, 1.0},
                               noise);
    for (std::size_t k = 0; k < y0.values.size(); ++k)
        CHECK(y0.values.data()[k] == noise.cumulative.values.data()[k]);

    auto y1 = make_observation(SampledField2D::zeros(g), {[](double) { return 1.0; }, 1.0},
                               zero_noise(g));
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            CHECK(y1.values(i, j) == doctest::Approx(g.node1(i) * g.node2(j)).epsilon(1e-13));
}

TEST_CASE("whitened observation decomposes into integrated delta plus noise, refining") {
    auto run = [](std::size_t n) {
        Grid2D g(1.0, 1.0, n, n);
        HurstPair H(0.65, 0.6);
        SensorFunction s{[](double x) { return 0.4 * std::sin(x); }, 1.0};
        auto gen = rng::stream(31, 1);
        auto wsig = gauss::simulate_wiener_sheet(g, gen);
        auto X = simulate_signal({[](double x) { return 0.3 - 0.3 * x; },
                                  [](double) { return 0.3; }, 0.5},
                                 wsig, g);
        auto gen2 = rng::stream(31, 2);
        auto driver = gauss::simulate_wiener_sheet(g, gen2);
        auto noise = gauss::simulate_fbs_kernel(g, H, driver);
        auto y = make_observation(X, s, noise);
        auto wy = gauss::whiten(GaussianFieldSample::from_cumulative(y), H);
        auto d = delta_2d(X, s, H);
        double worst = 0.0;
        double run_max = 0.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                acc = 0.0;
                for (std::size_t a = 0; a <= i; ++a)
                    for (std::size_t b = 0; b <= j; ++b)
                        acc += d.values.values(a, b) * g.cell_area(a, b);
                double want = acc + driver.cumulative.values(i, j);
                worst = std::max(worst, std::abs(wy.cumulative.values(i, j) - want));
                run_max = std::max(run_max, std::abs(want));
            }
        return worst / run_max;
    };
    // the whitened kernel-route noise converges to its driver only in law; the
    // deterministic part of the decomposition dominates the refinement trend
    double e8 = run(8), e16 = run(16);
    CHECK(e16 < 1.5 * e8);
    CHECK(e8 < 1.0);
}

TEST_CASE("likelihood: zero delta gives V = 1, V1/V2 agree on exact decompositions") {
    Grid2D g(1.0, 1.0, 6, 6);
    HurstPair H(0.7, 0.6);
    auto gen = rng::stream(8, 1);
    auto w = gauss::simulate_wiener_sheet(g, gen);
    auto X = simulate_signal({[](double x) { return 0.2 - 0.4 * x; },
                              [](double) { return 0.3; }, 0.4},
                             w, g);
    SensorFunction s{[](double x) { return 0.4 * std::sin(x); }, 1.0};
    auto d = delta_2d(X, s, H);

    // delta == 0 -> V == 1 at every node
    auto dz = delta_2d(X, {[](double) { return 0.0; }, 1.0}, H);
    auto gen2 = rng::stream(8, 2);
    auto wb = gauss::simulate_wiener_sheet(g, gen2);
    auto st0 = likelihood(dz, wb.increments);
    for (std::size_t k = 0; k < st0.log_v.values.size(); ++k)
        CHECK(st0.log_v.values.data()[k] == 0.0);

    // V1 and V2 coincide exactly when wy = delta * area + wb
    Matrix wy(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            wy(i, j) = d.values.values(i, j) * g.cell_area(i, j) +
                       wb.increments.values(i, j);
    auto st = likelihood(d, {g, wy}, &wb.increments);
    CHECK(st.log_v_v1.has_value());
    CHECK(st.v1_v2_max_abs_diff < 1e-12);

    // log V over R_z equals the sum of the per-cell contributions (exact)
    double manual = 0.0;
    for (std::size_t i = 0; i <= 3; ++i)
        for (std::size_t j = 0; j <= 4; ++j) {
            double dd = d.values.values(i, j);
            manual += -dd * wy(i, j) + 0.5 * dd * dd * g.cell_area(i, j);
        }
    CHECK(st.log_v.values(3, 4) == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("E[V_T] = 1 in a small Monte Carlo run") {
    Grid2D g(1.0, 1.0, 6, 6);
    HurstPair H(0.6, 0.6);
    SensorFunction s{[](double x) { return 0.4 * std::sin(x); }, 1.0};
    const std::size_t N = 2000;
    std::vector<double> v(N);
    for (std::size_t k = 0; k < N; ++k) {
        auto gx = rng::stream(77, 3 + 2 * k);
        auto gb = rng::stream(77, 3 + 2 * k + 1);
        std::normal_distribution<double> nd(0.5, 0.2);
        double x0 = nd(gx);
        auto w = gauss::simulate_wiener_sheet(g, gx);
        auto X = simulate_signal({[](double x) { return 0.3 * (0.5 - x); },
                                  [](double) { return 0.3; }, x0},
                                 w, g);
        auto d = delta_2d(X, s, H);
        auto wb = gauss::simulate_wiener_sheet(g, gb);
        auto st = likelihood(d, wb.increments, &wb.increments);
        // V1 form at T; wy passed as wb is ignored for this purpose
        double logv1 = st.log_v_v1->values(g.n1() - 1, g.n2() - 1);
        v[k] = std::exp(logv1);
    }
    double m = 0.0;
    for (double x : v) m += x;
    m /= N;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    double se = std::sqrt(ss / (N - 1.0)) / std::sqrt(static_cast<double>(N));
    CHECK(std::abs(m - 1.0) < 5 * se);
}

TEST_CASE("whitened observation minus its drift has the Wiener law (Girsanov direction)") {
    Grid2D g(1.0, 1.0, 6, 6);
    HurstPair H(0.65, 0.6);
    SensorFunction s{[](double x) { return 0.4 * std::sin(x); }, 1.0};
    const std::size_t N = 2000;
    std::vector<double> prod(N);
    for (std::size_t k = 0; k < N; ++k) {
        auto gx = rng::stream(55, 3 + 2 * k);
        auto gb = rng::stream(55, 3 + 2 * k + 1);
        std::normal_distribution<double> nd(0.5, 0.2);
        double x0 = nd(gx);
        auto w = gauss::simulate_wiener_sheet(g, gx);
        auto X = simulate_signal({[](double x) { return 0.3 * (0.5 - x); },
                                  [](double) { return 0.3; }, x0},
                                 w, g);
        auto driver = gauss::simulate_wiener_sheet(g, gb);
        auto noise = gauss::simulate_fbs_kernel(g, H, driver);
        auto y = make_observation(X, s, noise);
        auto wy = gauss::whiten(GaussianFieldSample::from_cumulative(y), H);
        auto d = delta_2d(X, s, H);
        // remove the drift in whitened coordinates
        Matrix drift_inc(g.n1(), g.n2());
        for (std::size_t i = 0; i < g.n1(); ++i)
            for (std::size_t j = 0; j < g.n2(); ++j)
                drift_inc(i, j) = s.g(X.values(i, j)) * g.cell_area(i, j);
        auto wh_drift = gauss::whiten(GaussianFieldSample::from_increments({g, drift_inc}), H);
        double v = wy.cumulative.values(4, 4) - wh_drift.cumulative.values(4, 4);
        prod[k] = v * v;
    }
    double m = 0.0;
    for (double x : prod) m += x;
    m /= N;
    double ss = 0.0;
    for (double x : prod) ss += (x - m) * (x - m);
    double se = std::sqrt(ss / (N - 1.0)) / std::sqrt(static_cast<double>(N));
    // discrete-law bias of the whitened kernel-route noise at this node
    frac::Grid1D ax(0.0, 1.0, 6);
    Matrix kc1 = gauss::color_cov_axis(ax, H.alpha), kc2 = gauss::color_cov_axis(ax, H.beta);
    // whitened coloring: A gamma_discrete A^T per axis, built from the two caches
    // (use the exact-law helper against the fBs; the kernel-route discrepancy is
    // itself part of the measured bias)
    double want = g.node1(4) * g.node2(4);
    Matrix wc1 = gauss::whiten_cov_axis(ax, H.alpha), wc2 = gauss::whiten_cov_axis(ax, H.beta);
    double disc = wc1(4, 4) * wc2(4, 4);
    double bias = std::abs(disc - want) + std::abs(kc1(4, 4) * kc2(4, 4) -
                                                   gauss::gamma_cov(H.alpha, g.node1(4), g.node1(4)) *
                                                       gauss::gamma_cov(H.beta, g.node2(4), g.node2(4)));
    CHECK(std::abs(m - want) < 5 * se + bias);
}

TEST_CASE("A2 surrogate: squared-delta mass is finite and stable under refinement") {
    HurstPair H(0.6, 0.6);
    SensorFunction s{[](double x) { return 0.4 * std::sin(x); }, 1.0};
    auto avg_mass = [&](std::size_t n) {
        Grid2D g(1.0, 1.0, n, n);
        double total = 0.0;
        const int reps = 40;
        for (int k = 0; k < reps; ++k) {
            auto gen = rng::stream(13, 3 + k);
            std::normal_distribution<double> nd(0.5, 0.2);
            double x0 = nd(gen);
            auto w = gauss::simulate_wiener_sheet(g, gen);
            auto X = simulate_signal({[](double x) { return 0.3 * (0.5 - x); },
                                      [](double) { return 0.3; }, x0},
                                     w, g);
            auto d = delta_2d(X, s, H);
            total += d.l2_norm * d.l2_norm;
        }
        return total / reps;
    };
    double m8 = avg_mass(8), m16 = avg_mass(16);
    CHECK(std::isfinite(m16));
    CHECK(std::abs(m16 - m8) / m8 < 0.5);
}
