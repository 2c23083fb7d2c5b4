#include "fracfilt/model.hpp"

#include <cmath>
#include <string>

namespace ff::model {

double check_lipschitz(const SdeCoefficients& c, double lo, double hi, int samples) {
    double worst = 0.0;
    double step = (hi - lo) / samples;
    for (int i = 0; i < samples; ++i) {
        double x = lo + i * step, y = x + step;
        double num = std::abs(c.drift(x) - c.drift(y)) + std::abs(c.diffusion(x) - c.diffusion(y));
        worst = std::max(worst, num / step);
    }
    return worst;
}

double holder_constant(const SensorFunction& s, double lo, double hi,
                       std::mt19937_64& gen, int pairs) {
    std::uniform_real_distribution<double> u(lo, hi);
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        double x = u(gen), y = u(gen);
        if (x == y) continue;
        worst = std::max(worst, std::abs(s.g(x) - s.g(y)) /
                                    std::pow(std::abs(x - y), s.holder_order));
    }
    return worst;
}

lattice::SampledField2D simulate_signal(const SdeCoefficients& c,
                                        const gauss::GaussianFieldSample& wiener,
                                        const lattice::Grid2D& g) {
    require(wiener.cumulative.grid == g, "simulate_signal: grid mismatch");
    const Matrix& dW = wiener.increments.values;
    Matrix X(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j) {
            double up = i > 0 ? X(i - 1, j) : c.x0;
            double right = j > 0 ? X(i, j - 1) : c.x0;
            double low = (i > 0 && j > 0) ? X(i - 1, j - 1) : c.x0;
            double v = up + right - low + c.drift(low) * g.cell_area(i, j) +
                       c.diffusion(low) * dW(i, j);
            if (!std::isfinite(v))
                throw std::runtime_error("simulate_signal: numerical blow-up at node (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
            X(i, j) = v;
        }
    return {g, std::move(X)};
}

lattice::SampledField2D g_star(const lattice::SampledField2D& X, const SensorFunction& s,
                               const gauss::HurstPair& H) {
    const auto& g = X.grid;
    Matrix out(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i) {
        double w1 = std::pow(g.node1(i), 0.5 - H.alpha);
        for (std::size_t j = 0; j < g.n2(); ++j)
            out(i, j) = w1 * std::pow(g.node2(j), 0.5 - H.beta) * s.g(X.values(i, j));
    }
    return {g, std::move(out)};
}

DeltaField delta_2d(const lattice::SampledField2D& X, const SensorFunction& s,
                    const gauss::HurstPair& H) {
    const auto& g = X.grid;
    auto gs = g_star(X, s, H);
    frac::Grid1D g1(0.0, g.T1(), g.n1()), g2(0.0, g.T2(), g.n2());
    bool warn = false;
    auto make_op = [&warn](const frac::Grid1D& ga, double order) {
        return frac::Op1D([ga, order, &warn](const std::vector<double>& v) {
            auto d = frac::rl_derivative_left({ga, v}, {order});
            if (!d.stable) warn = true;
            return d.fn.values;
        });
    };
    auto t = frac::tensor_apply(make_op(g1, H.alpha - 0.5), make_op(g2, H.beta - 0.5), gs);
    const double cc = gauss::c_hurst_star(H.alpha) * gauss::c_hurst_star(H.beta);
    Matrix out(g.n1(), g.n2());
    double l2 = 0.0;
    for (std::size_t i = 0; i < g.n1(); ++i) {
        double w1 = std::pow(g.node1(i), H.alpha - 0.5);
        for (std::size_t j = 0; j < g.n2(); ++j) {
            double v = w1 * std::pow(g.node2(j), H.beta - 0.5) * t.values(i, j) / cc;
            out(i, j) = v;
            l2 += v * v * g.cell_area(i, j);
        }
    }
    DeltaField d{{g, std::move(out)}, std::sqrt(l2), warn};
    return d;
}

frac::SampledFn1D delta_1d(const frac::SampledFn1D& h, double H) {
    const auto& g = h.grid;
    std::vector<double> prod(g.n());
    for (std::size_t i = 0; i < g.n(); ++i)
        prod[i] = std::pow(g.node(i), 0.5 - H) * h.values[i];
    auto d = frac::rl_derivative_left({g, std::move(prod)}, {H - 0.5});
    const double cs = gauss::c_hurst_star(H);
    std::vector<double> out(g.n());
    for (std::size_t i = 0; i < g.n(); ++i)
        out[i] = std::pow(g.node(i), H - 0.5) * d.fn.values[i] / cs;
    return {g, std::move(out)};
}

lattice::SampledField2D make_observation(const lattice::SampledField2D& X,
                                         const SensorFunction& s,
                                         const gauss::GaussianFieldSample& noise) {
    require(X.grid == noise.cumulative.grid, "make_observation: grid mismatch");
    const auto& g = X.grid;
    Matrix drift_inc(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            drift_inc(i, j) = s.g(X.values(i, j)) * g.cell_area(i, j);
    auto drift_cum = lattice::accumulate({g, std::move(drift_inc)});
    Matrix out(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            out(i, j) = drift_cum.values(i, j) + noise.cumulative.values(i, j);
    return {g, std::move(out)};
}

LikelihoodState likelihood(const DeltaField& delta, const lattice::SampledField2D& wy_inc,
                           const lattice::SampledField2D* wb_inc) {
    require(delta.values.grid == wy_inc.grid, "likelihood: grid mismatch");
    const auto& g = delta.values.grid;
    Matrix v2_inc(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j) {
            double d = delta.values.values(i, j);
            v2_inc(i, j) = -d * wy_inc.values(i, j) + 0.5 * d * d * g.cell_area(i, j);
        }
    LikelihoodState st{lattice::accumulate({g, std::move(v2_inc)}), std::nullopt, 0.0};
    if (wb_inc != nullptr) {
        require(wb_inc->grid == g, "likelihood: grid mismatch (V1)");
        Matrix v1_inc(g.n1(), g.n2());
        for (std::size_t i = 0; i < g.n1(); ++i)
            for (std::size_t j = 0; j < g.n2(); ++j) {
                double d = delta.values.values(i, j);
                v1_inc(i, j) = -d * wb_inc->values(i, j) - 0.5 * d * d * g.cell_area(i, j);
            }
        st.log_v_v1 = lattice::accumulate({g, std::move(v1_inc)});
        double worst = 0.0;
        for (std::size_t k = 0; k < st.log_v.values.size(); ++k)
            worst = std::max(worst, std::abs(st.log_v.values.data()[k] -
                                             st.log_v_v1->values.data()[k]));
        st.v1_v2_max_abs_diff = worst;
    }
    return st;
}

} // namespace ff::model
