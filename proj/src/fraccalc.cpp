#include "fracfilt/fraccalc.hpp"

#include <algorithm>
#include <cmath>

namespace ff::frac {

Grid1D::Grid1D(double a, double b, std::size_t n) : a_(a), b_(b), n_(n) {
    require(b > a, "Grid1D: need b > a");
    require(n >= 1, "Grid1D: need at least one cell");
}

SampledFn1D::SampledFn1D(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
    require(values.size() == grid.n(), "SampledFn1D: need one value per node");
    for (double x : values) require(std::isfinite(x), "SampledFn1D: values must be finite");
}

SampledFn1D SampledFn1D::sample(const Grid1D& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) v[i] = f(g.node(i));
    return {g, std::move(v)};
}

namespace {

// Node-evaluated quadrature kernel: y_i = sum_{j<=i} kn[i-j] * phi_j with
// kn[d] = h^a ((d+1/2)^a - (d-1/2)^a) / Gamma(a+1), kn[0] = h^a (1/2)^a / Gamma(a+1).
std::vector<double> node_kernel(std::size_t n, double h, double a) {
    std::vector<double> k(n);
    const double c = std::pow(h, a) / std::tgamma(a + 1.0);
    k[0] = c * std::pow(0.5, a);
    for (std::size_t d = 1; d < n; ++d) {
        double dd = static_cast<double>(d);
        k[d] = c * (std::pow(dd + 0.5, a) - std::pow(dd - 0.5, a));
    }
    return k;
}

// Edge-evaluated kernel: G_e = sum_{m<e} ke[e-1-m] * phi_m with
// ke[d] = h^a ((d+1)^a - d^a) / Gamma(a+1).
std::vector<double> edge_kernel(std::size_t n, double h, double a) {
    std::vector<double> k(n);
    const double c = std::pow(h, a) / std::tgamma(a + 1.0);
    for (std::size_t d = 0; d < n; ++d) {
        double dd = static_cast<double>(d);
        k[d] = c * (std::pow(dd + 1.0, a) - std::pow(dd, a));
    }
    return k;
}

std::vector<double> convolve_lower(const std::vector<double>& k, const std::vector<double>& x) {
    std::size_t n = x.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += k[i - j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> reflected(const std::vector<double>& x) {
    return {x.rbegin(), x.rend()};
}

// Derivative core: edge values of I^{1-alpha} f, then per-cell difference.
std::vector<double> derivative_values(const SampledFn1D& f, double alpha) {
    const Grid1D& g = f.grid;
    const std::size_t n = g.n();
    const double h = g.h();
    auto ke = edge_kernel(n, h, 1.0 - alpha);
    std::vector<double> out(n);
    // G_{e} = sum_{m < e} ke[e-1-m] f_m; out_i = (G_{i+1} - G_i)/h
    // G_{i+1} - G_i = ke[0] f_i + sum_{m<i} (ke[i-m] - ke[i-1-m]) f_m
    for (std::size_t i = 0; i < n; ++i) {
        double s = ke[0] * f.values[i];
        for (std::size_t m = 0; m < i; ++m) s += (ke[i - m] - ke[i - m - 1]) * f.values[m];
        out[i] = s / h;
    }
    return out;
}

// Restriction of fine-grid node values to the half-resolution midpoint grid:
// coarse node k sits at the shared edge of fine cells 2k, 2k+1.
std::vector<double> to_coarse(const std::vector<double>& fine) {
    std::vector<double> c(fine.size() / 2);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = 0.5 * (fine[2 * k] + fine[2 * k + 1]);
    return c;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / (std::sqrt(den) + 1e-300);
}

} // namespace

SampledFn1D rl_integral_left(const SampledFn1D& phi, FracOrder alpha) {
    require(alpha.alpha > 0.0, "rl_integral_left: order must be positive");
    auto k = node_kernel(phi.grid.n(), phi.grid.h(), alpha.alpha);
    return {phi.grid, convolve_lower(k, phi.values)};
}

SampledFn1D rl_integral_right(const SampledFn1D& phi, FracOrder alpha) {
    require(alpha.alpha > 0.0, "rl_integral_right: order must be positive");
    auto k = node_kernel(phi.grid.n(), phi.grid.h(), alpha.alpha);
    return {phi.grid, reflected(convolve_lower(k, reflected(phi.values)))};
}

FracDeriv rl_derivative_left(const SampledFn1D& f, FracOrder alpha, double stability_threshold) {
    require(alpha.alpha > 0.0 && alpha.alpha < 1.0, "rl_derivative_left: order must be in (0,1)");
    FracDeriv r{{f.grid, derivative_values(f, alpha.alpha)}};
    const std::size_t n = f.grid.n();
    if (n >= 8 && n % 2 == 0) {
        Grid1D gc(f.grid.a(), f.grid.b(), n / 2);
        SampledFn1D fc(gc, to_coarse(f.values));
        auto dc = derivative_values(fc, alpha.alpha);
        r.stability_metric = rel_l2(dc, to_coarse(r.fn.values));
        r.stable = r.stability_metric <= stability_threshold;
    }
    return r;
}

FracDeriv rl_derivative_right(const SampledFn1D& f, FracOrder alpha, double stability_threshold) {
    require(alpha.alpha > 0.0 && alpha.alpha < 1.0, "rl_derivative_right: order must be in (0,1)");
    SampledFn1D fr(f.grid, reflected(f.values));
    FracDeriv r = rl_derivative_left(fr, alpha, stability_threshold);
    r.fn.values = reflected(r.fn.values);
    return r;
}

lattice::SampledField2D tensor_apply(const Op1D& op1, const Op1D& op2,
                                     const lattice::SampledField2D& f) {
    const auto& g = f.grid;
    Matrix tmp(g.n1(), g.n2());
    std::vector<double> row(g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i) {
        for (std::size_t j = 0; j < g.n2(); ++j) row[j] = f.values(i, j);
        auto r = op2(row);
        require(r.size() == g.n2(), "tensor_apply: op2 changed the slice length");
        for (std::size_t j = 0; j < g.n2(); ++j) tmp(i, j) = r[j];
    }
    Matrix out(g.n1(), g.n2());
    std::vector<double> col(g.n1());
    for (std::size_t j = 0; j < g.n2(); ++j) {
        for (std::size_t i = 0; i < g.n1(); ++i) col[i] = tmp(i, j);
        auto c = op1(col);
        require(c.size() == g.n1(), "tensor_apply: op1 changed the slice length");
        for (std::size_t i = 0; i < g.n1(); ++i) out(i, j) = c[i];
    }
    return {g, std::move(out)};
}

Matrix integral_left_matrix(const Grid1D& g, double alpha) {
    auto k = node_kernel(g.n(), g.h(), alpha);
    Matrix M(g.n(), g.n());
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j <= i; ++j) M(i, j) = k[i - j];
    return M;
}

Matrix derivative_left_matrix(const Grid1D& g, double alpha) {
    const std::size_t n = g.n();
    auto ke = edge_kernel(n, g.h(), 1.0 - alpha);
    Matrix M(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        M(i, i) = ke[0] / g.h();
        for (std::size_t m = 0; m < i; ++m) M(i, m) = (ke[i - m] - ke[i - m - 1]) / g.h();
    }
    return M;
}

std::vector<double> apply_matrix(const Matrix& M, const std::vector<double>& x) {
    require(M.cols() == x.size(), "apply_matrix: size mismatch");
    std::vector<double> y(M.rows(), 0.0);
    for (std::size_t i = 0; i < M.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M.cols(); ++j) s += M(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

} // namespace ff::frac
