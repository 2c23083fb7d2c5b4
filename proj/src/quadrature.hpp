#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature for the smooth inner integrals of
// the fBm kernels. Internal to the library.

#include <cmath>
#include <functional>

namespace ff::detail {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

inline QuadResult gk15(const std::function<double(double)>& f, double a, double b) {
    // Kronrod-15 nodes/weights on [-1,1]; Gauss-7 weights on the odd-indexed nodes.
    static const double xk[15] = {
        -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
        -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
        0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
        0.864864423359769,  0.949107912342759,  0.991455371120813};
    static const double wk[15] = {
        0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
        0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
        0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
        0.104790010322250, 0.063092092629979, 0.022935322010529};
    static const double wg[7] = {
        0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
        0.381830050505119, 0.279705391489277, 0.129484966168870};
    const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
        double v = f(c + hl * xk[i]);
        k += wk[i] * v;
        if (i % 2 == 1) g += wg[i / 2] * v;
    }
    return {k * hl, std::abs((k - g) * hl)};
}

inline double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                            double abs_tol = 1e-11, double rel_tol = 1e-10, int depth = 0) {
    auto r = gk15(f, a, b);
    if (depth >= 24 || r.error <= abs_tol + rel_tol * std::abs(r.value)) return r.value;
    double m = 0.5 * (a + b);
    return adaptive_quad(f, a, m, 0.5 * abs_tol, rel_tol, depth + 1) +
           adaptive_quad(f, m, b, 0.5 * abs_tol, rel_tol, depth + 1);
}

} // namespace ff::detail
