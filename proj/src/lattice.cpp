#include "fracfilt/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace ff::lattice {

OrderOps partial_order_ops(const Point2& a, const Point2& b) {
    OrderOps r;
    r.prec = a.z1 <= b.z1 && a.z2 <= b.z2;
    r.prec_strict = a.z1 < b.z1 && a.z2 < b.z2;
    r.curly = a.z1 <= b.z1 && a.z2 >= b.z2;
    r.meet = {std::min(a.z1, b.z1), std::min(a.z2, b.z2)};
    r.join = {std::max(a.z1, b.z1), std::max(a.z2, b.z2)};
    r.odot = {a.z1, b.z2};
    return r;
}

Rect2::Rect2(Point2 lo_, Point2 hi_) : lo(lo_), hi(hi_) {
    require(lo.z1 <= hi.z1 && lo.z2 <= hi.z2, "Rect2: lo must precede hi");
}

Grid2D::Grid2D(double T1, double T2, std::size_t n1, std::size_t n2)
    : T1_(T1), T2_(T2), n1_(n1), n2_(n2) {
    require(T1 > 0 && T2 > 0, "Grid2D: extents must be positive");
    require(n1 >= 1 && n2 >= 1, "Grid2D: need at least one cell per axis");
}

namespace {
std::size_t snap_axis(double c, double T, std::size_t n, double h) {
    if (!(c >= 0.0 && c <= T)) throw std::domain_error("coordinate outside grid domain");
    auto idx = static_cast<std::size_t>(std::floor(c / h));
    return std::min(idx, n - 1);
}
} // namespace

std::size_t Grid2D::snap1(double c) const { return snap_axis(c, T1_, n1_, h1()); }
std::size_t Grid2D::snap2(double c) const { return snap_axis(c, T2_, n2_, h2()); }

std::pair<std::size_t, std::size_t> Grid2D::snap(const Point2& z) const {
    return {snap1(z.z1), snap2(z.z2)};
}

SampledField2D::SampledField2D(Grid2D g, Matrix v) : grid(g), values(std::move(v)) {
    require(values.rows() == grid.n1() && values.cols() == grid.n2(),
            "SampledField2D: values must be n1 x n2");
    for (std::size_t k = 0; k < values.size(); ++k)
        require(std::isfinite(values.data()[k]), "SampledField2D: values must be finite");
}

double rect_increment(const SampledField2D& f, const Rect2& r) {
    const Grid2D& g = f.grid;
    auto [i0, j0] = g.snap(r.lo);
    auto [i1, j1] = g.snap(r.hi);
    // degenerate after snapping: all four corners coincide along that axis
    return f.values(i1, j1) - f.values(i0, j1) - f.values(i1, j0) + f.values(i0, j0);
}

SampledField2D accumulate(const SampledField2D& inc) {
    Matrix c(inc.values.rows(), inc.values.cols());
    for (std::size_t i = 0; i < c.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < c.cols(); ++j) {
            row += inc.values(i, j);
            c(i, j) = row + (i > 0 ? c(i - 1, j) : 0.0);
        }
    }
    return {inc.grid, std::move(c)};
}

SampledField2D increments_of(const SampledField2D& cum) {
    const Matrix& v = cum.values;
    Matrix d(v.rows(), v.cols());
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) {
            double a = v(i, j);
            double b = i > 0 ? v(i - 1, j) : 0.0;
            double c = j > 0 ? v(i, j - 1) : 0.0;
            double e = (i > 0 && j > 0) ? v(i - 1, j - 1) : 0.0;
            d(i, j) = a - b - c + e;
        }
    return {cum.grid, std::move(d)};
}

double double_integral_discrete(
    const std::function<double(const Point2&, const Point2&)>& psi,
    const SampledField2D& A, const SampledField2D& B, const Point2& z) {
    require(A.grid == B.grid, "double_integral_discrete: grids must match");
    const Grid2D& g = A.grid;
    auto [iz, jz] = g.snap(z);
    double s = 0.0;
    // pairs (i,j), (k,l) with i<k, l<j; all cells inside R_z
    for (std::size_t k = 1; k <= iz; ++k)
        for (std::size_t j = 1; j <= jz; ++j) {
            // join of the pair is (k, j)
            for (std::size_t i = 0; i < k; ++i) {
                if (A.values(i, j) == 0.0) continue;
                for (std::size_t l = 0; l < j; ++l) {
                    double b = B.values(k, l);
                    if (b == 0.0) continue;
                    s += psi(g.node(i, j), g.node(k, l)) * A.values(i, j) * b;
                }
            }
        }
    return s;
}

} // namespace ff::lattice
