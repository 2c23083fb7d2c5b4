#pragma once

#include <cstddef>
#include <functional>

#include "fracfilt/core.hpp"

namespace ff::lattice {

/// Point of the positive quadrant.
struct Point2 {
    double z1 = 0.0;
    double z2 = 0.0;
};

/// All partial-order relations and binary operations of the plane at once.
struct OrderOps {
    bool prec = false;         // a1 <= b1 and a2 <= b2
    bool prec_strict = false;  // a1 <  b1 and a2 <  b2
    bool curly = false;        // a1 <= b1 and a2 >= b2  (the "anti-comparable" cone)
    Point2 meet;               // componentwise min
    Point2 join;               // componentwise max
    Point2 odot;               // (a1, b2)
};

OrderOps partial_order_ops(const Point2& a, const Point2& b);

/// Axis-aligned rectangle (lo, hi], lo ≺ hi required.
struct Rect2 {
    Point2 lo;
    Point2 hi;
    Rect2(Point2 lo_, Point2 hi_);
};

/// Uniform staggered grid on [0,T1]x[0,T2]: n1*n2 cells, nodes at cell midpoints.
///
/// Nodes never touch the axes, so power weights s^(1/2-alpha) stay finite.
/// The increment lattice uses the dual cells (x_{i-1}, x_i] with x_{-1}=0,
/// which makes node-cumulative sums exact: sum of dual areas over R_node equals
/// z1*z2 at the node.
class Grid2D {
public:
    Grid2D(double T1, double T2, std::size_t n1, std::size_t n2);

    double T1() const { return T1_; }
    double T2() const { return T2_; }
    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    double h1() const { return T1_ / static_cast<double>(n1_); }
    double h2() const { return T2_ / static_cast<double>(n2_); }

    double node1(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h1(); }
    double node2(std::size_t j) const { return (static_cast<double>(j) + 0.5) * h2(); }
    Point2 node(std::size_t i, std::size_t j) const { return {node1(i), node2(j)}; }

    /// Dual-cell widths: w_0 = h/2, else h.
    double dual_w1(std::size_t i) const { return i == 0 ? 0.5 * h1() : h1(); }
    double dual_w2(std::size_t j) const { return j == 0 ? 0.5 * h2() : h2(); }
    double cell_area(std::size_t i, std::size_t j) const { return dual_w1(i) * dual_w2(j); }

    /// Snap a coordinate to the index of the cell containing it (tolerance h/2
    /// around each node by construction). Throws std::domain_error outside [0,T].
    std::size_t snap1(double c) const;
    std::size_t snap2(double c) const;
    std::pair<std::size_t, std::size_t> snap(const Point2& z) const;

    bool operator==(const Grid2D& o) const {
        return T1_ == o.T1_ && T2_ == o.T2_ && n1_ == o.n1_ && n2_ == o.n2_;
    }

private:
    double T1_, T2_;
    std::size_t n1_, n2_;
};

/// Real field sampled at the grid nodes (or, equally, per-cell increments).
struct SampledField2D {
    Grid2D grid;
    Matrix values;  // n1 x n2

    SampledField2D(Grid2D g, Matrix v);
    static SampledField2D zeros(const Grid2D& g) { return {g, Matrix(g.n1(), g.n2())}; }
};

/// Four-corner increment of a node-cumulative field over a snapped rectangle.
double rect_increment(const SampledField2D& cumulative, const Rect2& r);

/// Inclusive 2D prefix sum: cumulative(i,j) = sum_{k<=i, l<=j} inc(k,l).
SampledField2D accumulate(const SampledField2D& increments);

/// Lattice increments of a node-cumulative field (inverse of accumulate).
SampledField2D increments_of(const SampledField2D& cumulative);

/// Discrete double integral over the open anti-comparable cone:
///   sum over pairs cell (i,j), cell (k,l) with i<k and l<j, both inside R_z, of
///   psi(node_ij, node_kl) * A(i,j) * B(k,l).
double double_integral_discrete(
    const std::function<double(const Point2&, const Point2&)>& psi,
    const SampledField2D& A, const SampledField2D& B, const Point2& z);

} // namespace ff::lattice
