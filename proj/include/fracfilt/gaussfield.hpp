#pragma once

#include <cstdint>
#include <random>

#include "fracfilt/core.hpp"
#include "fracfilt/fraccalc.hpp"
#include "fracfilt/lattice.hpp"

namespace ff::gauss {

/// Hurst indices of the fractional Brownian sheet, persistent regime only.
struct HurstPair {
    double alpha;
    double beta;
    HurstPair(double a, double b);
};

/// Normalizing constants of the K_H / K_H^{-1} kernels.
double c_hurst(double H);
double c_hurst_star(double H);
double c_hurst_prime(double H);

/// fBm covariance gamma_H(s,t) = (|s|^2H + |t|^2H - |t-s|^2H)/2.
double gamma_cov(double H, double s, double t);

/// Volterra kernel K_H(t,s), 0 < s < t (throws std::domain_error otherwise).
/// K_H(t,t) is taken as its H > 1/2 limit, zero.
double kernel_K(double H, double t, double s);

/// Inverse kernel K_H^{-1}(t,s), 0 < s < t; the singular diagonal is truncated to zero.
double kernel_K_inv(double H, double t, double s);

/// Field sample carrying both representations: cumulative node values and the
/// dual-cell lattice increments (each recoverable from the other).
struct GaussianFieldSample {
    lattice::SampledField2D cumulative;
    lattice::SampledField2D increments;

    static GaussianFieldSample from_increments(lattice::SampledField2D inc);
    static GaussianFieldSample from_cumulative(lattice::SampledField2D cum);
};

enum class CovKind { wiener, fbs };

struct CovarianceModel {
    CovKind kind = CovKind::wiener;
    HurstPair hurst{0.6, 0.6};

    /// Covariance of the cumulative field between two nodes.
    double at(const lattice::Grid2D& g, std::size_t i, std::size_t j,
              std::size_t k, std::size_t l) const;
};

/// Per-cell i.i.d. N(0, cell area) increments; exact Wiener law at the nodes.
GaussianFieldSample simulate_wiener_sheet(const lattice::Grid2D& g, std::mt19937_64& gen);

/// Exact-in-law fBs sample via per-axis Cholesky factors of the product covariance.
/// Dense factorization; node count is expected to stay at desk scale (<= 4096).
GaussianFieldSample simulate_fbs_cholesky(const lattice::Grid2D& g, const HurstPair& H,
                                          std::mt19937_64& gen);

/// Kernel-integral construction B_z = sum_{cells in R_z} K_a(z1,s1) K_b(z2,s2) dW.
GaussianFieldSample simulate_fbs_kernel(const lattice::Grid2D& g, const HurstPair& H,
                                        const GaussianFieldSample& wiener);

/// Whitening transform W_z = sum_{cells in R_z} K^{-1}_a K^{-1}_b dY.
GaussianFieldSample whiten(const GaussianFieldSample& y, const HurstPair& H);

/// Cached per-axis kernel matrix: entries at node pairs s < t, and on the
/// diagonal the kernel's average over the dual cell (the midpoint value there
/// is degenerate). Zero above the diagonal.
Matrix kernel_matrix(const frac::Grid1D& g, double H, bool inverse);

/// Discrete-law covariance of one axis of the kernel-route fBs: K diag(w) K^T.
Matrix color_cov_axis(const frac::Grid1D& g, double H);
/// Discrete-law covariance of one whitened axis: (Kinv D) Gamma (Kinv D)^T.
Matrix whiten_cov_axis(const frac::Grid1D& g, double H);
/// Exact fBs covariance at the axis nodes.
Matrix fbs_cov_axis(const frac::Grid1D& g, double H);

} // namespace ff::gauss
