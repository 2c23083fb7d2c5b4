#pragma once

#include <functional>
#include <optional>

#include "fracfilt/fraccalc.hpp"
#include "fracfilt/gaussfield.hpp"
#include "fracfilt/lattice.hpp"

namespace ff::model {

using RealFn = std::function<double(double)>;

/// Signal SDE data. Lipschitz/growth conditions are sampled, not proven;
/// check_lipschitz reports the largest observed difference ratio.
struct SdeCoefficients {
    RealFn drift;
    RealFn diffusion;
    double x0 = 0.0;
};

/// Largest |a(x)-a(y)|+|b(x)-b(y)| over |x-y| on a dense sample of [lo,hi].
double check_lipschitz(const SdeCoefficients& c, double lo, double hi, int samples = 200);

struct SensorFunction {
    RealFn g;
    double holder_order = 1.0;  // lambda of condition (A1)
};

/// Empirical Hoelder-constant estimate max |g(x)-g(y)| / |x-y|^lambda over
/// `pairs` random pairs in [lo,hi]; infinite growth shows up as blow-up.
double holder_constant(const SensorFunction& s, double lo, double hi,
                       std::mt19937_64& gen, int pairs = 200);

struct DeltaField {
    lattice::SampledField2D values;
    double l2_norm = 0.0;          // discrete L2 norm over the domain
    bool stability_warning = false;  // propagated from the fractional derivative
};

/// Per-node log V (V2 form) plus, in simulation mode, the V1 form and their gap.
struct LikelihoodState {
    lattice::SampledField2D log_v;               // log V_z, V2 form
    std::optional<lattice::SampledField2D> log_v_v1;
    double v1_v2_max_abs_diff = 0.0;
};

/// Explicit Euler sweep of X_z = x0 + int a(X) dzeta + int b(X) dW over the
/// dual-cell lattice in lexicographic order. Throws std::runtime_error naming
/// the first node where the recursion leaves the finite range.
lattice::SampledField2D simulate_signal(const SdeCoefficients& c,
                                        const gauss::GaussianFieldSample& wiener,
                                        const lattice::Grid2D& g);

/// g*_z = z1^{1/2-alpha} z2^{1/2-beta} g(X_z).
lattice::SampledField2D g_star(const lattice::SampledField2D& X, const SensorFunction& s,
                               const gauss::HurstPair& H);

/// The delta transform (1/(c*_a c*_b)) z1^{a-1/2} z2^{b-1/2} (D (x) D g*)(z).
DeltaField delta_2d(const lattice::SampledField2D& X, const SensorFunction& s,
                    const gauss::HurstPair& H);

/// 1D building block delta_h(s) = (1/c*_H) s^{H-1/2} D^{H-1/2}[v^{1/2-H} h(v)](s).
frac::SampledFn1D delta_1d(const frac::SampledFn1D& h, double H);

/// Y_z = sum_{cells in R_z} g(X_node) * area + B_z.
lattice::SampledField2D make_observation(const lattice::SampledField2D& X,
                                         const SensorFunction& s,
                                         const gauss::GaussianFieldSample& noise);

/// log V from the V2 form against whitened-observation increments; when the true
/// driving sheet increments are supplied (simulation mode) the V1 form is also
/// computed and the maximal gap recorded as a diagnostic.
LikelihoodState likelihood(const DeltaField& delta, const lattice::SampledField2D& wy_increments,
                           const lattice::SampledField2D* wb_increments = nullptr);

} // namespace ff::model
