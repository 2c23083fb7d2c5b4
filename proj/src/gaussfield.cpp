#include "fracfilt/gaussfield.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

#include <Eigen/Dense>

#include "quadrature.hpp"

namespace ff::gauss {

HurstPair::HurstPair(double a, double b) : alpha(a), beta(b) {
    require(a > 0.5 && a < 1.0 && b > 0.5 && b < 1.0,
            "HurstPair: persistent regime requires indices in (1/2, 1)");
}

double c_hurst(double H) {
    return std::sqrt(2.0 * H * std::tgamma(1.5 - H) /
                     (std::tgamma(H + 0.5) * std::tgamma(2.0 - 2.0 * H)));
}

double c_hurst_star(double H) { return c_hurst(H) * std::tgamma(H + 0.5); }

double c_hurst_prime(double H) {
    return (1.0 / std::tgamma(1.5 - H)) *
           std::sqrt(std::tgamma(2.0 - 2.0 * H) /
                     (2.0 * H * std::tgamma(1.5 - H) * std::tgamma(H + 0.5)));
}

double gamma_cov(double H, double s, double t) {
    return 0.5 * (std::pow(std::abs(s), 2 * H) + std::pow(std::abs(t), 2 * H) -
                  std::pow(std::abs(t - s), 2 * H));
}

double kernel_K(double H, double t, double s) {
    if (s == t && s > 0.0) return 0.0;  // H > 1/2 limit
    if (!(s > 0.0 && s < t)) throw std::domain_error("kernel_K: need 0 < s < t");
    // substitute w = (u-s)^q, q = H+1/2: the integrand becomes smooth at u = s
    const double q = H + 0.5;
    double inner = (1.0 / q) *
                   detail::adaptive_quad(
                       [H, s, q](double w) { return std::pow(s + std::pow(w, 1.0 / q), H - 1.5); },
                       0.0, std::pow(t - s, q));
    return c_hurst(H) * (std::pow(t / s, H - 0.5) * std::pow(t - s, H - 0.5) -
                         (H - 0.5) * std::pow(s, 0.5 - H) * inner);
}

double kernel_K_inv(double H, double t, double s) {
    if (s == t && s > 0.0) return 0.0;  // singular diagonal truncated
    if (!(s > 0.0 && s < t)) throw std::domain_error("kernel_K_inv: need 0 < s < t");
    // substitute w = (u-s)^p, p = 3/2-H, which removes the (u-s)^{1/2-H} singularity
    const double p = 1.5 - H;
    double inner = (1.0 / p) *
                   detail::adaptive_quad(
                       [H, s, p](double w) { return std::pow(s + std::pow(w, 1.0 / p), H - 1.5); },
                       0.0, std::pow(t - s, p));
    return c_hurst_prime(H) * (std::pow(t / s, H - 0.5) * std::pow(t - s, 0.5 - H) -
                               (H - 0.5) * std::pow(s, 0.5 - H) * inner);
}

GaussianFieldSample GaussianFieldSample::from_increments(lattice::SampledField2D inc) {
    auto cum = lattice::accumulate(inc);
    return {std::move(cum), std::move(inc)};
}

GaussianFieldSample GaussianFieldSample::from_cumulative(lattice::SampledField2D cum) {
    auto inc = lattice::increments_of(cum);
    return {std::move(cum), std::move(inc)};
}

double CovarianceModel::at(const lattice::Grid2D& g, std::size_t i, std::size_t j,
                           std::size_t k, std::size_t l) const {
    double z1 = g.node1(i), z2 = g.node2(j), w1 = g.node1(k), w2 = g.node2(l);
    if (kind == CovKind::wiener) return std::min(z1, w1) * std::min(z2, w2);
    return gamma_cov(hurst.alpha, z1, w1) * gamma_cov(hurst.beta, z2, w2);
}

GaussianFieldSample simulate_wiener_sheet(const lattice::Grid2D& g, std::mt19937_64& gen) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix inc(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            inc(i, j) = nd(gen) * std::sqrt(g.cell_area(i, j));
    return GaussianFieldSample::from_increments({g, std::move(inc)});
}

namespace {

Eigen::MatrixXd axis_gamma(const lattice::Grid2D& g, int axis, double H) {
    std::size_t n = axis == 1 ? g.n1() : g.n2();
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double xi = axis == 1 ? g.node1(i) : g.node2(i);
            double xj = axis == 1 ? g.node1(j) : g.node2(j);
            M(i, j) = gamma_cov(H, xi, xj);
        }
    return M;
}

// Cholesky with a single jitter retry for near-PSD matrices.
Eigen::MatrixXd chol_lower(Eigen::MatrixXd M) {
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    double jitter = 1e-12 * M.trace() / static_cast<double>(M.rows());
    M.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> retry(M);
    if (retry.info() != Eigen::Success)
        throw std::runtime_error("covariance factorization failed even after jitter");
    return retry.matrixL();
}

} // namespace

GaussianFieldSample simulate_fbs_cholesky(const lattice::Grid2D& g, const HurstPair& H,
                                          std::mt19937_64& gen) {
    require(g.n1() * g.n2() <= 4096, "simulate_fbs_cholesky: dense factorization limit (4096 nodes)");
    Eigen::MatrixXd L1 = chol_lower(axis_gamma(g, 1, H.alpha));
    Eigen::MatrixXd L2 = chol_lower(axis_gamma(g, 2, H.beta));
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd Z(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j) Z(i, j) = nd(gen);
    Eigen::MatrixXd B = L1 * Z * L2.transpose();
    Matrix cum(g.n1(), g.n2());
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j) cum(i, j) = B(i, j);
    return GaussianFieldSample::from_cumulative({g, std::move(cum)});
}

namespace {

// Average of the kernel over the dual cell ending at node i: the midpoint value
// there is the degenerate K(t,t), so the cell mass is integrated instead.
double diag_cell_average(double H, const frac::Grid1D& g, std::size_t i, bool inverse) {
    const double t = g.node(i);
    const double lo = i == 0 ? 0.0 : g.node(i - 1);
    const double w = t - lo;
    if (!inverse) {
        double v = detail::adaptive_quad(
            [H, t](double s) { return kernel_K(H, t, s); }, lo, t, 1e-10, 1e-8);
        return v / w;
    }
    // substitute u = (t-s)^p to absorb the (t-s)^{1/2-H} singularity at s = t
    const double p = 1.5 - H;
    double v = detail::adaptive_quad(
        [H, t, p](double u) {
            double s = t - std::pow(u, 1.0 / p);
            return kernel_K_inv(H, t, s) * std::pow(u, 1.0 / p - 1.0) / p;
        },
        0.0, std::pow(w, p), 1e-10, 1e-8);
    return v / w;
}

} // namespace

namespace {

// Kernel matrices are reused heavily in the filter inner loop; cache them per
// (grid, H, side). Entries are immutable once built.
struct KernelCacheKey {
    double a, b, H;
    std::size_t n;
    bool inverse;
    bool operator==(const KernelCacheKey&) const = default;
};

struct KernelCacheKeyHash {
    std::size_t operator()(const KernelCacheKey& k) const {
        std::hash<double> hd;
        std::hash<std::size_t> hs;
        std::size_t h = hd(k.a);
        h = h * 1000003u ^ hd(k.b);
        h = h * 1000003u ^ hd(k.H);
        h = h * 1000003u ^ hs(k.n);
        h = h * 1000003u ^ static_cast<std::size_t>(k.inverse);
        return h;
    }
};

std::mutex g_kernel_cache_mutex;
std::unordered_map<KernelCacheKey, std::shared_ptr<const Matrix>, KernelCacheKeyHash>
    g_kernel_cache;

} // namespace

Matrix kernel_matrix(const frac::Grid1D& g, double H, bool inverse) {
    KernelCacheKey key{g.a(), g.b(), H, g.n(), inverse};
    {
        std::lock_guard<std::mutex> lock(g_kernel_cache_mutex);
        auto it = g_kernel_cache.find(key);
        if (it != g_kernel_cache.end()) return *it->second;
    }
    Matrix M(g.n(), g.n());
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            M(i, j) = inverse ? kernel_K_inv(H, g.node(i), g.node(j))
                              : kernel_K(H, g.node(i), g.node(j));
        M(i, i) = diag_cell_average(H, g, i, inverse);
    }
    auto shared = std::make_shared<const Matrix>(M);
    std::lock_guard<std::mutex> lock(g_kernel_cache_mutex);
    g_kernel_cache.emplace(key, std::move(shared));
    return M;
}

namespace {

// out(i,j) = sum_{k<=i, l<=j} A1(i,k) * inc(k,l) * A2(j,l); A1, A2 lower triangular.
Matrix sandwich(const Matrix& A1, const Matrix& inc, const Matrix& A2) {
    std::size_t n1 = inc.rows(), n2 = inc.cols();
    Matrix tmp(n1, n2);  // tmp(k,j) = sum_{l<=j} A2(j,l) inc(k,l)
    for (std::size_t k = 0; k < n1; ++k)
        for (std::size_t j = 0; j < n2; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l <= j; ++l) s += A2(j, l) * inc(k, l);
            tmp(k, j) = s;
        }
    Matrix out(n1, n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= i; ++k) s += A1(i, k) * tmp(k, j);
            out(i, j) = s;
        }
    return out;
}

frac::Grid1D axis_grid(const lattice::Grid2D& g, int axis) {
    return axis == 1 ? frac::Grid1D(0.0, g.T1(), g.n1()) : frac::Grid1D(0.0, g.T2(), g.n2());
}

} // namespace

GaussianFieldSample simulate_fbs_kernel(const lattice::Grid2D& g, const HurstPair& H,
                                        const GaussianFieldSample& wiener) {
    require(wiener.cumulative.grid == g, "simulate_fbs_kernel: grid mismatch");
    Matrix K1 = kernel_matrix(axis_grid(g, 1), H.alpha, false);
    Matrix K2 = kernel_matrix(axis_grid(g, 2), H.beta, false);
    Matrix cum = sandwich(K1, wiener.increments.values, K2);
    return GaussianFieldSample::from_cumulative({g, std::move(cum)});
}

GaussianFieldSample whiten(const GaussianFieldSample& y, const HurstPair& H) {
    const auto& g = y.cumulative.grid;
    Matrix K1 = kernel_matrix(axis_grid(g, 1), H.alpha, true);
    Matrix K2 = kernel_matrix(axis_grid(g, 2), H.beta, true);
    Matrix cum = sandwich(K1, y.increments.values, K2);
    return GaussianFieldSample::from_cumulative({g, std::move(cum)});
}

Matrix color_cov_axis(const frac::Grid1D& g, double H) {
    Matrix K = kernel_matrix(g, H, false);
    std::size_t n = g.n();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= std::min(i, j); ++k)
                s += K(i, k) * K(j, k) * g.dual_w(k);
            out(i, j) = s;
        }
    return out;
}

Matrix fbs_cov_axis(const frac::Grid1D& g, double H) {
    std::size_t n = g.n();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = gamma_cov(H, g.node(i), g.node(j));
    return out;
}

Matrix whiten_cov_axis(const frac::Grid1D& g, double H) {
    std::size_t n = g.n();
    Matrix K = kernel_matrix(g, H, true);
    // A(i,m) = sum_k Kinv(i,k) D(k,m) with D(k,k)=1, D(k,k-1)=-1 (lattice difference);
    // cov = A Gamma A^T
    Matrix Am(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < n; ++m) {
            double v = 0.0;
            if (m <= i) v += K(i, m);                       // D(m,m) contribution
            if (m + 1 <= i && m + 1 < n) v -= K(i, m + 1);  // D(m+1,m) contribution
            Am(i, m) = v;
        }
    Matrix G = fbs_cov_axis(g, H);
    Matrix AG(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += Am(i, k) * G(k, j);
            AG(i, j) = s;
        }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += AG(i, k) * Am(j, k);
            out(i, j) = s;
        }
    return out;
}

} // namespace ff::gauss
