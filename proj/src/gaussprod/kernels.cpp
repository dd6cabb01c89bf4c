#include <cmath>
#include <sstream>

#include "specmult/bases.hpp"
#include "specmult/gaussprod.hpp"
#include "specmult/quadrature.hpp"

namespace specmult {

bool local_region(double s, std::span<const double> x1, std::span<const double> y1)
{
    if (!(s > 0.0)) throw ParameterError("local region needs s > 0");
    if (x1.size() != y1.size()) throw ShapeError("local region points differ in dimension");
    double d2 = 0.0, nx = 0.0, ny = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        d2 += (x1[i] - y1[i]) * (x1[i] - y1[i]);
        nx += x1[i] * x1[i];
        ny += y1[i] * y1[i];
    }
    return std::sqrt(d2) <= s / (1.0 + std::sqrt(nx) + std::sqrt(ny));
}

bool local_region(double s, double x1, double y1) { return local_region(s, {&x1, 1}, {&y1, 1}); }

std::pair<CMat, CMat> kernel_split(const CMat& K, const WeightedGrid& gauss, std::size_t n2, double s)
{
    const std::size_t n1 = gauss.size();
    const auto n = static_cast<Eigen::Index>(n1 * n2);
    if (K.rows() != n || K.cols() != n) throw ShapeError("kernel size does not match the product grid");
    if (!K.allFinite()) throw DomainError("kernel has non-finite entries");
    CMat loc = CMat::Zero(n, n), glob = CMat::Zero(n, n);
    const std::size_t dim = gauss.dim;
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n1; ++b) {
            const bool in = local_region(s, std::span<const double>(gauss.nodes.data() + a * dim, dim),
                                         std::span<const double>(gauss.nodes.data() + b * dim, dim));
            CMat& dst = in ? loc : glob;
            dst.block(static_cast<Eigen::Index>(a * n2), static_cast<Eigen::Index>(b * n2), static_cast<Eigen::Index>(n2),
                      static_cast<Eigen::Index>(n2)) =
                K.block(static_cast<Eigen::Index>(a * n2), static_cast<Eigen::Index>(b * n2), static_cast<Eigen::Index>(n2),
                        static_cast<Eigen::Index>(n2));
        }
    return {loc, glob};
}

CMat mehler_laplace_kernel(const std::function<double(double)>& kappa_r, double eps, const WeightedGrid& gauss,
                           const SpectralSystem& a_sys, std::size_t r_nodes)
{
    if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("eps must lie in (0, 1/2)");
    if (r_nodes < 2) throw ParameterError("need at least 2 r nodes");
    const GaussRule gl = gauss_legendre(static_cast<int>(r_nodes), eps, 1.0 - eps);
    const std::size_t n1 = gauss.size(), n2 = a_sys.grid_size(), dim = gauss.dim;
    const RVec& mu = a_sys.grid().weights;
    const auto n = static_cast<Eigen::Index>(n1 * n2);
    CMat K = CMat::Zero(n, n);
    for (Eigen::Index q = 0; q < gl.nodes.size(); ++q) {
        const double r = gl.nodes[q];
        const double kap = kappa_r(r);
        if (kap == 0.0) continue;
        std::vector<double> t(a_sys.d(), -std::log(r));
        CMat heat = semigroup(a_sys, t).matrix;
        for (Eigen::Index y = 0; y < heat.cols(); ++y) heat.col(y) /= mu[y];
        for (std::size_t a = 0; a < n1; ++a)
            for (std::size_t b = 0; b < n1; ++b) {
                const double dm = mehler_derivative(r, std::span<const double>(gauss.nodes.data() + a * dim, dim),
                                                    std::span<const double>(gauss.nodes.data() + b * dim, dim));
                K.block(static_cast<Eigen::Index>(a * n2), static_cast<Eigen::Index>(b * n2), static_cast<Eigen::Index>(n2),
                        static_cast<Eigen::Index>(n2)) += (gl.weights[q] * kap * dm) * heat;
            }
    }
    return K;
}

RMat torus_heat_kernel(std::size_t K, double t)
{
    if (K < 2) throw ParameterError("torus needs K >= 2");
    if (!(t >= 0.0)) throw ParameterError("heat time must be nonnegative");
    RVec row(static_cast<Eigen::Index>(K));
    for (std::size_t x = 0; x < K; ++x) {
        double s = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double th = 2.0 * pi * static_cast<double>(k) / static_cast<double>(K);
            s += std::exp(-t * (1.0 - std::cos(th))) * std::cos(th * static_cast<double>(x));
        }
        row[static_cast<Eigen::Index>(x)] = s / static_cast<double>(K);
    }
    RMat h(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t x = 0; x < K; ++x)
        for (std::size_t y = 0; y < K; ++y) h(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = row[static_cast<Eigen::Index>((x + K - y) % K)];
    return h;
}

GaussianBoundsResult gaussian_bounds_check(const std::vector<RMat>& kernels, const std::vector<double>& times,
                                           const HomogeneousSpace& space, double c, double C_limit)
{
    if (kernels.size() != times.size() || kernels.empty()) throw ShapeError("one kernel per time is required");
    if (!(c > 0.0)) throw ParameterError("c must be positive");
    const std::size_t n = space.size();
    GaussianBoundsResult res;
    const std::vector<double> deltas{1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
    std::vector<double> cdelta(deltas.size(), 0.0);
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        const RMat& k = kernels[i];
        const double t = times[i];
        if (!(t > 0.0)) throw ParameterError("times must be positive");
        if (static_cast<std::size_t>(k.rows()) != n || static_cast<std::size_t>(k.cols()) != n)
            throw ShapeError("kernel size differs from the space");
        const double scale = k.cwiseAbs().maxCoeff();
        const double st = std::sqrt(t);
        for (std::size_t x = 0; x < n; ++x) {
            const double vb = space.ball_mass(x, st);
            for (std::size_t y = 0; y < n; ++y) {
                const double kv = k(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
                if (kv < -1e-13 * scale) {
                    if (res.nonnegative) {
                        std::ostringstream os;
                        os << "t=" << t << " x=" << x << " y=" << y << " value=" << kv;
                        res.first_negative = os.str();
                    }
                    res.nonnegative = false;
                    ++res.violations;
                }
                const double z = static_cast<double>(space.dist(x, y));
                const double g = std::exp(c * z * z / t);
                const double ratio = std::max(kv, 0.0) * vb * g;
                res.C = std::max(res.C, ratio);
                if (ratio > C_limit) ++res.violations;
                for (std::size_t y2 = 0; y2 < n; ++y2) {
                    if (y2 == y) continue;
                    const double zz = static_cast<double>(space.dist(y, y2));
                    const double diff = std::abs(kv - k(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y2))) * vb;
                    const double u = zz / st;
                    const double base = 2.0 * zz <= z ? diff * g : diff;
                    for (std::size_t j = 0; j < deltas.size(); ++j) cdelta[j] = std::max(cdelta[j], base / std::pow(u, deltas[j]));
                }
            }
        }
    }
    for (std::size_t j = 0; j < deltas.size(); ++j)
        if (cdelta[j] <= C_limit) {
            res.delta = deltas[j];
            res.C_delta = cdelta[j];
            break;
        }
    res.pass = res.nonnegative && res.C <= C_limit && res.delta > 0.0;
    return res;
}

}  // namespace specmult
