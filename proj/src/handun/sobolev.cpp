#include <algorithm>
#include <cmath>

#include "specmult/handun.hpp"
#include "specmult/parallel.hpp"
#include "specmult/quadrature.hpp"
#include "tensor.hpp"

namespace specmult {

double lp_omega(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double lp_theta(double t)
{
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return t <= 0.0 ? lp_omega(t + 1.0) : 1.0 - lp_omega(t);
}

double lp_psi(double xi)
{
    const double a = std::abs(xi);
    if (a <= 0.5 || a >= 2.0) return 0.0;
    return std::sqrt(lp_theta(std::log2(a)));
}

SobolevResult sobolev_norm(const FieldFn& f, std::size_t d, const std::vector<double>& s, bool mixed,
                           const SobolevOptions& opt)
{
    if (d == 0 || d > 3) throw ParameterError("Sobolev norm dimension must lie in [1, 3]");
    if (mixed ? s.size() != d : s.size() != 1) throw ShapeError("smoothness vector has wrong length");
    if (!(opt.x_half_width > 0.0) || opt.x_points < 8 || !(opt.xi_max > 0.0) || opt.xi_nodes < 4)
        throw ParameterError("invalid Sobolev quadrature options");
    const std::size_t nx = opt.x_points;
    const std::size_t nxi = 2 * opt.xi_nodes;
    double cells = 1.0;
    for (std::size_t r = 0; r < d; ++r) cells *= static_cast<double>(nx);
    if (cells > static_cast<double>(1u << 24)) throw ParameterError("Sobolev sampling grid too large; lower x_points");

    const double L = opt.x_half_width;
    const double h = 2.0 * L / static_cast<double>(nx - 1);
    RVec x(static_cast<Eigen::Index>(nx)), wx = RVec::Constant(static_cast<Eigen::Index>(nx), h);
    for (std::size_t i = 0; i < nx; ++i) x[static_cast<Eigen::Index>(i)] = -L + h * static_cast<double>(i);
    wx[0] *= 0.5;
    wx[static_cast<Eigen::Index>(nx) - 1] *= 0.5;

    const GaussRule left = gauss_legendre(static_cast<int>(opt.xi_nodes), -opt.xi_max, 0.0);
    const GaussRule right = gauss_legendre(static_cast<int>(opt.xi_nodes), 0.0, opt.xi_max);
    RVec xi(static_cast<Eigen::Index>(nxi)), wxi(static_cast<Eigen::Index>(nxi));
    xi << left.nodes, right.nodes;
    wxi << left.weights, right.weights;

    CMat F(static_cast<Eigen::Index>(nxi), static_cast<Eigen::Index>(nx));
    const double norm = 1.0 / std::sqrt(2.0 * pi);
    for (Eigen::Index k = 0; k < F.rows(); ++k)
        for (Eigen::Index i = 0; i < F.cols(); ++i) F(k, i) = norm * wx[i] * std::polar(1.0, -xi[k] * x[i]);

    const std::vector<std::size_t> xshape(d, nx);
    const std::size_t total = detail::shape_size(xshape);
    CVec vals(static_cast<Eigen::Index>(total));
    std::vector<std::size_t> idx;
    std::vector<double> pt(d);
    for (std::size_t k = 0; k < total; ++k) {
        detail::unflatten(k, xshape, idx);
        for (std::size_t r = 0; r < d; ++r) pt[r] = x[static_cast<Eigen::Index>(idx[r])];
        const cplx v = f(pt);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("function not finite on the sampling grid");
        vals[static_cast<Eigen::Index>(k)] = v;
    }
    const CVec Ff = detail::apply_all_axes(std::vector<CMat>(d, F), vals, xshape);

    const std::vector<std::size_t> fshape(d, nxi);
    double acc = 0.0, peak = 0.0, edge = 0.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(Ff.size()); ++k) {
        detail::unflatten(k, fshape, idx);
        double w = 1.0, weight = 1.0, n2 = 0.0;
        bool boundary = false;
        for (std::size_t r = 0; r < d; ++r) {
            const auto i = static_cast<Eigen::Index>(idx[r]);
            w *= wxi[i];
            n2 += xi[i] * xi[i];
            if (mixed) weight *= std::pow(1.0 + xi[i] * xi[i], 0.5 * s[r]);
            boundary = boundary || idx[r] == 0 || idx[r] == nxi - 1;
        }
        if (!mixed) weight = std::pow(1.0 + std::sqrt(n2), s[0]);
        const double a = std::abs(Ff[static_cast<Eigen::Index>(k)]);
        peak = std::max(peak, a);
        if (boundary) edge = std::max(edge, a);
        acc += w * weight * weight * a * a;
    }
    SobolevResult res;
    res.value = std::sqrt(acc);
    res.decay_warning = peak > 0.0 && edge > 1e-8 * peak;
    return res;
}

LocalSobolevResult local_sobolev_sup(const FieldFn& m, std::size_t d, const std::vector<double>& s, int j_min, int j_max,
                                     const SobolevOptions& opt)
{
    if (j_max < j_min) throw ParameterError("empty dyadic range");
    if (d == 0 || d > 3) throw ParameterError("dimension must lie in [1, 3]");
    const bool mixed = s.size() == d && d > 1;
    const std::size_t span = static_cast<std::size_t>(j_max - j_min + 1);
    const std::vector<std::size_t> jshape(d, span);
    const std::size_t total = detail::shape_size(jshape);
    LocalSobolevResult res;
    res.per_j.assign(total, 0.0);
    std::vector<char> warn(total, 0);
    parallel_for(total, [&](std::size_t k) {
        std::vector<std::size_t> idx;
        detail::unflatten(k, jshape, idx);
        std::vector<double> scale(d);
        for (std::size_t r = 0; r < d; ++r) scale[r] = std::ldexp(1.0, j_min + static_cast<int>(idx[r]));
        const FieldFn g = [&](std::span<const double> x) -> cplx {
            double psi = 1.0;
            for (double v : x) psi *= lp_psi(v);
            if (psi == 0.0) return 0.0;
            std::vector<double> y(x.begin(), x.end());
            for (std::size_t r = 0; r < d; ++r) y[r] *= scale[r];
            return psi * m(y);
        };
        const auto r = sobolev_norm(g, d, s, mixed, opt);
        res.per_j[k] = r.value;
        warn[k] = r.decay_warning ? 1 : 0;
    });
    res.sup = *std::max_element(res.per_j.begin(), res.per_j.end());
    res.decay_warning = std::any_of(warn.begin(), warn.end(), [](char c) { return c != 0; });
    return res;
}

}  // namespace specmult
