#include <cmath>

#include "specmult/handun.hpp"
#include "specmult/quadrature.hpp"

namespace specmult {

HalfLineGrid make_half_line_grid(double alpha, std::size_t n, double R)
{
    if (!(alpha > -0.5)) throw ParameterError("half-line grid needs alpha > -1/2");
    if (n < 2 || n > 2048) throw ParameterError("half-line grid size must lie in [2, 2048]");
    if (!(R > 0.0)) throw ParameterError("half-line grid needs R > 0");
    const GaussRule gj = gauss_jacobi(static_cast<int>(n), 0.0, 2.0 * alpha);
    HalfLineGrid g;
    g.alpha = alpha;
    g.R = R;
    g.nodes = (gj.nodes.array() + 1.0) * (R / 2.0);
    g.weights = gj.weights * std::pow(R / 2.0, 2.0 * alpha + 1.0);
    return g;
}

LineGrid make_line_grid(double alpha, std::size_t n, double R)
{
    const HalfLineGrid h = make_half_line_grid(alpha, n, R);
    LineGrid g;
    g.alpha = alpha;
    g.R = R;
    g.nodes.resize(static_cast<Eigen::Index>(2 * n));
    g.weights.resize(static_cast<Eigen::Index>(2 * n));
    for (std::size_t k = 0; k < n; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        const auto neg = static_cast<Eigen::Index>(n - 1 - k);
        const auto pos = static_cast<Eigen::Index>(n + k);
        g.nodes[neg] = -h.nodes[i];
        g.weights[neg] = h.weights[i];
        g.nodes[pos] = h.nodes[i];
        g.weights[pos] = h.weights[i];
    }
    return g;
}

double HankelConfig::Q() const
{
    double q = 0.0;
    for (double a : alpha) q += 2.0 * a + 1.0;
    return q;
}

void HankelConfig::validate() const
{
    if (alpha.empty() || alpha.size() > 3) throw ParameterError("Hankel dimension must lie in [1, 3]");
    for (double a : alpha)
        if (!(a > -0.5)) throw ParameterError("Hankel parameters need alpha_r > -1/2");
}

double dunkl_c_alpha(double alpha)
{
    if (!(alpha >= 0.0)) throw ParameterError("Dunkl parameters need alpha_r >= 0");
    return std::pow(2.0, alpha + 0.5) * std::tgamma(alpha + 0.5);
}

double DunklConfig::c_alpha() const
{
    double c = 1.0;
    for (double a : alpha) c *= dunkl_c_alpha(a);
    return c;
}

void DunklConfig::validate() const
{
    if (alpha.empty() || alpha.size() > 3) throw ParameterError("Dunkl dimension must lie in [1, 3]");
    for (double a : alpha)
        if (!(a >= 0.0)) throw ParameterError("Dunkl parameters need alpha_r >= 0");
}

double hankel_gaussian_constant(double alpha) { return std::pow(2.0, -alpha - 0.5); }

double hankel_translation_mass(double alpha) { return 1.0 / (std::pow(2.0, alpha - 0.5) * std::tgamma(alpha + 0.5)); }

FieldFn hankel_dilate(const HankelConfig& cfg, const FieldFn& f, double t)
{
    cfg.validate();
    if (!(t > 0.0)) throw ParameterError("dilation needs t > 0");
    const double scale = std::pow(t, cfg.Q());
    return [f, t, scale](std::span<const double> x) {
        std::vector<double> y(x.begin(), x.end());
        for (auto& v : y) v *= t;
        return scale * f(y);
    };
}

FieldFn dunkl_dilate(const DunklConfig& cfg, const FieldFn& f, std::span<const double> lambda)
{
    cfg.validate();
    if (lambda.size() != cfg.alpha.size()) throw ShapeError("dilation vector has wrong dimension");
    double scale = 1.0;
    std::vector<double> lam(lambda.begin(), lambda.end());
    for (std::size_t r = 0; r < lam.size(); ++r) {
        if (!(lam[r] > 0.0)) throw ParameterError("dilation needs lambda > 0");
        scale *= std::pow(lam[r], -2.0 * cfg.alpha[r] - 1.0);
    }
    return [f, lam, scale](std::span<const double> x) {
        std::vector<double> y(x.begin(), x.end());
        for (std::size_t r = 0; r < y.size(); ++r) y[r] /= lam[r];
        return scale * f(y);
    };
}

}  // namespace specmult
