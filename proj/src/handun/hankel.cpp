#include <cmath>
#include <string>

#include "specmult/handun.hpp"
#include "specmult/quadrature.hpp"
#include "specmult/special.hpp"
#include "tensor.hpp"

namespace specmult {

double hankel_kernel(double alpha, double x, double lambda)
{
    const double z = x * lambda;
    if (!std::isfinite(z)) throw DomainError("Bessel kernel argument not finite: " + std::to_string(z));
    return bessel_e(alpha - 0.5, z);
}

HankelTransform::HankelTransform(HankelConfig cfg, std::vector<HalfLineGrid> grids)
    : cfg_(std::move(cfg)), grids_(std::move(grids))
{
    cfg_.validate();
    if (grids_.size() != cfg_.alpha.size()) throw ShapeError("one half-line grid per axis is required");
    for (std::size_t r = 0; r < grids_.size(); ++r) {
        const auto& g = grids_[r];
        if (std::abs(g.alpha - cfg_.alpha[r]) > 1e-14) throw ShapeError("grid alpha does not match the configuration");
        if (g.size() < 2 || g.size() > 2048) throw ParameterError("grid size must lie in [2, 2048]");
        if ((g.weights.array() <= 0.0).any()) throw ParameterError("grid weights must be positive");
        const auto n = static_cast<Eigen::Index>(g.size());
        RMat K(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) K(i, j) = hankel_kernel(g.alpha, g.nodes[i], g.nodes[j]) * g.weights[j];
        kernels_.push_back(std::move(K));
    }
}

std::vector<std::size_t> HankelTransform::shape() const
{
    std::vector<std::size_t> s;
    for (const auto& g : grids_) s.push_back(g.size());
    return s;
}

std::size_t HankelTransform::size() const { return detail::shape_size(shape()); }

WeightedGrid HankelTransform::grid() const
{
    std::vector<WeightedGrid> f;
    for (const auto& g : grids_)
        f.push_back(make_grid(std::vector<double>(g.nodes.data(), g.nodes.data() + g.nodes.size()), g.weights,
                              "hankel(" + std::to_string(g.alpha) + ")"));
    return product_grid(f);
}

std::vector<double> HankelTransform::point(std::size_t k) const
{
    std::vector<std::size_t> idx;
    detail::unflatten(k, shape(), idx);
    std::vector<double> x(d());
    for (std::size_t r = 0; r < d(); ++r) x[r] = grids_[r].nodes[static_cast<Eigen::Index>(idx[r])];
    return x;
}

CVec HankelTransform::sample(const FieldFn& f) const
{
    CVec v(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) v[static_cast<Eigen::Index>(k)] = f(point(k));
    return v;
}

CVec HankelTransform::forward(const CVec& f) const
{
    if (static_cast<std::size_t>(f.size()) != size()) throw ShapeError("Hankel transform input has wrong size");
    return detail::apply_all_axes(kernels_, f, shape());
}

cplx HankelTransform::forward_at(const CVec& f, std::span<const double> x) const
{
    if (x.size() != d()) throw ShapeError("evaluation point has wrong dimension");
    if (static_cast<std::size_t>(f.size()) != size()) throw ShapeError("Hankel transform input has wrong size");
    std::vector<RMat> rows;
    for (std::size_t r = 0; r < d(); ++r) {
        const auto& g = grids_[r];
        RMat row(1, g.nodes.size());
        for (Eigen::Index j = 0; j < g.nodes.size(); ++j)
            row(0, j) = hankel_kernel(g.alpha, x[r], g.nodes[j]) * g.weights[j];
        rows.push_back(std::move(row));
    }
    return detail::apply_all_axes(rows, f, shape())[0];
}

CVec HankelTransform::translate(const CVec& f, std::span<const double> y) const
{
    if (y.size() != d()) throw ShapeError("translation point has wrong dimension");
    CVec F = forward(f);
    std::vector<double> lam;
    for (std::size_t k = 0; k < size(); ++k) {
        lam = point(k);
        double e = 1.0;
        for (std::size_t r = 0; r < d(); ++r) e *= hankel_kernel(cfg_.alpha[r], y[r], lam[r]);
        F[static_cast<Eigen::Index>(k)] *= e;
    }
    return forward(F);
}

cplx HankelTransform::translate_at(const CVec& f, std::span<const double> y, std::span<const double> x) const
{
    if (y.size() != d()) throw ShapeError("translation point has wrong dimension");
    CVec F = forward(f);
    std::vector<double> lam;
    for (std::size_t k = 0; k < size(); ++k) {
        lam = point(k);
        double e = 1.0;
        for (std::size_t r = 0; r < d(); ++r) e *= hankel_kernel(cfg_.alpha[r], y[r], lam[r]);
        F[static_cast<Eigen::Index>(k)] *= e;
    }
    return forward_at(F, x);
}

CVec HankelTransform::convolve(const CVec& f, const CVec& g) const
{
    if (f.size() != g.size() || static_cast<std::size_t>(f.size()) != size())
        throw ShapeError("convolution operands must share the grid");
    // int tau^x f(y) g(y) dnu(y) with tau^x f(y) = int E_x E_y Hf dnu collapses to H(Hf Hg)
    return forward(forward(f).cwiseProduct(forward(g)));
}

CVec HankelTransform::multiplier(const Symbol& m, const CVec& f) const
{
    CVec F = forward(f);
    for (std::size_t k = 0; k < size(); ++k) {
        const auto lam = point(k);
        const cplx v = m(lam);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("multiplier symbol not finite on the grid");
        F[static_cast<Eigen::Index>(k)] *= v;
    }
    return forward(F);
}

cplx hankel_translate_direct(double alpha, double y, const RealFn& f, double x, int nodes)
{
    if (!(alpha >= 0.0)) throw ParameterError("direct translation needs alpha >= 0");
    if (x < 0.0 || y < 0.0) throw DomainError("direct translation needs x, y >= 0");
    const double kappa = hankel_translation_mass(alpha);
    if (alpha == 0.0) return kappa * 0.5 * (f(std::abs(x - y)) + f(x + y));
    if (nodes < 2) throw ParameterError("direct translation needs at least 2 nodes");
    const GaussRule gj = gauss_jacobi(nodes, alpha - 1.0, alpha - 1.0);
    const double b = std::tgamma(alpha + 0.5) / (std::sqrt(pi) * std::tgamma(alpha));
    cplx s = 0.0;
    for (Eigen::Index k = 0; k < gj.nodes.size(); ++k) {
        const double z2 = x * x + y * y - 2.0 * x * y * gj.nodes[k];
        s += gj.weights[k] * f(std::sqrt(std::max(z2, 0.0)));
    }
    return kappa * b * s;
}

}  // namespace specmult
