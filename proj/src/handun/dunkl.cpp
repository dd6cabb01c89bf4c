#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include <boost/math/special_functions/beta.hpp>

#include "specmult/handun.hpp"
#include "specmult/quadrature.hpp"
#include "specmult/special.hpp"
#include "tensor.hpp"

namespace specmult {

namespace {

const GaussRule& cached_jacobi(int n, double a, double b)
{
    thread_local std::map<std::tuple<int, double, double>, GaussRule> cache;
    const auto key = std::make_tuple(n, a, b);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(n, a, b)).first;
    return it->second;
}

double b_alpha(double alpha) { return std::tgamma(alpha + 0.5) / (std::sqrt(pi) * std::tgamma(alpha)); }

// Kernel entry for evaluation point x and signed node y with weight w.
cplx dunkl_entry(double alpha, double x, double y, double w)
{
    const double z = std::abs(x * y);
    if (!std::isfinite(z)) throw DomainError("Bessel kernel argument not finite: " + std::to_string(z));
    const double e0 = bessel_e(alpha - 0.5, z);
    const double e1 = bessel_e(alpha + 0.5, z);
    return 0.5 * w * cplx(e0, -x * y * e1);
}

bool symmetric(const LineGrid& g)
{
    const auto n = g.nodes.size();
    if (n % 2 != 0) return false;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto j = n - 1 - i;
        if (std::abs(g.nodes[i] + g.nodes[j]) > 1e-13 * (1.0 + std::abs(g.nodes[i]))) return false;
        if (std::abs(g.weights[i] - g.weights[j]) > 1e-13 * std::abs(g.weights[i])) return false;
    }
    return true;
}

}  // namespace

DunklTransform::DunklTransform(DunklConfig cfg, std::vector<LineGrid> grids) : cfg_(std::move(cfg)), grids_(std::move(grids))
{
    cfg_.validate();
    if (grids_.size() != cfg_.alpha.size()) throw ShapeError("one line grid per axis is required");
    for (std::size_t r = 0; r < grids_.size(); ++r) {
        const auto& g = grids_[r];
        if (std::abs(g.alpha - cfg_.alpha[r]) > 1e-14) throw ShapeError("grid alpha does not match the configuration");
        if (g.size() < 2 || g.size() > 2 * 2048) throw ParameterError("grid size must lie in [2, 2048] per half axis");
        if ((g.weights.array() <= 0.0).any()) throw ParameterError("grid weights must be positive");
        if (!symmetric(g)) throw ShapeError("line grid is not symmetric about the origin");
        const auto n = g.nodes.size();
        CMat K(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) K(i, j) = dunkl_entry(g.alpha, g.nodes[i], g.nodes[j], g.weights[j]);
        kernels_.push_back(std::move(K));
    }
}

std::vector<std::size_t> DunklTransform::shape() const
{
    std::vector<std::size_t> s;
    for (const auto& g : grids_) s.push_back(g.size());
    return s;
}

std::size_t DunklTransform::size() const { return detail::shape_size(shape()); }

WeightedGrid DunklTransform::grid() const
{
    std::vector<WeightedGrid> f;
    for (const auto& g : grids_)
        f.push_back(make_grid(std::vector<double>(g.nodes.data(), g.nodes.data() + g.nodes.size()), g.weights,
                              "dunkl(" + std::to_string(g.alpha) + ")"));
    return product_grid(f);
}

std::vector<double> DunklTransform::point(std::size_t k) const
{
    std::vector<std::size_t> idx;
    detail::unflatten(k, shape(), idx);
    std::vector<double> x(d());
    for (std::size_t r = 0; r < d(); ++r) x[r] = grids_[r].nodes[static_cast<Eigen::Index>(idx[r])];
    return x;
}

CVec DunklTransform::sample(const FieldFn& f) const
{
    CVec v(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) v[static_cast<Eigen::Index>(k)] = f(point(k));
    return v;
}

CVec DunklTransform::forward(const CVec& f) const
{
    if (static_cast<std::size_t>(f.size()) != size()) throw ShapeError("Dunkl transform input has wrong size");
    return detail::apply_all_axes(kernels_, f, shape());
}

cplx DunklTransform::forward_at(const CVec& f, std::span<const double> x) const
{
    if (x.size() != d()) throw ShapeError("evaluation point has wrong dimension");
    if (static_cast<std::size_t>(f.size()) != size()) throw ShapeError("Dunkl transform input has wrong size");
    std::vector<CMat> rows;
    for (std::size_t r = 0; r < d(); ++r) {
        const auto& g = grids_[r];
        CMat row(1, g.nodes.size());
        for (Eigen::Index j = 0; j < g.nodes.size(); ++j) row(0, j) = dunkl_entry(g.alpha, x[r], g.nodes[j], g.weights[j]);
        rows.push_back(std::move(row));
    }
    return detail::apply_all_axes(rows, f, shape())[0];
}

CVec DunklTransform::reflect(const CVec& f) const
{
    if (static_cast<std::size_t>(f.size()) != size()) throw ShapeError("input has wrong size");
    return f.reverse();
}

CVec DunklTransform::reflect_axis(const CVec& f, std::size_t r) const
{
    if (static_cast<std::size_t>(f.size()) != size()) throw ShapeError("input has wrong size");
    if (r >= d()) throw ShapeError("reflection axis out of range");
    const auto sh = shape();
    std::size_t inner = 1;
    for (std::size_t a = r + 1; a < d(); ++a) inner *= sh[a];
    const std::size_t n = sh[r];
    const std::size_t outer = size() / (inner * n);
    CVec out(f.size());
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < inner; ++c)
                out[static_cast<Eigen::Index>((o * n + i) * inner + c)] =
                    f[static_cast<Eigen::Index>((o * n + (n - 1 - i)) * inner + c)];
    return out;
}

CVec DunklTransform::inverse(const CVec& f) const { return forward(reflect(f)); }

CVec DunklTransform::multiplier(const CVec& m_values, const CVec& f) const
{
    if (m_values.size() != f.size()) throw ShapeError("multiplier values do not match the grid");
    return inverse(m_values.cwiseProduct(forward(f)));
}

CVec DunklTransform::multiplier(const Symbol& m, const CVec& f) const
{
    CVec mv(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) {
        const cplx v = m(point(k));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("multiplier symbol not finite on the grid");
        mv[static_cast<Eigen::Index>(k)] = v;
    }
    return multiplier(mv, f);
}

CVec DunklTransform::riesz(std::size_t r, const CVec& f) const
{
    if (r >= d()) throw ShapeError("Riesz index out of range");
    CVec mv(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < size(); ++k) {
        const auto x = point(k);
        double n2 = 0.0;
        for (double v : x) n2 += v * v;
        mv[static_cast<Eigen::Index>(k)] = n2 > 0.0 ? x[r] / std::sqrt(n2) : 0.0;
    }
    return multiplier(mv, f);
}

LinearMap DunklTransform::multiplier_map(const CVec& m_values) const
{
    if (static_cast<std::size_t>(m_values.size()) != size()) throw ShapeError("multiplier values do not match the grid");
    LinearMap map;
    map.n_in = map.n_out = size();
    map.w_in = map.w_out = grid().weights;
    map.apply = [this, m_values](const CVec& f) { return multiplier(m_values, f); };
    std::vector<CMat> adj;
    for (const auto& K : kernels_) adj.push_back(K.adjoint());
    const auto sh = shape();
    map.apply_adjoint = [adj, sh, m_values](const CVec& g) {
        CVec x = detail::apply_all_axes(adj, g, sh);
        x = x.reverse().eval();
        x = m_values.conjugate().cwiseProduct(x);
        return detail::apply_all_axes(adj, x, sh);
    };
    return map;
}

cplx dunkl_translate(double alpha, double s, const RealFn& f, double t, TranslateVariant v, int nodes)
{
    if (!(alpha >= 0.0)) throw ParameterError("Dunkl translation needs alpha >= 0");
    if (nodes < 2) throw ParameterError("Dunkl translation needs at least 2 nodes");
    if (alpha == 0.0) {
        if (v == TranslateVariant::tau) return f(t - s);
        return 0.5 * (f(std::abs(t - s)) + f(t + s));
    }
    const double b = b_alpha(alpha);
    if (v == TranslateVariant::tau_eps1) {
        const GaussRule& gj = cached_jacobi(nodes, alpha - 1.0, alpha - 1.0);
        cplx acc = 0.0;
        for (Eigen::Index k = 0; k < gj.nodes.size(); ++k)
            acc += gj.weights[k] * f(std::sqrt(std::max(t * t + s * s - 2.0 * s * t * gj.nodes[k], 0.0)));
        return b * acc;
    }
    const GaussRule& gj = cached_jacobi(nodes, alpha - 1.0, alpha);
    cplx acc = 0.0;
    for (Eigen::Index k = 0; k < gj.nodes.size(); ++k) {
        const double z = std::sqrt(std::max(t * t + s * s - 2.0 * s * t * gj.nodes[k], 0.0));
        const cplx fp = f(z), fm = f(-z);
        cplx term = fp + fm;
        if (z > 0.0) term += (t - s) * (fp - fm) / z;
        acc += gj.weights[k] * term;
    }
    return 0.5 * b * acc;
}

cplx dunkl_translate(const DunklConfig& cfg, std::span<const double> y, const FieldFn& f, std::span<const double> x,
                     const std::vector<TranslateVariant>& variant, int nodes)
{
    cfg.validate();
    const std::size_t d = cfg.alpha.size();
    if (y.size() != d || x.size() != d) throw ShapeError("translation arguments have wrong dimension");
    if (!variant.empty() && variant.size() != d) throw ShapeError("one translation variant per axis is required");
    std::vector<double> pt(x.begin(), x.end());
    std::function<cplx(std::size_t)> rec = [&](std::size_t r) -> cplx {
        if (r == d) return f(pt);
        const double keep = pt[r];
        const auto var = variant.empty() ? TranslateVariant::tau : variant[r];
        const cplx out = dunkl_translate(
            cfg.alpha[r], y[r],
            [&](double t) {
                pt[r] = t;
                return rec(r + 1);
            },
            keep, var, nodes);
        pt[r] = keep;
        return out;
    };
    return rec(0);
}

CVec DunklTransform::convolve(const CVec& f, const FieldFn& g, int translate_nodes) const
{
    if (static_cast<std::size_t>(f.size()) != size()) throw ShapeError("convolution operand has wrong size");
    const auto w = grid().weights;
    const double c = cfg_.c_alpha();
    const FieldFn gv = [&g](std::span<const double> y) {
        std::vector<double> m(y.begin(), y.end());
        for (auto& v : m) v = -v;
        return g(m);
    };
    CVec out(f.size());
    std::vector<std::vector<double>> pts(size());
    for (std::size_t k = 0; k < size(); ++k) pts[k] = point(k);
    for (std::size_t i = 0; i < size(); ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            if (f[jj] == cplx(0.0)) continue;
            acc += w[jj] * f[jj] * dunkl_translate(cfg_, pts[i], gv, pts[j], {}, translate_nodes);
        }
        out[static_cast<Eigen::Index>(i)] = acc / c;
    }
    return out;
}

std::vector<CVec> epsilon_decompose(const DunklTransform& D, const CVec& f)
{
    if (static_cast<std::size_t>(f.size()) != D.size()) throw ShapeError("input has wrong size");
    const std::size_t d = D.d();
    std::vector<CVec> parts{f};
    for (std::size_t r = 0; r < d; ++r) {
        std::vector<CVec> next(parts.size() * 2);
        for (std::size_t idx = 0; idx < parts.size(); ++idx) {
            const CVec refl = D.reflect_axis(parts[idx], r);
            next[idx] = 0.5 * (parts[idx] + refl);
            next[idx | (std::size_t{1} << r)] = 0.5 * (parts[idx] - refl);
        }
        parts = std::move(next);
    }
    return parts;
}

double translated_indicator(double alpha, double x, double y, double t)
{
    if (!(alpha >= 0.0)) throw ParameterError("translated indicator needs alpha >= 0");
    if (!(t > 0.0)) throw ParameterError("indicator radius must be positive");
    if (alpha == 0.0) return std::abs(y - x) <= t ? 1.0 : 0.0;
    const double xy = x * y;
    if (xy == 0.0) return x * x + y * y <= t * t ? 1.0 : 0.0;
    const double us = (x * x + y * y - t * t) / (2.0 * xy);
    const double vs = std::clamp(0.5 * (1.0 + us), 0.0, 1.0);
    const double cdf = boost::math::ibeta(alpha + 1.0, alpha, vs);
    return xy > 0.0 ? 1.0 - cdf : cdf;
}

RVec maximal_MP(const DunklTransform& D, const CVec& f, const std::vector<double>& t_sweep)
{
    if (static_cast<std::size_t>(f.size()) != D.size()) throw ShapeError("input has wrong size");
    if (t_sweep.empty()) throw ParameterError("empty radius sweep");
    CVec g = f.cwiseAbs().cast<cplx>();
    auto sh = D.shape();
    for (std::size_t r = 0; r < D.d(); ++r) {
        const auto& grid = D.axis_grid(r);
        const double a = grid.alpha;
        const auto n = grid.nodes.size();
        RVec best = g.real();
        for (double t : t_sweep) {
            if (!(t > 0.0)) throw ParameterError("radii must be positive");
            const double vol = 2.0 * std::pow(t, 2.0 * a + 1.0) / (2.0 * a + 1.0);
            RMat A(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    A(i, j) = grid.weights[j] * translated_indicator(a, grid.nodes[i], grid.nodes[j], t) / vol;
            best = best.cwiseMax(apply_along_axis(A.cast<cplx>(), g, sh, r).real());
        }
        g = best.cast<cplx>();
    }
    return g.real();
}

}  // namespace specmult
