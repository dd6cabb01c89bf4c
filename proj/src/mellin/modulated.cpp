#include <algorithm>
#include <cmath>
#include <limits>

#include "specmult/mellin.hpp"
#include "specmult/parallel.hpp"

namespace specmult {

namespace {

std::size_t nodes_for(const ModulatedOptions& opt, std::size_t d)
{
    if (opt.nodes_per_axis > 0) return opt.nodes_per_axis;
    return d == 1 ? 1024 : 384;
}

// Upper end x of the window: x^N e^{-x/2} = cutoff with x > 2N.
double upper_window(int N, double cutoff)
{
    double x = 2.0 * N + 1.0;
    for (int it = 0; it < 100; ++it) x = 2.0 * (-std::log(cutoff) + N * std::log(x));
    return x;
}

RVec trapezoid(std::size_t n, double h)
{
    RVec w = RVec::Constant(static_cast<Eigen::Index>(n), h);
    w[0] *= 0.5;
    w[static_cast<Eigen::Index>(n) - 1] *= 0.5;
    return w;
}

}  // namespace

void ModulatedSymbol::validate() const
{
    if (N.empty() || N.size() != t.size()) throw ShapeError("N and t must have the same positive dimension");
    for (int n : N)
        if (n < 1) throw ParameterError("N must be >= 1 componentwise");
    for (double v : t)
        if (!(v > 0.0)) throw ParameterError("t must be positive");
    if (!base.eval) throw ParameterError("modulated symbol has no base");
}

cplx ModulatedSymbol::operator()(std::span<const double> lambda) const
{
    if (lambda.size() != N.size()) throw ShapeError("modulated symbol evaluated with wrong dimension");
    double f = 1.0, e = 0.0;
    for (std::size_t r = 0; r < N.size(); ++r) {
        f *= std::pow(t[r] * lambda[r], N[r]);
        e += t[r] * lambda[r];
    }
    return f * std::exp(-0.5 * e) * base(lambda);
}

CVec modulated_mellin_grid(const ModulatedSymbol& ms, const std::vector<UAxis>& axes, const ModulatedOptions& opt)
{
    ms.validate();
    const std::size_t d = ms.N.size();
    if (axes.size() != d) throw ShapeError("u grid has wrong dimension");
    if (!(opt.cutoff > 0.0 && opt.cutoff < 1.0)) throw ParameterError("cutoff must lie in (0,1)");
    const std::size_t n = nodes_for(opt, d);
    if (n < 8) throw ParameterError("too few quadrature nodes");

    std::vector<double> s0(d), h(d);
    for (std::size_t r = 0; r < d; ++r) {
        const double lo = std::log(std::pow(opt.cutoff, 1.0 / ms.N[r]) / ms.t[r]);
        const double hi = std::log(upper_window(ms.N[r], opt.cutoff) / ms.t[r]);
        s0[r] = lo;
        h[r] = (hi - lo) / static_cast<double>(n - 1);
    }
    std::size_t total = 1;
    for (std::size_t r = 0; r < d; ++r) total *= n;
    CVec x(static_cast<Eigen::Index>(total));
    std::vector<double> lam(d);
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        for (std::size_t r = d; r-- > 0;) {
            lam[r] = std::exp(s0[r] + h[r] * static_cast<double>(rem % n));
            rem /= n;
        }
        const cplx v = ms(lam);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("modulated symbol not finite");
        x[static_cast<Eigen::Index>(k)] = v;
    }
    std::vector<std::size_t> shape(d, n);
    for (std::size_t r = 0; r < d; ++r) {
        axes[r].validate();
        const RVec w = trapezoid(n, h[r]);
        CMat E(static_cast<Eigen::Index>(axes[r].count), static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < axes[r].count; ++k)
            for (std::size_t i = 0; i < n; ++i)
                E(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
                    w[static_cast<Eigen::Index>(i)] * std::polar(1.0, -axes[r].u(k) * (s0[r] + h[r] * static_cast<double>(i)));
        x = apply_along_axis(E, x, shape, r);
        shape[r] = axes[r].count;
    }
    return x;
}

cplx modulated_mellin(const ModulatedSymbol& ms, std::span<const double> u, const ModulatedOptions& opt)
{
    std::vector<UAxis> axes;
    for (double v : u) axes.push_back(UAxis{v, v + 1.0, 2});
    return modulated_mellin_grid(ms, axes, opt)[0];
}

std::vector<double> log_sweep(double lo, double hi, std::size_t count)
{
    if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw ParameterError("invalid log sweep");
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
    }
    return out;
}

std::vector<std::vector<double>> product_sweep(const std::vector<std::vector<double>>& per_axis)
{
    std::vector<std::vector<double>> out{{}};
    for (const auto& axis : per_axis) {
        std::vector<std::vector<double>> next;
        for (const auto& p : out)
            for (double v : axis) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

SweepSup modulated_mellin_sup(const Symbol& m, const std::vector<int>& N, std::span<const double> u,
                              const std::vector<std::vector<double>>& t_sweep, const ModulatedOptions& opt)
{
    if (t_sweep.empty()) throw ParameterError("empty t sweep");
    SweepSup res;
    res.per_t.assign(t_sweep.size(), 0.0);
    parallel_for(t_sweep.size(), [&](std::size_t i) {
        ModulatedSymbol ms{m, N, t_sweep[i]};
        res.per_t[i] = std::abs(modulated_mellin(ms, u, opt));
    });
    res.sup = *std::max_element(res.per_t.begin(), res.per_t.end());
    return res;
}

MedaResult meda_functional(const Symbol& m, const std::vector<int>& N,
                           const std::function<double(std::span<const double>)>& weight, const MedaOptions& opt)
{
    const std::size_t d = N.size();
    if (d == 0) throw ParameterError("empty N");
    if (!(opt.u_max > 0.0) || opt.u_count < 21) throw ParameterError("invalid u box");
    auto sweep = opt.t_sweep;
    if (sweep.empty()) sweep = product_sweep(std::vector<std::vector<double>>(d, log_sweep(1e-3, 1e3, 13)));

    std::vector<UAxis> axes(d, UAxis{-opt.u_max, opt.u_max, opt.u_count});
    std::size_t total = 1;
    for (std::size_t r = 0; r < d; ++r) total *= opt.u_count;

    std::vector<RVec> per_t(sweep.size());
    parallel_for(sweep.size(), [&](std::size_t i) {
        ModulatedSymbol ms{m, N, sweep[i]};
        per_t[i] = modulated_mellin_grid(ms, axes, opt.quad).cwiseAbs();
    });
    RVec sup = RVec::Zero(static_cast<Eigen::Index>(total));
    for (const auto& v : per_t) sup = sup.cwiseMax(v);

    MedaResult res;
    res.sup_profile.axes = axes;
    res.sup_profile.values = sup.cast<cplx>();

    RVec F(static_cast<Eigen::Index>(total));
    std::vector<double> u(d);
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        for (std::size_t r = d; r-- > 0;) {
            u[r] = axes[r].u(rem % opt.u_count);
            rem /= opt.u_count;
        }
        F[static_cast<Eigen::Index>(k)] = weight(u) * sup[static_cast<Eigen::Index>(k)];
    }

    const double du = axes[0].step();
    const RVec w = trapezoid(opt.u_count, du);
    const std::vector<std::size_t> shape(d, opt.u_count);

    // full integral
    {
        CVec x = F.cast<cplx>();
        auto sh = shape;
        for (std::size_t r = 0; r < d; ++r) {
            x = apply_along_axis(w.transpose().cast<cplx>(), x, sh, r);
            sh[r] = 1;
        }
        res.value = x[0].real();
    }

    // tails from the marginal along each axis
    for (std::size_t r = 0; r < d; ++r) {
        CVec x = F.cast<cplx>();
        auto sh = shape;
        for (std::size_t a = 0; a < d; ++a) {
            if (a == r) continue;
            x = apply_along_axis(w.transpose().cast<cplx>(), x, sh, a);
            sh[a] = 1;
        }
        const RVec G = x.real();
        const double peak = G.cwiseAbs().maxCoeff();
        const std::size_t n = opt.u_count;
        const std::size_t seg = std::max<std::size_t>(3, n / 20);
        for (int side = 0; side < 2; ++side) {
            auto at = [&](std::size_t i) { return G[static_cast<Eigen::Index>(side == 0 ? i : n - 1 - i)]; };
            const double edge = std::abs(at(0));
            if (peak == 0.0 || edge <= 1e-13 * peak) continue;
            // least-squares slope of log G against distance from the edge
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < seg; ++i) {
                const double g = std::abs(at(i));
                if (g <= 0.0) continue;
                const double xx = -static_cast<double>(i) * du, yy = std::log(g);
                sx += xx;
                sy += yy;
                sxx += xx * xx;
                sxy += xx * yy;
                ++cnt;
            }
            const double denom = cnt * sxx - sx * sx;
            const double slope = denom > 0 ? (cnt * sxy - sx * sy) / denom : 0.0;  // d log G / d|u|, negative when decaying
            if (!(slope < -1e-12)) {
                res.divergent = true;
                res.tail_estimate = std::numeric_limits<double>::infinity();
            } else {
                res.tail_estimate += edge / (-slope);
            }
        }
    }
    if (res.tail_estimate > std::abs(res.value)) res.divergent = true;
    return res;
}

}  // namespace specmult
