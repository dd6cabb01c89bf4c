#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specmult/parallel.hpp"
#include "specmult/special.hpp"
#include "specmult/squarefn.hpp"

namespace specmult {

namespace {

struct AxisTerm {
    double weight;
    CMat matrix;  // nodes x modes
};

void check_system(const SpectralSystem& sys, const std::vector<int>& N, const CVec& f)
{
    if (N.size() != sys.d()) throw ShapeError("N must have one entry per axis");
    for (int n : N)
        if (n < 1) throw ParameterError("N must be >= 1 componentwise");
    if (static_cast<std::size_t>(f.size()) != sys.grid_size()) throw ShapeError("input length differs from grid size");
    if (!sys.satisfies_atl()) throw ParameterError("zero eigenvalue present; filter the system first");
    for (const auto& a : sys.axes())
        if ((a.eigenvalues.array() < 0.0).any()) throw DomainError("negative eigenvalue in square function");
}

// sum over all term tuples of prod(weights) |(M_1 x ... x M_d) c|^2, pointwise
RVec accumulate(const SpectralSystem& sys, const CVec& c, const std::vector<std::vector<AxisTerm>>& terms)
{
    const std::size_t d = sys.d();
    const auto& first = terms[0];
    std::vector<RVec> partial(first.size());
    parallel_for(first.size(), [&](std::size_t i0) {
        RVec acc = RVec::Zero(static_cast<Eigen::Index>(sys.grid_size()));
        std::function<void(std::size_t, const CVec&, std::vector<std::size_t>, double)> rec =
            [&](std::size_t r, const CVec& x, std::vector<std::size_t> shape, double w) {
                if (r == d) {
                    acc += w * x.cwiseAbs2();
                    return;
                }
                const auto& list = terms[r];
                const std::size_t lo = r == 0 ? i0 : 0, hi = r == 0 ? i0 + 1 : list.size();
                auto next = shape;
                next[r] = static_cast<std::size_t>(list[lo].matrix.rows());
                for (std::size_t i = lo; i < hi; ++i)
                    rec(r + 1, apply_along_axis(list[i].matrix, x, shape, r), next, w * list[i].weight);
            };
        rec(0, c, sys.mode_shape(), 1.0);
        partial[i0] = std::move(acc);
    });
    RVec total = RVec::Zero(static_cast<Eigen::Index>(sys.grid_size()));
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace

void TimeGrid::validate() const
{
    if (nodes.empty() || nodes.size() != weights.size()) throw ShapeError("time grid axes are inconsistent");
    for (std::size_t r = 0; r < nodes.size(); ++r) {
        if (nodes[r].size() == 0 || nodes[r].size() != weights[r].size()) throw ShapeError("time grid axis is empty");
        if ((nodes[r].array() <= 0.0).any() || (weights[r].array() <= 0.0).any())
            throw ParameterError("time grid nodes and weights must be positive");
    }
}

TimeGrid make_time_grid(const std::vector<double>& t_min, const std::vector<double>& t_max, std::size_t count)
{
    if (t_min.empty() || t_min.size() != t_max.size()) throw ShapeError("time ranges have mismatched dimension");
    if (count < 2) throw ParameterError("time grid needs at least 2 nodes");
    TimeGrid g;
    for (std::size_t r = 0; r < t_min.size(); ++r) {
        if (!(t_min[r] > 0.0) || !(t_max[r] > t_min[r])) throw ParameterError("time range must satisfy 0 < t_min < t_max");
        const double a = std::log(t_min[r]), b = std::log(t_max[r]);
        const double h = (b - a) / static_cast<double>(count - 1);
        RVec t(static_cast<Eigen::Index>(count));
        for (std::size_t i = 0; i < count; ++i) t[static_cast<Eigen::Index>(i)] = std::exp(a + h * static_cast<double>(i));
        g.nodes.push_back(std::move(t));
        g.weights.push_back(RVec::Constant(static_cast<Eigen::Index>(count), h));
    }
    return g;
}

TimeGrid make_time_grid(const SpectralSystem& sys, std::size_t count)
{
    std::vector<double> lo, hi;
    for (const auto& a : sys.axes()) {
        const RVec ev = a.eigenvalues.cwiseAbs();
        double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
        for (Eigen::Index k = 0; k < ev.size(); ++k)
            if (ev[k] > 0.0) {
                mn = std::min(mn, ev[k]);
                mx = std::max(mx, ev[k]);
            }
        if (!(mx > 0.0)) throw ParameterError("axis has no nonzero eigenvalue");
        lo.push_back(1e-4 / mx);
        hi.push_back(1e2 / mn);
    }
    return make_time_grid(lo, hi, count);
}

double g_constant(const std::vector<int>& N)
{
    double c = 1.0;
    for (int n : N) {
        if (n < 1) throw ParameterError("N must be >= 1 componentwise");
        c *= std::tgamma(2.0 * n) / std::pow(4.0, n);
    }
    return c;
}

RVec g_function(const SpectralSystem& sys, const std::vector<int>& N, const CVec& f, const TimeGrid& tgrid)
{
    check_system(sys, N, f);
    tgrid.validate();
    if (tgrid.d() != sys.d()) throw ShapeError("time grid has wrong dimension");
    std::vector<std::vector<AxisTerm>> terms(sys.d());
    for (std::size_t r = 0; r < sys.d(); ++r) {
        const auto& ax = sys.axis(r);
        for (Eigen::Index i = 0; i < tgrid.nodes[r].size(); ++i) {
            const double t = tgrid.nodes[r][i];
            CVec phi(ax.eigenvalues.size());
            for (Eigen::Index k = 0; k < phi.size(); ++k) {
                const double x = t * ax.eigenvalues[k];
                phi[k] = std::pow(x, N[r]) * std::exp(-x);
            }
            terms[r].push_back({tgrid.weights[r][i], ax.synthesis * phi.asDiagonal()});
        }
    }
    return accumulate(sys, sys.analyze(f), terms).cwiseSqrt();
}

RVec g_function_mellin(const SpectralSystem& sys, const std::vector<int>& N, const CVec& f, const std::vector<UAxis>& u)
{
    check_system(sys, N, f);
    if (u.size() != sys.d()) throw ShapeError("u grid has wrong dimension");
    std::vector<std::vector<AxisTerm>> terms(sys.d());
    for (std::size_t r = 0; r < sys.d(); ++r) {
        u[r].validate();
        const auto& ax = sys.axis(r);
        const double h = u[r].step();
        for (std::size_t i = 0; i < u[r].count; ++i) {
            const double uu = u[r].u(i);
            double w = h * gamma_abs_sq(N[r], uu) / (2.0 * pi);
            if (i == 0 || i + 1 == u[r].count) w *= 0.5;
            CVec phase(ax.eigenvalues.size());
            for (Eigen::Index k = 0; k < phase.size(); ++k) phase[k] = std::polar(1.0, uu * std::log(ax.eigenvalues[k]));
            terms[r].push_back({w, ax.synthesis * phase.asDiagonal()});
        }
    }
    return accumulate(sys, sys.analyze(f), terms).cwiseSqrt();
}

double lp_partition_defect(const DunklTransform& D, int j_min, int j_max, const DyadicBump& psi)
{
    if (j_max < j_min) throw ParameterError("empty dyadic range");
    double pmax = 1.0, pmin = 1.0;
    for (std::size_t r = 0; r < D.d(); ++r) {
        const auto& nodes = D.axis_grid(r).nodes;
        double smax = 0.0, smin = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < nodes.size(); ++i) {
            if (nodes[i] == 0.0) continue;
            double s = 0.0;
            for (int j = j_min; j <= j_max; ++j) s += std::pow(psi(std::ldexp(nodes[i], -j)), 2);
            smax = std::max(smax, s);
            smin = std::min(smin, s);
        }
        pmax *= smax;
        pmin *= smin;
    }
    return std::max(std::abs(pmax - 1.0), std::abs(pmin - 1.0));
}

std::pair<int, int> lp_default_range(const DunklTransform& D)
{
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t r = 0; r < D.d(); ++r) {
        const RVec a = D.axis_grid(r).nodes.cwiseAbs();
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a[i] > 0.0) {
                lo = std::min(lo, a[i]);
                hi = std::max(hi, a[i]);
            }
    }
    return {static_cast<int>(std::floor(std::log2(lo))), static_cast<int>(std::ceil(std::log2(hi)))};
}

LPBlocks littlewood_paley_blocks(const DunklTransform& D, const CVec& f, int j_min, int j_max, const DyadicBump& psi,
                                 double tol)
{
    if (static_cast<std::size_t>(f.size()) != D.size()) throw ShapeError("input has wrong size");
    return littlewood_paley_blocks_from_transform(D, D.forward(f), j_min, j_max, psi, tol);
}

LPBlocks littlewood_paley_blocks_from_transform(const DunklTransform& D, const CVec& Df, int j_min, int j_max,
                                                const DyadicBump& psi, double tol)
{
    if (static_cast<std::size_t>(Df.size()) != D.size()) throw ShapeError("input has wrong size");
    const double defect = lp_partition_defect(D, j_min, j_max, psi);
    if (defect > tol) throw ParameterError("partition of unity defect " + std::to_string(defect) + " on the grid frequencies");
    const std::size_t d = D.d();
    const std::size_t span = static_cast<std::size_t>(j_max - j_min + 1);
    std::size_t total = 1;
    for (std::size_t r = 0; r < d; ++r) total *= span;

    std::vector<std::vector<double>> pts(D.size());
    for (std::size_t k = 0; k < D.size(); ++k) pts[k] = D.point(k);

    LPBlocks out;
    out.defect = defect;
    out.index.resize(total);
    out.blocks.resize(total);
    parallel_for(total, [&](std::size_t b) {
        std::vector<int> j(d);
        std::size_t rem = b;
        for (std::size_t r = d; r-- > 0;) {
            j[r] = j_min + static_cast<int>(rem % span);
            rem /= span;
        }
        CVec g(Df.size());
        bool any = false;
        for (std::size_t k = 0; k < D.size(); ++k) {
            double w = 1.0;
            for (std::size_t r = 0; r < d && w != 0.0; ++r) w *= psi(std::ldexp(pts[k][r], -j[r]));
            g[static_cast<Eigen::Index>(k)] = w * Df[static_cast<Eigen::Index>(k)];
            any = any || w != 0.0;
        }
        out.index[b] = j;
        out.blocks[b] = any ? D.inverse(g) : CVec::Zero(Df.size());
    });
    return out;
}

RVec lp_square_function(const LPBlocks& b)
{
    if (b.blocks.empty()) return RVec();
    RVec s = RVec::Zero(b.blocks.front().size());
    for (const auto& blk : b.blocks) s += blk.cwiseAbs2();
    return s.cwiseSqrt();
}

}  // namespace specmult
