#include <cmath>

#include "specmult/gaussprod.hpp"

namespace specmult {

bool h1_atom_check(const RVec& b, const Ball& ball, const HomogeneousSpace& space)
{
    if (static_cast<std::size_t>(b.size()) != space.size()) throw ShapeError("atom length differs from the space");
    const auto pts = space.ball(ball.center, ball.radius);
    double mb = 0.0;
    for (auto y : pts) mb += space.mass[static_cast<Eigen::Index>(y)];
    if (!(mb > 0.0)) throw DomainError("ball has zero measure");
    std::vector<bool> in(space.size(), false);
    for (auto y : pts) in[y] = true;
    double mean = 0.0;
    for (std::size_t y = 0; y < space.size(); ++y) {
        const double v = b[static_cast<Eigen::Index>(y)];
        if (!in[y] && v != 0.0) return false;
        if (std::abs(v) > (1.0 / mb) * (1.0 + 1e-12)) return false;
        mean += space.mass[static_cast<Eigen::Index>(y)] * v;
    }
    return std::abs(mean) <= 1e-12;
}

double h1_atomic_upper(const RVec& f, const RVec& nu, const DyadicSystem& dy, int levels)
{
    const std::size_t n1 = static_cast<std::size_t>(nu.size());
    const std::size_t n2 = dy.space.size();
    if (static_cast<std::size_t>(f.size()) != n1 * n2) throw ShapeError("function size differs from n1 x |Y|");
    if (levels < 1) throw ParameterError("levels must be >= 1");
    const RVec a = f.cwiseAbs();
    const RVec D = dyadic_maximal(a, n1, dy);
    const double mY = dy.space.mass.sum();
    double total = 0.0;
    for (std::size_t x1 = 0; x1 < n1; ++x1) {
        const RVec slice = a.segment(static_cast<Eigen::Index>(x1 * n2), static_cast<Eigen::Index>(n2));
        if (slice.maxCoeff() == 0.0) continue;
        const double top = cz_min_threshold(slice, 1, dy);
        const int k0 = top > 0.0 ? static_cast<int>(std::ceil(std::log2(top))) : static_cast<int>(std::floor(std::log2(slice.maxCoeff()))) - 1;
        double u = std::ldexp(1.0, k0) * mY;
        for (int k = k0; k < k0 + levels; ++k) {
            const double lev = std::ldexp(1.0, k);
            double m = 0.0;
            for (std::size_t y = 0; y < n2; ++y)
                if (D[static_cast<Eigen::Index>(x1 * n2 + y)] > lev) m += dy.space.mass[static_cast<Eigen::Index>(y)];
            if (m == 0.0) break;
            u += 2.0 * lev * m;
        }
        total += nu[static_cast<Eigen::Index>(x1)] * u;
    }
    return total;
}

double heat_maximal_l1(const RVec& g, const std::vector<double>& times)
{
    const std::size_t K = static_cast<std::size_t>(g.size());
    if (times.empty()) throw ParameterError("need at least one time");
    RVec sup = g.cwiseAbs();
    for (double t : times) sup = sup.cwiseMax((torus_heat_kernel(K, t) * g).cwiseAbs());
    return sup.sum();
}

}  // namespace specmult
