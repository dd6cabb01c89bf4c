#include <cmath>

#include "specmult/bases.hpp"

namespace specmult {

namespace {

void check_r(double r)
{
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("Mehler kernel: r must lie in (0, 1)");
}

void check_dims(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.empty()) throw ShapeError("Mehler kernel: x and y must have the same positive dimension");
}

}  // namespace

double mehler_kernel(double r, std::span<const double> x, std::span<const double> y)
{
    check_r(r);
    check_dims(x, y);
    const double d = static_cast<double>(x.size());
    const double s = 1.0 - r * r;
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += (r * x[i] - y[i]) * (r * x[i] - y[i]);
    return std::pow(pi, -d / 2) * std::pow(s, -d / 2) * std::exp(-q / s);
}

double mehler_kernel(double r, double x, double y) { return mehler_kernel(r, {&x, 1}, {&y, 1}); }

double mehler_derivative(double r, std::span<const double> x, std::span<const double> y)
{
    check_r(r);
    check_dims(x, y);
    const double d = static_cast<double>(x.size());
    const double s = 1.0 - r * r;
    double q = 0.0, ip = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = r * x[i] - y[i];
        q += z * z;
        ip += z * x[i];
    }
    return std::pow(pi, -d / 2) * (d * r - 2.0 * r * q / s - 2.0 * ip) * std::pow(s, -d / 2 - 1) * std::exp(-q / s);
}

double mehler_derivative(double r, double x, double y) { return mehler_derivative(r, {&x, 1}, {&y, 1}); }

OperatorRep mehler_heat_operator(const HermiteBasis& basis, double r)
{
    check_r(r);
    const AxisBasis ax = basis.axis();
    const GaussRule gh = gauss_hermite(basis.n_max + 8);
    const double s = std::sqrt(1.0 - r * r);
    const Eigen::Index n = static_cast<Eigen::Index>(ax.grid.size());
    const Eigen::Index nq = gh.nodes.size();

    RMat kern(n, basis.n_max);
    RVec y(nq), lw(nq);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = ax.grid.coord(static_cast<std::size_t>(i));
        for (Eigen::Index q = 0; q < nq; ++q) {
            y[q] = r * x + s * gh.nodes[q];
            // Lebesgue weight for dy
            lw[q] = s * gh.weights[q] * std::exp(gh.nodes[q] * gh.nodes[q]);
        }
        const RMat pv = basis.values(y);
        for (int k = 0; k < basis.n_max; ++k) {
            double acc = 0.0;
            for (Eigen::Index q = 0; q < nq; ++q) acc += lw[q] * mehler_kernel(r, x, y[q]) * pv(k, q);
            kern(i, k) = acc;
        }
    }
    OperatorRep op;
    op.grid = ax.grid;
    op.matrix = kern.cast<cplx>() * ax.analysis;
    return op;
}

}  // namespace specmult
