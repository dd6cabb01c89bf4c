#include "specmult/core.hpp"

#include <cmath>

namespace specmult {

void WeightedGrid::validate() const
{
    if (dim == 0) throw ParameterError("grid '" + label + "': dimension must be positive");
    if (nodes.size() != size() * dim)
        throw ShapeError("grid '" + label + "': node count does not match weight count");
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw ParameterError("grid '" + label + "': weight " + std::to_string(i) + " is not strictly positive");
    }
    if (!shape.empty()) {
        std::size_t n = 1;
        for (auto s : shape) n *= s;
        if (n != size()) throw ShapeError("grid '" + label + "': shape product does not match size");
    }
}

WeightedGrid make_grid(std::vector<double> nodes, RVec weights, std::string label, std::size_t dim)
{
    WeightedGrid g;
    g.dim = dim;
    g.nodes = std::move(nodes);
    g.weights = std::move(weights);
    g.label = std::move(label);
    g.shape = {g.size()};
    g.validate();
    return g;
}

WeightedGrid product_grid(const std::vector<WeightedGrid>& factors)
{
    if (factors.empty()) throw ParameterError("product_grid: no factors");
    if (factors.size() == 1) return factors.front();

    WeightedGrid g;
    g.dim = 0;
    std::size_t n = 1;
    for (const auto& f : factors) {
        g.dim += f.dim;
        n *= f.size();
        g.shape.push_back(f.size());
        if (!g.label.empty()) g.label += " x ";
        g.label += f.label;
    }
    g.factors = factors;
    g.weights.resize(static_cast<Eigen::Index>(n));
    g.nodes.resize(n * g.dim);

    std::vector<std::size_t> idx(factors.size(), 0);
    for (std::size_t flat = 0; flat < n; ++flat) {
        double w = 1.0;
        std::size_t c = 0;
        for (std::size_t a = 0; a < factors.size(); ++a) {
            w *= factors[a].weights[static_cast<Eigen::Index>(idx[a])];
            for (std::size_t k = 0; k < factors[a].dim; ++k) g.nodes[flat * g.dim + c++] = factors[a].coord(idx[a], k);
        }
        g.weights[static_cast<Eigen::Index>(flat)] = w;
        for (std::size_t a = factors.size(); a-- > 0;) {
            if (++idx[a] < factors[a].size()) break;
            idx[a] = 0;
        }
    }
    return g;
}

void OperatorRep::validate() const
{
    if (matrix.rows() != matrix.cols()) throw ShapeError("operator matrix is not square");
    if (static_cast<std::size_t>(matrix.rows()) != grid.size())
        throw ShapeError("operator dimension does not match grid '" + grid.label + "'");
}

void GrowthProfile::validate() const
{
    for (double t : theta)
        if (!(t >= 0.0)) throw ParameterError("growth profile: theta must be nonnegative");
    for (double s : sigma)
        if (!(s > 0.0)) throw ParameterError("growth profile: sigma must be positive");
    for (double a : phi_p)
        if (!(a > 0.0 && a < pi / 2)) throw ParameterError("growth profile: angles must lie in (0, pi/2)");
}

Symbol make_symbol(std::function<cplx(std::span<const double>)> f, std::string name)
{
    Symbol s;
    s.eval = std::move(f);
    s.name = std::move(name);
    return s;
}

}  // namespace specmult
