#include <algorithm>
#include <cmath>

#include "specmult/bases.hpp"

namespace specmult {

namespace {

AxisBasis make_axis(const RMat& vals, const RVec& nodes, const RVec& weights, const RVec& eig, const std::string& label)
{
    AxisBasis a;
    a.eigenvalues = eig;
    a.grid = make_grid(std::vector<double>(nodes.data(), nodes.data() + nodes.size()), weights, label);
    a.synthesis = vals.transpose().cast<cplx>();
    a.analysis = (vals * weights.asDiagonal()).cast<cplx>();
    return a;
}

void check_nmax(int n)
{
    if (n < 1) throw ParameterError("n_max must be at least 1");
}

}  // namespace

HermiteBasis HermiteBasis::build(int n_max)
{
    check_nmax(n_max);
    HermiteBasis h;
    h.n_max = n_max;
    h.rec = hermite_recurrence(2 * n_max + 1);
    h.quad = gauss_rule(h.rec, 2 * n_max);
    h.quad.weights /= h.rec.mass;
    return h;
}

RMat HermiteBasis::values(const RVec& x) const { return orthonormal_values(rec, n_max, x); }

AxisBasis HermiteBasis::axis() const
{
    RVec eig(n_max);
    for (int k = 0; k < n_max; ++k) eig[k] = k;
    return make_axis(values(quad.nodes), quad.nodes, quad.weights, eig, "hermite(" + std::to_string(n_max) + ")");
}

LaguerreBasis LaguerreBasis::build(int n_max, double alpha)
{
    check_nmax(n_max);
    if (!(alpha > -1.0)) throw ParameterError("Laguerre basis: alpha must exceed -1");
    LaguerreBasis l;
    l.alpha = alpha;
    l.n_max = n_max;
    l.rec = laguerre_recurrence(2 * n_max + 1, alpha);
    l.quad = gauss_rule(l.rec, 2 * n_max);
    l.quad.weights /= l.rec.mass;
    return l;
}

RMat LaguerreBasis::values(const RVec& x) const { return orthonormal_values(rec, n_max, x); }

AxisBasis LaguerreBasis::axis() const
{
    RVec eig(n_max);
    for (int k = 0; k < n_max; ++k) eig[k] = k;
    return make_axis(values(quad.nodes), quad.nodes, quad.weights, eig,
                     "laguerre(" + std::to_string(n_max) + "," + std::to_string(alpha) + ")");
}

JacobiBasis JacobiBasis::build(int n_max, double alpha, double beta)
{
    check_nmax(n_max);
    if (!(alpha > -1.0) || !(beta > -1.0)) throw ParameterError("Jacobi basis: alpha and beta must exceed -1");
    if (!(alpha + beta > -1.0)) throw ParameterError("Jacobi basis: alpha + beta must exceed -1");
    JacobiBasis j;
    j.alpha = alpha;
    j.beta = beta;
    j.n_max = n_max;
    j.rec = jacobi_recurrence(2 * n_max + 1, alpha, beta);
    GaussRule g = gauss_rule(j.rec, 2 * n_max);
    // x = cos(theta); the theta measure has total mass B(alpha+1, beta+1).
    j.mass = j.rec.mass * std::pow(2.0, -alpha - beta - 1.0);
    const int n = static_cast<int>(g.nodes.size());
    j.quad.nodes.resize(n);
    j.quad.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // ascending theta
        j.quad.nodes[i] = std::acos(std::clamp(g.nodes[n - 1 - i], -1.0, 1.0));
        j.quad.weights[i] = g.weights[n - 1 - i] / j.rec.mass * j.mass;
    }
    return j;
}

RMat JacobiBasis::values(const RVec& theta) const
{
    RVec x = theta.array().cos().matrix();
    return orthonormal_values(rec, n_max, x) / std::sqrt(mass);
}

double JacobiBasis::eigenvalue(int k) const
{
    const double s = k + (alpha + beta + 1.0) / 2.0;
    return s * s;
}

AxisBasis JacobiBasis::axis() const
{
    RVec eig(n_max);
    for (int k = 0; k < n_max; ++k) eig[k] = eigenvalue(k);
    return make_axis(values(quad.nodes), quad.nodes, quad.weights, eig,
                     "jacobi(" + std::to_string(n_max) + "," + std::to_string(alpha) + "," + std::to_string(beta) + ")");
}

SpectralSystem build_system(const std::vector<Basis>& bases)
{
    if (bases.empty()) throw ParameterError("build_system: empty basis list");
    std::vector<AxisBasis> axes;
    for (const auto& b : bases) axes.push_back(std::visit([](const auto& x) { return x.axis(); }, b));
    return SpectralSystem(std::move(axes));
}

CVec jacobi_imaginary_power(const JacobiBasis& basis, double v, const CVec& f)
{
    const SpectralSystem sys({basis.axis()});
    CVec c = sys.analyze(f);
    for (int k = 0; k < basis.n_max; ++k) c[k] *= std::polar(1.0, 2.0 * v * std::log(std::sqrt(basis.eigenvalue(k))));
    return sys.synthesize(c);
}

}  // namespace specmult
