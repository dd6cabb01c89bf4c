#include "specmult/core.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace specmult {

namespace {

bool is_exact_exponent(double p) { return p == 1.0 || p == 2.0 || std::isinf(p); }

double dense_exact(const OperatorRep& op, double p)
{
    const CMat& t = op.matrix;
    const RVec& w = op.grid.weights;
    if (p == 1.0) {
        double best = 0.0;
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < t.rows(); ++i) s += w[i] * std::abs(t(i, j));
            best = std::max(best, s / w[j]);
        }
        return best;
    }
    if (std::isinf(p)) {
        double best = 0.0;
        for (Eigen::Index i = 0; i < t.rows(); ++i) best = std::max(best, t.row(i).cwiseAbs().sum());
        return best;
    }
    const RVec sw = w.cwiseSqrt();
    CMat s = sw.asDiagonal() * t * sw.cwiseInverse().asDiagonal();
    Eigen::BDCSVD<CMat> svd(s);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double mixed_norm(const CVec& y, std::size_t blocks, const RVec& w, double p, RVec* pointwise)
{
    const Eigen::Index n = w.size();
    RVec f = RVec::Zero(n);
    for (std::size_t b = 0; b < blocks; ++b)
        for (Eigen::Index i = 0; i < n; ++i) f[i] += std::norm(y[static_cast<Eigen::Index>(b) * n + i]);
    f = f.cwiseSqrt();
    if (pointwise) *pointwise = f;
    if (std::isinf(p)) return n ? f.maxCoeff() : 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += w[i] * std::pow(f[i], p);
    return std::pow(s, 1.0 / p);
}

double map_l1_exact(const LinearMap& m)
{
    double best = 0.0;
    CVec e = CVec::Zero(static_cast<Eigen::Index>(m.n_in));
    for (std::size_t j = 0; j < m.n_in; ++j) {
        e.setZero();
        e[static_cast<Eigen::Index>(j)] = 1.0;
        const CVec y = m.apply(e);
        best = std::max(best, mixed_norm(y, m.out_blocks, m.w_out, 1.0, nullptr) / m.w_in[static_cast<Eigen::Index>(j)]);
    }
    return best;
}

double map_linf_exact(const LinearMap& m)
{
    if (m.out_blocks != 1) throw UnsupportedMode("p = infinity is not supported for vector-valued maps");
    double best = 0.0;
    CVec e = CVec::Zero(static_cast<Eigen::Index>(m.n_out));
    for (std::size_t i = 0; i < m.n_out; ++i) {
        e.setZero();
        e[static_cast<Eigen::Index>(i)] = 1.0;
        best = std::max(best, m.apply_adjoint(e).cwiseAbs().sum());
    }
    return best;
}

}  // namespace

LinearMap as_linear_map(const OperatorRep& op)
{
    op.validate();
    LinearMap m;
    m.n_in = m.n_out = op.grid.size();
    m.w_in = m.w_out = op.grid.weights;
    auto shared = std::make_shared<const CMat>(op.matrix);
    m.apply = [shared](const CVec& x) -> CVec { return (*shared) * x; };
    m.apply_adjoint = [shared](const CVec& y) -> CVec { return shared->adjoint() * y; };
    return m;
}

double lp_lower_bound(const LinearMap& m, double p, std::uint64_t seed, const PowerOptions& opt)
{
    if (!(p >= 1.0)) throw ParameterError("lp_lower_bound: p must be >= 1");
    if (static_cast<std::size_t>(m.w_in.size()) != m.n_in || static_cast<std::size_t>(m.w_out.size()) != m.n_out)
        throw ShapeError("lp_lower_bound: weight lengths do not match the map");
    if (p == 1.0) return map_l1_exact(m);
    if (std::isinf(p)) return map_linf_exact(m);

    const double q = p / (p - 1.0);
    const auto nin = static_cast<Eigen::Index>(m.n_in);
    const auto nout = static_cast<Eigen::Index>(m.n_out);
    double best = 0.0;
    for (int restart = 0; restart < opt.restarts; ++restart) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(restart) * 0xBF58476D1CE4E5B9ULL + 1);
        std::normal_distribution<double> nd(0.0, 1.0);
        CVec x(nin);
        for (Eigen::Index i = 0; i < nin; ++i) x[i] = cplx(nd(rng), nd(rng));
        x /= weighted_lp_norm(x, m.w_in, p);

        double est = 0.0;
        for (int it = 0; it < opt.iterations; ++it) {
            const CVec y = m.apply(x);
            RVec f;
            const double ny = mixed_norm(y, m.out_blocks, m.w_out, p, &f);
            if (!(ny > 0.0)) break;
            CVec z(y.size());
            for (std::size_t b = 0; b < m.out_blocks; ++b)
                for (Eigen::Index i = 0; i < nout; ++i) {
                    const Eigen::Index k = static_cast<Eigen::Index>(b) * nout + i;
                    z[k] = f[i] > 0.0 ? m.w_out[i] * std::pow(f[i], p - 2.0) * y[k] : cplx(0.0);
                }
            CVec g = m.apply_adjoint(z);
            for (Eigen::Index j = 0; j < nin; ++j) {
                const double a = std::abs(g[j]) / m.w_in[j];
                g[j] = a > 0.0 ? std::pow(a, q - 1.0) * (g[j] / std::abs(g[j])) : cplx(0.0);
            }
            const double ng = weighted_lp_norm(g, m.w_in, p);
            const bool done = std::abs(ny - est) <= opt.rel_tol * ny;
            est = std::max(est, ny);
            if (!(ng > 0.0) || done) break;
            x = g / ng;
        }
        best = std::max(best, est);
    }
    return best;
}

double lp_operator_norm(const OperatorRep& op, double p, NormMode mode, std::uint64_t seed, const PowerOptions& opt)
{
    op.validate();
    if (!(p >= 1.0)) throw ParameterError("lp_operator_norm: p must be >= 1");
    if (is_exact_exponent(p)) return dense_exact(op, p);
    switch (mode) {
    case NormMode::exact:
        throw UnsupportedMode("lp_operator_norm: exact mode needs p in {1, 2, inf}");
    case NormMode::lower:
        return lp_lower_bound(as_linear_map(op), p, seed, opt);
    case NormMode::upper: {
        if (p < 2.0) {
            const double theta = 2.0 * (1.0 - 1.0 / p);
            return std::pow(dense_exact(op, 1.0), 1.0 - theta) * std::pow(dense_exact(op, 2.0), theta);
        }
        const double theta = 1.0 - 2.0 / p;
        return std::pow(dense_exact(op, 2.0), 1.0 - theta) *
               std::pow(dense_exact(op, std::numeric_limits<double>::infinity()), theta);
    }
    }
    return 0.0;
}

}  // namespace specmult
