#include "specmult/core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace specmult {

namespace {

std::string tuple_string(std::span<const double> t)
{
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << t[i];
    os << ")";
    return os.str();
}

void require_atl(const SpectralSystem& sys, const char* what)
{
    if (!sys.satisfies_atl())
        throw DomainError(std::string(what) +
                          ": a zero eigenvalue is present; condition (ATL) E_{L_r}({0}) = 0 fails. "
                          "Use atl_filtered() or shifted(delta)");
}

}  // namespace

CVec symbol_diagonal(const SpectralSystem& sys, const Symbol& m)
{
    if (!m.eval) throw ParameterError("symbol has no evaluator");
    const std::size_t n = sys.spectrum_size();
    CVec diag(static_cast<Eigen::Index>(n));
    std::vector<double> tup(sys.d());
    for (std::size_t k = 0; k < n; ++k) {
        sys.eigen_tuple(k, tup);
        const cplx v = m.eval(tup);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("symbol '" + m.name + "' is not finite at spectral point " + tuple_string(tup));
        if (m.bound && std::abs(v) > *m.bound * (1 + 1e-12) + 1e-300)
            throw DomainError("symbol '" + m.name + "' exceeds its declared bound at " + tuple_string(tup));
        diag[static_cast<Eigen::Index>(k)] = v;
    }
    return diag;
}

CVec apply_diagonal(const SpectralSystem& sys, const CVec& diag, const CVec& f)
{
    if (static_cast<std::size_t>(diag.size()) != sys.spectrum_size()) throw ShapeError("diagonal length mismatch");
    CVec c = sys.analyze(f);
    return sys.synthesize(diag.cwiseProduct(c));
}

CVec apply_multiplier(const SpectralSystem& sys, const Symbol& m, const CVec& f)
{
    return apply_diagonal(sys, symbol_diagonal(sys, m), f);
}

OperatorRep multiplier_operator(const SpectralSystem& sys, const CVec& diag)
{
    if (static_cast<std::size_t>(diag.size()) != sys.spectrum_size()) throw ShapeError("diagonal length mismatch");
    const auto n = static_cast<Eigen::Index>(sys.grid_size());
    OperatorRep op;
    op.grid = sys.grid();
    op.matrix.resize(n, n);
    if (sys.d() == 1) {
        const auto& a = sys.axis(0);
        op.matrix.noalias() = a.synthesis * diag.asDiagonal() * a.analysis;
        return op;
    }
    CVec e = CVec::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        e.setZero();
        e[j] = 1.0;
        op.matrix.col(j) = apply_diagonal(sys, diag, e);
    }
    return op;
}

OperatorRep multiplier_operator(const SpectralSystem& sys, const Symbol& m)
{
    return multiplier_operator(sys, symbol_diagonal(sys, m));
}

OperatorRep imaginary_powers(const SpectralSystem& sys, std::span<const double> u)
{
    if (u.size() != sys.d()) throw ShapeError("imaginary_powers: u must have one entry per axis");
    require_atl(sys, "imaginary_powers");
    const std::size_t n = sys.spectrum_size();
    CVec diag(static_cast<Eigen::Index>(n));
    std::vector<double> tup(sys.d());
    for (std::size_t k = 0; k < n; ++k) {
        sys.eigen_tuple(k, tup);
        double phase = 0.0;
        for (std::size_t r = 0; r < sys.d(); ++r) phase += u[r] * std::log(tup[r]);
        diag[static_cast<Eigen::Index>(k)] = std::polar(1.0, phase);
    }
    return multiplier_operator(sys, diag);
}

OperatorRep semigroup(const SpectralSystem& sys, std::span<const double> t, SemigroupKind kind)
{
    if (t.size() != sys.d()) throw ShapeError("semigroup: t must have one entry per axis");
    for (double ti : t)
        if (!(ti > 0.0)) throw ParameterError("semigroup: t must be strictly positive");
    const std::size_t n = sys.spectrum_size();
    CVec diag(static_cast<Eigen::Index>(n));
    std::vector<double> tup(sys.d());
    for (std::size_t k = 0; k < n; ++k) {
        sys.eigen_tuple(k, tup);
        double s = 0.0;
        for (std::size_t r = 0; r < sys.d(); ++r)
            s += t[r] * (kind == SemigroupKind::heat ? tup[r] : std::sqrt(std::max(tup[r], 0.0)));
        diag[static_cast<Eigen::Index>(k)] = std::exp(-s);
    }
    return multiplier_operator(sys, diag);
}

OperatorRep tensor_lift(const OperatorRep& op, std::size_t axis, const WeightedGrid& product)
{
    op.validate();
    if (axis >= product.shape.size()) throw ShapeError("tensor_lift: axis outside the product grid");
    const std::size_t n = product.shape[axis];
    if (op.grid.size() != n) throw ShapeError("tensor_lift: factor grid does not match product axis");
    if (!product.factors.empty()) {
        const auto& fw = product.factors[axis].weights;
        if ((fw - op.grid.weights).cwiseAbs().maxCoeff() > 1e-12 * fw.cwiseAbs().maxCoeff())
            throw ShapeError("tensor_lift: factor weights differ from the product axis weights");
    }
    std::size_t outer = 1, inner = 1;
    for (std::size_t a = 0; a < axis; ++a) outer *= product.shape[a];
    for (std::size_t a = axis + 1; a < product.shape.size(); ++a) inner *= product.shape[a];

    const auto N = static_cast<Eigen::Index>(product.size());
    OperatorRep lift;
    lift.grid = product;
    lift.matrix = CMat::Zero(N, N);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const cplx v = op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (v == cplx(0.0)) continue;
                for (std::size_t in = 0; in < inner; ++in)
                    lift.matrix(static_cast<Eigen::Index>((o * n + i) * inner + in),
                                static_cast<Eigen::Index>((o * n + j) * inner + in)) = v;
            }
    return lift;
}

double weighted_lp_norm(const CVec& f, const RVec& w, double p)
{
    if (f.size() != w.size()) throw ShapeError("weighted_lp_norm: length mismatch");
    if (!(p >= 1.0)) throw ParameterError("weighted_lp_norm: p must be >= 1");
    if (std::isinf(p)) return f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f[i]), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace specmult
