#include "specmult/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specmult {

namespace {

using RowMajorCMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t product(const std::vector<std::size_t>& v)
{
    std::size_t n = 1;
    for (auto s : v) n *= s;
    return n;
}

double zero_tol(const RVec& ev, double tol)
{
    double scale = ev.size() ? std::max(1.0, ev.cwiseAbs().maxCoeff()) : 1.0;
    return tol * scale;
}

}  // namespace

CVec apply_along_axis(const CMat& m, const CVec& x, const std::vector<std::size_t>& shape, std::size_t axis)
{
    if (axis >= shape.size()) throw ShapeError("apply_along_axis: axis out of range");
    if (static_cast<std::size_t>(x.size()) != product(shape)) throw ShapeError("apply_along_axis: tensor size mismatch");
    const std::size_t n = shape[axis];
    if (static_cast<std::size_t>(m.cols()) != n) throw ShapeError("apply_along_axis: matrix width mismatch");

    std::size_t outer = 1, inner = 1;
    for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
    for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
    const std::size_t rows = static_cast<std::size_t>(m.rows());

    CVec y(static_cast<Eigen::Index>(outer * rows * inner));
    for (std::size_t o = 0; o < outer; ++o) {
        Eigen::Map<const RowMajorCMat> xin(x.data() + o * n * inner, static_cast<Eigen::Index>(n),
                                           static_cast<Eigen::Index>(inner));
        Eigen::Map<RowMajorCMat> yout(y.data() + o * rows * inner, static_cast<Eigen::Index>(rows),
                                      static_cast<Eigen::Index>(inner));
        yout.noalias() = m * xin;
    }
    return y;
}

SpectralSystem::SpectralSystem(std::vector<AxisBasis> axes) : axes_(std::move(axes))
{
    if (axes_.empty()) throw ParameterError("spectral system needs at least one axis");
    std::vector<WeightedGrid> grids;
    for (std::size_t r = 0; r < axes_.size(); ++r) {
        const auto& a = axes_[r];
        const auto nm = a.eigenvalues.size();
        const auto ng = static_cast<Eigen::Index>(a.grid.size());
        if (a.analysis.rows() != nm || a.analysis.cols() != ng || a.synthesis.rows() != ng || a.synthesis.cols() != nm)
            throw ShapeError("axis " + std::to_string(r) + ": analysis/synthesis shapes inconsistent");
        for (Eigen::Index k = 0; k < nm; ++k) {
            if (!(a.eigenvalues[k] >= -1e-12)) throw DomainError("axis " + std::to_string(r) + ": negative eigenvalue");
            if (k > 0 && a.eigenvalues[k] < a.eigenvalues[k - 1] - 1e-12)
                throw ParameterError("axis " + std::to_string(r) + ": eigenvalues must be sorted ascending");
        }
        grids.push_back(a.grid);
    }
    grid_ = product_grid(grids);
    if (axes_.size() == 1) grid_.shape = {grid_.size()};
}

std::size_t SpectralSystem::spectrum_size() const { return product(mode_shape()); }

std::vector<std::size_t> SpectralSystem::mode_shape() const
{
    std::vector<std::size_t> s;
    for (const auto& a : axes_) s.push_back(static_cast<std::size_t>(a.eigenvalues.size()));
    return s;
}

std::vector<std::size_t> SpectralSystem::node_shape() const
{
    std::vector<std::size_t> s;
    for (const auto& a : axes_) s.push_back(a.grid.size());
    return s;
}

CVec SpectralSystem::analyze(const CVec& f) const
{
    if (static_cast<std::size_t>(f.size()) != grid_size()) throw ShapeError("analyze: input length differs from grid size");
    CVec x = f;
    auto shape = node_shape();
    for (std::size_t r = 0; r < d(); ++r) {
        x = apply_along_axis(axes_[r].analysis, x, shape, r);
        shape[r] = static_cast<std::size_t>(axes_[r].eigenvalues.size());
    }
    return x;
}

CVec SpectralSystem::synthesize(const CVec& c) const
{
    if (static_cast<std::size_t>(c.size()) != spectrum_size()) throw ShapeError("synthesize: coefficient length mismatch");
    CVec x = c;
    auto shape = mode_shape();
    for (std::size_t r = 0; r < d(); ++r) {
        x = apply_along_axis(axes_[r].synthesis, x, shape, r);
        shape[r] = axes_[r].grid.size();
    }
    return x;
}

void SpectralSystem::eigen_tuple(std::size_t k, std::span<double> out) const
{
    if (out.size() != d()) throw ShapeError("eigen_tuple: output span must have length d");
    for (std::size_t r = d(); r-- > 0;) {
        const auto n = static_cast<std::size_t>(axes_[r].eigenvalues.size());
        out[r] = axes_[r].eigenvalues[static_cast<Eigen::Index>(k % n)];
        k /= n;
    }
}

RMat SpectralSystem::joint_eigenvalues() const
{
    const std::size_t n = spectrum_size();
    RMat ev(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d()));
    std::vector<double> tup(d());
    for (std::size_t k = 0; k < n; ++k) {
        eigen_tuple(k, tup);
        for (std::size_t r = 0; r < d(); ++r) ev(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r)) = tup[r];
    }
    return ev;
}

SpectralSystem SpectralSystem::shifted(double delta) const { return shifted(std::vector<double>(d(), delta)); }

SpectralSystem SpectralSystem::shifted(const std::vector<double>& delta) const
{
    if (delta.size() != d()) throw ShapeError("shifted: need one shift per axis");
    auto axes = axes_;
    for (std::size_t r = 0; r < d(); ++r) {
        if (!(delta[r] >= 0.0)) throw ParameterError("shifted: shift must be nonnegative");
        axes[r].eigenvalues.array() += delta[r];
        axes[r].label += "+" + std::to_string(delta[r]);
    }
    return SpectralSystem(std::move(axes));
}

SpectralSystem SpectralSystem::atl_filtered(double tol) const
{
    std::vector<AxisBasis> axes;
    for (const auto& a : axes_) {
        const double z = zero_tol(a.eigenvalues, tol);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < a.eigenvalues.size(); ++k)
            if (std::abs(a.eigenvalues[k]) > z) keep.push_back(k);
        if (keep.empty()) throw DomainError("atl_filtered: axis '" + a.label + "' has only zero eigenvalues");
        AxisBasis b;
        b.grid = a.grid;
        b.label = a.label + " (ATL)";
        b.eigenvalues.resize(static_cast<Eigen::Index>(keep.size()));
        b.analysis.resize(static_cast<Eigen::Index>(keep.size()), a.analysis.cols());
        b.synthesis.resize(a.synthesis.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            b.eigenvalues[ii] = a.eigenvalues[keep[i]];
            b.analysis.row(ii) = a.analysis.row(keep[i]);
            b.synthesis.col(ii) = a.synthesis.col(keep[i]);
        }
        axes.push_back(std::move(b));
    }
    return SpectralSystem(std::move(axes));
}

bool SpectralSystem::satisfies_atl(double tol) const
{
    for (const auto& a : axes_) {
        const double z = zero_tol(a.eigenvalues, tol);
        for (Eigen::Index k = 0; k < a.eigenvalues.size(); ++k)
            if (std::abs(a.eigenvalues[k]) <= z) return false;
    }
    return true;
}

CMat SpectralSystem::atl_projection(double tol) const
{
    const SpectralSystem f = atl_filtered(tol);
    const std::size_t n = grid_size();
    CMat p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    CVec e = CVec::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        e.setZero();
        e[static_cast<Eigen::Index>(j)] = 1.0;
        p.col(static_cast<Eigen::Index>(j)) = f.synthesize(f.analyze(e));
    }
    return p;
}

SpectralSystem tensor_system(const std::vector<SpectralSystem>& systems)
{
    std::vector<AxisBasis> axes;
    for (const auto& s : systems)
        for (const auto& a : s.axes()) axes.push_back(a);
    return SpectralSystem(std::move(axes));
}

}  // namespace specmult
