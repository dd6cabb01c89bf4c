#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specmult/errors.hpp"
#include "specmult/types.hpp"

namespace specmult {

/// Discretized measure space: nodes in R^dim with positive quadrature weights.
/// Product grids keep their factors and a row-major shape.
struct WeightedGrid {
    std::size_t dim = 1;
    std::vector<double> nodes;  // size() * dim, point-major
    RVec weights;
    std::string label;
    std::vector<std::size_t> shape;  // one entry per tensor factor
    std::vector<WeightedGrid> factors;

    std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
    double coord(std::size_t i, std::size_t c = 0) const { return nodes[i * dim + c]; }
    double total_mass() const { return weights.sum(); }
    void validate() const;
};

WeightedGrid make_grid(std::vector<double> nodes, RVec weights, std::string label, std::size_t dim = 1);
WeightedGrid product_grid(const std::vector<WeightedGrid>& factors);

/// One axis of a joint spectral system.  analysis is modes x nodes, synthesis nodes x modes.
struct AxisBasis {
    RVec eigenvalues;
    CMat analysis;
    CMat synthesis;
    WeightedGrid grid;
    std::string label;
};

class SpectralSystem {
public:
    SpectralSystem() = default;
    explicit SpectralSystem(std::vector<AxisBasis> axes);

    std::size_t d() const { return axes_.size(); }
    const AxisBasis& axis(std::size_t r) const { return axes_.at(r); }
    const std::vector<AxisBasis>& axes() const { return axes_; }
    const WeightedGrid& grid() const { return grid_; }
    std::size_t grid_size() const { return grid_.size(); }
    std::size_t spectrum_size() const;
    std::vector<std::size_t> mode_shape() const;
    std::vector<std::size_t> node_shape() const;

    CVec analyze(const CVec& f) const;
    CVec synthesize(const CVec& c) const;

    /// Eigenvalue tuple of the flat (row-major) multi-index k.
    void eigen_tuple(std::size_t k, std::span<double> out) const;
    /// spectrum_size() x d matrix of joint eigenvalues.
    RMat joint_eigenvalues() const;

    SpectralSystem shifted(double delta) const;
    SpectralSystem shifted(const std::vector<double>& delta) const;
    /// Drops zero-eigenvalue modes on every axis.
    SpectralSystem atl_filtered(double tol = 1e-12) const;
    bool satisfies_atl(double tol = 1e-12) const;
    /// Orthogonal projection onto the span of the modes kept by atl_filtered().
    CMat atl_projection(double tol = 1e-12) const;

private:
    std::vector<AxisBasis> axes_;
    WeightedGrid grid_;
};

SpectralSystem tensor_system(const std::vector<SpectralSystem>& systems);

/// Applies a matrix along one axis of a row-major tensor.
CVec apply_along_axis(const CMat& m, const CVec& x, const std::vector<std::size_t>& shape, std::size_t axis);

struct Symbol {
    std::function<cplx(std::span<const double>)> eval;
    /// Optional holomorphic extension, used for boundary values.
    std::function<cplx(std::span<const cplx>)> eval_complex;
    /// Optional analytic partial derivative d^gamma m at lambda.
    std::function<cplx(std::span<const int>, std::span<const double>)> derivative;
    std::optional<double> bound;
    std::vector<double> holomorphic_sector;
    std::string name;

    cplx operator()(std::span<const double> lam) const { return eval(lam); }
    cplx operator()(double lam) const { return eval(std::span<const double>(&lam, 1)); }
};

Symbol make_symbol(std::function<cplx(std::span<const double>)> f, std::string name = {});

struct OperatorRep {
    CMat matrix;
    WeightedGrid grid;
    void validate() const;
};

struct GrowthProfile {
    std::vector<double> theta;
    std::vector<double> sigma;
    std::vector<double> phi_p;
    void validate() const;
};

enum class SemigroupKind { heat, poisson };
enum class NormMode { exact, lower, upper };

CVec symbol_diagonal(const SpectralSystem& sys, const Symbol& m);
CVec apply_diagonal(const SpectralSystem& sys, const CVec& diag, const CVec& f);
CVec apply_multiplier(const SpectralSystem& sys, const Symbol& m, const CVec& f);
OperatorRep multiplier_operator(const SpectralSystem& sys, const CVec& diag);
OperatorRep multiplier_operator(const SpectralSystem& sys, const Symbol& m);

OperatorRep imaginary_powers(const SpectralSystem& sys, std::span<const double> u);
OperatorRep semigroup(const SpectralSystem& sys, std::span<const double> t, SemigroupKind kind = SemigroupKind::heat);
OperatorRep tensor_lift(const OperatorRep& op, std::size_t axis, const WeightedGrid& product);

double weighted_lp_norm(const CVec& f, const RVec& w, double p);

/// Matrix-free operator.  apply_adjoint is the plain conjugate transpose.
/// When out_blocks > 1 the output is out_blocks stacked vectors of length n_out
/// measured in the mixed norm ||(sum_b |y_b|^2)^{1/2}||_p.
struct LinearMap {
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    std::size_t out_blocks = 1;
    RVec w_in;
    RVec w_out;
    std::function<CVec(const CVec&)> apply;
    std::function<CVec(const CVec&)> apply_adjoint;
};

struct PowerOptions {
    int iterations = 200;
    double rel_tol = 1e-9;
    int restarts = 8;
};

LinearMap as_linear_map(const OperatorRep& op);
double lp_lower_bound(const LinearMap& map, double p, std::uint64_t seed = 0, const PowerOptions& opt = {});
double lp_operator_norm(const OperatorRep& op, double p, NormMode mode, std::uint64_t seed = 0,
                        const PowerOptions& opt = {});

void save_operator(const OperatorRep& op, const std::string& base_path);
OperatorRep load_operator(const std::string& base_path, const WeightedGrid& grid);

}  // namespace specmult
