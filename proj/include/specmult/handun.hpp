#pragma once

#include <functional>
#include <vector>

#include "specmult/core.hpp"

namespace specmult {

using RealFn = std::function<cplx(double)>;
using FieldFn = std::function<cplx(std::span<const double>)>;

/// Nodes on (0, R] with weights of x^{2 alpha} dx (Gauss-Jacobi).
struct HalfLineGrid {
    double alpha = 0.0;
    double R = 12.0;
    RVec nodes;
    RVec weights;
    std::size_t size() const { return static_cast<std::size_t>(nodes.size()); }
};

/// Symmetric nodes -x_n..-x_1, x_1..x_n with weights of |x|^{2 alpha} dx.
struct LineGrid {
    double alpha = 0.0;
    double R = 12.0;
    RVec nodes;
    RVec weights;
    std::size_t size() const { return static_cast<std::size_t>(nodes.size()); }
    std::size_t half() const { return size() / 2; }
};

HalfLineGrid make_half_line_grid(double alpha, std::size_t n = 192, double R = 12.0);
LineGrid make_line_grid(double alpha, std::size_t n = 192, double R = 12.0);

struct HankelConfig {
    std::vector<double> alpha;
    double Q() const;
    void validate() const;
};

struct DunklConfig {
    std::vector<double> alpha;
    /// int e^{-|x|^2/2} dnu_alpha = prod 2^{alpha_r + 1/2} Gamma(alpha_r + 1/2)
    double c_alpha() const;
    void validate() const;
};

double dunkl_c_alpha(double alpha);
/// Closed-form Hankel transform constant: H(e^{-t l^2})(x) = C t^{-(2 alpha+1)/2} e^{-x^2/4t}, C = 2^{-alpha-1/2}.
double hankel_gaussian_constant(double alpha);
/// Total mass of the Hankel translation measure W_{x,y}: 1 / (2^{alpha-1/2} Gamma(alpha+1/2)).
double hankel_translation_mass(double alpha);

/// E_x(lambda) = (x lambda)^{-alpha+1/2} J_{alpha-1/2}(x lambda)
double hankel_kernel(double alpha, double x, double lambda);

class HankelTransform {
public:
    HankelTransform(HankelConfig cfg, std::vector<HalfLineGrid> grids);

    std::size_t d() const { return grids_.size(); }
    const HankelConfig& config() const { return cfg_; }
    const HalfLineGrid& axis_grid(std::size_t r) const { return grids_.at(r); }
    std::vector<std::size_t> shape() const;
    std::size_t size() const;
    WeightedGrid grid() const;
    /// Node coordinates of flat index k.
    std::vector<double> point(std::size_t k) const;
    CVec sample(const FieldFn& f) const;

    /// H f on the same grid.
    CVec forward(const CVec& f) const;
    cplx forward_at(const CVec& f, std::span<const double> x) const;

    /// tau^y f = H(E_y H f)
    CVec translate(const CVec& f, std::span<const double> y) const;
    cplx translate_at(const CVec& f, std::span<const double> y, std::span<const double> x) const;
    /// f natural g by quadrature of int tau^x f(y) g(y) dnu(y)
    CVec convolve(const CVec& f, const CVec& g) const;
    CVec multiplier(const Symbol& m, const CVec& f) const;

    const RMat& kernel(std::size_t r) const { return kernels_.at(r); }

private:
    HankelConfig cfg_;
    std::vector<HalfLineGrid> grids_;
    std::vector<RMat> kernels_;  // K(i, j) = E_{x_i}(lambda_j) w_j
};

/// Translation through the product formula for W_{x,y}, one axis, alpha >= 0.
cplx hankel_translate_direct(double alpha, double y, const RealFn& f, double x, int nodes = 96);
/// t^Q f(t x)
FieldFn hankel_dilate(const HankelConfig& cfg, const FieldFn& f, double t);
/// lambda^{-2 alpha - 1} f(x / lambda)
FieldFn dunkl_dilate(const DunklConfig& cfg, const FieldFn& f, std::span<const double> lambda);

class DunklTransform {
public:
    DunklTransform(DunklConfig cfg, std::vector<LineGrid> grids);

    std::size_t d() const { return grids_.size(); }
    const DunklConfig& config() const { return cfg_; }
    const LineGrid& axis_grid(std::size_t r) const { return grids_.at(r); }
    std::vector<std::size_t> shape() const;
    std::size_t size() const;
    WeightedGrid grid() const;
    std::vector<double> point(std::size_t k) const;
    CVec sample(const FieldFn& f) const;

    CVec forward(const CVec& f) const;
    cplx forward_at(const CVec& f, std::span<const double> x) const;
    /// D^{-1} f = D(f reflected through the origin)
    CVec inverse(const CVec& f) const;
    CVec reflect(const CVec& f) const;
    /// f(sigma_r x)
    CVec reflect_axis(const CVec& f, std::size_t r) const;

    CVec multiplier(const Symbol& m, const CVec& f) const;
    CVec multiplier(const CVec& m_values, const CVec& f) const;
    /// x_r / |x| multiplier
    CVec riesz(std::size_t r, const CVec& f) const;
    /// Matrix-free map of f -> D^{-1}(m D f) with its conjugate transpose.
    LinearMap multiplier_map(const CVec& m_values) const;

    /// (f star g)(x) = int f(y) tau^x g^vee(y) dnu(y) / c_alpha, callables for g.
    CVec convolve(const CVec& f, const FieldFn& g, int translate_nodes = 48) const;

    const CMat& kernel(std::size_t r) const { return kernels_.at(r); }

private:
    DunklConfig cfg_;
    std::vector<LineGrid> grids_;
    std::vector<CMat> kernels_;
};

enum class TranslateVariant { tau, tau_eps1 };

/// One-dimensional generalized translation tau^s f(t).
cplx dunkl_translate(double alpha, double s, const RealFn& f, double t, TranslateVariant v = TranslateVariant::tau,
                     int nodes = 64);
/// d-dimensional composition; variant per axis.
cplx dunkl_translate(const DunklConfig& cfg, std::span<const double> y, const FieldFn& f, std::span<const double> x,
                     const std::vector<TranslateVariant>& variant = {}, int nodes = 32);

/// 2^d epsilon-symmetric parts on a symmetric grid tensor; index bit r is eps_r.
std::vector<CVec> epsilon_decompose(const DunklTransform& D, const CVec& f);

/// tau^x chi_{[-t,t]}(y) for even indicator, alpha >= 0.
double translated_indicator(double alpha, double x, double y, double t);
/// M_P |f| on the grid: composition of one-axis maximal averages over the t sweep
/// (plus the t -> 0 limit |f(x)|).
RVec maximal_MP(const DunklTransform& D, const CVec& f, const std::vector<double>& t_sweep);

// Partition of unity for Littlewood-Paley blocks
double lp_omega(double x);
double lp_theta(double t);
/// psi(xi) = sqrt(theta(log2 |xi|)), supported in 1/2 <= |xi| <= 2, sum_l psi(2^{-l} xi)^2 = 1.
double lp_psi(double xi);

struct SobolevOptions {
    double x_half_width = 4.0;
    std::size_t x_points = 1024;
    double xi_max = 60.0;
    std::size_t xi_nodes = 256;  // Gauss-Legendre nodes per half axis
};

struct SobolevResult {
    double value = 0.0;
    bool decay_warning = false;
};

/// ||w_s F f||_2 with the unitary Fourier transform.  mixed: prod (1+y_r^2)^{s_r/2}; else (1+|y|)^{s_0}.
SobolevResult sobolev_norm(const FieldFn& f, std::size_t d, const std::vector<double>& s, bool mixed,
                           const SobolevOptions& opt = {});

struct LocalSobolevResult {
    double sup = 0.0;
    std::vector<double> per_j;
    bool decay_warning = false;
};

/// sup_j ||Psi m(2^{j_1} ., ..., 2^{j_d} .)||_{W_s} over j in [j_min, j_max]^d.
LocalSobolevResult local_sobolev_sup(const FieldFn& m, std::size_t d, const std::vector<double>& s, int j_min,
                                     int j_max, const SobolevOptions& opt = {});

}  // namespace specmult
