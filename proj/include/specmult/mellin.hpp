#pragma once

#include <functional>
#include <string>
#include <vector>

#include "specmult/core.hpp"

namespace specmult {

/// Log-uniform axis over [lambda_min, lambda_max].
struct LogAxis {
    double lambda_min = 1e-6;
    double lambda_max = 1e6;
    std::size_t count = 512;

    double step() const;
    double s(std::size_t i) const;  // log lambda_i
    double lambda(std::size_t i) const;
    void validate() const;
};

/// Uniform frequency axis, endpoints included.
struct UAxis {
    double u_min = -40.0;
    double u_max = 40.0;
    std::size_t count = 512;

    double step() const;
    double u(std::size_t i) const;
    void validate() const;
};

/// Samples of a symbol on a product of log axes, row-major.
struct LogGridSymbol {
    std::vector<LogAxis> axes;
    CVec samples;
    bool decay_warning = false;

    std::size_t d() const { return axes.size(); }
    std::vector<std::size_t> shape() const;
    void validate() const;
};

/// Samples of a Mellin transform on a product of u axes.
struct MellinGrid {
    std::vector<UAxis> axes;
    CVec values;
    bool decay_warning = false;

    std::size_t d() const { return axes.size(); }
    std::vector<std::size_t> shape() const;
};

LogGridSymbol sample_log_grid(const Symbol& m, const std::vector<LogAxis>& axes);
/// CSV rows: lambda_1,...,lambda_d,re[,im]; rows must cover the product grid in row-major order.
LogGridSymbol import_symbol_csv(const std::string& path, const std::vector<LogAxis>& axes);

cplx mellin_transform(const LogGridSymbol& m, std::span<const double> u);
MellinGrid mellin_transform(const LogGridSymbol& m, const std::vector<UAxis>& axes);
LogGridSymbol mellin_inverse(const MellinGrid& values, const std::vector<LogAxis>& axes);

/// int |m|^2 dlambda/lambda and int |M m|^2 du by the trapezoid rule.
double log_l2_norm_sq(const LogGridSymbol& m);
double u_l2_norm_sq(const MellinGrid& v);

// Symbol conditions

struct SweepOptions {
    int j_min = -20;
    int j_max = 20;
    double fd_step = 1e-4;        // step in log lambda for central differences
    double rel_tol = 1e-12;       // panel refinement
    std::size_t max_points = 1u << 18;  // per block integral
    bool use_analytic = true;     // use Symbol::derivative when present
};

struct ConditionResult {
    std::vector<std::vector<int>> gammas;
    std::vector<double> values;         // per gamma
    std::vector<bool> stabilized;       // per gamma
    std::vector<std::vector<double>> running_sup;  // per gamma, per sweep shell
    double total = 0.0;
    bool divergent = false;
};

/// All multi-indices gamma <= rho, lexicographic.
std::vector<std::vector<int>> multi_indices_below(const std::vector<int>& rho);

/// lambda^gamma d^gamma m at lambda (lambda_r may be negative).
cplx log_derivative(const Symbol& m, const std::vector<int>& gamma, std::span<const double> lambda,
                    const SweepOptions& opt = {});

ConditionResult marcinkiewicz_norm(const Symbol& m, const std::vector<int>& rho, const SweepOptions& opt = {});

struct MikhlinResult {
    std::vector<std::vector<int>> gammas;
    std::vector<double> sups;
};
/// Samples |xi_1|^{g_1}...|xi_d|^{g_d} |d^gamma m| on signed log grids.
MikhlinResult mikhlin_check(const Symbol& m, const std::vector<int>& rho, std::size_t points_per_axis = 64,
                            double lo = 1e-6, double hi = 1e6, const SweepOptions& opt = {});

struct HormanderOptions {
    int j_min = -10;
    int j_max = 10;
    int radial_nodes = 24;
    int angular_nodes = 64;
    int refinements = 3;   // angular doublings used for the refinement check
    double fd_step = 1e-4; // relative to |xi|
    double refine_tol = 1e-2;
};

struct HormanderResult {
    std::vector<std::vector<int>> gammas;
    std::vector<double> values;         // sqrt of sup over R, per gamma
    std::vector<double> refined_values; // same at the finest angular level
    double total = 0.0;
    bool stabilized = true;
    bool refinement_stable = true;
    bool divergent = false;
};

/// Annular L^2 condition on R^d, d in {1,2,3}; order defaults to floor(d/2)+1.
HormanderResult hormander_norm(const Symbol& m, int order, std::size_t d, const HormanderOptions& opt = {});

/// Rotated symbol lambda -> m(e^{i eps_r phi_r} lambda_r).
Symbol boundary_symbol(const Symbol& m, const std::vector<int>& eps, const std::vector<double>& phi);

double critical_angle(double p);

struct DiscreteMarcinkiewiczResult {
    double sup_mixed = 0.0;
    double sup_first = 0.0;
    double sup_second = 0.0;
    std::vector<double> running_mixed, running_first, running_second;  // per k
    bool stabilized_mixed = false;
    bool stabilized_first = false;
    bool stabilized_second = false;
};

/// Dyadic difference sums of a double sequence over blocks 2^{k-1} <= |j| < 2^k, k = 1..k_max.
DiscreteMarcinkiewiczResult discrete_marcinkiewicz_check(const std::function<cplx(long, long)>& m, int k_max);

// Modulated symbols

/// lambda^N t^N exp(-<t,lambda>/2) m(lambda)
struct ModulatedSymbol {
    Symbol base;
    std::vector<int> N;
    std::vector<double> t;
    void validate() const;
    cplx operator()(std::span<const double> lambda) const;
};

struct ModulatedOptions {
    std::size_t nodes_per_axis = 0;  // 0: 1024 for d = 1, 384 otherwise
    double cutoff = 1e-17;
};

/// Mellin transform of m_{N,t} on a product u grid.
CVec modulated_mellin_grid(const ModulatedSymbol& ms, const std::vector<UAxis>& axes, const ModulatedOptions& opt = {});
cplx modulated_mellin(const ModulatedSymbol& ms, std::span<const double> u, const ModulatedOptions& opt = {});

std::vector<double> log_sweep(double lo, double hi, std::size_t count);
/// Product of per-axis sweeps.
std::vector<std::vector<double>> product_sweep(const std::vector<std::vector<double>>& per_axis);

struct SweepSup {
    double sup = 0.0;
    std::vector<double> per_t;
};

SweepSup modulated_mellin_sup(const Symbol& m, const std::vector<int>& N, std::span<const double> u,
                              const std::vector<std::vector<double>>& t_sweep, const ModulatedOptions& opt = {});

struct MedaOptions {
    double u_max = 40.0;
    std::size_t u_count = 401;
    std::vector<std::vector<double>> t_sweep;  // empty: 10^-3..10^3, 13 points per axis
    ModulatedOptions quad{};
};

struct MedaResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    bool divergent = false;
    MellinGrid sup_profile;  // sup_t |M(m_{N,t})(u)|
};

MedaResult meda_functional(const Symbol& m, const std::vector<int>& N, const std::function<double(std::span<const double>)>& weight,
                           const MedaOptions& opt = {});

}  // namespace specmult
