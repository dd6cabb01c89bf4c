#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specmult/core.hpp"

namespace specmult {

/// Z_K^d with a symmetric probability measure mu on Z_K (mu[g], g = 0..K-1).
struct CyclicGroupSpec {
    std::size_t K = 8;
    std::size_t d = 1;
    std::vector<double> mu;

    std::size_t size() const;
    std::vector<std::size_t> shape() const { return std::vector<std::size_t>(d, K); }
    /// gcd of the support with K is 1
    bool generates() const;
    void validate() const;
};

/// mu = (delta_1 + delta_{-1}) / 2
CyclicGroupSpec cyclic_system(std::size_t K, std::size_t d);

/// sum_g mu(g) e^{2 pi i g k / K}, real for symmetric mu.
RVec markov_symbol(const CyclicGroupSpec& spec);
/// P_r f(x) = sum_y mu(y) f(x + y e_r)
CVec markov_operator(const CyclicGroupSpec& spec, const CVec& f, std::size_t axis = 0);
/// l^p norm of P for p in {1, 2, inf}.
double markov_norm(const CyclicGroupSpec& spec, double p);

CVec project_mean_zero(const CyclicGroupSpec& spec, const CVec& f);
CVec project_mean_zero_axis(const CyclicGroupSpec& spec, const CVec& f, std::size_t axis);

/// Symbol of (d_r)(L_1 + ... + L_d)^{-1/2} Pi_0 on the DFT grid, row-major.
/// d_r f(x) = f(x + e_r) - f(x), L_s = I - P_s.
CVec discrete_riesz_symbol(const CyclicGroupSpec& spec, std::size_t r);
CVec discrete_riesz(const CyclicGroupSpec& spec, std::size_t r, const CVec& f);
/// d_r (sum_s d_s d_s^*)^{-1/2} Pi_0, independent of mu.
CVec discrete_riesz_normalized(const CyclicGroupSpec& spec, std::size_t r, const CVec& f);
/// (d L^{-1/2} pi_0) along axis r only.
CVec riesz_1d_along(const CyclicGroupSpec& spec, std::size_t r, const CVec& f);
/// L_r^sigma (L_1 + ... + L_d)^{-sigma} Pi_{0,r}
CVec discrete_riesz_factor(const CyclicGroupSpec& spec, std::size_t r, const CVec& f, double sigma = 0.5);

double discrete_riesz_l2_norm(const CyclicGroupSpec& spec, std::size_t r);
/// sum_x |R_r delta_0(x)|
double discrete_riesz_l1_norm(const CyclicGroupSpec& spec, std::size_t r);

LinearMap discrete_riesz_map(const CyclicGroupSpec& spec, std::size_t r);
/// f -> (R_1 f, ..., R_d f) as d output blocks.
LinearMap discrete_riesz_vector_map(const CyclicGroupSpec& spec);
LinearMap discrete_riesz_factor_map(const CyclicGroupSpec& spec, std::size_t r, double sigma = 0.5);

/// One-axis system of I - P on Z_K, counting measure, DFT eigenbasis.
SpectralSystem cyclic_laplacian_system(const CyclicGroupSpec& spec);

/// lambda_r^sigma / (sum_s lambda_s)^sigma.  Modes with zero total eigenvalue
/// are sent to 0 when project_zero is set, otherwise rejected.
CVec riesz_factor_diagonal(const SpectralSystem& sys, std::size_t r, double sigma, bool project_zero = false);
OperatorRep riesz_factor(const SpectralSystem& sys, std::size_t r, double sigma, bool project_zero = false);

/// Fourier multiplier k_r / |k| on a power-of-two lattice of T^d.
CVec classical_riesz_torus(const std::vector<std::size_t>& shape, std::size_t r, const CVec& f);
/// sgn k_r
CVec torus_sign_factor(const std::vector<std::size_t>& shape, std::size_t r, const CVec& f);
/// |k_r| / |k|
CVec torus_ratio_factor(const std::vector<std::size_t>& shape, std::size_t r, const CVec& f);

struct RieszRow {
    std::size_t K = 0;
    std::size_t d = 0;
    double p = 2.0;
    std::size_t r = 0;
    std::string estimator;
    double value = 0.0;
    std::uint64_t seed = 0;
};

/// Estimators: "scalar" (R_1), "vector" ((sum |R_r f|^2)^{1/2}), "factor" (L_1^{1/2}(sum L)^{-1/2}),
/// plus "envelope_d" and "envelope_sqrt_d" scaled from the d = 1 vector value.
/// p = 2 and p = 1 use exact formulas.
std::vector<RieszRow> vector_riesz_norms(std::size_t K, const std::vector<double>& p_list,
                                         const std::vector<std::size_t>& d_list, std::uint64_t seed,
                                         const std::vector<std::string>& estimators = {"scalar", "vector"},
                                         const PowerOptions& opt = {});
std::string riesz_rows_csv(const std::vector<RieszRow>& rows);

}  // namespace specmult
