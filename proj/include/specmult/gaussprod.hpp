#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "specmult/core.hpp"

namespace specmult {

/// Bounded kappa on [lo, hi]; hi may be +inf, lo may be 0 (untruncated reference).
struct LaplaceSymbolKappa {
    std::function<cplx(double)> kappa;
    double lo = 1e-2;
    double hi = 1e2;
    double sup_norm = 1.0;
    void validate() const;
};

/// kappa * chi_[eps, 1/eps]
LaplaceSymbolKappa truncate_kappa(const LaplaceSymbolKappa& k, double eps);

/// m(lambda, a) = lambda int e^{-lambda t} e^{-a t} kappa(t) dt
cplx laplace_type_symbol(const LaplaceSymbolKappa& k, double lambda, double a);

/// sum_j m(j) P_j f, j the total Hermite degree.
CVec ou_multiplier(const SpectralSystem& ou, const std::function<cplx(int)>& m, const CVec& f);

/// m_kappa(L, A) on tensor_system({ou, a_sys}); lambda = sum of the ou eigenvalues, a = sum of the a_sys ones.
CVec joint_laplace_diagonal(const LaplaceSymbolKappa& k, const SpectralSystem& ou, const SpectralSystem& a_sys);
CVec joint_laplace_multiplier(const LaplaceSymbolKappa& k, const SpectralSystem& ou, const SpectralSystem& a_sys,
                              const CVec& f);

/// |x1 - y1| <= s / (1 + |x1| + |y1|)
bool local_region(double s, std::span<const double> x1, std::span<const double> y1);
bool local_region(double s, double x1, double y1);

/// Kernel on (X x Y) x (X x Y), row-major with x1 outer.  x1 coordinates come from gauss (dim = d).
std::pair<CMat, CMat> kernel_split(const CMat& K, const WeightedGrid& gauss, std::size_t n2, double s = 2.0);

/// int_eps^{1-eps} d_r M_r(x1, y1) r^A(x2, y2) kappa(r) dr by Gauss-Legendre in r.
/// r^A(x2, y2) is the kernel against mu from a_sys.
CMat mehler_laplace_kernel(const std::function<double(double)>& kappa_r, double eps, const WeightedGrid& gauss,
                           const SpectralSystem& a_sys, std::size_t r_nodes = 64);

/// Points 0..N-1 with masses; metric |i - j| (cyclic: min(|i - j|, N - |i - j|)).
struct HomogeneousSpace {
    RVec mass;
    bool cyclic = true;
    std::size_t size() const { return static_cast<std::size_t>(mass.size()); }
    std::size_t dist(std::size_t i, std::size_t j) const;
    /// mass of the closed ball B(x, r)
    double ball_mass(std::size_t x, double r) const;
    std::vector<std::size_t> ball(std::size_t x, double r) const;
};

HomogeneousSpace cyclic_space(std::size_t K);

struct DyadicCube {
    std::size_t generation = 0;
    std::size_t index = 0;
    std::size_t begin = 0;  // points [begin, end)
    std::size_t end = 0;
    std::size_t parent = 0;  // index in generation - 1
    double mass = 0.0;
    std::size_t center = 0;
    double inner_radius = 0.0;  // B(center, inner_radius) inside the cube
};

/// Generation 0 is coarsest; the last generation is single points.
struct DyadicSystem {
    HomogeneousSpace space;
    std::vector<std::vector<DyadicCube>> generations;
    /// max mu(parent) / mu(Q) over non-top cubes
    double doubling_constant() const;
    /// max mu(Q) / mu(inner ball)
    double ball_constant() const;
    /// generation-l cube containing point x
    std::size_t cube_of(std::size_t l, std::size_t x) const;
    void validate() const;
};

/// Halving intervals: G generations, the finest of single points, top cubes of 2^{G-1} points.
DyadicSystem binary_dyadic_system(const HomogeneousSpace& space, std::size_t generations);

/// sup_l E_l |f| in the second variable; f is n1 x n2 row-major.
RVec dyadic_maximal(const RVec& f, std::size_t n1, const DyadicSystem& dy);

struct CZPart {
    std::size_t generation = 0;
    std::size_t index = 0;
    std::vector<bool> F;  // x1 mask
    RVec b;               // full n1 x n2
};

struct CZResult {
    double threshold = 0.0;
    double C_mu = 0.0;
    RVec g;
    std::vector<CZPart> parts;
};

/// Largest top-cube average over slices; cz_decompose needs s >= this.
double cz_min_threshold(const RVec& f, std::size_t n1, const DyadicSystem& dy);
CZResult cz_decompose(const RVec& f, const RVec& nu, double s, const DyadicSystem& dy);

struct CZProperties {
    bool i = false, ii = false, iii = false, iv = false, v = false;
    double l1_ratio = 0.0;  // (||g|| + sum ||b_j||) / ||f||
    double g_max_over_s = 0.0;
    bool all() const { return i && ii && iii && iv && v; }
};
CZProperties cz_properties(const RVec& f, const RVec& nu, const CZResult& cz, const DyadicSystem& dy);
std::string cz_to_json(const CZResult& cz, const RVec& f, const RVec& nu, const DyadicSystem& dy);

struct Ball {
    std::size_t center = 0;
    double radius = 0.0;
};

/// supp b in B, |b| <= 1/mu(B), int b dmu = 0 (to 1e-12)
bool h1_atom_check(const RVec& b, const Ball& ball, const HomogeneousSpace& space);
/// int over x1 of sum_k 2^{k+1} mu({D|f(x1,.)| > 2^k}) for k from the top-average level, levels terms.
double h1_atomic_upper(const RVec& f, const RVec& nu, const DyadicSystem& dy, int levels = 40);

/// Heat kernel of I - P on Z_K against counting measure, P the nearest-neighbour average.
RMat torus_heat_kernel(std::size_t K, double t);
/// || sup_t |e^{-tA} g| ||_1 over the given times, A = I - P on Z_K.
double heat_maximal_l1(const RVec& g, const std::vector<double>& times);

struct GaussianBoundsResult {
    bool nonnegative = true;
    std::string first_negative;
    double C = 0.0;
    double delta = 0.0;
    double C_delta = 0.0;
    std::size_t violations = 0;
    bool pass = false;
};

/// kernels[i] is e^{-t_i A}(x2, y2) on the space.  Fits C for the given c, then the largest delta in
/// {1, 0.9, ..., 0.1} whose Lipschitz constant stays <= C_limit.
GaussianBoundsResult gaussian_bounds_check(const std::vector<RMat>& kernels, const std::vector<double>& times,
                                           const HomogeneousSpace& space, double c, double C_limit = 1e3);

}  // namespace specmult
