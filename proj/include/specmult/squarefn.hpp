#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "specmult/core.hpp"
#include "specmult/handun.hpp"
#include "specmult/mellin.hpp"

namespace specmult {

/// Log-spaced t nodes per axis with dt/t weights (the log step).
struct TimeGrid {
    std::vector<RVec> nodes;
    std::vector<RVec> weights;
    std::size_t d() const { return nodes.size(); }
    void validate() const;
};

TimeGrid make_time_grid(const std::vector<double>& t_min, const std::vector<double>& t_max, std::size_t count = 256);
/// [1e-4 / lambda_max, 1e2 / lambda_min] per axis.
TimeGrid make_time_grid(const SpectralSystem& sys, std::size_t count = 256);

/// prod Gamma(2 N_r) / 4^{N_r}
double g_constant(const std::vector<int>& N);

/// Pointwise (sum_t |t^N L^N e^{-<t,L>} f|^2 dt/t)^{1/2}.
RVec g_function(const SpectralSystem& sys, const std::vector<int>& N, const CVec& f, const TimeGrid& tgrid);
/// (2 pi)^{-d/2} (int |Gamma(N - iu) L^{iu} f|^2 du)^{1/2}, trapezoid on the u axes.
RVec g_function_mellin(const SpectralSystem& sys, const std::vector<int>& N, const CVec& f,
                       const std::vector<UAxis>& u);

using DyadicBump = std::function<double(double)>;

struct LPBlocks {
    std::vector<std::vector<int>> index;  // j per block
    std::vector<CVec> blocks;
    double defect = 0.0;
};

/// max over grid frequencies of |prod_r sum_{j in range} psi(2^{-j} xi_r)^2 - 1|
double lp_partition_defect(const DunklTransform& D, int j_min, int j_max, const DyadicBump& psi = lp_psi);
/// Smallest j range covering every grid frequency.
std::pair<int, int> lp_default_range(const DunklTransform& D);
/// S_j f = D^{-1}(prod psi(2^{-j_r} xi_r) D f) for j in [j_min, j_max]^d.
LPBlocks littlewood_paley_blocks(const DunklTransform& D, const CVec& f, int j_min, int j_max,
                                 const DyadicBump& psi = lp_psi, double tol = 1e-8);
/// Same blocks from transform values D f given on the grid.
LPBlocks littlewood_paley_blocks_from_transform(const DunklTransform& D, const CVec& Df, int j_min, int j_max,
                                                const DyadicBump& psi = lp_psi, double tol = 1e-8);
/// (sum_j |S_j f|^2)^{1/2}
RVec lp_square_function(const LPBlocks& b);

}  // namespace specmult
