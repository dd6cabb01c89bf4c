#pragma once

#include <vector>

#include "specmult/types.hpp"

namespace specmult {

/// Unnormalized multidimensional DFT of a row-major tensor.
/// sign = -1: sum_x f(x) e^{-2 pi i k.x/K};  sign = +1: the conjugate kernel.
CVec fft_nd(const CVec& data, const std::vector<std::size_t>& shape, int sign);

}  // namespace specmult
