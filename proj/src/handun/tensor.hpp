#pragma once

#include <vector>

#include "specmult/core.hpp"

namespace specmult::detail {

inline std::size_t shape_size(const std::vector<std::size_t>& shape)
{
    std::size_t n = 1;
    for (auto s : shape) n *= s;
    return n;
}

/// Row-major multi-index of flat k.
inline void unflatten(std::size_t k, const std::vector<std::size_t>& shape, std::vector<std::size_t>& idx)
{
    idx.resize(shape.size());
    for (std::size_t r = shape.size(); r-- > 0;) {
        idx[r] = k % shape[r];
        k /= shape[r];
    }
}

/// Applies mats[r] along axis r for every axis.
template <class Mat>
CVec apply_all_axes(const std::vector<Mat>& mats, CVec x, std::vector<std::size_t> shape)
{
    for (std::size_t r = 0; r < mats.size(); ++r) {
        x = apply_along_axis(mats[r].template cast<cplx>(), x, shape, r);
        shape[r] = static_cast<std::size_t>(mats[r].rows());
    }
    return x;
}

}  // namespace specmult::detail
