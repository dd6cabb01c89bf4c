#include "specmult/fft.hpp"

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "specmult/errors.hpp"

namespace specmult {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex mu;
    return mu;
}

struct Plan {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t n = 0;

    Plan(const std::vector<std::size_t>& shape, int sign)
    {
        n = 1;
        std::vector<int> dims;
        for (auto s : shape) {
            n *= s;
            dims.push_back(static_cast<int>(s));
        }
        std::lock_guard<std::mutex> lk(planner_mutex());
        buf = fftw_alloc_complex(n);
        plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                             sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Plan()
    {
        std::lock_guard<std::mutex> lk(planner_mutex());
        if (plan) fftw_destroy_plan(plan);
        if (buf) fftw_free(buf);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

}  // namespace

CVec fft_nd(const CVec& data, const std::vector<std::size_t>& shape, int sign)
{
    std::size_t n = 1;
    for (auto s : shape) {
        if (s == 0) throw ShapeError("fft_nd: zero-length axis");
        n *= s;
    }
    if (static_cast<std::size_t>(data.size()) != n) throw ShapeError("fft_nd: data length does not match shape");

    thread_local std::map<std::pair<std::vector<std::size_t>, int>, std::unique_ptr<Plan>> cache;
    auto key = std::make_pair(shape, sign < 0 ? -1 : 1);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Plan>(shape, key.second)).first;
    Plan& p = *it->second;

    static_assert(sizeof(cplx) == sizeof(fftw_complex));
    std::memcpy(p.buf, data.data(), n * sizeof(cplx));
    fftw_execute(p.plan);
    CVec out(static_cast<Eigen::Index>(n));
    std::memcpy(out.data(), p.buf, n * sizeof(cplx));
    return out;
}

}  // namespace specmult
