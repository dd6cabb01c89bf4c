#include <cmath>
#include <limits>
#include <map>

#include "specmult/gaussprod.hpp"
#include "specmult/quadrature.hpp"

namespace specmult {

void LaplaceSymbolKappa::validate() const
{
    if (!kappa) throw ParameterError("kappa is not set");
    if (!(lo >= 0.0) || !(hi > lo)) throw ParameterError("kappa support must satisfy 0 <= lo < hi");
    if (!(sup_norm > 0.0) || !std::isfinite(sup_norm)) throw ParameterError("kappa sup_norm must be positive and finite");
    // probe a log-spaced sample of the support
    const double a = lo > 0.0 ? lo : 1e-6;
    const double b = std::isfinite(hi) ? hi : 1e6;
    for (int i = 0; i <= 200; ++i) {
        const double t = a * std::pow(b / a, i / 200.0);
        const cplx v = kappa(t);
        if (!std::isfinite(std::abs(v)) || std::abs(v) > sup_norm * (1.0 + 1e-12))
            throw DomainError("kappa exceeds its sup_norm at t = " + std::to_string(t));
    }
}

LaplaceSymbolKappa truncate_kappa(const LaplaceSymbolKappa& k, double eps)
{
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("truncation eps must lie in (0, 1)");
    LaplaceSymbolKappa t = k;
    t.lo = std::max(k.lo, eps);
    t.hi = std::min(k.hi, 1.0 / eps);
    if (!(t.hi > t.lo)) throw ParameterError("truncated support is empty");
    return t;
}

cplx laplace_type_symbol(const LaplaceSymbolKappa& k, double lambda, double a)
{
    if (!(lambda >= 0.0) || !(a >= 0.0)) throw DomainError("laplace_type_symbol needs lambda >= 0 and a >= 0");
    k.validate();
    if (lambda == 0.0) return 0.0;
    const double rate = lambda + a;
    auto f = [&](double t) { return std::exp(-rate * t) * k.kappa(t); };
    if (!std::isfinite(k.hi)) return lambda * integrate_complex(f, k.lo, k.hi, 1e-14);
    // split at a few decay lengths so the adaptive rule sees the bulk
    cplx acc = 0.0;
    double left = k.lo;
    for (double cut : {1.0 / rate, 4.0 / rate, 16.0 / rate, 64.0 / rate}) {
        if (cut > left && cut < k.hi) {
            acc += integrate_complex(f, left, cut, 1e-14);
            left = cut;
        }
    }
    acc += integrate_complex(f, left, k.hi, 1e-14);
    return lambda * acc;
}

CVec ou_multiplier(const SpectralSystem& ou, const std::function<cplx(int)>& m, const CVec& f)
{
    const RMat lam = ou.joint_eigenvalues();
    CVec diag(lam.rows());
    for (Eigen::Index k = 0; k < lam.rows(); ++k) diag[k] = m(static_cast<int>(std::lround(lam.row(k).sum())));
    return apply_diagonal(ou, diag, f);
}

CVec joint_laplace_diagonal(const LaplaceSymbolKappa& k, const SpectralSystem& ou, const SpectralSystem& a_sys)
{
    k.validate();
    const RMat lo = ou.joint_eigenvalues();
    const RMat la = a_sys.joint_eigenvalues();
    std::vector<double> lam(static_cast<std::size_t>(lo.rows())), av(static_cast<std::size_t>(la.rows()));
    for (Eigen::Index i = 0; i < lo.rows(); ++i) lam[static_cast<std::size_t>(i)] = lo.row(i).sum();
    for (Eigen::Index i = 0; i < la.rows(); ++i) {
        av[static_cast<std::size_t>(i)] = la.row(i).sum();
        if (!(av[static_cast<std::size_t>(i)] > 0.0))
            throw ParameterError("A has a zero eigenvalue; (ATL) requires chi_{a=0}(L, A) = 0, filter the A system");
    }
    std::map<std::pair<double, double>, cplx> cache;
    CVec diag(static_cast<Eigen::Index>(lam.size() * av.size()));
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (std::size_t j = 0; j < av.size(); ++j) {
            const auto key = std::make_pair(lam[i], av[j]);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, laplace_type_symbol(k, lam[i], av[j])).first;
            diag[static_cast<Eigen::Index>(i * av.size() + j)] = it->second;
        }
    return diag;
}

CVec joint_laplace_multiplier(const LaplaceSymbolKappa& k, const SpectralSystem& ou, const SpectralSystem& a_sys,
                              const CVec& f)
{
    const SpectralSystem joint = tensor_system({ou, a_sys});
    return apply_diagonal(joint, joint_laplace_diagonal(k, ou, a_sys), f);
}

}  // namespace specmult
