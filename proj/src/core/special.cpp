#include "specmult/special.hpp"

#include <cmath>
#include <string>

#include "specmult/errors.hpp"
#include "specmult/types.hpp"

namespace specmult {

namespace {

double bessel_e_series(double nu, double z)
{
    const double q = -0.25 * z * z;
    double term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

double bessel_j(double nu, double z)
{
    if (!(nu > -1.0)) throw ParameterError("bessel_j: order must exceed -1");
    if (z < 0.0 || !std::isfinite(z)) throw DomainError("bessel_j: argument must be finite and nonnegative, got " + std::to_string(z));
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (z <= 2.0) return bessel_e_series(nu, z) * std::pow(z, nu);
    try {
        if (nu >= 0.0) return std::cyl_bessel_j(nu, z);
        const double m = -nu;
        return std::cos(m * pi) * std::cyl_bessel_j(m, z) - std::sin(m * pi) * std::cyl_neumann(m, z);
    } catch (const std::exception& e) {
        throw DomainError("bessel_j: evaluation failed at nu=" + std::to_string(nu) + ", z=" + std::to_string(z) + ": " + e.what());
    }
}

double bessel_e(double nu, double z)
{
    if (!(nu > -1.0)) throw ParameterError("bessel_e: order must exceed -1");
    z = std::abs(z);
    if (z <= 2.0) return bessel_e_series(nu, z);
    const double v = bessel_j(nu, z) * std::pow(z, -nu);
    if (!std::isfinite(v)) throw DomainError("bessel_e: overflow at z=" + std::to_string(z));
    return v;
}

double gamma_abs_sq(int n, double u)
{
    if (n < 1) throw ParameterError("gamma_abs_sq: n must be >= 1");
    const double au = std::abs(u);
    double v = au < 1e-8 ? 1.0 - (pi * pi * u * u) / 6.0 : pi * au / std::sinh(pi * au);
    for (int k = 1; k < n; ++k) v *= k * static_cast<double>(k) + u * u;
    return v;
}

}  // namespace specmult
