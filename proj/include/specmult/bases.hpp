#pragma once

#include <span>
#include <variant>
#include <vector>

#include "specmult/core.hpp"
#include "specmult/quadrature.hpp"

namespace specmult {

/// Hermite polynomials orthonormal in L^2(gamma), gamma(x) = pi^{-1/2} e^{-x^2}.
struct HermiteBasis {
    int n_max = 0;
    GaussRule quad;  // probability weights
    Recurrence rec;

    static HermiteBasis build(int n_max);
    RMat values(const RVec& x) const;  // n_max x x.size()
    double eigenvalue(int k) const { return k; }
    AxisBasis axis() const;
};

/// Laguerre polynomials orthonormal for x^alpha e^{-x} / Gamma(alpha+1) dx.
struct LaguerreBasis {
    double alpha = 0.0;
    int n_max = 0;
    GaussRule quad;
    Recurrence rec;

    static LaguerreBasis build(int n_max, double alpha);
    RMat values(const RVec& x) const;
    double eigenvalue(int k) const { return k; }
    AxisBasis axis() const;
};

/// Jacobi trigonometric polynomials on (0, pi), orthonormal for
/// (sin theta/2)^{2 alpha+1} (cos theta/2)^{2 beta+1} d theta.
struct JacobiBasis {
    double alpha = 0.0;
    double beta = 0.0;
    int n_max = 0;
    double mass = 1.0;
    GaussRule quad;  // nodes in theta, weights of the measure above
    Recurrence rec;

    static JacobiBasis build(int n_max, double alpha, double beta);
    RMat values(const RVec& theta) const;
    double eigenvalue(int k) const;
    AxisBasis axis() const;
};

using Basis = std::variant<HermiteBasis, LaguerreBasis, JacobiBasis>;

SpectralSystem build_system(const std::vector<Basis>& bases);

/// pi^{-d/2} (1-r^2)^{-d/2} exp(-|rx - y|^2 / (1-r^2)).
double mehler_kernel(double r, std::span<const double> x, std::span<const double> y);
double mehler_kernel(double r, double x, double y);

/// Closed-form d/dr of mehler_kernel.
double mehler_derivative(double r, std::span<const double> x, std::span<const double> y);
double mehler_derivative(double r, double x, double y);

/// r^L on the Hermite grid, built by integrating the Mehler kernel against
/// the synthesized input with Lebesgue weights in y.
OperatorRep mehler_heat_operator(const HermiteBasis& basis, double r);

CVec jacobi_imaginary_power(const JacobiBasis& basis, double v, const CVec& f);

}  // namespace specmult
