#pragma once

#include <functional>

#include "specmult/types.hpp"

namespace specmult {

/// Three-term recurrence of monic orthogonal polynomials:
/// p_{k+1}(x) = (x - a_k) p_k(x) - b_k^2 p_{k-1}(x).  b[0] is unused.
struct Recurrence {
    RVec a;
    RVec b;
    double mass = 1.0;  // total mass of the weight
};

struct GaussRule {
    RVec nodes;
    RVec weights;  // sum to the mass of the weight
};

Recurrence hermite_recurrence(int n);                      // e^{-x^2} on R
Recurrence laguerre_recurrence(int n, double alpha);       // x^alpha e^{-x} on (0, inf)
Recurrence jacobi_recurrence(int n, double a, double b);   // (1-x)^a (1+x)^b on (-1, 1)

/// Golub-Welsch nodes, Newton-polished, with Christoffel weights.
GaussRule gauss_rule(const Recurrence& rec, int n);

/// Polynomials orthonormal with respect to the normalized weight (weight / mass);
/// returns n_poly x x.size().
RMat orthonormal_values(const Recurrence& rec, int n_poly, const RVec& x);

GaussRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);
GaussRule gauss_hermite(int n);
GaussRule gauss_jacobi(int n, double a, double b);

/// Adaptive Gauss-Kronrod on [lo, hi]; hi may be +infinity.
double integrate(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13,
                 double* error = nullptr);
cplx integrate_complex(const std::function<cplx(double)>& f, double lo, double hi, double tol = 1e-13);

}  // namespace specmult
