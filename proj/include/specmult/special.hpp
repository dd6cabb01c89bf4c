#pragma once

namespace specmult {

/// J_nu(z) for z >= 0 and nu > -1.
double bessel_j(double nu, double z);

/// z^{-nu} J_nu(z), continuous at z = 0 with value 1 / (2^nu Gamma(nu + 1)).
double bessel_e(double nu, double z);

/// |Gamma(n - i u)|^2 for integer n >= 1.
double gamma_abs_sq(int n, double u);

}  // namespace specmult
