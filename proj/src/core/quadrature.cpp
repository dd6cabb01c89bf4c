#include "specmult/quadrature.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "specmult/errors.hpp"

namespace specmult {

Recurrence hermite_recurrence(int n)
{
    Recurrence r;
    r.a = RVec::Zero(n + 1);
    r.b = RVec::Zero(n + 1);
    for (int k = 1; k <= n; ++k) r.b[k] = std::sqrt(k / 2.0);
    r.mass = std::sqrt(pi);
    return r;
}

Recurrence laguerre_recurrence(int n, double alpha)
{
    if (!(alpha > -1.0)) throw ParameterError("Laguerre parameter must exceed -1");
    Recurrence r;
    r.a.resize(n + 1);
    r.b = RVec::Zero(n + 1);
    for (int k = 0; k <= n; ++k) r.a[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k <= n; ++k) r.b[k] = std::sqrt(k * (k + alpha));
    r.mass = std::tgamma(alpha + 1.0);
    return r;
}

Recurrence jacobi_recurrence(int n, double a, double b)
{
    if (!(a > -1.0) || !(b > -1.0)) throw ParameterError("Jacobi parameters must exceed -1");
    Recurrence r;
    r.a.resize(n + 1);
    r.b = RVec::Zero(n + 1);
    const double ab = a + b;
    for (int k = 0; k <= n; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 0)
            r.a[k] = (b - a) / (ab + 2.0);
        else
            r.a[k] = (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k <= n; ++k) {
        const double s = 2.0 * k + ab;
        double beta;
        if (k == 1)
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        r.b[k] = std::sqrt(beta);
    }
    r.mass = std::pow(2.0, ab + 1.0) * boost::math::beta(a + 1.0, b + 1.0);
    return r;
}

namespace {

// Orthonormal values p_0..p_{n} at x (long double to keep Christoffel sums in range).
void orthonormal_column(const Recurrence& rec, int n, long double x, long double* p, long double* dp)
{
    p[0] = 1.0L;
    if (dp) dp[0] = 0.0L;
    if (n == 0) return;
    p[1] = (x - rec.a[0]) * p[0] / rec.b[1];
    if (dp) dp[1] = p[0] / rec.b[1];
    for (int k = 1; k < n; ++k) {
        p[k + 1] = ((x - rec.a[k]) * p[k] - rec.b[k] * p[k - 1]) / rec.b[k + 1];
        if (dp) dp[k + 1] = ((x - rec.a[k]) * dp[k] + p[k] - rec.b[k] * dp[k - 1]) / rec.b[k + 1];
    }
}

}  // namespace

GaussRule gauss_rule(const Recurrence& rec, int n)
{
    if (n < 1) throw ParameterError("gauss_rule: need at least one node");
    if (rec.a.size() < n + 1 || rec.b.size() < n + 1) throw ParameterError("gauss_rule: recurrence too short");
    RVec diag = rec.a.head(n);
    RVec off = rec.b.segment(1, n - 1 > 0 ? n - 1 : 0);
    Eigen::SelfAdjointEigenSolver<RMat> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw DomainError("gauss_rule: tridiagonal eigensolver failed");

    GaussRule g;
    g.nodes = es.eigenvalues();
    g.weights.resize(n);
    std::vector<long double> p(n + 1), dp(n + 1);
    for (int i = 0; i < n; ++i) {
        long double x = g.nodes[i];
        for (int it = 0; it < 6; ++it) {
            orthonormal_column(rec, n, x, p.data(), dp.data());
            if (dp[n] == 0.0L) break;
            const long double step = p[n] / dp[n];
            x -= step;
            if (std::fabs(static_cast<double>(step)) <= 1e-17 * std::max(1.0, std::fabs(static_cast<double>(x)))) break;
        }
        orthonormal_column(rec, n - 1, x, p.data(), nullptr);
        long double s = 0.0L;
        for (int k = 0; k < n; ++k) s += p[k] * p[k];
        g.nodes[i] = static_cast<double>(x);
        g.weights[i] = static_cast<double>(static_cast<long double>(rec.mass) / s);
    }
    return g;
}

RMat orthonormal_values(const Recurrence& rec, int n_poly, const RVec& x)
{
    if (rec.a.size() < n_poly || rec.b.size() < n_poly) throw ParameterError("orthonormal_values: recurrence too short");
    RMat v(n_poly, x.size());
    std::vector<long double> p(n_poly + 1);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        orthonormal_column(rec, n_poly - 1, x[j], p.data(), nullptr);
        for (int k = 0; k < n_poly; ++k) v(k, j) = static_cast<double>(p[k]);
    }
    return v;
}

GaussRule gauss_legendre(int n, double lo, double hi)
{
    GaussRule g = gauss_rule(jacobi_recurrence(n, 0.0, 0.0), n);
    const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
    g.nodes = (g.nodes.array() * h + c).matrix();
    g.weights *= h;
    return g;
}

GaussRule gauss_hermite(int n) { return gauss_rule(hermite_recurrence(n), n); }

GaussRule gauss_jacobi(int n, double a, double b) { return gauss_rule(jacobi_recurrence(n, a, b), n); }

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol, double* error)
{
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, tol, &err);
    if (error) *error = err;
    if (!std::isfinite(v)) throw DomainError("integrate: non-finite result");
    return v;
}

cplx integrate_complex(const std::function<cplx(double)>& f, double lo, double hi, double tol)
{
    const double re = integrate([&](double t) { return f(t).real(); }, lo, hi, tol);
    const double im = integrate([&](double t) { return f(t).imag(); }, lo, hi, tol);
    return {re, im};
}

}  // namespace specmult
