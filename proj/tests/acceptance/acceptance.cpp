// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "specmult/bases.hpp"
#include "specmult/experiments.hpp"
#include "specmult/gaussprod.hpp"
#include "specmult/handun.hpp"
#include "specmult/mellin.hpp"
#include "specmult/riesz.hpp"
#include "specmult/squarefn.hpp"

using namespace specmult;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int n, const char* what, double budget_s, const std::function<Outcome()>& body)
{
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool ok = o.pass && secs < budget_s;
    if (!ok) ++failures;
    std::printf("criterion %2d: %s  %s  [%s; %.2f s of %.0f s]\n", n, ok ? "PASS" : "FAIL", what, o.detail.c_str(), secs, budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a)
{
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

double gk_inf(const std::function<double(double)>& f)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-14);
}

double l2sq(const CVec& f, const RVec& w) { return (w.array() * f.cwiseAbs2().array()).sum(); }
double l2sq(const RVec& f, const RVec& w) { return (w.array() * f.array().square()).sum(); }

// least squares slope, R^2 and max residual
struct Fit {
    double slope, r2, maxres;
};
Fit fit(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double sse = 0, sst = 0, mr = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - icpt - slope * x[i];
        sse += r * r;
        sst += (y[i] - sy / n) * (y[i] - sy / n);
        mr = std::max(mr, std::abs(r));
    }
    return {slope, sst > 0 ? 1 - sse / sst : 1.0, mr};
}

Outcome c1_mellin()
{
    const auto r = mellin_selftest(2024, 20, {1, 2});
    const bool ok = r.count == 20 && r.plancherel_rel_err <= 1e-6 && r.inversion_rel_err <= 1e-6;
    return {ok, "plancherel " + fmt("%.2e", r.plancherel_rel_err) + ", inversion " + fmt("%.2e", r.inversion_rel_err)};
}

Outcome c2_gN()
{
    std::mt19937_64 rng(31);
    std::normal_distribution<double> n01;
    auto random_in = [&](const SpectralSystem& s) {
        CVec c(static_cast<Eigen::Index>(s.spectrum_size()));
        for (auto& v : c) v = cplx(n01(rng), n01(rng));
        return s.synthesize(c);
    };
    auto oracle = [](const std::vector<int>& N) {
        double c = 1;
        for (int n : N) c *= gk_inf([n](double t) { return std::pow(t, 2 * n - 1) * std::exp(-2 * t); });
        return c;
    };
    double worst = 0;
    const auto s1 = build_system({LaguerreBasis::build(12, 0.5)}).atl_filtered();
    const auto t1 = make_time_grid(s1);
    for (int n : {1, 2})
        for (int k = 0; k < 10; ++k) {
            const CVec f = random_in(s1);
            const RVec w = s1.grid().weights;
            worst = std::max(worst, std::abs(l2sq(g_function(s1, {n}, f, t1), w) / l2sq(f, w) / oracle({n}) - 1));
        }
    const auto s2 = build_system({HermiteBasis::build(8), LaguerreBasis::build(7, 0.0)}).atl_filtered();
    const auto t2 = make_time_grid(s2, 96);
    for (std::vector<int> N : {std::vector<int>{1, 1}, {1, 2}, {2, 1}, {2, 2}})
        for (int k = 0; k < 10; ++k) {
            const CVec f = random_in(s2);
            const RVec w = s2.grid().weights;
            worst = std::max(worst, std::abs(l2sq(g_function(s2, N, f, t2), w) / l2sq(f, w) / oracle(N) - 1));
        }
    return {worst <= 1e-6, "worst relative deviation " + fmt("%.2e", worst)};
}

Outcome c3_hankel_dunkl()
{
    double inv = 0, gauss = 0, conv = 0, four = 0, cst = 0;
    for (double a : {0.0, 0.5, 1.0, 2.5}) {
        const auto r = hankel_dunkl_conformance(a);
        inv = std::max({inv, r.hankel_involution, r.dunkl_involution});
        gauss = std::max(gauss, r.hankel_gaussian);
        conv = std::max({conv, r.hankel_convolution, r.dunkl_convolution});
        four = std::max(four, r.dunkl_fourier);
        // Gaussian constant against direct Bessel quadrature of int e^{-x^2} E_x(l) x^{2a} dx
        for (double l : {0.5, 1.5, 3.0}) {
            const double direct = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double x) {
                    if (x == 0.0) return 0.0;
                    const double z = x * l;
                    return std::exp(-x * x) * std::pow(z, 0.5 - a) * boost::math::cyl_bessel_j(a - 0.5, z) * std::pow(x, 2 * a);
                },
                0.0, 12.0, 20, 1e-14);
            const double closed = hankel_gaussian_constant(a) * std::exp(-l * l / 4);
            cst = std::max(cst, std::abs(direct - closed) / std::abs(closed));
        }
    }
    const bool ok = inv <= 1e-6 && gauss <= 1e-7 && cst <= 1e-7 && four <= 1e-7 && conv <= 1e-6;
    return {ok, "involution " + fmt("%.1e", inv) + ", gaussian " + fmt("%.1e", std::max(gauss, cst)) + ", fourier " +
                    fmt("%.1e", four) + ", convolution " + fmt("%.1e", conv)};
}

Outcome c4_riesz()
{
    double norm_err = 0, ident = 0;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n01;
    for (std::size_t K : {4, 8, 16})
        for (std::size_t d : {1, 2, 3}) {
            const auto spec = cyclic_system(K, d);
            for (std::size_t r = 0; r < d; ++r) {
                norm_err = std::max(norm_err, std::abs(discrete_riesz_l2_norm(spec, r) - std::sqrt(2.0)));
                // sup of |e^{i th_r} - 1| / sqrt(sum (1 - cos th_s)) computed here
                double sup = 0;
                const std::size_t n = spec.size();
                for (std::size_t k = 0; k < n; ++k) {
                    std::size_t rem = k;
                    double den = 0, num = 0;
                    for (std::size_t s = d; s-- > 0;) {
                        const double th = 2 * pi * static_cast<double>(rem % K) / static_cast<double>(K);
                        rem /= K;
                        den += 1 - std::cos(th);
                        if (s == r) num = std::abs(std::polar(1.0, th) - 1.0);
                    }
                    if (den > 0) sup = std::max(sup, num / std::sqrt(den));
                }
                norm_err = std::max(norm_err, std::abs(sup - std::sqrt(2.0)));

                CVec f(static_cast<Eigen::Index>(n));
                for (auto& v : f) v = cplx(n01(rng), n01(rng));
                const CVec R = discrete_riesz(spec, r, f);
                ident = std::max(ident, (R - std::sqrt(2.0) * discrete_riesz_normalized(spec, r, f)).cwiseAbs().maxCoeff());
                ident = std::max(ident, (R - riesz_1d_along(spec, r, discrete_riesz_factor(spec, r, f))).cwiseAbs().maxCoeff());
            }
        }
    return {norm_err <= 1e-10 && ident <= 1e-12, "norm error " + fmt("%.1e", norm_err) + ", identities " + fmt("%.1e", ident)};
}

Outcome c5_dimension_free()
{
    const auto rows = vector_riesz_norms(8, {1.5, 3.0}, {1, 2, 3}, 5, {"scalar", "factor"});
    std::map<std::pair<std::string, double>, std::pair<double, double>> span;
    for (const auto& r : rows) {
        auto& s = span.try_emplace({r.estimator, r.p}, r.value, r.value).first->second;
        s.first = std::min(s.first, r.value);
        s.second = std::max(s.second, r.value);
    }
    double worst = 0;
    for (const auto& [k, s] : span) worst = std::max(worst, (s.second - s.first) / s.first);
    return {span.size() == 4 && worst <= 0.2, "largest spread across d " + fmt("%.3f", worst)};
}

Outcome c6_growth()
{
    std::vector<double> v;
    for (int i = 0; i <= 20; ++i) v.push_back(i);
    const auto ou = imaginary_growth("ou", 64, 4.0, v, 1);
    const auto cy = imaginary_growth("cyclic", 64, 4.0, v, 1);
    std::vector<double> y1, y2, lv;
    for (std::size_t i = 0; i < v.size(); ++i) {
        y1.push_back(ou[i].log_lower);
        y2.push_back(cy[i].log_lower);
        lv.push_back(std::log1p(v[i]));
    }
    const Fit a = fit(v, y1), b = fit(lv, y2);
    const bool ok = a.r2 >= 0.9 && a.slope > 0 && b.maxres <= 0.1 && a.slope >= 3 * b.slope;
    return {ok, "OU slope " + fmt("%.4f", a.slope) + " R2 " + fmt("%.3f", a.r2) + "; Z_64 log-slope " + fmt("%.4f", b.slope) +
                    " max residual " + fmt("%.3f", b.maxres) + "; ratio " + fmt("%.3f", a.slope / b.slope)};
}

Outcome c7_marcinkiewicz()
{
    double err = 0;
    for (double u : {1.0, 5.0, 10.0}) {
        Symbol m = make_symbol([u](std::span<const double> l) { return std::polar(1.0, u * std::log(std::abs(l[0]))); });
        m.derivative = [u](std::span<const int> g, std::span<const double> l) {
            cplx f = std::polar(1.0, u * std::log(std::abs(l[0])));
            for (int k = 0; k < g[0]; ++k) f *= cplx(-static_cast<double>(k), u) / l[0];
            return f;
        };
        const auto r = marcinkiewicz_norm(m, {1});
        err = std::max({err, std::abs(r.values[0] - std::sqrt(std::log(2.0))), std::abs(r.values[1] - u * std::sqrt(std::log(2.0)))});
    }
    Symbol s = make_symbol([](std::span<const double> l) { return cplx(std::sin(l[0])); });
    s.derivative = [](std::span<const int> g, std::span<const double> l) { return cplx(g[0] == 0 ? std::sin(l[0]) : std::cos(l[0])); };
    const bool flagged = marcinkiewicz_norm(s, {1}).divergent;
    return {err <= 1e-8 && flagged, "max error " + fmt("%.1e", err) + (flagged ? ", sin flagged" : ", sin NOT flagged")};
}

// properties (i)-(v) recomputed from the definitions
bool cz_ok(const RVec& f, const RVec& nu, const CZResult& cz, const DyadicSystem& dy, double& Cmu)
{
    const std::size_t n1 = static_cast<std::size_t>(nu.size()), n2 = dy.space.size();
    const RVec& mu = dy.space.mass;
    const double s = cz.threshold;
    double C = 1.0;
    for (std::size_t l = 1; l < dy.generations.size(); ++l)
        for (const auto& q : dy.generations[l]) C = std::max(C, dy.generations[l - 1][q.parent].mass / q.mass);
    Cmu = C;
    auto at = [&](const RVec& h, std::size_t a, std::size_t y) { return h[static_cast<Eigen::Index>(a * n2 + y)]; };
    auto n1norm = [&](const RVec& h) {
        double t = 0;
        for (std::size_t a = 0; a < n1; ++a)
            for (std::size_t y = 0; y < n2; ++y) t += nu[a] * mu[y] * std::abs(at(h, a, y));
        return t;
    };
    double tot = n1norm(cz.g);
    RVec sum = cz.g;
    std::vector<int> cnt(f.size(), 0);
    bool ok = true;
    for (const auto& p : cz.parts) {
        tot += n1norm(p.b);
        sum += p.b;
        const auto& q = dy.generations[p.generation][p.index];
        for (std::size_t a = 0; a < n1; ++a) {
            double mean = 0, avg = 0;
            for (std::size_t y = 0; y < n2; ++y) {
                const bool in = p.F[a] && y >= q.begin && y < q.end;
                if (in) {
                    ++cnt[a * n2 + y];
                    avg += mu[y] * at(f, a, y);
                } else if (at(p.b, a, y) != 0.0) {
                    ok = false;
                }
                mean += mu[y] * at(p.b, a, y);
            }
            ok = ok && std::abs(mean) <= 1e-12;
            if (p.F[a]) ok = ok && avg / q.mass >= s / C && avg / q.mass <= C * s;
        }
    }
    ok = ok && tot <= 4 * n1norm(f) * (1 + 1e-12) && (sum - f).cwiseAbs().maxCoeff() < 1e-12;
    ok = ok && cz.g.cwiseAbs().maxCoeff() <= C * s * (1 + 1e-12);
    for (int c : cnt) ok = ok && c <= 1;
    for (std::size_t a = 0; a < n1; ++a) {
        double m = 0, fi = 0;
        for (std::size_t y = 0; y < n2; ++y) {
            m += cnt[a * n2 + y] ? mu[y] : 0.0;
            fi += mu[y] * at(f, a, y);
        }
        ok = ok && m <= fi / s * (1 + 1e-12);
    }
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t y = 0; y < n2; ++y) {
            bool above = false;
            for (const auto& gen : dy.generations)
                for (const auto& q : gen) {
                    if (y < q.begin || y >= q.end) continue;
                    double acc = 0;
                    for (std::size_t z = q.begin; z < q.end; ++z) acc += mu[z] * std::abs(at(f, a, z));
                    above = above || acc / q.mass > s;
                }
            ok = ok && above == (cnt[a * n2 + y] > 0);
        }
    return ok;
}

Outcome c8_cz()
{
    const auto dy = binary_dyadic_system(cyclic_space(16), 3);
    std::mt19937_64 rng(808);
    std::exponential_distribution<double> ex(1.0);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    int good = 0, parts = 0;
    double Cmu = 0;
    bool cmu_match = true;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n1 = 1 + t % 4;
        RVec nu(static_cast<Eigen::Index>(n1)), f(static_cast<Eigen::Index>(n1 * 16));
        for (auto& v : nu) v = u(rng);
        for (auto& v : f) v = std::pow(ex(rng), 3);
        const double s = cz_min_threshold(f, n1, dy) * (0.5 + u(rng));
        const auto cz = cz_decompose(f, nu, s, dy);
        parts += static_cast<int>(cz.parts.size());
        const bool ok = cz_ok(f, nu, cz, dy, Cmu) && cz_properties(f, nu, cz, dy).all();
        cmu_match = cmu_match && cz.C_mu == Cmu;
        good += ok;
    }
    return {good == 100 && cmu_match && parts > 0,
            std::to_string(good) + "/100 inputs, C_mu " + fmt("%g", Cmu) + ", " + std::to_string(parts) + " cubes"};
}

Outcome c9_mehler()
{
    const auto h = HermiteBasis::build(24);
    const auto sys = build_system({h});
    double op = 0;
    for (double r : {0.1, 0.5, 0.9}) {
        const double t[] = {-std::log(r)};
        const OperatorRep diff{mehler_heat_operator(h, r).matrix - semigroup(sys, t).matrix, sys.grid()};
        op = std::max(op, lp_operator_norm(diff, 2.0, NormMode::exact));
    }
    double fd = 0;
    const double step = 1e-6;
    for (double r : {0.2, 0.5, 0.8})
        for (double x : {-1.2, 0.3, 2.0})
            for (double y : {-0.4, 0.9}) {
                const double num = (mehler_kernel(r + step, x, y) - mehler_kernel(r - step, x, y)) / (2 * step);
                fd = std::max(fd, std::abs(mehler_derivative(r, x, y) - num) / std::abs(num));
            }
    return {op <= 1e-7 && fd <= 1e-6, "operator gap " + fmt("%.1e", op) + ", derivative " + fmt("%.1e", fd)};
}

std::string slurp(const std::string& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome c10_determinism()
{
    const auto dir = std::filesystem::temp_directory_path();
    const std::vector<std::string> bodies{
        R"("experiment":"imaginary-growth","sweep":{"v":[0,5,10]},"system":{"n_max":32})",
        R"("experiment":"riesz-dim-sweep","sweep":{"K":[8],"d":[1,2,3],"p":[1.5,2,3]})",
        R"("experiment":"marcinkiewicz-verify","sweep":{"n":[8,16]})",
        R"("experiment":"mellin-selftest","sweep":{"count":6})",
        R"("experiment":"cz-suite","sweep":{"trials":50})",
        R"("experiment":"hankel-dunkl-conformance","sweep":{"alpha":[0.5]},"system":{"n":96})",
    };
    int same = 0;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        std::string out[3];
        for (int k = 0; k < 3; ++k) {
            const std::string path = (dir / ("specmult_accept_" + std::to_string(i) + "_" + std::to_string(k))).string();
            // the last run uses a different worker count
            setenv("SPECMULT_THREADS", k == 2 ? "3" : "1", 1);
            run_experiment(parse_config("{" + bodies[i] + R"(,"seed":17,"output":")" + path + "\"}"));
            out[k] = slurp(path);
            std::filesystem::remove(path);
        }
        same += !out[0].empty() && out[0] == out[1] && out[0] == out[2];
    }
    unsetenv("SPECMULT_THREADS");
    return {same == static_cast<int>(bodies.size()), std::to_string(same) + "/" + std::to_string(bodies.size()) + " experiments byte identical"};
}

}  // namespace

int main()
{
    report(1, "Mellin Plancherel and inversion", 30, c1_mellin);
    report(2, "g_N isometry constant", 60, c2_gN);
    report(3, "Hankel/Dunkl conformance", 120, c3_hankel_dunkl);
    report(4, "discrete Riesz exactness", 30, c4_riesz);
    report(5, "dimension-free Riesz probes", 300, c5_dimension_free);
    report(6, "imaginary-power growth contrast", 600, c6_growth);
    report(7, "Marcinkiewicz norms", 10, c7_marcinkiewicz);
    report(8, "CZ decomposition suite", 60, c8_cz);
    report(9, "Mehler consistency", 30, c9_mehler);
    report(10, "determinism", 600, c10_determinism);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures ? 1 : 0;
}
