#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "specmult/bases.hpp"
#include "specmult/errors.hpp"
#include "specmult/experiments.hpp"
#include "specmult/gaussprod.hpp"
#include "specmult/handun.hpp"
#include "specmult/mellin.hpp"
#include "specmult/parallel.hpp"
#include "specmult/riesz.hpp"
#include "specmult/squarefn.hpp"

namespace specmult {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw ParameterError("linear fit needs two or more paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw ParameterError("linear fit needs distinct abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        sse += r * r;
        f.max_residual = std::max(f.max_residual, std::abs(r));
    }
    f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
    return f;
}

namespace {

void write_file(const std::string& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << body;
    if (!out) throw IoError("write failed for " + path);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const char* where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : keys) ok = ok || it.key() == k;
        if (!ok) throw ParameterError(std::string("unknown key '") + it.key() + "' in " + where);
    }
}

std::vector<double> num_list(const json& obj, const char* key, std::vector<double> def, double lo, double hi, bool open)
{
    std::vector<double> out = std::move(def);
    if (obj.contains(key)) {
        const json& v = obj.at(key);
        out.clear();
        if (v.is_number()) {
            out.push_back(v.get<double>());
        } else if (v.is_array()) {
            for (const auto& e : v) {
                if (!e.is_number()) throw ParameterError(std::string("sweep '") + key + "' must hold numbers");
                out.push_back(e.get<double>());
            }
        } else {
            throw ParameterError(std::string("'") + key + "' must be a number or an array of numbers");
        }
    }
    for (double x : out) {
        const bool bad = open ? !(x > lo && x < hi) : !(x >= lo && x <= hi);
        if (!std::isfinite(x) || bad)
            throw ParameterError(std::string("'") + key + "' value " + format_number(x) + " outside " + (open ? "(" : "[") +
                                 format_number(lo) + ", " + format_number(hi) + (open ? ")" : "]"));
    }
    return out;
}

std::vector<std::size_t> int_list(const json& obj, const char* key, std::vector<std::size_t> def, std::size_t lo, std::size_t hi)
{
    std::vector<double> d(def.begin(), def.end());
    std::vector<std::size_t> out;
    for (double x : num_list(obj, key, d, static_cast<double>(lo), static_cast<double>(hi), false)) {
        if (x != std::floor(x)) throw ParameterError(std::string("'") + key + "' must hold integers");
        out.push_back(static_cast<std::size_t>(x));
    }
    return out;
}

double num(const json& obj, const char* key, double def, double lo, double hi, bool open = false)
{
    const auto v = num_list(obj, key, {def}, lo, hi, open);
    if (v.size() != 1) throw ParameterError(std::string("'") + key + "' must be a single number");
    return v[0];
}

std::string str(const json& obj, const char* key, const std::string& def)
{
    if (!obj.contains(key)) return def;
    if (!obj.at(key).is_string()) throw ParameterError(std::string("'") + key + "' must be a string");
    return obj.at(key).get<std::string>();
}

std::vector<std::string> str_list(const json& obj, const char* key, std::vector<std::string> def)
{
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    std::vector<std::string> out;
    if (v.is_string()) return {v.get<std::string>()};
    if (!v.is_array()) throw ParameterError(std::string("'") + key + "' must be a string or an array of strings");
    for (const auto& e : v) {
        if (!e.is_string()) throw ParameterError(std::string("'") + key + "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

void require_one_of(const std::string& v, std::initializer_list<const char*> allowed, const char* what)
{
    std::string list;
    for (const char* a : allowed) {
        if (v == a) return;
        list += std::string(" ") + a;
    }
    throw ParameterError(std::string("unknown ") + what + " '" + v + "'; available:" + list);
}

SpectralSystem growth_system(const std::string& kind, std::size_t n, double alpha, double beta)
{
    const int ni = static_cast<int>(n);
    if (kind == "ou") return build_system({HermiteBasis::build(ni)});
    if (kind == "laguerre") return build_system({LaguerreBasis::build(ni, alpha)});
    if (kind == "jacobi") return build_system({JacobiBasis::build(ni, alpha, beta)});
    if (kind == "cyclic") return cyclic_laplacian_system(cyclic_system(n, 1));
    require_one_of(kind, {"ou", "laguerre", "jacobi", "cyclic"}, "system kind");
    return {};
}

double rel_l2(const CVec& a, const CVec& b, const RVec& w)
{
    const double num = (w.array() * (a - b).cwiseAbs2().array()).sum();
    const double den = (w.array() * b.cwiseAbs2().array()).sum();
    return std::sqrt(num / den);
}

}  // namespace

std::vector<GrowthRow> imaginary_growth(const std::string& kind, std::size_t n_max, double p, const std::vector<double>& v,
                                        std::uint64_t seed, double shift, double alpha, double beta)
{
    if (!(shift > 0.0)) throw ParameterError("shift must be positive");
    if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
    const SpectralSystem sys = growth_system(kind, n_max, alpha, beta);
    const RMat lam = sys.joint_eigenvalues();
    std::vector<GrowthRow> rows(v.size());
    parallel_for(v.size(), [&](std::size_t i) {
        CVec diag(lam.rows());
        for (Eigen::Index k = 0; k < lam.rows(); ++k) diag[k] = std::polar(1.0, v[i] * std::log(lam.row(k).sum() + shift));
        const double nrm = lp_operator_norm(multiplier_operator(sys, diag), p, NormMode::lower, seed);
        rows[i] = GrowthRow{kind, n_max, p, v[i], std::log(nrm)};
    });
    return rows;
}

MellinSelftest mellin_selftest(std::uint64_t seed, std::size_t count, const std::vector<std::size_t>& dims)
{
    if (dims.empty() && count > 0) throw ParameterError("mellin selftest needs at least one dimension");
    for (auto d : dims)
        if (d < 1 || d > 2) throw ParameterError("mellin selftest dimension must be 1 or 2");
    struct Draw {
        std::size_t d;
        double amp;
        std::vector<double> a, c;
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(0.5, 1.5), uc(-1.0, 1.0), uamp(0.5, 2.0);
    std::vector<Draw> draws;
    for (std::size_t i = 0; i < count; ++i) {
        Draw dr{dims[i % dims.size()], uamp(rng), {}, {}};
        for (std::size_t r = 0; r < dr.d; ++r) {
            dr.a.push_back(ua(rng));
            dr.c.push_back(uc(rng));
        }
        draws.push_back(dr);
    }
    std::vector<double> pl(count), inv(count);
    std::vector<char> warn(count, 0);
    parallel_for(count, [&](std::size_t i) {
        const Draw& dr = draws[i];
        const Symbol m = make_symbol([dr](std::span<const double> lam) {
            double e = 0.0;
            for (std::size_t r = 0; r < lam.size(); ++r) {
                const double s = std::log(lam[r]) - dr.c[r];
                e += dr.a[r] * s * s;
            }
            return cplx(dr.amp * std::exp(-e), 0.0);
        });
        const std::size_t n = dr.d == 1 ? 512 : 256;
        const double umax = dr.d == 1 ? 40.0 : 20.0;
        const std::vector<LogAxis> la(dr.d, LogAxis{1e-6, 1e6, n});
        const std::vector<UAxis> uax(dr.d, UAxis{-umax, umax, n});
        const auto g = sample_log_grid(m, la);
        const auto M = mellin_transform(g, uax);
        const auto back = mellin_inverse(M, la);
        const double lhs = log_l2_norm_sq(g);
        const double rhs = u_l2_norm_sq(M) / std::pow(2.0 * pi, static_cast<double>(dr.d));
        pl[i] = std::abs(lhs - rhs) / lhs;
        inv[i] = (back.samples - g.samples).norm() / g.samples.norm();
        warn[i] = g.decay_warning || M.decay_warning || back.decay_warning;
    });
    MellinSelftest r;
    r.count = count;
    for (std::size_t i = 0; i < count; ++i) {
        r.plancherel_rel_err = std::max(r.plancherel_rel_err, pl[i]);
        r.inversion_rel_err = std::max(r.inversion_rel_err, inv[i]);
        r.decay_warning = r.decay_warning || warn[i];
        ojson s;
        s["d"] = draws[i].d;
        s["amplitude"] = draws[i].amp;
        s["a"] = draws[i].a;
        s["c"] = draws[i].c;
        s["plancherel_rel_err"] = pl[i];
        s["inversion_rel_err"] = inv[i];
        r.per_symbol.push_back(s);
    }
    return r;
}

ConformanceRow hankel_dunkl_conformance(double alpha, std::size_t n)
{
    if (!(alpha >= 0.0)) throw ParameterError("alpha must be >= 0");
    ConformanceRow row;
    row.alpha = alpha;
    const HankelTransform H(HankelConfig{{alpha}}, {make_half_line_grid(alpha, n)});
    const RVec wh = H.grid().weights;
    const CVec f = H.sample([](std::span<const double> x) {
        return cplx((1.0 + x[0] * x[0] - 0.3 * std::pow(x[0], 4)) * std::exp(-x[0] * x[0] / 2), 0.2 * std::exp(-x[0] * x[0]));
    });
    row.hankel_involution = rel_l2(H.forward(H.forward(f)), f, wh);
    for (double t : {0.5, 1.0, 2.0}) {
        const CVec gs = H.sample([t](std::span<const double> x) { return cplx(std::exp(-t * x[0] * x[0])); });
        const double C = hankel_gaussian_constant(alpha) * std::pow(t, -(2 * alpha + 1) / 2);
        const CVec expect = H.sample([&](std::span<const double> x) { return cplx(C * std::exp(-x[0] * x[0] / (4 * t))); });
        row.hankel_gaussian = std::max(row.hankel_gaussian, rel_l2(H.forward(gs), expect, wh));
    }
    const CVec a = H.sample([](std::span<const double> x) { return cplx(std::exp(-x[0] * x[0])); });
    const CVec b = H.sample([](std::span<const double> x) { return cplx((1 + x[0] * x[0]) * std::exp(-2 * x[0] * x[0])); });
    row.hankel_convolution = rel_l2(H.forward(H.convolve(a, b)), H.forward(a).cwiseProduct(H.forward(b)), wh);

    const DunklTransform D(DunklConfig{{alpha}}, {make_line_grid(alpha, 128)});
    const RVec wd = D.grid().weights;
    const CVec fd = D.sample([](std::span<const double> y) {
        return cplx((1 + y[0] + 0.5 * y[0] * y[0]) * std::exp(-y[0] * y[0] / 2), 0.3 * y[0] * std::exp(-y[0] * y[0]));
    });
    row.dunkl_involution = std::max(rel_l2(D.inverse(D.forward(fd)), fd, wd), rel_l2(D.reflect(D.forward(D.forward(fd))), fd, wd));

    const DunklTransform Ds(DunklConfig{{alpha}}, {make_line_grid(alpha, 64)});
    const RVec ws = Ds.grid().weights;
    const FieldFn g = [](std::span<const double> y) { return cplx((1 + 0.5 * y[0]) * std::exp(-y[0] * y[0])); };
    const CVec fc = Ds.sample([](std::span<const double> y) {
        return cplx(std::exp(-(y[0] - 0.5) * (y[0] - 0.5)), 0.2 * y[0] * std::exp(-y[0] * y[0]));
    });
    row.dunkl_convolution = rel_l2(Ds.forward(Ds.convolve(fc, g)), Ds.forward(fc).cwiseProduct(Ds.forward(Ds.sample(g))), ws);

    if (alpha == 0.0) {
        const DunklTransform F(DunklConfig{{0.0}}, {make_line_grid(0.0, 192)});
        const CVec ff = F.sample([](std::span<const double> y) { return cplx((1 + y[0]) * std::exp(-y[0] * y[0] / 2)); });
        const CVec ex = F.sample([](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2) * cplx(1.0, -x[0]); });
        row.dunkl_fourier = rel_l2(F.forward(ff), ex, F.grid().weights);
    }
    return row;
}

std::vector<MarcinkiewiczRow> marcinkiewicz_verify(const std::vector<std::string>& symbols, const std::string& system,
                                                   const std::vector<std::size_t>& sizes, double p, double u,
                                                   std::uint64_t seed)
{
    require_one_of(system, {"cyclic", "ou"}, "system kind");
    std::vector<Symbol> ms;
    std::vector<ConditionResult> mar;
    for (const auto& s : symbols) {
        require_one_of(s, {"imaginary-power", "sin"}, "symbol");
        Symbol m;
        if (s == "imaginary-power") {
            m = make_symbol([u](std::span<const double> l) { return std::polar(1.0, u * std::log(std::abs(l[0]))); });
            m.derivative = [u](std::span<const int> g, std::span<const double> l) {
                cplx f = std::polar(1.0, u * std::log(std::abs(l[0])));
                for (int k = 0; k < g[0]; ++k) f *= cplx(-static_cast<double>(k), u) / l[0];
                return f;
            };
        } else {
            m = make_symbol([](std::span<const double> l) { return cplx(std::sin(l[0])); });
            m.derivative = [](std::span<const int> g, std::span<const double> l) {
                return cplx(g[0] == 0 ? std::sin(l[0]) : std::cos(l[0]));
            };
        }
        ms.push_back(m);
        mar.push_back(marcinkiewicz_norm(m, {1}));
    }
    std::vector<MarcinkiewiczRow> rows(symbols.size() * sizes.size());
    parallel_for(rows.size(), [&](std::size_t idx) {
        const std::size_t si = idx / sizes.size(), n = sizes[idx % sizes.size()];
        SpectralSystem sys;
        std::vector<double> lam;
        if (system == "cyclic") {
            sys = cyclic_laplacian_system(cyclic_system(n, 1));
            const RMat e = sys.joint_eigenvalues();
            for (Eigen::Index k = 0; k < e.rows(); ++k) lam.push_back(2.0 * static_cast<double>(n * n) * e(k, 0));
        } else {
            sys = build_system({HermiteBasis::build(static_cast<int>(n))});
            const RMat e = sys.joint_eigenvalues();
            for (Eigen::Index k = 0; k < e.rows(); ++k) lam.push_back(e(k, 0));
        }
        CVec diag(static_cast<Eigen::Index>(lam.size()));
        for (std::size_t k = 0; k < lam.size(); ++k) diag[static_cast<Eigen::Index>(k)] = lam[k] > 1e-12 ? ms[si](lam[k]) : cplx(0.0);
        const double nrm = lp_operator_norm(multiplier_operator(sys, diag), p, NormMode::lower, seed);
        rows[idx] = MarcinkiewiczRow{symbols[si], system, n, p, std::log(nrm), mar[si].total, mar[si].divergent};
    });
    return rows;
}

std::vector<CZSuiteRow> cz_suite(std::size_t K, std::size_t generations, const std::vector<std::size_t>& n1_list,
                                 std::size_t trials, std::uint64_t seed)
{
    const DyadicSystem dy = binary_dyadic_system(cyclic_space(K), generations);
    if (n1_list.empty()) return {};
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    struct Draw {
        RVec nu, f;
        double s;
    };
    std::vector<Draw> draws;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n1 = n1_list[t % n1_list.size()];
        Draw d;
        d.nu.resize(static_cast<Eigen::Index>(n1));
        for (auto& v : d.nu) v = u(rng);
        d.f.resize(static_cast<Eigen::Index>(n1 * K));
        for (auto& v : d.f) v = std::pow(ex(rng), 3);
        d.s = cz_min_threshold(d.f, n1, dy) * (0.5 + u(rng));
        draws.push_back(std::move(d));
    }
    std::vector<CZSuiteRow> rows(trials);
    parallel_for(trials, [&](std::size_t t) {
        const Draw& d = draws[t];
        const CZResult cz = cz_decompose(d.f, d.nu, d.s, dy);
        const CZProperties pr = cz_properties(d.f, d.nu, cz, dy);
        CZSuiteRow r;
        r.trial = t;
        r.n1 = static_cast<std::size_t>(d.nu.size());
        r.threshold = cz.threshold;
        r.C_mu = cz.C_mu;
        r.parts = cz.parts.size();
        r.props[0] = pr.i;
        r.props[1] = pr.ii;
        r.props[2] = pr.iii;
        r.props[3] = pr.iv;
        r.props[4] = pr.v;
        r.l1_ratio = pr.l1_ratio;
        r.g_max_over_s = pr.g_max_over_s;
        rows[t] = r;
    });
    return rows;
}

namespace {

ExperimentResult run_growth(const ExperimentConfig& c)
{
    reject_unknown(c.system, {"kinds", "n_max", "alpha", "beta"}, "system");
    reject_unknown(c.symbol, {"name", "shift"}, "symbol");
    reject_unknown(c.sweep, {"v", "p", "n_max"}, "sweep");
    const auto kinds = str_list(c.system, "kinds", {"ou", "cyclic"});
    for (const auto& k : kinds) require_one_of(k, {"ou", "laguerre", "jacobi", "cyclic"}, "system kind");
    require_one_of(str(c.symbol, "name", "shifted-imaginary-power"), {"shifted-imaginary-power"}, "symbol");
    const double shift = num(c.symbol, "shift", 1.0, 0.0, 1e6, true);
    const double alpha = num(c.system, "alpha", 0.0, 0.0, 50.0);
    const double beta = num(c.system, "beta", 0.0, -0.5, 50.0);
    std::vector<std::size_t> n_list = int_list(c.system, "n_max", {64}, 2, 256);
    if (c.sweep.contains("n_max")) n_list = int_list(c.sweep, "n_max", {}, 2, 256);
    const auto v = num_list(c.sweep, "v", {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20}, -100.0, 100.0, false);
    const auto p = num_list(c.sweep, "p", {4.0}, 1.0, 100.0, false);

    std::string csv = "system,n_max,p,v,log_lower,seed\n";
    ExperimentResult res;
    for (const auto& k : kinds)
        for (auto n : n_list)
            for (double pp : p)
                for (const auto& r : imaginary_growth(k, n, pp, v, c.seed, shift, alpha, beta)) {
                    res.divergent = res.divergent || !std::isfinite(r.log_lower);
                    csv += r.system + "," + std::to_string(r.n_max) + "," + format_number(r.p) + "," + format_number(r.v) + "," +
                           format_number(r.log_lower) + "," + std::to_string(c.seed) + "\n";
                }
    write_file(c.output, csv);
    res.files.push_back(c.output);
    return res;
}

ExperimentResult run_riesz(const ExperimentConfig& c)
{
    reject_unknown(c.system, {"estimators"}, "system");
    reject_unknown(c.symbol, {}, "symbol");
    reject_unknown(c.sweep, {"K", "d", "p"}, "sweep");
    const auto est = str_list(c.system, "estimators", {"scalar", "vector"});
    for (const auto& e : est) require_one_of(e, {"scalar", "vector", "factor", "envelope_d", "envelope_sqrt_d"}, "estimator");
    const auto K = int_list(c.sweep, "K", {8}, 2, 64);
    const auto d = int_list(c.sweep, "d", {1, 2, 3}, 1, 4);
    const auto p = num_list(c.sweep, "p", {1.5, 2.0, 3.0}, 1.0, 100.0, true);
    for (auto k : K)
        for (auto dd : d)
            if (std::pow(static_cast<double>(k), static_cast<double>(dd)) > 65536.0)
                throw ParameterError("K^d must not exceed 65536");
    std::vector<RieszRow> rows;
    for (auto k : K) {
        auto part = vector_riesz_norms(k, p, d, c.seed, est);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    ExperimentResult res;
    for (const auto& r : rows) res.divergent = res.divergent || !std::isfinite(r.value);
    write_file(c.output, riesz_rows_csv(rows));
    res.files.push_back(c.output);
    return res;
}

ExperimentResult run_marcinkiewicz(const ExperimentConfig& c)
{
    reject_unknown(c.system, {"kind"}, "system");
    reject_unknown(c.symbol, {"names", "u"}, "symbol");
    reject_unknown(c.sweep, {"n", "p"}, "sweep");
    const std::string kind = str(c.system, "kind", "cyclic");
    const auto names = str_list(c.symbol, "names", {"imaginary-power", "sin"});
    const double u = num(c.symbol, "u", 1.0, -100.0, 100.0);
    const auto n = int_list(c.sweep, "n", {8, 16, 32, 64}, 2, 256);
    const auto p = num_list(c.sweep, "p", {4.0}, 1.0, 100.0, false);
    std::string csv = "symbol,system,n,p,log_lower,mar_norm,mar_divergent,seed\n";
    ExperimentResult res;
    for (double pp : p)
        for (const auto& r : marcinkiewicz_verify(names, kind, n, pp, u, c.seed)) {
            res.divergent = res.divergent || r.divergent || !std::isfinite(r.log_lower);
            csv += r.symbol + "," + r.system + "," + std::to_string(r.n) + "," + format_number(r.p) + "," + format_number(r.log_lower) +
                   "," + format_number(r.mar_norm) + "," + (r.divergent ? "1" : "0") + "," + std::to_string(c.seed) + "\n";
        }
    write_file(c.output, csv);
    res.files.push_back(c.output);
    return res;
}

ExperimentResult run_mellin(const ExperimentConfig& c)
{
    reject_unknown(c.system, {"d"}, "system");
    reject_unknown(c.symbol, {"family"}, "symbol");
    reject_unknown(c.sweep, {"count"}, "sweep");
    require_one_of(str(c.symbol, "family", "log-gaussian"), {"log-gaussian"}, "symbol family");
    const auto dims = int_list(c.system, "d", {1, 2}, 1, 2);
    const auto count = int_list(c.sweep, "count", {20}, 0, 1000);
    if (count.size() != 1) throw ParameterError("'count' must be a single integer");
    const auto r = mellin_selftest(c.seed, count[0], dims);
    ojson j;
    j["experiment"] = "mellin-selftest";
    j["seed"] = c.seed;
    j["count"] = r.count;
    j["plancherel_rel_err"] = r.plancherel_rel_err;
    j["inversion_rel_err"] = r.inversion_rel_err;
    j["decay_warning"] = r.decay_warning;
    j["pass"] = r.plancherel_rel_err <= 1e-6 && r.inversion_rel_err <= 1e-6;
    j["symbols"] = r.per_symbol;
    write_file(c.output, j.dump(2) + "\n");
    ExperimentResult res;
    res.files.push_back(c.output);
    res.divergent = !std::isfinite(r.plancherel_rel_err) || !std::isfinite(r.inversion_rel_err);
    return res;
}

ExperimentResult run_cz(const ExperimentConfig& c)
{
    reject_unknown(c.system, {"K", "generations"}, "system");
    reject_unknown(c.symbol, {}, "symbol");
    reject_unknown(c.sweep, {"n1", "trials"}, "sweep");
    const auto K = int_list(c.system, "K", {16}, 2, 4096);
    const auto G = int_list(c.system, "generations", {3}, 1, 13);
    const auto n1 = int_list(c.sweep, "n1", {1, 2, 3, 4}, 1, 64);
    const auto trials = int_list(c.sweep, "trials", {100}, 0, 100000);
    if (K.size() != 1 || G.size() != 1 || trials.size() != 1) throw ParameterError("K, generations and trials must be single integers");
    const auto rows = cz_suite(K[0], G[0], n1, n1.empty() ? 0 : trials[0], c.seed);
    std::string csv = "trial,n1,threshold,C_mu,parts,i,ii,iii,iv,v,l1_ratio,g_max_over_s,seed\n";
    for (const auto& r : rows) {
        csv += std::to_string(r.trial) + "," + std::to_string(r.n1) + "," + format_number(r.threshold) + "," + format_number(r.C_mu) +
               "," + std::to_string(r.parts);
        for (bool b : r.props) csv += b ? ",1" : ",0";
        csv += "," + format_number(r.l1_ratio) + "," + format_number(r.g_max_over_s) + "," + std::to_string(c.seed) + "\n";
    }
    write_file(c.output, csv);
    ExperimentResult res;
    res.files.push_back(c.output);
    return res;
}

ExperimentResult run_conformance(const ExperimentConfig& c)
{
    reject_unknown(c.system, {"n"}, "system");
    reject_unknown(c.symbol, {}, "symbol");
    reject_unknown(c.sweep, {"alpha"}, "sweep");
    const auto n = int_list(c.system, "n", {192}, 16, 1024);
    if (n.size() != 1) throw ParameterError("'n' must be a single integer");
    const auto alphas = num_list(c.sweep, "alpha", {0.0, 0.5, 1.0, 2.5}, 0.0, 20.0, false);
    std::vector<ConformanceRow> rows(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) { rows[i] = hankel_dunkl_conformance(alphas[i], n[0]); });
    ojson j;
    j["experiment"] = "hankel-dunkl-conformance";
    j["seed"] = c.seed;
    j["rows"] = ojson::array();
    ExperimentResult res;
    bool pass = true;
    for (const auto& r : rows) {
        ojson o;
        o["alpha"] = r.alpha;
        o["hankel_involution"] = r.hankel_involution;
        o["hankel_gaussian"] = r.hankel_gaussian;
        o["hankel_convolution"] = r.hankel_convolution;
        o["dunkl_involution"] = r.dunkl_involution;
        o["dunkl_convolution"] = r.dunkl_convolution;
        if (r.alpha == 0.0) o["dunkl_fourier"] = r.dunkl_fourier;
        j["rows"].push_back(o);
        for (double e : {r.hankel_involution, r.hankel_gaussian, r.hankel_convolution, r.dunkl_involution, r.dunkl_convolution,
                         r.dunkl_fourier})
            res.divergent = res.divergent || !std::isfinite(e);
        pass = pass && r.hankel_involution <= 1e-6 && r.dunkl_involution <= 1e-6 && r.hankel_gaussian <= 1e-7 &&
               r.dunkl_fourier <= 1e-7 && r.hankel_convolution <= 1e-6 && r.dunkl_convolution <= 1e-6;
    }
    j["pass"] = pass;
    write_file(c.output, j.dump(2) + "\n");
    res.files.push_back(c.output);
    return res;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult r;
    if (cfg.experiment == "imaginary-growth") r = run_growth(cfg);
    else if (cfg.experiment == "riesz-dim-sweep") r = run_riesz(cfg);
    else if (cfg.experiment == "marcinkiewicz-verify") r = run_marcinkiewicz(cfg);
    else if (cfg.experiment == "mellin-selftest") r = run_mellin(cfg);
    else if (cfg.experiment == "cz-suite") r = run_cz(cfg);
    else r = run_conformance(cfg);
    r.summary = cfg.experiment + " wrote " + cfg.output + (r.divergent ? " (divergence flagged)" : "");
    return r;
}

bool selftest(std::string& report)
{
    bool all = true;
    auto line = [&](const std::string& name, bool ok, double value) {
        report += name + ": " + (ok ? "PASS" : "FAIL") + " (" + format_number(value) + ")\n";
        all = all && ok;
    };
    const double r2 = discrete_riesz_l2_norm(cyclic_system(8, 2), 0);
    line("discrete riesz l2 norm", std::abs(r2 - std::sqrt(2.0)) <= 1e-10, r2);

    const auto m = mellin_selftest(1, 2, {1});
    line("mellin plancherel", m.plancherel_rel_err <= 1e-6 && m.inversion_rel_err <= 1e-6, m.plancherel_rel_err);

    const double g = g_constant({1});
    line("g_1 constant", std::abs(g - 0.25) < 1e-15, g);

    const auto h = HermiteBasis::build(16);
    const auto sys = build_system({h});
    const double t[] = {-std::log(0.5)};
    const OperatorRep diff{mehler_heat_operator(h, 0.5).matrix - semigroup(sys, t).matrix, sys.grid()};
    const double md = lp_operator_norm(diff, 2.0, NormMode::exact);
    line("mehler heat operator", md <= 1e-7, md);

    const auto dy = binary_dyadic_system(cyclic_space(16), 3);
    RVec f = RVec::Zero(16);
    f[0] = 3.0;
    const auto cz = cz_decompose(f, RVec::Ones(1), 1.0, dy);
    line("cz decomposition", cz_properties(f, RVec::Ones(1), cz, dy).all(), static_cast<double>(cz.parts.size()));
    return all;
}

}  // namespace specmult
