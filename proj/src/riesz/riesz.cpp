#include "specmult/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>
#include <sstream>

#include "specmult/fft.hpp"
#include "specmult/parallel.hpp"

namespace specmult {

namespace {

// multi-index of the flat row-major position k
std::vector<std::size_t> unflatten(std::size_t k, const std::vector<std::size_t>& shape)
{
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t r = shape.size(); r-- > 0;) {
        idx[r] = k % shape[r];
        k /= shape[r];
    }
    return idx;
}

CVec apply_symbol(const CVec& sym, const CVec& f, const std::vector<std::size_t>& shape)
{
    if (f.size() != sym.size()) throw ShapeError("input length differs from the group size");
    const CVec F = fft_nd(f, shape, -1);
    return fft_nd(CVec(F.cwiseProduct(sym)), shape, +1) / static_cast<double>(sym.size());
}

LinearMap symbol_map(const std::vector<CVec>& syms, const std::vector<std::size_t>& shape)
{
    auto s = std::make_shared<const std::vector<CVec>>(syms);
    const std::size_t n = static_cast<std::size_t>(syms.front().size());
    LinearMap m;
    m.n_in = m.n_out = n;
    m.out_blocks = syms.size();
    m.w_in = m.w_out = RVec::Ones(static_cast<Eigen::Index>(n));
    m.apply = [s, shape, n](const CVec& x) -> CVec {
        const CVec F = fft_nd(x, shape, -1);
        CVec y(static_cast<Eigen::Index>(n * s->size()));
        for (std::size_t b = 0; b < s->size(); ++b)
            y.segment(static_cast<Eigen::Index>(b * n), static_cast<Eigen::Index>(n)) =
                fft_nd(CVec(F.cwiseProduct((*s)[b])), shape, +1) / static_cast<double>(n);
        return y;
    };
    m.apply_adjoint = [s, shape, n](const CVec& y) -> CVec {
        CVec acc = CVec::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t b = 0; b < s->size(); ++b) {
            const CVec Y = fft_nd(CVec(y.segment(static_cast<Eigen::Index>(b * n), static_cast<Eigen::Index>(n))), shape, -1);
            acc += Y.cwiseProduct((*s)[b].conjugate());
        }
        return fft_nd(acc, shape, +1) / static_cast<double>(n);
    };
    return m;
}

double theta(std::size_t k, std::size_t K) { return 2.0 * pi * static_cast<double>(k) / static_cast<double>(K); }

// per-frequency values of L = I - P on one axis
RVec laplacian_symbol(const CyclicGroupSpec& spec)
{
    RVec l = RVec::Ones(static_cast<Eigen::Index>(spec.K)) - markov_symbol(spec);
    l[0] = 0.0;
    return l;
}

void check_axis(const CyclicGroupSpec& spec, std::size_t r)
{
    if (r >= spec.d) throw ParameterError("axis index out of range");
}

bool power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

long signed_freq(std::size_t k, std::size_t n)
{
    return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

template <class F>
CVec torus_multiplier(const std::vector<std::size_t>& shape, std::size_t r, const CVec& f, F&& sym)
{
    if (shape.empty() || r >= shape.size()) throw ParameterError("axis index out of range");
    std::size_t n = 1;
    for (auto s : shape) {
        if (!power_of_two(s) || s < 2) throw ParameterError("torus lattice sizes must be powers of two");
        n *= s;
    }
    if (static_cast<std::size_t>(f.size()) != n) throw ShapeError("input length differs from the lattice size");
    CVec m(static_cast<Eigen::Index>(n));
    std::vector<double> k(shape.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = unflatten(i, shape);
        for (std::size_t s = 0; s < shape.size(); ++s) k[s] = static_cast<double>(signed_freq(idx[s], shape[s]));
        m[static_cast<Eigen::Index>(i)] = sym(k);
    }
    return apply_symbol(m, f, shape);
}

double norm_k(const std::vector<double>& k)
{
    double s = 0.0;
    for (double v : k) s += v * v;
    return std::sqrt(s);
}

}  // namespace

std::size_t CyclicGroupSpec::size() const
{
    std::size_t n = 1;
    for (std::size_t r = 0; r < d; ++r) n *= K;
    return n;
}

bool CyclicGroupSpec::generates() const
{
    std::size_t g = K;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] > 0.0) g = std::gcd(g, i);
    return g == 1;
}

void CyclicGroupSpec::validate() const
{
    if (K < 2) throw ParameterError("group order K must be >= 2");
    if (d < 1) throw ParameterError("product count d must be >= 1");
    if (mu.size() != K) throw ShapeError("mu must have K entries");
    double s = 0.0;
    for (std::size_t g = 0; g < K; ++g) {
        if (!(mu[g] >= 0.0)) throw ParameterError("mu must be nonnegative");
        if (std::abs(mu[g] - mu[(K - g) % K]) > 1e-14) throw ParameterError("mu must be symmetric");
        s += mu[g];
    }
    if (std::abs(s - 1.0) > 1e-12) throw ParameterError("mu must have total mass 1");
    if (!generates()) throw ParameterError("support of mu does not generate Z_K");
}

CyclicGroupSpec cyclic_system(std::size_t K, std::size_t d)
{
    CyclicGroupSpec s;
    s.K = K;
    s.d = d;
    s.mu.assign(K, 0.0);
    if (K >= 2) {
        s.mu[1] += 0.5;
        s.mu[K - 1] += 0.5;
    }
    s.validate();
    return s;
}

RVec markov_symbol(const CyclicGroupSpec& spec)
{
    spec.validate();
    RVec m = RVec::Zero(static_cast<Eigen::Index>(spec.K));
    for (std::size_t k = 0; k < spec.K; ++k)
        for (std::size_t g = 0; g < spec.K; ++g)
            if (spec.mu[g] != 0.0) m[static_cast<Eigen::Index>(k)] += spec.mu[g] * std::cos(theta(g * k % spec.K, spec.K));
    return m;
}

CVec markov_operator(const CyclicGroupSpec& spec, const CVec& f, std::size_t axis)
{
    check_axis(spec, axis);
    const RVec m = markov_symbol(spec);
    const auto shape = spec.shape();
    CVec sym(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t i = 0; i < spec.size(); ++i) sym[static_cast<Eigen::Index>(i)] = m[static_cast<Eigen::Index>(unflatten(i, shape)[axis])];
    return apply_symbol(sym, f, shape);
}

double markov_norm(const CyclicGroupSpec& spec, double p)
{
    spec.validate();
    if (p == 1.0 || std::isinf(p)) return std::accumulate(spec.mu.begin(), spec.mu.end(), 0.0);
    if (p == 2.0) return markov_symbol(spec).cwiseAbs().maxCoeff();
    throw UnsupportedMode("markov_norm: p must be 1, 2 or inf");
}

CVec project_mean_zero(const CyclicGroupSpec& spec, const CVec& f)
{
    spec.validate();
    if (static_cast<std::size_t>(f.size()) != spec.size()) throw ShapeError("input length differs from the group size");
    return f.array() - f.mean();
}

CVec project_mean_zero_axis(const CyclicGroupSpec& spec, const CVec& f, std::size_t axis)
{
    spec.validate();
    check_axis(spec, axis);
    const auto shape = spec.shape();
    CVec sym(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t i = 0; i < spec.size(); ++i) sym[static_cast<Eigen::Index>(i)] = unflatten(i, shape)[axis] == 0 ? 0.0 : 1.0;
    return apply_symbol(sym, f, shape);
}

CVec discrete_riesz_symbol(const CyclicGroupSpec& spec, std::size_t r)
{
    spec.validate();
    check_axis(spec, r);
    const RVec l = laplacian_symbol(spec);
    const auto shape = spec.shape();
    CVec sym(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto idx = unflatten(i, shape);
        double tot = 0.0;
        for (auto k : idx) tot += l[static_cast<Eigen::Index>(k)];
        sym[static_cast<Eigen::Index>(i)] = tot > 0.0 ? (std::polar(1.0, theta(idx[r], spec.K)) - 1.0) / std::sqrt(tot) : cplx(0.0);
    }
    return sym;
}

CVec discrete_riesz(const CyclicGroupSpec& spec, std::size_t r, const CVec& f)
{
    return apply_symbol(discrete_riesz_symbol(spec, r), f, spec.shape());
}

CVec discrete_riesz_normalized(const CyclicGroupSpec& spec, std::size_t r, const CVec& f)
{
    spec.validate();
    check_axis(spec, r);
    const auto shape = spec.shape();
    CVec sym(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto idx = unflatten(i, shape);
        double tot = 0.0;
        for (auto k : idx) tot += std::norm(std::polar(1.0, theta(k, spec.K)) - 1.0);
        sym[static_cast<Eigen::Index>(i)] = tot > 0.0 ? (std::polar(1.0, theta(idx[r], spec.K)) - 1.0) / std::sqrt(tot) : cplx(0.0);
    }
    return apply_symbol(sym, f, shape);
}

CVec riesz_1d_along(const CyclicGroupSpec& spec, std::size_t r, const CVec& f)
{
    spec.validate();
    check_axis(spec, r);
    const RVec l = laplacian_symbol(spec);
    const auto shape = spec.shape();
    CVec sym(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const std::size_t k = unflatten(i, shape)[r];
        sym[static_cast<Eigen::Index>(i)] =
            l[static_cast<Eigen::Index>(k)] > 0.0 ? (std::polar(1.0, theta(k, spec.K)) - 1.0) / std::sqrt(l[static_cast<Eigen::Index>(k)]) : cplx(0.0);
    }
    return apply_symbol(sym, f, shape);
}

namespace {

CVec factor_symbol(const CyclicGroupSpec& spec, std::size_t r, double sigma)
{
    spec.validate();
    check_axis(spec, r);
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    const RVec l = laplacian_symbol(spec);
    const auto shape = spec.shape();
    CVec sym(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto idx = unflatten(i, shape);
        double tot = 0.0;
        for (auto k : idx) tot += l[static_cast<Eigen::Index>(k)];
        const double lr = l[static_cast<Eigen::Index>(idx[r])];
        sym[static_cast<Eigen::Index>(i)] = lr > 0.0 ? std::pow(lr / tot, sigma) : 0.0;
    }
    return sym;
}

}  // namespace

CVec discrete_riesz_factor(const CyclicGroupSpec& spec, std::size_t r, const CVec& f, double sigma)
{
    return apply_symbol(factor_symbol(spec, r, sigma), f, spec.shape());
}

double discrete_riesz_l2_norm(const CyclicGroupSpec& spec, std::size_t r)
{
    return discrete_riesz_symbol(spec, r).cwiseAbs().maxCoeff();
}

double discrete_riesz_l1_norm(const CyclicGroupSpec& spec, std::size_t r)
{
    CVec delta = CVec::Zero(static_cast<Eigen::Index>(spec.size()));
    delta[0] = 1.0;
    return discrete_riesz(spec, r, delta).cwiseAbs().sum();
}

LinearMap discrete_riesz_map(const CyclicGroupSpec& spec, std::size_t r)
{
    return symbol_map({discrete_riesz_symbol(spec, r)}, spec.shape());
}

LinearMap discrete_riesz_vector_map(const CyclicGroupSpec& spec)
{
    std::vector<CVec> syms;
    for (std::size_t r = 0; r < spec.d; ++r) syms.push_back(discrete_riesz_symbol(spec, r));
    return symbol_map(syms, spec.shape());
}

LinearMap discrete_riesz_factor_map(const CyclicGroupSpec& spec, std::size_t r, double sigma)
{
    return symbol_map({factor_symbol(spec, r, sigma)}, spec.shape());
}

SpectralSystem cyclic_laplacian_system(const CyclicGroupSpec& spec)
{
    spec.validate();
    const std::size_t K = spec.K;
    const RVec l = laplacian_symbol(spec);
    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return l[static_cast<Eigen::Index>(a)] < l[static_cast<Eigen::Index>(b)];
    });
    std::vector<double> nodes(K);
    for (std::size_t x = 0; x < K; ++x) nodes[x] = static_cast<double>(x);
    AxisBasis a;
    a.grid = make_grid(nodes, RVec::Ones(static_cast<Eigen::Index>(K)), "Z_" + std::to_string(K));
    a.eigenvalues.resize(static_cast<Eigen::Index>(K));
    a.synthesis.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t j = 0; j < K; ++j) {
        const std::size_t k = order[j];
        a.eigenvalues[static_cast<Eigen::Index>(j)] = l[static_cast<Eigen::Index>(k)];
        for (std::size_t x = 0; x < K; ++x)
            a.synthesis(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(j)) =
                std::polar(1.0 / std::sqrt(static_cast<double>(K)), theta(x * k % K, K));
    }
    a.analysis = a.synthesis.adjoint();
    a.label = "cyclic(" + std::to_string(K) + ")";
    std::vector<AxisBasis> axes(spec.d, a);
    return SpectralSystem(axes);
}

CVec riesz_factor_diagonal(const SpectralSystem& sys, std::size_t r, double sigma, bool project_zero)
{
    if (r >= sys.d()) throw ParameterError("axis index out of range");
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    const RMat lam = sys.joint_eigenvalues();
    if ((lam.array() < 0.0).any()) throw DomainError("riesz_factor needs nonnegative eigenvalues");
    CVec diag(lam.rows());
    for (Eigen::Index k = 0; k < lam.rows(); ++k) {
        const double tot = lam.row(k).sum();
        if (tot > 0.0) {
            diag[k] = std::pow(lam(k, static_cast<Eigen::Index>(r)) / tot, sigma);
        } else {
            if (!project_zero) throw ParameterError("zero total eigenvalue; filter the system or project it out");
            diag[k] = 0.0;
        }
    }
    return diag;
}

OperatorRep riesz_factor(const SpectralSystem& sys, std::size_t r, double sigma, bool project_zero)
{
    return multiplier_operator(sys, riesz_factor_diagonal(sys, r, sigma, project_zero));
}

CVec classical_riesz_torus(const std::vector<std::size_t>& shape, std::size_t r, const CVec& f)
{
    return torus_multiplier(shape, r, f, [r](const std::vector<double>& k) -> cplx {
        const double n = norm_k(k);
        return n > 0.0 ? k[r] / n : 0.0;
    });
}

CVec torus_sign_factor(const std::vector<std::size_t>& shape, std::size_t r, const CVec& f)
{
    return torus_multiplier(shape, r, f, [r](const std::vector<double>& k) -> cplx {
        return k[r] > 0.0 ? 1.0 : (k[r] < 0.0 ? -1.0 : 0.0);
    });
}

CVec torus_ratio_factor(const std::vector<std::size_t>& shape, std::size_t r, const CVec& f)
{
    return torus_multiplier(shape, r, f, [r](const std::vector<double>& k) -> cplx {
        const double n = norm_k(k);
        return n > 0.0 ? std::abs(k[r]) / n : 0.0;
    });
}

std::vector<RieszRow> vector_riesz_norms(std::size_t K, const std::vector<double>& p_list,
                                         const std::vector<std::size_t>& d_list, std::uint64_t seed,
                                         const std::vector<std::string>& estimators, const PowerOptions& opt)
{
    for (double p : p_list)
        if (!(p > 1.0) || std::isinf(p)) throw ParameterError("vector_riesz_norms: p must lie in (1, inf)");
    for (const auto& e : estimators)
        if (e != "scalar" && e != "vector" && e != "factor" && e != "envelope_d" && e != "envelope_sqrt_d")
            throw ParameterError("unknown estimator '" + e + "'");

    auto estimate = [&](const std::string& est, std::size_t d, double p) -> double {
        const CyclicGroupSpec spec = cyclic_system(K, d);
        if (est == "scalar") {
            if (p == 2.0) return discrete_riesz_l2_norm(spec, 0);
            return lp_lower_bound(discrete_riesz_map(spec, 0), p, seed, opt);
        }
        if (est == "factor") {
            if (p == 2.0) return factor_symbol(spec, 0, 0.5).cwiseAbs().maxCoeff();
            return lp_lower_bound(discrete_riesz_factor_map(spec, 0, 0.5), p, seed, opt);
        }
        if (p == 2.0) {
            RVec s = RVec::Zero(static_cast<Eigen::Index>(spec.size()));
            for (std::size_t r = 0; r < d; ++r) s += discrete_riesz_symbol(spec, r).cwiseAbs2();
            return std::sqrt(s.maxCoeff());
        }
        return lp_lower_bound(discrete_riesz_vector_map(spec), p, seed, opt);
    };

    struct Task {
        std::size_t d;
        double p;
        std::string est;
    };
    std::vector<Task> tasks;
    for (double p : p_list)
        for (std::size_t d : d_list)
            for (const auto& e : estimators) tasks.push_back({d, p, e});

    // d = 1 vector value per p, used by the envelopes
    std::vector<double> base(p_list.size(), 0.0);
    bool need_base = false;
    for (const auto& e : estimators) need_base = need_base || e.rfind("envelope", 0) == 0;
    if (need_base && !d_list.empty())
        parallel_for(p_list.size(), [&](std::size_t i) { base[i] = estimate("vector", 1, p_list[i]); });

    std::vector<RieszRow> rows(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& t = tasks[i];
        if (t.d < 1) throw ParameterError("d must be >= 1");
        RieszRow row{K, t.d, t.p, t.est == "scalar" || t.est == "factor" ? std::size_t{1} : std::size_t{0}, t.est, 0.0, seed};
        const std::size_t pi_idx = static_cast<std::size_t>(std::find(p_list.begin(), p_list.end(), t.p) - p_list.begin());
        if (t.est == "envelope_d")
            row.value = base[pi_idx] * static_cast<double>(t.d);
        else if (t.est == "envelope_sqrt_d")
            row.value = base[pi_idx] * std::sqrt(static_cast<double>(t.d));
        else
            row.value = estimate(t.est, t.d, t.p);
        rows[i] = row;
    });
    return rows;
}

std::string riesz_rows_csv(const std::vector<RieszRow>& rows)
{
    std::string out = "K,d,p,r,estimator,value,seed\n";
    char buf[64];
    for (const auto& r : rows) {
        out += std::to_string(r.K) + "," + std::to_string(r.d) + ",";
        std::snprintf(buf, sizeof buf, "%.17g", r.p);
        out += buf;
        out += "," + std::to_string(r.r) + "," + r.estimator + ",";
        std::snprintf(buf, sizeof buf, "%.17g", r.value);
        out += buf;
        out += "," + std::to_string(r.seed) + "\n";
    }
    return out;
}

}  // namespace specmult
