#include <algorithm>
#include <array>
#include <cmath>

#include "specmult/mellin.hpp"
#include "specmult/parallel.hpp"
#include "specmult/quadrature.hpp"

namespace specmult {

namespace {

// Central order-2 stencils for D^k on offsets -2..2 (unscaled).
constexpr double kStencil[5][5] = {
    {0, 0, 1, 0, 0},
    {0, -0.5, 0, 0.5, 0},
    {0, 1, -2, 1, 0},
    {-0.5, 1, 0, -1, 0.5},
    {1, -4, 6, -4, 1},
};

// D(D-1)...(D-k+1) = sum_j c[k][j] D^j
constexpr double kFalling[5][5] = {
    {1, 0, 0, 0, 0},
    {0, 1, 0, 0, 0},
    {0, -1, 1, 0, 0},
    {0, 2, -3, 1, 0},
    {0, -6, 11, -6, 1},
};

std::string gamma_str(const std::vector<int>& g)
{
    std::string s = "(";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s + ")";
}

int max_order(const std::vector<std::vector<int>>& gammas)
{
    int k = 0;
    for (const auto& g : gammas)
        for (int v : g) k = std::max(k, v);
    return k;
}

double step_for(double base, int k) { return std::max(base, std::pow(1e-16, 1.0 / (k + 2))); }

// Stencil row for the log derivative lambda^k d^k (combined from D^j), scaled by h.
std::array<double, 5> log_stencil(int k, double h)
{
    std::array<double, 5> c{};
    for (int j = 0; j <= k; ++j) {
        if (kFalling[k][j] == 0.0) continue;
        const double scale = kFalling[k][j] / std::pow(h, j);
        for (int o = 0; o < 5; ++o) c[o] += scale * kStencil[j][o];
    }
    return c;
}

std::array<double, 5> plain_stencil(int k, double h)
{
    std::array<double, 5> c{};
    for (int o = 0; o < 5; ++o) c[o] = kStencil[k][o] / std::pow(h, k);
    return c;
}

void check_finite(cplx v, const std::vector<int>& g)
{
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("derivative evaluation failed for gamma " + gamma_str(g));
}

// Evaluates m on the 5^d stencil around lambda.  mult = true: offsets multiply lambda_r by e^{o h}.
std::vector<cplx> stencil_values(const Symbol& m, std::span<const double> lam, int reach, const std::vector<double>& h,
                                 bool mult)
{
    const std::size_t d = lam.size();
    std::size_t n = 1;
    for (std::size_t r = 0; r < d; ++r) n *= 5;
    std::vector<cplx> vals(n, cplx(0));
    std::vector<double> pt(d);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t rem = k;
        bool skip = false;
        for (std::size_t r = d; r-- > 0;) {
            const int o = static_cast<int>(rem % 5) - 2;
            rem /= 5;
            if (std::abs(o) > reach) skip = true;
            pt[r] = mult ? lam[r] * std::exp(o * h[r]) : lam[r] + o * h[r];
        }
        if (skip) continue;
        vals[k] = m(pt);
    }
    return vals;
}

cplx combine(const std::vector<cplx>& vals, const std::vector<std::array<double, 5>>& rows)
{
    const std::size_t d = rows.size();
    cplx acc = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        std::size_t rem = k;
        double c = 1.0;
        for (std::size_t r = d; r-- > 0;) {
            c *= rows[r][rem % 5];
            rem /= 5;
            if (c == 0.0) break;
        }
        if (c != 0.0) acc += c * vals[k];
    }
    return acc;
}

// lambda^gamma d^gamma m for each gamma at one point.
std::vector<cplx> log_derivs(const Symbol& m, const std::vector<std::vector<int>>& gammas, std::span<const double> lam,
                             const SweepOptions& opt)
{
    std::vector<cplx> out(gammas.size());
    if (opt.use_analytic && m.derivative) {
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            try {
                double scale = 1.0;
                for (std::size_t r = 0; r < lam.size(); ++r) scale *= std::pow(lam[r], gammas[g][r]);
                out[g] = scale * m.derivative(gammas[g], lam);
            } catch (const std::exception& e) {
                throw DomainError("derivative evaluation failed for gamma " + gamma_str(gammas[g]) + ": " + e.what());
            }
            check_finite(out[g], gammas[g]);
        }
        return out;
    }
    const int k = max_order(gammas);
    if (k > 4) throw UnsupportedMode("finite differences support orders up to 4");
    const double h = step_for(opt.fd_step, k);
    const int reach = k <= 2 ? 1 : 2;
    std::vector<cplx> vals;
    try {
        vals = stencil_values(m, lam, reach, std::vector<double>(lam.size(), h), true);
    } catch (const std::exception& e) {
        throw DomainError("derivative evaluation failed for gamma " + gamma_str(gammas.back()) + ": " + e.what());
    }
    for (std::size_t g = 0; g < gammas.size(); ++g) {
        std::vector<std::array<double, 5>> rows;
        for (int gr : gammas[g]) rows.push_back(log_stencil(gr, h));
        out[g] = combine(vals, rows);
        check_finite(out[g], gammas[g]);
    }
    return out;
}

bool last_three_close(const std::vector<double>& v)
{
    if (v.size() < 3) return false;
    const double a = v[v.size() - 3], c = v.back();
    if (c == 0.0) return true;
    return (c - a) <= 0.01 * c;
}

struct Shells {
    std::vector<std::vector<int>> boxes;  // j multi-indices
    std::vector<int> shell;
    int count = 0;
};

Shells make_shells(int j_min, int j_max, std::size_t d)
{
    if (j_max < j_min) throw ParameterError("empty dyadic sweep");
    const int center = j_min + (j_max - j_min) / 2;
    const int span = j_max - j_min + 1;
    Shells s;
    std::size_t n = 1;
    for (std::size_t r = 0; r < d; ++r) n *= static_cast<std::size_t>(span);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<int> j(d);
        std::size_t rem = k;
        int q = 0;
        for (std::size_t r = d; r-- > 0;) {
            j[r] = j_min + static_cast<int>(rem % static_cast<std::size_t>(span));
            rem /= static_cast<std::size_t>(span);
            q = std::max(q, std::abs(j[r] - center));
        }
        s.boxes.push_back(j);
        s.shell.push_back(q);
        s.count = std::max(s.count, q + 1);
    }
    return s;
}

}  // namespace

std::vector<std::vector<int>> multi_indices_below(const std::vector<int>& rho)
{
    if (rho.empty()) throw ParameterError("empty condition order");
    for (int v : rho)
        if (v < 0) throw ParameterError("condition order must be nonnegative");
    std::vector<std::vector<int>> out;
    std::vector<int> g(rho.size(), 0);
    while (true) {
        out.push_back(g);
        std::size_t r = rho.size();
        while (r-- > 0) {
            if (g[r] < rho[r]) {
                ++g[r];
                break;
            }
            g[r] = 0;
        }
        if (r == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

cplx log_derivative(const Symbol& m, const std::vector<int>& gamma, std::span<const double> lambda, const SweepOptions& opt)
{
    if (gamma.size() != lambda.size()) throw ShapeError("gamma and lambda differ in dimension");
    return log_derivs(m, {gamma}, lambda, opt)[0];
}

ConditionResult marcinkiewicz_norm(const Symbol& m, const std::vector<int>& rho, const SweepOptions& opt)
{
    ConditionResult res;
    res.gammas = multi_indices_below(rho);
    const std::size_t d = rho.size();
    const std::size_t ng = res.gammas.size();
    const Shells shells = make_shells(opt.j_min, opt.j_max, d);
    const double ln2 = std::log(2.0);
    constexpr int kNodes = 16;
    const GaussRule gl = gauss_legendre(kNodes, 0.0, 1.0);
    // difference quotients carry rounding noise well above 1e-12
    const double tol = (opt.use_analytic && m.derivative) ? opt.rel_tol : std::max(opt.rel_tol, 1e-9);

    std::vector<std::vector<double>> block(shells.boxes.size());
    parallel_for(shells.boxes.size(), [&](std::size_t b) {
        const auto& j = shells.boxes[b];
        std::vector<double> prev;
        std::vector<double> cur;
        for (std::size_t panels = 1;; panels *= 2) {
            std::size_t per_axis = panels * kNodes;
            std::size_t total = 1;
            for (std::size_t r = 0; r < d; ++r) total *= per_axis;
            cur.assign(ng, 0.0);
            const double hp = ln2 / static_cast<double>(panels);
            std::vector<double> lam(d);
            for (std::size_t k = 0; k < total; ++k) {
                std::size_t rem = k;
                double w = 1.0;
                for (std::size_t r = d; r-- > 0;) {
                    const std::size_t i = rem % per_axis;
                    rem /= per_axis;
                    const std::size_t p = i / kNodes, q = i % kNodes;
                    const double s = j[r] * ln2 + hp * (static_cast<double>(p) + gl.nodes[static_cast<Eigen::Index>(q)]);
                    lam[r] = std::exp(s);
                    w *= hp * gl.weights[static_cast<Eigen::Index>(q)];
                }
                const auto v = log_derivs(m, res.gammas, lam, opt);
                for (std::size_t g = 0; g < ng; ++g) cur[g] += w * std::norm(v[g]);
            }
            bool done = !prev.empty();
            for (std::size_t g = 0; g < ng && done; ++g)
                if (std::abs(cur[g] - prev[g]) > tol * std::abs(cur[g]) + 1e-300) done = false;
            std::size_t next = 1;
            for (std::size_t r = 0; r < d; ++r) next *= 2 * per_axis;
            if (done || next > opt.max_points) break;
            prev = cur;
        }
        block[b] = cur;
    });

    res.values.assign(ng, 0.0);
    res.stabilized.assign(ng, false);
    res.running_sup.assign(ng, std::vector<double>(static_cast<std::size_t>(shells.count), 0.0));
    for (std::size_t b = 0; b < shells.boxes.size(); ++b)
        for (std::size_t g = 0; g < ng; ++g) {
            auto& rs = res.running_sup[g][static_cast<std::size_t>(shells.shell[b])];
            rs = std::max(rs, block[b][g]);
        }
    for (std::size_t g = 0; g < ng; ++g) {
        auto& rs = res.running_sup[g];
        for (std::size_t q = 1; q < rs.size(); ++q) rs[q] = std::max(rs[q], rs[q - 1]);
        for (auto& v : rs) v = std::sqrt(v);
        res.values[g] = rs.back();
        res.stabilized[g] = last_three_close(rs);
        res.total = std::max(res.total, res.values[g]);
        if (!res.stabilized[g]) res.divergent = true;
    }
    return res;
}

MikhlinResult mikhlin_check(const Symbol& m, const std::vector<int>& rho, std::size_t points_per_axis, double lo,
                            double hi, const SweepOptions& opt)
{
    if (!(lo > 0.0) || !(hi > lo) || points_per_axis < 2) throw ParameterError("invalid Mikhlin sampling range");
    MikhlinResult res;
    res.gammas = multi_indices_below(rho);
    res.sups.assign(res.gammas.size(), 0.0);
    const std::size_t d = rho.size();
    std::vector<double> axis;
    for (std::size_t i = 0; i < points_per_axis; ++i) {
        const double s = std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) / static_cast<double>(points_per_axis - 1);
        axis.push_back(std::exp(s));
        axis.push_back(-std::exp(s));
    }
    std::size_t total = 1;
    for (std::size_t r = 0; r < d; ++r) total *= axis.size();
    std::vector<double> lam(d);
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        for (std::size_t r = d; r-- > 0;) {
            lam[r] = axis[rem % axis.size()];
            rem /= axis.size();
        }
        const auto v = log_derivs(m, res.gammas, lam, opt);
        for (std::size_t g = 0; g < v.size(); ++g) res.sups[g] = std::max(res.sups[g], std::abs(v[g]));
    }
    return res;
}

namespace {

// sup over R of R^{2|gamma|-d} int_{R<=|xi|<=2R} |d^gamma m|^2, per gamma, with running sups per shell.
std::vector<std::vector<double>> hormander_sweep(const Symbol& m, const std::vector<std::vector<int>>& gammas,
                                                 std::size_t d, int angular, const HormanderOptions& opt)
{
    const Shells shells = make_shells(opt.j_min, opt.j_max, 1);
    const GaussRule gr = gauss_legendre(opt.radial_nodes, 1.0, 2.0);
    const GaussRule gc = gauss_legendre(std::max(2, angular / 2), -1.0, 1.0);
    const std::size_t ng = gammas.size();
    const int k = max_order(gammas);
    if (k > 4) throw UnsupportedMode("finite differences support orders up to 4");
    const int reach = k <= 2 ? 1 : 2;
    const double hrel = step_for(opt.fd_step, k);

    // unit directions with their surface weights
    std::vector<std::vector<double>> dirs;
    std::vector<double> dw;
    if (d == 1) {
        dirs = {{1.0}, {-1.0}};
        dw = {1.0, 1.0};
    } else if (d == 2) {
        for (int a = 0; a < angular; ++a) {
            const double th = 2.0 * pi * (a + 0.5) / angular;
            dirs.push_back({std::cos(th), std::sin(th)});
            dw.push_back(2.0 * pi / angular);
        }
    } else if (d == 3) {
        for (Eigen::Index c = 0; c < gc.nodes.size(); ++c)
            for (int a = 0; a < angular; ++a) {
                const double ph = 2.0 * pi * (a + 0.5) / angular;
                const double z = gc.nodes[c], rho = std::sqrt(1.0 - z * z);
                dirs.push_back({rho * std::cos(ph), rho * std::sin(ph), z});
                dw.push_back(gc.weights[c] * 2.0 * pi / angular);
            }
    } else {
        throw UnsupportedMode("annular condition implemented for d <= 3");
    }

    std::vector<std::vector<double>> block(shells.boxes.size(), std::vector<double>(ng, 0.0));
    parallel_for(shells.boxes.size(), [&](std::size_t b) {
        const double R = std::ldexp(1.0, shells.boxes[b][0]);
        std::vector<double> xi(d), h(d);
        for (std::size_t di = 0; di < dirs.size(); ++di)
            for (Eigen::Index q = 0; q < gr.nodes.size(); ++q) {
                const double r = R * gr.nodes[q];
                const double w = dw[di] * R * gr.weights[q] * std::pow(r, static_cast<double>(d) - 1.0);
                for (std::size_t c = 0; c < d; ++c) {
                    xi[c] = r * dirs[di][c];
                    h[c] = hrel * (std::abs(xi[c]) > 1e-3 * r ? std::abs(xi[c]) : r);
                }
                std::vector<cplx> vals;
                if (!m.derivative) vals = stencil_values(m, xi, reach, h, false);
                for (std::size_t g = 0; g < ng; ++g) {
                    int order = 0;
                    for (int v : gammas[g]) order += v;
                    cplx v;
                    if (m.derivative) {
                        v = m.derivative(gammas[g], xi);
                    } else {
                        std::vector<std::array<double, 5>> rows;
                        for (std::size_t c = 0; c < d; ++c) rows.push_back(plain_stencil(gammas[g][c], h[c]));
                        v = combine(vals, rows);
                    }
                    check_finite(v, gammas[g]);
                    block[b][g] += w * std::norm(v) * std::pow(R, 2.0 * order - static_cast<double>(d));
                }
            }
    });

    std::vector<std::vector<double>> running(ng, std::vector<double>(static_cast<std::size_t>(shells.count), 0.0));
    for (std::size_t b = 0; b < block.size(); ++b)
        for (std::size_t g = 0; g < ng; ++g) {
            auto& v = running[g][static_cast<std::size_t>(shells.shell[b])];
            v = std::max(v, block[b][g]);
        }
    for (auto& rs : running) {
        for (std::size_t q = 1; q < rs.size(); ++q) rs[q] = std::max(rs[q], rs[q - 1]);
        for (auto& v : rs) v = std::sqrt(v);
    }
    return running;
}

std::vector<std::vector<int>> gammas_up_to(std::size_t d, int order)
{
    std::vector<std::vector<int>> out;
    for (const auto& g : multi_indices_below(std::vector<int>(d, order))) {
        int s = 0;
        for (int v : g) s += v;
        if (s <= order) out.push_back(g);
    }
    return out;
}

}  // namespace

HormanderResult hormander_norm(const Symbol& m, int order, std::size_t d, const HormanderOptions& opt)
{
    if (d < 1 || d > 3) throw UnsupportedMode("annular condition implemented for d <= 3");
    if (order < 0) order = static_cast<int>(d / 2) + 1;
    if (opt.radial_nodes < 2 || opt.angular_nodes < 4 || opt.refinements < 1) throw ParameterError("invalid quadrature sizes");
    HormanderResult res;
    res.gammas = gammas_up_to(d, order);
    const int levels = d == 1 ? 1 : opt.refinements;
    std::vector<std::vector<double>> prev, cur;
    for (int l = 0; l < levels; ++l) {
        prev = cur;
        cur = hormander_sweep(m, res.gammas, d, opt.angular_nodes << l, opt);
        if (l == 0) {
            for (const auto& rs : cur) res.values.push_back(rs.back());
            for (const auto& rs : cur)
                if (!last_three_close(rs)) res.stabilized = false;
        }
    }
    for (std::size_t g = 0; g < res.gammas.size(); ++g) {
        res.refined_values.push_back(cur[g].back());
        if (!prev.empty()) {
            const double a = prev[g].back(), b = cur[g].back();
            if (std::abs(b - a) > opt.refine_tol * std::max(std::abs(b), 1e-300)) res.refinement_stable = false;
        }
        if (!last_three_close(cur[g])) res.stabilized = false;
        res.total = std::max(res.total, res.refined_values[g]);
    }
    res.divergent = !res.stabilized || !res.refinement_stable;
    return res;
}

Symbol boundary_symbol(const Symbol& m, const std::vector<int>& eps, const std::vector<double>& phi)
{
    if (eps.size() != phi.size()) throw ShapeError("eps and phi differ in dimension");
    bool identity = true;
    for (std::size_t r = 0; r < eps.size(); ++r) {
        if (eps[r] != 1 && eps[r] != -1) throw ParameterError("eps entries must be +1 or -1");
        if (!(phi[r] >= 0.0)) throw ParameterError("phi must be nonnegative");
        if (phi[r] > 0.0) {
            identity = false;
            if (r >= m.holomorphic_sector.size() || !(phi[r] < m.holomorphic_sector[r]))
                throw DomainError("angle " + std::to_string(phi[r]) + " on axis " + std::to_string(r) +
                                  " is not inside the holomorphic sector");
        }
    }
    if (identity) return m;
    if (!m.eval_complex) throw UnsupportedMode("symbol has no holomorphic extension");
    std::vector<cplx> rot(eps.size());
    for (std::size_t r = 0; r < eps.size(); ++r) rot[r] = std::polar(1.0, eps[r] * phi[r]);
    Symbol out;
    auto f = m.eval_complex;
    out.eval_complex = [f, rot](std::span<const cplx> z) {
        std::vector<cplx> w(z.size());
        for (std::size_t r = 0; r < z.size(); ++r) w[r] = rot[r] * z[r];
        return f(w);
    };
    out.eval = [f, rot](std::span<const double> lam) {
        if (lam.size() != rot.size()) throw ShapeError("boundary symbol evaluated with wrong dimension");
        std::vector<cplx> w(lam.size());
        for (std::size_t r = 0; r < lam.size(); ++r) w[r] = rot[r] * lam[r];
        return f(w);
    };
    for (std::size_t r = 0; r < eps.size(); ++r)
        out.holomorphic_sector.push_back(r < m.holomorphic_sector.size() ? m.holomorphic_sector[r] - phi[r] : 0.0);
    out.bound = m.bound;
    out.name = m.name + "@boundary";
    return out;
}

double critical_angle(double p)
{
    if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("critical angle needs 1 < p < infinity");
    return std::asin(std::abs(2.0 / p - 1.0));
}

DiscreteMarcinkiewiczResult discrete_marcinkiewicz_check(const std::function<cplx(long, long)>& m, int k_max)
{
    if (k_max < 1 || k_max > 14) throw ParameterError("k_max must be in [1, 14]");
    DiscreteMarcinkiewiczResult res;
    auto block = [](int k, auto&& fn) {
        const long lo = 1L << (k - 1), hi = 1L << k;
        for (long j = lo; j < hi; ++j) {
            fn(j);
            fn(-j);
        }
    };
    const long J = 1L << k_max;
    res.running_mixed.assign(static_cast<std::size_t>(k_max), 0.0);
    res.running_first.assign(static_cast<std::size_t>(k_max), 0.0);
    res.running_second.assign(static_cast<std::size_t>(k_max), 0.0);
    for (int k1 = 1; k1 <= k_max; ++k1)
        for (int k2 = 1; k2 <= k_max; ++k2) {
            double s = 0.0;
            block(k1, [&](long j1) {
                block(k2, [&](long j2) { s += std::abs(m(j1, j2) - m(j1 + 1, j2) - m(j1, j2 + 1) + m(j1 + 1, j2 + 1)); });
            });
            auto& v = res.running_mixed[static_cast<std::size_t>(std::max(k1, k2) - 1)];
            v = std::max(v, s);
        }
    for (int k = 1; k <= k_max; ++k)
        for (long other = -J; other < J; ++other) {
            double s1 = 0.0, s2 = 0.0;
            block(k, [&](long j) {
                s1 += std::abs(m(j + 1, other) - m(j, other));
                s2 += std::abs(m(other, j + 1) - m(other, j));
            });
            auto& a = res.running_first[static_cast<std::size_t>(k - 1)];
            auto& b = res.running_second[static_cast<std::size_t>(k - 1)];
            a = std::max(a, s1);
            b = std::max(b, s2);
        }
    for (auto* v : {&res.running_mixed, &res.running_first, &res.running_second})
        for (std::size_t q = 1; q < v->size(); ++q) (*v)[q] = std::max((*v)[q], (*v)[q - 1]);
    res.sup_mixed = res.running_mixed.back();
    res.sup_first = res.running_first.back();
    res.sup_second = res.running_second.back();
    res.stabilized_mixed = last_three_close(res.running_mixed);
    res.stabilized_first = last_three_close(res.running_first);
    res.stabilized_second = last_three_close(res.running_second);
    return res;
}

}  // namespace specmult
