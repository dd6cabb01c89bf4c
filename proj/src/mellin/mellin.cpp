#include "specmult/mellin.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace specmult {

namespace {

std::size_t product(const std::vector<std::size_t>& s)
{
    std::size_t n = 1;
    for (auto v : s) n *= v;
    return n;
}

RVec trapezoid_weights(std::size_t n, double h)
{
    RVec w = RVec::Constant(static_cast<Eigen::Index>(n), h);
    if (n > 1) {
        w[0] *= 0.5;
        w[static_cast<Eigen::Index>(n) - 1] *= 0.5;
    }
    return w;
}

// True when some sample on the boundary of the box exceeds rel * peak.
bool boundary_exceeds(const CVec& v, const std::vector<std::size_t>& shape, double rel)
{
    if (v.size() == 0) return false;
    const double peak = v.cwiseAbs().maxCoeff();
    if (peak == 0.0) return false;
    std::vector<std::size_t> idx(shape.size(), 0);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        std::size_t rem = static_cast<std::size_t>(k);
        bool edge = false;
        for (std::size_t a = shape.size(); a-- > 0;) {
            const std::size_t i = rem % shape[a];
            rem /= shape[a];
            if (i == 0 || i + 1 == shape[a]) edge = true;
        }
        if (edge && std::abs(v[k]) > rel * peak) return true;
    }
    return false;
}

}  // namespace

double LogAxis::step() const
{
    return count > 1 ? (std::log(lambda_max) - std::log(lambda_min)) / static_cast<double>(count - 1) : 0.0;
}
double LogAxis::s(std::size_t i) const { return std::log(lambda_min) + step() * static_cast<double>(i); }
double LogAxis::lambda(std::size_t i) const { return std::exp(s(i)); }
void LogAxis::validate() const
{
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min)) throw ParameterError("log axis needs 0 < lambda_min < lambda_max");
    if (count < 2) throw ParameterError("log axis needs at least two points");
}

double UAxis::step() const { return count > 1 ? (u_max - u_min) / static_cast<double>(count - 1) : 0.0; }
double UAxis::u(std::size_t i) const { return u_min + step() * static_cast<double>(i); }
void UAxis::validate() const
{
    if (!(u_max > u_min)) throw ParameterError("u axis needs u_min < u_max");
    if (count < 2) throw ParameterError("u axis needs at least two points");
}

std::vector<std::size_t> LogGridSymbol::shape() const
{
    std::vector<std::size_t> s;
    for (const auto& a : axes) s.push_back(a.count);
    return s;
}

void LogGridSymbol::validate() const
{
    if (axes.empty()) throw ParameterError("empty log grid");
    for (const auto& a : axes) a.validate();
    if (static_cast<std::size_t>(samples.size()) != product(shape())) throw ShapeError("log grid sample count mismatch");
}

std::vector<std::size_t> MellinGrid::shape() const
{
    std::vector<std::size_t> s;
    for (const auto& a : axes) s.push_back(a.count);
    return s;
}

LogGridSymbol sample_log_grid(const Symbol& m, const std::vector<LogAxis>& axes)
{
    LogGridSymbol g;
    g.axes = axes;
    if (axes.empty()) throw ParameterError("empty log grid");
    for (const auto& a : axes) a.validate();
    const auto shape = g.shape();
    const std::size_t n = product(shape);
    g.samples.resize(static_cast<Eigen::Index>(n));
    std::vector<double> lam(axes.size());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t rem = k;
        for (std::size_t a = axes.size(); a-- > 0;) {
            lam[a] = axes[a].lambda(rem % shape[a]);
            rem /= shape[a];
        }
        const cplx v = m(lam);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("symbol not finite on the log grid");
        g.samples[static_cast<Eigen::Index>(k)] = v;
    }
    g.decay_warning = boundary_exceeds(g.samples, shape, 1e-12);
    return g;
}

LogGridSymbol import_symbol_csv(const std::string& path, const std::vector<LogAxis>& axes)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    LogGridSymbol g;
    g.axes = axes;
    if (axes.empty()) throw ParameterError("empty log grid");
    for (const auto& a : axes) a.validate();
    const auto shape = g.shape();
    const std::size_t n = product(shape);
    const std::size_t d = axes.size();
    g.samples.resize(static_cast<Eigen::Index>(n));
    std::string line;
    std::size_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) numeric = false;
            vals.push_back(v);
        }
        if (!numeric) {
            if (k == 0) continue;  // header
            throw IoError("non-numeric row in " + path);
        }
        if (vals.size() != d + 1 && vals.size() != d + 2) throw IoError("expected " + std::to_string(d + 1) + " or " + std::to_string(d + 2) + " columns");
        if (k >= n) throw IoError("too many rows in " + path);
        std::size_t rem = k;
        for (std::size_t a = d; a-- > 0;) {
            const double want = axes[a].lambda(rem % shape[a]);
            rem /= shape[a];
            if (std::abs(vals[a] - want) > 1e-9 * want) throw IoError("row " + std::to_string(k) + " is off the log grid");
        }
        g.samples[static_cast<Eigen::Index>(k)] = cplx(vals[d], vals.size() == d + 2 ? vals[d + 1] : 0.0);
        ++k;
    }
    if (k != n) throw IoError("expected " + std::to_string(n) + " rows, found " + std::to_string(k));
    g.decay_warning = boundary_exceeds(g.samples, shape, 1e-12);
    return g;
}

cplx mellin_transform(const LogGridSymbol& m, std::span<const double> u)
{
    m.validate();
    if (u.size() != m.d()) throw ShapeError("u has wrong dimension");
    std::vector<UAxis> axes;
    for (double v : u) axes.push_back(UAxis{v, v + 1.0, 2});
    const auto g = mellin_transform(m, axes);
    // first entry of each axis is the requested point
    return g.values[0];
}

MellinGrid mellin_transform(const LogGridSymbol& m, const std::vector<UAxis>& axes)
{
    m.validate();
    if (axes.size() != m.d()) throw ShapeError("u grid has wrong dimension");
    CVec x = m.samples;
    auto shape = m.shape();
    for (std::size_t r = 0; r < axes.size(); ++r) {
        axes[r].validate();
        const auto& la = m.axes[r];
        const RVec w = trapezoid_weights(la.count, la.step());
        CMat E(static_cast<Eigen::Index>(axes[r].count), static_cast<Eigen::Index>(la.count));
        for (std::size_t k = 0; k < axes[r].count; ++k) {
            const double uk = axes[r].u(k);
            for (std::size_t i = 0; i < la.count; ++i)
                E(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
                    w[static_cast<Eigen::Index>(i)] * std::polar(1.0, -uk * la.s(i));
        }
        x = apply_along_axis(E, x, shape, r);
        shape[r] = axes[r].count;
    }
    MellinGrid g;
    g.axes = axes;
    g.values = std::move(x);
    g.decay_warning = m.decay_warning;
    return g;
}

LogGridSymbol mellin_inverse(const MellinGrid& values, const std::vector<LogAxis>& axes)
{
    if (values.axes.empty()) throw ParameterError("empty u grid");
    if (axes.size() != values.d()) throw ShapeError("log grid has wrong dimension");
    auto shape = values.shape();
    if (static_cast<std::size_t>(values.values.size()) != product(shape)) throw ShapeError("u grid value count mismatch");
    CVec x = values.values;
    for (std::size_t r = 0; r < axes.size(); ++r) {
        axes[r].validate();
        const auto& ua = values.axes[r];
        ua.validate();
        const RVec w = trapezoid_weights(ua.count, ua.step());
        CMat E(static_cast<Eigen::Index>(axes[r].count), static_cast<Eigen::Index>(ua.count));
        for (std::size_t i = 0; i < axes[r].count; ++i) {
            const double si = axes[r].s(i);
            for (std::size_t k = 0; k < ua.count; ++k)
                E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                    w[static_cast<Eigen::Index>(k)] / (2.0 * pi) * std::polar(1.0, ua.u(k) * si);
        }
        x = apply_along_axis(E, x, shape, r);
        shape[r] = axes[r].count;
    }
    LogGridSymbol g;
    g.axes = axes;
    g.samples = std::move(x);
    g.decay_warning = boundary_exceeds(values.values, values.shape(), 1e-10);
    return g;
}

double log_l2_norm_sq(const LogGridSymbol& m)
{
    m.validate();
    CVec x = m.samples.cwiseAbs2().cast<cplx>();
    auto shape = m.shape();
    for (std::size_t r = 0; r < m.d(); ++r) {
        const RVec w = trapezoid_weights(m.axes[r].count, m.axes[r].step());
        x = apply_along_axis(w.transpose().cast<cplx>(), x, shape, r);
        shape[r] = 1;
    }
    return x[0].real();
}

double u_l2_norm_sq(const MellinGrid& v)
{
    CVec x = v.values.cwiseAbs2().cast<cplx>();
    auto shape = v.shape();
    for (std::size_t r = 0; r < v.d(); ++r) {
        const RVec w = trapezoid_weights(v.axes[r].count, v.axes[r].step());
        x = apply_along_axis(w.transpose().cast<cplx>(), x, shape, r);
        shape[r] = 1;
    }
    return x[0].real();
}

}  // namespace specmult
