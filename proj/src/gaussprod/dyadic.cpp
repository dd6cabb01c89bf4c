#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "specmult/gaussprod.hpp"

namespace specmult {

namespace {

void check_product(const RVec& f, std::size_t n1, const DyadicSystem& dy)
{
    if (n1 == 0 || static_cast<std::size_t>(f.size()) != n1 * dy.space.size())
        throw ShapeError("function size differs from n1 x |Y|");
}

// mu-average of f(x1, .) over the cube
double cube_average(const RVec& f, std::size_t x1, const DyadicCube& q, const HomogeneousSpace& sp, bool absolute)
{
    const std::size_t n2 = sp.size();
    double s = 0.0;
    for (std::size_t y = q.begin; y < q.end; ++y) {
        const double v = f[static_cast<Eigen::Index>(x1 * n2 + y)];
        s += sp.mass[static_cast<Eigen::Index>(y)] * (absolute ? std::abs(v) : v);
    }
    return s / q.mass;
}

}  // namespace

std::size_t HomogeneousSpace::dist(std::size_t i, std::size_t j) const
{
    const std::size_t d = i > j ? i - j : j - i;
    return cyclic ? std::min(d, size() - d) : d;
}

std::vector<std::size_t> HomogeneousSpace::ball(std::size_t x, double r) const
{
    if (x >= size()) throw ParameterError("ball center outside the space");
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < size(); ++y)
        if (static_cast<double>(dist(x, y)) <= r) out.push_back(y);
    return out;
}

double HomogeneousSpace::ball_mass(std::size_t x, double r) const
{
    double m = 0.0;
    for (auto y : ball(x, r)) m += mass[static_cast<Eigen::Index>(y)];
    return m;
}

HomogeneousSpace cyclic_space(std::size_t K)
{
    if (K < 2) throw ParameterError("cyclic space needs K >= 2");
    return {RVec::Ones(static_cast<Eigen::Index>(K)), true};
}

double DyadicSystem::doubling_constant() const
{
    double c = 1.0;
    for (std::size_t l = 1; l < generations.size(); ++l)
        for (const auto& q : generations[l]) c = std::max(c, generations[l - 1][q.parent].mass / q.mass);
    return c;
}

double DyadicSystem::ball_constant() const
{
    double c = 1.0;
    for (const auto& gen : generations)
        for (const auto& q : gen) c = std::max(c, q.mass / space.ball_mass(q.center, q.inner_radius));
    return c;
}

std::size_t DyadicSystem::cube_of(std::size_t l, std::size_t x) const
{
    const auto& gen = generations.at(l);
    for (std::size_t i = 0; i < gen.size(); ++i)
        if (x >= gen[i].begin && x < gen[i].end) return i;
    throw ParameterError("point outside the dyadic system");
}

void DyadicSystem::validate() const
{
    if (generations.empty()) throw ShapeError("dyadic system has no generations");
    const std::size_t n = space.size();
    for (std::size_t l = 0; l < generations.size(); ++l) {
        std::vector<int> hit(n, 0);
        for (const auto& q : generations[l]) {
            if (q.begin >= q.end || q.end > n) throw ShapeError("cube has an invalid range");
            for (std::size_t y = q.begin; y < q.end; ++y) ++hit[y];
            if (l > 0) {
                const auto& p = generations[l - 1].at(q.parent);
                if (q.begin < p.begin || q.end > p.end) throw ShapeError("cube is not inside its parent");
            }
            for (auto y : space.ball(q.center, q.inner_radius))
                if (y < q.begin || y >= q.end) throw ShapeError("inner ball leaves its cube");
        }
        for (int h : hit)
            if (h != 1) throw ShapeError("generation " + std::to_string(l) + " is not a partition");
    }
    for (const auto& q : generations.back())
        if (q.end - q.begin != 1) throw ShapeError("finest generation must be single points");
}

DyadicSystem binary_dyadic_system(const HomogeneousSpace& space, std::size_t G)
{
    const std::size_t n = space.size();
    if (G < 1 || G > 40) throw ParameterError("generation count must lie in [1, 40]");
    if (space.mass.size() == 0 || (space.mass.array() <= 0.0).any()) throw ParameterError("point masses must be positive");
    const std::size_t top = std::size_t{1} << (G - 1);
    if (n % top != 0) throw ParameterError("space size must be a multiple of 2^(G-1)");
    DyadicSystem dy;
    dy.space = space;
    for (std::size_t l = 0; l < G; ++l) {
        const std::size_t size = top >> l;
        std::vector<DyadicCube> gen;
        for (std::size_t i = 0; i * size < n; ++i) {
            DyadicCube q;
            q.generation = l;
            q.index = i;
            q.begin = i * size;
            q.end = q.begin + size;
            q.parent = l == 0 ? 0 : i / 2;
            q.mass = space.mass.segment(static_cast<Eigen::Index>(q.begin), static_cast<Eigen::Index>(size)).sum();
            q.center = q.begin + (size - 1) / 2;
            q.inner_radius = static_cast<double>((size - 1) / 2);
            gen.push_back(q);
        }
        dy.generations.push_back(std::move(gen));
    }
    dy.validate();
    return dy;
}

RVec dyadic_maximal(const RVec& f, std::size_t n1, const DyadicSystem& dy)
{
    check_product(f, n1, dy);
    const std::size_t n2 = dy.space.size();
    RVec out = RVec::Zero(f.size());
    for (std::size_t x1 = 0; x1 < n1; ++x1)
        for (const auto& gen : dy.generations)
            for (const auto& q : gen) {
                const double a = cube_average(f, x1, q, dy.space, true);
                for (std::size_t y = q.begin; y < q.end; ++y) {
                    double& o = out[static_cast<Eigen::Index>(x1 * n2 + y)];
                    o = std::max(o, a);
                }
            }
    return out;
}

double cz_min_threshold(const RVec& f, std::size_t n1, const DyadicSystem& dy)
{
    check_product(f, n1, dy);
    double m = 0.0;
    for (std::size_t x1 = 0; x1 < n1; ++x1)
        for (const auto& q : dy.generations.front()) m = std::max(m, cube_average(f, x1, q, dy.space, true));
    return m;
}

CZResult cz_decompose(const RVec& f, const RVec& nu, double s, const DyadicSystem& dy)
{
    const std::size_t n1 = static_cast<std::size_t>(nu.size());
    check_product(f, n1, dy);
    if ((nu.array() <= 0.0).any()) throw ParameterError("nu weights must be positive");
    if (!(s > 0.0)) throw ParameterError("threshold must be positive");
    if ((f.array() < 0.0).any()) throw DomainError("cz_decompose needs a nonnegative function");
    const double smin = cz_min_threshold(f, n1, dy);
    if (s < smin)
        throw ParameterError("threshold " + std::to_string(s) + " is below the top-cube average " + std::to_string(smin));
    const std::size_t n2 = dy.space.size();
    CZResult res;
    res.threshold = s;
    res.C_mu = dy.doubling_constant();
    res.g = f;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
    for (std::size_t x1 = 0; x1 < n1; ++x1) {
        // covered[y]: some ancestor cube of y was already chosen
        std::vector<bool> covered(n2, false);
        for (const auto& gen : dy.generations)
            for (const auto& q : gen) {
                if (covered[q.begin]) continue;
                const double a = cube_average(f, x1, q, dy.space, false);
                if (!(a > s)) continue;
                const auto key = std::make_pair(q.generation, q.index);
                auto it = slot.find(key);
                if (it == slot.end()) {
                    CZPart p;
                    p.generation = q.generation;
                    p.index = q.index;
                    p.F.assign(n1, false);
                    p.b = RVec::Zero(f.size());
                    res.parts.push_back(std::move(p));
                    it = slot.emplace(key, res.parts.size() - 1).first;
                }
                CZPart& p = res.parts[it->second];
                p.F[x1] = true;
                for (std::size_t y = q.begin; y < q.end; ++y) {
                    const auto k = static_cast<Eigen::Index>(x1 * n2 + y);
                    p.b[k] = f[k] - a;
                    res.g[k] = a;
                    covered[y] = true;
                }
            }
    }
    return res;
}

CZProperties cz_properties(const RVec& f, const RVec& nu, const CZResult& cz, const DyadicSystem& dy)
{
    const std::size_t n1 = static_cast<std::size_t>(nu.size());
    check_product(f, n1, dy);
    const std::size_t n2 = dy.space.size();
    const RVec& mu = dy.space.mass;
    const double s = cz.threshold, C = cz.C_mu;
    auto l1 = [&](const RVec& h) {
        double t = 0.0;
        for (std::size_t a = 0; a < n1; ++a)
            for (std::size_t y = 0; y < n2; ++y) t += nu[static_cast<Eigen::Index>(a)] * mu[static_cast<Eigen::Index>(y)] * std::abs(h[static_cast<Eigen::Index>(a * n2 + y)]);
        return t;
    };
    CZProperties pr;
    const double fl1 = l1(f);
    double tot = l1(cz.g);
    RVec recon = cz.g;
    for (const auto& p : cz.parts) {
        tot += l1(p.b);
        recon += p.b;
    }
    pr.l1_ratio = fl1 > 0.0 ? tot / fl1 : 0.0;
    const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
    pr.i = tot <= 4.0 * fl1 * (1.0 + 1e-12) && (recon - f).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    pr.g_max_over_s = cz.g.cwiseAbs().maxCoeff() / s;
    pr.ii = pr.g_max_over_s <= C * (1.0 + 1e-12);

    pr.iii = pr.iv = true;
    std::vector<int> owner(f.size(), -1);
    for (std::size_t j = 0; j < cz.parts.size(); ++j) {
        const auto& p = cz.parts[j];
        const auto& q = dy.generations.at(p.generation).at(p.index);
        for (std::size_t a = 0; a < n1; ++a) {
            double mean = 0.0, avg = 0.0;
            for (std::size_t y = 0; y < n2; ++y) {
                const auto k = static_cast<Eigen::Index>(a * n2 + y);
                const bool inS = p.F[a] && y >= q.begin && y < q.end;
                if (!inS && p.b[k] != 0.0) pr.iii = false;
                if (inS) {
                    if (owner[static_cast<std::size_t>(k)] != -1) pr.iii = false;
                    owner[static_cast<std::size_t>(k)] = static_cast<int>(j);
                    avg += mu[static_cast<Eigen::Index>(y)] * f[k];
                }
                mean += mu[static_cast<Eigen::Index>(y)] * p.b[k];
            }
            if (std::abs(mean) > 1e-12 * scale * q.mass) pr.iii = false;
            if (p.F[a]) {
                avg /= q.mass;
                if (!(avg >= s / C * (1.0 - 1e-12) && avg <= C * s * (1.0 + 1e-12))) pr.iv = false;
            }
        }
    }
    for (std::size_t a = 0; a < n1; ++a) {
        double covered = 0.0, mass_f = 0.0;
        for (std::size_t y = 0; y < n2; ++y) {
            if (owner[a * n2 + y] != -1) covered += mu[static_cast<Eigen::Index>(y)];
            mass_f += mu[static_cast<Eigen::Index>(y)] * f[static_cast<Eigen::Index>(a * n2 + y)];
        }
        if (covered > mass_f / s * (1.0 + 1e-12)) pr.iii = false;
    }
    const RVec D = dyadic_maximal(f, n1, dy);
    pr.v = true;
    for (Eigen::Index k = 0; k < f.size(); ++k)
        if ((D[k] > s) != (owner[static_cast<std::size_t>(k)] != -1)) pr.v = false;
    return pr;
}

std::string cz_to_json(const CZResult& cz, const RVec& f, const RVec& nu, const DyadicSystem& dy)
{
    const std::size_t n1 = static_cast<std::size_t>(nu.size());
    const std::size_t n2 = dy.space.size();
    auto l1 = [&](const RVec& h) {
        double t = 0.0;
        for (std::size_t a = 0; a < n1; ++a)
            for (std::size_t y = 0; y < n2; ++y) t += nu[static_cast<Eigen::Index>(a)] * dy.space.mass[static_cast<Eigen::Index>(y)] * std::abs(h[static_cast<Eigen::Index>(a * n2 + y)]);
        return t;
    };
    nlohmann::ordered_json j;
    j["threshold"] = cz.threshold;
    j["C_mu"] = cz.C_mu;
    j["cubes"] = nlohmann::ordered_json::array();
    double bsum = 0.0;
    for (const auto& p : cz.parts) {
        nlohmann::ordered_json c;
        c["generation"] = p.generation;
        c["index"] = p.index;
        std::vector<int> mask(p.F.begin(), p.F.end());
        c["F_mask"] = mask;
        j["cubes"].push_back(c);
        bsum += l1(p.b);
    }
    j["norms"] = {{"f_l1", l1(f)}, {"g_l1", l1(cz.g)}, {"b_l1_sum", bsum}, {"g_max", cz.g.cwiseAbs().maxCoeff()}};
    return j.dump(2);
}

}  // namespace specmult
