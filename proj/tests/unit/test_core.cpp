#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>

#include "specmult/bases.hpp"
#include "specmult/core.hpp"

using namespace specmult;

namespace {

CVec random_span_function(const SpectralSystem& sys, std::mt19937_64& rng, double decay = 0.0)
{
    std::normal_distribution<double> nd;
    CVec c(static_cast<Eigen::Index>(sys.spectrum_size()));
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = cplx(nd(rng), nd(rng)) / std::pow(1.0 + k, decay);
    return sys.synthesize(c);
}

double rel_l2(const CVec& a, const CVec& b, const RVec& w)
{
    return weighted_lp_norm(a - b, w, 2.0) / weighted_lp_norm(b, w, 2.0);
}

double max_entry_diff(const CMat& a, const CMat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("core")
{
    TEST_CASE("weighted grid validation")
    {
        CHECK_NOTHROW(make_grid({0.0, 1.0}, RVec::Constant(2, 0.5), "ok"));
        CHECK_THROWS_AS(make_grid({0.0, 1.0}, RVec::Constant(2, 0.0), "bad"), ParameterError);
        CHECK_THROWS_AS(make_grid({0.0, 1.0, 2.0}, RVec::Constant(2, 1.0), "bad"), ShapeError);
        auto g = product_grid({make_grid({0, 1}, RVec::Constant(2, 0.5), "a"), make_grid({0, 1, 2}, RVec::Constant(3, 2.0), "b")});
        CHECK(g.size() == 6);
        CHECK(g.dim == 2);
        CHECK(g.total_mass() == doctest::Approx(6.0));
        CHECK(g.coord(5, 0) == 1.0);
        CHECK(g.coord(5, 1) == 2.0);
    }

    TEST_CASE("analysis/synthesis round trip on the retained span")
    {
        std::mt19937_64 rng(1);
        auto sys = build_system({HermiteBasis::build(12), LaguerreBasis::build(6, 0.5)});
        CVec f = random_span_function(sys, rng);
        CHECK(rel_l2(sys.synthesize(sys.analyze(f)), f, sys.grid().weights) <= 1e-10);
        CVec c = sys.analyze(f);
        CHECK((sys.analyze(sys.synthesize(c)) - c).norm() / c.norm() <= 1e-10);
    }

    TEST_CASE("apply_multiplier: identity and diagonal action")
    {
        std::mt19937_64 rng(2);
        auto sys = build_system({HermiteBasis::build(10), HermiteBasis::build(8)});
        CVec f = random_span_function(sys, rng);
        auto one = make_symbol([](std::span<const double>) { return cplx(1.0); }, "one");
        CHECK(rel_l2(apply_multiplier(sys, one, f), f, sys.grid().weights) <= 1e-10);

        const double t1 = 0.3, t2 = 0.7;
        auto heat = make_symbol([&](std::span<const double> l) { return cplx(std::exp(-t1 * l[0] - t2 * l[1])); });
        // eigenfunction with tuple (3, 5)
        CVec c = CVec::Zero(static_cast<Eigen::Index>(sys.spectrum_size()));
        c[3 * 8 + 5] = 1.0;
        CVec phi = sys.synthesize(c);
        CVec out = apply_multiplier(sys, heat, phi);
        CHECK(rel_l2(out, phi * std::exp(-t1 * 3 - t2 * 5), sys.grid().weights) <= 1e-10);
    }

    TEST_CASE("ratio symbol on the ATL-filtered spectrum lies in [0,1]")
    {
        auto sys = build_system({HermiteBasis::build(6), LaguerreBasis::build(5, 0.0)}).atl_filtered();
        auto m = make_symbol([](std::span<const double> l) { return cplx(l[0] / (l[0] + l[1])); });
        CVec diag = symbol_diagonal(sys, m);
        for (Eigen::Index k = 0; k < diag.size(); ++k) {
            CHECK(diag[k].real() >= 0.0);
            CHECK(diag[k].real() <= 1.0);
        }
        auto unfiltered = build_system({HermiteBasis::build(6), LaguerreBasis::build(5, 0.0)});
        CHECK_THROWS_AS(symbol_diagonal(unfiltered, m), DomainError);
    }

    TEST_CASE("functional calculus is multiplicative on coefficients")
    {
        std::mt19937_64 rng(3);
        auto sys = build_system({HermiteBasis::build(9), JacobiBasis::build(7, 0.5, -0.25)});
        CVec f = random_span_function(sys, rng);
        auto m1 = make_symbol([](std::span<const double> l) { return cplx(1.0 / (1.0 + l[0]), l[1] / (2.0 + l[1])); });
        auto m2 = make_symbol([](std::span<const double> l) { return std::polar(1.0, l[0] - 0.3 * l[1]); });
        auto m12 = make_symbol([&](std::span<const double> l) { return m1(l) * m2(l); });
        CVec a = sys.analyze(apply_multiplier(sys, m12, f));
        CVec b = sys.analyze(apply_multiplier(sys, m1, apply_multiplier(sys, m2, f)));
        CHECK((a - b).norm() / a.norm() <= 1e-10);
    }

    TEST_CASE("imaginary powers")
    {
        auto ou = build_system({HermiteBasis::build(16)});
        const double zero[] = {0.0};
        CHECK_THROWS_AS(imaginary_powers(ou, zero), DomainError);

        auto sh = ou.shifted(1.0);
        auto id = imaginary_powers(sh, zero);
        CMat proj = sh.atl_projection();
        CHECK(max_entry_diff(id.matrix, proj) <= 1e-12 * proj.cwiseAbs().maxCoeff());

        const double v[] = {2.5};
        auto op = imaginary_powers(sh, v);
        CHECK(lp_operator_norm(op, 2.0, NormMode::exact) == doctest::Approx(1.0).epsilon(1e-12));

        auto m = make_symbol([&](std::span<const double> l) { return std::exp(cplx(0, v[0] * std::log(l[0] + 1.0))); });
        auto ref = multiplier_operator(ou, m);
        CHECK(max_entry_diff(op.matrix, ref.matrix) <= 1e-10 * ref.matrix.cwiseAbs().maxCoeff());

        // group law on a two-axis system
        auto sys = build_system({HermiteBasis::build(6), LaguerreBasis::build(5, 1.0)}).shifted(0.5);
        const double u[] = {0.7, -1.1}, w[] = {-0.4, 2.0}, uw[] = {0.3, 0.9};
        auto a = imaginary_powers(sys, u), b = imaginary_powers(sys, w), c = imaginary_powers(sys, uw);
        CMat ab = a.matrix * b.matrix;
        CHECK(max_entry_diff(ab, c.matrix) <= 1e-12 * std::max(1.0, c.matrix.cwiseAbs().maxCoeff()));
    }

    TEST_CASE("semigroup")
    {
        auto sys = build_system({HermiteBasis::build(10), LaguerreBasis::build(6, 0.0)});
        const double s[] = {0.2, 0.4}, t[] = {0.5, 0.1}, st[] = {0.7, 0.5};
        auto es = semigroup(sys, s), et = semigroup(sys, t), est = semigroup(sys, st);
        CMat prod = es.matrix * et.matrix;
        CHECK(max_entry_diff(prod, est.matrix) <= 1e-10 * est.matrix.cwiseAbs().maxCoeff());

        const double tiny[] = {1e-13, 1e-13};
        auto e0 = semigroup(sys, tiny);
        CMat proj = sys.atl_projection(-1.0);  // keeps every mode
        CHECK(max_entry_diff(e0.matrix, proj) <= 1e-9 * proj.cwiseAbs().maxCoeff());

        const double bad[] = {0.0, 1.0};
        CHECK_THROWS_AS(semigroup(sys, bad), ParameterError);

        auto pois = semigroup(sys, st, SemigroupKind::poisson);
        CHECK(lp_operator_norm(pois, 2.0, NormMode::exact) <= 1.0 + 1e-12);
        CHECK(lp_operator_norm(est, 2.0, NormMode::exact) <= 1.0 + 1e-12);
    }

    TEST_CASE("Hermite heat scales coefficient k by e^{-tk}")
    {
        auto sys = build_system({HermiteBasis::build(12)});
        const double t[] = {0.37};
        auto op = semigroup(sys, t);
        for (int k : {0, 3, 11}) {
            CVec c = CVec::Zero(12);
            c[k] = 1.0;
            CVec out = sys.analyze(op.matrix * sys.synthesize(c));
            CHECK(std::abs(out[k] - std::exp(-0.37 * k)) <= 1e-12);
        }
    }

    TEST_CASE("OU heat semigroup is an L^p contraction on 64 Hermite modes")
    {
        auto sys = build_system({HermiteBasis::build(64)});
        std::mt19937_64 rng(11);
        const double t[] = {0.25};
        auto op = semigroup(sys, t);
        const RVec& w = sys.grid().weights;
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            CVec f = random_span_function(sys, rng, 2.0);
            CVec g = op.matrix * f;
            for (double p : {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()})
                worst = std::max(worst, weighted_lp_norm(g, w, p) / weighted_lp_norm(f, w, p));
        }
        CHECK(worst <= 1.0 + 1e-6);
    }

    TEST_CASE("tensor lift")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> ud(0.2, 2.0);
        std::normal_distribution<double> nd;
        RVec wa(4), wb(5);
        for (int i = 0; i < 4; ++i) wa[i] = ud(rng);
        for (int i = 0; i < 5; ++i) wb[i] = ud(rng);
        auto ga = make_grid({0, 1, 2, 3}, wa, "a");
        auto gb = make_grid({0, 1, 2, 3, 4}, wb, "b");
        auto prod = product_grid({ga, gb});

        OperatorRep fa{CMat(4, 4), ga};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) fa.matrix(i, j) = cplx(nd(rng), nd(rng));
        auto lift = tensor_lift(fa, 0, prod);
        CHECK(lp_operator_norm(lift, 1.0, NormMode::exact) ==
              doctest::Approx(lp_operator_norm(fa, 1.0, NormMode::exact)).epsilon(1e-14));
        CHECK(lp_operator_norm(lift, 2.0, NormMode::exact) ==
              doctest::Approx(lp_operator_norm(fa, 2.0, NormMode::exact)).epsilon(1e-12));

        OperatorRep ia{CMat::Identity(4, 4), ga};
        CHECK(max_entry_diff(tensor_lift(ia, 0, prod).matrix, CMat::Identity(20, 20)) == 0.0);

        OperatorRep fb{CMat(5, 5), gb};
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) fb.matrix(i, j) = cplx(nd(rng), nd(rng));
        auto lb = tensor_lift(fb, 1, prod);
        CMat ab = lift.matrix * lb.matrix, ba = lb.matrix * lift.matrix;
        CHECK(max_entry_diff(ab, ba) <= 1e-14 * ab.cwiseAbs().maxCoeff());

        CHECK_THROWS_AS(tensor_lift(fb, 0, prod), ShapeError);
    }

    TEST_CASE("lp_operator_norm small cases")
    {
        auto g = make_grid({0, 1}, RVec::Constant(2, 1.0), "u2");
        OperatorRep id{CMat::Identity(2, 2), g};
        for (double p : {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
            CHECK(lp_operator_norm(id, p, NormMode::lower) == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(lp_operator_norm(id, p, NormMode::upper) == doctest::Approx(1.0).epsilon(1e-12));
        }
        OperatorRep dg{CMat::Zero(2, 2), g};
        dg.matrix(0, 0) = 2.0;
        dg.matrix(1, 1) = 3.0;
        CHECK(lp_operator_norm(dg, 2.0, NormMode::exact) == doctest::Approx(3.0).epsilon(1e-14));
        CHECK_THROWS_AS(lp_operator_norm(dg, 3.0, NormMode::exact), UnsupportedMode);
    }

    TEST_CASE("power-method lower bound vs brute force on a random 3x3")
    {
        std::mt19937_64 rng(17);
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> ud(0.3, 1.7);
        RVec w(3);
        for (int i = 0; i < 3; ++i) w[i] = ud(rng);
        OperatorRep op{CMat(3, 3), make_grid({0, 1, 2}, w, "w3")};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) op.matrix(i, j) = cplx(nd(rng), nd(rng));
        const double p = 1.5;
        const double lo = lp_operator_norm(op, p, NormMode::lower, 4);
        const double up = lp_operator_norm(op, p, NormMode::upper);
        double brute = 0.0;
        for (int trial = 0; trial < 100000; ++trial) {
            CVec f(3);
            for (int i = 0; i < 3; ++i) f[i] = cplx(nd(rng), nd(rng));
            brute = std::max(brute, weighted_lp_norm(op.matrix * f, w, p) / weighted_lp_norm(f, w, p));
        }
        CHECK(lo <= up * (1 + 1e-12));
        CHECK(lo >= 0.99 * brute);
    }

    TEST_CASE("lower <= exact <= upper agree at p in {1,2,inf}")
    {
        std::mt19937_64 rng(23);
        std::normal_distribution<double> nd;
        RVec w = RVec::LinSpaced(6, 0.5, 1.5);
        OperatorRep op{CMat(6, 6), make_grid({0, 1, 2, 3, 4, 5}, w, "w6")};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) op.matrix(i, j) = cplx(nd(rng), nd(rng));
        for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
            const double e = lp_operator_norm(op, p, NormMode::exact);
            CHECK(std::abs(lp_operator_norm(op, p, NormMode::lower) - e) <= 1e-10 * e);
            CHECK(std::abs(lp_operator_norm(op, p, NormMode::upper) - e) <= 1e-10 * e);
        }
        // matrix-free power method at p = 2 converges to the singular value
        const double e2 = lp_operator_norm(op, 2.0, NormMode::exact);
        PowerOptions opt;
        opt.iterations = 2000;
        opt.rel_tol = 1e-15;
        CHECK(lp_lower_bound(as_linear_map(op), 2.0, 1, opt) == doctest::Approx(e2).epsilon(1e-8));
        CHECK(lp_lower_bound(as_linear_map(op), 2.0, 1) <= e2 * (1 + 1e-12));
    }

    TEST_CASE("operator serialization round trip")
    {
        auto sys = build_system({HermiteBasis::build(5)});
        const double t[] = {0.3};
        auto op = semigroup(sys, t);
        op.matrix(0, 1) += cplx(0, 0.25);
        auto base = (std::filesystem::temp_directory_path() / "specmult_op_roundtrip").string();
        save_operator(op, base);
        auto back = load_operator(base, op.grid);
        CHECK(max_entry_diff(back.matrix, op.matrix) == 0.0);
        CHECK(std::filesystem::file_size(base + ".bin") == 10 * 10 * 2 * 8);  // 2 n_max nodes
        auto other = build_system({HermiteBasis::build(6)});
        CHECK_THROWS_AS(load_operator(base, other.grid()), ShapeError);
    }

    TEST_CASE("growth profile validation")
    {
        GrowthProfile g{{0.0, 1.0}, {0.5}, {0.3}};
        CHECK_NOTHROW(g.validate());
        g.phi_p = {pi / 2};
        CHECK_THROWS_AS(g.validate(), ParameterError);
    }
}
