// Acceptance suite: one self-contained criterion per test case, each printing a
// single pass/fail line with its runtime. Expected values are either analytic or
// frozen from independent oracles in this file.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "casorati/curvature.hpp"
#include "casorati/errors.hpp"
#include "casorati/expr.hpp"
#include "casorati/geometry.hpp"
#include "casorati/jordan.hpp"
#include "casorati/lagrangian.hpp"
#include "casorati/surface_limit.hpp"
#include "test_helpers.hpp"

using namespace casorati;
namespace tst = casorati::testing;

namespace {

struct Criterion {
    std::string failure;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void require(bool ok, const std::string& detail) {
        if (!ok && failure.empty()) failure = detail;
    }
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    bool finish(const char* label, double budget_s) {
        const double t = seconds();
        const bool in_budget = t < budget_s;
        const bool ok = failure.empty() && in_budget;
        std::printf("[%s] %s (%.2f s / %.0f s budget)%s%s\n", ok ? "PASS" : "FAIL", label, t,
                    budget_s, failure.empty() ? "" : " - ", failure.c_str());
        if (failure.empty() && !in_budget) std::printf("       over time budget\n");
        std::fflush(stdout);
        return ok;
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ImmersionSpec cubic_graph() {
    return gradient_graph_immersion(Expression::parse("(u1^3 + u2^3)/6", 2), "cubic_graph");
}

ImmersionSpec quartic_graph() {
    return gradient_graph_immersion(
        Expression::parse("(u1^4 + u2^4)/12 + u1^2*u2/2", 2), "quartic_graph");
}

std::vector<ImmersionSpec> all_fixtures() {
    return {tst::plane(),        tst::sphere(2.0),      tst::cylinder(),
            tst::torus(),        tst::monkey_saddle(),  tst::cylinder_codim2(),
            cubic_graph(),       quartic_graph()};
}

/// Independent graph-surface oracle value of C for the monkey saddle at (0.3, 0.2),
/// frozen from tests::graph_weingarten before the limit construction was built.
constexpr double kMonkeySaddleC = 3.5271686836504967;

}  // namespace

TEST_CASE("criterion 1: hypersurface classics") {
    Criterion c;

    const PointGeometry cyl = point_geometry(tst::cylinder(), Vec{0.8, -0.4});
    const auto cyl_pairs = principal_tangential(casorati_operator(cyl));
    c.require(std::fabs(cyl_pairs[0].value - 1.0) <= 1e-9,
              "cylinder c1 = " + fmt(cyl_pairs[0].value));
    c.require(std::fabs(cyl_pairs[1].value) <= 1e-9,
              "cylinder c2 = " + fmt(cyl_pairs[1].value));
    // frame column 1 is the circle direction, column 2 the ruling
    c.require(std::fabs(std::fabs(cyl_pairs[0].vector[0]) - 1.0) <= 1e-9 &&
                  std::fabs(cyl_pairs[0].vector[1]) <= 1e-9,
              "top direction not along the circle");
    c.require(std::fabs(std::fabs(cyl_pairs[1].vector[1]) - 1.0) <= 1e-9 &&
                  std::fabs(cyl_pairs[1].vector[0]) <= 1e-9,
              "flat direction not along the ruling");

    const PointGeometry sph = point_geometry(tst::sphere(2.0), Vec{0.3, 0.9});
    const auto sph_pairs = principal_tangential(casorati_operator(sph));
    c.require(std::fabs(sph_pairs[0].value - 0.25) <= 1e-9 &&
                  std::fabs(sph_pairs[1].value - 0.25) <= 1e-9,
              "sphere spectrum {" + fmt(sph_pairs[0].value) + ", " + fmt(sph_pairs[1].value) +
                  "}");

    CHECK(c.finish("criterion 1: hypersurface classics", 1.0));
}

TEST_CASE("criterion 2: angle-derivative definition") {
    Criterion c;
    struct Fixture {
        ImmersionSpec spec;
        Vec u;
    };
    const std::vector<Fixture> fixtures = {
        {tst::sphere(2.0), {0.2, 0.5}},   {tst::cylinder(), {0.4, 0.1}},
        {tst::torus(), {0.7, -0.3}},      {cubic_graph(), {0.3, 0.2}},
        {quartic_graph(), {0.25, -0.35}},
    };
    std::mt19937_64 rng(20240917);
    for (const auto& fx : fixtures) {
        const PointGeometry pg = point_geometry(fx.spec, fx.u);
        const Mat AC = casorati_operator(pg);
        for (int k = 0; k < 20; ++k) {
            const Vec v = tst::random_unit(rng, pg.n());
            const double quad = dot(v, matvec(AC, v));
            const AngleCurve curve = sample_angle_curve(fx.spec, fx.u, v);
            const double denom = std::max(1.0, quad);
            c.require(std::fabs(curve.tangent_slope_sq - quad) <= 1e-3 * denom,
                      fx.spec.name + ": slope^2 " + fmt(curve.tangent_slope_sq) + " vs form " +
                          fmt(quad));
            c.require(std::fabs(curve.tangent_slope_sq - curve.normal_slope_sq) <=
                          1e-3 * denom,
                      fx.spec.name + ": tangent/normal slope gap " +
                          fmt(curve.tangent_slope_sq - curve.normal_slope_sq));
        }
    }
    CHECK(c.finish("criterion 2: angle-derivative definition", 10.0));
}

TEST_CASE("criterion 3: area-ratio limit") {
    Criterion c;

    // the oracle formula must still reproduce the frozen constant
    const Mat W = tst::graph_weingarten(Expression::parse("u1^3 - 3*u1*u2^2", 2), Vec{0.3, 0.2});
    c.require(std::fabs(0.5 * trace(W * W) - kMonkeySaddleC) < 1e-12,
              "stale frozen oracle value");

    struct Case {
        ImmersionSpec spec;
        Vec u;
        double target;
    };
    const std::vector<Case> cases = {
        {tst::sphere(2.0), {0.1, 0.2}, 0.25},
        {tst::cylinder(), {0.3, 0.1}, 0.5},
        {tst::monkey_saddle(), {0.3, 0.2}, kMonkeySaddleC},
    };
    for (const auto& cs : cases) {
        const LimitEstimate est =
            casorati_area_ratio_limit(cs.spec, cs.u, {0.05, 0.025, 0.0125}, 256);
        c.require(std::fabs(est.extrapolated - cs.target) <= 0.02 * cs.target,
                  cs.spec.name + ": limit " + fmt(est.extrapolated) + " vs " + fmt(cs.target));
    }
    CHECK(c.finish("criterion 3: area-ratio limit", 60.0));
}

TEST_CASE("criterion 4: scalar and projection identities") {
    Criterion c;
    std::mt19937_64 rng(4004);
    std::uniform_real_distribution<double> uni(-0.6, 0.6);
    for (const auto& spec : all_fixtures()) {
        Vec u(spec.n);
        for (double& x : u) x = uni(rng);
        const PointGeometry pg = point_geometry(spec, u);
        const CurvatureReport rep = make_report(pg);
        const double scale = std::max(1.0, trace(rep.AC));

        double sum_ct = 0.0;
        for (const auto& p : rep.tangential) sum_ct += p.value;
        c.require(std::fabs(rep.C - trace(rep.AC) / pg.n()) <= 1e-12 * scale,
                  spec.name + ": C vs tr(AC)/n");
        c.require(std::fabs(rep.C - sum_ct / pg.n()) <= 1e-12 * scale,
                  spec.name + ": C vs mean of cT");

        for (int trial = 0; trial < 10; ++trial) {
            const Vec xi = tst::random_unit(rng, pg.m());
            const double res = projection_hypersurface_residual(spec, u, xi);
            c.require(res <= 1e-8, spec.name + ": projection residual " + fmt(res));
        }

        Mat hmat(pg.m(), pg.n() * (pg.n() + 1) / 2);
        for (int a = 0; a < pg.m(); ++a) {
            int col = 0;
            for (int i = 0; i < pg.n(); ++i)
                for (int j = i; j < pg.n(); ++j) hmat(a, col++) = pg.h[a](i, j);
        }
        c.require(rep.m1 == numerical_rank(hmat, 1e-9),
                  spec.name + ": m1 " + std::to_string(rep.m1) + " vs rank oracle");
    }
    CHECK(c.finish("criterion 4: scalar and projection identities", 30.0));
}

TEST_CASE("criterion 5: lagrangian suite") {
    Criterion c;

    // the product torus S^1(1) x S^1(2)
    {
        const Vec u{0.45, -0.8};
        const PointGeometry pg = point_geometry(tst::torus(), u);
        const ComplexStructure J(2);
        const double lres = lagrangian_residual(pg, J);
        c.require(lres <= 1e-12, "torus lagrangian residual " + fmt(lres));
        const PointGeometry pga = adapted_frame(pg, J);
        const double cres = cubic_symmetry_residual(pga);
        c.require(cres <= 1e-12, "torus cubic residual " + fmt(cres));
        const CurvatureReport rep = make_report(pga);
        for (const auto& p : tangential_normal_pairing(rep, J, pga))
            c.require(p.subspace_residual <= 1e-10,
                      "torus pairing residual " + fmt(p.subspace_residual));
        const MaximalRankFrameCheck chk = maximal_rank_frame_check(rep, pga, 1e-10);
        c.require(chk.applicable && chk.ok, "torus maximal-rank check");
        c.require(std::fabs(chk.c_tangential[0] - 1.0) <= 1e-10 &&
                      std::fabs(chk.c_tangential[1] - 0.25) <= 1e-10,
                  "torus cT {" + fmt(chk.c_tangential[0]) + ", " + fmt(chk.c_tangential[1]) +
                      "}");
        c.require(std::fabs(chk.c_normal[0] - 1.0) <= 1e-10 &&
                      std::fabs(chk.c_normal[1] - 0.25) <= 1e-10,
                  "torus cPerp {" + fmt(chk.c_normal[0]) + ", " + fmt(chk.c_normal[1]) + "}");
    }

    // 50 seeded random polynomial gradient graphs at 5 points each
    std::mt19937_64 rng(55055);
    std::uniform_real_distribution<double> box(-0.5, 0.5);
    for (int seed_i = 0; seed_i < 50; ++seed_i) {
        const int n = 2 + seed_i % 2;
        const Expression phi = tst::random_polynomial(rng, n, 4);
        const ImmersionSpec spec = gradient_graph_immersion(phi);
        const ComplexStructure J(n);

        for (int pt = 0; pt < 5; ++pt) {
            Vec u(n);
            for (double& x : u) x = box(rng);
            const PointGeometry pg = point_geometry(spec, u);

            // frame-free triple products agree pairwise
            const Vec x = tst::random_unit(rng, n), y = tst::random_unit(rng, n),
                      z = tst::random_unit(rng, n);
            const auto h_dot_j = [&](const Vec& a, const Vec& b, const Vec& w) {
                Vec hab(pg.N(), 0.0);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const Vec& s = pg.second_derivative(i, j);
                        for (int cc = 0; cc < pg.N(); ++cc) hab[cc] += a[i] * b[j] * s[cc];
                    }
                for (int k = 0; k < n; ++k) {
                    const Vec e = pg.tangent_frame.col(k);
                    const double pr = dot(hab, e);
                    for (int cc = 0; cc < pg.N(); ++cc) hab[cc] -= pr * e[cc];
                }
                Vec wc(pg.N(), 0.0);
                for (int k = 0; k < n; ++k) {
                    const Vec e = pg.tangent_frame.col(k);
                    for (int cc = 0; cc < pg.N(); ++cc) wc[cc] += w[k] * e[cc];
                }
                return dot(hab, J.apply(wc));
            };
            const double s1 = h_dot_j(x, y, z), s2 = h_dot_j(x, z, y), s3 = h_dot_j(y, z, x);
            c.require(std::fabs(s1 - s2) <= 1e-9 && std::fabs(s1 - s3) <= 1e-9,
                      "seed " + std::to_string(seed_i) + ": triple-product spread");

            const PointGeometry pga = adapted_frame(pg, J);
            const double cres = cubic_symmetry_residual(pga);
            c.require(cres <= 1e-9,
                      "seed " + std::to_string(seed_i) + ": cubic residual " + fmt(cres));
        }

        // negative control: a rotational perturbation of size 1e-2 must fail
        ImmersionSpec bad = spec;
        bad.components[n] = Expression::parse(
            "(" + phi.derivative(0).render() + ") + 0.01*u2", n);
        bad.components[n + 1] = Expression::parse(
            "(" + phi.derivative(1).render() + ") - 0.01*u1", n);
        const double bad_res = lagrangian_residual(bad, Vec(n, 0.1));
        c.require(bad_res > 1e-8,
                  "seed " + std::to_string(seed_i) + ": control residual " + fmt(bad_res));
    }
    CHECK(c.finish("criterion 5: lagrangian suite", 30.0));
}

TEST_CASE("criterion 6: adapted-frame operator identity") {
    Criterion c;
    std::mt19937_64 rng(660);
    std::uniform_real_distribution<double> box(-0.5, 0.5);

    std::vector<ImmersionSpec> lagrangian_fixtures = {tst::torus(), cubic_graph(),
                                                      quartic_graph()};
    for (int k = 0; k < 10; ++k)
        lagrangian_fixtures.push_back(
            gradient_graph_immersion(tst::random_polynomial(rng, 2 + k % 2, 4)));

    for (const auto& spec : lagrangian_fixtures) {
        Vec u(spec.n);
        for (double& x : u) x = box(rng);
        const PointGeometry pga =
            adapted_frame(point_geometry(spec, u), ComplexStructure(spec.n));
        const double gap = max_abs(casorati_operator(pga) - normal_casorati_operator(pga));
        c.require(gap <= 1e-10, spec.name + ": entrywise gap " + fmt(gap));
    }
    CHECK(c.finish("criterion 6: adapted-frame operator identity", 10.0));
}

TEST_CASE("criterion 7: autodiff integrity") {
    Criterion c;
    std::mt19937_64 rng(777001);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    int accepted = 0;
    while (accepted < 200) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const std::string src = tst::random_expression_source(rng, n, 1 + rng() % 6);
        Vec u(n);
        for (double& x : u) x = uni(rng);
        Expression f = Expression::parse(src, n);
        Jet2 j;
        Vec g1;
        Mat h1;
        try {
            j = f.eval_jet2(u);
            if (!tst::jet_tame(j)) continue;
            g1 = tst::fd_gradient(f, u);
            h1 = tst::fd_hessian(f, u);
            const Vec g2 = tst::fd_gradient(f, u, 5e-5);
            const Mat h2 = tst::fd_hessian(f, u, 5e-5);
            bool converged = true;
            for (int i = 0; i < n; ++i)
                if (std::fabs(g1[i] - g2[i]) > 2e-6 * std::max(1.0, std::fabs(g1[i])))
                    converged = false;
            for (int a = 0; a < n && converged; ++a)
                for (int b = 0; b < n; ++b)
                    if (std::fabs(h1(a, b) - h2(a, b)) > 2e-6 * std::max(1.0, std::fabs(h1(a, b))))
                        converged = false;
            if (!converged) continue;
        } catch (const DomainError&) {
            continue;
        }
        ++accepted;

        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                c.require(j.hess(a, b) == j.hess(b, a), "hessian asymmetry in " + src);
        for (int i = 0; i < n; ++i)
            c.require(std::fabs(g1[i] - j.grad[i]) <= 1e-5 * std::max(1.0, std::fabs(j.grad[i])),
                      "gradient mismatch in " + src);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                c.require(std::fabs(h1(a, b) - j.hess(a, b)) <=
                              1e-5 * std::max(1.0, std::fabs(j.hess(a, b))),
                          "hessian mismatch in " + src);
    }
    CHECK(c.finish("criterion 7: autodiff integrity", 30.0));
}
