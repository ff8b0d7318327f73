#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "casorati/errors.hpp"
#include "casorati/surface_limit.hpp"
#include "test_helpers.hpp"

using namespace casorati;
namespace tst = casorati::testing;

namespace {
constexpr double kPi = 3.14159265358979323846;

ImmersionSpec polar_plane() {
    return tst::make_spec("polar_plane", 2, {"u1*cos(u2)", "u1*sin(u2)", "0"});
}
}  // namespace

TEST_CASE("christoffel symbols") {
    SUBCASE("identity chart of the plane: all zero") {
        const auto G = christoffel(tst::plane(), Vec{0.7, -0.3});
        for (const Mat& Gk : G) CHECK(max_abs(Gk) < 1e-15);
    }
    SUBCASE("polar chart: Gamma^1_22 = -r, Gamma^2_12 = 1/r") {
        const double r = 1.3;
        const auto G = christoffel(polar_plane(), Vec{r, 0.4});
        CHECK(G[0](1, 1) == doctest::Approx(-r).epsilon(1e-12));
        CHECK(G[1](0, 1) == doctest::Approx(1.0 / r).epsilon(1e-12));
        CHECK(G[1](1, 0) == doctest::Approx(1.0 / r).epsilon(1e-12));
        CHECK(std::fabs(G[0](0, 0)) < 1e-13);
        // symmetric in the lower indices
        for (const Mat& Gk : G)
            CHECK(std::fabs(Gk(0, 1) - Gk(1, 0)) < 1e-13);
    }
    SUBCASE("sphere chart agrees with a finite-difference metric oracle") {
        const ImmersionSpec spec = tst::sphere(1.0);
        const Vec u{0.2, 0.5};
        const auto G = christoffel(spec, u);

        // oracle: metric from jacobians only, differentiated by central differences
        const double h = 1e-5;
        const auto metric_at = [&](const Vec& q) {
            const ImmersionJet j = immersion_jet(spec, q);
            Mat g(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int jj = 0; jj < 2; ++jj) {
                    double s = 0.0;
                    for (int c = 0; c < 3; ++c) s += j.jacobian(c, i) * j.jacobian(c, jj);
                    g(i, jj) = s;
                }
            return g;
        };
        std::vector<Mat> dg(2, Mat(2, 2));
        for (int k = 0; k < 2; ++k) {
            Vec up = u, um = u;
            up[k] += h;
            um[k] -= h;
            const Mat gp = metric_at(up), gm = metric_at(um);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) dg[k](i, j) = (gp(i, j) - gm(i, j)) / (2.0 * h);
        }
        const Mat ginv = inverse(metric_at(u));
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double first = 0.0;
                    for (int k = 0; k < 2; ++k)
                        first += ginv(l, k) * 0.5 *
                                 (dg[i](j, k) + dg[j](i, k) - dg[k](i, j));
                    CHECK(std::fabs(G[l](i, j) - first) < 1e-6);
                }
    }
    SUBCASE("degenerate metric is a hard error") {
        CHECK_THROWS_AS(christoffel(polar_plane(), Vec{0.0, 0.0}), RankDeficient);
    }
}

TEST_CASE("geodesics") {
    SUBCASE("plane: straight line at unit speed") {
        const GeodesicState end =
            shoot_geodesic(tst::plane(), Vec{0.2, -0.1}, Vec{3.0, 4.0}, 2.0);
        CHECK(end.u[0] == doctest::Approx(0.2 + 2.0 * 0.6).epsilon(1e-10));
        CHECK(end.u[1] == doctest::Approx(-0.1 + 2.0 * 0.8).epsilon(1e-10));
    }
    SUBCASE("unit sphere: meridian geodesic matches the great-circle oracle") {
        // from the equator heading north; u1 is latitude so u1(s) = s on the chart
        const double s_end = kPi / 2.0 - 0.01;
        const GeodesicState end =
            shoot_geodesic(tst::sphere(1.0), Vec{0.0, 0.3}, Vec{1.0, 0.0}, s_end);
        const Vec p = immersion_jet(tst::sphere(1.0), end.u).value;
        // oracle: great circle through (cos .3, sin .3, 0) toward the pole
        const Vec oracle = {std::cos(s_end) * std::cos(0.3), std::cos(s_end) * std::sin(0.3),
                            std::sin(s_end)};
        CHECK(norm(p - oracle) < 1e-8);
        // the endpoint sits 0.01 radians shy of the pole
        CHECK(end.u[0] == doctest::Approx(s_end).epsilon(1e-9));
    }
    SUBCASE("cylinder ruling: straight in the chart") {
        const GeodesicState end =
            shoot_geodesic(tst::cylinder(), Vec{0.5, 0.0}, Vec{0.0, 1.0}, 1.5);
        CHECK(end.u[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(end.u[1] == doctest::Approx(1.5).epsilon(1e-10));
    }
    SUBCASE("unit metric speed is preserved") {
        for (const auto& spec : {tst::sphere(2.0), tst::cylinder(), tst::monkey_saddle()}) {
            const GeodesicState end =
                shoot_geodesic(spec, Vec{0.1, 0.2}, Vec{0.7, -0.4}, 1.0);
            const ImmersionJet j = immersion_jet(spec, end.u);
            Mat g(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int jj = 0; jj < 2; ++jj) {
                    double s = 0.0;
                    for (int c = 0; c < spec.ambient_dim; ++c)
                        s += j.jacobian(c, i) * j.jacobian(c, jj);
                    g(i, jj) = s;
                }
            const double speed = dot(end.velocity, matvec(g, end.velocity));
            CHECK(std::fabs(speed - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("geodesic circles close up at the right circumference") {
    for (const auto& spec : {tst::sphere(2.0), tst::cylinder(), tst::monkey_saddle()}) {
        const Vec u0{0.1, 0.15};
        const double radius = 0.05;
        const auto pts = geodesic_circle(spec, u0, radius, 128);
        double circumference = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k)
            circumference += norm(pts[(k + 1) % pts.size()] - pts[k]);
        const double gauss = surface_invariants(point_geometry(spec, u0)).K;
        const double bound = std::fabs(gauss) * radius * radius / 6.0 + 1e-3;
        CHECK(std::fabs(circumference / (2.0 * kPi * radius) - 1.0) <= bound);
    }
}

TEST_CASE("area ratio limit") {
    // reduced sampling here; the acceptance suite runs the full configuration
    const Vec radii{0.08, 0.04, 0.02};
    const int dirs = 64;

    SUBCASE("sphere r=2 approaches 1/4") {
        const LimitEstimate est =
            casorati_area_ratio_limit(tst::sphere(2.0), Vec{0.1, 0.2}, radii, dirs);
        CHECK(est.extrapolated == doctest::Approx(0.25).epsilon(0.02));
        REQUIRE(est.ratios.size() == 3);
        for (double r : est.ratios) CHECK(r > 0.0);
    }
    SUBCASE("cylinder approaches 1/2 with the companion curve through p") {
        const LimitEstimate est =
            casorati_area_ratio_limit(tst::cylinder(), Vec{0.3, 0.1}, radii, dirs);
        CHECK(est.extrapolated == doctest::Approx(0.5).epsilon(0.02));
    }
    SUBCASE("plane: ratios identically zero") {
        const LimitEstimate est =
            casorati_area_ratio_limit(tst::plane(), Vec{0.0, 0.0}, radii, dirs);
        for (double r : est.ratios) CHECK(r == 0.0);
        CHECK(est.extrapolated == 0.0);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(
            casorati_area_ratio_limit(tst::torus(), Vec{0.0, 0.0}, radii, dirs),
            DimensionError);
        CHECK_THROWS_AS(
            casorati_area_ratio_limit(tst::plane(), Vec{0.0, 0.0}, Vec{0.1, 0.05}, dirs),
            Error);
    }
    SUBCASE("profile emission") {
        std::ostringstream csv;
        LimitOptions opts;
        opts.profile_csv = &csv;
        casorati_area_ratio_limit(tst::sphere(2.0), Vec{0.0, 0.0}, radii, 8, opts);
        const std::string text = csv.str();
        CHECK(text.rfind("radius,theta,dpsi,r_gamma\n", 0) == 0);
        // one header plus 3 radii x 8 directions
        CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 24);
    }
}

TEST_CASE("surface invariants") {
    SUBCASE("sphere r=2") {
        const SurfaceInvariants inv =
            surface_invariants(point_geometry(tst::sphere(2.0), Vec{0.4, -0.6}));
        CHECK(std::fabs(inv.H) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(inv.K == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(inv.C == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("cylinder") {
        const SurfaceInvariants inv =
            surface_invariants(point_geometry(tst::cylinder(), Vec{0.4, 0.6}));
        CHECK(std::fabs(inv.H) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::fabs(inv.K) < 1e-13);
        CHECK(inv.C == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("plane") {
        const SurfaceInvariants inv =
            surface_invariants(point_geometry(tst::plane(), Vec{0.0, 0.0}));
        CHECK(inv.H == 0.0);
        CHECK(inv.K == 0.0);
        CHECK(inv.C == 0.0);
    }
    SUBCASE("wrong dimensions are rejected") {
        CHECK_THROWS_AS(surface_invariants(point_geometry(tst::torus(), Vec{0.0, 0.0})),
                        DimensionError);
    }
    SUBCASE("C = 2H^2 - K and the coordinate-basis Weingarten route") {
        const std::vector<ImmersionSpec> fixtures = {tst::sphere(2.0), tst::cylinder(),
                                                     tst::monkey_saddle()};
        for (const auto& spec : fixtures) {
            const Vec u{0.25, 0.35};
            const SurfaceInvariants inv = surface_invariants(point_geometry(spec, u));
            CHECK(std::fabs(inv.C - (2.0 * inv.H * inv.H - inv.K)) < 1e-12);

            // independent route: raw coordinate basis with a cross-product normal
            const ImmersionJet jet = immersion_jet(spec, u);
            Vec fu(3), fv(3);
            for (int cc = 0; cc < 3; ++cc) {
                fu[cc] = jet.jacobian(cc, 0);
                fv[cc] = jet.jacobian(cc, 1);
            }
            Vec nrm = {fu[1] * fv[2] - fu[2] * fv[1], fu[2] * fv[0] - fu[0] * fv[2],
                       fu[0] * fv[1] - fu[1] * fv[0]};
            const double nn = norm(nrm);
            for (double& x : nrm) x /= nn;
            Mat I(2, 2), II(2, 2);
            I(0, 0) = dot(fu, fu);
            I(0, 1) = I(1, 0) = dot(fu, fv);
            I(1, 1) = dot(fv, fv);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double s = 0.0;
                    for (int cc = 0; cc < 3; ++cc) s += jet.hessians[cc](i, j) * nrm[cc];
                    II(i, j) = s;
                }
            const Mat W = solve(I, II);
            CHECK(std::fabs(std::fabs(0.5 * trace(W)) - std::fabs(inv.H)) < 1e-10);
            CHECK(std::fabs((W(0, 0) * W(1, 1) - W(0, 1) * W(1, 0)) - inv.K) < 1e-10);
            CHECK(std::fabs(0.5 * trace(W * W) - inv.C) < 1e-10);
        }
        // graph-formula route on the monkey saddle as a second cross-check
        const Expression F = Expression::parse("u1^3 - 3*u1*u2^2", 2);
        const Vec u{0.3, 0.2};
        const Mat W = tst::graph_weingarten(F, u);
        const SurfaceInvariants inv =
            surface_invariants(point_geometry(tst::monkey_saddle(), u));
        CHECK(std::fabs(std::fabs(0.5 * trace(W)) - std::fabs(inv.H)) < 1e-10);
        CHECK(std::fabs((W(0, 0) * W(1, 1) - W(0, 1) * W(1, 0)) - inv.K) < 1e-10);
        CHECK(std::fabs(0.5 * trace(W * W) - inv.C) < 1e-10);
    }
}
