#include "casorati/surface_limit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "casorati/errors.hpp"
#include "casorati/parallel.hpp"

namespace casorati {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<Mat> christoffel(const ImmersionSpec& spec, const Vec& u) {
    const int n = spec.n;
    const int N = spec.ambient_dim;
    const ImmersionJet jet = immersion_jet(spec, u);

    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < N; ++c) s += jet.jacobian(c, i) * jet.jacobian(c, j);
            g(i, j) = g(j, i) = s;
        }
    {
        const Vec sv = singular_values(g);
        if (sv.front() <= 0.0 || sv.back() < 1e-12 * sv.front()) throw RankDeficient(sv);
    }

    // dg[k](i,j) = d g_ij / du_k
    std::vector<Mat> dg(n, Mat(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int c = 0; c < N; ++c)
                    s += jet.hessians[c](k, i) * jet.jacobian(c, j) +
                         jet.jacobian(c, i) * jet.hessians[c](k, j);
                dg[k](i, j) = s;
            }

    // Levi-Civita: Gamma_kij = (dg_i(j,k) + dg_j(i,k) - dg_k(i,j)) / 2
    std::vector<Mat> first(n, Mat(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                first[k](i, j) = 0.5 * (dg[i](j, k) + dg[j](i, k) - dg[k](i, j));

    const Mat ginv = inverse(g);
    std::vector<Mat> Gamma(n, Mat(n, n));
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += ginv(l, k) * first[k](i, j);
                Gamma[l](i, j) = s;
            }
    return Gamma;
}

namespace {

struct GeoDeriv {
    Vec du;
    Vec dv;
};

GeoDeriv geodesic_rhs(const ImmersionSpec& spec, const Vec& u, const Vec& v) {
    const int n = spec.n;
    const std::vector<Mat> Gamma = christoffel(spec, u);
    GeoDeriv d;
    d.du = v;
    d.dv.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += Gamma[k](i, j) * v[i] * v[j];
        d.dv[k] = -s;
    }
    return d;
}

Mat coordinate_metric(const ImmersionSpec& spec, const Vec& u) {
    const ImmersionJet jet = immersion_jet(spec, u);
    const int n = spec.n;
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < spec.ambient_dim; ++c)
                s += jet.jacobian(c, i) * jet.jacobian(c, j);
            g(i, j) = g(j, i) = s;
        }
    return g;
}

void rk4_step(const ImmersionSpec& spec, GeodesicState& st, double h) {
    const int n = static_cast<int>(st.u.size());
    const GeoDeriv k1 = geodesic_rhs(spec, st.u, st.velocity);
    Vec u2(n), v2(n);
    for (int i = 0; i < n; ++i) {
        u2[i] = st.u[i] + 0.5 * h * k1.du[i];
        v2[i] = st.velocity[i] + 0.5 * h * k1.dv[i];
    }
    const GeoDeriv k2 = geodesic_rhs(spec, u2, v2);
    Vec u3(n), v3(n);
    for (int i = 0; i < n; ++i) {
        u3[i] = st.u[i] + 0.5 * h * k2.du[i];
        v3[i] = st.velocity[i] + 0.5 * h * k2.dv[i];
    }
    const GeoDeriv k3 = geodesic_rhs(spec, u3, v3);
    Vec u4(n), v4(n);
    for (int i = 0; i < n; ++i) {
        u4[i] = st.u[i] + h * k3.du[i];
        v4[i] = st.velocity[i] + h * k3.dv[i];
    }
    const GeoDeriv k4 = geodesic_rhs(spec, u4, v4);
    for (int i = 0; i < n; ++i) {
        st.u[i] += h / 6.0 * (k1.du[i] + 2.0 * (k2.du[i] + k3.du[i]) + k4.du[i]);
        st.velocity[i] += h / 6.0 * (k1.dv[i] + 2.0 * (k2.dv[i] + k3.dv[i]) + k4.dv[i]);
    }
}

}  // namespace

GeodesicState shoot_geodesic(const ImmersionSpec& spec, const Vec& u0, const Vec& v0,
                             double length, double step,
                             const std::function<void(double, const GeodesicState&)>& observer) {
    if (static_cast<int>(u0.size()) != spec.n || v0.size() != u0.size())
        throw DimensionMismatch("geodesic initial data");

    GeodesicState st{u0, v0};
    const Mat g0 = coordinate_metric(spec, u0);
    const double speed = std::sqrt(std::max(dot(st.velocity, matvec(g0, st.velocity)), 0.0));
    if (speed < 1e-300) throw DimensionMismatch("zero initial velocity");
    for (double& c : st.velocity) c /= speed;

    double s = 0.0;
    while (s < length - 1e-15) {
        const double h = std::min(step, length - s);
        rk4_step(spec, st, h);
        s += h;
        if (observer) observer(s, st);
    }
    return st;
}

std::vector<Vec> geodesic_circle(const ImmersionSpec& spec, const Vec& u0, double radius,
                                 int directions, double step) {
    if (spec.n != 2) throw DimensionError("geodesic circles need a 2-dimensional chart");
    const PointGeometry base = point_geometry(spec, u0);
    std::vector<Vec> points;
    points.reserve(directions);
    for (int d = 0; d < directions; ++d) {
        const double theta = 2.0 * kPi * d / directions;
        const Vec dir = {std::cos(theta), std::sin(theta)};
        const Vec w = matvec(base.frame_coeff, dir);
        const GeodesicState end = shoot_geodesic(spec, u0, w, radius, step);
        points.push_back(immersion_jet(spec, end.u).value);
    }
    return points;
}

namespace {

/// Unit normal at a chart point, sign-matched to `reference` (m = 1 only).
Vec oriented_normal(const ImmersionSpec& spec, const Vec& u, const Vec* reference) {
    const PointGeometry pg = point_geometry(spec, u);
    Vec nrm = pg.normal_frame.col(0);
    if (reference && dot(nrm, *reference) < 0.0)
        for (double& c : nrm) c = -c;
    return nrm;
}

double extrapolate_to_zero(const Vec& x, const Vec& y) {
    const int k = static_cast<int>(x.size());
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        double w = 1.0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            w *= (0.0 - x[j]) / (x[i] - x[j]);
        }
        total += w * y[i];
    }
    return total;
}

}  // namespace

LimitEstimate casorati_area_ratio_limit(const ImmersionSpec& spec, const Vec& u0,
                                        const Vec& radii, int directions,
                                        const LimitOptions& opts) {
    if (spec.n != 2 || spec.m() != 1)
        throw DimensionError("area-ratio limit needs a surface in E^3");
    if (radii.size() < 3) throw Error("at least 3 radii required for extrapolation");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] >= radii[i - 1]) throw Error("radii must be strictly descending");

    const PointGeometry base = point_geometry(spec, u0);
    const Vec normal_p = base.normal_frame.col(0);
    const double dtheta = 2.0 * kPi / directions;

    if (opts.profile_csv) *opts.profile_csv << "radius,theta,dpsi,r_gamma\n";

    LimitEstimate est;
    est.radii = radii;
    for (double radius : radii) {
        // directions are independent; rotation angles land in per-index slots and
        // the reduction below walks them in direction order
        Vec dpsi_by_dir(directions, 0.0);
        parallel_for(directions, [&](int d) {
            const double theta = dtheta * d;
            const Vec dir = {std::cos(theta), std::sin(theta)};
            const Vec w = matvec(base.frame_coeff, dir);

            // checkpoints along the geodesic keep the normal's sign continuous
            std::vector<Vec> path;
            const GeodesicState end = shoot_geodesic(
                spec, u0, w, radius, opts.step,
                [&](double, const GeodesicState& st) { path.push_back(st.u); });

            Vec ref = normal_p;
            const std::size_t stride = std::max<std::size_t>(1, path.size() / 8);
            for (std::size_t k = stride - 1; k + 1 < path.size(); k += stride)
                ref = oriented_normal(spec, path[k], &ref);
            const Vec normal_q = oriented_normal(spec, end.u, &ref);

            const double dpsi =
                std::acos(std::clamp(dot(normal_p, normal_q), -1.0, 1.0));

            // companion point at arclength dpsi along the same geodesic; its polar
            // radius is dpsi by construction, and the shot validates the chart
            if (dpsi > 0.0) shoot_geodesic(spec, u0, w, dpsi, opts.step);
            dpsi_by_dir[d] = dpsi;
        });

        double area_gamma = 0.0;
        double area_big_gamma = 0.0;
        for (int d = 0; d < directions; ++d) {
            area_gamma += 0.5 * radius * radius * dtheta;
            area_big_gamma += 0.5 * dpsi_by_dir[d] * dpsi_by_dir[d] * dtheta;
            if (opts.profile_csv)
                *opts.profile_csv << radius << "," << dtheta * d << "," << dpsi_by_dir[d]
                                  << "," << dpsi_by_dir[d] << "\n";
        }
        est.ratios.push_back(area_big_gamma / area_gamma);
    }

    Vec x(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) x[i] = radii[i] * radii[i];
    est.extrapolated = extrapolate_to_zero(x, est.ratios);
    return est;
}

SurfaceInvariants surface_invariants(const PointGeometry& pg) {
    if (pg.n() != 2 || pg.m() != 1)
        throw DimensionError("surface invariants need a surface in E^3");
    const Mat& A = pg.A[0];
    SurfaceInvariants inv{};
    inv.H = 0.5 * (A(0, 0) + A(1, 1));
    inv.K = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    inv.C = 0.5 * (A(0, 0) * A(0, 0) + A(1, 1) * A(1, 1) + 2.0 * A(0, 1) * A(1, 0));
    return inv;
}

}  // namespace casorati
