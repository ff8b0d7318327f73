#include "casorati/jordan.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "casorati/errors.hpp"

namespace casorati {

double subspace_angle(const Mat& Q1, const Mat& Q2) {
    if (Q1.rows != Q2.rows || Q1.cols != Q2.cols)
        throw DimensionMismatch("subspace bases must have equal shapes");
    const int k = Q1.cols;

    const Mat M = transpose(Q1) * Q2;
    Vec cosines = singular_values(M);  // descending

    Vec sines = singular_values(Q2 - Q1 * M);
    std::sort(sines.begin(), sines.end());  // ascending pairs with descending cosines

    double sum_sq = 0.0;
    for (int i = 0; i < k; ++i) {
        const double c = std::clamp(cosines[i], 0.0, 1.0);
        const double s = std::clamp(sines[i], 0.0, 1.0);
        const double theta = (c * c > 0.5) ? std::asin(s) : std::acos(c);
        sum_sq += theta * theta;
    }
    return std::sqrt(sum_sq);
}

namespace {

// 8-point Gauss-Legendre nodes/weights on [0, 1]
constexpr std::array<double, 8> kGaussX = {
    0.01985507175123188, 0.10166676129318664, 0.2372337950418355, 0.40828267875217505,
    0.5917173212478251,  0.7627662049581645,  0.8983332387068134, 0.9801449282487681};
constexpr std::array<double, 8> kGaussW = {
    0.05061426814518813, 0.11119051722668724, 0.15685332293894363, 0.18134189168918097,
    0.18134189168918097, 0.15685332293894363, 0.11119051722668724, 0.05061426814518813};

/// Arclength of t -> f(u0 + t w) over [0, t_end].
double ray_arclength(const ImmersionSpec& spec, const Vec& u0, const Vec& w, double t_end) {
    double s = 0.0;
    Vec u(u0.size());
    for (int g = 0; g < 8; ++g) {
        const double t = kGaussX[g] * t_end;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = u0[i] + t * w[i];
        const ImmersionJet jet = immersion_jet(spec, u);
        const Vec vel = matvec(jet.jacobian, w);
        s += kGaussW[g] * norm(vel);
    }
    return s * t_end;
}

/// Linear coefficient of the cubic through the origin interpolating three samples.
double fitted_slope(const Vec& s, const Vec& phi) {
    Mat V(3, 3);
    Mat rhs(3, 1);
    for (int r = 0; r < 3; ++r) {
        V(r, 0) = s[r];
        V(r, 1) = s[r] * s[r];
        V(r, 2) = s[r] * s[r] * s[r];
        rhs(r, 0) = phi[r];
    }
    return solve(V, rhs)(0, 0);
}

}  // namespace

AngleCurve sample_angle_curve(const ImmersionSpec& spec, const Vec& u0, const Vec& v,
                              double sigma) {
    const PointGeometry base = point_geometry(spec, u0);
    if (static_cast<int>(v.size()) != base.n())
        throw DimensionMismatch("direction must have tangent dimension");

    // parameter velocity whose pushforward is E v (unit ambient speed at u0)
    const Vec w = matvec(base.frame_coeff, v);

    AngleCurve curve;
    curve.arclengths = {0.0};
    curve.tangent_angles = {0.0};
    curve.normal_angles = {0.0};

    Vec s3(3), phi3(3), psi3(3);
    for (int k = 0; k < 3; ++k) {
        const double t = sigma / std::pow(2.0, 2 - k);  // sigma/4, sigma/2, sigma
        Vec u(u0.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = u0[i] + t * w[i];
        const PointGeometry pg = point_geometry(spec, u);

        const double s = ray_arclength(spec, u0, w, t);
        const double phi = subspace_angle(base.tangent_frame, pg.tangent_frame);
        const double psi = subspace_angle(base.normal_frame, pg.normal_frame);
        s3[k] = s;
        phi3[k] = phi;
        psi3[k] = psi;
        curve.arclengths.push_back(s);
        curve.tangent_angles.push_back(phi);
        curve.normal_angles.push_back(psi);
    }

    const double dphi = fitted_slope(s3, phi3);
    const double dpsi = fitted_slope(s3, psi3);
    curve.tangent_slope_sq = dphi * dphi;
    curve.normal_slope_sq = dpsi * dpsi;
    return curve;
}

double jordan_tangential_curvature(const ImmersionSpec& spec, const Vec& u0, const Vec& v,
                                   double sigma) {
    return sample_angle_curve(spec, u0, v, sigma).tangent_slope_sq;
}

double jordan_normal_curvature(const ImmersionSpec& spec, const Vec& u0, const Vec& v,
                               double sigma) {
    return sample_angle_curve(spec, u0, v, sigma).normal_slope_sq;
}

}  // namespace casorati
