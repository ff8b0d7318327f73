#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "casorati/geometry.hpp"
#include "casorati/linalg.hpp"

namespace casorati {

/// Chart point and unit-speed velocity of a geodesic.
struct GeodesicState {
    Vec u;         // chart coordinates
    Vec velocity;  // du/ds
};

/// Area-ratio samples per radius and the Richardson-extrapolated limit.
struct LimitEstimate {
    Vec radii;
    Vec ratios;
    double extrapolated = 0.0;
};

struct LimitOptions {
    double step = 1e-3;               // RK4 arclength step
    std::ostream* profile_csv = nullptr;  // optional (radius, theta, dpsi, r_gamma) dump
};

/// Christoffel symbols of the second kind from the coordinate metric and its
/// derivatives, both assembled from second-order jets. Gamma[k](i,j) is the
/// coefficient of du_k in the geodesic equation.
std::vector<Mat> christoffel(const ImmersionSpec& spec, const Vec& u);

/// Integrate the geodesic equation by RK4 at fixed arclength step. The initial
/// velocity is normalized to unit metric speed. The observer, when given, is
/// called after every accepted step with the arclength so far.
GeodesicState shoot_geodesic(
    const ImmersionSpec& spec, const Vec& u0, const Vec& v0, double length, double step = 1e-3,
    const std::function<void(double, const GeodesicState&)>& observer = {});

/// Ambient positions of the geodesic circle of the given radius (one per direction).
std::vector<Vec> geodesic_circle(const ImmersionSpec& spec, const Vec& u0, double radius,
                                 int directions, double step = 1e-3);

/// Casorati's area-ratio construction on a surface in E^3: for each radius, shoot
/// geodesics in `directions` directions, measure the rotation of the unit normal
/// (sign propagated along the geodesic), place the companion point at that arclength
/// along the same geodesic, and form the geodesic-polar area ratio. Extrapolates the
/// ratios in radius^2 to zero.
LimitEstimate casorati_area_ratio_limit(const ImmersionSpec& spec, const Vec& u0,
                                        const Vec& radii, int directions,
                                        const LimitOptions& opts = {});

/// Mean curvature, Gauss curvature and Casorati curvature of a surface in E^3.
struct SurfaceInvariants {
    double H;
    double K;
    double C;
};
SurfaceInvariants surface_invariants(const PointGeometry& pg);

}  // namespace casorati
