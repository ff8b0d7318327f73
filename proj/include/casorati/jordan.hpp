#pragma once

#include "casorati/geometry.hpp"
#include "casorati/linalg.hpp"

namespace casorati {

/// Angle samples along a curve out of a base point, with the fitted squared slopes
/// at arclength zero. tangent_angles[k] is the angle between T_pM and the tangent
/// space at arclength arclengths[k]; normal_angles the same for the normal spaces.
struct AngleCurve {
    Vec arclengths;         // starts at 0
    Vec tangent_angles;     // radians, tangent_angles[0] == 0
    Vec normal_angles;      // radians, normal_angles[0] == 0
    double tangent_slope_sq = 0.0;
    double normal_slope_sq = 0.0;
};

/// Aggregate angle between two k-dimensional subspaces given by orthonormal bases:
/// the root-sum-square of the principal angles. For k = 1 this is the classical
/// angle between lines. Computed through both the cosine (singular values of
/// Q1^T Q2) and sine (residual) routes so that tiny and near-right angles both
/// come out at full precision.
double subspace_angle(const Mat& Q1, const Mat& Q2);

/// Samples the parameter ray through u0 whose pushforward at u0 is the unit tangent
/// v (coefficients in the tangent frame), at three arclength scales sigma, sigma/2,
/// sigma/4, and fits the angle curves with a cubic through the origin to extract
/// the squared slopes at zero.
AngleCurve sample_angle_curve(const ImmersionSpec& spec, const Vec& u0, const Vec& v,
                              double sigma = 1e-2);

/// Squared rate of rotation of the tangent space at p in direction v.
double jordan_tangential_curvature(const ImmersionSpec& spec, const Vec& u0, const Vec& v,
                                   double sigma = 1e-2);

/// Squared rate of rotation of the normal space at p in direction v.
double jordan_normal_curvature(const ImmersionSpec& spec, const Vec& u0, const Vec& v,
                               double sigma = 1e-2);

}  // namespace casorati
