#pragma once

#include <string>
#include <vector>

#include "casorati/expr.hpp"
#include "casorati/linalg.hpp"

namespace casorati {

enum class ComplexPairing { None, Block };

/// A parametrized immersion f: U in R^n -> R^N given componentwise by expressions.
struct ImmersionSpec {
    std::string name;
    int n = 0;            // chart dimension
    int ambient_dim = 0;  // N = n + m
    std::vector<Expression> components;
    ComplexPairing pairing = ComplexPairing::None;

    int m() const { return ambient_dim - n; }
};

/// Second-order data of the immersion at one parameter point.
struct ImmersionJet {
    Vec value;                 // N
    Mat jacobian;              // N x n, column i = df/du_i
    std::vector<Mat> hessians; // N slices, each n x n symmetric
};

/// Frames, metric and second fundamental form at a point, in an orthonormal
/// tangent frame E and orthonormal normal frame xi.
///
/// The second-derivative vectors d2f (ambient vectors of D^2 f along pairs of
/// frame directions) are carried so that the form can be re-expressed in any
/// other normal frame without re-evaluating the immersion.
struct PointGeometry {
    Vec u;               // n
    Vec p;               // N
    Mat tangent_frame;   // N x n, orthonormal columns E_i
    Mat normal_frame;    // N x m, orthonormal columns xi_alpha
    Mat metric;          // n x n, coordinate-basis metric J^T J
    std::vector<Mat> h;  // m slices, h[alpha](i,j) = <D^2f(E_i,E_j), xi_alpha>
    std::vector<Mat> A;  // shape operators; in an orthonormal frame A[alpha] == h[alpha]

    ImmersionJet jet;
    Mat frame_coeff;          // B with E = jacobian * B (n x n)
    std::vector<Vec> d2f;     // n*n ambient vectors, d2f[i*n+j] symmetric in (i,j)

    int n() const { return tangent_frame.cols; }
    int m() const { return normal_frame.cols; }
    int N() const { return tangent_frame.rows; }
    const Vec& second_derivative(int i, int j) const { return d2f[i * n() + j]; }
};

ImmersionJet immersion_jet(const ImmersionSpec& spec, const Vec& u);

/// Full point geometry: Gram-Schmidt tangent frame in column order, deterministic
/// orthonormal completion for the normal frame, h and shape operators.
/// Throws RankDeficient when the Jacobian's smallest singular value falls below
/// 1e-10 of its largest.
PointGeometry point_geometry(const ImmersionSpec& spec, const Vec& u);

/// Same construction on an already evaluated jet (used for composed immersions).
PointGeometry point_geometry_from_jet(ImmersionJet jet, Vec u);

/// Orthogonal change of the normal frame: xi' = xi * R, h recomputed.
PointGeometry rotate_normal_frame(const PointGeometry& pg, const Mat& R);

/// Orthogonal change of the tangent frame: E' = E * R, h and d2f recomputed.
PointGeometry rotate_tangent_frame(const PointGeometry& pg, const Mat& R);

/// Replace the normal frame by explicit orthonormal columns (N x m).
PointGeometry with_normal_frame(const PointGeometry& pg, const Mat& xi);

}  // namespace casorati
