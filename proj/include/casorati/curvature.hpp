#pragma once

#include <utility>
#include <vector>

#include "casorati/geometry.hpp"
#include "casorati/linalg.hpp"

namespace casorati {

struct Eigenpair {
    double value;
    Vec vector;  // coefficients in the tangent frame (tangential) or normal frame (normal)
};

/// Half-open index ranges grouping eigenvalues that agree within relative tolerance;
/// comparisons across frames go through the blocks' projectors, never single vectors.
using EigenBlocks = std::vector<std::pair<int, int>>;  // (offset, count)

struct ReportOptions {
    double m1_tol = 1e-9;    // eigenvalue > m1_tol * max(lambda_max, 1) counts toward N1
    double block_tol = 1e-8; // relative gap grouping repeated eigenvalues
    double chen_tol = 1e-9;
};

/// Point curvature summary: both operators, their spectra, the scalar Casorati
/// curvature, the first normal space and the Chen condition residual.
struct CurvatureReport {
    Mat AC;        // n x n, sum of squared shape operators
    Mat a_matrix;  // m x m, entries tr(A_alpha A_beta), un-normalized
    std::vector<Eigenpair> tangential;  // descending c^T_i with directions F_i
    std::vector<Eigenpair> normal;      // descending raw c^perp_alpha with directions eta_alpha
    EigenBlocks tangential_blocks;
    EigenBlocks normal_blocks;
    double C = 0.0;  // (1/n) ||h||^2
    int m1 = 0;
    Mat n1_basis;            // m x m1, xi-frame coefficients of the first normal space
    Vec mean_curvature;      // xi-frame coefficients of H
    double chen_residual = 0.0;
    bool chen = false;

    int n() const { return AC.rows; }
    int m() const { return a_matrix.rows; }
    /// Raw values divided by n (the per-direction mean convention).
    Vec normal_means() const;
};

/// Sum over the normal frame of the squared shape operators.
Mat casorati_operator(const PointGeometry& pg);

/// The symmetric normal-space operator with entries tr(A_alpha A_beta).
Mat normal_casorati_operator(const PointGeometry& pg);

/// Eigen-decomposition, eigenvalues descending.
std::vector<Eigenpair> principal_tangential(const Mat& AC);

/// Eigen-decomposition of the normal operator plus the dimension m1 of the first
/// normal space: eigenvalues above tol * max(lambda_max, 1).
std::pair<std::vector<Eigenpair>, int> principal_normal(const Mat& a_matrix, double tol = 1e-9);

/// (1/n) sum of squared second fundamental form coefficients.
double casorati_curvature(const PointGeometry& pg);

/// Normal Casorati curvature in the unit normal direction xi (coefficients in the
/// xi frame): raw = tr(A_xi^2), mean = raw / n.
struct NormalCurvature {
    double raw;
    double mean;
};
NormalCurvature normal_casorati_curvature(const PointGeometry& pg, const Vec& xi);

/// Composes the immersion with the orthogonal projection of the ambient space onto
/// span(T_pM, xi(p)) treated as E^{n+1}, computes that hypersurface's Casorati
/// curvature at u and returns |C_hyp - tr(A_xi^2)/n|.
double projection_hypersurface_residual(const ImmersionSpec& spec, const Vec& u, const Vec& xi);

/// a(zeta) = (1/n) |zeta| sum_alpha tr(A_zeta A_alpha) xi_alpha, in xi coefficients.
Vec apply_normal_operator(const PointGeometry& pg, const Vec& zeta);

/// Mean curvature vector coefficients: H_alpha = (1/n) tr A_alpha.
Vec mean_curvature_vector(const PointGeometry& pg);

EigenBlocks group_eigen_blocks(const Vec& descending_values, double rel_tol);

/// Tangent-frame (or normal-frame) coefficients of the orthogonal projector onto
/// the eigenspace spanned by pairs [offset, offset+count).
Mat block_projector(const std::vector<Eigenpair>& pairs, std::pair<int, int> block);

CurvatureReport make_report(const PointGeometry& pg, const ReportOptions& opts = {});

}  // namespace casorati
