#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casorati/curvature.hpp"
#include "casorati/geometry.hpp"
#include "casorati/linalg.hpp"

namespace casorati {

/// The standard complex structure of R^{2n} under block coordinate ordering
/// (x_1..x_n, y_1..y_n): J(x, y) = (-y, x). J^2 = -I and J^T J = I hold exactly.
struct ComplexStructure {
    int n;

    explicit ComplexStructure(int half_dim) : n(half_dim) {}

    int ambient_dim() const { return 2 * n; }

    Vec apply(const Vec& v) const;
    Mat matrix() const;
};

/// Max over frame pairs of |<J E_i, E_j>|; zero exactly when the tangent plane is
/// Lagrangian at the point.
double lagrangian_residual(const PointGeometry& pg, const ComplexStructure& J);
double lagrangian_residual(const ImmersionSpec& spec, const Vec& u);

/// Replace the normal frame by xi_i = J E_i. Requires the point to be Lagrangian
/// within `tol`, otherwise throws NotLagrangian.
PointGeometry adapted_frame(const PointGeometry& pg, const ComplexStructure& J,
                            double tol = 1e-8);

/// Max over index triples of the spread among h^k_ij, h^j_ik, h^i_jk in an adapted
/// frame; vanishes exactly on Lagrangian submanifolds.
double cubic_symmetry_residual(const PointGeometry& pg_adapted);

struct PairingResidual {
    double c_tangential;        // eigenvalue of the block
    double matched_c_normal;    // nearest normal eigenvalue
    double subspace_residual;   // ||a P - c P||_F over the J-image of the block
    int block_offset;
    int block_size;
};

/// Per-eigenblock check that the J-image of each tangential principal subspace is an
/// invariant subspace of the normal operator with the same eigenvalue. Requires the
/// report to be computed in the adapted frame.
std::vector<PairingResidual> tangential_normal_pairing(const CurvatureReport& report,
                                                       const ComplexStructure& J,
                                                       const PointGeometry& pg_adapted);

/// Largest absolute difference between the sorted spectra of the two operators.
double spectrum_match_residual(const CurvatureReport& report);

struct MaximalRankFrameCheck {
    bool applicable = false;  // m1 == n
    bool ok = false;
    int m1 = 0;
    Vec c_tangential;         // descending
    Vec c_normal;             // descending, raw convention
    double spectrum_residual = 0.0;
    double frame_residual = 0.0;  // Gram deviation of {F_i, J F_i} from orthonormality
};

/// When the first normal space has full dimension n, the tangential eigenframe and
/// its J-image form an adapted frame of principal directions with equal curvature
/// lists. Not applicable (no failure) when m1 < n.
MaximalRankFrameCheck maximal_rank_frame_check(const CurvatureReport& report,
                                               const PointGeometry& pg_adapted, double tol);

/// Immersion u -> (u, grad phi(u)) in block ordering; Lagrangian for any potential.
ImmersionSpec gradient_graph_immersion(const Expression& phi, const std::string& name = "gradient_graph");

struct LagrangianTolerances {
    double lagrangian = 1e-9;
    double cubic = 1e-9;
    double pairing = 1e-9;
    double spectrum = 1e-9;
};

/// One-stop verification at a point: residuals, adapted-frame construction, and both
/// pairing checks. Theorem checks are skipped (flagged) when the point fails the
/// Lagrangian test.
struct LagrangianReport {
    double lagrangian_residual = 0.0;
    bool adapted_frame_valid = false;
    double cubic_residual = 0.0;
    std::vector<PairingResidual> pairing;
    double pairing_spectrum_residual = 0.0;
    MaximalRankFrameCheck maximal_rank;
    int m1 = 0;
};

LagrangianReport make_lagrangian_report(const ImmersionSpec& spec, const Vec& u,
                                        const LagrangianTolerances& tols = {});

}  // namespace casorati
