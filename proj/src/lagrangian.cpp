#include "casorati/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "casorati/errors.hpp"

namespace casorati {

Vec ComplexStructure::apply(const Vec& v) const {
    if (static_cast<int>(v.size()) != 2 * n) throw DimensionMismatch("complex structure");
    Vec out(2 * n);
    for (int i = 0; i < n; ++i) {
        out[i] = -v[n + i];
        out[n + i] = v[i];
    }
    return out;
}

Mat ComplexStructure::matrix() const {
    Mat J(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        J(i, n + i) = -1.0;
        J(n + i, i) = 1.0;
    }
    return J;
}

double lagrangian_residual(const PointGeometry& pg, const ComplexStructure& J) {
    if (pg.N() != J.ambient_dim() || pg.N() != 2 * pg.n())
        throw DimensionError("Lagrangian test needs ambient dimension 2n");
    const int n = pg.n();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec jei = J.apply(pg.tangent_frame.col(i));
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < pg.N(); ++c) s += jei[c] * pg.tangent_frame(c, j);
            worst = std::max(worst, std::fabs(s));
        }
    }
    return worst;
}

double lagrangian_residual(const ImmersionSpec& spec, const Vec& u) {
    if (spec.ambient_dim != 2 * spec.n)
        throw DimensionError("Lagrangian test needs ambient dimension 2n");
    return lagrangian_residual(point_geometry(spec, u), ComplexStructure(spec.n));
}

PointGeometry adapted_frame(const PointGeometry& pg, const ComplexStructure& J, double tol) {
    const double res = lagrangian_residual(pg, J);
    if (res > tol) throw NotLagrangian(res);
    const int n = pg.n(), N = pg.N();
    Mat xi(N, n);
    for (int i = 0; i < n; ++i) xi.set_col(i, J.apply(pg.tangent_frame.col(i)));
    return with_normal_frame(pg, xi);
}

double cubic_symmetry_residual(const PointGeometry& pg_adapted) {
    const int n = pg_adapted.n();
    if (pg_adapted.m() != n) throw DimensionError("adapted frame expected (m == n)");
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const double a = pg_adapted.h[k](i, j);
                const double b = pg_adapted.h[j](i, k);
                const double c = pg_adapted.h[i](j, k);
                const double lo = std::min({a, b, c});
                const double hi = std::max({a, b, c});
                worst = std::max(worst, hi - lo);
            }
    return worst;
}

std::vector<PairingResidual> tangential_normal_pairing(const CurvatureReport& report,
                                                       const ComplexStructure& J,
                                                       const PointGeometry& pg_adapted) {
    (void)J;  // the adapted frame makes the J-image of tangent coefficients the identity
    if (pg_adapted.m() != pg_adapted.n())
        throw NotLagrangian(lagrangian_residual(pg_adapted, ComplexStructure(pg_adapted.n())));
    const int n = report.n();
    std::vector<PairingResidual> out;
    for (const auto& block : report.tangential_blocks) {
        const double c = report.tangential[block.first].value;

        // coefficients of J F_k in the adapted normal frame equal those of F_k in
        // the tangent frame
        double frob = 0.0;
        for (int k = block.first; k < block.first + block.second; ++k) {
            const Vec& f = report.tangential[k].vector;
            const Vec af = matvec(report.a_matrix, f);
            for (int i = 0; i < n; ++i) {
                const double d = af[i] - c * f[i];
                frob += d * d;
            }
        }

        double best = report.normal.empty() ? 0.0 : report.normal.front().value;
        for (const auto& p : report.normal)
            if (std::fabs(p.value - c) < std::fabs(best - c)) best = p.value;

        out.push_back({c, best, std::sqrt(frob), block.first, block.second});
    }
    return out;
}

double spectrum_match_residual(const CurvatureReport& report) {
    Vec t(report.tangential.size()), nn(report.normal.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = report.tangential[i].value;
    for (std::size_t i = 0; i < nn.size(); ++i) nn[i] = report.normal[i].value;
    std::sort(t.begin(), t.end(), std::greater<double>());
    std::sort(nn.begin(), nn.end(), std::greater<double>());
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(t.size(), nn.size()); ++i)
        worst = std::max(worst, std::fabs(t[i] - nn[i]));
    return worst;
}

MaximalRankFrameCheck maximal_rank_frame_check(const CurvatureReport& report,
                                               const PointGeometry& pg_adapted, double tol) {
    MaximalRankFrameCheck chk;
    chk.m1 = report.m1;
    const int n = report.n();
    chk.c_tangential.resize(n);
    for (int i = 0; i < n; ++i) chk.c_tangential[i] = report.tangential[i].value;
    chk.c_normal.resize(report.normal.size());
    for (std::size_t i = 0; i < report.normal.size(); ++i)
        chk.c_normal[i] = report.normal[i].value;

    if (report.m1 != n) return chk;  // not applicable, no failure
    chk.applicable = true;

    chk.spectrum_residual = spectrum_match_residual(report);

    // ambient Gram matrix of {F_i, J F_i}
    const ComplexStructure J(n);
    const int N = pg_adapted.N();
    Mat frame(N, 2 * n);
    for (int i = 0; i < n; ++i) {
        Vec Fi(N, 0.0);
        for (int c = 0; c < N; ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += pg_adapted.tangent_frame(c, k) * report.tangential[i].vector[k];
            Fi[c] = s;
        }
        frame.set_col(i, Fi);
        frame.set_col(n + i, J.apply(Fi));
    }
    chk.frame_residual = max_abs(transpose(frame) * frame - Mat::identity(2 * n));

    double pair_res = 0.0;
    for (const auto& pr : tangential_normal_pairing(report, J, pg_adapted))
        pair_res = std::max(pair_res, pr.subspace_residual);

    chk.ok = chk.spectrum_residual <= tol && chk.frame_residual <= tol &&
             pair_res <= tol;
    return chk;
}

ImmersionSpec gradient_graph_immersion(const Expression& phi, const std::string& name) {
    const int n = phi.arity();
    ImmersionSpec spec;
    spec.name = name;
    spec.n = n;
    spec.ambient_dim = 2 * n;
    spec.pairing = ComplexPairing::Block;
    for (int i = 0; i < n; ++i)
        spec.components.push_back(Expression::parse("u" + std::to_string(i + 1), n));
    for (int i = 0; i < n; ++i) spec.components.push_back(phi.derivative(i));
    return spec;
}

LagrangianReport make_lagrangian_report(const ImmersionSpec& spec, const Vec& u,
                                        const LagrangianTolerances& tols) {
    if (spec.ambient_dim != 2 * spec.n)
        throw DimensionError("Lagrangian report needs ambient dimension 2n");
    const ComplexStructure J(spec.n);
    const PointGeometry pg = point_geometry(spec, u);

    LagrangianReport rep;
    rep.lagrangian_residual = lagrangian_residual(pg, J);
    if (rep.lagrangian_residual > tols.lagrangian) return rep;

    const PointGeometry pga = adapted_frame(pg, J, std::max(tols.lagrangian, 1e-8));
    rep.adapted_frame_valid = true;
    rep.cubic_residual = cubic_symmetry_residual(pga);

    const CurvatureReport report = make_report(pga);
    rep.m1 = report.m1;
    rep.pairing = tangential_normal_pairing(report, J, pga);
    rep.pairing_spectrum_residual = spectrum_match_residual(report);
    rep.maximal_rank = maximal_rank_frame_check(report, pga, tols.spectrum);
    return rep;
}

}  // namespace casorati
