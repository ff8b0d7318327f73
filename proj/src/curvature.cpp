#include "casorati/curvature.hpp"

#include <cmath>

#include "casorati/errors.hpp"

namespace casorati {

Vec CurvatureReport::normal_means() const {
    Vec v(normal.size());
    for (std::size_t i = 0; i < normal.size(); ++i) v[i] = normal[i].value / n();
    return v;
}

Mat casorati_operator(const PointGeometry& pg) {
    const int n = pg.n();
    Mat AC(n, n);
    for (const Mat& A : pg.A) {
        for (int i = 0; i < n; ++i)
            for (int k = i; k < n; ++k) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += A(i, j) * A(j, k);
                AC(i, k) += s;
            }
    }
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) AC(k, i) = AC(i, k);
    return AC;
}

Mat normal_casorati_operator(const PointGeometry& pg) {
    const int m = pg.m(), n = pg.n();
    Mat a(m, m);
    for (int al = 0; al < m; ++al)
        for (int be = al; be < m; ++be) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += pg.A[al](i, j) * pg.A[be](j, i);
            a(al, be) = a(be, al) = s;
        }
    return a;
}

std::vector<Eigenpair> principal_tangential(const Mat& AC) {
    const EigenSym es = jacobi_eigen_sym(AC);
    std::vector<Eigenpair> out(es.values.size());
    for (std::size_t i = 0; i < es.values.size(); ++i)
        out[i] = {es.values[i], es.vectors.col(static_cast<int>(i))};
    return out;
}

std::pair<std::vector<Eigenpair>, int> principal_normal(const Mat& a_matrix, double tol) {
    const EigenSym es = jacobi_eigen_sym(a_matrix);
    std::vector<Eigenpair> pairs(es.values.size());
    for (std::size_t i = 0; i < es.values.size(); ++i)
        pairs[i] = {es.values[i], es.vectors.col(static_cast<int>(i))};
    const double lead = pairs.empty() ? 0.0 : pairs.front().value;
    const double cutoff = tol * std::max(lead, 1.0);
    int m1 = 0;
    for (const auto& p : pairs)
        if (p.value > cutoff) ++m1;
    return {pairs, m1};
}

double casorati_curvature(const PointGeometry& pg) {
    double s = 0.0;
    for (const Mat& hm : pg.h)
        for (double v : hm.a) s += v * v;
    return s / pg.n();
}

NormalCurvature normal_casorati_curvature(const PointGeometry& pg, const Vec& xi) {
    if (static_cast<int>(xi.size()) != pg.m()) throw DimensionMismatch("normal coefficients");
    const double nrm = norm(xi);
    if (std::fabs(nrm - 1.0) > 1e-8) throw NotUnit(nrm);
    const int n = pg.n();
    Mat Axi(n, n);
    for (int a = 0; a < pg.m(); ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Axi(i, j) += xi[a] * pg.A[a](i, j);
    double raw = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) raw += Axi(i, j) * Axi(j, i);
    return {raw, raw / n};
}

double projection_hypersurface_residual(const ImmersionSpec& spec, const Vec& u, const Vec& xi) {
    const PointGeometry pg = point_geometry(spec, u);
    const double target = normal_casorati_curvature(pg, xi).mean;

    if (pg.m() == 1) {
        // the projection is the identity; run the hypersurface pipeline unchanged
        const PointGeometry hyp = point_geometry(spec, u);
        return std::fabs(casorati_curvature(hyp) - target);
    }

    const int N = pg.N(), n = pg.n();
    // orthonormal basis of span(T_pM, xi(p))
    Mat Q(N, n + 1);
    for (int c = 0; c < N; ++c) {
        for (int i = 0; i < n; ++i) Q(c, i) = pg.tangent_frame(c, i);
        double v = 0.0;
        for (int a = 0; a < pg.m(); ++a) v += xi[a] * pg.normal_frame(c, a);
        Q(c, n) = v;
    }

    // jet of the composed immersion P o f in the subspace coordinates
    ImmersionJet proj;
    proj.value.assign(n + 1, 0.0);
    proj.jacobian = Mat(n + 1, n);
    proj.hessians.assign(n + 1, Mat(n, n));
    for (int k = 0; k <= n; ++k) {
        for (int c = 0; c < N; ++c) {
            const double q = Q(c, k);
            if (q == 0.0) continue;
            proj.value[k] += q * pg.jet.value[c];
            for (int i = 0; i < n; ++i) proj.jacobian(k, i) += q * pg.jet.jacobian(c, i);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) proj.hessians[k](i, j) += q * pg.jet.hessians[c](i, j);
        }
    }

    const PointGeometry hyp = point_geometry_from_jet(std::move(proj), u);
    return std::fabs(casorati_curvature(hyp) - target);
}

Vec mean_curvature_vector(const PointGeometry& pg) {
    Vec H(pg.m(), 0.0);
    for (int a = 0; a < pg.m(); ++a) H[a] = trace(pg.A[a]) / pg.n();
    return H;
}

Vec apply_normal_operator(const PointGeometry& pg, const Vec& zeta) {
    if (static_cast<int>(zeta.size()) != pg.m()) throw DimensionMismatch("normal coefficients");
    const int n = pg.n(), m = pg.m();
    Mat Az(n, n);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Az(i, j) += zeta[a] * pg.A[a](i, j);
    const double zn = norm(zeta);
    Vec out(m, 0.0);
    for (int a = 0; a < m; ++a) {
        double tr_prod = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tr_prod += Az(i, j) * pg.A[a](j, i);
        out[a] = zn * tr_prod / n;
    }
    return out;
}

EigenBlocks group_eigen_blocks(const Vec& values, double rel_tol) {
    EigenBlocks blocks;
    const double scale = values.empty() ? 1.0 : std::max(std::fabs(values.front()), 1.0);
    const double gap = rel_tol * scale;
    int start = 0;
    for (std::size_t i = 1; i <= values.size(); ++i) {
        if (i == values.size() || std::fabs(values[i] - values[i - 1]) > gap) {
            blocks.emplace_back(start, static_cast<int>(i) - start);
            start = static_cast<int>(i);
        }
    }
    return blocks;
}

Mat block_projector(const std::vector<Eigenpair>& pairs, std::pair<int, int> block) {
    const int dim = static_cast<int>(pairs.front().vector.size());
    Mat P(dim, dim);
    for (int k = block.first; k < block.first + block.second; ++k) {
        const Vec& v = pairs[k].vector;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) P(i, j) += v[i] * v[j];
    }
    return P;
}

CurvatureReport make_report(const PointGeometry& pg, const ReportOptions& opts) {
    CurvatureReport rep;
    rep.AC = casorati_operator(pg);
    rep.a_matrix = normal_casorati_operator(pg);
    rep.tangential = principal_tangential(rep.AC);
    auto [normal_pairs, m1] = principal_normal(rep.a_matrix, opts.m1_tol);
    rep.normal = std::move(normal_pairs);
    rep.m1 = m1;
    rep.C = casorati_curvature(pg);

    Vec tvals(rep.tangential.size()), nvals(rep.normal.size());
    for (std::size_t i = 0; i < rep.tangential.size(); ++i) tvals[i] = rep.tangential[i].value;
    for (std::size_t i = 0; i < rep.normal.size(); ++i) nvals[i] = rep.normal[i].value;
    rep.tangential_blocks = group_eigen_blocks(tvals, opts.block_tol);
    rep.normal_blocks = group_eigen_blocks(nvals, opts.block_tol);

    rep.n1_basis = Mat(pg.m(), rep.m1);
    for (int k = 0; k < rep.m1; ++k)
        for (int a = 0; a < pg.m(); ++a) rep.n1_basis(a, k) = rep.normal[k].vector[a];

    rep.mean_curvature = mean_curvature_vector(pg);
    rep.chen_residual = norm(apply_normal_operator(pg, rep.mean_curvature));
    rep.chen = rep.chen_residual <= opts.chen_tol;
    return rep;
}

}  // namespace casorati
