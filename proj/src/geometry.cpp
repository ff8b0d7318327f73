#include "casorati/geometry.hpp"

#include <cmath>
#include <utility>

#include "casorati/errors.hpp"

namespace casorati {

ImmersionJet immersion_jet(const ImmersionSpec& spec, const Vec& u) {
    if (static_cast<int>(u.size()) != spec.n)
        throw DimensionMismatch("parameter point has wrong dimension");
    const int N = spec.ambient_dim;
    const int n = spec.n;
    ImmersionJet jet;
    jet.value.resize(N);
    jet.jacobian = Mat(N, n);
    jet.hessians.resize(N);
    for (int c = 0; c < N; ++c) {
        Jet2 j = spec.components[c].eval_jet2(u);
        jet.value[c] = j.value;
        for (int i = 0; i < n; ++i) jet.jacobian(c, i) = j.grad[i];
        jet.hessians[c] = std::move(j.hess);
    }
    return jet;
}

namespace {

void rebuild_form(PointGeometry& pg) {
    const int n = pg.n(), m = pg.m(), N = pg.N();
    pg.h.assign(m, Mat(n, n));
    pg.A.assign(m, Mat(n, n));
    for (int a = 0; a < m; ++a) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = 0.0;
                const Vec& s = pg.second_derivative(i, j);
                for (int c = 0; c < N; ++c) v += s[c] * pg.normal_frame(c, a);
                pg.h[a](i, j) = pg.h[a](j, i) = v;
            }
        pg.A[a] = pg.h[a];
    }
}

void rebuild_d2f(PointGeometry& pg) {
    const int n = pg.n(), N = pg.N();
    const Mat& B = pg.frame_coeff;
    pg.d2f.assign(static_cast<std::size_t>(n) * n, Vec(N, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Vec s(N, 0.0);
            for (int c = 0; c < N; ++c) {
                const Mat& H = pg.jet.hessians[c];
                double acc = 0.0;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) acc += B(k, i) * B(l, j) * H(k, l);
                s[c] = acc;
            }
            pg.d2f[i * n + j] = s;
            pg.d2f[j * n + i] = std::move(s);
        }
}

}  // namespace

PointGeometry point_geometry_from_jet(ImmersionJet jet, Vec u) {
    const int N = jet.jacobian.rows;
    const int n = jet.jacobian.cols;
    if (N <= n) throw DimensionError("ambient dimension must exceed chart dimension");

    const Vec sv = singular_values(jet.jacobian);
    if (sv.front() <= 0.0 || sv.back() < 1e-10 * sv.front()) throw RankDeficient(sv);

    PointGeometry pg;
    pg.u = std::move(u);
    pg.p = jet.value;
    pg.tangent_frame = gram_schmidt(jet.jacobian);
    pg.normal_frame = orthonormal_complement(pg.tangent_frame);

    // coordinate metric, symmetrized exactly
    pg.metric = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double g = 0.0;
            for (int c = 0; c < N; ++c) g += jet.jacobian(c, i) * jet.jacobian(c, j);
            pg.metric(i, j) = pg.metric(j, i) = g;
        }

    // E = J B  =>  B = (E^T J)^{-1}
    Mat R = transpose(pg.tangent_frame) * jet.jacobian;
    pg.frame_coeff = solve(std::move(R), Mat::identity(n));

    pg.jet = std::move(jet);
    rebuild_d2f(pg);
    rebuild_form(pg);
    return pg;
}

PointGeometry point_geometry(const ImmersionSpec& spec, const Vec& u) {
    return point_geometry_from_jet(immersion_jet(spec, u), u);
}

PointGeometry rotate_normal_frame(const PointGeometry& pg, const Mat& R) {
    if (R.rows != pg.m() || R.cols != pg.m()) throw DimensionMismatch("normal rotation");
    PointGeometry out = pg;
    out.normal_frame = pg.normal_frame * R;
    rebuild_form(out);
    return out;
}

PointGeometry rotate_tangent_frame(const PointGeometry& pg, const Mat& R) {
    if (R.rows != pg.n() || R.cols != pg.n()) throw DimensionMismatch("tangent rotation");
    PointGeometry out = pg;
    out.tangent_frame = pg.tangent_frame * R;
    out.frame_coeff = pg.frame_coeff * R;
    rebuild_d2f(out);
    rebuild_form(out);
    return out;
}

PointGeometry with_normal_frame(const PointGeometry& pg, const Mat& xi) {
    if (xi.rows != pg.N() || xi.cols != pg.m()) throw DimensionMismatch("normal frame shape");
    PointGeometry out = pg;
    out.normal_frame = xi;
    rebuild_form(out);
    return out;
}

}  // namespace casorati
