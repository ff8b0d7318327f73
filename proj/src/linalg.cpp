#include "casorati/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "casorati/errors.hpp"

namespace casorati {

Mat Mat::identity(int k) {
    Mat I(k, k);
    for (int i = 0; i < k; ++i) I(i, i) = 1.0;
    return I;
}

Vec Mat::col(int j) const {
    Vec v(rows);
    for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
}

void Mat::set_col(int j, const Vec& v) {
    assert(static_cast<int>(v.size()) == rows);
    for (int i = 0; i < rows; ++i) (*this)(i, j) = v[i];
}

Mat operator*(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw DimensionMismatch("matrix product");
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

Mat operator+(const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw DimensionMismatch("matrix sum");
    Mat C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
    return C;
}

Mat operator-(const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw DimensionMismatch("matrix difference");
    Mat C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
    return C;
}

Mat operator*(double s, const Mat& A) {
    Mat C = A;
    for (double& x : C.a) x *= s;
    return C;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

Vec matvec(const Mat& A, const Vec& x) {
    if (A.cols != static_cast<int>(x.size())) throw DimensionMismatch("matrix-vector product");
    Vec y(A.rows, 0.0);
    for (int i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double dot(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

Vec operator+(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    Vec z = x;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += y[i];
    return z;
}

Vec operator-(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    Vec z = x;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= y[i];
    return z;
}

Vec operator*(double s, const Vec& x) {
    Vec z = x;
    for (double& v : z) v *= s;
    return z;
}

double frobenius_norm(const Mat& A) {
    double s = 0.0;
    for (double x : A.a) s += x * x;
    return std::sqrt(s);
}

double max_abs(const Mat& A) {
    double m = 0.0;
    for (double x : A.a) m = std::max(m, std::fabs(x));
    return m;
}

double trace(const Mat& A) {
    double t = 0.0;
    for (int i = 0; i < std::min(A.rows, A.cols); ++i) t += A(i, i);
    return t;
}

Mat gram_schmidt(const Mat& A) {
    Mat Q = A;
    for (int j = 0; j < Q.cols; ++j) {
        // two passes keep orthogonality at machine precision even for skewed input
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                double r = 0.0;
                for (int k = 0; k < Q.rows; ++k) r += Q(k, i) * Q(k, j);
                for (int k = 0; k < Q.rows; ++k) Q(k, j) -= r * Q(k, i);
            }
        }
        double nrm = 0.0;
        for (int k = 0; k < Q.rows; ++k) nrm += Q(k, j) * Q(k, j);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-300) throw RankDeficient(singular_values(A));
        for (int k = 0; k < Q.rows; ++k) Q(k, j) /= nrm;
    }
    return Q;
}

Mat orthonormal_complement(const Mat& Q) {
    const int N = Q.rows;
    const int k = Q.cols;
    const int m = N - k;
    // threshold well below 1/sqrt(N): the counting argument then guarantees enough
    // surviving identity directions in a single index-order sweep
    const double threshold = 1e-4;

    Mat basis(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < k; ++j) basis(i, j) = Q(i, j);
    int have = k;

    Mat out(N, m);
    for (int cand = 0; cand < N && have < N; ++cand) {
        Vec r(N, 0.0);
        r[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < have; ++i) {
                double proj = 0.0;
                for (int t = 0; t < N; ++t) proj += basis(t, i) * r[t];
                for (int t = 0; t < N; ++t) r[t] -= proj * basis(t, i);
            }
        }
        double nrm = norm(r);
        if (nrm < threshold) continue;
        for (int t = 0; t < N; ++t) {
            basis(t, have) = r[t] / nrm;
            out(t, have - k) = r[t] / nrm;
        }
        ++have;
    }
    if (have != N) throw RankDeficient(singular_values(Q));
    return out;
}

Mat solve(Mat A, Mat B) {
    if (A.rows != A.cols) throw DimensionMismatch("solve needs a square matrix");
    if (A.rows != B.rows) throw DimensionMismatch("solve right-hand side");
    const int n = A.rows;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(A(r, col)) > std::fabs(A(piv, col))) piv = r;
        if (std::fabs(A(piv, col)) < 1e-300) throw RankDeficient(singular_values(A));
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(A(piv, c), A(col, c));
            for (int c = 0; c < B.cols; ++c) std::swap(B(piv, c), B(col, c));
        }
        const double d = A(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) A(r, c) -= f * A(col, c);
            for (int c = 0; c < B.cols; ++c) B(r, c) -= f * B(col, c);
        }
    }
    Mat X(n, B.cols);
    for (int c = 0; c < B.cols; ++c)
        for (int r = n - 1; r >= 0; --r) {
            double s = B(r, c);
            for (int k = r + 1; k < n; ++k) s -= A(r, k) * X(k, c);
            X(r, c) = s / A(r, r);
        }
    return X;
}

Mat inverse(const Mat& A) { return solve(A, Mat::identity(A.rows)); }

EigenSym jacobi_eigen_sym(const Mat& S) {
    if (S.rows != S.cols) throw DimensionMismatch("eigendecomposition needs a square matrix");
    const int n = S.rows;
    Mat A = S;
    // enforce exact symmetry of the working copy
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (A(i, j) + A(j, i));
            A(i, j) = A(j, i) = v;
        }
    Mat V = Mat::identity(n);
    const double scale = std::max(frobenius_norm(A), 1e-300);

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2.0 * A(i, j) * A(i, j);
        if (std::sqrt(off) <= 1e-13 * scale) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = A(p, p), aqq = A(q, q);
                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
                A(p, q) = A(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = A(p, k) = c * akp - s * akq;
                    A(k, q) = A(q, k) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return A(i, i) > A(j, j); });
    EigenSym out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int i = 0; i < n; ++i) {
        out.values[i] = A(order[i], order[i]);
        for (int k = 0; k < n; ++k) out.vectors(k, i) = V(k, order[i]);
    }
    return out;
}

Vec singular_values(const Mat& A) {
    Mat W = A.rows >= A.cols ? A : transpose(A);
    const int r = W.rows, c = W.cols;
    if (c == 0) return {};

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < c - 1; ++i) {
            for (int j = i + 1; j < c; ++j) {
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                for (int k = 0; k < r; ++k) {
                    aii += W(k, i) * W(k, i);
                    ajj += W(k, j) * W(k, j);
                    aij += W(k, i) * W(k, j);
                }
                if (std::fabs(aij) <= 1e-15 * std::sqrt(aii * ajj) + 1e-300) continue;
                rotated = true;
                const double tau = (ajj - aii) / (2.0 * aij);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                for (int k = 0; k < r; ++k) {
                    const double wi = W(k, i), wj = W(k, j);
                    W(k, i) = cs * wi - sn * wj;
                    W(k, j) = sn * wi + cs * wj;
                }
            }
        }
        if (!rotated) break;
    }

    Vec sv(c);
    for (int j = 0; j < c; ++j) {
        double s = 0.0;
        for (int k = 0; k < r; ++k) s += W(k, j) * W(k, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

int numerical_rank(const Mat& A, double tol) {
    const Vec sv = singular_values(A);
    if (sv.empty()) return 0;
    const double cutoff = tol * std::max(sv.front(), 1.0);
    int r = 0;
    for (double s : sv)
        if (s > cutoff) ++r;
    return r;
}

}  // namespace casorati
