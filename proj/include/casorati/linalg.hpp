#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace casorati {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Small sizes only; everything here is O(n^3)
/// with no blocking, which is the right trade for frames and operators of dimension
/// a handful.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    Mat(int r, int c, std::initializer_list<double> vals) : rows(r), cols(c), a(vals) {}

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static Mat identity(int k);

    Vec col(int j) const;
    void set_col(int j, const Vec& v);

    bool operator==(const Mat& other) const = default;
};

Mat operator*(const Mat& A, const Mat& B);
Mat operator+(const Mat& A, const Mat& B);
Mat operator-(const Mat& A, const Mat& B);
Mat operator*(double s, const Mat& A);
Mat transpose(const Mat& A);
Vec matvec(const Mat& A, const Vec& x);

double dot(const Vec& x, const Vec& y);
double norm(const Vec& x);
Vec operator+(const Vec& x, const Vec& y);
Vec operator-(const Vec& x, const Vec& y);
Vec operator*(double s, const Vec& x);

double frobenius_norm(const Mat& A);
double max_abs(const Mat& A);
double trace(const Mat& A);

/// Orthonormalize the columns of A in index order (modified Gram-Schmidt with a
/// second orthogonalization pass). Throws RankDeficient if a column collapses.
Mat gram_schmidt(const Mat& A);

/// Extend the orthonormal columns of Q (N x k) to a full orthonormal basis of R^N by
/// sweeping the ambient identity in index order and keeping directions whose residual
/// survives a rank threshold. Returns the N x (N-k) complement.
Mat orthonormal_complement(const Mat& Q);

/// Solve A X = B by Gaussian elimination with partial pivoting. A must be square.
Mat solve(Mat A, Mat B);
Mat inverse(const Mat& A);

struct EigenSym {
    Vec values;   // descending
    Mat vectors;  // orthonormal columns, vectors.col(i) pairs with values[i]
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations, swept in
/// deterministic row order until the off-diagonal norm falls below 1e-13 relative.
EigenSym jacobi_eigen_sym(const Mat& S);

/// Singular values of A, descending (one-sided Jacobi on the shorter side).
Vec singular_values(const Mat& A);

/// Number of singular values above tol * max(sigma_max, 1).
int numerical_rank(const Mat& A, double tol);

}  // namespace casorati
