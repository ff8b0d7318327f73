#pragma once

#include <cmath>

#include "casorati/errors.hpp"
#include "casorati/linalg.hpp"

namespace casorati {

/// Second-order forward-mode jet: value, gradient and Hessian with respect to the
/// n chart variables. The Hessian is kept exactly symmetric by construction: every
/// update writes the upper triangle and mirrors it.
struct Jet2 {
    double value = 0.0;
    Vec grad;  // n
    Mat hess;  // n x n

    Jet2() = default;
    explicit Jet2(int n) : grad(n, 0.0), hess(n, n) {}

    int dim() const { return static_cast<int>(grad.size()); }

    static Jet2 constant(double v, int n) {
        Jet2 j(n);
        j.value = v;
        return j;
    }
    static Jet2 variable(int index, double v, int n) {
        Jet2 j(n);
        j.value = v;
        j.grad[index] = 1.0;
        return j;
    }
};

namespace detail {

inline void mirror_upper(Mat& H) {
    for (int i = 0; i < H.rows; ++i)
        for (int j = i + 1; j < H.cols; ++j) H(j, i) = H(i, j);
}

}  // namespace detail

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2 r(a.dim());
    r.value = a.value + b.value;
    for (int i = 0; i < r.dim(); ++i) r.grad[i] = a.grad[i] + b.grad[i];
    for (int i = 0; i < r.dim(); ++i)
        for (int j = i; j < r.dim(); ++j) r.hess(i, j) = a.hess(i, j) + b.hess(i, j);
    detail::mirror_upper(r.hess);
    return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    Jet2 r(a.dim());
    r.value = a.value - b.value;
    for (int i = 0; i < r.dim(); ++i) r.grad[i] = a.grad[i] - b.grad[i];
    for (int i = 0; i < r.dim(); ++i)
        for (int j = i; j < r.dim(); ++j) r.hess(i, j) = a.hess(i, j) - b.hess(i, j);
    detail::mirror_upper(r.hess);
    return r;
}

inline Jet2 operator-(const Jet2& a) {
    Jet2 r = a;
    r.value = -r.value;
    for (double& g : r.grad) g = -g;
    for (double& h : r.hess.a) h = -h;
    return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r(a.dim());
    r.value = a.value * b.value;
    for (int i = 0; i < r.dim(); ++i) r.grad[i] = a.grad[i] * b.value + b.grad[i] * a.value;
    for (int i = 0; i < r.dim(); ++i)
        for (int j = i; j < r.dim(); ++j)
            r.hess(i, j) = a.value * b.hess(i, j) + b.value * a.hess(i, j) +
                           a.grad[i] * b.grad[j] + b.grad[i] * a.grad[j];
    detail::mirror_upper(r.hess);
    return r;
}

/// Chain rule through a scalar function given its first and second derivative at x.value.
inline Jet2 jet_compose(const Jet2& x, double f, double df, double ddf) {
    Jet2 r(x.dim());
    r.value = f;
    for (int i = 0; i < r.dim(); ++i) r.grad[i] = df * x.grad[i];
    for (int i = 0; i < r.dim(); ++i)
        for (int j = i; j < r.dim(); ++j)
            r.hess(i, j) = df * x.hess(i, j) + ddf * x.grad[i] * x.grad[j];
    detail::mirror_upper(r.hess);
    return r;
}

inline Jet2 jet_reciprocal(const Jet2& x) {
    if (std::fabs(x.value) < 1e-300) throw DomainError("divide", x.value);
    const double inv = 1.0 / x.value;
    return jet_compose(x, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * jet_reciprocal(b); }

/// Integer power by repeated multiplication, so negative bases stay in the real domain.
inline Jet2 jet_powi(const Jet2& x, long long k) {
    if (k < 0) return jet_reciprocal(jet_powi(x, -k));
    Jet2 acc = Jet2::constant(1.0, x.dim());
    Jet2 base = x;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return acc;
}

inline Jet2 jet_sin(const Jet2& x) {
    const double s = std::sin(x.value), c = std::cos(x.value);
    return jet_compose(x, s, c, -s);
}
inline Jet2 jet_cos(const Jet2& x) {
    const double s = std::sin(x.value), c = std::cos(x.value);
    return jet_compose(x, c, -s, -c);
}
inline Jet2 jet_tan(const Jet2& x) {
    const double t = std::tan(x.value);
    const double sec2 = 1.0 + t * t;
    return jet_compose(x, t, sec2, 2.0 * t * sec2);
}
inline Jet2 jet_exp(const Jet2& x) {
    const double e = std::exp(x.value);
    return jet_compose(x, e, e, e);
}
inline Jet2 jet_log(const Jet2& x) {
    if (x.value <= 0.0) throw DomainError("log", x.value);
    const double inv = 1.0 / x.value;
    return jet_compose(x, std::log(x.value), inv, -inv * inv);
}
inline Jet2 jet_sqrt(const Jet2& x) {
    if (x.value <= 0.0) throw DomainError("sqrt", x.value);
    const double s = std::sqrt(x.value);
    return jet_compose(x, s, 0.5 / s, -0.25 / (s * x.value));
}
inline Jet2 jet_sinh(const Jet2& x) {
    const double sh = std::sinh(x.value), ch = std::cosh(x.value);
    return jet_compose(x, sh, ch, sh);
}
inline Jet2 jet_cosh(const Jet2& x) {
    const double sh = std::sinh(x.value), ch = std::cosh(x.value);
    return jet_compose(x, ch, sh, ch);
}
inline Jet2 jet_atan(const Jet2& x) {
    const double d = 1.0 + x.value * x.value;
    return jet_compose(x, std::atan(x.value), 1.0 / d, -2.0 * x.value / (d * d));
}

/// General power x^y through exp(y log x); requires a strictly positive base.
inline Jet2 jet_pow(const Jet2& x, const Jet2& y) {
    if (x.value <= 0.0) throw DomainError("pow", x.value);
    return jet_exp(y * jet_log(x));
}

}  // namespace casorati
