#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "casorati/expr.hpp"
#include "casorati/geometry.hpp"
#include "casorati/linalg.hpp"

namespace casorati::testing {

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

inline ImmersionSpec make_spec(const std::string& name, int n,
                               const std::vector<std::string>& comps,
                               const ParamMap& params = {},
                               ComplexPairing pairing = ComplexPairing::None) {
    ImmersionSpec spec;
    spec.name = name;
    spec.n = n;
    spec.ambient_dim = static_cast<int>(comps.size());
    spec.pairing = pairing;
    for (const auto& c : comps) spec.components.push_back(Expression::parse(c, n, params));
    return spec;
}

inline ImmersionSpec plane() { return make_spec("plane", 2, {"u1", "u2", "0"}); }

inline ImmersionSpec sphere(double r) {
    return make_spec("sphere", 2,
                     {"r*cos(u1)*cos(u2)", "r*cos(u1)*sin(u2)", "r*sin(u1)"}, {{"r", r}});
}

inline ImmersionSpec cylinder() { return make_spec("cylinder", 2, {"cos(u1)", "sin(u1)", "u2"}); }

inline ImmersionSpec cylinder_codim2() {
    return make_spec("cylinder4", 2, {"cos(u1)", "sin(u1)", "u2", "0"});
}

inline ImmersionSpec monkey_saddle() {
    return make_spec("monkey_saddle", 2, {"u1", "u2", "u1^3 - 3*u1*u2^2"});
}

/// Product of circles of radii r1 and r2 in block coordinates (x1, x2, y1, y2).
inline ImmersionSpec torus(double r1 = 1.0, double r2 = 2.0) {
    return make_spec("torus", 2,
                     {"r1*cos(u1)", "r2*cos(u2)", "r1*sin(u1)", "r2*sin(u2)"},
                     {{"r1", r1}, {"r2", r2}}, ComplexPairing::Block);
}

// ---------------------------------------------------------------------------
// finite-difference oracles (independent of the jet path)
// ---------------------------------------------------------------------------

inline Vec fd_gradient(const Expression& f, const Vec& u, double h = 1e-4) {
    Vec g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        Vec up = u, um = u;
        up[i] += h;
        um[i] -= h;
        g[i] = (f.eval(up) - f.eval(um)) / (2.0 * h);
    }
    return g;
}

inline Mat fd_hessian(const Expression& f, const Vec& u, double h = 1e-4) {
    const int n = static_cast<int>(u.size());
    Mat H(n, n);
    for (int i = 0; i < n; ++i) {
        Vec up = u, um = u;
        up[i] += h;
        um[i] -= h;
        H(i, i) = (f.eval(up) - 2.0 * f.eval(u) + f.eval(um)) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            Vec upp = u, upm = u, ump = u, umm = u;
            upp[i] += h; upp[j] += h;
            upm[i] += h; upm[j] -= h;
            ump[i] -= h; ump[j] += h;
            umm[i] -= h; umm[j] -= h;
            H(i, j) = H(j, i) =
                (f.eval(upp) - f.eval(upm) - f.eval(ump) + f.eval(umm)) / (4.0 * h * h);
        }
    }
    return H;
}

/// Jet of an immersion with jacobian and hessians from finite differences of the
/// component values only; an independent route to the second fundamental form.
inline ImmersionJet fd_immersion_jet(const ImmersionSpec& spec, const Vec& u, double h = 1e-5) {
    ImmersionJet jet;
    const int N = spec.ambient_dim, n = spec.n;
    jet.value.resize(N);
    jet.jacobian = Mat(N, n);
    jet.hessians.assign(N, Mat(n, n));
    for (int c = 0; c < N; ++c) {
        const Expression& f = spec.components[c];
        jet.value[c] = f.eval(u);
        const Vec g = fd_gradient(f, u, h);
        for (int i = 0; i < n; ++i) jet.jacobian(c, i) = g[i];
        jet.hessians[c] = fd_hessian(f, u, h);
        // symmetrize fd noise away
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = 0.5 * (jet.hessians[c](i, j) + jet.hessians[c](j, i));
                jet.hessians[c](i, j) = jet.hessians[c](j, i) = v;
            }
    }
    return jet;
}

// ---------------------------------------------------------------------------
// graph-surface shape operator (independent coordinate-basis route)
// ---------------------------------------------------------------------------

/// Shape-operator matrix of the graph z = F(u1,u2) in the coordinate basis:
/// W = (I + grad F grad F^T)^{-1} Hess F / sqrt(1 + |grad F|^2).
inline Mat graph_weingarten(const Expression& F, const Vec& u) {
    const Jet2 j = F.eval_jet2(u);
    const double g1 = j.grad[0], g2 = j.grad[1];
    const double w2 = 1.0 + g1 * g1 + g2 * g2;
    Mat I(2, 2);
    I(0, 0) = 1.0 + g1 * g1;
    I(0, 1) = I(1, 0) = g1 * g2;
    I(1, 1) = 1.0 + g2 * g2;
    const Mat II = (1.0 / std::sqrt(w2)) * j.hess;
    return solve(I, II);
}

// ---------------------------------------------------------------------------
// randomness
// ---------------------------------------------------------------------------

inline Vec random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(dim);
    double nrm = 0.0;
    do {
        for (double& c : v) c = gauss(rng);
        nrm = norm(v);
    } while (nrm < 1e-8);
    for (double& c : v) c /= nrm;
    return v;
}

inline Mat random_orthogonal(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat A(dim, dim);
    for (double& x : A.a) x = gauss(rng);
    return gram_schmidt(A);
}

/// Random expression source of bounded depth over n variables. Safety comes from
/// rejection at the sample point, not from the shape of the tree.
inline std::string random_expression_source(std::mt19937_64& rng, int n, int depth) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    if (depth == 0 || uni(rng) < 0.25) {
        if (uni(rng) < 0.5) return "u" + std::to_string(1 + rng() % n);
        return std::to_string(-2.0 + 4.0 * uni(rng));
    }
    switch (rng() % 8) {
        case 0:
            return "(" + random_expression_source(rng, n, depth - 1) + " + " +
                   random_expression_source(rng, n, depth - 1) + ")";
        case 1:
            return "(" + random_expression_source(rng, n, depth - 1) + " - " +
                   random_expression_source(rng, n, depth - 1) + ")";
        case 2:
            return "(" + random_expression_source(rng, n, depth - 1) + " * " +
                   random_expression_source(rng, n, depth - 1) + ")";
        case 3:
            return "(" + random_expression_source(rng, n, depth - 1) + " / " +
                   random_expression_source(rng, n, depth - 1) + ")";
        case 4:
            return "(" + random_expression_source(rng, n, depth - 1) + ")^" +
                   std::to_string(2 + rng() % 2);
        case 5: {
            static const char* fns[] = {"sin", "cos", "exp", "sinh", "cosh", "atan", "tan"};
            return std::string(fns[rng() % 7]) + "(" +
                   random_expression_source(rng, n, depth - 1) + ")";
        }
        case 6: {
            static const char* pos_fns[] = {"log", "sqrt"};
            return std::string(pos_fns[rng() % 2]) + "((" +
                   random_expression_source(rng, n, depth - 1) + ")^2 + " +
                   std::to_string(0.5 + uni(rng)) + ")";
        }
        default: return "-(" + random_expression_source(rng, n, depth - 1) + ")";
    }
}

/// Sample filter for the fd property tests: finite and moderate jets only.
inline bool jet_tame(const Jet2& j) {
    if (!std::isfinite(j.value) || std::fabs(j.value) > 50.0) return false;
    for (double g : j.grad)
        if (!std::isfinite(g) || std::fabs(g) > 50.0) return false;
    for (double h : j.hess.a)
        if (!std::isfinite(h) || std::fabs(h) > 200.0) return false;
    return true;
}

/// Random polynomial potential of total degree <= deg with coefficients in [-1, 1].
inline Expression random_polynomial(std::mt19937_64& rng, int n, int deg) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::string src;
    // enumerate monomials u1^a1 ... un^an with a1+...+an <= deg
    std::vector<int> exps(n, 0);
    const std::function<void(int, int)> emit = [&](int var, int remaining) {
        if (var == n) {
            int total = 0;
            for (int e : exps) total += e;
            if (total == 0) return;  // constant does not matter
            std::string mono = std::to_string(coeff(rng));
            for (int i = 0; i < n; ++i) {
                if (exps[i] == 0) continue;
                mono += "*u" + std::to_string(i + 1);
                if (exps[i] > 1) mono += "^" + std::to_string(exps[i]);
            }
            src += src.empty() ? mono : " + " + mono;
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            exps[var] = e;
            emit(var + 1, remaining - e);
        }
        exps[var] = 0;
    };
    emit(0, deg);
    return Expression::parse(src, n);
}

}  // namespace casorati::testing
