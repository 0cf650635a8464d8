#pragma once

#include <string>

#include "radical/xikit.hpp"

namespace radical {

// A point of the split maximal torus of H^E acting on X: coordinates
// (t_1, ..., t_n) with gamma f_i = t_i f_i, gamma f_i' = t_i^{-1} f_i',
// identity on E.
template <typename T>
struct TorusPoint {
    std::vector<T> t;

    static TorusPoint from(std::vector<T> values) { return {std::move(values)}; }
};

template <typename T>
Mat<T> torus_embed(const SpaceFrame<T>& f, const TorusPoint<T>& p) {
    if (p.t.size() != f.n()) throw std::invalid_argument("torus point has wrong rank");
    const std::size_t n = f.n(), r = f.r();
    Mat<T> g = Mat<T>::identity(f.dim_X());
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) = p.t[i];
        // X-basis order puts f_n', ..., f_1' after E.
        g(n + r + i, n + r + i) = scalar_traits<T>::div(scalar_traits<T>::one(), p.t[n - 1 - i]);
    }
    return g;
}

// gamma_G = (Xi(gamma - 1))^{-1} in closed form for torus points:
// diag((t_i - 1)^{-1}, (t_i^{-1} - 1)^{-1}).
template <typename T>
Mat<T> torus_gamma_G(const SpaceFrame<T>& f, const TorusPoint<T>& p) {
    const std::size_t n = f.n();
    Mat<T> g(f.dim_W(), f.dim_W());
    const T one = scalar_traits<T>::one();
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) = scalar_traits<T>::div(one, p.t[i] - one);
        // The standard xi matches w_{n+i} with f_{n-i}', eigenvalue t_{n-i}^{-1}.
        const T& tt = p.t[n - 1 - i];
        g(n + i, n + i) = scalar_traits<T>::div(one, scalar_traits<T>::div(one, tt) - one);
    }
    return g;
}

struct RegularityReport {
    bool regular = true;
    bool near_minus_one = false;  // some t_i at -1: fine for the orthogonal
                                  // family, flagged for the symplectic one
    std::vector<std::string> failures;
};

// Regular means no restricted root takes the value 1 at gamma and gamma - 1
// is invertible on the moving part of X.
template <typename T>
RegularityReport torus_regularity(const SpaceFrame<T>& f, const TorusPoint<T>& p,
                                  double tol = 1e-9) {
    RegularityReport rep;
    auto bad = [&](const T& v) { return scalar_close(v, scalar_traits<T>::one(), tol); };
    const std::size_t n = f.n();
    const T one = scalar_traits<T>::one();
    const T neg_one = scalar_traits<T>::zero() - one;
    for (std::size_t i = 0; i < n; ++i) {
        if (bad(p.t[i])) {
            rep.regular = false;
            rep.failures.push_back("t_" + std::to_string(i + 1) + " = 1");
        }
        if (scalar_close(p.t[i], neg_one, tol)) {
            rep.near_minus_one = true;
            if (f.epsilon() == -1) {
                rep.regular = false;
                rep.failures.push_back("t_" + std::to_string(i + 1) + " = -1 (long root)");
            }
        }
        if (f.epsilon() == -1 && bad(p.t[i] * p.t[i])) {
            if (!scalar_close(p.t[i], neg_one, tol) && !bad(p.t[i])) {
                rep.regular = false;
                rep.failures.push_back("t_" + std::to_string(i + 1) + "^2 = 1");
            }
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (bad(scalar_traits<T>::div(p.t[i], p.t[j]))) {
                rep.regular = false;
                rep.failures.push_back("t_" + std::to_string(i + 1) + " = t_" +
                                       std::to_string(j + 1));
            }
            if (bad(p.t[i] * p.t[j])) {
                rep.regular = false;
                rep.failures.push_back("t_" + std::to_string(i + 1) + " t_" +
                                       std::to_string(j + 1) + " = 1");
            }
        }
    }
    return rep;
}

// Modulus exponent of the Levi action on N: delta_N(m(g, h)) =
// |det g|^(dim W + dim X -+ 1), minus for orthogonal, plus for symplectic.
inline long delta_N_exponent(const GroupConfig& cfg) {
    return (long)cfg.dim_W() + (long)cfg.dim_X() - (long)cfg.epsilon;
}

template <typename T>
double delta_N(const SpaceFrame<T>& f, const LeviElement<T>& m) {
    double d = std::fabs(scalar_traits<T>::to_double(det(m.g)));
    return std::pow(d, (double)delta_N_exponent(f.config()));
}

}  // namespace radical
