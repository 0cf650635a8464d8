#pragma once

#include "radical/bases.hpp"
#include "radical/sha.hpp"

namespace radical {

// Right-translated derivative of the decomposition map at (1, gamma) in the
// direction (A, B, Z) in End(W) + Lie(H) + s:
// u(A xi - xi B, (A xi - xi B) xi* + eta A* + A eta - gm_G Xi(gm Z) gm_G ups).
template <typename T>
NilpotentVector<T> dsha_analytic(const SpaceFrame<T>& f, const XiKit<T>& kit, const Mat<T>& A,
                                 const Mat<T>& B, const Mat<T>& Z, const Mat<T>& gamma) {
    Mat<T> gm_G = kit.h_G(gamma);
    Mat<T> eta = gm_G * kit.upsilon();
    Mat<T> a = A * kit.xi() - kit.xi() * B;
    Mat<T> b = a * kit.xi_star() + eta * f.star_end_W(A) + A * eta -
               gm_G * kit.Xi(gamma * Z) * gm_G * kit.upsilon();
    return {a, b};
}

// Second assembled basis of Lie(N): the image of the chart directions under
// the derivative at (1, gamma).
template <typename T>
std::vector<NilpotentVector<T>> basis_B2(const SpaceFrame<T>& f, const XiKit<T>& kit,
                                         const CalibratedBases<T>& cb, const Mat<T>& gamma) {
    std::vector<NilpotentVector<T>> out;
    const std::size_t w = f.dim_W(), x = f.dim_X();
    Mat<T> zw(w, w), zx(x, x);
    for (const auto& a : cb.A) out.push_back(dsha_analytic(f, kit, a, zx, zx, gamma));
    for (const auto& b : cb.B) out.push_back({-(kit.xi() * b), zw});
    for (const auto& c : cb.C)
        out.push_back({-(kit.xi() * c), -(kit.xi() * c * kit.xi_star())});
    for (const auto& z : cb.Z) {
        auto d = dsha_analytic(f, kit, Mat<T>(w, w), zx, z, gamma);
        out.push_back(d);
    }
    return out;
}

// Matrix of L(gamma) in the first basis: L sends the first basis to the
// second one entrywise.
template <typename T>
Mat<T> L_of_gamma(const SpaceFrame<T>& f, const XiKit<T>& kit, const CalibratedBases<T>& cb,
                  const Mat<T>& gamma) {
    Mat<T> m1 = coords_matrix(f, basis_B1(f, kit, cb));
    Mat<T> m2 = coords_matrix(f, basis_B2(f, kit, cb, gamma));
    return solve(m1, m2);
}

template <typename T>
T det_L(const SpaceFrame<T>& f, const XiKit<T>& kit, const CalibratedBases<T>& cb,
        const Mat<T>& gamma) {
    return det(L_of_gamma(f, kit, cb, gamma));
}

template <typename T>
T det_L(const SpaceFrame<T>& f, const XiKit<T>& kit, const CalibratedBases<T>& cb,
        const TorusPoint<T>& p) {
    auto reg = torus_regularity(f, p);
    if (!reg.regular) throw std::domain_error("irregular torus point");
    return det_L(f, kit, cb, torus_embed(f, p));
}

// Determinant of Ad(m) acting on Lie(N), computed directly on coordinates.
template <typename T>
T delta_N_direct(const SpaceFrame<T>& f, const LeviElement<T>& m) {
    const std::size_t d = f.dim_n();
    Mat<T> h_inv = inverse(m.h);
    Mat<T> g_star = f.star_end_W(m.g);
    Mat<T> act(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<T> e(d);
        e[j] = scalar_traits<T>::one();
        auto u = nilpotent_from_coords(f, e);
        NilpotentVector<T> v{m.g * u.a * h_inv, m.g * u.b * g_star};
        auto col = nilpotent_coords(f, v);
        for (std::size_t i = 0; i < d; ++i) act(i, j) = col[i];
    }
    return det(act);
}

// Closed form of |delta_N| on the same backend as the direct computation.
template <typename T>
T delta_N_closed(const SpaceFrame<T>& f, const LeviElement<T>& m) {
    T dg = scalar_traits<T>::abs(det(m.g));
    T acc = scalar_traits<T>::one();
    for (long k = 0; k < delta_N_exponent(f.config()); ++k) acc = acc * dg;
    return acc;
}

// ---------------------------------------------------------------------------
// Numeric finite-difference leg (real backend).

inline Mat<double> mat_exp(const Mat<double>& a) {
    double norm = a.max_abs();
    int squarings = 0;
    Mat<double> b = a;
    while (norm > 0.25) {
        b = b * 0.5;
        norm *= 0.5;
        ++squarings;
    }
    Mat<double> term = Mat<double>::identity(a.rows());
    Mat<double> sum = term;
    for (int k = 1; k <= 20; ++k) {
        term = term * b * (1.0 / k);
        sum = sum + term;
        if (term.max_abs() < 1e-18) break;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

// One chart direction through (m0, gamma): group path for the Levi part and
// torus path for the S part.
struct ChartDirection {
    enum Family { A, B, C, Z } family;
    std::size_t index;  // within its family
};

inline std::vector<ChartDirection> chart_directions(const CalibratedBases<double>& cb) {
    std::vector<ChartDirection> out;
    for (std::size_t i = 0; i < cb.A.size(); ++i) out.push_back({ChartDirection::A, i});
    for (std::size_t i = 0; i < cb.B.size(); ++i) out.push_back({ChartDirection::B, i});
    for (std::size_t i = 0; i < cb.C.size(); ++i) out.push_back({ChartDirection::C, i});
    for (std::size_t i = 0; i < cb.Z.size(); ++i) out.push_back({ChartDirection::Z, i});
    return out;
}

namespace detail {

inline UnipotentElement<double> chart_point(const SpaceFrame<double>& f,
                                            const XiKit<double>& kit,
                                            const CalibratedBases<double>& cb,
                                            const ChartDirection& dir, double s,
                                            const LeviElement<double>& m0,
                                            const Mat<double>& gamma) {
    LeviElement<double> step = LeviElement<double>::identity(f);
    Mat<double> gm = gamma;
    switch (dir.family) {
        case ChartDirection::A: step.g = mat_exp(cb.A[dir.index] * s); break;
        case ChartDirection::B: step.h = mat_exp(cb.B[dir.index] * s); break;
        case ChartDirection::C: step.h = mat_exp(cb.C[dir.index] * s); break;
        case ChartDirection::Z: gm = gamma * mat_exp(cb.Z[dir.index] * s); break;
    }
    // Base point on the left: the whole chart is then the Ad(m0) image of
    // the identity chart, and the determinant factors through delta_N(m0).
    return sha(f, kit, m_mul(m0, step), gm);
}

inline std::vector<double> chart_difference(const SpaceFrame<double>& f,
                                            const XiKit<double>& kit,
                                            const CalibratedBases<double>& cb,
                                            const ChartDirection& dir, double h,
                                            const LeviElement<double>& m0,
                                            const Mat<double>& gamma,
                                            const UnipotentElement<double>& base_inv) {
    auto plus = n_mul(f, chart_point(f, kit, cb, dir, h, m0, gamma), base_inv);
    auto minus = n_mul(f, chart_point(f, kit, cb, dir, -h, m0, gamma), base_inv);
    Mat<double> b = (plus.eta - minus.eta) * (0.5 / h);
    // The group constraint only holds to O(h) here; keep the skew part.
    b = (b - f.star_eta(b)) * 0.5;
    NilpotentVector<double> diff{(plus.xi - minus.xi) * (0.5 / h), b};
    return nilpotent_coords(f, diff);
}

}  // namespace detail

// Central difference with one Richardson step: (4 D(h/2) - D(h)) / 3.
inline std::vector<double> dsha_numeric(const SpaceFrame<double>& f, const XiKit<double>& kit,
                                        const CalibratedBases<double>& cb,
                                        const ChartDirection& dir,
                                        const LeviElement<double>& m0, const Mat<double>& gamma,
                                        double h = 1e-4) {
    auto base = sha(f, kit, m0, gamma);
    auto base_inv = n_inv(f, base);
    auto d1 = detail::chart_difference(f, kit, cb, dir, h, m0, gamma, base_inv);
    auto d2 = detail::chart_difference(f, kit, cb, dir, h * 0.5, m0, gamma, base_inv);
    std::vector<double> out(d1.size());
    for (std::size_t i = 0; i < d1.size(); ++i) out[i] = (4.0 * d2[i] - d1[i]) / 3.0;
    return out;
}

struct JacobianReport {
    GroupConfig config;
    std::vector<double> torus;
    double det_numeric = 0.0;
    double det_analytic = 0.0;
    double det_closed = 0.0;
    double delta_N_value = 0.0;
    double gap_numeric = 0.0;   // |det_numeric| vs |delta_N * det_analytic|
    double gap_closed = 0.0;    // |det_analytic| vs det_closed
    int sign_analytic = 0;
    bool ok(double tol_numeric = 1e-6, double tol_closed = 1e-9) const {
        return gap_numeric <= tol_numeric && gap_closed <= tol_closed;
    }
};

// Full verification at (m, gamma): the finite-difference determinant of the
// chart matches |delta_N(m)| |det L(gamma)|, and the analytic determinant
// matches its closed form.
inline JacobianReport jacobian_verify(const SpaceFrame<double>& f, const XiKit<double>& kit,
                                      const CalibratedBases<double>& cb, const RootDatum& rd,
                                      const LeviElement<double>& m,
                                      const TorusPoint<double>& p, double h = 1e-4) {
    auto reg = torus_regularity(f, p);
    if (!reg.regular) throw std::domain_error("irregular torus point");
    JacobianReport rep;
    rep.config = f.config();
    rep.torus = p.t;
    Mat<double> gamma = torus_embed(f, p);

    double la = det_L(f, kit, cb, gamma);
    rep.det_analytic = la;
    rep.sign_analytic = la >= 0 ? +1 : -1;
    rep.det_closed = det_L_closed(f, rd, p);
    rep.gap_closed = std::fabs(std::fabs(la) - rep.det_closed) /
                     std::max(1.0, std::fabs(rep.det_closed));

    rep.delta_N_value = delta_N_closed(f, m);

    Mat<double> m1 = coords_matrix(f, basis_B1(f, kit, cb));
    auto dirs = chart_directions(cb);
    Mat<double> jac(f.dim_n(), dirs.size());
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        auto col = dsha_numeric(f, kit, cb, dirs[j], m, gamma, h);
        for (std::size_t i = 0; i < col.size(); ++i) jac(i, j) = col[i];
    }
    // Express the numeric columns in the first calibrated basis.
    Mat<double> in_b1 = solve(m1, jac);
    rep.det_numeric = det(in_b1);
    double expected = rep.delta_N_value * std::fabs(la);
    rep.gap_numeric = std::fabs(std::fabs(rep.det_numeric) - expected) /
                      std::max(1.0, expected);
    return rep;
}

}  // namespace radical
