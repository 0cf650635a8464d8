#pragma once

#include "radical/lie.hpp"

namespace radical {

template <typename T>
LeviElement<T> m_mul(const LeviElement<T>& a, const LeviElement<T>& b) {
    return {a.g * b.g, a.h * b.h};
}

// Diagonal embedding of an isometry of X into the Levi: Delta(h) = m(Xi(h), h).
template <typename T>
LeviElement<T> Delta(const XiKit<T>& kit, const Mat<T>& h) {
    return {kit.Xi(h), h};
}

// The decomposition map: Sha(m, gamma) = Ad(m) n_S(gamma).
template <typename T>
UnipotentElement<T> sha(const SpaceFrame<T>& f, const XiKit<T>& kit, const LeviElement<T>& m,
                        const Mat<T>& gamma) {
    return ad(f, m, kit.n_S(gamma));
}

template <typename T>
UnipotentElement<T> sha(const SpaceFrame<T>& f, const XiKit<T>& kit, const LeviElement<T>& m,
                        const TorusPoint<T>& p) {
    return sha(f, kit, m, torus_embed(f, p));
}

// The full fiber of Sha through (m, gamma): one point per Weyl element.
template <typename T>
std::vector<std::pair<LeviElement<T>, TorusPoint<T>>> fiber(const SpaceFrame<T>& f,
                                                            const XiKit<T>& kit,
                                                            const LeviElement<T>& m,
                                                            const TorusPoint<T>& p) {
    std::vector<std::pair<LeviElement<T>, TorusPoint<T>>> out;
    for (const auto& w : weyl_group(f)) {
        TorusPoint<T> q = p;
        // gamma |-> w^{-1} gamma w moves the coordinates by the inverse action.
        Mat<T> hw_inv = inverse(w.h);
        Mat<T> moved = hw_inv * torus_embed(f, p) * w.h;
        // Read the coordinates off the diagonal.
        std::vector<T> t(f.n());
        for (std::size_t i = 0; i < f.n(); ++i) t[i] = moved(i, i);
        q.t = t;
        out.push_back({m_mul(m, Delta(kit, w.h)), q});
    }
    return out;
}

enum class TorusClass { none, split, compact, mixed };

inline const char* torus_class_name(TorusClass c) {
    switch (c) {
        case TorusClass::split: return "split";
        case TorusClass::compact: return "compact";
        case TorusClass::mixed: return "mixed";
        default: return "none";
    }
}

// Classify whether n lies over a regular torus class: eta invertible and the
// norm regular semisimple with eigenvalues off the unit spots +-1.  On the
// exact backend an irrational spectrum reports none.
template <typename T>
TorusClass classify(const SpaceFrame<T>& f, const UnipotentElement<T>& n,
                    double tol = 1e-8) {
    Mat<T> gamma;
    try {
        gamma = norm(f, n);
    } catch (const std::domain_error&) {
        return TorusClass::none;
    }
    Spectrum<T> spec;
    try {
        spec = eigen_split(gamma);
    } catch (const std::domain_error&) {
        return TorusClass::none;
    }
    std::size_t split_pairs = 0, compact_pairs = 0, fixed_dim = 0;
    std::vector<double> invariants;  // lambda + 1/lambda, distinct per pair
    for (const auto& it : spec.items) {
        double re = scalar_traits<T>::to_double(it.re);
        double im = scalar_traits<T>::to_double(it.im);
        if (im == 0.0 && std::fabs(re - 1.0) <= tol) {
            fixed_dim += it.space.cols();
            continue;
        }
        if (im == 0.0) {
            if (std::fabs(std::fabs(re) - 1.0) <= tol) return TorusClass::none;
            if (std::fabs(re) < 1.0) continue;  // counted through its partner
            if (it.space.cols() != 1) return TorusClass::none;
            ++split_pairs;
            invariants.push_back(re + 1.0 / re);
        } else {
            if (im < 0) continue;  // conjugate counted once
            if (it.space.cols() != 2) return TorusClass::none;
            ++compact_pairs;
            invariants.push_back(2.0 * re);
        }
    }
    if (fixed_dim != f.r()) return TorusClass::none;
    if (split_pairs + compact_pairs != f.n()) return TorusClass::none;
    for (std::size_t i = 0; i < invariants.size(); ++i)
        for (std::size_t j = i + 1; j < invariants.size(); ++j)
            if (std::fabs(invariants[i] - invariants[j]) <= tol) return TorusClass::none;
    if (compact_pairs == 0) return TorusClass::split;
    if (split_pairs == 0 && f.n() == 1) return TorusClass::compact;
    return TorusClass::mixed;
}

// Kit adapted to the compact torus class of the rank-one orthogonal family:
// xi kills the fixed space of the standard compact rotation.  For the
// symplectic family the standard kit already works.
template <typename T>
XiKit<T> compact_kit(const SpaceFrame<T>& f) {
    if (f.epsilon() != +1) return XiKit<T>::standard(f);
    if (f.n() != 1 || f.r() < 1)
        throw std::domain_error("compact class needs n = 1 and r >= 1");
    const std::size_t x = f.dim_X();
    // Basis adapted to the compact frame: u+ = f1 + f1', e_1, u- = f1 - f1',
    // then the remaining e's.  xi_c sends u+ |-> w1, e_1 |-> w2, rest to 0.
    Mat<T> basis(x, x);
    basis(0, 0) = scalar_traits<T>::one();
    basis(x - 1, 0) = scalar_traits<T>::one();
    basis(1, 1) = scalar_traits<T>::one();
    basis(0, 2) = scalar_traits<T>::one();
    basis(x - 1, 2) = -scalar_traits<T>::one();
    for (std::size_t j = 3; j < x; ++j) basis(j - 1, j) = scalar_traits<T>::one();
    Mat<T> xi(2, x);
    xi(0, 0) = scalar_traits<T>::one();
    xi(1, 1) = scalar_traits<T>::one();
    return XiKit<T>(f, xi * inverse(basis));
}

// The standard compact rotation by theta for rank one: a rotation of the
// moving plane, identity on the fixed space.  Real backend only.
inline Mat<double> compact_embed(const SpaceFrame<double>& f, double theta) {
    if (f.n() != 1) throw std::domain_error("compact class needs n = 1");
    const std::size_t x = f.dim_X();
    double c = std::cos(theta), s = std::sin(theta);
    Mat<double> g = Mat<double>::identity(x);
    if (f.epsilon() == -1) {
        // Moving plane (f1, f1'), symplectic rotation.
        g(0, 0) = c;
        g(0, x - 1) = s;
        g(x - 1, 0) = -s;
        g(x - 1, x - 1) = c;
    } else {
        if (f.r() < 1) throw std::domain_error("compact class needs r >= 1");
        // Moving plane spanned by (f1 + f1')/sqrt(2) and e1 (both unit).
        double rt = 1.0 / std::sqrt(2.0);
        // Columns of the orthonormal plane frame in X coordinates.
        Mat<double> p1(x, 1), p2(x, 1);
        p1(0, 0) = rt;
        p1(x - 1, 0) = rt;
        p2(1, 0) = 1.0;
        // gamma p1 = c p1 + s p2, gamma p2 = -s p1 + c p2; identity elsewhere.
        Mat<double> delta = (p1 * (c - 1.0) + p2 * s) * p1.transpose() +
                            (p1 * (-s) + p2 * (c - 1.0)) * p2.transpose();
        // p1, p2 are orthonormal for the form here, so the Euclidean projector
        // matches the form projector on the plane.
        g = Mat<double>::identity(x) + delta;
    }
    return g;
}

template <typename T>
struct DecompositionResult {
    TorusClass cls = TorusClass::none;
    LeviElement<T> m;
    TorusPoint<T> torus;  // split coordinates, |t| > 1, sorted descending
    double angle = 0.0;   // compact angle in (0, pi)
    Mat<T> gamma;         // canonical torus element on X
};

namespace detail {

template <typename T>
Mat<T> normalize_column(Mat<T> v) {
    // Deterministic scaling: make the largest entry (first maximal) one.
    std::size_t best = 0;
    double bv = 0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
        double a = std::fabs(scalar_traits<T>::to_double(v(i, 0)));
        if (a > bv + 1e-12) { bv = a; best = i; }
    }
    return v * scalar_traits<T>::div(scalar_traits<T>::one(), v(best, 0));
}

// Shared tail of decompose: with the conjugator h (h gamma' h^{-1} = gamma)
// in hand, recover the Levi pair.
template <typename T>
LeviElement<T> recover_levi(const SpaceFrame<T>& f, const XiKit<T>& kit,
                            const UnipotentElement<T>& n, const Mat<T>& h,
                            const Mat<T>& gamma, double tol) {
    Mat<T> g = n.xi * inverse(h) * kit.xi_plus();
    if (scalar_traits<T>::is_zero(det(g), 1e-10))
        throw std::domain_error("decompose: singular Levi part");
    Mat<T> g_inv = inverse(g);
    // Consistency of the eta part before any Witt extension.
    Mat<T> eta_target = g * kit.eta_S(gamma) * f.star_end_W(g);
    if (!mat_close(n.eta, eta_target, tol))
        throw std::domain_error("decompose: eta part inconsistent");
    // Solve xi k = g^{-1} xi_1 for an isometry k of X through the adjoint:
    // k* is prescribed on the image of xi*.
    Mat<T> zeta = g_inv * n.xi;
    Mat<T> zeta_star = f.star_xi(zeta);
    Mat<T> e = witt_extend(kit.xi_star(), zeta_star, f.gram_X(), f.epsilon(), tol);
    Mat<T> k = f.star_end_X(e);
    Mat<T> h1 = inverse(k);
    return {g, h1};
}

}  // namespace detail

// Invert Sha: find (m, gamma) with Ad(m) n_S(gamma) = n and gamma canonical
// in the fundamental domain.  The split class works on both backends (the
// exact one as far as rational spectra and Witt extensions allow); the
// compact class is real-only.
template <typename T>
DecompositionResult<T> decompose(const SpaceFrame<T>& f, const XiKit<T>& kit,
                                 const UnipotentElement<T>& n, double tol = 1e-8) {
    DecompositionResult<T> out;
    out.cls = classify(f, n, tol);
    if (out.cls == TorusClass::none)
        throw std::domain_error("element does not lie over a regular torus class");
    if (out.cls == TorusClass::mixed)
        throw std::domain_error("mixed torus classes are not supported");
    Mat<T> gamma_raw = norm(f, n);
    auto spec = eigen_split(gamma_raw);

    if (out.cls == TorusClass::split) {
        // Representative eigenvalue per pair: |lambda| > 1, sorted descending.
        std::vector<std::pair<T, Mat<T>>> big;
        for (const auto& it : spec.items) {
            double re = scalar_traits<T>::to_double(it.re);
            if (std::fabs(re) > 1.0 + tol) big.push_back({it.re, it.space});
        }
        std::sort(big.begin(), big.end(), [](const auto& a, const auto& b) {
            double x = scalar_traits<T>::to_double(a.first);
            double y = scalar_traits<T>::to_double(b.first);
            if (std::fabs(x) != std::fabs(y)) return std::fabs(x) > std::fabs(y);
            return x > y;
        });
        if (big.size() != f.n()) throw std::domain_error("unexpected split spectrum");
        const std::size_t x = f.dim_X(), nn = f.n(), r = f.r();
        Mat<T> u(x, 2 * nn), images(x, 2 * nn);
        std::vector<T> tvals;
        for (std::size_t i = 0; i < nn; ++i) {
            const T& lam = big[i].first;
            tvals.push_back(lam);
            Mat<T> vp = detail::normalize_column(big[i].second.col(0));
            // Partner eigenvector for 1/lambda.
            T lam_inv = scalar_traits<T>::div(scalar_traits<T>::one(), lam);
            Mat<T> shifted = gamma_raw - Mat<T>::identity(x) * lam_inv;
            Mat<T> vm_all = kernel_basis(shifted, scalar_traits<T>::is_exact ? 1e-8 : 1e-6);
            if (vm_all.cols() != 1) throw std::domain_error("unexpected split spectrum");
            Mat<T> vm = vm_all.col(0);
            // Scale the partner so the pairing matches <f_i, f_i'>.
            std::size_t fi = i, fpi = nn + r + (nn - 1 - i);
            T target = f.gram_X()(fi, fpi);
            T have = (vp.transpose() * f.gram_X() * vm)(0, 0);
            if (scalar_traits<T>::is_zero(have, 1e-10))
                throw std::domain_error("degenerate eigen pairing");
            vm = vm * scalar_traits<T>::div(target, have);
            u.set_block(0, i, vp);
            u.set_block(0, nn + i, vm);
            Mat<T> ef(x, 1), efp(x, 1);
            ef(fi, 0) = scalar_traits<T>::one();
            efp(fpi, 0) = scalar_traits<T>::one();
            images.set_block(0, i, ef);
            images.set_block(0, nn + i, efp);
        }
        Mat<T> h = witt_extend(u, images, f.gram_X(), f.epsilon(), tol);
        out.torus = TorusPoint<T>{tvals};
        out.gamma = torus_embed(f, out.torus);
        if (!mat_close(h * gamma_raw * inverse(h), out.gamma, std::max(tol, 1e-7)))
            throw std::domain_error("decompose: conjugation to the torus failed");
        out.m = detail::recover_levi(f, kit, n, h, out.gamma, tol);
        return out;
    }

    // Compact class: real backend only by construction of the spectra.
    if constexpr (scalar_traits<T>::is_exact) {
        throw std::domain_error("spectrum not rational; use real backend");
    } else {
        const auto* pair = (const SpectrumItem<double>*)nullptr;
        for (const auto& it : spec.items)
            if (it.im != 0.0) pair = &it;
        if (!pair) throw std::domain_error("unexpected compact spectrum");
        const std::size_t x = f.dim_X();
        // Plane basis with gamma' V = V [[c, s], [-s, c]].
        Mat<double> v1 = pair->space.col(0), v2 = pair->space.col(1);
        Mat<double> p1(x, 1), p2(x, 1);
        if (f.epsilon() == +1) {
            // Orthonormalize within the definite plane, preserving the
            // rotation form of the action.
            auto q = [&](const Mat<double>& a, const Mat<double>& b) {
                return (a.transpose() * f.gram_X() * b)(0, 0);
            };
            double q1 = q(v1, v1);
            double plane_sign = q1 > 0 ? 1.0 : -1.0;
            v1 = v1 * (1.0 / std::sqrt(std::fabs(q1)));
            Mat<double> w2 = v2 - v1 * (plane_sign * q(v1, v2));
            double q2 = q(w2, w2);
            w2 = w2 * (1.0 / std::sqrt(std::fabs(q2)));
            p1 = v1;
            p2 = w2;
            // Target plane frame.
            double rt = 1.0 / std::sqrt(2.0);
            Mat<double> t1(x, 1), t2(x, 1);
            t1(0, 0) = rt;
            t1(x - 1, 0) = rt;
            double qe = f.gram_X()(1, 1);
            t2(1, 0) = 1.0 / std::sqrt(std::fabs(qe));
            Mat<double> u = Mat<double>::hstack(p1, p2);
            Mat<double> img = Mat<double>::hstack(t1, t2);
            Mat<double> gu = u.transpose() * f.gram_X() * u;
            Mat<double> gi = img.transpose() * f.gram_X() * img;
            if (!mat_close(gu, gi, 1e-7))
                throw std::domain_error("compact plane signature mismatch");
            Mat<double> h = witt_extend(u, img, f.gram_X(), f.epsilon(), tol);
            Mat<double> conj = h * gamma_raw * inverse(h);
            // Extract the realized angle from the standard plane.
            double cth = (t1.transpose() * f.gram_X() * conj * t1)(0, 0) /
                         (t1.transpose() * f.gram_X() * t1)(0, 0);
            double sth = (t2.transpose() * f.gram_X() * conj * t1)(0, 0) /
                         (t2.transpose() * f.gram_X() * t2)(0, 0);
            double realized = std::atan2(sth, cth);
            if (realized < 0) {
                // Flip the plane orientation: e1 |-> -e1 fixes the fixed
                // space and reverses the angle.
                Mat<double> flip = Mat<double>::identity(x);
                flip(1, 1) = -1.0;
                h = flip * h;
                realized = -realized;
            }
            out.angle = realized;
            out.gamma = compact_embed(f, out.angle);
            auto ckit = compact_kit(f);
            if (!mat_close(h * gamma_raw * inverse(h), out.gamma, 1e-6))
                throw std::domain_error("decompose: conjugation to the compact torus failed");
            out.m = detail::recover_levi(f, ckit, n, h, out.gamma, std::max(tol, 1e-6));
            return out;
        } else {
            // Symplectic: scale the plane pair so <v1, v2> matches <f1, f1'>
            // without disturbing the rotation matrix.
            auto ph = [&](const Mat<double>& a, const Mat<double>& b) {
                return (a.transpose() * f.gram_X() * b)(0, 0);
            };
            double om = ph(v1, v2);
            double target = f.gram_X()(0, x - 1);
            double kappa = om / target;
            if (kappa < 0) {
                // Swap the pair; this flips the rotation angle sign.
                std::swap(v1, v2);
                kappa = ph(v1, v2) / target;
            }
            double sc = 1.0 / std::sqrt(kappa);
            v1 = v1 * sc;
            v2 = v2 * sc;
            Mat<double> u = Mat<double>::hstack(v1, v2);
            Mat<double> img(x, 2);
            img(0, 0) = 1.0;
            img(x - 1, 1) = 1.0;
            Mat<double> h = witt_extend(u, img, f.gram_X(), f.epsilon(), tol);
            Mat<double> conj = h * gamma_raw * inverse(h);
            double cth = conj(0, 0);
            double sth = conj(0, x - 1);
            double realized = std::atan2(sth, cth);
            if (realized < 0) {
                // Weyl flip f1 <-> f1' (with a sign for the form).
                Mat<double> flip(x, x);
                for (std::size_t i = 1; i + 1 < x; ++i) flip(i, i) = 1.0;
                flip(x - 1, 0) = 1.0;
                flip(0, x - 1) = -1.0;
                if (!is_isometry(flip, f.gram_X(), 1e-9))
                    throw std::domain_error("compact flip is not an isometry");
                h = flip * h;
                conj = h * gamma_raw * inverse(h);
                realized = std::atan2(conj(0, x - 1), conj(0, 0));
            }
            out.angle = realized;
            out.gamma = compact_embed(f, out.angle);
            if (!mat_close(conj, out.gamma, 1e-6))
                throw std::domain_error("decompose: conjugation to the compact torus failed");
            out.m = detail::recover_levi(f, kit, n, h, out.gamma, std::max(tol, 1e-6));
            return out;
        }
    }
}

}  // namespace radical
