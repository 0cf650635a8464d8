#pragma once

#include <complex>

#include "radical/witt.hpp"

namespace radical {

// Polynomials as ascending coefficient vectors.
template <typename T>
T poly_eval(const std::vector<T>& p, const T& x) {
    T acc = scalar_traits<T>::zero();
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

// Divide out (x - root); the root must be exact.
template <typename T>
std::vector<T> poly_deflate(const std::vector<T>& p, const T& root) {
    std::vector<T> q(p.size() - 1, scalar_traits<T>::zero());
    T carry = scalar_traits<T>::zero();
    for (std::size_t i = p.size(); i-- > 1;) {
        carry = p[i] + root * carry;
        q[i - 1] = carry;
    }
    return q;
}

// Monic characteristic polynomial by the Faddeev-LeVerrier recursion;
// ascending coefficients, size n+1.
template <typename T>
std::vector<T> char_poly(const Mat<T>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("char_poly needs square input");
    const std::size_t n = a.rows();
    auto trace = [](const Mat<T>& m) {
        T t = scalar_traits<T>::zero();
        for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
        return t;
    };
    std::vector<T> c(n + 1, scalar_traits<T>::zero());
    c[n] = scalar_traits<T>::one();
    Mat<T> m = a;
    c[n - 1] = -trace(a);
    for (std::size_t k = 2; k <= n; ++k) {
        Mat<T> shift = Mat<T>::identity(n) * c[n - k + 1];
        m = a * (m + shift);
        c[n - k] = scalar_traits<T>::div(-trace(m), scalar_traits<T>::from_long((long)k));
    }
    return c;
}

// One distinct eigenvalue (or complex-conjugate pair) with its real invariant
// subspace: one column for a real eigenvalue, two (real and imaginary parts)
// for a pair.  On the exact backend im is always zero.
template <typename T>
struct SpectrumItem {
    T re, im;
    Mat<T> space;
};

template <typename T>
struct Spectrum {
    std::vector<SpectrumItem<T>> items;
};

namespace detail {

inline std::vector<Rat> rational_roots(std::vector<Rat> p) {
    // Deflate x = +-1 first, then close the remaining even part with square
    // roots; quartics are handled through the palindromic substitution
    // y = x + 1/x.  Anything else means the spectrum leaves the rationals.
    std::vector<Rat> roots;
    for (Rat cand : {rat(1), rat(-1)}) {
        while (p.size() > 1 && sgn(poly_eval(p, cand)) == 0) {
            roots.push_back(cand);
            p = poly_deflate(p, cand);
        }
    }
    auto quadratic = [&](const std::vector<Rat>& q) -> bool {
        Rat a = q[2], b = q[1], c = q[0];
        auto root = rat_sqrt(b * b - rat(4) * a * c);
        if (!root) return false;
        roots.push_back(scalar_traits<Rat>::div(-b + *root, rat(2) * a));
        roots.push_back(scalar_traits<Rat>::div(-b - *root, rat(2) * a));
        return true;
    };
    while (p.size() > 1) {
        if (p.size() == 2) {
            roots.push_back(scalar_traits<Rat>::div(-p[0], p[1]));
            break;
        }
        if (p.size() == 3) {
            if (!quadratic(p)) throw std::domain_error("spectrum not rational; use real backend");
            break;
        }
        if (p.size() == 5 && p[0] == p[4] && p[1] == p[3]) {
            // x^2 p(y) with y = x + 1/x.
            Rat a = p[4], b = p[3], c = p[2] - rat(2) * p[4];
            auto disc = rat_sqrt(b * b - rat(4) * a * c);
            if (!disc) throw std::domain_error("spectrum not rational; use real backend");
            for (int s : {+1, -1}) {
                Rat y = scalar_traits<Rat>::div(-b + rat(s) * *disc, rat(2) * a);
                // x^2 - y x + 1 = 0.
                auto d2 = rat_sqrt(y * y - rat(4));
                if (!d2) throw std::domain_error("spectrum not rational; use real backend");
                roots.push_back(scalar_traits<Rat>::div(y + *d2, rat(2)));
                roots.push_back(scalar_traits<Rat>::div(y - *d2, rat(2)));
            }
            break;
        }
        throw std::domain_error("spectrum not rational; use real backend");
    }
    return roots;
}

}  // namespace detail

// Full eigenvalue split of a square matrix.  Exact backend: every eigenvalue
// must be rational or the call fails.  Real backend: complex pairs are kept
// as two-dimensional real invariant subspaces.
template <typename T>
Spectrum<T> eigen_split(const Mat<T>& a, double rank_tol = 1e-8) {
    Spectrum<T> out;
    if constexpr (scalar_traits<T>::is_exact) {
        auto roots = detail::rational_roots(char_poly(a));
        std::vector<Rat> distinct;
        for (const auto& r : roots)
            if (std::find(distinct.begin(), distinct.end(), r) == distinct.end())
                distinct.push_back(r);
        for (const auto& lam : distinct) {
            Mat<T> shifted = a - Mat<T>::identity(a.rows()) * lam;
            Mat<T> space = kernel_basis(shifted, rank_tol);
            if (space.cols() == 0) throw std::domain_error("eigenvalue without eigenvector");
            out.items.push_back({lam, scalar_traits<T>::zero(), space});
        }
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(detail::to_eigen(a));
        const auto& vals = es.eigenvalues();
        const auto& vecs = es.eigenvectors();
        std::vector<bool> used(a.rows(), false);
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            std::complex<double> lam = vals(i);
            if (std::fabs(lam.imag()) < rank_tol * (1.0 + std::abs(lam))) {
                // Merge near-identical real eigenvalues into one kernel.
                double lr = lam.real();
                for (Eigen::Index j = i + 1; j < vals.size(); ++j)
                    if (!used[j] && std::fabs(vals(j).imag()) < rank_tol * (1.0 + std::abs(vals(j))) &&
                        std::fabs(vals(j).real() - lr) < 1e-6 * (1.0 + std::fabs(lr)))
                        used[j] = true;
                Mat<double> shifted = a - Mat<double>::identity(a.rows()) * lr;
                Mat<double> space = kernel_basis(shifted, 1e-6);
                if (space.cols() == 0) {
                    // Fall back to the solver's eigenvector.
                    space = Mat<double>(a.rows(), 1);
                    for (std::size_t k = 0; k < a.rows(); ++k)
                        space(k, 0) = vecs(k, i).real();
                }
                out.items.push_back({lr, 0.0, space});
            } else {
                // Pair with the conjugate.
                for (Eigen::Index j = i + 1; j < vals.size(); ++j)
                    if (!used[j] && std::fabs(vals(j).real() - lam.real()) < 1e-9 * (1.0 + std::fabs(lam.real())) &&
                        std::fabs(vals(j).imag() + lam.imag()) < 1e-9 * (1.0 + std::fabs(lam.imag()))) {
                        used[j] = true;
                        break;
                    }
                if (lam.imag() < 0) lam = std::conj(lam);
                Mat<double> space(a.rows(), 2);
                Eigen::Index src = i;
                for (std::size_t k = 0; k < a.rows(); ++k) {
                    std::complex<double> v = vecs(k, src);
                    if (vals(i).imag() < 0) v = std::conj(v);
                    space(k, 0) = v.real();
                    space(k, 1) = v.imag();
                }
                out.items.push_back({lam.real(), lam.imag(), space});
            }
        }
    }
    return out;
}

// Kernel of (a - I); on the real backend the threshold is absolute-ish since
// eigenvalues of isometries sit on a known scale.
template <typename T>
Mat<T> one_eigenspace(const Mat<T>& a, double rank_tol = 1e-6) {
    return kernel_basis(a - Mat<T>::identity(a.rows()),
                        scalar_traits<T>::is_exact ? 1e-8 : rank_tol);
}

}  // namespace radical
