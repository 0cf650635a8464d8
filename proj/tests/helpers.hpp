#pragma once

#include <random>

#include "radical/elements.hpp"

namespace testutil {

using namespace radical;

inline Rat rnd_rat(std::mt19937_64& rng, int lo = -4, int hi = 4) {
    std::uniform_int_distribution<int> num(lo, hi), den(1, 3);
    return rat(num(rng), den(rng));
}

template <typename T>
T rnd_scalar(std::mt19937_64& rng, int lo = -4, int hi = 4) {
    Rat q = rnd_rat(rng, lo, hi);
    if constexpr (scalar_traits<T>::is_exact)
        return q;
    else
        return q.get_d();
}

template <typename T>
Mat<T> rnd_mat(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    Mat<T> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rnd_scalar<T>(rng);
    return m;
}

// Basis of {A in End(X) : A* = -A}, the Lie algebra of the isometry group
// of the restricted form.
template <typename T>
std::vector<Mat<T>> skew_end_X_basis(const SpaceFrame<T>& f) {
    const std::size_t x = f.dim_X();
    Mat<T> op(x * x, x * x);
    for (std::size_t j = 0; j < x; ++j)
        for (std::size_t i = 0; i < x; ++i) {
            Mat<T> e(x, x);
            e(i, j) = scalar_traits<T>::one();
            auto img = (e + f.star_end_X(e)).vec();
            for (std::size_t k = 0; k < img.size(); ++k) op(k, j * x + i) = img[k];
        }
    Mat<T> ker = kernel_basis(op);
    std::vector<Mat<T>> out;
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        std::vector<T> v;
        for (std::size_t i = 0; i < ker.rows(); ++i) v.push_back(ker(i, c));
        out.push_back(Mat<T>::from_vec(v, x, x));
    }
    return out;
}

// Random isometry of (X, Phi|_X) via the Cayley transform of a random
// element with A* = -A; resamples until I + A is invertible.
template <typename T>
Mat<T> rnd_isometry(std::mt19937_64& rng, const SpaceFrame<T>& f) {
    auto basis = skew_end_X_basis(f);
    const std::size_t x = f.dim_X();
    for (int attempt = 0; attempt < 50; ++attempt) {
        Mat<T> a(x, x);
        for (const auto& b : basis) a = a + b * rnd_scalar<T>(rng, -2, 2);
        Mat<T> ipa = Mat<T>::identity(x) + a;
        if (scalar_traits<T>::is_zero(det(ipa), 1e-6)) continue;
        return (Mat<T>::identity(x) - a) * inverse(ipa);
    }
    throw std::runtime_error("rnd_isometry: no invertible sample");
}

template <typename T>
Mat<T> rnd_invertible(std::mt19937_64& rng, std::size_t n) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        Mat<T> g = rnd_mat<T>(rng, n, n);
        if (!scalar_traits<T>::is_zero(det(g), 1e-6)) return g;
    }
    throw std::runtime_error("rnd_invertible: no invertible sample");
}

template <typename T>
LeviElement<T> rnd_levi(std::mt19937_64& rng, const SpaceFrame<T>& f) {
    return {rnd_invertible<T>(rng, f.dim_W()), rnd_isometry<T>(rng, f)};
}

// Random n(xi, eta): free xi plus skew part, eta = B - xi xi*/2.
template <typename T>
UnipotentElement<T> rnd_unipotent(std::mt19937_64& rng, const SpaceFrame<T>& f) {
    Mat<T> xi = rnd_mat<T>(rng, f.dim_W(), f.dim_X());
    Mat<T> b(f.dim_W(), f.dim_W());
    for (const auto& s : f.skew_basis()) b = b + s * rnd_scalar<T>(rng, -2, 2);
    T half = scalar_traits<T>::div(scalar_traits<T>::one(), scalar_traits<T>::from_long(2));
    return {xi, b - xi * f.star_xi(xi) * half};
}

}  // namespace testutil
