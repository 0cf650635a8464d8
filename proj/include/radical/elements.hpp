#pragma once

#include "radical/frame.hpp"

namespace radical {

// n(xi, eta) with xi: X -> W and eta: W' -> W, subject to
// eta + eta* + xi xi* = 0.
template <typename T>
struct UnipotentElement {
    Mat<T> xi;   // dim_W x dim_X
    Mat<T> eta;  // dim_W x dim_W

    static UnipotentElement identity(const SpaceFrame<T>& f) {
        return {Mat<T>(f.dim_W(), f.dim_X()), Mat<T>(f.dim_W(), f.dim_W())};
    }
};

// m(g, h) with g in GL(W) and h an isometry of (X, Phi|_X).  The W'-block of
// the embedding is forced by duality and never stored.
template <typename T>
struct LeviElement {
    Mat<T> g;  // dim_W x dim_W, invertible
    Mat<T> h;  // dim_X x dim_X, isometry

    static LeviElement identity(const SpaceFrame<T>& f) {
        return {Mat<T>::identity(f.dim_W()), Mat<T>::identity(f.dim_X())};
    }
};

template <typename T>
double constraint_residual(const SpaceFrame<T>& f, const UnipotentElement<T>& n) {
    Mat<T> lhs = n.eta + f.star_eta(n.eta) + n.xi * f.star_xi(n.xi);
    return lhs.max_abs();
}

template <typename T>
bool constraint_holds(const SpaceFrame<T>& f, const UnipotentElement<T>& n, double tol = 1e-9) {
    Mat<T> lhs = n.eta + f.star_eta(n.eta) + n.xi * f.star_xi(n.xi);
    return mat_close(lhs, Mat<T>(lhs.rows(), lhs.cols()), tol);
}

template <typename T>
bool is_isometry(const Mat<T>& h, const Mat<T>& gram, double tol = 1e-9) {
    return mat_close(h.transpose() * gram * h, gram, tol);
}

// n(xi1,eta1) n(xi2,eta2) = n(xi1+xi2, eta1+eta2 - xi1 xi2*).
template <typename T>
UnipotentElement<T> n_mul(const SpaceFrame<T>& f, const UnipotentElement<T>& a,
                          const UnipotentElement<T>& b) {
    return {a.xi + b.xi, a.eta + b.eta - a.xi * f.star_xi(b.xi)};
}

// n(xi,eta)^{-1} = n(-xi, eta*).
template <typename T>
UnipotentElement<T> n_inv(const SpaceFrame<T>& f, const UnipotentElement<T>& a) {
    return {-a.xi, f.star_eta(a.eta)};
}

// Ad(m(g,h)) n(xi,eta) = n(g xi h^{-1}, g eta g*).
template <typename T>
UnipotentElement<T> ad(const SpaceFrame<T>& f, const LeviElement<T>& m,
                       const UnipotentElement<T>& n, double rank_tol = 1e-8) {
    Mat<T> hinv = inverse(m.h, rank_tol);
    return {m.g * n.xi * hinv, m.g * n.eta * f.star_end_W(m.g)};
}

// D x D block matrix [[I, xi, eta], [0, I, -xi*], [0, 0, I]].
template <typename T>
Mat<T> embed(const SpaceFrame<T>& f, const UnipotentElement<T>& n) {
    const std::size_t w = f.dim_W(), x = f.dim_X();
    Mat<T> m = Mat<T>::identity(f.dim_V());
    m.set_block(0, w, n.xi);
    m.set_block(0, w + x, n.eta);
    m.set_block(w, w + x, -f.star_xi(n.xi));
    return m;
}

// Block-diagonal with the W'-block (g*)^{-1} determined by Phi-invariance.
template <typename T>
Mat<T> embed(const SpaceFrame<T>& f, const LeviElement<T>& m, double rank_tol = 1e-8) {
    const std::size_t w = f.dim_W(), x = f.dim_X();
    Mat<T> e(f.dim_V(), f.dim_V());
    e.set_block(0, 0, m.g);
    e.set_block(w, w, m.h);
    e.set_block(w + x, w + x, inverse(f.star_end_W(m.g), rank_tol));
    return e;
}

// Recover n(xi, eta) from its D x D embedding.
template <typename T>
UnipotentElement<T> unembed_unipotent(const SpaceFrame<T>& f, const Mat<T>& m) {
    const std::size_t w = f.dim_W(), x = f.dim_X();
    return {m.block(0, w, w, x), m.block(0, w + x, w, w)};
}

}  // namespace radical
