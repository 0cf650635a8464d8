#pragma once

#include "radical/elements.hpp"
#include "radical/spectrum.hpp"

namespace radical {

// Everything that depends on a fixed choice of xi: X -> W with invertible
// xi xi*.  The standard choice pairs f_i with w_i and f_i' with w_{n+i} and
// kills E; alternative choices (other kernels) support other torus classes.
template <typename T>
class XiKit {
  public:
    XiKit(const SpaceFrame<T>& frame, Mat<T> xi, double rank_tol = 1e-8)
        : frame_(&frame), xi_(std::move(xi)) {
        if (xi_.rows() != frame.dim_W() || xi_.cols() != frame.dim_X())
            throw std::invalid_argument("XiKit: xi has the wrong shape");
        xi_star_ = frame.star_xi(xi_);
        ups_ = xi_ * xi_star_;
        ups_inv_ = inverse(ups_, rank_tol);
        xi_plus_ = xi_star_ * ups_inv_;
    }

    static XiKit standard(const SpaceFrame<T>& frame) {
        Mat<T> xi(frame.dim_W(), frame.dim_X());
        const std::size_t n = frame.n(), r = frame.r();
        for (std::size_t i = 0; i < n; ++i) {
            xi(i, i) = scalar_traits<T>::one();
            xi(n + i, n + r + i) = scalar_traits<T>::one();
        }
        return XiKit(frame, xi);
    }

    const SpaceFrame<T>& frame() const { return *frame_; }
    const Mat<T>& xi() const { return xi_; }
    const Mat<T>& xi_star() const { return xi_star_; }
    const Mat<T>& upsilon() const { return ups_; }
    const Mat<T>& xi_plus() const { return xi_plus_; }

    // Xi: End(X) -> End(W) and its one-sided inverse Xi_plus.
    Mat<T> Xi(const Mat<T>& b) const { return xi_ * b * xi_plus_; }
    Mat<T> Xi_plus(const Mat<T>& a) const { return xi_plus_ * a * xi_; }

    // tau(A) = upsilon A* upsilon^{-1} as an endomorphism of W; theta is the
    // corresponding involution on the group.
    Mat<T> tau(const Mat<T>& a) const { return ups_ * frame_->star_end_W(a) * ups_inv_; }
    Mat<T> theta(const Mat<T>& g, double rank_tol = 1e-8) const {
        return inverse(tau(g), rank_tol);
    }

    // Pullback of the form on X through xi_plus: a bilinear form on W.
    Mat<T> psi_W() const { return xi_plus_.transpose() * frame_->gram_X() * xi_plus_; }

    // h_G = (Xi(h - 1))^{-1}; defined when gamma is far enough from 1 on the
    // moving part of X.
    Mat<T> h_G(const Mat<T>& h, double rank_tol = 1e-8) const {
        Mat<T> m = Xi(h - Mat<T>::identity(frame_->dim_X()));
        return inverse(m, rank_tol);
    }

    // eta of the distinguished section through gamma.
    Mat<T> eta_S(const Mat<T>& gamma, double rank_tol = 1e-8) const {
        return h_G(gamma, rank_tol) * ups_;
    }

    UnipotentElement<T> n_S(const Mat<T>& gamma, double rank_tol = 1e-8) const {
        return {xi_, eta_S(gamma, rank_tol)};
    }

  private:
    const SpaceFrame<T>* frame_;
    Mat<T> xi_, xi_star_, ups_, ups_inv_, xi_plus_;
};

// Norm(n(xi, eta)) = 1 + xi* eta^{-1} xi, an isometry of X fixing the kernel
// of the element's own xi.  Requires invertible eta.
template <typename T>
Mat<T> norm(const SpaceFrame<T>& f, const UnipotentElement<T>& n, double rank_tol = 1e-8) {
    Mat<T> eta_inv = inverse(n.eta, rank_tol);
    return Mat<T>::identity(f.dim_X()) + f.star_xi(n.xi) * eta_inv * n.xi;
}

}  // namespace radical
