#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "radical/matrix.hpp"
#include "radical/pairing.hpp"

namespace radical {

// (epsilon, n, r): epsilon = +1 orthogonal, -1 symplectic; dim W = 2n;
// dim E = r.  Everything else is derived.
struct GroupConfig {
    int epsilon = +1;
    std::size_t n = 1;
    std::size_t r = 1;

    std::size_t dim_W() const { return 2 * n; }
    std::size_t dim_X() const { return r + 2 * n; }
    std::size_t dim_V() const { return r + 6 * n; }

    void validate() const {
        if (epsilon != +1 && epsilon != -1) throw std::invalid_argument("epsilon must be +-1");
        if (n < 1) throw std::invalid_argument("n must be at least 1");
        if (epsilon == -1 && r % 2 != 0)
            throw std::invalid_argument("antisymmetric form needs even dimension");
    }
};

// Split Gram matrix J_eps(m): antidiagonal ones for eps = +1, antidiagonal
// alternating +-1 for eps = -1 (top-right entry +1).
template <typename T>
Mat<T> build_gram(int epsilon, std::size_t m) {
    if (m < 1) throw std::invalid_argument("build_gram: m must be positive");
    if (epsilon == -1 && m % 2 != 0)
        throw std::invalid_argument("antisymmetric form needs even dimension");
    Mat<T> g(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        T v = scalar_traits<T>::one();
        if (epsilon == -1 && a % 2 == 1) v = -v;
        g(a, m - 1 - a) = v;
    }
    return g;
}

// The configured geometry V = W + X + W' in the standard ordered basis
//   w_1..w_2n | f_1..f_n e_1..e_r f_n'..f_1' | w_2n'..w_1'.
// Maps into or out of W' are always written with respect to the reversed
// basis (w_2n', ..., w_1'), i.e. in the order the vectors sit inside V.
template <typename T>
class SpaceFrame {
  public:
    explicit SpaceFrame(GroupConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        const std::size_t D = cfg_.dim_V(), w = cfg_.dim_W(), x = cfg_.dim_X(),
                          n = cfg_.n, r = cfg_.r;
        gram_V_ = build_gram<T>(cfg_.epsilon, D);

        auto range = [](std::size_t lo, std::size_t count) {
            std::vector<std::size_t> v(count);
            for (std::size_t i = 0; i < count; ++i) v[i] = lo + i;
            return v;
        };
        idx_W_ = range(0, w);
        idx_X_ = range(w, x);
        idx_Wp_ = range(w + x, w);
        // E-perp = span(f, f') sits at X-local indices [0, n) and [n+r, x).
        for (std::size_t i = 0; i < n; ++i) idx_Eo_local_.push_back(i);
        for (std::size_t i = n + r; i < x; ++i) idx_Eo_local_.push_back(i);
        idx_E_local_ = range(n, r);

        pair_X_ = {x, x, gram_V_.submatrix(idx_X_, idx_X_)};
        pair_W_Wp_ = {w, w, gram_V_.submatrix(idx_W_, idx_Wp_)};
        pair_Wp_W_ = {w, w, gram_V_.submatrix(idx_Wp_, idx_W_)};
        if (r > 0) {
            std::vector<std::size_t> eV;
            for (auto i : idx_E_local_) eV.push_back(w + i);
            pair_E_ = {r, r, gram_V_.submatrix(eV, eV)};
        }
        {
            std::vector<std::size_t> eoV;
            for (auto i : idx_Eo_local_) eoV.push_back(w + i);
            pair_Eo_ = {w, w, gram_V_.submatrix(eoV, eoV)};
        }

        proj_E_ = Mat<T>(x, x);
        for (auto i : idx_E_local_) proj_E_(i, i) = scalar_traits<T>::one();
        proj_Eo_ = Mat<T>::identity(x) - proj_E_;

        build_skew_basis();
    }

    const GroupConfig& config() const { return cfg_; }
    int epsilon() const { return cfg_.epsilon; }
    std::size_t n() const { return cfg_.n; }
    std::size_t r() const { return cfg_.r; }
    std::size_t dim_W() const { return cfg_.dim_W(); }
    std::size_t dim_X() const { return cfg_.dim_X(); }
    std::size_t dim_V() const { return cfg_.dim_V(); }

    const Mat<T>& gram_V() const { return gram_V_; }
    const Mat<T>& gram_X() const { return pair_X_.pairing; }
    const PairedSpaces<T>& pair_X() const { return pair_X_; }
    const PairedSpaces<T>& pair_W_Wp() const { return pair_W_Wp_; }
    const PairedSpaces<T>& pair_Wp_W() const { return pair_Wp_W_; }
    const PairedSpaces<T>& pair_E() const { return pair_E_; }
    const PairedSpaces<T>& pair_Eo() const { return pair_Eo_; }
    const Mat<T>& proj_E() const { return proj_E_; }
    const Mat<T>& proj_Eo() const { return proj_Eo_; }
    const std::vector<std::size_t>& idx_E_local() const { return idx_E_local_; }
    const std::vector<std::size_t>& idx_Eo_local() const { return idx_Eo_local_; }

    // Adjoints for the map types in play, all derived from the Gram blocks.
    Mat<T> star_xi(const Mat<T>& a) const {  // X -> W  gives  W' -> X
        return adjoint(a, pair_X_, pair_W_Wp_);
    }
    Mat<T> star_eta(const Mat<T>& b) const {  // W' -> W  gives  W' -> W
        return adjoint(b, pair_Wp_W_, pair_W_Wp_);
    }
    Mat<T> star_end_X(const Mat<T>& a) const {  // End(X) -> End(X)
        return adjoint(a, pair_X_, pair_X_);
    }
    Mat<T> star_end_W(const Mat<T>& g) const {  // W -> W  gives  W' -> W'
        return adjoint(g, pair_W_Wp_, pair_W_Wp_);
    }
    Mat<T> star_wp_to_x(const Mat<T>& b) const {  // W' -> X  gives  X -> W
        return adjoint(b, pair_Wp_W_, pair_X_);
    }

    // Inverse of star_xi: the map A: X -> W whose adjoint is the given
    // beta: W' -> X.
    Mat<T> unstar_xi(const Mat<T>& beta) const {
        Mat<T> at = pair_X_.pairing * beta;  // = A^T * T
        return solve(pair_W_Wp_.pairing.transpose(), at.transpose());
    }

    // Fixed ordered basis of the skew space {B: W' -> W | B* + B = 0}; all
    // eta-part coordinates and determinants downstream use this basis.
    const std::vector<Mat<T>>& skew_basis() const { return skew_basis_; }
    std::size_t dim_skew() const { return skew_basis_.size(); }

    std::size_t dim_n() const { return dim_W() * dim_X() + dim_skew(); }

    // Coordinates of B in the skew basis (B must be skew).
    std::vector<T> skew_coords(const Mat<T>& b, double rank_tol = 1e-8) const {
        const std::size_t w = dim_W();
        Mat<T> rhs(w * w, 1);
        auto bv = b.vec();
        for (std::size_t i = 0; i < bv.size(); ++i) rhs(i, 0) = bv[i];
        Mat<T> sys(w * w, skew_basis_.size() + 1);
        for (std::size_t k = 0; k < skew_basis_.size(); ++k) {
            auto kv = skew_basis_[k].vec();
            for (std::size_t i = 0; i < kv.size(); ++i) sys(i, k) = kv[i];
        }
        sys.set_block(0, skew_basis_.size(), rhs);
        auto e = detail::echelon(sys, rank_tol);
        std::vector<T> coords(skew_basis_.size(), scalar_traits<T>::zero());
        // Back-substitute; the basis has full column rank by construction.
        for (std::size_t pr = e.pivots.size(); pr-- > 0;) {
            std::size_t pc = e.pivots[pr];
            if (pc >= skew_basis_.size()) throw std::domain_error("not in skew span");
            T acc = e.u(pr, skew_basis_.size());
            for (std::size_t j = pc + 1; j < skew_basis_.size(); ++j)
                acc -= e.u(pr, j) * coords[j];
            coords[pc] = scalar_traits<T>::div(acc, e.u(pr, pc));
        }
        return coords;
    }

  private:
    void build_skew_basis() {
        const std::size_t w = dim_W();
        // Operator B |-> B + B* applied to elementary matrices, vectorized.
        Mat<T> op(w * w, w * w);
        for (std::size_t j = 0; j < w; ++j)
            for (std::size_t i = 0; i < w; ++i) {
                Mat<T> e(w, w);
                e(i, j) = scalar_traits<T>::one();
                auto img = (e + star_eta(e)).vec();
                const std::size_t col = j * w + i;
                for (std::size_t k = 0; k < img.size(); ++k) op(k, col) = img[k];
            }
        Mat<T> ker = kernel_basis(op);
        for (std::size_t c = 0; c < ker.cols(); ++c) {
            std::vector<T> v;
            for (std::size_t i = 0; i < ker.rows(); ++i) v.push_back(ker(i, c));
            skew_basis_.push_back(Mat<T>::from_vec(v, w, w));
        }
    }

    GroupConfig cfg_;
    Mat<T> gram_V_;
    std::vector<std::size_t> idx_W_, idx_X_, idx_Wp_, idx_E_local_, idx_Eo_local_;
    PairedSpaces<T> pair_X_, pair_W_Wp_, pair_Wp_W_, pair_E_, pair_Eo_;
    Mat<T> proj_E_, proj_Eo_;
    std::vector<Mat<T>> skew_basis_;
};

}  // namespace radical
