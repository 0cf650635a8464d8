#pragma once

#include <functional>

#include "radical/roots.hpp"

namespace radical {

// An element of Lie(N): u(A, B) with A: X -> W arbitrary and B: W' -> W
// satisfying B* + B = 0.
template <typename T>
struct NilpotentVector {
    Mat<T> a;  // dim_W x dim_X
    Mat<T> b;  // dim_W x dim_W

    static NilpotentVector zero(const SpaceFrame<T>& f) {
        return {Mat<T>(f.dim_W(), f.dim_X()), Mat<T>(f.dim_W(), f.dim_W())};
    }
};

template <typename T>
NilpotentVector<T> operator+(const NilpotentVector<T>& u, const NilpotentVector<T>& v) {
    return {u.a + v.a, u.b + v.b};
}

template <typename T>
NilpotentVector<T> operator*(const NilpotentVector<T>& u, const T& s) {
    return {u.a * s, u.b * s};
}

// Coordinates: column-major vec of A followed by skew coordinates of B.
template <typename T>
std::vector<T> nilpotent_coords(const SpaceFrame<T>& f, const NilpotentVector<T>& u) {
    std::vector<T> out = u.a.vec();
    for (auto& c : f.skew_coords(u.b)) out.push_back(c);
    return out;
}

template <typename T>
NilpotentVector<T> nilpotent_from_coords(const SpaceFrame<T>& f, const std::vector<T>& v) {
    const std::size_t na = f.dim_W() * f.dim_X();
    if (v.size() != f.dim_n()) throw std::invalid_argument("wrong coordinate count");
    std::vector<T> av(v.begin(), v.begin() + na);
    Mat<T> a = Mat<T>::from_vec(av, f.dim_W(), f.dim_X());
    Mat<T> b(f.dim_W(), f.dim_W());
    for (std::size_t k = 0; k < f.dim_skew(); ++k) b = b + f.skew_basis()[k] * v[na + k];
    return {a, b};
}

namespace detail {

// Basis of {B in End(X) : op_i(B) = 0 for all i}, via the vectorized kernel.
template <typename T>
std::vector<Mat<T>> constrained_endo_basis(
    std::size_t x, const std::vector<std::function<Mat<T>(const Mat<T>&)>>& ops) {
    std::size_t total_rows = 0;
    std::vector<std::size_t> op_rows;
    for (const auto& op : ops) {
        Mat<T> img = op(Mat<T>(x, x));
        op_rows.push_back(img.rows() * img.cols());
        total_rows += img.rows() * img.cols();
    }
    Mat<T> sys(total_rows, x * x);
    for (std::size_t j = 0; j < x; ++j)
        for (std::size_t i = 0; i < x; ++i) {
            Mat<T> e(x, x);
            e(i, j) = scalar_traits<T>::one();
            std::size_t row0 = 0;
            const std::size_t col = j * x + i;
            for (std::size_t k = 0; k < ops.size(); ++k) {
                auto img = ops[k](e).vec();
                for (std::size_t q = 0; q < img.size(); ++q) sys(row0 + q, col) = img[q];
                row0 += op_rows[k];
            }
        }
    Mat<T> ker = kernel_basis(sys);
    std::vector<Mat<T>> out;
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        std::vector<T> v;
        for (std::size_t i = 0; i < ker.rows(); ++i) v.push_back(ker(i, c));
        out.push_back(Mat<T>::from_vec(v, x, x));
    }
    return out;
}

}  // namespace detail

// Lie(H): B with B + B* = 0 for the form on X.
template <typename T>
std::vector<Mat<T>> h_basis(const SpaceFrame<T>& f) {
    return detail::constrained_endo_basis<T>(
        f.dim_X(), {[&](const Mat<T>& b) { return b + f.star_end_X(b); }});
}

// kappa: members of Lie(H) whose moving-to-moving block vanishes.
template <typename T>
std::vector<Mat<T>> kappa_basis(const SpaceFrame<T>& f) {
    return detail::constrained_endo_basis<T>(
        f.dim_X(), {[&](const Mat<T>& b) { return b + f.star_end_X(b); },
                    [&](const Mat<T>& b) { return f.proj_Eo() * b * f.proj_Eo(); }});
}

// Lie(H^E): acts trivially on E.
template <typename T>
std::vector<Mat<T>> hE_basis(const SpaceFrame<T>& f) {
    return detail::constrained_endo_basis<T>(
        f.dim_X(), {[&](const Mat<T>& b) { return b + f.star_end_X(b); },
                    [&](const Mat<T>& b) { return b * f.proj_E(); }});
}

// Lie(H^{E-perp}): acts trivially on the moving part.
template <typename T>
std::vector<Mat<T>> hEo_basis(const SpaceFrame<T>& f) {
    return detail::constrained_endo_basis<T>(
        f.dim_X(), {[&](const Mat<T>& b) { return b + f.star_end_X(b); },
                    [&](const Mat<T>& b) { return b * f.proj_Eo(); }});
}

// Lie(S): diagonal with weight z_i on f_i, -z_i on f_i', zero on E.
template <typename T>
std::vector<Mat<T>> s_basis(const SpaceFrame<T>& f) {
    std::vector<Mat<T>> out;
    const std::size_t n = f.n(), r = f.r();
    for (std::size_t l = 0; l < n; ++l) {
        Mat<T> z(f.dim_X(), f.dim_X());
        z(l, l) = scalar_traits<T>::one();
        z(n + r + (n - 1 - l), n + r + (n - 1 - l)) = -scalar_traits<T>::one();
        out.push_back(z);
    }
    return out;
}

// Centralizer of S inside Lie(H).
template <typename T>
std::vector<Mat<T>> zhs_basis(const SpaceFrame<T>& f) {
    std::vector<std::function<Mat<T>(const Mat<T>&)>> ops;
    ops.push_back([&](const Mat<T>& b) { return b + f.star_end_X(b); });
    for (const auto& z : s_basis(f))
        ops.push_back([&f, z](const Mat<T>& b) { return b * z - z * b; });
    return detail::constrained_endo_basis<T>(f.dim_X(), ops);
}

// The structural maps between the pieces.
template <typename T>
NilpotentVector<T> phi_map(const SpaceFrame<T>& f, const XiKit<T>& kit, const Mat<T>& a,
                           const Mat<T>& b) {
    return {a * kit.xi(), kit.xi() * b * kit.xi_star()};
}

template <typename T>
Mat<T> psi_map(const SpaceFrame<T>& f, const NilpotentVector<T>& u) {
    return f.proj_E() * f.star_xi(u.a);
}

// Section of psi: the A: X -> W whose adjoint is the given beta: W' -> E.
template <typename T>
NilpotentVector<T> psi_section(const SpaceFrame<T>& f, const Mat<T>& beta) {
    return {f.unstar_xi(beta), Mat<T>(f.dim_W(), f.dim_W())};
}

template <typename T>
Mat<T> gamma1_map(const SpaceFrame<T>& f, const XiKit<T>& kit, const Mat<T>& b) {
    return f.proj_E() * b * kit.xi_star();
}

// Gamma2: Hom(W, X) -> Lie(H), A |-> A ups^{-1} xi - xi* ups^{-1} A*.
template <typename T>
Mat<T> gamma2_map(const SpaceFrame<T>& f, const XiKit<T>& kit, const Mat<T>& a) {
    Mat<T> ui = inverse(kit.upsilon());
    Mat<T> astar = adjoint(a, f.pair_W_Wp(), f.pair_X());
    return a * ui * kit.xi() - kit.xi_star() * ui * astar;
}

template <typename T>
Mat<T> K_map(const SpaceFrame<T>& f, const Mat<T>& a) {
    return a * f.proj_E();
}

// Dimensions and exactness of the four structural sequences plus the direct
// sum decomposition of Lie(H) and the dimension identity
// dim M - dim Z_H(S) + dim S = dim N.
struct ExactSequenceReport {
    std::size_t dim_m = 0, dim_h = 0, dim_kappa = 0, dim_hE = 0, dim_hEo = 0;
    std::size_t dim_s = 0, dim_zhs = 0, dim_n = 0, dim_hom_wp_E = 0, dim_n_xi = 0;
    bool seq1 = false, seq2 = false, seq3 = false, seq4 = false;
    bool h_decomposition = false;
    bool dim_identity = false;
    bool ok() const { return seq1 && seq2 && seq3 && seq4 && h_decomposition && dim_identity; }
};

template <typename T>
ExactSequenceReport exact_sequence_report(const SpaceFrame<T>& f, const XiKit<T>& kit) {
    ExactSequenceReport rep;
    const std::size_t w = f.dim_W(), x = f.dim_X(), r = f.r();
    auto hB = h_basis(f);
    auto kB = kappa_basis(f);
    auto hEB = hE_basis(f);
    auto hEoB = hEo_basis(f);
    auto sB = s_basis(f);
    auto zB = zhs_basis(f);
    rep.dim_h = hB.size();
    rep.dim_kappa = kB.size();
    rep.dim_hE = hEB.size();
    rep.dim_hEo = hEoB.size();
    rep.dim_s = sB.size();
    rep.dim_zhs = zB.size();
    rep.dim_m = w * w + rep.dim_h;
    rep.dim_n = f.dim_n();
    rep.dim_hom_wp_E = w * r;

    auto stack_cols = [](const std::vector<std::vector<T>>& cols) {
        Mat<T> m(cols.empty() ? 0 : cols[0].size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < cols[j].size(); ++i) m(i, j) = cols[j][i];
        return m;
    };

    // Sequence 1: 0 -> kappa -> m -> n_xi -> 0 via phi(A, B) = u(A xi, xi B xi*).
    {
        std::vector<std::vector<T>> cols;
        for (std::size_t j = 0; j < w; ++j)
            for (std::size_t i = 0; i < w; ++i) {
                Mat<T> e(w, w);
                e(i, j) = scalar_traits<T>::one();
                cols.push_back(nilpotent_coords(f, phi_map(f, kit, e, Mat<T>(x, x))));
            }
        for (const auto& b : hB)
            cols.push_back(nilpotent_coords(f, phi_map(f, kit, Mat<T>(w, w), b)));
        std::size_t rk = rank(stack_cols(cols));
        rep.dim_n_xi = rk;
        // Kernel of phi has the dimension of kappa, and kappa maps into it.
        bool kernel_dim = (rep.dim_m - rk == rep.dim_kappa);
        bool kappa_in_kernel = true;
        for (const auto& b : kB) {
            auto img = phi_map(f, kit, Mat<T>(w, w), b);
            if (img.a.max_abs() > 0 || img.b.max_abs() > 0) kappa_in_kernel = false;
        }
        rep.seq1 = kernel_dim && kappa_in_kernel;
    }

    // Sequence 2: 0 -> n_xi -> n -> Hom(W', E) -> 0 via psi.
    {
        std::vector<std::vector<T>> cols;
        // psi on the full coordinate basis of n.
        for (std::size_t k = 0; k < f.dim_n(); ++k) {
            std::vector<T> v(f.dim_n(), scalar_traits<T>::zero());
            v[k] = scalar_traits<T>::one();
            auto u = nilpotent_from_coords(f, v);
            Mat<T> img = psi_map(f, u);
            // Restrict to the E rows so the target really is Hom(W', E).
            std::vector<T> iv;
            for (auto i : f.idx_E_local())
                for (std::size_t j = 0; j < img.cols(); ++j) iv.push_back(img(i, j));
            cols.push_back(iv);
        }
        std::size_t rk = r == 0 ? 0 : rank(stack_cols(cols));
        bool onto = (rk == rep.dim_hom_wp_E);
        bool kernel_matches = (f.dim_n() - rk == rep.dim_n_xi);
        // The section really sections psi.
        bool section_ok = true;
        if (r > 0) {
            Mat<T> beta(x, w);
            int c = 0;
            for (auto i : f.idx_E_local())
                for (std::size_t j = 0; j < w; ++j)
                    beta(i, j) = scalar_traits<T>::from_long(((c += 3) % 7) - 3);
            auto u = psi_section(f, beta);
            if (psi_map(f, u) != beta) section_ok = false;
        }
        rep.seq2 = onto && kernel_matches && section_ok;
    }

    // Sequence 3: 0 -> h^{E-perp} -> kappa -> Hom(W', E) -> 0 via Gamma1.
    {
        std::vector<std::vector<T>> cols;
        for (const auto& b : kB) {
            Mat<T> img = gamma1_map(f, kit, b);
            std::vector<T> iv;
            for (auto i : f.idx_E_local())
                for (std::size_t j = 0; j < img.cols(); ++j) iv.push_back(img(i, j));
            cols.push_back(iv);
        }
        std::size_t rk = (r == 0 || kB.empty()) ? 0 : rank(stack_cols(cols));
        rep.seq3 = (rk == rep.dim_hom_wp_E) && (rep.dim_kappa - rk == rep.dim_hEo);
    }

    // Sequence 4: 0 -> s -> z_h(s) -> h^{E-perp} -> 0 via K(A) = A P_E.
    {
        std::vector<std::vector<T>> cols;
        for (const auto& b : zB) cols.push_back(K_map(f, b).vec());
        std::size_t rk = zB.empty() ? 0 : rank(stack_cols(cols));
        rep.seq4 = (rk == rep.dim_hEo) && (rep.dim_zhs - rk == rep.dim_s);
    }

    // Lie(H) = h^E + h^{E-perp} + im Gamma2, a direct sum.
    {
        std::vector<std::vector<T>> cols, g2cols;
        for (const auto& b : hEB) cols.push_back(b.vec());
        for (const auto& b : hEoB) cols.push_back(b.vec());
        // Gamma2 is fed from Hom(W, E) inside Hom(W, X).
        for (std::size_t j = 0; j < w; ++j)
            for (auto i : f.idx_E_local()) {
                Mat<T> probe(x, w);
                probe(i, j) = scalar_traits<T>::one();
                auto v = gamma2_map(f, kit, probe).vec();
                cols.push_back(v);
                g2cols.push_back(v);
            }
        std::size_t rk = rank(stack_cols(cols));
        std::size_t g2rank = rank(stack_cols(g2cols));
        rep.h_decomposition =
            (rk == rep.dim_h) && (rep.dim_hE + rep.dim_hEo + g2rank == rep.dim_h);
    }

    rep.dim_identity = (rep.dim_m - rep.dim_zhs + rep.dim_s == rep.dim_n);
    return rep;
}

}  // namespace radical
