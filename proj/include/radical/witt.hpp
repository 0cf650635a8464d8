#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "radical/frame.hpp"

namespace radical {

namespace detail {

inline Eigen::MatrixXd to_eigen(const Mat<double>& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline Mat<double> from_eigen(const Eigen::MatrixXd& e) {
    Mat<double> m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

// Columns spanning the Phi-orthogonal complement of span(U).
template <typename T>
Mat<T> orthogonal_complement(const Mat<T>& u, const Mat<T>& gram, double rank_tol = 1e-8) {
    return kernel_basis(u.transpose() * gram, rank_tol);
}

// Standard shape of a nondegenerate form on the span of the given columns:
// a change of basis P so that (C P)^T G (C P) is, in order, hyperbolic
// 2-blocks followed by a diagonal residue.  Symplectic forms always reduce
// to [[0,1],[-1,0]] blocks; symmetric ones may leave an anisotropic residue
// on the exact backend.
template <typename T>
struct StandardForm {
    Mat<T> basis;            // ambient-coordinates columns, reordered/combined
    std::size_t hyperbolic;  // number of 2-dim hyperbolic blocks in front
    std::vector<T> residue;  // diagonal values after the hyperbolic part
};

template <typename T>
StandardForm<T> standardize_symplectic(std::vector<Mat<T>> vecs, const Mat<T>& gram) {
    auto phi = [&](const Mat<T>& a, const Mat<T>& b) {
        return (a.transpose() * gram * b)(0, 0);
    };
    StandardForm<T> out{Mat<T>(gram.rows(), vecs.size()), 0, {}};
    std::size_t placed = 0;
    while (!vecs.empty()) {
        Mat<T> v = vecs.front();
        vecs.erase(vecs.begin());
        // Partner with the largest pairing against v.
        std::size_t best = vecs.size();
        double best_val = 0;
        for (std::size_t j = 0; j < vecs.size(); ++j) {
            double val = std::fabs(scalar_traits<T>::to_double(phi(v, vecs[j])));
            if (val > best_val) { best_val = val; best = j; }
        }
        if (best == vecs.size()) throw std::domain_error("degenerate symplectic block");
        Mat<T> u = vecs[best];
        vecs.erase(vecs.begin() + best);
        u = u * scalar_traits<T>::div(scalar_traits<T>::one(), phi(v, u));
        for (auto& w : vecs) w = w - v * phi(w, u) + u * phi(w, v);
        out.basis.set_block(0, placed, v);
        out.basis.set_block(0, placed + 1, u);
        placed += 2;
        ++out.hyperbolic;
    }
    return out;
}

template <typename T>
std::optional<Mat<T>> find_isotropic(const std::vector<Mat<T>>& vecs, const Mat<T>& gram) {
    auto phi = [&](const Mat<T>& a, const Mat<T>& b) {
        return (a.transpose() * gram * b)(0, 0);
    };
    for (const auto& v : vecs)
        if (sgn(phi(v, v)) == 0) return v;
    if constexpr (scalar_traits<T>::is_exact) {
        // q(v_i + s v_j) = 0 has a rational root iff the discriminant is a
        // rational square.
        for (std::size_t i = 0; i < vecs.size(); ++i)
            for (std::size_t j = 0; j < vecs.size(); ++j) {
                if (i == j) continue;
                T qi = phi(vecs[i], vecs[i]), qj = phi(vecs[j], vecs[j]);
                T p = phi(vecs[i], vecs[j]);
                auto root = rat_sqrt(p * p - qi * qj);
                if (!root) continue;
                T s = scalar_traits<T>::div(-p + *root, qj);
                Mat<T> w = vecs[i] + vecs[j] * s;
                if (sgn(phi(w, w)) == 0 && w.max_abs() > 0) return w;
            }
    }
    return std::nullopt;
}

template <typename T>
StandardForm<T> standardize_symmetric_exact(std::vector<Mat<T>> vecs, const Mat<T>& gram) {
    auto phi = [&](const Mat<T>& a, const Mat<T>& b) {
        return (a.transpose() * gram * b)(0, 0);
    };
    StandardForm<T> out{Mat<T>(gram.rows(), vecs.size()), 0, {}};
    std::size_t placed = 0;
    while (!vecs.empty()) {
        auto iso = find_isotropic(vecs, gram);
        if (!iso) break;
        Mat<T> w = *iso;
        // Partner with nonzero pairing.
        std::size_t best = vecs.size();
        for (std::size_t j = 0; j < vecs.size(); ++j)
            if (sgn(phi(w, vecs[j])) != 0) { best = j; break; }
        if (best == vecs.size()) throw std::domain_error("degenerate subspace");
        Mat<T> u = vecs[best];
        T two = scalar_traits<T>::from_long(2);
        u = u - w * scalar_traits<T>::div(phi(u, u), two * phi(w, u));
        u = u * scalar_traits<T>::div(scalar_traits<T>::one(), phi(w, u));
        std::vector<Mat<T>> rest;
        for (auto& v : vecs) {
            Mat<T> p = v - w * phi(v, u) - u * phi(v, w);
            if (p.max_abs() > 0) rest.push_back(p);
        }
        // Projection drops the 2-dim hyperbolic plane; rebuild independence.
        Mat<T> cand(gram.rows(), rest.size());
        for (std::size_t j = 0; j < rest.size(); ++j) cand.set_block(0, j, rest[j]);
        auto e = echelon(cand.transpose(), 1e-8);
        vecs.clear();
        for (std::size_t i = 0; i < e.rank; ++i) {
            Mat<T> v(gram.rows(), 1);
            for (std::size_t j = 0; j < gram.rows(); ++j) v(j, 0) = e.u(i, j);
            vecs.push_back(v);
        }
        out.basis.set_block(0, placed, w);
        out.basis.set_block(0, placed + 1, u);
        placed += 2;
        ++out.hyperbolic;
    }
    // Anisotropic residue: exact Gram-Schmidt to a diagonal form.
    while (!vecs.empty()) {
        Mat<T> v = vecs.front();
        vecs.erase(vecs.begin());
        T q = phi(v, v);
        if (sgn(q) == 0) throw std::domain_error("degenerate subspace");
        for (auto& w2 : vecs) w2 = w2 - v * scalar_traits<T>::div(phi(w2, v), q);
        out.basis.set_block(0, placed, v);
        out.residue.push_back(q);
        ++placed;
    }
    return out;
}

inline StandardForm<double> standardize_symmetric_real(const Mat<double>& c,
                                                       const Mat<double>& gram) {
    // Diagonalize the restricted Gram and scale to +-1, positives first.
    Eigen::MatrixXd cg = to_eigen(c.transpose() * gram * c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cg);
    std::vector<std::pair<double, Eigen::VectorXd>> cols;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        cols.push_back({es.eigenvalues()(i), es.eigenvectors().col(i)});
    std::sort(cols.begin(), cols.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    StandardForm<double> out{Mat<double>(gram.rows(), c.cols()), 0, {}};
    Eigen::MatrixXd ce = to_eigen(c);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        double lam = cols[i].first;
        if (std::fabs(lam) < 1e-12) throw std::domain_error("degenerate subspace");
        Eigen::VectorXd v = ce * cols[i].second / std::sqrt(std::fabs(lam));
        for (std::size_t j = 0; j < (std::size_t)v.size(); ++j) out.basis(j, i) = v(j);
        out.residue.push_back(lam > 0 ? 1.0 : -1.0);
    }
    return out;
}

template <typename T>
StandardForm<T> standardize(const Mat<T>& c, const Mat<T>& gram, int epsilon) {
    std::vector<Mat<T>> vecs;
    for (std::size_t j = 0; j < c.cols(); ++j) vecs.push_back(c.col(j));
    if (epsilon == -1) return standardize_symplectic(vecs, gram);
    if constexpr (scalar_traits<T>::is_exact) {
        return standardize_symmetric_exact(vecs, gram);
    } else {
        return standardize_symmetric_real(c, gram);
    }
}

}  // namespace detail

// Extend the partial isometry (columns of `subspace` mapped to the matching
// columns of `images`) to a full isometry of the ambient space.  The real
// backend matches complement signatures; the exact backend needs the
// complements to reduce to matching hyperbolic shapes and reports
// unavailability otherwise.
template <typename T>
Mat<T> witt_extend(const Mat<T>& subspace, const Mat<T>& images, const Mat<T>& gram,
                   int epsilon, double tol = 1e-9, double rank_tol = 1e-8) {
    if (subspace.rows() != gram.rows() || !subspace.same_shape(images))
        throw std::invalid_argument("witt_extend: shape mismatch");
    Mat<T> gu = subspace.transpose() * gram * subspace;
    if (rank(gu, rank_tol) < gu.rows()) throw std::domain_error("degenerate subspace");
    if (!mat_close(images.transpose() * gram * images, gu, tol))
        throw std::domain_error("witt_extend: given map is not an isometry of the subspace");

    Mat<T> c1 = detail::orthogonal_complement(subspace, gram, rank_tol);
    Mat<T> c2 = detail::orthogonal_complement(images, gram, rank_tol);
    Mat<T> full_src = subspace, full_dst = images;
    if (c1.cols() > 0) {
        auto s1 = detail::standardize(c1, gram, epsilon);
        auto s2 = detail::standardize(c2, gram, epsilon);
        if (s1.hyperbolic != s2.hyperbolic || s1.residue.size() != s2.residue.size())
            throw std::domain_error("Witt extension unavailable on exact backend");
        // Rescale residue vectors so the diagonal values agree.
        Mat<T> b2 = s2.basis;
        for (std::size_t i = 0; i < s1.residue.size(); ++i) {
            std::size_t col = 2 * s1.hyperbolic + i;
            if constexpr (scalar_traits<T>::is_exact) {
                auto c = rat_sqrt(scalar_traits<T>::div(s1.residue[i], s2.residue[i]));
                if (!c) throw std::domain_error("Witt extension unavailable on exact backend");
                for (std::size_t j = 0; j < b2.rows(); ++j) b2(j, col) = b2(j, col) * (*c);
            } else {
                if (s1.residue[i] * s2.residue[i] < 0)
                    throw std::domain_error("complement signatures do not match");
            }
        }
        full_src = Mat<T>::hstack(subspace, s1.basis);
        full_dst = Mat<T>::hstack(images, b2);
    }
    Mat<T> h = full_dst * inverse(full_src, rank_tol);
    if (!mat_close(h.transpose() * gram * h, gram, std::max(tol, 1e-7)))
        throw std::domain_error("witt_extend: extension failed isometry check");
    return h;
}

}  // namespace radical
