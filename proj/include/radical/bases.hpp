#pragma once

#include "radical/roots.hpp"
#include "radical/lie.hpp"

namespace radical {

// Ordered basis families that normalize all measures.  The A family spans
// End(W): Cartan directions first, then root vectors calibrated so the
// partner of A_alpha under the involution is exactly tau(A_alpha).  The C
// family consists of root vectors in h^E, one per restricted root, built as
// Xi_plus of (calibrated) root-vector combinations.  Together with the Z
// (torus) family and the beta family (Hom-to-E directions) these assemble
// the bases of Lie(N) used by the Jacobian computation.
template <typename T>
struct CalibratedBases {
    // Domain families.
    std::vector<Mat<T>> A;              // basis of End(W)
    std::vector<GLRoot> A_roots;        // {0,0} marks a Cartan direction
    std::vector<Mat<T>> beta;           // basis of Hom(W, E) (rows in E)
    std::vector<Mat<T>> B;              // Gamma2(beta_j), in Lie(H)
    std::vector<Mat<T>> Bp;             // basis of h^{E_o}
    std::vector<Mat<T>> C;              // root vectors in h^E
    std::vector<std::pair<GLRoot, GLRoot>> C_orbits;  // (alpha, alpha')
    std::vector<Mat<T>> Z;              // basis of the torus direction s

    // Index bookkeeping inside the assembled bases of Lie(N): the order is
    // [A family][beta family][C family][Z family].
    std::size_t a_offset = 0, beta_offset = 0, c_offset = 0, z_offset = 0;
    std::size_t size() const { return z_offset + Z.size(); }

    std::size_t index_of_A_root(const GLRoot& a) const {
        for (std::size_t i = 0; i < A_roots.size(); ++i)
            if (A_roots[i] == a) return a_offset + i;
        throw std::invalid_argument("unknown root vector");
    }
};

template <typename T>
CalibratedBases<T> calibrated_bases(const SpaceFrame<T>& f, const XiKit<T>& kit) {
    CalibratedBases<T> cb;
    const std::size_t w = f.dim_W();
    auto unit = [&](std::size_t i, std::size_t j) {
        Mat<T> e(w, w);
        e(i, j) = scalar_traits<T>::one();
        return e;
    };

    // Cartan directions of End(W).
    for (std::size_t i = 0; i < w; ++i) {
        cb.A.push_back(unit(i, i));
        cb.A_roots.push_back({0, 0});
    }

    RootDatum rd(f.config());
    // Calibrated root vectors: per orbit off the fixed locus, the partner is
    // tau of the representative; fixed roots keep their elementary vector.
    for (const auto& rep : rd.theta_orbit_representatives()) {
        Mat<T> xa = unit(rep.root.i - 1, rep.root.j - 1);
        Mat<T> xap = kit.tau(xa);
        cb.A.push_back(xa);
        cb.A_roots.push_back(rep.root);
        cb.A.push_back(xap);
        cb.A_roots.push_back(rep.theta_image);
        cb.C.push_back(kit.Xi_plus(xa - xap));
        cb.C_orbits.push_back({rep.root, rep.theta_image});
    }
    for (const auto& fixed : rd.theta_fixed_roots()) {
        Mat<T> xa = unit(fixed.root.i - 1, fixed.root.j - 1);
        cb.A.push_back(xa);
        cb.A_roots.push_back(fixed.root);
        if (f.epsilon() == -1) {
            cb.C.push_back(kit.Xi_plus(xa));
            cb.C_orbits.push_back({fixed.root, fixed.root});
        }
    }
    if (cb.A.size() != w * w) throw std::logic_error("A family is not a basis of End(W)");

    // Hom(W, E) directions and their images in Lie(H).
    for (auto i : f.idx_E_local())
        for (std::size_t j = 0; j < w; ++j) {
            Mat<T> b(f.dim_X(), w);
            b(i, j) = scalar_traits<T>::one();
            cb.beta.push_back(b);
            cb.B.push_back(gamma2_map(f, kit, b));
        }

    cb.Bp = hEo_basis(f);
    cb.Z = s_basis(f);

    cb.a_offset = 0;
    cb.beta_offset = cb.A.size();
    cb.c_offset = cb.beta_offset + cb.beta.size();
    cb.z_offset = cb.c_offset + cb.C.size();
    if (cb.size() != f.dim_n()) throw std::logic_error("calibrated families do not fill Lie(N)");
    return cb;
}

// First assembled basis of Lie(N): gamma-independent.
template <typename T>
std::vector<NilpotentVector<T>> basis_B1(const SpaceFrame<T>& f, const XiKit<T>& kit,
                                         const CalibratedBases<T>& cb) {
    std::vector<NilpotentVector<T>> out;
    const std::size_t w = f.dim_W();
    for (const auto& a : cb.A) out.push_back({a * kit.xi(), Mat<T>(w, w)});
    for (const auto& b : cb.B) out.push_back({-(kit.xi() * b), Mat<T>(w, w)});
    for (const auto& c : cb.C) out.push_back({Mat<T>(w, f.dim_X()), kit.xi() * c * kit.xi_star()});
    for (const auto& z : cb.Z) out.push_back({Mat<T>(w, f.dim_X()), kit.xi() * z * kit.xi_star()});
    return out;
}

template <typename T>
Mat<T> coords_matrix(const SpaceFrame<T>& f, const std::vector<NilpotentVector<T>>& vs) {
    Mat<T> m(f.dim_n(), vs.size());
    for (std::size_t j = 0; j < vs.size(); ++j) {
        auto col = nilpotent_coords(f, vs[j]);
        for (std::size_t i = 0; i < col.size(); ++i) m(i, j) = col[i];
    }
    return m;
}

}  // namespace radical
