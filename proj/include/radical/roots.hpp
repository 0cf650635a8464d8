#pragma once

#include <array>
#include <numeric>

#include "radical/torus.hpp"

namespace radical {

// Roots of GL(2n) are e_i - e_j (1-based, i != j).  theta acts through the
// outer involution fixing the form: e_i - e_j |-> e_{2n+1-j} - e_{2n+1-i}.
struct GLRoot {
    std::size_t i, j;  // 1-based
    bool operator==(const GLRoot&) const = default;
};

// A weight of the restricted torus written on the basis e_1..e_n.
using RestrictedWeight = std::vector<int>;

struct RootInfo {
    GLRoot root;
    GLRoot theta_image;
    bool theta_fixed;
    RestrictedWeight restriction;
};

class RootDatum {
  public:
    explicit RootDatum(GroupConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        const std::size_t n2 = 2 * cfg_.n;
        for (std::size_t i = 1; i <= n2; ++i)
            for (std::size_t j = 1; j <= n2; ++j) {
                if (i == j) continue;
                GLRoot a{i, j};
                GLRoot ta{n2 + 1 - j, n2 + 1 - i};
                roots_.push_back({a, ta, a == ta, restrict(a)});
            }
    }

    const GroupConfig& config() const { return cfg_; }
    const std::vector<RootInfo>& roots() const { return roots_; }

    RestrictedWeight restrict(const GLRoot& a) const {
        RestrictedWeight w(cfg_.n, 0);
        auto add = [&](std::size_t idx, int s) {
            if (idx <= cfg_.n)
                w[idx - 1] += s;
            else
                w[2 * cfg_.n - idx] -= s;
        };
        add(a.i, +1);
        add(a.j, -1);
        return w;
    }

    // Non-theta-fixed roots, one representative per theta-orbit.
    std::vector<RootInfo> theta_orbit_representatives() const {
        std::vector<RootInfo> reps;
        std::vector<GLRoot> seen;
        for (const auto& r : roots_) {
            if (r.theta_fixed) continue;
            if (std::find(seen.begin(), seen.end(), r.root) != seen.end()) continue;
            seen.push_back(r.root);
            seen.push_back(r.theta_image);
            reps.push_back(r);
        }
        return reps;
    }

    std::vector<RootInfo> theta_fixed_roots() const {
        std::vector<RootInfo> out;
        for (const auto& r : roots_)
            if (r.theta_fixed) out.push_back(r);
        return out;
    }

    // Restricted root system R(H^E, S): type D_n weights +-e_i +- e_j for the
    // orthogonal family, plus the long roots +-2e_i for the symplectic one.
    std::vector<RestrictedWeight> restricted_roots() const {
        std::vector<RestrictedWeight> out;
        const std::size_t n = cfg_.n;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (int si : {+1, -1})
                    for (int sj : {+1, -1}) {
                        RestrictedWeight w(n, 0);
                        w[i] = si;
                        w[j] = sj;
                        out.push_back(w);
                    }
        if (cfg_.epsilon == -1)
            for (std::size_t i = 0; i < n; ++i)
                for (int s : {+2, -2}) {
                    RestrictedWeight w(n, 0);
                    w[i] = s;
                    out.push_back(w);
                }
        return out;
    }

  private:
    GroupConfig cfg_;
    std::vector<RootInfo> roots_;
};

template <typename T>
T weight_value(const RestrictedWeight& w, const TorusPoint<T>& p) {
    T v = scalar_traits<T>::one();
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (int k = 0; k < w[i]; ++k) v = v * p.t[i];
        for (int k = 0; k > w[i]; --k) v = scalar_traits<T>::div(v, p.t[i]);
    }
    return v;
}

// Weyl discriminant over the restricted system: prod_alpha (alpha(gamma) - 1).
template <typename T>
T disc_HE(const RootDatum& rd, const TorusPoint<T>& p) {
    T d = scalar_traits<T>::one();
    for (const auto& w : rd.restricted_roots())
        d = d * (weight_value(w, p) - scalar_traits<T>::one());
    return d;
}

// |det L(gamma)| in closed form: |det gamma_G|^(dim W -+ 1) |D_{H^E}(gamma)|.
template <typename T>
T det_L_closed(const SpaceFrame<T>& f, const RootDatum& rd, const TorusPoint<T>& p) {
    T dg = scalar_traits<T>::abs(det(torus_gamma_G(f, p)));
    long e = (long)f.dim_W() - (long)f.epsilon();
    T acc = scalar_traits<T>::one();
    for (long k = 0; k < e; ++k) acc = acc * dg;
    return acc * scalar_traits<T>::abs(disc_HE(rd, p));
}

// Jacobian density of the decomposition map at gamma:
// |det L(gamma)| |delta_N(gamma_G)|^{-1/2}.
template <typename T>
double D_Sha(const SpaceFrame<T>& f, const RootDatum& rd, const TorusPoint<T>& p) {
    double l = scalar_traits<T>::to_double(det_L_closed(f, rd, p));
    double dg = std::fabs(scalar_traits<T>::to_double(det(torus_gamma_G(f, p))));
    double dn = std::pow(dg, (double)delta_N_exponent(f.config()));
    return l / std::sqrt(dn);
}

// A Weyl-group element as a signed permutation together with a realizing
// isometry of X (identity on E).
template <typename T>
struct WeylElement {
    std::vector<std::size_t> perm;  // sigma: index i maps to perm[i]
    std::vector<int> sign;          // +1 keeps t, -1 inverts it
    Mat<T> h;
};

template <typename T>
void weyl_act(const WeylElement<T>& w, TorusPoint<T>& p) {
    std::vector<T> out(p.t.size());
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        T v = p.t[i];
        if (w.sign[i] < 0) v = scalar_traits<T>::div(scalar_traits<T>::one(), v);
        out[w.perm[i]] = v;
    }
    p.t = std::move(out);
}

// Brute-force W_H(S): try every signed permutation, realized by a monomial
// isometry on the f/f' lines fixing E pointwise, coefficient signs resolved
// by search.
template <typename T>
std::vector<WeylElement<T>> weyl_group(const SpaceFrame<T>& f) {
    const std::size_t n = f.n(), r = f.r(), x = f.dim_X();
    std::vector<WeylElement<T>> out;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    // X-basis indices of f_i and f_i' (1-based torus labels shifted to 0).
    auto fidx = [&](std::size_t i) { return i; };
    auto fpidx = [&](std::size_t i) { return n + r + (n - 1 - i); };
    do {
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            std::vector<int> sign(n, +1);
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t(1) << i)) sign[i] = -1;
            bool found = false;
            // Per-line coefficient signs on the image of f_i.
            for (std::size_t cmask = 0; cmask < (std::size_t(1) << n) && !found; ++cmask) {
                Mat<T> h(x, x);
                for (auto i : f.idx_E_local()) h(i, i) = scalar_traits<T>::one();
                for (std::size_t i = 0; i < n; ++i) {
                    T c = (cmask & (std::size_t(1) << i)) ? -scalar_traits<T>::one()
                                                          : scalar_traits<T>::one();
                    std::size_t dst_f = sign[i] > 0 ? fidx(perm[i]) : fpidx(perm[i]);
                    std::size_t dst_fp = sign[i] > 0 ? fpidx(perm[i]) : fidx(perm[i]);
                    h(dst_f, fidx(i)) = c;
                    // Pairing <f_i, f_i'> must be preserved.
                    T pa = f.gram_X()(fidx(i), fpidx(i));
                    T pb = f.gram_X()(dst_f, dst_fp);
                    h(dst_fp, fpidx(i)) = scalar_traits<T>::div(pa, c * pb);
                }
                if (is_isometry(h, f.gram_X(), 1e-9)) {
                    out.push_back({perm, sign, h});
                    found = true;
                }
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace radical
