#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "radical/sha.hpp"

using namespace radical;
using namespace testutil;

namespace {

// Random torus point already in the fundamental domain: |t| > 1, sorted
// descending by absolute value, regular.
template <typename T>
TorusPoint<T> rnd_domain_torus(std::mt19937_64& rng, const SpaceFrame<T>& f) {
    std::uniform_int_distribution<int> num(2, 9), den(1, 4), flip(0, 1);
    for (int attempt = 0; attempt < 300; ++attempt) {
        std::vector<T> t;
        for (std::size_t i = 0; i < f.n(); ++i) {
            Rat q = rat(num(rng), den(rng));
            if (q <= 1) q += 1;
            if (flip(rng) && f.epsilon() == +1) q = -q;
            if constexpr (scalar_traits<T>::is_exact)
                t.push_back(q);
            else
                t.push_back(q.get_d());
        }
        std::sort(t.begin(), t.end(), [](const T& a, const T& b) {
            double x = scalar_traits<T>::to_double(a), y = scalar_traits<T>::to_double(b);
            if (std::fabs(x) != std::fabs(y)) return std::fabs(x) > std::fabs(y);
            return x > y;
        });
        TorusPoint<T> p{t};
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < t.size(); ++i)
            if (std::fabs(std::fabs(scalar_traits<T>::to_double(t[i])) -
                          std::fabs(scalar_traits<T>::to_double(t[i + 1]))) < 1e-9)
                distinct = false;
        if (distinct && torus_regularity(f, p).regular) return p;
    }
    throw std::runtime_error("no torus point sampled");
}

const GroupConfig kConfigs[] = {{+1, 1, 1}, {-1, 1, 2}, {-1, 1, 0}, {+1, 2, 2}};

}  // namespace

TEST_SUITE("sha map") {
    TEST_CASE("sha at the identity is the section") {
        std::mt19937_64 rng(89);
        for (const auto& cfg : kConfigs) {
            SpaceFrame<Rat> f(cfg);
            auto kit = XiKit<Rat>::standard(f);
            auto p = rnd_domain_torus<Rat>(rng, f);
            auto n = sha(f, kit, LeviElement<Rat>::identity(f), p);
            CHECK(n.xi == kit.xi());
            CHECK(norm(f, n) == torus_embed(f, p));
        }
    }

    TEST_CASE("section equivariance under Delta") {
        std::mt19937_64 rng(97);
        for (const auto& cfg : kConfigs) {
            SpaceFrame<Rat> f(cfg);
            auto kit = XiKit<Rat>::standard(f);
            auto p = rnd_domain_torus<Rat>(rng, f);
            Mat<Rat> gamma = torus_embed(f, p);
            // Delta(h) conjugates the section to the section at h gamma h^{-1}
            // for h in H^E; build one from the hE subalgebra via Cayley.
            auto basisE = hE_basis(f);
            Mat<Rat> a(f.dim_X(), f.dim_X());
            for (const auto& b : basisE) a = a + b * rnd_rat(rng, -1, 1);
            Mat<Rat> ipa = Mat<Rat>::identity(f.dim_X()) + a;
            if (sgn(det(ipa)) == 0) continue;
            Mat<Rat> hE = (Mat<Rat>::identity(f.dim_X()) - a) * inverse(ipa);
            auto lhs = ad(f, Delta(kit, hE), kit.n_S(gamma));
            auto rhs = kit.n_S(hE * gamma * inverse(hE));
            CHECK(lhs.xi == rhs.xi);
            CHECK(lhs.eta == rhs.eta);
        }
    }
}

TEST_SUITE("classification") {
    TEST_CASE("sections over regular split points classify as split") {
        std::mt19937_64 rng(101);
        for (const auto& cfg : kConfigs) {
            SpaceFrame<Rat> f(cfg);
            auto kit = XiKit<Rat>::standard(f);
            auto p = rnd_domain_torus<Rat>(rng, f);
            auto m = rnd_levi<Rat>(rng, f);
            CHECK(classify(f, sha(f, kit, m, p)) == TorusClass::split);
        }
    }

    TEST_CASE("irregular points classify as none") {
        SpaceFrame<Rat> f({-1, 1, 2});
        auto kit = XiKit<Rat>::standard(f);
        // t = -1 is irregular for the symplectic family; the section still
        // exists but the norm sits on a root hyperplane.
        TorusPoint<Rat> p{{rat(-1)}};
        auto n = kit.n_S(torus_embed(f, p));
        CHECK(classify(f, n) == TorusClass::none);
    }

    TEST_CASE("compact points classify as compact on the real backend") {
        SpaceFrame<double> f({+1, 1, 1});
        auto ckit = compact_kit(f);
        Mat<double> gamma = compact_embed(f, 0.8);
        CHECK(is_isometry(gamma, f.gram_X(), 1e-9));
        auto n = sha(f, ckit, LeviElement<double>::identity(f), gamma);
        CHECK(classify(f, n) == TorusClass::compact);

        SpaceFrame<double> fs({-1, 1, 2});
        auto kit = XiKit<double>::standard(fs);
        Mat<double> gs = compact_embed(fs, 1.1);
        CHECK(is_isometry(gs, fs.gram_X(), 1e-9));
        CHECK(classify(fs, sha(fs, kit, LeviElement<double>::identity(fs), gs)) ==
              TorusClass::compact);
    }
}

TEST_SUITE("fibers") {
    TEST_CASE("every fiber member hits the same element") {
        std::mt19937_64 rng(103);
        for (const auto& cfg : kConfigs) {
            SpaceFrame<Rat> f(cfg);
            auto kit = XiKit<Rat>::standard(f);
            auto p = rnd_domain_torus<Rat>(rng, f);
            auto m = rnd_levi<Rat>(rng, f);
            auto n = sha(f, kit, m, p);
            auto fib = fiber(f, kit, m, p);
            CHECK(fib.size() == weyl_group(f).size());
            std::size_t in_domain = 0;
            for (const auto& [mm, pp] : fib) {
                auto n2 = sha(f, kit, mm, pp);
                CHECK(n2.xi == n.xi);
                CHECK(n2.eta == n.eta);
                bool domain = true;
                for (std::size_t i = 0; i < pp.t.size(); ++i) {
                    if (abs(pp.t[i]) <= 1) domain = false;
                    if (i + 1 < pp.t.size() && abs(pp.t[i]) < abs(pp.t[i + 1]))
                        domain = false;
                }
                if (domain) ++in_domain;
            }
            CHECK(in_domain == 1);
        }
    }
}

TEST_SUITE("decomposition") {
    TEST_CASE("exact split round trip") {
        std::mt19937_64 rng(107);
        for (const auto& cfg : kConfigs) {
            CAPTURE(cfg.epsilon);
            CAPTURE(cfg.n);
            CAPTURE(cfg.r);
            SpaceFrame<Rat> f(cfg);
            auto kit = XiKit<Rat>::standard(f);
            int done = 0;
            for (int trial = 0; trial < 6 && done < 3; ++trial) {
                auto p = rnd_domain_torus<Rat>(rng, f);
                auto m = rnd_levi<Rat>(rng, f);
                auto n = sha(f, kit, m, p);
                auto dec = decompose(f, kit, n);
                CHECK(dec.cls == TorusClass::split);
                CHECK(dec.torus.t == p.t);
                auto back = sha(f, kit, dec.m, dec.gamma);
                CHECK(back.xi == n.xi);
                CHECK(back.eta == n.eta);
                ++done;
            }
            CHECK(done == 3);
        }
    }

    TEST_CASE("real split round trip") {
        std::mt19937_64 rng(109);
        for (const auto& cfg : kConfigs) {
            SpaceFrame<double> f(cfg);
            auto kit = XiKit<double>::standard(f);
            auto p = rnd_domain_torus<double>(rng, f);
            auto m = rnd_levi<double>(rng, f);
            auto n = sha(f, kit, m, p);
            auto dec = decompose(f, kit, n);
            CHECK(dec.cls == TorusClass::split);
            for (std::size_t i = 0; i < p.t.size(); ++i)
                CHECK(dec.torus.t[i] == doctest::Approx(p.t[i]).epsilon(1e-7));
            auto back = sha(f, kit, dec.m, dec.gamma);
            CHECK(mat_close(back.xi, n.xi, 1e-7));
            CHECK(mat_close(back.eta, n.eta, 1e-7));
        }
    }

    TEST_CASE("compact round trip, orthogonal rank one") {
        std::mt19937_64 rng(113);
        SpaceFrame<double> f({+1, 1, 1});
        auto ckit = compact_kit(f);
        for (double theta : {0.4, 1.3, 2.6}) {
            Mat<double> gamma = compact_embed(f, theta);
            auto m = rnd_levi<double>(rng, f);
            auto n = sha(f, ckit, m, gamma);
            auto dec = decompose(f, XiKit<double>::standard(f), n);
            CHECK(dec.cls == TorusClass::compact);
            CHECK(dec.angle == doctest::Approx(theta).epsilon(1e-6));
            auto back = sha(f, ckit, dec.m, dec.gamma);
            CHECK(mat_close(back.xi, n.xi, 1e-6));
            CHECK(mat_close(back.eta, n.eta, 1e-6));
        }
    }

    TEST_CASE("compact round trip, symplectic rank one") {
        std::mt19937_64 rng(127);
        for (GroupConfig cfg : {GroupConfig{-1, 1, 2}, GroupConfig{-1, 1, 0}}) {
            SpaceFrame<double> f(cfg);
            auto kit = XiKit<double>::standard(f);
            for (double theta : {0.5, 2.0}) {
                Mat<double> gamma = compact_embed(f, theta);
                auto m = rnd_levi<double>(rng, f);
                auto n = sha(f, kit, m, gamma);
                auto dec = decompose(f, kit, n);
                CHECK(dec.cls == TorusClass::compact);
                CHECK(dec.angle == doctest::Approx(theta).epsilon(1e-6));
                auto back = sha(f, kit, dec.m, dec.gamma);
                CHECK(mat_close(back.xi, n.xi, 1e-6));
                CHECK(mat_close(back.eta, n.eta, 1e-6));
            }
        }
    }

    TEST_CASE("decompose rejects elements off the torus classes") {
        SpaceFrame<Rat> f({-1, 1, 2});
        auto kit = XiKit<Rat>::standard(f);
        // t = -1 has a section but sits on a root hyperplane.
        TorusPoint<Rat> p{{rat(-1)}};
        CHECK_THROWS_AS(decompose(f, kit, kit.n_S(torus_embed(f, p))), std::domain_error);
    }
}
