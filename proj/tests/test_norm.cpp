#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "radical/roots.hpp"

using namespace radical;
using namespace testutil;

namespace {

// Random regular rational torus point, resampled until regular.
template <typename T>
TorusPoint<T> rnd_regular_torus(std::mt19937_64& rng, const SpaceFrame<T>& f) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<T> t;
        for (std::size_t i = 0; i < f.n(); ++i) {
            T v = rnd_scalar<T>(rng, -6, 6);
            t.push_back(v);
        }
        TorusPoint<T> p{t};
        bool ok = true;
        for (const auto& v : t)
            if (scalar_traits<T>::is_zero(v, 1e-9)) ok = false;
        if (!ok) continue;
        if (torus_regularity(f, p).regular) return p;
    }
    throw std::runtime_error("no regular torus point found");
}

}  // namespace

TEST_SUITE("xikit") {
    TEST_CASE("standard kit has trivial upsilon and projector Xi_plus Xi") {
        for (GroupConfig cfg : {GroupConfig{+1, 1, 1}, GroupConfig{-1, 1, 2},
                                GroupConfig{-1, 1, 0}, GroupConfig{+1, 2, 2}}) {
            SpaceFrame<Rat> f(cfg);
            auto kit = XiKit<Rat>::standard(f);
            CHECK(kit.upsilon() == Mat<Rat>::identity(f.dim_W()));
            // xi_plus xi is the projection onto the moving part of X.
            CHECK(kit.xi_plus() * kit.xi() == f.proj_Eo());
            CHECK(kit.xi() * kit.xi_plus() == Mat<Rat>::identity(f.dim_W()));
        }
    }

    TEST_CASE("tau is an involution and theta inverts") {
        std::mt19937_64 rng(53);
        SpaceFrame<Rat> f({-1, 1, 2});
        auto kit = XiKit<Rat>::standard(f);
        Mat<Rat> g = rnd_invertible<Rat>(rng, f.dim_W());
        CHECK(kit.tau(kit.tau(g)) == g);
        CHECK(kit.theta(g) * kit.tau(g) == Mat<Rat>::identity(f.dim_W()));
        CHECK(kit.tau(g * g) == kit.tau(g) * kit.tau(g));
    }
}

TEST_SUITE("norm and section") {
    TEST_CASE("closed-form gamma_G agrees with the kit") {
        std::mt19937_64 rng(59);
        for (GroupConfig cfg : {GroupConfig{+1, 1, 1}, GroupConfig{-1, 1, 2},
                                GroupConfig{+1, 2, 2}}) {
            SpaceFrame<Rat> f(cfg);
            auto kit = XiKit<Rat>::standard(f);
            for (int t = 0; t < 10; ++t) {
                auto p = rnd_regular_torus<Rat>(rng, f);
                CHECK(torus_gamma_G(f, p) == kit.h_G(torus_embed(f, p)));
            }
        }
    }

    TEST_CASE("rank-one orthogonal spot values at t = 2") {
        SpaceFrame<Rat> f({+1, 1, 1});
        auto kit = XiKit<Rat>::standard(f);
        TorusPoint<Rat> p{{rat(2)}};
        CHECK(torus_gamma_G(f, p) == Mat<Rat>{{rat(1), rat(0)}, {rat(0), rat(-2)}});
        CHECK(kit.tau(torus_gamma_G(f, p)) == Mat<Rat>{{rat(-2), rat(0)}, {rat(0), rat(1)}});
    }

    TEST_CASE("section identities hold for random regular torus points") {
        std::mt19937_64 rng(61);
        for (GroupConfig cfg : {GroupConfig{+1, 1, 1}, GroupConfig{-1, 1, 2},
                                GroupConfig{+1, 2, 2}}) {
            SpaceFrame<Rat> f(cfg);
            auto kit = XiKit<Rat>::standard(f);
            for (int t = 0; t < 10; ++t) {
                auto p = rnd_regular_torus<Rat>(rng, f);
                Mat<Rat> gamma = torus_embed(f, p);
                Mat<Rat> gg = kit.h_G(gamma);
                // 1 + h_G + tau(h_G) = 0.
                CHECK(Mat<Rat>::identity(f.dim_W()) + gg + kit.tau(gg) ==
                      Mat<Rat>(f.dim_W(), f.dim_W()));
                // h_G theta(h_G) = -Xi(gamma^{-1}).
                CHECK(gg * kit.theta(gg) == -kit.Xi(inverse(gamma)));
                // The section lands in N and the norm recovers gamma.
                auto ns = kit.n_S(gamma);
                CHECK(constraint_holds(f, ns));
                CHECK(norm(f, ns) == gamma);
            }
        }
    }

    TEST_CASE("norm is equivariant under Levi conjugation on the section") {
        std::mt19937_64 rng(67);
        SpaceFrame<Rat> f({-1, 1, 2});
        auto kit = XiKit<Rat>::standard(f);
        auto p = rnd_regular_torus<Rat>(rng, f);
        auto ns = kit.n_S(torus_embed(f, p));
        for (int t = 0; t < 5; ++t) {
            auto m = rnd_levi<Rat>(rng, f);
            auto moved = ad(f, m, ns);
            CHECK(norm(f, moved) == m.h * norm(f, ns) * inverse(m.h));
        }
    }

    TEST_CASE("norm of a generic element is an isometry fixing ker xi*") {
        std::mt19937_64 rng(71);
        SpaceFrame<Rat> f({+1, 1, 1});
        for (int t = 0; t < 20; ++t) {
            auto n = rnd_unipotent<Rat>(rng, f);
            if (sgn(det(n.eta)) == 0) continue;
            Mat<Rat> nm = norm(f, n);
            CHECK(is_isometry(nm, f.gram_X()));
        }
    }
}

TEST_SUITE("modulus character") {
    TEST_CASE("exponents and the rank-one orthogonal spot value") {
        CHECK(delta_N_exponent({+1, 1, 1}) == 4);
        CHECK(delta_N_exponent({-1, 1, 2}) == 7);
        CHECK(delta_N_exponent({-1, 1, 0}) == 5);
        CHECK(delta_N_exponent({+1, 2, 2}) == 9);
        SpaceFrame<Rat> f({+1, 1, 1});
        LeviElement<Rat> m{Mat<Rat>{{rat(2), rat(0)}, {rat(0), rat(1)}},
                           Mat<Rat>::identity(3)};
        CHECK(delta_N(f, m) == doctest::Approx(16.0));
    }
}

TEST_SUITE("roots") {
    TEST_CASE("theta action and restriction") {
        RootDatum rd({+1, 2, 2});
        CHECK(rd.roots().size() == 12);
        for (const auto& r : rd.roots()) {
            CHECK(r.theta_fixed == (r.root.i + r.root.j == 5));
            // Restriction of the theta image equals that of the root.
            CHECK(rd.restrict(r.theta_image) == r.restriction);
        }
        // theta-fixed roots: i + j = 2n + 1.
        CHECK(rd.theta_fixed_roots().size() == 4);
        CHECK(rd.theta_orbit_representatives().size() == 4);
    }

    TEST_CASE("restricted root systems by type") {
        CHECK(RootDatum({+1, 1, 1}).restricted_roots().empty());
        CHECK(RootDatum({-1, 1, 2}).restricted_roots().size() == 2);
        CHECK(RootDatum({+1, 2, 2}).restricted_roots().size() == 4);
        CHECK(RootDatum({-1, 2, 2}).restricted_roots().size() == 8);
    }

    TEST_CASE("closed determinant formula spot values") {
        SpaceFrame<Rat> so7({+1, 1, 1});
        RootDatum rd7({+1, 1, 1});
        TorusPoint<Rat> p2{{rat(2)}};
        CHECK(det_L_closed(so7, rd7, p2) == rat(2));

        SpaceFrame<Rat> sp8({-1, 1, 2});
        RootDatum rd8({-1, 1, 2});
        CHECK(det_L_closed(sp8, rd8, p2) == rat(18));
        CHECK(D_Sha(sp8, rd8, p2) == doctest::Approx(18.0 / std::pow(2.0, 3.5)));
    }

    TEST_CASE("weyl group orders and torus action") {
        SpaceFrame<Rat> so7({+1, 1, 1});
        auto w7 = weyl_group(so7);
        CHECK(w7.size() == 2);

        SpaceFrame<Rat> sp8({-1, 1, 2});
        CHECK(weyl_group(sp8).size() == 2);

        SpaceFrame<Rat> sp6({-1, 1, 0});
        CHECK(weyl_group(sp6).size() == 2);

        SpaceFrame<Rat> so14({+1, 2, 2});
        auto w14 = weyl_group(so14);
        CHECK(w14.size() == 8);

        std::mt19937_64 rng(73);
        for (const auto& f : {so7, sp8, so14}) {
            auto ws = weyl_group(f);
            auto p = rnd_regular_torus<Rat>(rng, f);
            for (const auto& w : ws) {
                CHECK(is_isometry(w.h, f.gram_X()));
                for (auto i : f.idx_E_local()) CHECK(w.h(i, i) == rat(1));
                TorusPoint<Rat> q = p;
                weyl_act(w, q);
                CHECK(w.h * torus_embed(f, p) * inverse(w.h) == torus_embed(f, q));
            }
        }
    }

    TEST_CASE("regularity diagnostics") {
        SpaceFrame<Rat> sp8({-1, 1, 2});
        CHECK(!torus_regularity(sp8, TorusPoint<Rat>{{rat(1)}}).regular);
        auto rep = torus_regularity(sp8, TorusPoint<Rat>{{rat(-1)}});
        CHECK(!rep.regular);
        CHECK(rep.near_minus_one);

        SpaceFrame<Rat> so7({+1, 1, 1});
        auto rep7 = torus_regularity(so7, TorusPoint<Rat>{{rat(-1)}});
        CHECK(rep7.regular);  // no long root in the orthogonal family
        CHECK(rep7.near_minus_one);
        CHECK(torus_regularity(so7, TorusPoint<Rat>{{rat(3, 2)}}).regular);

        SpaceFrame<Rat> so14({+1, 2, 2});
        CHECK(!torus_regularity(so14, TorusPoint<Rat>{{rat(2), rat(2)}}).regular);
        CHECK(!torus_regularity(so14, TorusPoint<Rat>{{rat(2), rat(1, 2)}}).regular);
        CHECK(torus_regularity(so14, TorusPoint<Rat>{{rat(2), rat(3)}}).regular);
    }
}
