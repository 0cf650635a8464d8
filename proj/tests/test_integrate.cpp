#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "radical/integrate.hpp"

using namespace radical;
using namespace testutil;

TEST_SUITE("rng") {
    TEST_CASE("counter stream is deterministic and in range") {
        for (std::uint64_t idx = 0; idx < 64; ++idx)
            for (std::uint32_t dim = 0; dim < 4; ++dim) {
                double a = uniform01(7, idx, dim);
                double b = uniform01(7, idx, dim);
                CHECK(a == b);
                CHECK(a >= 0.0);
                CHECK(a < 1.0);
            }
        CHECK(uniform01(7, 0, 0) != uniform01(7, 0, 1));
        CHECK(uniform01(7, 0, 0) != uniform01(7, 1, 0));
        CHECK(uniform01(7, 0, 0) != uniform01(8, 0, 0));
    }
}

TEST_SUITE("bump functions") {
    TEST_CASE("profile shape and one dimensional mass") {
        CHECK(bump_profile(0.0) == 1.0);
        CHECK(bump_profile(1.0) == 0.0);
        CHECK(bump_profile(-1.0) == 0.0);
        CHECK(bump_profile(2.5) == 0.0);
        // Quadrature against the closed form.
        double sum = 0.0;
        const int steps = 200000;
        for (int i = 0; i < steps; ++i) {
            double u = -1.0 + (i + 0.5) * (2.0 / steps);
            sum += bump_profile(u) * (2.0 / steps);
        }
        CHECK(std::fabs(sum - bump_mass_1d()) < 1e-8);
    }

    TEST_CASE("closed form integral is a product") {
        auto b = BumpFunction::axis_aligned({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
        CHECK(lhs_exact(b) == doctest::Approx(std::pow(bump_mass_1d(), 3)).epsilon(1e-12));

        auto b7 = BumpFunction::axis_aligned(std::vector<double>(7, 0.25),
                                             std::vector<double>(7, 0.1));
        double expect = std::pow(0.1, 7) * std::pow(bump_mass_1d(), 7);
        CHECK(lhs_exact(b7) == doctest::Approx(expect).epsilon(1e-12));
    }

    TEST_CASE("degenerate widths are rejected") {
        auto b = BumpFunction::axis_aligned({0.0, 0.0}, {0.1, 0.0});
        CHECK_THROWS_AS(lhs_exact(b), std::invalid_argument);
        auto c = BumpFunction::axis_aligned({0.0}, {-0.1});
        CHECK_THROWS_AS(lhs_exact(c), std::invalid_argument);
    }
}

namespace {

struct Setup {
    SpaceFrame<double> f;
    XiKit<double> kit;
    CalibratedBases<double> cb;
    RootDatum rd;

    explicit Setup(const GroupConfig& cfg)
        : f(cfg), kit(XiKit<double>::standard(f)), cb(calibrated_bases(f, kit)), rd(cfg) {}
};

}  // namespace

TEST_SUITE("global chart of N") {
    TEST_CASE("coordinates round trip and land in the group") {
        std::mt19937_64 rng(11);
        for (const auto& cfg : {GroupConfig{+1, 1, 1}, GroupConfig{-1, 1, 2}}) {
            Setup s(cfg);
            SheetIntegrator si(s.f, s.kit, s.cb, s.rd);
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<double> v(si.dim());
                for (auto& x : v) x = rnd_scalar<double>(rng);
                auto n = si.chart_N(v);
                // Group membership.
                Mat<double> res = n.eta + s.f.star_eta(n.eta) + n.xi * s.f.star_xi(n.xi);
                CHECK(res.max_abs() < 1e-12);
                auto back = si.chart_coords(n);
                for (std::size_t i = 0; i < v.size(); ++i)
                    CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-10));
            }
        }
    }

    TEST_CASE("sheet chart density is one at the center") {
        Setup s({+1, 1, 1});
        SheetIntegrator si(s.f, s.kit, s.cb, s.rd);
        std::vector<double> zero(si.dim(), 0.0);
        CHECK(si.chart_density(zero) == doctest::Approx(1.0).epsilon(1e-12));
        // Small displacements stay near one.
        std::vector<double> u(si.dim(), 0.05);
        double d = si.chart_density(u);
        CHECK(d > 0.9);
        CHECK(d < 1.1);
    }
}

TEST_SUITE("invariant density") {
    TEST_CASE("identity leaves the density unchanged") {
        Setup s({+1, 1, 1});
        std::mt19937_64 rng(3);
        auto n = rnd_unipotent(rng, s.f);
        auto m = LeviElement<double>::identity(s.f);
        CHECK(adinv_density(s.f, s.kit, ad(s.f, m, n)) ==
              doctest::Approx(adinv_density(s.f, s.kit, n)).epsilon(1e-12));
    }

    TEST_CASE("spot ratio for diag(2,1)") {
        Setup s({+1, 1, 1});
        TorusPoint<double> p{{2.0}};
        auto n = s.kit.n_S(torus_embed(s.f, p));
        Mat<double> g(2, 2);
        g(0, 0) = 2.0;
        g(1, 1) = 1.0;
        LeviElement<double> m{g, Mat<double>::identity(s.f.dim_X())};
        double ratio = adinv_density(s.f, s.kit, ad(s.f, m, n)) / adinv_density(s.f, s.kit, n);
        CHECK(ratio == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    }

    TEST_CASE("equivariance at random points") {
        std::mt19937_64 rng(17);
        for (const auto& cfg : {GroupConfig{+1, 1, 1}, GroupConfig{-1, 1, 2}}) {
            Setup s(cfg);
            for (int trial = 0; trial < 20; ++trial) {
                auto n = rnd_unipotent(rng, s.f);
                if (std::fabs(det(n.eta)) < 1e-6) continue;
                auto m = rnd_levi(rng, s.f);
                double lhs = adinv_density(s.f, s.kit, ad(s.f, m, n));
                double rhs = adinv_density(s.f, s.kit, n) / delta_N(s.f, m);
                CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::fabs(rhs));
            }
        }
    }

    TEST_CASE("singular eta is rejected") {
        Setup s({+1, 1, 1});
        UnipotentElement<double> n{Mat<double>(2, 3), Mat<double>(2, 2)};
        CHECK_THROWS_AS(adinv_density(s.f, s.kit, n), std::domain_error);
    }
}

TEST_SUITE("monte carlo verification") {
    TEST_CASE("sampling weight matches the numeric jacobian") {
        Setup s({+1, 1, 1});
        SheetIntegrator si(s.f, s.kit, s.cb, s.rd);
        std::mt19937_64 rng(23);
        TorusPoint<double> ghat{{2.0}};
        auto mhat = LeviElement<double>::identity(s.f);
        std::uniform_real_distribution<double> box(-0.07, 0.07);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> u(si.dim());
            for (auto& x : u) x = box(rng);
            auto [m, p] = si.chart_MS(mhat, ghat, u);
            double w = si.plain_weight(m, p);
            auto rep = jacobian_verify(s.f, s.kit, s.cb, s.rd, m, p);
            CHECK(std::fabs(std::fabs(rep.det_numeric) - w) <= 1e-6 * std::max(1.0, w));
        }
    }

    TEST_CASE("plain mode balances the closed form") {
        Setup s({+1, 1, 1});
        VerifyOptions opt;
        opt.samples = 200000;
        opt.seed = 5;
        auto mhat = LeviElement<double>::identity(s.f);
        TorusPoint<double> ghat{{2.0}};
        auto rep = verify_theorem(s.f, s.kit, s.cb, s.rd, mhat, ghat, opt);
        CHECK(rep.sheet_verified);
        CHECK(rep.lhs > 0.0);
        CHECK(rep.rhs_stderr > 0.0);
        CHECK(rep.gap() <= std::max(3.0 * rep.rhs_stderr, 0.02 * rep.lhs));
    }

    TEST_CASE("ad invariant mode balances and cross checks") {
        Setup s({+1, 1, 1});
        VerifyOptions opt;
        opt.samples = 200000;
        opt.seed = 6;
        opt.mode = MeasureMode::ad_invariant;
        auto mhat = LeviElement<double>::identity(s.f);
        TorusPoint<double> ghat{{2.0}};
        auto rep = verify_theorem(s.f, s.kit, s.cb, s.rd, mhat, ghat, opt);
        CHECK(rep.crosscheck_gap <= 1e-8);
        double spread = std::sqrt(rep.lhs_stderr * rep.lhs_stderr +
                                  rep.rhs_stderr * rep.rhs_stderr);
        CHECK(rep.gap() <= std::max(3.0 * spread, 0.02 * rep.lhs));
    }

    TEST_CASE("two sheet bookkeeping reproduces one sheet") {
        Setup s({+1, 1, 1});
        VerifyOptions opt;
        opt.samples = 200000;
        opt.seed = 7;
        auto mhat = LeviElement<double>::identity(s.f);
        TorusPoint<double> ghat{{2.0}};
        auto one = verify_theorem(s.f, s.kit, s.cb, s.rd, mhat, ghat, opt);
        opt.two_sheet = true;
        auto two = verify_theorem(s.f, s.kit, s.cb, s.rd, mhat, ghat, opt);
        double spread = std::sqrt(one.rhs_stderr * one.rhs_stderr +
                                  two.rhs_stderr * two.rhs_stderr);
        CHECK(std::fabs(one.rhs - two.rhs) <= std::max(3.0 * spread, 0.01 * one.lhs));
    }

    TEST_CASE("standard error scales with the sample count") {
        Setup s({+1, 1, 1});
        SheetIntegrator si(s.f, s.kit, s.cb, s.rd);
        auto mhat = LeviElement<double>::identity(s.f);
        TorusPoint<double> ghat{{2.0}};
        Mat<double> gm = torus_embed(s.f, ghat);
        BumpFunction bump;
        bump.frame = si.sheet_frame(mhat, gm);
        bump.center = si.chart_coords(sha(s.f, s.kit, mhat, gm));
        bump.widths.assign(si.dim(), 0.05);
        auto small = rhs_mc(si, bump, mhat, ghat, 1.7, 50000, 9, MeasureMode::plain);
        auto big = rhs_mc(si, bump, mhat, ghat, 1.7, 200000, 9, MeasureMode::plain);
        double ratio = small.stderr_ / big.stderr_;
        CHECK(ratio > 2.0 * 0.75);
        CHECK(ratio < 2.0 * 1.25);
    }

    TEST_CASE("vanishing test function gives an exact zero") {
        Setup s({+1, 1, 1});
        SheetIntegrator si(s.f, s.kit, s.cb, s.rd);
        auto mhat = LeviElement<double>::identity(s.f);
        TorusPoint<double> ghat{{2.0}};
        BumpFunction bump;
        bump.frame = Mat<double>::identity(si.dim());
        // Support far away from the sheet image.
        bump.center.assign(si.dim(), 50.0);
        bump.widths.assign(si.dim(), 0.05);
        auto est = rhs_mc(si, bump, mhat, ghat, 1.7, 2000, 1, MeasureMode::plain);
        CHECK(est.value == 0.0);
        CHECK(est.stderr_ == 0.0);
    }

    TEST_CASE("oversized support fails the containment check") {
        Setup s({+1, 1, 1});
        VerifyOptions opt;
        opt.samples = 1000;
        opt.width = 1.5;
        auto mhat = LeviElement<double>::identity(s.f);
        TorusPoint<double> ghat{{2.0}};
        CHECK_THROWS_AS(verify_theorem(s.f, s.kit, s.cb, s.rd, mhat, ghat, opt),
                        std::domain_error);
    }
}
