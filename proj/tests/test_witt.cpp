#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "radical/witt.hpp"

using namespace radical;
using namespace testutil;

namespace {

template <typename T>
void check_extension(const Mat<T>& u, const Mat<T>& img, const Mat<T>& g, int eps) {
    Mat<T> h = witt_extend(u, img, g, eps);
    CHECK(mat_close(h.transpose() * g * h, g, 1e-8));
    CHECK(mat_close(h * u, img, 1e-8));
}

}  // namespace

TEST_SUITE("witt") {
    TEST_CASE("identity map extends to an isometry") {
        SpaceFrame<Rat> f({+1, 1, 1});
        Mat<Rat> g = f.gram_X();
        Mat<Rat> u{{rat(0)}, {rat(1)}, {rat(0)}};
        check_extension(u, u, g, +1);
    }

    TEST_CASE("hyperbolic pair rescaling, exact orthogonal") {
        SpaceFrame<Rat> f({+1, 1, 1});
        Mat<Rat> g = f.gram_X();
        Mat<Rat> u{{rat(1), rat(0)}, {rat(0), rat(0)}, {rat(0), rat(1)}};
        Mat<Rat> img{{rat(2), rat(0)}, {rat(0), rat(0)}, {rat(0), rat(1, 2)}};
        check_extension(u, img, g, +1);
    }

    TEST_CASE("anisotropic vector moved within its square class") {
        SpaceFrame<Rat> f({+1, 1, 1});
        Mat<Rat> g = f.gram_X();
        // q = 2 on both sides; complements differ by a square factor.
        Mat<Rat> u{{rat(1)}, {rat(0)}, {rat(1)}};
        Mat<Rat> img{{rat(2)}, {rat(0)}, {rat(1, 2)}};
        check_extension(u, img, g, +1);
    }

    TEST_CASE("exact backend reports when the greedy reduction cannot match") {
        // Definite ambient form: no isotropic vectors, so the complements
        // reduce to diagonals whose entries must align up to squares.  Here
        // they do not, even though a real extension exists.
        Mat<Rat> g = Mat<Rat>::identity(4);
        Mat<Rat> u{{rat(1)}, {rat(0)}, {rat(0)}, {rat(0)}};
        Mat<Rat> img{{rat(1, 3)}, {rat(2, 3)}, {rat(2, 3)}, {rat(0)}};
        CHECK_THROWS_WITH_AS(witt_extend(u, img, g, +1),
                             "Witt extension unavailable on exact backend", std::domain_error);

        Mat<double> gd = Mat<double>::identity(4);
        Mat<double> ud{{1.0}, {0.0}, {0.0}, {0.0}};
        Mat<double> imgd{{1.0 / 3}, {2.0 / 3}, {2.0 / 3}, {0.0}};
        check_extension(ud, imgd, gd, +1);
    }

    TEST_CASE("degenerate subspace is rejected") {
        SpaceFrame<Rat> f({+1, 1, 1});
        Mat<Rat> g = f.gram_X();
        Mat<Rat> u{{rat(1)}, {rat(0)}, {rat(0)}};  // isotropic line is degenerate
        CHECK_THROWS_WITH_AS(witt_extend(u, u, g, +1), "degenerate subspace",
                             std::domain_error);
    }

    TEST_CASE("symplectic extension always works, exact backend") {
        SpaceFrame<Rat> f({-1, 1, 2});
        Mat<Rat> g = f.gram_X();
        std::mt19937_64 rng(31);
        for (int t = 0; t < 10; ++t) {
            // A random symplectic pair (u, v) with <u, v> = 1.
            Mat<Rat> u = rnd_mat<Rat>(rng, 4, 1);
            Mat<Rat> v = rnd_mat<Rat>(rng, 4, 1);
            Rat p = (u.transpose() * g * v)(0, 0);
            if (sgn(p) == 0) continue;
            v = v * scalar_traits<Rat>::div(rat(1), p);
            Mat<Rat> pair = Mat<Rat>::hstack(u, v);
            Mat<Rat> e1{{rat(1)}, {rat(0)}, {rat(0)}, {rat(0)}};
            Mat<Rat> e4{{rat(0)}, {rat(0)}, {rat(0)}, {rat(1)}};
            check_extension(pair, Mat<Rat>::hstack(e1, e4), g, -1);
        }
    }

    TEST_CASE("random full isometries restricted to a subspace are recovered") {
        std::mt19937_64 rng(37);
        for (GroupConfig cfg : {GroupConfig{-1, 1, 2}, GroupConfig{+1, 2, 2}}) {
            SpaceFrame<Rat> f(cfg);
            Mat<Rat> g = f.gram_X();
            for (int t = 0; t < 5; ++t) {
                Mat<Rat> h = rnd_isometry<Rat>(rng, f);
                // Take the first two coordinate lines where the form is ok.
                Mat<Rat> u(f.dim_X(), 2);
                u(0, 0) = rat(1);
                u(f.dim_X() - 1, 1) = rat(1);
                Mat<Rat> gu = u.transpose() * g * u;
                if (rank(gu) < 2) continue;
                check_extension(u, h * u, g, cfg.epsilon);
            }
        }
    }

    TEST_CASE("real backend handles definite complements by signature") {
        SpaceFrame<double> f({+1, 2, 2});
        Mat<double> g = f.gram_X();
        std::mt19937_64 rng(41);
        Mat<double> h = rnd_isometry<double>(rng, f);
        Mat<double> u(f.dim_X(), 2);
        u(0, 0) = 1.0;
        u(1, 1) = 1.0;
        u(f.dim_X() - 1, 0) = 0.5;
        u(f.dim_X() - 2, 1) = -0.25;
        check_extension(u, h * u, g, +1);
    }
}
