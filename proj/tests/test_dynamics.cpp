#include "doctest.h"

#include <cmath>

#include "growmix/dynamics.hpp"
#include "growmix/models.hpp"
#include "growmix/theorems.hpp"

using namespace growmix;

namespace {
const MLMatrix kSym2 = validate_ml(Matrix{{-1.0, 1.0}, {1.0, -1.0}});
const DiagonalGrowth kD2({1.0, -1.0});
} // namespace

TEST_CASE("matrix exponential basics") {
    CHECK(matrix_exponential(Matrix(3), 1.0) == Matrix::identity(3));

    const Matrix d = matrix_exponential(DiagonalGrowth({1.0, -1.0}).as_matrix(), 1.0);
    CHECK(d(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(d(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(d(0, 1) == 0.0);

    const Matrix s = matrix_exponential(kSym2.matrix(), 1.0);
    CHECK(s(0, 0) == doctest::Approx(0.5676676416183064).epsilon(1e-12)); // (1+e^-2)/2
    CHECK(s(0, 1) == doctest::Approx(0.43233235838169365).epsilon(1e-12)); // (1-e^-2)/2
    CHECK(s(1, 0) == doctest::Approx(0.43233235838169365).epsilon(1e-12));
}

TEST_CASE("matrix exponential semigroup and positivity") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        Rng rng(seed + 10);
        const std::size_t n = 2 + rng.index(4);
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
        const double t1 = rng.uniform(0.1, 1.5), t2 = rng.uniform(0.1, 1.5);
        const Matrix both = matrix_exponential(m, t1 + t2);
        const Matrix split = matrix_exponential(m, t1) * matrix_exponential(m, t2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(both(i, j) == doctest::Approx(split(i, j)).epsilon(1e-8));

        const auto sys = random_system(n, RandomStyle::GeneralML, seed + 50);
        const Matrix em = matrix_exponential(sys.mixing().matrix(), rng.uniform(0.1, 2.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) CHECK(em(i, j) >= 0.0);
    }
}

TEST_CASE("matrix exponential overflow reporting") {
    Matrix hot(1);
    hot(0, 0) = 1000.0;
    CHECK_THROWS_AS(matrix_exponential(hot, 1.0), exp_overflow_error);
    Matrix huge(1);
    huge(0, 0) = 1e300;
    CHECK_THROWS_AS(matrix_exponential(huge, 1e10), exp_overflow_error); // Mt itself overflows
}

TEST_CASE("trajectories") {
    SUBCASE("no mixing: per-site exponentials") {
        const GrowthMixingSystem sys(DiagonalGrowth({0.5, -0.25}), validate_ml(Matrix(2)));
        const auto traj = trajectory(sys, 1.0, {2.0, 3.0}, {0.0, 1.0, 2.0});
        for (const auto& [t, x] : traj) {
            CHECK(x[0] == doctest::Approx(2.0 * std::exp(0.5 * t)).epsilon(1e-12));
            CHECK(x[1] == doctest::Approx(3.0 * std::exp(-0.25 * t)).epsilon(1e-12));
        }
    }
    SUBCASE("conservative mixing with no growth preserves total mass") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const std::size_t n = 2 + seed % 4;
            const auto base = random_system(n, RandomStyle::ConservativeStochastic, seed + 90);
            const GrowthMixingSystem sys(DiagonalGrowth(Vector(n, 0.0)), base.mixing());
            Vector x0(n);
            Rng rng(seed);
            for (double& v : x0) v = rng.uniform(0.0, 2.0);
            x0[0] += 0.1;
            const double mass = sum(x0);
            for (const auto& [t, x] : trajectory(sys, 1.3, x0, {0.5, 1.0, 5.0, 20.0}))
                CHECK(sum(x) == doctest::Approx(mass).epsilon(1e-10));
        }
    }
    SUBCASE("2x2 closed form at several times") {
        const GrowthMixingSystem sys(DiagonalGrowth({0.0, 0.0}), kSym2);
        const auto traj = trajectory(sys, 1.0, {1.0, 0.0}, {0.1, 1.0, 10.0});
        for (const auto& [t, x] : traj) {
            CHECK(x[0] == doctest::Approx(0.5 * (1.0 + std::exp(-2.0 * t))).epsilon(1e-8));
            CHECK(x[1] == doctest::Approx(0.5 * (1.0 - std::exp(-2.0 * t))).epsilon(1e-8));
        }
    }
    SUBCASE("positivity for irreducible systems") {
        const auto sys = random_system(4, RandomStyle::GeneralML, 123);
        const auto traj = trajectory(sys, 1.0, {0.0, 1.0, 0.0, 0.0}, {0.25, 1.0});
        for (const auto& [t, x] : traj)
            for (double v : x) CHECK(v > 0.0);
    }
    SUBCASE("input validation") {
        const GrowthMixingSystem sys(kD2, kSym2);
        CHECK_THROWS_AS(trajectory(sys, 1.0, {0.0, 0.0}, {1.0}), precondition_error);
        CHECK_THROWS_AS(trajectory(sys, 1.0, {-1.0, 1.0}, {1.0}), precondition_error);
        CHECK_THROWS_AS(trajectory(sys, 1.0, {1.0, 0.0}, {1.0, 0.5}), bad_grid_error);
    }
}

TEST_CASE("asymptotic growth rates") {
    SUBCASE("uniform growth with conservative mixing grows at exactly c") {
        const GrowthMixingSystem sys(DiagonalGrowth({0.8, 0.8}), kSym2);
        CHECK(asymptotic_rate(sys, 1.0, {1.0, 1.0}, 50.0) == doctest::Approx(0.8).epsilon(1e-6));
    }
    SUBCASE("2x2 closed form") {
        const GrowthMixingSystem sys(kD2, kSym2);
        const double rate = asymptotic_rate(sys, 1.0, {1.0, 1.0}, 50.0);
        CHECK(std::fabs(rate - 0.41421356237309515) <= 1e-3);
    }
    SUBCASE("rate matches spab on random irreducible systems") {
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            const auto sys = random_system(2 + seed % 5, static_cast<RandomStyle>(seed % 3),
                                           seed + 7700);
            Rng rng(seed);
            const double m = rng.uniform(0.5, 2.0);
            Vector x0(sys.size());
            for (double& v : x0) v = rng.uniform(0.1, 1.0);
            CHECK(std::fabs(asymptotic_rate(sys, m, x0, 50.0) - spab(sys.materialize(m))) <= 1e-3);
        }
    }
    SUBCASE("an empty isolated block hides its growth") {
        // Two isolated conservative blocks; the faster one is left unloaded.
        Matrix a(4);
        a(0, 1) = a(1, 0) = 1.0;
        a(0, 0) = a(1, 1) = -1.0;
        a(2, 3) = a(3, 2) = 1.0;
        a(2, 2) = a(3, 3) = -1.0;
        const GrowthMixingSystem sys(DiagonalGrowth({0.5, 0.5, 0.0, 0.0}), validate_ml(a));
        CHECK(spab(sys.materialize(1.0)) == doctest::Approx(0.5).epsilon(1e-11));

        const Vector x0{0.0, 0.0, 1.0, 1.0};
        const double rate = asymptotic_rate(sys, 1.0, x0, 50.0);
        CHECK(std::fabs(rate - 0.0) <= 1e-3); // runner-up block's rate
        CHECK(0.5 - rate >= 0.1);

        const FrobeniusForm form = frobenius_normal_form(sys.mixing());
        bool loaded_dominant = false;
        for (std::size_t pos : form.isolated) {
            bool dominant = false;
            for (std::size_t i : form.blocks[pos]) dominant = dominant || sys.growth()[i] == 0.5;
            if (dominant) loaded_dominant = activates_block(form, x0, pos);
        }
        CHECK_FALSE(loaded_dominant);
    }
}

TEST_CASE("desk-scale diffusion system behaves like the small cases") {
    // 64 reflecting grid cells with a smooth growth profile.
    const std::size_t n = 64;
    const double h = 1.0 / static_cast<double>(n);
    Vector g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::sin(2.0 * 3.14159265358979323846 * (static_cast<double>(i) + 0.5) * h);
    const auto sys = discretize_diffusion_1d(g, 1.0, h, Boundary::Neumann);
    const double m = 0.2; // physical diffusivity ~ m / h^2 after the stencil scaling

    const double s = spab(sys.materialize(m));
    CHECK(s <= DiagonalGrowth(g).max() + 1e-9); // bounds lemma applies: spab(A) = 0
    CHECK(s >= DiagonalGrowth(g).min() - 1e-9);
    CHECK(spab_derivative(sys, m) <= 1e-12);

    Vector x0(n, 1.0);
    CHECK(std::fabs(asymptotic_rate(sys, m, x0, 50.0) - s) <= 1e-3);
}

TEST_CASE("stability classification") {
    const MLMatrix cons = kSym2;
    CHECK(classify_stability(GrowthMixingSystem(DiagonalGrowth({-1.0, -2.0}), cons), 1.0) ==
          Stability::Stable);
    CHECK(classify_stability(GrowthMixingSystem(kD2, cons), 1.0) == Stability::Unstable);
    CHECK(classify_stability(GrowthMixingSystem(DiagonalGrowth({0.0, 0.0}), cons), 1.0) ==
          Stability::Marginal);
}
