#include "doctest.h"

#include <cmath>

#include "growmix/dynamics.hpp"
#include "growmix/models.hpp"
#include "growmix/theorems.hpp"

using namespace growmix;

namespace {

const MLMatrix kSym2 = validate_ml(Matrix{{-1.0, 1.0}, {1.0, -1.0}});
const DiagonalGrowth kD2({1.0, -1.0});

DiagonalGrowth uniform_growth(std::size_t n, double c) { return DiagonalGrowth(Vector(n, c)); }

GrowthMixingSystem instance(std::size_t n, RandomStyle style, std::uint64_t seed) {
    return random_system(n, style, seed);
}

} // namespace

TEST_CASE("verdict bookkeeping") {
    const Verdict v = check_basic_inequality(kSym2, kD2);
    CHECK(v.holds == (v.gap >= -v.tolerance));
    CHECK_FALSE(v.equality_expected);
    const Verdict eq = check_basic_inequality(kSym2, uniform_growth(2, 2.0));
    CHECK(eq.equality_expected);
    CHECK(eq.equality_ok());
}

TEST_CASE("basic inequality: equality at uniform growth") {
    const Verdict v = check_basic_inequality(kSym2, uniform_growth(2, 2.0));
    CHECK(v.lhs == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(v.rhs == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(std::fabs(v.gap) <= 1e-10);
}

TEST_CASE("basic inequality: frozen 2x2 values") {
    const Verdict v = check_basic_inequality(kSym2, kD2);
    CHECK(v.lhs == doctest::Approx(0.41421356237309515).epsilon(1e-10)); // sqrt(2) - 1
    CHECK(v.rhs == doctest::Approx(0.7071067811865476).epsilon(1e-10));  // 1/sqrt(2)
    CHECK(v.gap > 0.0);
    CHECK(v.holds);
}

TEST_CASE("basic inequality: strict on random non-uniform instances") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto sys = instance(4, static_cast<RandomStyle>(seed % 3), seed + 100);
        const Verdict v = check_basic_inequality(sys.mixing(), sys.growth());
        CHECK(v.holds);
        if (sys.growth().spread() >= 0.5) CHECK(v.gap > 1e-10);
    }
}

TEST_CASE("corollary: u'Av is capped by spab(A)") {
    SUBCASE("zero growth hits the cap exactly") {
        const Verdict v = check_corollary_basic(kSym2, uniform_growth(2, 0.0));
        CHECK(std::fabs(v.gap) <= 1e-10);
        CHECK(v.equality_expected);
    }
    SUBCASE("frozen 2x2 value") {
        const Verdict v = check_corollary_basic(kSym2, kD2);
        CHECK(v.lhs == doctest::Approx(-0.29289321881345254).epsilon(1e-9)); // 1/sqrt(2) - 1
        CHECK(v.rhs == doctest::Approx(0.0).epsilon(1e-11));
        CHECK(v.holds);
    }
    SUBCASE("conservative instances keep u'Av negative") {
        for (std::uint64_t seed = 0; seed < 15; ++seed) {
            const auto sys = instance(5, RandomStyle::ConservativeStochastic, seed + 200);
            const Verdict v = check_corollary_basic(sys.mixing(), sys.growth());
            CHECK(v.holds);
            CHECK(v.lhs < 0.0);
            CHECK(v.rhs == doctest::Approx(0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("basic and corollary gaps agree algebraically") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto sys = instance(2 + seed % 6, static_cast<RandomStyle>(seed % 3), seed + 300);
        const Verdict b = check_basic_inequality(sys.mixing(), sys.growth());
        const Verdict c = check_corollary_basic(sys.mixing(), sys.growth());
        CHECK(std::fabs(b.gap - c.gap) <= 1e-10);
    }
}

TEST_CASE("derived convexity chain") {
    SUBCASE("beta must exceed one") {
        CHECK_THROWS_AS(check_convexity_derived(kSym2, kD2, 1.0), bad_beta_error);
    }
    SUBCASE("uniform growth collapses the chain") {
        const ChainVerdict chain = check_convexity_derived(kSym2, uniform_growth(2, -0.7), 3.0);
        CHECK(std::fabs(chain.first.gap) <= 1e-10);
        CHECK(std::fabs(chain.second.gap) <= 1e-10);
        CHECK(chain.holds);
    }
    SUBCASE("strictly increasing for the frozen 2x2") {
        const ChainVerdict chain = check_convexity_derived(kSym2, kD2, 2.0);
        CHECK(chain.first.gap > 1e-8);
        CHECK(chain.second.gap > 1e-8);
    }
    SUBCASE("random instances with a large beta") {
        for (std::uint64_t seed = 0; seed < 15; ++seed) {
            const auto sys = instance(4, static_cast<RandomStyle>(seed % 3), seed + 400);
            const ChainVerdict chain = check_convexity_derived(sys.mixing(), sys.growth(), 10.0);
            CHECK(chain.first.gap >= -1e-10);
            CHECK(chain.second.gap >= -1e-10);
        }
    }
}

TEST_CASE("sums corollary") {
    SUBCASE("a single summand reduces to the basic corollary") {
        const Verdict s = check_sums({kSym2}, kD2, Side::Right);
        const Verdict c = check_corollary_basic(kSym2, kD2);
        CHECK(s.gap == doctest::Approx(c.gap).epsilon(1e-12));
    }
    SUBCASE("frozen shared-eigenvector pair") {
        const MLMatrix a2 = kSym2.scaled(2.0);
        const Verdict v = check_sums({kSym2, a2}, kD2, Side::Right);
        CHECK(v.rhs == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(v.lhs == doctest::Approx(-0.1539501058484587).epsilon(1e-9));
        CHECK(v.holds);
    }
    SUBCASE("scaled families share both Perron vectors") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto sys = instance(4, RandomStyle::ConservativeStochastic, seed + 500);
            Rng rng(seed);
            std::vector<MLMatrix> family;
            for (int k = 0; k < 3; ++k) family.push_back(sys.mixing().scaled(rng.uniform(0.2, 3.0)));
            for (Side side : {Side::Right, Side::Left}) {
                const Verdict v = check_sums(family, sys.growth(), side);
                CHECK(v.holds);
                CHECK(v.gap > 0.0);
            }
        }
    }
    SUBCASE("mismatched Perron vectors are rejected") {
        const MLMatrix other = validate_ml(Matrix{{0.0, 2.0}, {3.0, 0.0}});
        CHECK_THROWS_AS(check_sums({kSym2, other}, kD2, Side::Right),
                        no_common_perron_vector_error);
    }
}

TEST_CASE("flip inequality") {
    const MLMatrix a = validate_ml(Matrix{{0.0, 2.0}, {3.0, 0.0}});
    SUBCASE("explicit y = v(A) is the equality case") {
        const PerronPair p = perron(a);
        const Verdict v = check_flip(a, p.v);
        CHECK(std::fabs(v.gap) <= 1e-10);
        CHECK(v.equality_expected);
    }
    SUBCASE("symmetric matrices sit at equality under the flip") {
        const Verdict v = check_flip(kSym2);
        CHECK(v.equality_expected);
        CHECK(std::fabs(v.gap) <= 1e-10);
    }
    SUBCASE("frozen flipped value for the asymmetric 2x2") {
        const Verdict v = check_flip(a);
        CHECK(v.lhs == doctest::Approx(2.449489742783178).epsilon(1e-10));
        CHECK(v.rhs == doctest::Approx(2.6536138880151094).epsilon(1e-9));
        CHECK_FALSE(v.equality_expected);
        CHECK(v.holds);
    }
    SUBCASE("y must be positive") {
        CHECK_THROWS_AS(check_flip(a, Vector{1.0, 0.0}), non_positive_vector_error);
    }
}

TEST_CASE("main derivative bound") {
    SUBCASE("uniform growth: derivative equals spab(A)") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const MLMatrix a = instance(4, RandomStyle::GeneralML, seed + 600).mixing();
            const GrowthMixingSystem sys(uniform_growth(4, 1.3), a);
            const MainDerivativeVerdict v = check_main_derivative_bound(sys, 1.5);
            CHECK(v.vs_block.equality_expected);
            CHECK(std::fabs(v.vs_block.gap) <= 1e-9);
            CHECK(v.holds);
        }
    }
    SUBCASE("frozen 2x2 case") {
        const MainDerivativeVerdict v = check_main_derivative_bound(GrowthMixingSystem(kD2, kSym2), 1.0);
        CHECK(v.vs_block.lhs == doctest::Approx(-0.29289321881345254).epsilon(1e-9));
        CHECK(v.vs_block.rhs == doctest::Approx(0.0).epsilon(1e-11));
        CHECK_FALSE(v.reducible);
        CHECK(v.holds);
    }
    SUBCASE("reducible conservative blocks with non-uniform growth on the argmax block") {
        // Block {0,1} dominates; growth there is non-uniform, so the block
        // derivative stays strictly below spab(A_kappa) = 0 = spab(A).
        Matrix a(4);
        a(0, 1) = a(1, 0) = 1.0;
        a(0, 0) = a(1, 1) = -1.0;
        a(2, 3) = a(3, 2) = 1.0;
        a(2, 2) = a(3, 3) = -1.0;
        const GrowthMixingSystem sys(DiagonalGrowth({1.0, -1.0, -2.0, -2.0}), validate_ml(a));
        const MainDerivativeVerdict v = check_main_derivative_bound(sys, 1.0);
        CHECK(v.reducible);
        CHECK_FALSE(v.inconclusive);
        CHECK(v.vs_block.lhs == doctest::Approx(-0.29289321881345254).epsilon(1e-9));
        CHECK(v.vs_block.rhs == doctest::Approx(0.0).epsilon(1e-11)); // spab(A_kappa)
        CHECK(v.vs_full.rhs == doctest::Approx(0.0).epsilon(1e-11));  // spab(A)
        CHECK(v.holds);
    }
    SUBCASE("tied argmax blocks are inconclusive") {
        const GrowthMixingSystem sys(DiagonalGrowth({1.0, 1.0}), validate_ml(Matrix(2)));
        const MainDerivativeVerdict v = check_main_derivative_bound(sys, 0.5);
        CHECK(v.inconclusive);
        CHECK(v.argmax_blocks.size() == 2);
    }
}

TEST_CASE("monotonicity along mixing grids") {
    const Vector grid{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    SUBCASE("conservative: non-increasing, constant under uniform growth") {
        const GrowthMixingSystem sys(kD2, kSym2);
        const Verdict v = check_monotone_decrease(sys, grid);
        CHECK(v.holds);
        CHECK(v.gap > 0.0);

        const GrowthMixingSystem flat(uniform_growth(2, 0.7), kSym2);
        const Verdict vf = check_monotone_decrease(flat, grid);
        CHECK(vf.equality_expected);
        CHECK(std::fabs(vf.gap) <= 1e-9);
        for (double m : grid)
            CHECK(spab(flat.materialize(m)) == doctest::Approx(0.7).epsilon(1e-11));
    }
    SUBCASE("lossy: strict decrease with closed-form spot checks") {
        const MLMatrix lossy = validate_ml(Matrix{{-1.0, 0.5}, {0.5, -1.0}});
        const GrowthMixingSystem sys(kD2, lossy);
        CHECK(spab(sys.materialize(0.5)) == doctest::Approx(0.5307764064044151).epsilon(1e-10));
        CHECK(spab(sys.materialize(1.0)) == doctest::Approx(0.1180339887498949).epsilon(1e-10));
        CHECK(spab(sys.materialize(2.0)) == doctest::Approx(-0.5857864376269049).epsilon(1e-10));
        const Verdict v = check_lossy_strict(sys, grid);
        CHECK(v.holds);
        CHECK(v.tolerance < 0.0); // strict margin convention
    }
    SUBCASE("class preconditions are enforced") {
        CHECK_THROWS_AS(check_monotone_decrease(
                            GrowthMixingSystem(kD2, validate_ml(Matrix{{-1.0, 0.5}, {0.5, -1.0}})), grid),
                        wrong_conservation_class_error);
        CHECK_THROWS_AS(check_lossy_strict(GrowthMixingSystem(kD2, kSym2), grid),
                        wrong_conservation_class_error);
    }
}

TEST_CASE("bounds lemma") {
    SUBCASE("uniform growth pins both bounds") {
        const GrowthMixingSystem sys(uniform_growth(2, 1.5), kSym2);
        const Verdict v = check_bounds(sys, 2.0);
        CHECK(v.lhs == doctest::Approx(1.5).epsilon(1e-11));
        CHECK(std::fabs(v.gap) <= 1e-9);
    }
    SUBCASE("frozen 2x2 value sits inside the band") {
        const Verdict v = check_bounds(GrowthMixingSystem(kD2, kSym2), 1.0);
        CHECK(v.lhs == doctest::Approx(0.41421356237309515).epsilon(1e-10));
        CHECK(v.holds);
    }
    SUBCASE("random conservative systems across scales of m") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto sys = instance(2 + seed % 5, RandomStyle::ConservativeStochastic, seed + 700);
            for (double m : {0.01, 1.0, 100.0}) CHECK(check_bounds(sys, m).holds);
        }
    }
    SUBCASE("requires spab(A) = 0") {
        const auto sys = instance(3, RandomStyle::GeneralML, 3);
        CHECK_THROWS_AS(check_bounds(sys, 1.0), spab_not_zero_error);
    }
}

TEST_CASE("limit family construction") {
    const MLMatrix a = limit_family({0.5, 0.5});
    CHECK(a(0, 0) == -0.5);
    CHECK(a(0, 1) == 0.5);
    CHECK(a(1, 0) == 0.5);
    CHECK(a(1, 1) == -0.5);
    CHECK(conservation_class(a) == ConservationClass::Conservative);
    CHECK(is_irreducible(a));

    CHECK_FALSE(is_irreducible(limit_family({1.0, 0.0})));
    CHECK_THROWS_AS(limit_family({0.7, 0.7}), bad_probability_vector_error);
    CHECK_THROWS_AS(limit_family({-0.1, 1.1}), bad_probability_vector_error);
}

TEST_CASE("boundary limit family locks onto one site's rate") {
    // alpha = e_0, D = diag(1,-1): spab(F(m)) = 1 exactly once m > 0.
    const GrowthMixingSystem sys(kD2, limit_family({1.0, 0.0}));
    for (double m : {0.5, 2.0, 100.0})
        CHECK(spab(sys.materialize(m)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interior limit families converge to the weighted mean") {
    const Vector geom{1.0, 10.0, 100.0, 1000.0, 10000.0};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed + 31);
        const std::size_t n = 2 + rng.index(5);
        Vector alpha(n);
        double s = 0.0;
        for (double& x : alpha) {
            x = rng.exponential();
            s += x;
        }
        for (double& x : alpha) x /= s;
        Vector d(n);
        for (double& x : d) x = rng.uniform(-3.0, 3.0);
        const GrowthMixingSystem sys(DiagonalGrowth(d), limit_family(alpha));
        const double lambda = dot(alpha, d);
        const Verdict v = check_limit(sys, lambda, geom);
        CHECK(v.holds);
        CHECK(v.lhs == doctest::Approx(lambda).epsilon(1e-3));
    }
}

TEST_CASE("stability persists below an unstable mixing rate") {
    SUBCASE("conservative 2x2 is unstable at every m with no threshold") {
        const GrowthMixingSystem sys(kD2, kSym2);
        const StabilityResult r = check_stability_monotone(sys, 2.0, {0.0, 0.5, 1.0, 1.5, 2.0});
        CHECK(r.verdict.holds);
        CHECK_FALSE(r.m_crit.has_value());
    }
    SUBCASE("lossy system crosses zero at a finite threshold") {
        const MLMatrix lossy = validate_ml(Matrix{{-1.0, 0.5}, {0.5, -1.0}});
        const GrowthMixingSystem sys(DiagonalGrowth({2.0, -1.0}), lossy);
        const StabilityResult r = check_stability_monotone(sys, 0.5, {0.0, 0.25, 0.5});
        CHECK(r.verdict.holds);
        REQUIRE(r.m_crit.has_value());
        CHECK(std::fabs(spab(sys.materialize(*r.m_crit))) <= 1e-9);
    }
    SUBCASE("uniform positive growth never stabilizes") {
        const GrowthMixingSystem sys(uniform_growth(2, 1.0), kSym2);
        const StabilityResult r = check_stability_monotone(sys, 3.0, {0.0, 1.0, 2.0, 3.0});
        CHECK(r.verdict.holds);
        CHECK_FALSE(r.m_crit.has_value());
    }
    SUBCASE("preconditions") {
        const auto general = instance(3, RandomStyle::GeneralML, 5);
        if (spab(general.mixing()) > 1e-12)
            CHECK_THROWS_AS(check_stability_monotone(general, 1.0, {0.0, 1.0}), precondition_error);
        const GrowthMixingSystem stable(uniform_growth(2, -1.0), kSym2);
        CHECK_THROWS_AS(check_stability_monotone(stable, 1.0, {0.0, 1.0}), precondition_error);
    }
}

TEST_CASE("heterogeneity beats the average growth rate at low mixing") {
    const Vector grid{0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4};
    SUBCASE("2x2 closed form keeps the excess at every m") {
        const GrowthMixingSystem sys(kD2, kSym2);
        const HeterogeneityResult r = check_heterogeneity(sys, grid);
        CHECK(r.verdict.holds);
        CHECK(r.unbounded);
        CHECK(r.prefix_len == grid.size());
    }
    SUBCASE("uniform growth is rejected") {
        CHECK_THROWS_AS(check_heterogeneity(GrowthMixingSystem(uniform_growth(2, 1.0), kSym2), grid),
                        not_heterogeneous_error);
    }
    SUBCASE("random systems satisfy the claim near zero") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto sys = instance(4, RandomStyle::ConservativeStochastic, seed + 800);
            CHECK(check_heterogeneity(sys, grid).verdict.holds);
        }
    }
}

TEST_CASE("convexity in the mixing rate") {
    SUBCASE("uniform growth is affine") {
        const GrowthMixingSystem sys(uniform_growth(2, -0.3), kSym2);
        const Verdict v = check_convexity_in_m(sys, 0.5, 2.0, 0.5);
        CHECK(std::fabs(v.gap) <= 1e-10);
        CHECK(v.equality_expected);
    }
    SUBCASE("frozen 2x2 midpoint") {
        const Verdict v = check_convexity_in_m(GrowthMixingSystem(kD2, kSym2), 0.5, 2.0, 0.5);
        CHECK(v.lhs == doctest::Approx(0.35078105935821213).epsilon(1e-10));
        CHECK(v.rhs == doctest::Approx(0.42705098312484235).epsilon(1e-10));
        CHECK(v.gap == doctest::Approx(0.07626992376663022).epsilon(1e-8));
    }
    SUBCASE("random draws stay convex") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto sys = instance(2 + seed % 6, static_cast<RandomStyle>(seed % 3), seed + 900);
            Rng rng(seed);
            const double m1 = rng.uniform(0.0, 2.0);
            const double m2 = m1 + rng.uniform(0.5, 2.0);
            const Verdict v = check_convexity_in_m(sys, m1, m2, rng.uniform(0.25, 0.75));
            CHECK(v.gap >= -1e-10);
            if (sys.growth().spread() >= 0.5) CHECK(v.gap > 1e-8);
        }
    }
    SUBCASE("parameter validation") {
        const GrowthMixingSystem sys(kD2, kSym2);
        CHECK_THROWS_AS(check_convexity_in_m(sys, 1.0, 1.0, 0.5), precondition_error);
        CHECK_THROWS_AS(check_convexity_in_m(sys, 0.0, 1.0, 1.0), precondition_error);
    }
}

TEST_CASE("every check holds across a large random batch") {
    const Vector small_grid{0.0, 0.75, 1.5, 2.25, 3.0};
    for (std::uint64_t i = 0; i < 500; ++i) {
        const std::size_t n = 2 + i % 7;
        const RandomStyle style = static_cast<RandomStyle>(i % 3);
        const auto sys = random_system(n, style, 40000 + i);
        Rng rng(i);
        const double m = rng.uniform(0.2, 4.0);

        CHECK(check_basic_inequality(sys.mixing(), sys.growth()).holds);
        CHECK(check_corollary_basic(sys.mixing(), sys.growth()).holds);
        CHECK(check_convexity_derived(sys.mixing(), sys.growth(), 2.0).holds);
        CHECK(check_flip(sys.mixing()).holds);
        CHECK(check_main_derivative_bound(sys, m).holds);
        const double m2 = m + rng.uniform(0.5, 2.0);
        CHECK(check_convexity_in_m(sys, m, m2, rng.uniform(0.25, 0.75)).holds);
        if (style == RandomStyle::ConservativeStochastic) {
            CHECK(check_monotone_decrease(sys, small_grid).holds);
            CHECK(check_bounds(sys, m).holds);
        }
        if (style == RandomStyle::Lossy) CHECK(check_lossy_strict(sys, small_grid).holds);

        // Equality cases: substitute uniform growth into the same checks.
        if (i % 25 == 0) {
            const DiagonalGrowth flat = uniform_growth(n, rng.uniform(-2.0, 2.0));
            CHECK(std::fabs(check_basic_inequality(sys.mixing(), flat).gap) <= 1e-9);
            CHECK(std::fabs(check_corollary_basic(sys.mixing(), flat).gap) <= 1e-9);
            const GrowthMixingSystem flat_sys(flat, sys.mixing());
            CHECK(std::fabs(check_main_derivative_bound(flat_sys, m).vs_block.gap) <= 1e-9);
            CHECK(std::fabs(check_convexity_in_m(flat_sys, m, m2, 0.5).gap) <= 1e-9);
        }
        // Strictness: a clearly non-uniform D keeps strict gaps away from zero.
        if (sys.growth().spread() >= 0.5) {
            CHECK(check_basic_inequality(sys.mixing(), sys.growth()).gap > 1e-8);
            CHECK(check_corollary_basic(sys.mixing(), sys.growth()).gap > 1e-8);
            const ChainVerdict strict_chain = check_convexity_derived(sys.mixing(), sys.growth(), 2.0);
            CHECK(strict_chain.first.gap > 1e-8);
            CHECK(strict_chain.second.gap > 1e-8);
            CHECK(check_main_derivative_bound(sys, m).vs_block.gap > 1e-8);
        }
    }
}
