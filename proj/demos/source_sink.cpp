// Two-patch source-sink model: a growing source patch coupled to a decaying
// sink. Shows the library workflow end to end: build a system, inspect the
// Perron data, sweep the mixing rate, and locate the stability threshold.

#include <cstdio>

#include "growmix/growmix.hpp"

int main() {
    using namespace growmix;

    // Patch 1 grows at +0.6/t, patch 2 decays at -1.4/t. Migration follows a
    // fixed stochastic kernel with a mild leak (mortality in transit).
    const DiagonalGrowth growth({0.6, -1.4});
    Matrix a{{-0.55, 0.30}, {0.50, -0.35}}; // column sums -0.05 each: lossy
    const GrowthMixingSystem sys(growth, validate_ml(std::move(a)));

    std::printf("mixing pattern class: %s, spab(A) = %.6f\n",
                conservation_class(sys.mixing()) == ConservationClass::Lossy ? "lossy"
                                                                             : "other",
                spab(sys.mixing()));

    std::printf("\n   m      spab(F(m))   d spab/dm    growth at t=50\n");
    for (double m : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double s = spab(sys.materialize(m));
        const double deriv = m > 0.0 ? spab_derivative(sys, m) : right_derivative_at_zero(sys);
        const double rate = asymptotic_rate(sys, m, {1.0, 1.0}, 50.0);
        std::printf("  %4.1f   %10.6f   %10.6f   %10.6f\n", m, s, deriv, rate);
    }

    // Unstable at low mixing; the threshold is where spab(F(m)) crosses zero.
    const StabilityResult stab = check_stability_monotone(sys, 0.25, {0.0, 0.1, 0.25});
    if (stab.m_crit)
        std::printf("\nstability threshold m_crit = %.6f (spab there: %.2e)\n", *stab.m_crit,
                    spab(sys.materialize(*stab.m_crit)));

    // Every mixing increase hurts the aggregate growth rate.
    const Verdict v = check_main_derivative_bound(sys, 1.0).vs_block;
    std::printf("derivative bound at m=1: %.6f <= %.6f (gap %.6f)\n", v.lhs, v.rhs, v.gap);
    return 0;
}
