#pragma once

// Executable verifiers for the growth-and-mixing inequalities. Every check
// returns a Verdict carrying both sides of the inequality and the gap, not a
// bare boolean, so callers can assert magnitudes and diagnose near-misses.
//
// Verdict convention: holds <=> gap >= -tolerance. Checks that assert a
// strict inequality store a negative tolerance, which turns the same rule
// into "gap must clear a positive margin".

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "growmix/mlcore.hpp"
#include "growmix/models.hpp"
#include "growmix/spectral.hpp"
#include "growmix/structure.hpp"

namespace growmix {

inline constexpr double kCheckTol = 1e-9;

struct Verdict {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0; // rhs - lhs unless documented otherwise
    bool equality_expected = false;
    double tolerance = kCheckTol;

    // Strict-case validation: an expected equality must land on |gap| <= tol.
    bool equality_ok() const {
        return !equality_expected || std::fabs(gap) <= std::fabs(tolerance);
    }
};

namespace detail {

inline Verdict make_verdict(double lhs, double rhs, double gap, bool equality_expected,
                            double tolerance) {
    Verdict v;
    v.lhs = lhs;
    v.rhs = rhs;
    v.gap = gap;
    v.equality_expected = equality_expected;
    v.tolerance = tolerance;
    v.holds = gap >= -tolerance;
    return v;
}

inline void require_grid(const Vector& grid, bool strictly_positive) {
    if (grid.empty()) throw bad_grid_error("empty grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(grid[k])) throw bad_grid_error("non-finite grid value");
        if (strictly_positive ? !(grid[k] > 0.0) : !(grid[k] >= 0.0))
            throw bad_grid_error("grid values must be " +
                                 std::string(strictly_positive ? "positive" : "non-negative"));
        if (k > 0 && !(grid[k] > grid[k - 1])) throw bad_grid_error("grid must be strictly increasing");
    }
}

} // namespace detail

// spab(A + D) - spab(A) <= u(A+D)' D v(A+D), with equality iff D = cI.
inline Verdict check_basic_inequality(const MLMatrix& a, const DiagonalGrowth& d,
                                      double tol = kCheckTol) {
    const PerronPair ad = perron(a.plus_diagonal(d));
    const double lhs = ad.r - perron(a).r;
    const double rhs = dot(ad.p, d.values()); // u' D v = sum_i p_i d_i
    return detail::make_verdict(lhs, rhs, rhs - lhs, d.is_uniform(0.0), tol);
}

// u(A + D)' A v(A + D) <= spab(A), with equality iff D = cI.
inline Verdict check_corollary_basic(const MLMatrix& a, const DiagonalGrowth& d,
                                     double tol = kCheckTol) {
    const PerronPair ad = perron(a.plus_diagonal(d));
    const double lhs = dot(ad.u, a.matrix() * ad.v);
    const double rhs = perron(a).r;
    return detail::make_verdict(lhs, rhs, rhs - lhs, d.is_uniform(0.0), tol);
}

struct ChainVerdict {
    Verdict first;
    Verdict second;
    bool holds = false;
};

// Chained inequality for beta > 1:
//   spab(A+D) - spab(A) <= spab(A/beta + D) - spab(A/beta)
//                       <= u(A + beta D)' D v(A + beta D),
// with equality throughout iff D = cI.
inline ChainVerdict check_convexity_derived(const MLMatrix& a, const DiagonalGrowth& d,
                                            double beta, double tol = kCheckTol) {
    if (!(beta > 1.0)) throw bad_beta_error(beta);
    const bool uniform = d.is_uniform(0.0);
    const double t1 = perron(a.plus_diagonal(d)).r - perron(a).r;
    const MLMatrix a_slow = a.scaled(1.0 / beta);
    const double t2 = perron(a_slow.plus_diagonal(d)).r - perron(a_slow).r;
    const PerronPair heavy = perron(a.plus_diagonal(d.scaled(beta)));
    const double t3 = dot(heavy.p, d.values());
    ChainVerdict chain;
    chain.first = detail::make_verdict(t1, t2, t2 - t1, uniform, tol);
    chain.second = detail::make_verdict(t2, t3, t3 - t2, uniform, tol);
    chain.holds = chain.first.holds && chain.second.holds;
    return chain;
}

enum class Side { Left, Right };

// For summands A_k sharing a Perron vector on the chosen side:
//   u(A+D)' A v(A+D) <= sum_k spab(A_k),  A = sum_k A_k,
// with equality iff D = cI. The shared-vector premise is verified within
// 1e-8 on sum-normalized vectors before anything else runs.
inline Verdict check_sums(const std::vector<MLMatrix>& a_list, const DiagonalGrowth& d, Side side,
                          double tol = kCheckTol) {
    if (a_list.empty()) throw precondition_error("need at least one summand");
    std::vector<PerronPair> pairs;
    pairs.reserve(a_list.size());
    for (const auto& ak : a_list) {
        if (ak.size() != a_list.front().size())
            throw dimension_mismatch_error(a_list.front().size(), ak.size());
        pairs.push_back(perron(ak));
    }
    auto side_vector = [&](const PerronPair& p) {
        Vector w = (side == Side::Right) ? p.v : p.u;
        const double s = sum(w);
        for (double& x : w) x /= s;
        return w;
    };
    const Vector ref = side_vector(pairs.front());
    double deviation = 0.0;
    for (std::size_t k = 1; k < pairs.size(); ++k) {
        const Vector w = side_vector(pairs[k]);
        for (std::size_t i = 0; i < w.size(); ++i)
            deviation = std::max(deviation, std::fabs(w[i] - ref[i]));
    }
    if (deviation > 1e-8) throw no_common_perron_vector_error(deviation);

    MLMatrix a = a_list.front();
    for (std::size_t k = 1; k < a_list.size(); ++k) a = a + a_list[k];
    double rhs = 0.0;
    for (const auto& p : pairs) rhs += p.r;
    const PerronPair ad = perron(a.plus_diagonal(d));
    const double lhs = dot(ad.u, a.matrix() * ad.v);
    return detail::make_verdict(lhs, rhs, rhs - lhs, d.is_uniform(0.0), tol);
}

namespace detail {

inline bool proportional(const Vector& a, const Vector& b, double tol) {
    const double sa = sum(a), sb = sum(b);
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::fabs(a[i] / sa - b[i] / sb));
    return dev <= tol;
}

inline Verdict flip_verdict(const MLMatrix& a, const PerronPair& pair, const Vector& y,
                            bool equality_expected, double tol) {
    Vector z(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) z[i] = pair.p[i] / y[i]; // y.*z = u.*v
    const double rhs = dot(z, a.matrix() * y);
    return make_verdict(pair.r, rhs, rhs - pair.r, equality_expected, tol);
}

} // namespace detail

// z' A y >= spab(A) for any positive y with y.*z = u.*v; equality iff y is
// proportional to v(A) or the two Perron vectors coincide.
inline Verdict check_flip(const MLMatrix& a, const Vector& y, double tol = kCheckTol) {
    if (y.size() != a.size()) throw dimension_mismatch_error(a.size(), y.size());
    for (double v : y)
        if (!(v > 0.0)) throw non_positive_vector_error("y");
    const PerronPair pair = perron(a);
    const bool equality =
        detail::proportional(y, pair.v, 1e-10) || detail::proportional(pair.u, pair.v, 1e-10);
    return detail::flip_verdict(a, pair, y, equality, tol);
}

// The flipped variant y = u(A), z = v(A): v' A u >= spab(A), strict unless
// the Perron vectors coincide. One canonical scaling (y summing like v) is
// fixed for reproducibility; the bilinear form is invariant under
// (y, z) -> (sy, z/s) anyway.
inline Verdict check_flip(const MLMatrix& a, double tol = kCheckTol) {
    const PerronPair pair = perron(a);
    Vector y(a.size());
    const double us = sum(pair.u);
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = pair.u[i] / us;
    return detail::flip_verdict(a, pair, y, detail::proportional(pair.u, pair.v, 1e-10), tol);
}

struct MainDerivativeVerdict {
    Verdict vs_block; // d/dm spab(F(m)) <= spab(A_kappa) (= spab(A) when irreducible)
    Verdict vs_full;  // d/dm spab(F(m)) <= spab(A)
    bool reducible = false;
    bool inconclusive = false; // argmax blocks tie: the derivative is one-sided here
    std::vector<std::size_t> argmax_blocks;
    bool holds = false;
};

// d/dm spab(D + mA) <= spab(A) for m > 0; for reducible A the sharper chain
// ... <= spab(A_kappa) <= spab(A) is reported, where kappa is the argmax block
// of the normal form. Equality requires D = cI, or blockwise-uniform D on
// every argmax block in the reducible case.
inline MainDerivativeVerdict check_main_derivative_bound(const GrowthMixingSystem& sys, double m,
                                                         double tol = kCheckTol) {
    if (!(m > 0.0)) throw precondition_error("mixing rate must be positive");
    MainDerivativeVerdict out;
    if (is_irreducible(sys.mixing())) {
        const double lhs = spab_derivative(sys, m);
        const double rhs = perron(sys.mixing()).r;
        const bool uniform = sys.growth().is_uniform(0.0);
        out.vs_block = detail::make_verdict(lhs, rhs, rhs - lhs, uniform, tol);
        out.vs_full = out.vs_block;
        out.argmax_blocks = {0};
        out.holds = out.vs_block.holds;
        return out;
    }
    const BlockwiseSpab bw = blockwise_spab(sys, m);
    out.reducible = true;
    out.argmax_blocks = bw.argmax_blocks;
    out.inconclusive = bw.argmax_blocks.size() > 1;
    const std::size_t kappa = bw.argmax_blocks.front();
    const auto& block = bw.form.blocks[kappa];
    const double lhs = (block.size() == 1) ? sys.mixing()(block[0], block[0])
                                           : spab_derivative(sys.restricted(block), m);
    const double spab_a_kappa = bw.per_block[kappa].spab_a;
    double spab_a_full = -std::numeric_limits<double>::infinity();
    for (const auto& pb : bw.per_block) spab_a_full = std::max(spab_a_full, pb.spab_a);
    bool blockwise_uniform = true;
    for (std::size_t k : bw.argmax_blocks)
        blockwise_uniform = blockwise_uniform && sys.growth().restricted(bw.form.blocks[k]).is_uniform(0.0);
    out.vs_block = detail::make_verdict(lhs, spab_a_kappa, spab_a_kappa - lhs, blockwise_uniform, tol);
    out.vs_full = detail::make_verdict(lhs, spab_a_full, spab_a_full - lhs, false, tol);
    out.holds = out.vs_block.holds && out.vs_full.holds;
    return out;
}

namespace detail {

// Shared body of the conservative / lossy monotonicity checks. The verdict's
// gap is the smallest margin found (one-step decreases of spab and negated
// derivatives); lhs is the worst violation, rhs is 0.
inline Verdict monotone_verdict(const GrowthMixingSystem& sys, const Vector& m_grid,
                                bool equality_expected, double stored_tol) {
    require_grid(m_grid, false);
    double margin = std::numeric_limits<double>::infinity();
    double prev = 0.0;
    for (std::size_t k = 0; k < m_grid.size(); ++k) {
        const double s = spab(sys.materialize(m_grid[k]));
        if (k > 0) margin = std::min(margin, prev - s);
        if (m_grid[k] > 0.0) margin = std::min(margin, -spab_derivative_blockwise(sys, m_grid[k]).value);
        prev = s;
    }
    return make_verdict(-margin, 0.0, margin, equality_expected, stored_tol);
}

} // namespace detail

// Conservative mixing: spab(F(m)) never increases along the grid and the
// derivative is <= 0 at every sampled m > 0.
inline Verdict check_monotone_decrease(const GrowthMixingSystem& sys, const Vector& m_grid,
                                       double tol = kCheckTol) {
    if (conservation_class(sys.mixing()) != ConservationClass::Conservative)
        throw wrong_conservation_class_error("conservative");
    return detail::monotone_verdict(sys, m_grid, sys.growth().is_uniform(0.0), tol);
}

// Lossy mixing: strict decrease, every margin must clear +tol.
inline Verdict check_lossy_strict(const GrowthMixingSystem& sys, const Vector& m_grid,
                                  double tol = kCheckTol) {
    if (conservation_class(sys.mixing()) != ConservationClass::Lossy)
        throw wrong_conservation_class_error("lossy");
    return detail::monotone_verdict(sys, m_grid, false, -tol);
}

// For spab(A) = 0: spab(D + mA) stays inside [min_i d_i, max_i d_i].
// gap = distance to the nearer bound.
inline Verdict check_bounds(const GrowthMixingSystem& sys, double m, double tol = kCheckTol) {
    const double sa = spab(sys.mixing());
    if (std::fabs(sa) > 1e-10) throw spab_not_zero_error(sa);
    const double s = spab(sys.materialize(m));
    const double lo = sys.growth().min(), hi = sys.growth().max();
    const double gap = std::min(s - lo, hi - s);
    return detail::make_verdict(s, hi, gap, sys.growth().is_uniform(0.0), tol);
}

// Rank-one mixing family alpha e' - I: conservative by construction,
// irreducible iff alpha > 0 elementwise. Under D + mA its spectral abscissa
// tends to sum_i alpha_i d_i as m grows.
inline MLMatrix limit_family(const Vector& alpha) {
    if (alpha.empty()) throw bad_probability_vector_error("empty");
    double s = 0.0;
    for (double x : alpha) {
        if (!std::isfinite(x)) throw bad_probability_vector_error("non-finite weight");
        if (x < 0.0) throw bad_probability_vector_error("negative weight");
        s += x;
    }
    if (std::fabs(s - 1.0) > 1e-12) throw bad_probability_vector_error("weights do not sum to 1");
    const std::size_t n = alpha.size();
    Matrix a(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) a(i, j) = alpha[i];
    return detail::finish_conservative(std::move(a));
}

inline constexpr double kLimitProximityTol = 1e-3;

// Convergence of spab(F(m)) toward lambda along an increasing grid: the final
// error must be within 1e-3 and the error sequence must be non-increasing
// once it first drops below 0.1.
inline Verdict check_limit(const GrowthMixingSystem& sys, double lambda_target,
                           const Vector& m_grid) {
    detail::require_grid(m_grid, true);
    Vector errs(m_grid.size());
    double s_final = 0.0;
    for (std::size_t k = 0; k < m_grid.size(); ++k) {
        s_final = spab(sys.materialize(m_grid[k]));
        errs[k] = std::fabs(s_final - lambda_target);
    }
    double margin = kLimitProximityTol - errs.back();
    bool crossed = false;
    for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
        if (!crossed && errs[k] < 0.1) crossed = true;
        if (crossed) margin = std::min(margin, errs[k] - errs[k + 1]);
    }
    return detail::make_verdict(s_final, lambda_target, margin, false, 1e-12);
}

struct StabilityResult {
    Verdict verdict;
    double spab_at_m_star = 0.0;
    std::optional<double> m_crit; // root of spab(F(m)) above m_star, when one exists
};

// For spab(A) <= 0: instability at m* implies instability at every smaller
// mixing rate. Also locates the instability threshold by bisection past m*.
inline StabilityResult check_stability_monotone(const GrowthMixingSystem& sys, double m_star,
                                                const Vector& m_grid, double tol = kCheckTol) {
    const double sa = spab(sys.mixing());
    if (sa > 1e-12) throw precondition_error("spab(A) must be <= 0");
    detail::require_grid(m_grid, false);
    if (m_grid.back() > m_star + 1e-12) throw bad_grid_error("grid must stay within [0, m*]");

    StabilityResult out;
    out.spab_at_m_star = spab(sys.materialize(m_star));
    if (!(out.spab_at_m_star > 0.0)) throw precondition_error("system must be unstable at m*");

    double worst = std::numeric_limits<double>::infinity();
    for (double m : m_grid) worst = std::min(worst, spab(sys.materialize(m)));
    out.verdict = detail::make_verdict(worst, out.spab_at_m_star, worst - out.spab_at_m_star,
                                       false, tol);

    // Threshold search: double until spab goes negative, then bisect. The
    // search stops at 1e4; past that the shifted power iteration loses its
    // spectral gap on conservative patterns and the asymptote cases report
    // "none found" anyway.
    constexpr double kSearchCap = 1e4;
    double lo = m_star, hi = std::max(m_star, 1.0) * 2.0;
    bool found = false;
    while (hi <= kSearchCap) {
        if (spab(sys.materialize(hi)) < 0.0) {
            found = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if (found) {
        for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (spab(sys.materialize(mid)) > 0.0 ? lo : hi) = mid;
        }
        out.m_crit = 0.5 * (lo + hi);
    }
    return out;
}

struct HeterogeneityResult {
    Verdict verdict;     // the exact m = 0 claim: max_i d_i > mean(D)
    double m_star = 0.0; // first sampled m where the excess fails; +inf if none
    std::size_t prefix_len = 0;
    bool unbounded = false;
};

// Non-uniform growth beats the average growth rate for small enough mixing.
// The claim certified here is the exact one at m = 0 (spab(F(0)) = max_i d_i
// strictly exceeds the mean); how far the excess persists along the grid is
// reported via m_star and prefix_len, since the guaranteed neighborhood of 0
// may end before the first sampled point.
inline HeterogeneityResult check_heterogeneity(const GrowthMixingSystem& sys,
                                               const Vector& search_grid) {
    if (sys.growth().is_uniform(0.0)) throw not_heterogeneous_error();
    detail::require_grid(search_grid, true);
    const double mean = sys.growth().mean();

    HeterogeneityResult out;
    for (std::size_t k = 0; k < search_grid.size(); ++k) {
        if (spab(sys.materialize(search_grid[k])) > mean) {
            ++out.prefix_len;
        } else {
            out.m_star = search_grid[k];
            break;
        }
    }
    out.unbounded = out.prefix_len == search_grid.size();
    if (out.unbounded) out.m_star = std::numeric_limits<double>::infinity();
    out.verdict = detail::make_verdict(sys.growth().max(), mean, sys.growth().max() - mean,
                                       false, 0.0);
    return out;
}

// Midpoint convexity of m -> spab(D + mA):
//   spab(F((1-a)m1 + a m2)) <= (1-a) spab(F(m1)) + a spab(F(m2)),
// strict unless D = cI.
inline Verdict check_convexity_in_m(const GrowthMixingSystem& sys, double m1, double m2,
                                    double alpha, double tol = kCheckTol) {
    if (!(m1 >= 0.0) || !(m2 >= 0.0) || m1 == m2) throw precondition_error("need m1 != m2, both >= 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw precondition_error("alpha must lie in (0, 1)");
    const double mid = (1.0 - alpha) * m1 + alpha * m2;
    const double lhs = spab(sys.materialize(mid));
    const double rhs = (1.0 - alpha) * spab(sys.materialize(m1)) + alpha * spab(sys.materialize(m2));
    return detail::make_verdict(lhs, rhs, rhs - lhs, sys.growth().is_uniform(0.0), tol);
}

} // namespace growmix
