#pragma once

// Time-domain behavior of dx/dt = F(m) x: the matrix exponential, sampled
// trajectories, overflow-safe asymptotic growth-rate estimation, and the sign
// classification of the spectral abscissa.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "growmix/mlcore.hpp"
#include "growmix/spectral.hpp"
#include "growmix/structure.hpp"

namespace growmix {

// e^{Mt} by scaling and squaring: the scaled matrix norm is brought below
// 0.5, the exponential of the scaled matrix is summed as a truncated series
// to machine precision, and the result is squared back up.
inline Matrix matrix_exponential(const Matrix& m, double t) {
    if (!m.all_finite()) throw non_finite_error("matrix exponential input");
    if (!(t >= 0.0) || !std::isfinite(t)) throw precondition_error("time must be finite and >= 0");
    const std::size_t n = m.size();
    Matrix x = m * t;
    if (!x.all_finite()) throw exp_overflow_error("Mt exceeds the representable range");

    const double norm = x.inf_norm();
    int squarings = 0;
    for (double s = norm; s > 0.5; s /= 2.0) ++squarings;
    if (squarings > 60) throw exp_overflow_error("||Mt|| is too large to square back up");
    if (squarings > 0) x = x * std::pow(2.0, -squarings);

    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = term * x * (1.0 / k);
        result = result + term;
        if (term.inf_norm() <= 1e-17 * result.inf_norm()) break;
    }
    for (int k = 0; k < squarings; ++k) result = result * result;
    if (!result.all_finite()) throw exp_overflow_error("result exceeded the representable range");
    return result;
}

// x(t) = e^{F(m) t} x(0) sampled at the grid times. For irreducible F(m) and
// t > 0 every component is strictly positive regardless of which sites x(0)
// loads.
inline std::vector<std::pair<double, Vector>> trajectory(const GrowthMixingSystem& sys, double m,
                                                         const Vector& x0, const Vector& t_grid) {
    if (x0.size() != sys.size()) throw dimension_mismatch_error(sys.size(), x0.size());
    bool any = false;
    for (double v : x0) {
        if (v < 0.0) throw precondition_error("initial state must be non-negative");
        if (v != 0.0) any = true;
    }
    if (!any) throw precondition_error("initial state must be non-zero");
    if (t_grid.empty()) throw bad_grid_error("empty time grid");
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (!(t_grid[k] >= 0.0) || !std::isfinite(t_grid[k]))
            throw bad_grid_error("times must be finite and >= 0");
        if (k > 0 && !(t_grid[k] > t_grid[k - 1])) throw bad_grid_error("times must increase");
    }

    const Matrix f = sys.materialize(m).matrix();
    std::vector<std::pair<double, Vector>> out;
    out.reserve(t_grid.size());
    Vector x = x0;
    double t_prev = 0.0;
    for (double t : t_grid) {
        if (t > t_prev) x = matrix_exponential(f, t - t_prev) * x;
        t_prev = t;
        out.emplace_back(t, x);
    }
    return out;
}

// Asymptotic growth rate of log ||x(t)||_1, measured as the log growth over
// the trailing unit interval [t_final - 1, t_final]. The earlier steps act as
// burn-in, which cancels the initial-state projection constant that a plain
// (1/t) log ||x(t)|| estimate carries; the state is renormalized after every
// unit step so rates far above or below zero never overflow. For irreducible
// F(m) and any x0 >= 0 (not 0) the estimate converges to spab(F(m)); for
// reducible systems it depends on which blocks x0 loads.
inline double asymptotic_rate(const GrowthMixingSystem& sys, double m, const Vector& x0,
                              double t_final) {
    if (x0.size() != sys.size()) throw dimension_mismatch_error(sys.size(), x0.size());
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw precondition_error("t_final must be finite and positive");
    bool any = false;
    for (double v : x0) {
        if (v < 0.0) throw precondition_error("initial state must be non-negative");
        if (v != 0.0) any = true;
    }
    if (!any) throw precondition_error("initial state must be non-zero");

    const Matrix f = sys.materialize(m).matrix();
    Vector x = x0;
    const double n0 = one_norm(x);
    for (double& v : x) v /= n0;

    // Short horizon: no room for burn-in, report the plain average rate.
    if (t_final <= 1.0) {
        x = matrix_exponential(f, t_final) * x;
        return std::log(one_norm(x)) / t_final;
    }

    // Fractional part first, then unit steps; the final interval is exactly
    // [t_final - 1, t_final] and its log factor is the rate estimate.
    const double frac = t_final - std::floor(t_final);
    if (frac > 0.0) {
        x = matrix_exponential(f, frac) * x;
        const double c = one_norm(x);
        for (double& v : x) v /= c;
    }
    const Matrix step = matrix_exponential(f, 1.0);
    double rate = 0.0;
    for (double t = frac; t < t_final - 1e-12; t += 1.0) {
        x = step * x;
        const double c = one_norm(x);
        rate = std::log(c);
        for (double& v : x) v /= c;
    }
    return rate;
}

enum class Stability { Stable, Unstable, Marginal };

// Sign of spab(F(m)) with a dead band of +-tol around zero.
inline Stability classify_stability(const GrowthMixingSystem& sys, double m, double tol = 1e-9) {
    const double s = spab(sys.materialize(m));
    if (s < -tol) return Stability::Stable;
    if (s > tol) return Stability::Unstable;
    return Stability::Marginal;
}

// Whether the initial state loads the given block of the normal form. A
// reducible system grows at an isolated block's rate only if the initial
// state is non-zero somewhere on that block; quantity never flows into it.
inline bool activates_block(const FrobeniusForm& form, const Vector& x0, std::size_t block) {
    for (std::size_t i : form.blocks[block])
        if (x0[i] != 0.0) return true;
    return false;
}

} // namespace growmix
