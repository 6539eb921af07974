#pragma once

// Constructors for the standard growth-mixing setups (Markov-chain style
// mixing, discretized 1-D diffusion) and a deterministic random instance
// generator for property tests.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "growmix/mlcore.hpp"
#include "growmix/structure.hpp"

namespace growmix {

// Deterministic uniform/exponential draws on top of mt19937_64. The raw
// 53-bit mapping avoids std::uniform_real_distribution, whose output is
// implementation-defined; instances must be reproducible bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
    double exponential() { return -std::log1p(-uniform()); }
    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

namespace detail {

inline void require_column_stochastic(const Matrix& p) {
    const std::size_t n = p.size();
    if (n == 0) throw not_stochastic_error("empty matrix");
    if (!p.all_finite()) throw non_finite_error("stochastic matrix");
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (p(i, j) < 0.0) throw not_stochastic_error("negative entry");
            s += p(i, j);
        }
        if (std::fabs(s - 1.0) > 1e-12)
            throw not_stochastic_error("column " + std::to_string(j) + " sums to " + std::to_string(s));
    }
}

// Sets each diagonal entry to the negated off-column sum, accumulated in the
// same order as conservation_class uses, so the column sums cancel exactly.
inline MLMatrix finish_conservative(Matrix a) {
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) off += a(i, j);
        a(j, j) = -off;
    }
    return validate_ml(std::move(a));
}

} // namespace detail

// A = (P - I) D for a column-stochastic P (e'P = e') and non-negative growth
// rates: a growth phase followed by a movement phase, folded into one
// generator. Column sums vanish, so the result is conservative.
inline MLMatrix karlin_discrete_analog(const Matrix& p, const DiagonalGrowth& d) {
    detail::require_column_stochastic(p);
    if (p.size() != d.size()) throw dimension_mismatch_error(p.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] < 0.0)
            throw precondition_error("karlin_discrete_analog requires non-negative growth rates");
    const std::size_t n = p.size();
    Matrix a(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) a(i, j) = p(i, j) * d[j];
    return detail::finish_conservative(std::move(a));
}

// A = P - I: the generator of a continuous-time Markov chain with jump
// distribution P. Conservative with spab(A) = 0.
inline MLMatrix continuous_mixing(const Matrix& p) {
    detail::require_column_stochastic(p);
    const std::size_t n = p.size();
    Matrix a(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) a(i, j) = p(i, j);
    return detail::finish_conservative(std::move(a));
}

enum class Boundary { Dirichlet, Neumann };

// Centered-difference discretization of dx/dt = g(s) x + m x_ss on n grid
// points with spacing h: D = diag(g) and A = (1/h^2) tridiag(1, -2, 1).
// Neumann (reflecting) boundaries change the corner diagonal entries to
// -1/h^2, which makes A conservative; Dirichlet (absorbing) keeps -2/h^2 and
// leaks mass at the ends. The mixing rate m is validated here but enters the
// dynamics only through materialize(m).
inline GrowthMixingSystem discretize_diffusion_1d(const Vector& g, double m, double h,
                                                  Boundary boundary) {
    if (g.size() < 2) throw bad_grid_error("need at least 2 grid points");
    if (!(h > 0.0) || !std::isfinite(h)) throw bad_grid_error("grid spacing must be positive");
    if (!(m >= 0.0)) throw precondition_error("mixing rate must be >= 0");
    const std::size_t n = g.size();
    const double q = 1.0 / (h * h);
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = -2.0 * q;
        if (i + 1 < n) {
            a(i, i + 1) = q;
            a(i + 1, i) = q;
        }
    }
    if (boundary == Boundary::Neumann) {
        a(0, 0) = -q;
        a(n - 1, n - 1) = -q;
    }
    return GrowthMixingSystem(DiagonalGrowth(g), validate_ml(std::move(a)));
}

// Column-stochastic matrix with Dirichlet-uniform columns blended with a ring
// shift of mass 0.05; the ring guarantees irreducibility.
inline Matrix random_stochastic(std::size_t n, Rng& rng) {
    constexpr double kRingMass = 0.05;
    Matrix p(n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector w(n);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = rng.exponential();
            s += w[i];
        }
        for (std::size_t i = 0; i < n; ++i) p(i, j) = (1.0 - kRingMass) * w[i] / s;
        p((j + 1) % n, j) += kRingMass;
    }
    return p;
}

enum class RandomStyle { ConservativeStochastic, Lossy, GeneralML, Reducible };

namespace detail {

inline Matrix random_general_ml_block(std::size_t n, Rng& rng) {
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = (i == j) ? rng.uniform(-3.0, 3.0) : rng.uniform(0.05, 3.0);
    return a;
}

} // namespace detail

// Deterministic instance generator. Every draw comes from one seeded stream,
// so a repeated seed reproduces the system bit for bit.
inline GrowthMixingSystem random_system(std::size_t n, RandomStyle style, std::uint64_t seed) {
    if (n < 2) throw precondition_error("random_system needs n >= 2");
    Rng rng(seed);

    Matrix a(n);
    switch (style) {
        case RandomStyle::ConservativeStochastic: {
            a = continuous_mixing(random_stochastic(n, rng)).matrix();
            break;
        }
        case RandomStyle::Lossy: {
            a = continuous_mixing(random_stochastic(n, rng)).matrix();
            // Leak from a random non-empty set of columns; untouched columns
            // keep their exact zero sum.
            std::vector<std::size_t> leaky;
            for (std::size_t j = 0; j < n; ++j)
                if (rng.uniform() < 0.5) leaky.push_back(j);
            if (leaky.empty()) leaky.push_back(rng.index(n));
            for (std::size_t j : leaky) a(j, j) -= rng.uniform(0.1, 0.6);
            break;
        }
        case RandomStyle::GeneralML: {
            a = detail::random_general_ml_block(n, rng);
            break;
        }
        case RandomStyle::Reducible: {
            const std::size_t parts = (n >= 4 && rng.uniform() < 0.5) ? 3 : 2;
            std::vector<std::size_t> sizes(parts, 1);
            for (std::size_t extra = n - parts; extra > 0; --extra) ++sizes[rng.index(parts)];
            std::vector<std::size_t> starts(parts, 0);
            for (std::size_t b = 1; b < parts; ++b) starts[b] = starts[b - 1] + sizes[b - 1];
            for (std::size_t b = 0; b < parts; ++b) {
                const Matrix blk = detail::random_general_ml_block(sizes[b], rng);
                for (std::size_t i = 0; i < sizes[b]; ++i)
                    for (std::size_t j = 0; j < sizes[b]; ++j)
                        a(starts[b] + i, starts[b] + j) = blk(i, j);
            }
            // Downward coupling only: rows in later blocks, columns in earlier
            // ones, so the natural order is already block lower triangular.
            for (std::size_t b1 = 0; b1 < parts; ++b1)
                for (std::size_t b2 = b1 + 1; b2 < parts; ++b2)
                    if (rng.uniform() < 0.7) {
                        const std::size_t r = starts[b2] + rng.index(sizes[b2]);
                        const std::size_t c = starts[b1] + rng.index(sizes[b1]);
                        a(r, c) = rng.uniform(0.1, 1.0);
                    }
            break;
        }
    }

    Vector d(n);
    do {
        for (std::size_t i = 0; i < n; ++i) d[i] = rng.uniform(-3.0, 3.0);
    } while (DiagonalGrowth(d).is_uniform(1e-12));
    return GrowthMixingSystem(DiagonalGrowth(std::move(d)), validate_ml(std::move(a)));
}

} // namespace growmix
