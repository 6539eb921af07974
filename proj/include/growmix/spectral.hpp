#pragma once

// Perron root and vectors of ML-matrices, the spectral abscissa (also for
// reducible matrices, via the block normal form), and its derivative in the
// mixing rate.
//
// The solver shifts B = A + cI with c = 1 + max_i |A_ii|, which makes B
// non-negative with a strictly positive diagonal; for irreducible A that
// matrix is primitive, so plain power iteration converges geometrically with
// no cyclic stalls. Left and right vectors come from iterating B' and B from
// the deterministic start e/n, and the reported root is rho(B) - c.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "growmix/mlcore.hpp"
#include "growmix/structure.hpp"

namespace growmix {

inline constexpr double kDefaultPerronTol = 1e-12;
inline constexpr std::size_t kDefaultPerronMaxIter = 100000;

namespace detail {

// One-sided power iteration on a non-negative primitive matrix. The iterate is
// kept 1-normalized, the root estimate is the quotient e'Bx / e'x, and
// convergence means ||Bx - lambda*x||_inf <= threshold. When rescale_against
// is given the threshold tightens to threshold * <x, rescale_against>, so the
// residual still meets the contract after the iterate is rescaled by
// 1 / <x, rescale_against> (used for the left vector, whose normalization is
// u'v = 1 rather than e'u = 1).
struct PowerResult {
    Vector x;
    double lambda = 0.0;
    double residual = 0.0;
    double effective_threshold = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

inline PowerResult power_iterate(const Matrix& b, double threshold, std::size_t max_iter,
                                 bool transpose, const Vector* rescale_against = nullptr) {
    const std::size_t n = b.size();
    Vector x(n, 1.0 / static_cast<double>(n));
    PowerResult res;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        Vector y = transpose ? transpose_times(b, x) : b * x;
        const double lambda = sum(y); // e'y with e'x = 1
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::fabs(y[i] - lambda * x[i]));
        res.lambda = lambda;
        res.residual = resid;
        res.effective_threshold =
            rescale_against ? threshold * dot(x, *rescale_against) : threshold;
        res.iterations = it;
        if (resid <= res.effective_threshold) {
            res.converged = true;
            res.x = std::move(x);
            return res;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / lambda;
    }
    res.x = std::move(x);
    return res;
}

} // namespace detail

// Perron root r, right vector v (e'v = 1), left vector u (u'v = 1), and
// weights p = u.*v of an irreducible ML-matrix. Residuals of the returned
// pair satisfy ||Av - rv||_inf <= tol*||A||_inf and likewise on the left.
inline PerronPair perron(const MLMatrix& a, double tol = kDefaultPerronTol,
                         std::size_t max_iter = kDefaultPerronMaxIter) {
    if (!(tol > 0.0)) throw precondition_error("tol must be positive");
    const std::size_t n = a.size();
    if (n == 1) return PerronPair{a(0, 0), {1.0}, {1.0}, {1.0}};
    if (!is_irreducible(a)) throw not_irreducible_error();

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(a(i, i)));
    const double c = 1.0 + max_diag;
    const Matrix b = a.shifted(c).matrix();

    // The residual contract is stated against ||A||; the shifted norm can be
    // either larger or smaller, so converge against the tighter of the two.
    // The extra factor of 2 leaves room for re-centering the root estimate on
    // the two-sided quotient below.
    const double scale = std::min(a.matrix().inf_norm(), b.inf_norm());
    const double threshold = tol * scale / 2.0;

    auto right = detail::power_iterate(b, threshold, max_iter, false);
    if (!right.converged && right.residual > 2.0 * right.effective_threshold)
        throw no_convergence_error(right.iterations, right.residual);

    PerronPair pair;
    pair.v = std::move(right.x);
    // e'v = 1 first (the iterate is already 1-normalized up to one step).
    const double vs = sum(pair.v);
    for (double& x : pair.v) x /= vs;

    auto left = detail::power_iterate(b, threshold, max_iter, true, &pair.v);
    if (!left.converged && left.residual > 2.0 * left.effective_threshold)
        throw no_convergence_error(left.iterations, left.residual);
    pair.u = std::move(left.x);

    // Two-sided quotient u'Bv / u'v: its error is quadratic in the residuals,
    // which keeps downstream derivative and gap computations sharp.
    const double uv = dot(pair.u, pair.v);
    const double rho = dot(pair.u, b * pair.v) / uv;
    pair.r = rho - c;

    // Then u'v = 1.
    const double us = dot(pair.u, pair.v);
    for (double& x : pair.u) x /= us;

    pair.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) pair.p[i] = pair.u[i] * pair.v[i];
    return pair;
}

// Spectral abscissa for any ML-matrix. Irreducible matrices go through the
// Perron solver; reducible ones take the maximum over the diagonal blocks of
// the normal form (a 1x1 block contributes its scalar entry).
inline double spab(const MLMatrix& a, double tol = kDefaultPerronTol,
                   std::size_t max_iter = kDefaultPerronMaxIter) {
    if (a.size() == 1) return a(0, 0);
    if (is_irreducible(a)) return perron(a, tol, max_iter).r;
    const FrobeniusForm form = frobenius_normal_form(a);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& block : form.block_matrices) {
        const double r = block.size() == 1 ? block(0, 0) : perron(block, tol, max_iter).r;
        best = std::max(best, r);
    }
    return best;
}

// d/dm spab(D + mA) = u(m)' A v(m) with the Perron pair of F(m) = D + mA.
// Exact analytic derivative for irreducible F(m); reducible systems go
// through blockwise_spab instead.
inline double spab_derivative(const GrowthMixingSystem& sys, double m,
                              double tol = kDefaultPerronTol) {
    if (!(m > 0.0)) throw precondition_error("mixing rate must be positive");
    const PerronPair pair = perron(sys.materialize(m), tol);
    return dot(pair.u, sys.mixing().matrix() * pair.v);
}

// Objective of the sup-inf characterization of the Perron root: for weights p
// and positive x, returns sum_i p_i [Ax]_i / x_i. At p = u.*v the value is
// minimized exactly at x = v, where it equals spab(A); any other positive x
// gives a strictly larger value. Irreducibility of A is the caller's
// precondition.
inline double variational_value(const MLMatrix& a, const Vector& p, const Vector& x) {
    if (p.size() != a.size() || x.size() != a.size())
        throw dimension_mismatch_error(a.size(), p.size() == a.size() ? x.size() : p.size());
    double psum = 0.0;
    for (double w : p) {
        if (w < 0.0) throw bad_probability_vector_error("negative weight");
        psum += w;
    }
    if (std::fabs(psum - 1.0) > 1e-12) throw bad_probability_vector_error("weights do not sum to 1");
    for (double v : x)
        if (!(v > 0.0)) throw non_positive_vector_error("x");
    const Vector ax = a.matrix() * x;
    double value = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) value += p[i] * ax[i] / x[i];
    return value;
}

// Per-block view of spab(F(m)) for possibly reducible mixing patterns.
struct BlockwiseSpab {
    struct PerBlock {
        std::size_t block = 0; // position in form.blocks
        double spab_f = 0.0;   // spab(D_h + m A_h)
        double spab_a = 0.0;   // spab(A_h)
    };
    double spab = 0.0;
    std::vector<std::size_t> argmax_blocks; // every block within tie tolerance of the max
    std::vector<PerBlock> per_block;
    FrobeniusForm form;
};

inline constexpr double kArgmaxTieTol = 1e-9;

// spab(F(m)) = max_h spab(F_h(m)) over the diagonal blocks of the normal form
// of F(m). Reports all blocks attaining the max within a relative tie
// tolerance (near-ties mark points where the derivative may be one-sided) and
// each block's spab(A_h) for the sharper derivative bound.
inline BlockwiseSpab blockwise_spab(const GrowthMixingSystem& sys, double m,
                                    double tol = kDefaultPerronTol) {
    BlockwiseSpab out;
    const MLMatrix f = sys.materialize(m);
    out.form = frobenius_normal_form(f);
    out.spab = -std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < out.form.blocks.size(); ++h) {
        const auto& idx = out.form.blocks[h];
        const MLMatrix& fh = out.form.block_matrices[h];
        const MLMatrix ah = sys.mixing().restricted(idx);
        BlockwiseSpab::PerBlock pb;
        pb.block = h;
        pb.spab_f = fh.size() == 1 ? fh(0, 0) : perron(fh, tol).r;
        pb.spab_a = spab(ah, tol);
        out.per_block.push_back(pb);
        out.spab = std::max(out.spab, pb.spab_f);
    }
    const double tie = kArgmaxTieTol * (1.0 + std::fabs(out.spab));
    for (const auto& pb : out.per_block)
        if (pb.spab_f >= out.spab - tie) out.argmax_blocks.push_back(pb.block);
    return out;
}

// Derivative of spab(F(m)) that also covers reducible mixing patterns: the
// root being differentiated is the argmax block's, so the value is one-sided
// wherever argmax blocks tie (flagged via near_tie).
struct DerivativeInfo {
    double value = 0.0;
    bool reducible = false;
    bool near_tie = false;
    std::vector<std::size_t> argmax_blocks;
};

inline DerivativeInfo spab_derivative_blockwise(const GrowthMixingSystem& sys, double m,
                                                double tol = kDefaultPerronTol) {
    if (!(m > 0.0)) throw precondition_error("mixing rate must be positive");
    DerivativeInfo info;
    if (is_irreducible(sys.mixing())) {
        info.value = spab_derivative(sys, m, tol);
        info.argmax_blocks = {0};
        return info;
    }
    const BlockwiseSpab bw = blockwise_spab(sys, m, tol);
    info.reducible = true;
    info.argmax_blocks = bw.argmax_blocks;
    info.near_tie = bw.argmax_blocks.size() > 1;
    const auto& block = bw.form.blocks[bw.argmax_blocks.front()];
    if (block.size() == 1) {
        info.value = sys.mixing()(block[0], block[0]); // d/dm (d_i + m a_ii)
    } else {
        info.value = spab_derivative(sys.restricted(block), m, tol);
    }
    return info;
}

} // namespace growmix
