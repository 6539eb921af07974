#pragma once

// Mixing-rate sweeps: grid specifications, and the per-m table of spectral
// abscissa, derivative, and bound data that the CLI writes as CSV.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "growmix/spectral.hpp"

namespace growmix {

// "start:step:stop" for arithmetic grids, "geom:start:factor:count" for
// geometric ones.
inline Vector parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t colon = spec.find(':', pos);
        parts.push_back(spec.substr(pos, colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    auto num = [](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) throw bad_grid_error("bad number '" + s + "'");
            return v;
        } catch (const bad_grid_error&) {
            throw;
        } catch (...) {
            throw bad_grid_error("bad number '" + s + "'");
        }
    };

    Vector grid;
    if (parts.size() == 4 && parts[0] == "geom") {
        const double start = num(parts[1]);
        const double factor = num(parts[2]);
        const double count = num(parts[3]);
        if (!(start > 0.0)) throw bad_grid_error("geometric grid needs start > 0");
        if (!(factor > 1.0)) throw bad_grid_error("geometric grid needs factor > 1");
        if (!(count >= 1.0) || count != std::floor(count) || count > 1e6)
            throw bad_grid_error("bad geometric count");
        double m = start;
        for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k, m *= factor)
            grid.push_back(m);
    } else if (parts.size() == 3) {
        const double start = num(parts[0]);
        const double step = num(parts[1]);
        const double stop = num(parts[2]);
        if (!(start >= 0.0)) throw bad_grid_error("grid start must be >= 0");
        if (!(step > 0.0)) throw bad_grid_error("grid step must be > 0");
        if (!(stop >= start)) throw bad_grid_error("grid stop must be >= start");
        const std::size_t count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 1e6) throw bad_grid_error("grid too large");
        for (std::size_t k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
    } else {
        throw bad_grid_error("expected start:step:stop or geom:start:factor:count");
    }
    return grid;
}

struct SweepRow {
    double m = 0.0;
    double spab = 0.0;
    // Empty at m = 0 whenever F(0) = D is reducible (every n >= 2); the
    // one-sided limit is then estimated into d_right instead.
    std::optional<double> derivative;
    std::optional<double> d_right;
    double bound_spab_a = 0.0; // spab(A), the mixing-only bound on the derivative
    double min_d = 0.0;
    double max_d = 0.0;
    std::size_t argmax_block = 0;
    bool near_tie = false;
};

// One-sided derivative of spab(D + mA) at m = 0: the top diagonal entries of
// D split at first order into the eigenvalues of A restricted to the argmax
// set, so the right limit is spab of that restriction (ties use exact float
// equality with max_i d_i).
inline double right_derivative_at_zero(const GrowthMixingSystem& sys) {
    const double top = sys.growth().max();
    std::vector<std::size_t> argmax;
    for (std::size_t i = 0; i < sys.size(); ++i)
        if (sys.growth()[i] == top) argmax.push_back(i);
    return spab(sys.mixing().restricted(argmax));
}

inline std::vector<SweepRow> run_sweep(const GrowthMixingSystem& sys, const Vector& m_grid) {
    if (m_grid.empty()) throw bad_grid_error("empty grid");
    for (std::size_t k = 0; k < m_grid.size(); ++k) {
        if (!(m_grid[k] >= 0.0) || !std::isfinite(m_grid[k]))
            throw bad_grid_error("mixing rates must be finite and >= 0");
        if (k > 0 && !(m_grid[k] > m_grid[k - 1])) throw bad_grid_error("grid must increase");
    }
    const double bound = spab(sys.mixing());
    std::vector<SweepRow> rows;
    rows.reserve(m_grid.size());
    for (double m : m_grid) {
        SweepRow row;
        row.m = m;
        row.bound_spab_a = bound;
        row.min_d = sys.growth().min();
        row.max_d = sys.growth().max();
        const BlockwiseSpab bw = blockwise_spab(sys, m);
        row.spab = bw.spab;
        row.argmax_block = bw.argmax_blocks.front();
        row.near_tie = bw.argmax_blocks.size() > 1;
        if (m > 0.0) {
            const DerivativeInfo info = spab_derivative_blockwise(sys, m);
            row.derivative = info.value;
            row.near_tie = row.near_tie || info.near_tie;
        } else if (sys.size() == 1) {
            row.derivative = sys.mixing()(0, 0);
        } else {
            row.d_right = right_derivative_at_zero(sys);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace growmix
