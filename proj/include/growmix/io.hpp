#pragma once

// JSON and CSV encodings of the domain types. JSON floats use the library's
// shortest round-trip encoding and CSV floats are printed with 17 significant
// digits, so files parse back bit for bit.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "growmix/mlcore.hpp"
#include "growmix/structure.hpp"
#include "growmix/sweep.hpp"
#include "growmix/theorems.hpp"

namespace growmix {

using json = nlohmann::json;

inline std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"n", m.size()}, {"entries", std::move(rows)}};
}

inline Matrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
        throw error("matrix JSON needs fields 'n' and 'entries'");
    const std::size_t n = j.at("n").get<std::size_t>();
    const auto& rows = j.at("entries");
    if (n == 0 || !rows.is_array() || rows.size() != n) throw error("matrix JSON: bad row count");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != n) throw error("matrix JSON: bad row length");
        for (std::size_t jx = 0; jx < n; ++jx) m(i, jx) = row[jx].get<double>();
    }
    if (!m.all_finite()) throw non_finite_error("matrix JSON");
    return m;
}

inline json ml_to_json(const MLMatrix& a) { return matrix_to_json(a.matrix()); }
inline MLMatrix ml_from_json(const json& j) { return validate_ml(matrix_from_json(j)); }

inline json growth_to_json(const DiagonalGrowth& d) {
    return json{{"n", d.size()}, {"d", d.values()}};
}

inline DiagonalGrowth growth_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("d"))
        throw error("growth JSON needs fields 'n' and 'd'");
    const std::size_t n = j.at("n").get<std::size_t>();
    Vector d = j.at("d").get<Vector>();
    if (d.size() != n) throw error("growth JSON: length mismatch");
    return DiagonalGrowth(std::move(d));
}

inline json system_to_json(const GrowthMixingSystem& sys) {
    return json{{"D", growth_to_json(sys.growth())}, {"A", ml_to_json(sys.mixing())}};
}

inline GrowthMixingSystem system_from_json(const json& j) {
    if (!j.is_object() || !j.contains("D") || !j.contains("A"))
        throw error("system JSON needs fields 'D' and 'A'");
    return GrowthMixingSystem(growth_from_json(j.at("D")), ml_from_json(j.at("A")));
}

inline json frobenius_to_json(const FrobeniusForm& form) {
    return json{{"permutation", form.permutation},
                {"blocks", form.blocks},
                {"isolated", form.isolated}};
}

inline json verdict_to_json(const std::string& check, const Verdict& v, std::uint64_t seed) {
    return json{{"check", check},          {"holds", v.holds},
                {"lhs", v.lhs},            {"rhs", v.rhs},
                {"gap", v.gap},            {"equality_expected", v.equality_expected},
                {"seed", seed}};
}

// Header t,x1,...,xn; one row per grid time.
inline void write_trajectory_csv(std::ostream& os,
                                 const std::vector<std::pair<double, Vector>>& traj) {
    if (traj.empty()) return;
    os << "t";
    for (std::size_t i = 0; i < traj.front().second.size(); ++i) os << ",x" << (i + 1);
    os << "\n";
    for (const auto& [t, x] : traj) {
        os << format17(t);
        for (double v : x) os << "," << format17(v);
        os << "\n";
    }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "m,spab,derivative,d_right,bound_spabA,min_D,max_D,argmax_block,near_tie_flag\n";
    for (const auto& r : rows) {
        os << format17(r.m) << "," << format17(r.spab) << ",";
        if (r.derivative) os << format17(*r.derivative);
        os << ",";
        if (r.d_right) os << format17(*r.d_right);
        os << "," << format17(r.bound_spab_a) << "," << format17(r.min_d) << ","
           << format17(r.max_d) << "," << r.argmax_block << "," << (r.near_tie ? 1 : 0) << "\n";
    }
}

} // namespace growmix
