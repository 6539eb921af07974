// Command-line front end: build growth-mixing systems, sweep the mixing rate,
// and run the inequality verifier batch over random instances.
//
// Exit codes: 0 on success (verify: all checks hold), 1 when verify finds a
// violation, 2 on usage or I/O errors.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "growmix/growmix.hpp"

namespace {

using growmix::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw growmix::error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw growmix::error("in '" + path + "': " + e.what());
    }
}

growmix::Vector parse_csv_list(const std::string& text) {
    growmix::Vector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (...) {
            throw growmix::error("bad number '" + item + "'");
        }
        if (used != item.size()) throw growmix::error("bad number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw growmix::error("empty list");
    return out;
}

void write_text(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw growmix::error("cannot write '" + out_path + "'");
    f << content;
}

// ---------------------------------------------------------------- sweep ----

int do_sweep(const std::string& system_path, const std::string& grid_spec,
             const std::string& out_path) {
    const growmix::GrowthMixingSystem sys = growmix::system_from_json(read_json_file(system_path));
    const auto rows = growmix::run_sweep(sys, growmix::parse_grid(grid_spec));
    std::ostringstream os;
    growmix::write_sweep_csv(os, rows);
    write_text(out_path, os.str());
    return 0;
}

// ---------------------------------------------------------------- model ----

struct ModelOptions {
    std::string kind;
    std::string scenario_path;
    std::string out_path = "-";
    std::size_t n = 0;
    double h = 1.0;
    std::string boundary = "dirichlet";
    std::string g_csv, d_csv, alpha_csv;
    std::string p_path, system_path;
    bool row_stochastic = false;
    bool growth_then_move = false;
};

growmix::Boundary parse_boundary(const std::string& name) {
    if (name == "dirichlet") return growmix::Boundary::Dirichlet;
    if (name == "neumann") return growmix::Boundary::Neumann;
    throw growmix::error("unknown boundary '" + name + "' (dirichlet|neumann)");
}

growmix::GrowthMixingSystem build_model(const ModelOptions& o) {
    using namespace growmix;
    if (o.kind == "diffusion1d") {
        Vector g;
        if (!o.g_csv.empty()) {
            g = parse_csv_list(o.g_csv);
            if (o.n != 0 && o.n != g.size()) throw error("--n disagrees with the length of --g");
        } else {
            if (o.n == 0) throw error("diffusion1d needs --n or --g");
            g.assign(o.n, 0.0);
        }
        return discretize_diffusion_1d(g, 0.0, o.h, parse_boundary(o.boundary));
    }
    if (o.kind == "markov") {
        if (o.p_path.empty()) throw error("markov needs --p FILE");
        Matrix p = matrix_from_json(read_json_file(o.p_path));
        if (o.row_stochastic) p = p.transposed();
        Vector d = o.d_csv.empty() ? Vector(p.size(), 0.0) : parse_csv_list(o.d_csv);
        DiagonalGrowth growth(d);
        const MLMatrix a =
            o.growth_then_move ? karlin_discrete_analog(p, growth) : continuous_mixing(p);
        return GrowthMixingSystem(std::move(growth), a);
    }
    if (o.kind == "limit") {
        if (o.alpha_csv.empty() || o.d_csv.empty()) throw error("limit needs --alpha and --d");
        const Vector alpha = parse_csv_list(o.alpha_csv);
        return GrowthMixingSystem(DiagonalGrowth(parse_csv_list(o.d_csv)), limit_family(alpha));
    }
    if (o.kind == "custom") {
        if (o.system_path.empty()) throw error("custom needs --system FILE");
        return system_from_json(read_json_file(o.system_path));
    }
    throw growmix::error("unknown model kind '" + o.kind +
                         "' (diffusion1d|markov|limit|custom)");
}

growmix::GrowthMixingSystem build_model_from_scenario(const json& j) {
    using namespace growmix;
    if (!j.is_object() || !j.contains("model")) throw error("scenario needs a 'model' field");
    const std::string kind = j.at("model").get<std::string>();
    if (kind == "diffusion1d") {
        const Vector g = j.at("g").get<Vector>();
        const double h = j.value("h", 1.0);
        return discretize_diffusion_1d(g, 0.0, h,
                                       parse_boundary(j.value("boundary", std::string("dirichlet"))));
    }
    if (kind == "markov") {
        Matrix p = matrix_from_json(j.at("P"));
        if (j.value("row_stochastic", false)) p = p.transposed();
        Vector d = j.contains("d") ? j.at("d").get<Vector>() : Vector(p.size(), 0.0);
        DiagonalGrowth growth(d);
        const MLMatrix a = j.value("growth_then_move", false) ? karlin_discrete_analog(p, growth)
                                                              : continuous_mixing(p);
        return GrowthMixingSystem(std::move(growth), a);
    }
    if (kind == "limit") {
        return GrowthMixingSystem(DiagonalGrowth(j.at("d").get<Vector>()),
                                  limit_family(j.at("alpha").get<Vector>()));
    }
    if (kind == "custom") return system_from_json(j.at("system"));
    throw error("unknown model kind '" + kind + "'");
}

int do_model(const ModelOptions& o) {
    const growmix::GrowthMixingSystem sys = o.scenario_path.empty()
                                                ? build_model(o)
                                                : build_model_from_scenario(read_json_file(o.scenario_path));
    write_text(o.out_path, growmix::system_to_json(sys).dump(2) + "\n");
    return 0;
}

// --------------------------------------------------------------- verify ----

struct VerifyOptions {
    std::string style = "all";
    std::string n_range = "2:8";
    std::size_t count = 200;
    std::uint64_t seed = 42;
    double tol = 1e-9;
    unsigned threads = 1;
    std::string out_path = "-";
};

std::vector<growmix::RandomStyle> parse_styles(const std::string& name) {
    using growmix::RandomStyle;
    static const std::map<std::string, RandomStyle> table = {
        {"conservative", RandomStyle::ConservativeStochastic},
        {"conservativestochastic", RandomStyle::ConservativeStochastic},
        {"lossy", RandomStyle::Lossy},
        {"general", RandomStyle::GeneralML},
        {"generalml", RandomStyle::GeneralML},
        {"reducible", RandomStyle::Reducible},
    };
    if (name == "all")
        return {RandomStyle::ConservativeStochastic, RandomStyle::Lossy, RandomStyle::GeneralML};
    std::string key;
    for (char c : name) key.push_back(static_cast<char>(std::tolower(c)));
    const auto it = table.find(key);
    if (it == table.end()) throw growmix::error("unknown style '" + name + "'");
    return {it->second};
}

struct VerifyJob {
    std::size_t index = 0;
    growmix::RandomStyle style{};
    std::size_t n = 0;
    std::uint64_t sys_seed = 0;
    std::uint64_t aux_seed = 0;
};

struct CheckRecord {
    std::string name;
    growmix::Verdict verdict;
};

std::vector<CheckRecord> run_instance_checks(const VerifyJob& job, double tol) {
    using namespace growmix;
    std::vector<CheckRecord> rec;
    const GrowthMixingSystem sys = random_system(job.n, job.style, job.sys_seed);
    Rng rng(job.aux_seed);
    const double m = rng.uniform(0.5, 3.0);
    const double m2 = m + rng.uniform(0.5, 2.0);
    const double alpha = rng.uniform(0.25, 0.75);
    const double beta = rng.uniform(1.5, 10.0);

    if (job.style == RandomStyle::Reducible) {
        const MainDerivativeVerdict main = check_main_derivative_bound(sys, m, tol);
        rec.push_back({"main_derivative_bound/block", main.vs_block});
        rec.push_back({"main_derivative_bound/full", main.vs_full});
        rec.push_back({"convexity_in_m", check_convexity_in_m(sys, m, m2, alpha, tol)});
        return rec;
    }

    rec.push_back({"basic_inequality", check_basic_inequality(sys.mixing(), sys.growth(), tol)});
    rec.push_back({"corollary_basic", check_corollary_basic(sys.mixing(), sys.growth(), tol)});
    const ChainVerdict chain = check_convexity_derived(sys.mixing(), sys.growth(), beta, tol);
    rec.push_back({"convexity_derived/1", chain.first});
    rec.push_back({"convexity_derived/2", chain.second});
    rec.push_back({"flip", check_flip(sys.mixing(), tol)});
    {
        std::vector<MLMatrix> family;
        for (int k = 0; k < 3; ++k) family.push_back(sys.mixing().scaled(rng.uniform(0.2, 3.0)));
        rec.push_back({"sums_right", check_sums(family, sys.growth(), Side::Right, tol)});
        rec.push_back({"sums_left", check_sums(family, sys.growth(), Side::Left, tol)});
    }
    rec.push_back({"main_derivative_bound", check_main_derivative_bound(sys, m, tol).vs_block});
    rec.push_back({"convexity_in_m", check_convexity_in_m(sys, m, m2, alpha, tol)});
    {
        Vector het_grid;
        for (double g = 0.05; het_grid.size() < 9; g *= 2.0) het_grid.push_back(g);
        rec.push_back({"heterogeneity", check_heterogeneity(sys, het_grid).verdict});
    }

    const Vector grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    if (job.style == RandomStyle::ConservativeStochastic) {
        rec.push_back({"monotone_decrease", check_monotone_decrease(sys, grid, tol)});
        rec.push_back({"bounds", check_bounds(sys, m, tol)});
        Vector a(job.n);
        double s = 0.0;
        for (double& x : a) {
            x = rng.exponential();
            s += x;
        }
        for (double& x : a) x /= s;
        const GrowthMixingSystem limit_sys(sys.growth(), limit_family(a));
        const double lambda = dot(a, sys.growth().values());
        rec.push_back({"limit", check_limit(limit_sys, lambda, {1.0, 10.0, 100.0, 1000.0, 10000.0})});
    }
    if (job.style == RandomStyle::Lossy)
        rec.push_back({"lossy_strict", check_lossy_strict(sys, grid, tol)});
    if (job.style != RandomStyle::GeneralML && spab(sys.materialize(m)) > 0.0) {
        rec.push_back(
            {"stability_monotone",
             check_stability_monotone(sys, m, {0.0, 0.25 * m, 0.5 * m, 0.75 * m, m}, tol).verdict});
    }
    return rec;
}

int do_verify(const VerifyOptions& o) {
    using namespace growmix;
    const auto styles = parse_styles(o.style);
    std::size_t n_lo = 0, n_hi = 0;
    {
        const auto colon = o.n_range.find(':');
        if (colon == std::string::npos) throw error("n-range must look like lo:hi");
        try {
            n_lo = std::stoul(o.n_range.substr(0, colon));
            n_hi = std::stoul(o.n_range.substr(colon + 1));
        } catch (...) {
            throw error("n-range must look like lo:hi");
        }
        if (n_lo < 2 || n_hi < n_lo) throw error("n-range must satisfy 2 <= lo <= hi");
    }

    // Instance parameters are drawn up front from one stream so the output is
    // identical no matter how the evaluation is scheduled.
    Rng master(o.seed);
    std::vector<VerifyJob> jobs;
    jobs.reserve(o.count * styles.size());
    for (std::size_t i = 0; i < o.count; ++i)
        for (const RandomStyle style : styles) {
            VerifyJob job;
            job.index = jobs.size();
            job.style = style;
            job.n = n_lo + master.index(n_hi - n_lo + 1);
            job.sys_seed = master.raw();
            job.aux_seed = master.raw();
            jobs.push_back(job);
        }

    std::vector<std::vector<CheckRecord>> results(jobs.size());
    const unsigned workers = std::max(1u, o.threads);
    if (workers == 1) {
        for (const auto& job : jobs) results[job.index] = run_instance_checks(job, o.tol);
    } else {
        std::vector<std::future<void>> futures;
        for (unsigned w = 0; w < workers; ++w)
            futures.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t k = w; k < jobs.size(); k += workers)
                    results[k] = run_instance_checks(jobs[k], o.tol);
            }));
        for (auto& f : futures) f.get();
    }

    std::ostringstream os;
    struct Tally {
        std::size_t count = 0;
        double min_gap = std::numeric_limits<double>::infinity();
        bool all_hold = true;
    };
    std::map<std::string, Tally> tally;
    bool all_hold = true;
    for (std::size_t k = 0; k < jobs.size(); ++k)
        for (const auto& r : results[k]) {
            os << verdict_to_json(r.name, r.verdict, jobs[k].sys_seed).dump() << "\n";
            auto& t = tally[r.name];
            ++t.count;
            t.min_gap = std::min(t.min_gap, r.verdict.gap);
            t.all_hold = t.all_hold && r.verdict.holds;
            all_hold = all_hold && r.verdict.holds;
        }
    json summary = json::object();
    for (const auto& [name, t] : tally)
        summary[name] = {{"count", t.count}, {"min_gap", t.min_gap}, {"all_hold", t.all_hold}};
    os << json{{"summary", summary}}.dump() << "\n";
    write_text(o.out_path, os.str());
    return all_hold ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral analysis of growth-mixing systems dx/dt = (D + mA) x"};
    app.require_subcommand(1);
    int rc = 0;

    auto* sweep = app.add_subcommand("sweep", "tabulate spab(F(m)) and its derivative over a grid");
    std::string sweep_system, sweep_grid, sweep_out = "-";
    sweep->add_option("--system", sweep_system, "system JSON file")->required();
    sweep->add_option("--grid", sweep_grid, "start:step:stop or geom:start:factor:count")->required();
    sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");
    sweep->callback([&] { rc = do_sweep(sweep_system, sweep_grid, sweep_out); });

    ModelOptions mo;
    auto* model = app.add_subcommand("model", "emit a system JSON for a standard model");
    model->add_option("--kind", mo.kind, "diffusion1d|markov|limit|custom");
    model->add_option("--scenario", mo.scenario_path, "scenario JSON file ({\"model\": ..., ...})");
    model->add_option("--out", mo.out_path, "output path (default stdout)");
    model->add_option("--n", mo.n, "diffusion1d: number of grid points");
    model->add_option("--spacing", mo.h, "diffusion1d: grid spacing h");
    model->add_option("--boundary", mo.boundary, "diffusion1d: dirichlet|neumann");
    model->add_option("--g", mo.g_csv, "diffusion1d: growth rates, comma separated");
    model->add_option("--p", mo.p_path, "markov: column-stochastic matrix JSON file");
    model->add_flag("--row-stochastic", mo.row_stochastic, "markov: input P is row-stochastic");
    model->add_flag("--growth-then-move", mo.growth_then_move,
                    "markov: use the growth-then-movement analog (P - I)D");
    model->add_option("--d", mo.d_csv, "growth rates, comma separated");
    model->add_option("--alpha", mo.alpha_csv, "limit: probability weights, comma separated");
    model->add_option("--system", mo.system_path, "custom: system JSON file to validate and re-emit");
    model->callback([&] {
        if (mo.kind.empty() && mo.scenario_path.empty())
            throw growmix::error("model needs --kind or --scenario");
        rc = do_model(mo);
    });

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "run every inequality check on random instances");
    verify->add_option("--style", vo.style, "all|conservative|lossy|general|reducible");
    verify->add_option("--n-range", vo.n_range, "dimension range lo:hi (default 2:8)");
    verify->add_option("--count", vo.count, "instances per style (default 200)");
    verify->add_option("--seed", vo.seed, "random seed (default 42)");
    verify->add_option("--tol", vo.tol, "verdict tolerance (default 1e-9)");
    verify->add_option("--threads", vo.threads, "worker threads (default 1)");
    verify->add_option("--out", vo.out_path, "output path (default stdout)");
    verify->callback([&] { rc = do_verify(vo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const growmix::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
