// Batch front-end: one experiment config in, CSV tables + summary out.
//
//   ruinlab run <config.json> [--seed S] [--workers N] [--out DIR]
//
// Exit codes: 0 every check passed (or nothing to check), 1 a check failed
// or a computation could not finish, 2 the config or its parameters were
// invalid.  results.csv and the plot/trace files are byte-stable across
// reruns and worker counts; the timestamp lives in summary.txt only.

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "csvfmt.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/estimate.hpp"
#include "ruinlab/farm.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/sim.hpp"
#include "ruinlab/verify.hpp"

namespace fs = std::filesystem;
namespace rl = ruinlab;
using nlohmann::json;

namespace {

std::string fmt(double x) {
    std::string s;
    rl::detail::append_number(s, x);
    return s;
}

std::string fmt(std::uint64_t v) {
    std::string s;
    rl::detail::append_number(s, v);
    return s;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

rl::ClaimDistribution parse_claim(const json& j) {
    const std::string law = j.at("law").get<std::string>();
    if (law == "uniform") return rl::ClaimDistribution::uniform(j.at("hi").get<double>());
    if (law == "exponential") return rl::ClaimDistribution::exponential(j.at("mean").get<double>());
    if (law == "truncated_exponential")
        return rl::ClaimDistribution::truncated_exponential(j.at("mean").get<double>(),
                                                            j.at("cap").get<double>());
    if (law == "deterministic")
        return rl::ClaimDistribution::deterministic(j.at("size").get<double>());
    throw rl::InvalidConfig("unknown claim law '" + law +
                            "' (expected uniform, exponential, truncated_exponential, "
                            "or deterministic)");
}

rl::ModelParams parse_model(const json& j) {
    return {j.at("a").get<double>(), j.at("sigma").get<double>(), j.at("c").get<double>(),
            j.at("lambda").get<double>(), parse_claim(j.at("claim"))};
}

rl::SimConfig parse_sim(const json& root, double lambda) {
    rl::SimConfig cfg = rl::SimConfig::defaults_for(lambda);
    if (!root.contains("sim")) return cfg;
    const json& s = root.at("sim");
    if (s.contains("dt")) cfg.dt = s.at("dt").get<double>();
    if (s.contains("horizon")) cfg.horizon = s.at("horizon").get<double>();
    if (s.contains("t0")) cfg.t0 = s.at("t0").get<double>();
    if (s.contains("scheme")) {
        const std::string sch = s.at("scheme").get<std::string>();
        if (sch == "exact")
            cfg.scheme = rl::Scheme::ExactY;
        else if (sch == "euler")
            cfg.scheme = rl::Scheme::Euler;
        else
            throw rl::InvalidConfig("unknown scheme '" + sch + "' (expected exact or euler)");
    }
    return cfg;
}

// results.csv schema for the check-style kinds; estimate columns are left
// empty on rows that carry no estimate (the restart check).
std::string report_csv(const std::vector<rl::BoundReport>& reports, std::uint64_t n_paths,
                       std::uint64_t seed) {
    std::string s = "name,analytic_bound,statistic,slack,pass,p_hat,ci_lo,ci_hi,n_paths,seed\n";
    for (const auto& r : reports) {
        s += r.name;
        s += ',';
        s += fmt(r.analytic_bound);
        s += ',';
        s += fmt(r.statistic);
        s += ',';
        s += fmt(r.slack);
        s += ',';
        s += r.pass ? '1' : '0';
        s += ',';
        if (r.ruin_estimate) {
            const auto& e = *r.ruin_estimate;
            s += fmt(e.p_hat) + ',' + fmt(e.ci_lo) + ',' + fmt(e.ci_hi) + ',' +
                 fmt(e.n_paths) + ',' + fmt(e.seed);
        } else if (r.exit_estimate) {
            const auto& e = *r.exit_estimate;
            s += fmt(e.p_hi) + ',' + fmt(e.hi_ci.lo) + ',' + fmt(e.hi_ci.hi) + ',' +
                 fmt(e.n_paths) + ',' + fmt(e.seed);
        } else {
            s += ",,," + fmt(n_paths) + ',' + fmt(seed);
        }
        s += '\n';
    }
    return s;
}

// Two whitespace-separated tables an external plotter can drop in:
// estimates with CI columns and the analytic bound, both keyed by initial
// capital.  Reports without an estimate (exact-coupling or KS rows) carry no
// plottable point and are skipped.
void emit_plot_data(const std::vector<rl::BoundReport>& reports, const fs::path& dir) {
    if (reports.empty())
        throw std::invalid_argument("emit_plot_data: report list must be nonempty");
    std::string est = "# u p_hat ci_lo ci_hi\n";
    std::string bnd = "# u bound\n";
    for (const auto& r : reports) {
        double u = 0.0, p = 0.0, lo = 0.0, hi = 0.0;
        if (r.ruin_estimate) {
            const auto& e = *r.ruin_estimate;
            u = e.u, p = e.p_hat, lo = e.ci_lo, hi = e.ci_hi;
        } else if (r.exit_estimate) {
            const auto& e = *r.exit_estimate;
            u = e.u, p = e.p_hi, lo = e.hi_ci.lo, hi = e.hi_ci.hi;
        } else {
            continue;
        }
        est += fmt(u) + ' ' + fmt(p) + ' ' + fmt(lo) + ' ' + fmt(hi) + '\n';
        bnd += fmt(u) + ' ' + fmt(r.analytic_bound) + '\n';
    }
    write_file(dir / "plot_estimates.dat", est);
    write_file(dir / "plot_bounds.dat", bnd);
}

std::string estimate_summary(const std::string& id, const rl::RuinEstimate& e) {
    std::ostringstream os;
    os << id << ": p_hat=" << fmt(e.p_hat) << " ci=[" << fmt(e.ci_lo) << ", " << fmt(e.ci_hi)
       << "] hits=" << e.n_hit << "/" << e.n_paths << " T=" << fmt(e.horizon);
    return os.str();
}

struct KindResult {
    std::string results_csv;
    std::vector<std::string> summary;
    std::optional<bool> all_pass; // empty when the kind has nothing to check
};

KindResult run_kind(const std::string& kind, const json& params, const rl::ModelParams& p,
                    const rl::SimConfig& cfg, std::uint64_t n_paths, std::uint64_t seed,
                    unsigned workers, const fs::path& out) {
    KindResult res;

    if (kind == "simulate") {
        const double u = params.at("u").get<double>();
        std::uint64_t ruined = 0;
        for (std::uint64_t i = 0; i < n_paths; ++i) {
            const rl::PathRecord rec = rl::simulate_path(p, cfg, u, rl::RngStream(seed, i));
            std::ofstream os(out / ("trace_" + std::to_string(i) + ".csv"), std::ios::binary);
            if (!os) throw std::runtime_error("cannot open trace file for writing");
            rl::write_trace_csv(rec, os);
            ruined += rec.outcome.ruin_time.has_value();
            std::ostringstream line;
            line << "path " << i << ": terminal=" << fmt(rec.outcome.terminal_value)
                 << " stop_time=" << fmt(rec.outcome.stop_time) << " jumps="
                 << rec.outcome.n_jumps << " ruin_time="
                 << (rec.outcome.ruin_time ? fmt(*rec.outcome.ruin_time) : std::string("none"));
            res.summary.push_back(line.str());
        }
        const rl::Interval w = rl::wilson_interval(ruined, n_paths);
        rl::RuinEstimate agg;
        agg.u = u;
        agg.level = 0.0;
        agg.horizon = cfg.horizon;
        agg.n_paths = n_paths;
        agg.n_hit = ruined;
        agg.p_hat = static_cast<double>(ruined) / static_cast<double>(n_paths);
        agg.ci_lo = w.lo;
        agg.ci_hi = w.hi;
        agg.seed = seed;
        res.results_csv = rl::csv_header() + rl::csv_row("simulate_u" + fmt(u), agg);
        return res;
    }

    if (kind == "estimate") {
        const double u = params.at("u").get<double>();
        const double level = params.value("level", 0.0);
        const auto e = rl::estimate_ruin(p, cfg, u, level, n_paths, seed, workers);
        const std::string id = "estimate_u" + fmt(u) + "_level" + fmt(level);
        res.results_csv = rl::csv_header() + rl::csv_row(id, e);
        res.summary.push_back(estimate_summary(id, e));
        return res;
    }

    if (kind == "sweep") {
        const double u = params.at("u").get<double>();
        const double level = params.value("level", 0.0);
        const auto horizons = params.at("horizons").get<std::vector<double>>();
        const auto rows = rl::horizon_sweep(p, cfg, u, level, horizons, n_paths, seed, workers);
        res.results_csv = rl::csv_header();
        for (const auto& e : rows) {
            const std::string id = "sweep_u" + fmt(u) + "_T" + fmt(e.horizon);
            res.results_csv += rl::csv_row(id, e);
            res.summary.push_back(estimate_summary(id, e));
        }
        return res;
    }

    if (kind == "certify-signs") {
        const std::string regime_name = params.at("regime").get<std::string>();
        rl::Regime regime;
        if (regime_name == "rho_gt_1")
            regime = rl::Regime::rho_gt_1();
        else if (regime_name == "rho_lt_1")
            regime = rl::Regime::rho_lt_1(
                params.contains("alpha") ? std::optional<double>(params.at("alpha").get<double>())
                                         : std::nullopt);
        else if (regime_name == "rho_eq_1")
            regime = rl::Regime::rho_eq_1();
        else
            throw rl::InvalidConfig("unknown regime '" + regime_name +
                                    "' (expected rho_gt_1, rho_lt_1, or rho_eq_1)");
        rl::GridSpec grid;
        if (params.contains("n_points")) grid.n_points = params.at("n_points").get<std::size_t>();
        if (params.contains("span")) grid.span = params.at("span").get<double>();

        const rl::SignReport rep = rl::certify_generator_signs(p, regime, grid);

        std::string table = "x,generator,bound\n";
        for (std::size_t i = 0; i < rep.grid.size(); ++i)
            table += fmt(rep.grid[i]) + ',' + fmt(rep.gen_values[i]) + ',' +
                     fmt(rep.bound_values[i]) + '\n';
        write_file(out / ("signs_" + regime_name + ".csv"), table);

        res.results_csv =
            "name,threshold,grid_points,worst_x,worst_generator,bound_worst_x,bound_worst_value,"
            "pass\n";
        res.results_csv += "signs_" + regime_name + ',' + fmt(rep.threshold) + ',' +
                           fmt(static_cast<std::uint64_t>(rep.grid.size())) + ',' +
                           fmt(rep.worst_point.first) + ',' + fmt(rep.worst_point.second) + ',' +
                           fmt(rep.bound_worst_point.first) + ',' +
                           fmt(rep.bound_worst_point.second) + ',' + (rep.pass ? "1" : "0") +
                           '\n';
        res.summary.push_back(rl::summary_line(rep));
        res.all_pass = rep.pass;
        return res;
    }

    // the remaining kinds all produce BoundReports
    std::vector<rl::BoundReport> reports;
    bool plots = true;
    if (kind == "verify-theorem") {
        const double M = params.at("M").get<double>();
        const auto u_values = params.at("u_values").get<std::vector<double>>();
        reports = rl::check_theorem_decay(p, M, u_values, cfg, n_paths, seed, workers);
    } else if (kind == "verify-lemma-a") {
        const double alpha = params.at("alpha").get<double>();
        const double u = params.at("u").get<double>();
        const double n_level = params.at("n_level").get<double>();
        reports.push_back(rl::check_exit_bound_A(p, alpha, u, n_level, cfg, n_paths, seed,
                                                 workers));
    } else if (kind == "verify-lemma-b") {
        const double u = params.at("u").get<double>();
        const double n_level = params.at("n_level").get<double>();
        reports.push_back(rl::check_exit_bound_B(p, u, n_level, cfg, n_paths, seed, workers));
    } else if (kind == "verify-certain-ruin") {
        const auto u_values = params.at("u_values").get<std::vector<double>>();
        const auto horizons = params.at("horizons").get<std::vector<double>>();
        const double target = params.value("target", 0.9);
        reports = rl::check_certain_ruin(p, u_values, cfg, horizons, n_paths, seed, target,
                                         workers);
    } else if (kind == "check-markov") {
        const double x = params.at("x").get<double>();
        const double s = params.at("s").get<double>();
        const double t = params.at("t").get<double>();
        reports.push_back(rl::check_markov_restart(p, x, s, t, cfg, n_paths, seed, workers));
        plots = false; // no capital axis to plot against
    } else {
        throw rl::InvalidConfig(
            "unknown kind '" + kind +
            "' (expected simulate, estimate, sweep, verify-theorem, verify-lemma-a, "
            "verify-lemma-b, verify-certain-ruin, certify-signs, or check-markov)");
    }

    res.results_csv = report_csv(reports, n_paths, seed);
    bool all = true;
    for (const auto& r : reports) {
        res.summary.push_back(rl::summary_line(r));
        all = all && r.pass;
    }
    res.all_pass = all;
    if (plots) emit_plot_data(reports, out);
    return res;
}

int run_experiment(const std::string& config_path, const std::optional<std::uint64_t>& seed_arg,
                   unsigned workers, const std::optional<std::string>& out_arg) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "config error: cannot open '" << config_path << "'\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n')
                ++line, col = 1;
            else
                ++col;
        }
        std::cerr << "config parse error at line " << line << ", column " << col << ": "
                  << e.what() << "\n";
        return 2;
    }

    try {
        const std::string kind = root.at("kind").get<std::string>();
        const rl::ModelParams p = parse_model(root.at("model"));
        rl::SimConfig cfg = parse_sim(root, p.lambda);
        cfg.validate_and_normalize();
        const auto n_paths = root.at("n_paths").get<std::uint64_t>();
        if (n_paths == 0) throw rl::InvalidConfig("n_paths must be >= 1");
        std::uint64_t seed = root.at("master_seed").get<std::uint64_t>();
        if (seed_arg) seed = *seed_arg;
        const fs::path out = out_arg ? fs::path(*out_arg)
                                     : fs::path(root.value("out", std::string(".")));
        fs::create_directories(out);
        const json params = root.value("params", json::object());

        const KindResult res = run_kind(kind, params, p, cfg, n_paths, seed, workers, out);

        write_file(out / "results.csv", res.results_csv);

        std::string summary = "ruinlab " + kind + "\n";
        summary += "generated_at: " + timestamp_utc() + "\n";
        summary += "config: " + config_path + "\n";
        summary += "model: a=" + fmt(p.a) + " sigma=" + fmt(p.sigma) + " c=" + fmt(p.c) +
                   " lambda=" + fmt(p.lambda) + " claim=" + p.claim.describe() +
                   " rho=" + fmt(rl::rho(p)) + "\n";
        summary += "sim: dt=" + fmt(cfg.dt) + " horizon=" + fmt(cfg.horizon) + " scheme=" +
                   (cfg.scheme == rl::Scheme::ExactY ? "exact" : "euler") +
                   " n_paths=" + fmt(n_paths) + " seed=" + fmt(seed) + "\n";
        for (const auto& line : res.summary) summary += line + "\n";
        summary += "overall: ";
        summary += res.all_pass ? (*res.all_pass ? "PASS" : "FAIL") : "n/a";
        summary += "\n";
        write_file(out / "summary.txt", summary);

        std::cout << summary;
        if (res.all_pass && !*res.all_pass) return 1;
        return 0;
    } catch (const rl::RegimeError& e) {
        std::cerr << "RegimeError: " << e.what() << "\n";
        return 2;
    } catch (const rl::DomainError& e) {
        std::cerr << "DomainError: " << e.what() << "\n";
        return 2;
    } catch (const rl::OrderError& e) {
        std::cerr << "OrderError: " << e.what() << "\n";
        return 2;
    } catch (const rl::LevelError& e) {
        std::cerr << "LevelError: " << e.what() << "\n";
        return 2;
    } catch (const rl::IntervalError& e) {
        std::cerr << "IntervalError: " << e.what() << "\n";
        return 2;
    } catch (const rl::InvalidConfig& e) {
        std::cerr << "InvalidConfig: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const rl::QuadratureFailure& e) {
        std::cerr << "QuadratureFailure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo ruin/first-passage toolkit for an insurance "
                 "surplus process with risky investments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one experiment config");
    std::string config_path;
    run->add_option("config", config_path, "JSON experiment config")->required();
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override the config's master_seed");
    unsigned workers = 0;
    run->add_option("--workers", workers,
                    "cap worker threads (default: RUINLAB_WORKERS, then hardware)");
    std::string out_dir;
    CLI::Option* out_opt =
        run->add_option("--out", out_dir, "override the config's output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    return run_experiment(config_path,
                          seed_opt->count() ? std::optional<std::uint64_t>(seed)
                                            : std::nullopt,
                          workers,
                          out_opt->count() ? std::optional<std::string>(out_dir)
                                           : std::nullopt);
}
