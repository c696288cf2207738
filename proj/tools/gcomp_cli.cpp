// Batch experiment runner: configure a model and a testbed, run verification
// suites, and emit CSV reports plus a JSON summary. Built for scripts and CI;
// no interactive mode.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcomp/gcomp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kAllSuites = {"geodesic-oracle", "toponogov", "gluing", "sturm",
                                             "splitting", "cylinder", "rigidity"};

gcomp::WarpingFunction parse_model(const std::string& spec) {
    using gcomp::WarpingFunction;
    if (spec == "cosh") return WarpingFunction::hyperbolic();
    if (spec == "exp-decay") return WarpingFunction::exp_decay();
    if (spec == "const" || spec == "const:1") return WarpingFunction::constant();
    if (spec.rfind("const:", 0) == 0) return WarpingFunction::constant(std::stod(spec.substr(6)));
    if (spec == "cos-truncated") return WarpingFunction::cos_truncated();
    if (spec.rfind("cos-truncated:", 0) == 0)
        return WarpingFunction::cos_truncated(std::stod(spec.substr(14)));
    if (spec.rfind("spline:", 0) == 0) return WarpingFunction::from_csv(spec.substr(7));
    throw CLI::ValidationError("model", "unknown model spec '" + spec + "' (see list-models)");
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return out;
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << body;
}

// Geodesic traces with the Clairaut residual column, plot-ready.
std::string trace_csv(const gcomp::WarpingFunction& w) {
    std::ostringstream out;
    out << "trace,s,x,y,nu_residual\n";
    struct Tr {
        gcomp::GeodesicState init;
        double len;
    };
    const Tr traces[2] = {{{{0.0, 0.0}, gcomp::kPi / 2}, 3.0}, {{{1.0, 0.0}, 1.0}, 3.0}};
    char buf[40];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (int t = 0; t < 2; ++t) {
        auto path = gcomp::integrate_geodesic(w, traces[t].init, traces[t].len);
        const double nu0 = path.clairaut;
        for (const auto& s : path.samples) {
            const double m = w.m(s.x);
            const double nu = m * m * std::abs(s.yp);
            out << t << ',' << num(s.s) << ',' << num(s.x) << ',' << num(s.y) << ','
                << num(nu - nu0) << '\n';
        }
    }
    return out.str();
}

struct RunConfig {
    std::vector<std::string> suites;
    std::optional<std::uint64_t> seed;
    std::string model = "cosh";
    std::string testbed = "const:1";
    fs::path out_dir;
    gcomp::ShootingOptions shooting;
};

RunConfig load_config(const std::string& config_path) {
    RunConfig c;
    if (config_path.empty()) return c;
    std::ifstream f(config_path);
    if (!f) throw CLI::ValidationError("--config", "cannot open " + config_path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
    }
    if (j.contains("suite")) {
        if (j["suite"].is_string())
            c.suites.push_back(j["suite"].get<std::string>());
        else
            c.suites = j["suite"].get<std::vector<std::string>>();
    }
    if (j.contains("suites")) c.suites = j["suites"].get<std::vector<std::string>>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("model")) c.model = j["model"].get<std::string>();
    if (j.contains("testbed")) c.testbed = j["testbed"].get<std::string>();
    if (j.contains("output_dir")) c.out_dir = j["output_dir"].get<std::string>();
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("rtol")) c.shooting.ode.rtol = t["rtol"].get<double>();
        if (t.contains("atol")) c.shooting.ode.atol = t["atol"].get<double>();
        if (t.contains("angle_tol")) c.shooting.angle_tol = t["angle_tol"].get<double>();
        if (t.contains("tie_tol")) c.shooting.tie_tol = t["tie_tol"].get<double>();
    }
    return c;
}

fs::path resolve_out_dir(const fs::path& cli_out, const fs::path& config_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("GCOMP_OUT"); env && *env) return env;
    if (!config_out.empty()) return config_out;
    return "gcomp-out";
}

int cmd_run(const RunConfig& cfg) {
    std::vector<std::string> suites = cfg.suites.empty() ? kAllSuites : cfg.suites;
    for (const auto& s : suites)
        if (std::find(kAllSuites.begin(), kAllSuites.end(), s) == kAllSuites.end()) {
            std::cerr << "error: unknown suite '" << s << "'; valid:";
            for (const auto& k : kAllSuites) std::cerr << ' ' << k;
            std::cerr << '\n';
            return 2;
        }
    const bool randomized = std::any_of(suites.begin(), suites.end(),
                                        [](const std::string& s) { return s != "splitting"; });
    if (randomized && !cfg.seed) {
        std::cerr << "error: --seed is required for randomized suites\n";
        return 2;
    }
    const std::uint64_t seed = cfg.seed.value_or(0);

    fs::create_directories(cfg.out_dir);
    json summary;
    summary["seed"] = seed;
    summary["model"] = cfg.model;
    summary["testbed"] = cfg.testbed;
    summary["suites"] = json::array();
    bool all_pass = true;
    std::vector<fs::path> reports;

    for (const auto& name : suites) {
        gcomp::suites::SuiteResult r;
        try {
            if (name == "geodesic-oracle") {
                r = gcomp::suites::geodesic_oracle_suite(seed, 100, cfg.shooting);
                write_file(cfg.out_dir / "geodesic_traces.csv",
                           trace_csv(parse_model(cfg.model)));
                reports.push_back(cfg.out_dir / "geodesic_traces.csv");
            } else if (name == "toponogov") {
                r = gcomp::suites::toponogov_suite(seed, 200, parse_model(cfg.testbed),
                                                   parse_model(cfg.model), cfg.shooting);
            } else if (name == "gluing") {
                r = gcomp::suites::gluing_suite(seed, 50, cfg.shooting);
            } else if (name == "sturm") {
                r = gcomp::suites::sturm_suite(seed, 100);
            } else if (name == "splitting") {
                if (!cfg.model.empty() && cfg.model != "all") {
                    auto w = parse_model(cfg.model);
                    auto v = gcomp::sturm::splitting_classify(w);
                    r.summary.suite = "splitting";
                    r.summary.cases = 1;
                    r.summary.passes = 1;
                    char buf[160];
                    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g\n", w.name().c_str(),
                                  gcomp::sturm::to_string(v.verdict), v.integral_estimate,
                                  v.liminf_estimate);
                    r.csv = "model,verdict,integral_estimate,liminf_estimate\n" +
                            std::string(buf);
                    std::cout << "splitting verdict for " << w.name() << ": "
                              << gcomp::sturm::to_string(v.verdict) << '\n';
                } else {
                    r = gcomp::suites::splitting_suite();
                }
            } else if (name == "cylinder") {
                r = gcomp::suites::cylinder_suite(seed, 100);
            } else if (name == "rigidity") {
                r = gcomp::suites::rigidity_suite(seed, 50, cfg.shooting);
            }
        } catch (const std::exception& e) {
            std::cerr << "suite " << name << " failed to run: " << e.what() << '\n';
            return 1;
        }
        const fs::path csv_path = cfg.out_dir / (sanitize(name) + ".csv");
        write_file(csv_path, r.csv);
        reports.push_back(csv_path);
        summary["suites"].push_back({{"suite", r.summary.suite},
                                     {"cases", r.summary.cases},
                                     {"passes", r.summary.passes},
                                     {"worst_residual", r.summary.worst_residual},
                                     {"runtime_seconds", r.summary.runtime_seconds},
                                     {"csv", csv_path.string()}});
        all_pass = all_pass && r.summary.all_pass();
        std::cout << name << ": " << r.summary.passes << "/" << r.summary.cases << " passed ("
                  << r.summary.runtime_seconds << " s)\n";
    }
    summary["all_pass"] = all_pass;
    summary["generated_at"] =
        static_cast<long long>(std::chrono::duration_cast<std::chrono::seconds>(
                                   std::chrono::system_clock::now().time_since_epoch())
                                   .count());
    write_file(cfg.out_dir / "summary.json", summary.dump(2) + "\n");

    if (!all_pass) {
        std::cerr << "FAIL; reports:\n";
        for (const auto& p : reports) std::cerr << "  " << p.string() << '\n';
        std::cerr << "  " << (cfg.out_dir / "summary.json").string() << '\n';
        return 1;
    }
    return 0;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream f(p);
    if (!f) throw std::runtime_error("missing report: " + p.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(f, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

int cmd_plot_data(const fs::path& out_dir) {
    bool any = false;

    // residual series from suite reports
    for (const auto& name : kAllSuites) {
        const fs::path src = out_dir / (sanitize(name) + ".csv");
        if (!fs::exists(src)) continue;
        auto rows = read_csv(src);
        if (rows.empty()) continue;
        const auto& header = rows.front();
        std::vector<std::size_t> residual_cols;
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == "residual" || header[i] == "error" ||
                header[i].size() > 9 && header[i].substr(header[i].size() - 9) == "_residual")
                residual_cols.push_back(i);
        if (residual_cols.empty()) continue;
        std::ostringstream out;
        out << "id,residual\n";
        for (std::size_t r = 1; r < rows.size(); ++r) {
            double worst = 1e300;
            for (auto c : residual_cols)
                if (c < rows[r].size()) worst = std::min(worst, std::stod(rows[r][c]));
            out << (r - 1) << ',' << worst << '\n';
        }
        write_file(out_dir / (sanitize(name) + "_residuals.csv"), out.str());
        any = true;
    }

    // per-trace geodesic series
    const fs::path traces = out_dir / "geodesic_traces.csv";
    if (fs::exists(traces)) {
        auto rows = read_csv(traces);
        std::map<std::string, std::ostringstream> split;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() < 5) continue;
            auto& out = split[rows[r][0]];
            if (out.tellp() == 0) out << "s,x,y,nu_residual\n";
            out << rows[r][1] << ',' << rows[r][2] << ',' << rows[r][3] << ',' << rows[r][4]
                << '\n';
        }
        for (auto& [id, body] : split)
            write_file(out_dir / ("trace_" + sanitize(id) + ".csv"), body.str());
        any = true;
    }

    if (!any) {
        std::cerr << "error: no report files found in " << out_dir.string() << '\n';
        return 1;
    }
    return 0;
}

int cmd_list_models() {
    std::cout << "const:<c>          constant warping (default c = 1; flat model)\n"
              << "cosh               hyperbolic model, curvature -1\n"
              << "exp-decay          e^{-t}; splitting classification only\n"
              << "cos-truncated:<T>  cos(t) on [0, T], T in (0, pi/2); curvature +1\n"
              << "spline:<path>      cubic spline through (t, m) rows of a CSV file\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"model-surface comparison experiment runner"};
    app.require_subcommand(1);

    std::string config_path, out_cli;
    std::vector<std::string> suites_cli;
    std::optional<std::uint64_t> seed_cli;
    std::string model_cli, testbed_cli;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed_cli, "RNG seed (required for randomized suites)");
        sub->add_option("--out", out_cli, "output directory (env GCOMP_OUT overrides default)");
    };
    auto* run = app.add_subcommand("run", "run verification suites");
    add_common(run);
    run->add_option("--suite", suites_cli, "suite to run (repeatable)");
    run->add_option("--model", model_cli, "model warping spec");
    run->add_option("--testbed", testbed_cli, "testbed warping spec");

    auto* plot = app.add_subcommand("plot-data", "reshape reports into plot-ready series");
    add_common(plot);

    app.add_subcommand("list-models", "list shipped warping families");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-models")) return cmd_list_models();
        RunConfig cfg = load_config(config_path);
        if (!suites_cli.empty()) cfg.suites = suites_cli;
        if (seed_cli) cfg.seed = seed_cli;
        if (!model_cli.empty()) cfg.model = model_cli;
        if (!testbed_cli.empty()) cfg.testbed = testbed_cli;
        cfg.out_dir = resolve_out_dir(out_cli, cfg.out_dir);
        if (app.got_subcommand("run")) return cmd_run(cfg);
        return cmd_plot_data(cfg.out_dir);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
