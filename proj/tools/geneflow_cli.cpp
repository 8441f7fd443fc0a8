// geneflow: command line front end over run_experiment
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "geneflow/io.hpp"

using namespace geneflow;

namespace {

struct Common {
    std::vector<std::string> scenarios;
    std::string out;
    int jobs = 0;
    int grid = 0;
    long long seed = -1;
    bool quiet = false;
};

void add_common(CLI::App* app, Common& c, bool need_scenario, bool many = false) {
    auto* s = app->add_option("-s,--scenario", c.scenarios, many ? "scenario JSON files" : "scenario JSON file");
    if (!many) s->expected(1);
    if (need_scenario) s->required();
    app->add_option("-o,--out", c.out, "output directory (default out/<name>; with several scenarios, <out>/<name>)");
    app->add_option("-j,--jobs", c.jobs, "worker threads for scans (0: hardware)");
    app->add_option("--grid", c.grid, "override grid.n");
    app->add_option("--seed", c.seed, "override the random seed");
    app->add_flag("-q,--quiet", c.quiet, "do not print the summary");
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario", std::string("invalid JSON: ") + e.what());
    }
}

int jobs_of(const Common& c) { return c.jobs > 0 ? c.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

RunConfig prepare(json j, const std::string& experiment, const Common& c) {
    if (!j.is_object()) throw ConfigError("scenario", "expected a JSON object");
    if (!experiment.empty()) j["experiment"] = experiment;
    if (c.grid > 0) j["grid"]["n"] = c.grid;
    if (c.seed >= 0) j["seed"] = c.seed;
    return parse_scenario(j);
}

int run(json j, const std::string& experiment, const Common& c) {
    RunConfig cfg = prepare(std::move(j), experiment, c);
    std::string out = c.out.empty() ? "out/" + cfg.name : c.out;
    json sum = run_experiment(cfg, out, jobs_of(c));
    if (!c.quiet) std::cout << sum.dump(2) << "\n";
    std::cerr << "wrote " << out << "\n";
    return 0;
}

// several scenario files: all are validated first, then run `jobs` at a time
int run_many(const Common& c) {
    std::vector<RunConfig> cfgs;
    for (const auto& f : c.scenarios) cfgs.push_back(prepare(read_json(f), "", c));
    const std::string root = c.out.empty() ? "out" : c.out;
    const size_t jobs = static_cast<size_t>(jobs_of(c));
    json all = json::array();
    for (size_t k = 0; k < cfgs.size(); k += jobs) {
        std::vector<std::future<json>> batch;
        for (size_t i = k; i < std::min(cfgs.size(), k + jobs); ++i)
            batch.push_back(std::async(std::launch::async,
                                       [&, i] { return run_experiment(cfgs[i], root + "/" + cfgs[i].name, 1); }));
        for (auto& f : batch) all.push_back(f.get());
    }
    if (!c.quiet) std::cout << all.dump(2) << "\n";
    std::cerr << "wrote " << cfgs.size() << " scenarios under " << root << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constrained boundary control of bistable reaction-diffusion with gene flow"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common c;
    std::string experiment;

    auto* gen = app.add_subcommand("run", "run the experiment named inside the scenario");
    add_common(gen, c, true, true);

    const std::vector<std::pair<std::string, std::string>> direct = {
        {"barriers", "barriers"},         {"phase-portrait", "phase-portrait"},
        {"simulate", "simulate"},         {"staircase", "staircase"},
        {"report", "report"},             {"eigen", "eigen"},
        {"energy", "energy"},             {"mintime", "mintime-scan"},
        {"transform-check", "transform-check"}};
    std::vector<std::pair<CLI::App*, std::string>> subs;
    for (const auto& [cmd, exp] : direct) {
        auto* s = app.add_subcommand(cmd, "run the " + exp + " experiment on a scenario");
        add_common(s, c, true);
        subs.emplace_back(s, exp);
    }

    auto* ctl = app.add_subcommand("control", "controllability tools");
    ctl->require_subcommand(1);
    auto* ctl_rep = ctl->add_subcommand("report", "verdict table for starts {0,1} and targets {0,theta,1}");
    add_common(ctl_rep, c, true);
    auto* ctl_mt = ctl->add_subcommand("mintime", "minimal time 0 -> theta over a sigma scan");
    add_common(ctl_mt, c, true);

    std::string preset_name;
    auto* pre = app.add_subcommand("preset", "run a built-in scenario");
    pre->add_option("name", preset_name, "preset name")->required();
    add_common(pre, c, false);
    bool dump_only = false;
    pre->add_flag("--dump", dump_only, "print the preset JSON and exit");

    auto* list = app.add_subcommand("presets", "list the built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            for (const auto& n : preset_names()) std::cout << n << "\n";
            return 0;
        }
        if (pre->parsed()) {
            json j = preset(preset_name);
            if (dump_only) {
                std::cout << j.dump(2) << "\n";
                return 0;
            }
            return run(j, "", c);
        }
        if (gen->parsed())
            return c.scenarios.size() == 1 ? run(read_json(c.scenarios[0]), "", c) : run_many(c);
        if (ctl_rep->parsed()) return run(read_json(c.scenarios.at(0)), "report", c);
        if (ctl_mt->parsed()) return run(read_json(c.scenarios.at(0)), "mintime-scan", c);
        for (const auto& [s, exp] : subs)
            if (s->parsed()) return run(read_json(c.scenarios.at(0)), exp, c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
