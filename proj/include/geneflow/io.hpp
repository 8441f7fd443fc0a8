#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "geneflow/control.hpp"

namespace geneflow {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.3.0";

// bad scenario content; the CLI maps it to exit code 2
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& field, const std::string& what) : Error("config", field + ": " + what) {}
};

struct InitialSpec {
    std::string kind = "const";  // const | cosine | file | barrier | random
    double c = 0.0;              // const value, cosine amplitude
    std::string path;            // file: CSV with x,p
    double which = 0.0;          // barrier: boundary value 0 or 1
};

struct ControlSpec {
    std::string kind = "static";  // static | piecewise
    double left = 0.0, right = 0.0;
    std::vector<double> t, u;
};

struct SimRun {
    InitialSpec initial;
    ControlSpec control;
};

struct RunConfig {
    std::string experiment;
    std::string name = "scenario";
    json source;  // expanded scenario, hashed into every CSV
    Scenario sc;
    std::string boundary = "both";  // barriers: one | zero | both
    std::vector<SimRun> runs;
    double T = 10.0;
    double snapshot_every = 1.0;
    std::vector<double> alphas;  // phase-portrait
    std::vector<double> starts{0.0, 1.0};
    // mintime
    std::vector<std::pair<DriftFamily, double>> mt_families;  // (family, rate)
    std::vector<double> sigmas;
    std::vector<double> horizons;
    // energy
    double energy_delta = 0.0;  // 0: R/4
    // transform
    std::string N_kind = "affine";  // affine: a + b p; exp: e^{k p}; poly: sum c_k p^k
    std::vector<double> N_coef{1.0, 1.0};
    std::vector<double> gf_h{0.01, 0.005, 0.0025};
    double gf_T = 10.0;
    std::uint64_t seed = 0;
};

json preset(const std::string& name);
std::vector<std::string> preset_names();

// merges a "preset" field, validates, throws ConfigError with the offending field
RunConfig parse_scenario(const json& j);
RunConfig load_scenario_file(const std::string& path);

std::string scenario_hash(const json& j);  // FNV-1a of the canonical dump, hex

DriftFamily parse_family(const std::string& s);
std::function<double(double)> make_N(const std::string& kind, const std::vector<double>& coef);
GridProfile make_initial(const InitialSpec& spec, const RunConfig& cfg);

// CSV with a leading "# scenario_hash=...,version=..." line, then RFC-4180 rows
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& hash, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);
    ~CsvWriter();

private:
    struct Impl;
    Impl* impl_;
};

std::string fmt(double v);  // %.10g, "inf"/"-inf"/"nan" spelled out

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x, y;
    bool dashed = false;
};

void write_svg(const std::string& path, const std::string& title, const std::string& xlabel,
               const std::string& ylabel, const std::vector<SvgSeries>& series);

// writes artifacts into out_dir; returns the summary written to summary.json
json run_experiment(const RunConfig& cfg, const std::string& out_dir, int jobs = 1);

}  // namespace geneflow
