#include "geneflow/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace geneflow {

namespace {

const std::vector<std::string> kExperiments = {"barriers", "phase-portrait", "simulate",  "staircase", "report",
                                               "mintime-scan", "eigen",      "energy", "transform-check"};

const json& sub(const json& j, const char* key) {
    static const json empty = json::object();
    auto it = j.find(key);
    if (it == j.end()) return empty;
    if (!it->is_object()) throw ConfigError(key, "expected an object");
    return *it;
}

double num(const json& j, const std::string& path, const char* key, double def, double lo, double hi) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_number()) throw ConfigError(path + key, "expected a number");
    double v = it->get<double>();
    if (!std::isfinite(v) || v < lo || v > hi)
        throw ConfigError(path + key, "out of range [" + fmt(lo) + ", " + fmt(hi) + "]");
    return v;
}

std::string str(const json& j, const std::string& path, const char* key, const std::string& def) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_string()) throw ConfigError(path + key, "expected a string");
    return it->get<std::string>();
}

std::vector<double> nums(const json& j, const std::string& path, const char* key, std::vector<double> def) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_array()) throw ConfigError(path + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number()) throw ConfigError(path + key, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

InitialSpec parse_initial(const json& j, const std::string& path) {
    InitialSpec s;
    s.kind = str(j, path, "kind", "const");
    if (s.kind == "const") {
        s.c = num(j, path, "c", 0.0, 0.0, 1.0);
    } else if (s.kind == "cosine") {
        s.c = num(j, path, "amplitude", 1.0, 0.0, 1.0);
    } else if (s.kind == "file") {
        s.path = str(j, path, "path", "");
        if (s.path.empty() || !std::filesystem::exists(s.path)) throw ConfigError(path + "path", "file not found");
    } else if (s.kind == "barrier") {
        s.which = num(j, path, "boundary", 0.0, 0.0, 1.0);
        if (s.which != 0.0 && s.which != 1.0) throw ConfigError(path + "boundary", "must be 0 or 1");
    } else if (s.kind != "random") {
        throw ConfigError(path + "kind", "unknown initial datum '" + s.kind + "'");
    }
    return s;
}

ControlSpec parse_control(const json& j, const std::string& path) {
    ControlSpec c;
    c.kind = str(j, path, "kind", "static");
    if (c.kind == "static") {
        double u = num(j, path, "u", 0.0, 0.0, 1.0);
        c.left = num(j, path, "left", u, 0.0, 1.0);
        c.right = num(j, path, "right", u, 0.0, 1.0);
    } else if (c.kind == "piecewise") {
        c.t = nums(j, path, "t", {});
        c.u = nums(j, path, "u", {});
        if (c.t.empty() || c.t.size() != c.u.size()) throw ConfigError(path + "u", "t and u need equal, nonzero length");
        for (double v : c.u)
            if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(path + "u", "control values must lie in [0,1]");
    } else {
        throw ConfigError(path + "kind", "unknown control '" + c.kind + "'");
    }
    return c;
}

}  // namespace

DriftFamily parse_family(const std::string& s) {
    try {
        return drift_family_from_string(s);
    } catch (const Error&) {
        throw ConfigError("drift.family", "unknown family '" + s + "'");
    }
}

std::function<double(double)> make_N(const std::string& kind, const std::vector<double>& c) {
    if (kind == "affine") {
        if (c.size() != 2) throw ConfigError("transform.N.coef", "affine needs [a, b]");
        double a = c[0], b = c[1];
        return [a, b](double p) { return a + b * p; };
    }
    if (kind == "exp") {
        if (c.size() != 1) throw ConfigError("transform.N.coef", "exp needs [k]");
        double k = c[0];
        return [k](double p) { return std::exp(k * p); };
    }
    if (kind == "poly") {
        if (c.empty()) throw ConfigError("transform.N.coef", "poly needs coefficients");
        return [c](double p) {
            double v = 0.0;
            for (size_t k = c.size(); k-- > 0;) v = v * p + c[k];
            return v;
        };
    }
    throw ConfigError("transform.N.kind", "unknown N kind '" + kind + "'");
}

std::vector<std::string> preset_names() { return {"fig4", "fig5", "fig6", "fig7", "mincontr"}; }

json preset(const std::string& name) {
    json f = {{"kind", "cubic"}, {"theta", 0.33}};
    json fig_drift = {{"kind", "radial"}, {"family", "gauss_out"}, {"sigma", 40.0}};
    json short_domain = {{"kind", "interval"}, {"L", 2.5}};
    if (name == "fig4" || name == "fig5")
        return {{"name", name},        {"experiment", "barriers"}, {"boundary", name == "fig4" ? "one" : "zero"},
                {"f", f},              {"drift", fig_drift},       {"domain", short_domain},
                {"grid", {{"n", 2001}}}};
    if (name == "fig6")
        return {{"name", name},
                {"experiment", "simulate"},
                {"f", f},
                {"drift", fig_drift},
                {"domain", short_domain},
                {"grid", {{"n", 201}}},
                {"horizon", {{"T", 200.0}, {"T_max", 200.0}, {"snapshot_every", 10.0}}},
                {"runs",
                 {{{"initial", {{"kind", "const"}, {"c", 1.0}}}, {"control", {{"kind", "static"}, {"u", 0.0}}}},
                  {{"initial", {{"kind", "const"}, {"c", 0.0}}}, {"control", {{"kind", "static"}, {"u", 1.0}}}}}}};
    if (name == "fig7")
        return {{"name", name},
                {"experiment", "staircase"},
                {"f", f},
                // e^{|x|/sigma} as N^{1/sigma}: ln N = |x|/2 with the 2/sigma coefficient
                {"drift", {{"kind", "radial"}, {"family", "abs_exp"}, {"sigma", 40.0}, {"rate", 0.5}}},
                {"domain", {{"kind", "interval"}, {"L", 15.0}}},
                {"grid", {{"n", 301}}},
                {"horizon", {{"T_max", 150.0}}},
                {"staircase", {{"T1", 150.0}, {"record_every", 5.0}}},
                {"starts", {1.0, 0.0}}};
    if (name == "mincontr")
        return {{"name", name},
                {"experiment", "mintime-scan"},
                {"f", f},
                {"domain", short_domain},
                {"grid", {{"n", 101}}},
                {"mintime",
                 {{"families",
                   {{{"family", "gauss_out"}, {"rate", 2.0}},
                    {{"family", "sinusoidal"}, {"rate", 1.0}},
                    {{"family", "gauss_in"}, {"rate", 2.0}}}},
                  {"sigmas", {32.0, 16.0, 8.0, 4.0, 2.0, 1.0}},
                  {"horizons", {{"max", 80.0}, {"step", 0.5}}}}}};
    throw ConfigError("preset", "unknown preset '" + name + "'");
}

RunConfig parse_scenario(const json& in) {
    if (!in.is_object()) throw ConfigError("scenario", "expected a JSON object");
    json j = in;
    if (auto it = in.find("preset"); it != in.end()) {
        if (!it->is_string()) throw ConfigError("preset", "expected a string");
        j = preset(it->get<std::string>());
        for (auto& [k, v] : in.items())
            if (k != "preset") j[k] = v;
    }
    RunConfig cfg;
    cfg.source = j;
    cfg.experiment = str(j, "", "experiment", "");
    if (cfg.experiment.empty()) throw ConfigError("experiment", "missing experiment kind");
    if (std::find(kExperiments.begin(), kExperiments.end(), cfg.experiment) == kExperiments.end())
        throw ConfigError("experiment", "unknown experiment '" + cfg.experiment + "'");
    cfg.name = str(j, "", "name", cfg.experiment);
    auto& sc = cfg.sc;
    sc.name = cfg.name;

    const json& f = sub(j, "f");
    std::string fk = str(f, "f.", "kind", "cubic");
    sc.theta = num(f, "f.", "theta", 0.33, 1e-6, 1.0 - 1e-6);
    if (fk == "tabulated") {
        auto p = nums(f, "f.", "p", {}), v = nums(f, "f.", "f", {});
        if (p.size() < 4 || p.size() != v.size()) throw ConfigError("f.f", "need matching p and f with >= 4 points");
        try {
            sc.custom_f = BistableNonlinearity::tabulated(p, v, sc.theta);
        } catch (const Error& e) {
            throw ConfigError("f", e.what());
        }
    } else if (fk != "cubic") {
        throw ConfigError("f.kind", "unknown nonlinearity '" + fk + "'");
    }

    const json& d = sub(j, "drift");
    std::string dk = str(d, "drift.", "kind", "homogeneous");
    double sigma = num(d, "drift.", "sigma", 1.0, 1e-6, 1e12);
    double rate = num(d, "drift.", "rate", 1.0, -1e6, 1e6);
    if (dk == "homogeneous") {
        sc.drift = DriftField::homogeneous();
    } else if (dk == "radial" || dk == "spatial-log") {
        auto fam = parse_family(str(d, "drift.", "family", "gauss_out"));
        if (fam == DriftFamily::sampled || fam == DriftFamily::infection)
            throw ConfigError("drift.family", "use kind 'sampled' or 'infection'");
        sc.drift = fam == DriftFamily::homogeneous ? DriftField::homogeneous() : DriftField::family(fam, sigma, rate);
    } else if (dk == "sampled") {
        auto x = nums(d, "drift.", "x", {}), b = nums(d, "drift.", "b", {});
        if (x.size() < 2 || x.size() != b.size()) throw ConfigError("drift.b", "need matching x and b");
        try {
            sc.drift = DriftField::sampled(x, b, sigma);
        } catch (const Error& e) {
            throw ConfigError("drift", e.what());
        }
    } else {
        throw ConfigError("drift.kind", "unknown drift kind '" + dk + "'");
    }

    const json& dom = sub(j, "domain");
    std::string gk = str(dom, "domain.", "kind", "interval");
    if (gk == "interval") {
        sc.geometry = DomainGeometry::interval(num(dom, "domain.", "L", 1.0, 1e-6, 1e6));
    } else if (gk == "ball") {
        double R = num(dom, "domain.", "R", 1.0, 1e-6, 1e6);
        int dim = static_cast<int>(num(dom, "domain.", "d", 2, 1, 10));
        sc.geometry = DomainGeometry::ball(R, dim);
    } else {
        throw ConfigError("domain.kind", "unknown domain '" + gk + "'");
    }

    const json& g = sub(j, "grid");
    sc.n = static_cast<int>(num(g, "grid.", "n", 201, 16, 1e6));
    sc.dt = num(g, "grid.", "dt", 0.0, 0.0, 1.0);
    sc.tol = num(j, "", "tol", 1e-3, 1e-12, 0.5);

    const json& h = sub(j, "horizon");
    cfg.T = num(h, "horizon.", "T", 10.0, 0.0, 1e7);
    sc.T_max = num(h, "horizon.", "T_max", std::max(cfg.T, 200.0), 1e-6, 1e7);
    cfg.snapshot_every = num(h, "horizon.", "snapshot_every", 1.0, 0.0, 1e7);

    const json& st = sub(j, "staircase");
    sc.delta1 = num(st, "staircase.", "delta1", 0.05, 1e-6, 1.0);
    sc.T1 = num(st, "staircase.", "T1", 20.0, 1e-6, 1e7);
    sc.gain = num(st, "staircase.", "gain", 5.0, 0.0, 1e6);
    sc.path_K = static_cast<int>(num(st, "staircase.", "K", 9, 2, 4096));
    sc.record_every = num(st, "staircase.", "record_every", 0.0, 0.0, 1e7);

    cfg.boundary = str(j, "", "boundary", "both");
    if (cfg.boundary != "one" && cfg.boundary != "zero" && cfg.boundary != "both")
        throw ConfigError("boundary", "one of one, zero, both");

    if (auto it = j.find("runs"); it != j.end()) {
        if (!it->is_array() || it->empty()) throw ConfigError("runs", "expected a nonempty array");
        for (size_t k = 0; k < it->size(); ++k) {
            const json& r = (*it)[k];
            std::string path = "runs[" + std::to_string(k) + "].";
            cfg.runs.push_back({parse_initial(sub(r, "initial"), path + "initial."),
                                parse_control(sub(r, "control"), path + "control.")});
        }
    } else {
        cfg.runs.push_back({parse_initial(sub(j, "initial"), "initial."), parse_control(sub(j, "control"), "control.")});
    }
    cfg.alphas = nums(j, "", "alphas", {0.05});
    cfg.starts = nums(j, "", "starts", {0.0, 1.0});
    for (double s : cfg.starts)
        if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("starts", "values must lie in [0,1]");

    const json& mt = sub(j, "mintime");
    if (auto it = mt.find("families"); it != mt.end()) {
        if (!it->is_array()) throw ConfigError("mintime.families", "expected an array");
        for (const auto& e : *it) {
            if (e.is_string()) {
                cfg.mt_families.emplace_back(parse_family(e.get<std::string>()), 1.0);
            } else if (e.is_object()) {
                cfg.mt_families.emplace_back(parse_family(str(e, "mintime.families.", "family", "")),
                                             num(e, "mintime.families.", "rate", 1.0, -1e6, 1e6));
            } else {
                throw ConfigError("mintime.families", "expected names or objects");
            }
        }
    } else if (mt.contains("family")) {
        cfg.mt_families.emplace_back(parse_family(str(mt, "mintime.", "family", "")),
                                     num(mt, "mintime.", "rate", 1.0, -1e6, 1e6));
    }
    cfg.sigmas = nums(mt, "mintime.", "sigmas", {16.0, 4.0, 1.0, 0.5});
    for (double s : cfg.sigmas)
        if (!(s > 0.0)) throw ConfigError("mintime.sigmas", "values must be positive");
    if (auto it = mt.find("horizons"); it != mt.end() && it->is_array()) {
        cfg.horizons = nums(mt, "mintime.", "horizons", {});
    } else {
        const json& hz = sub(mt, "horizons");
        double hmax = num(hz, "mintime.horizons.", "max", 60.0, 1e-6, 1e7);
        double step = num(hz, "mintime.horizons.", "step", 0.5, 1e-6, 1e7);
        for (double t = step; t <= hmax * (1 + 1e-12); t += step) cfg.horizons.push_back(t);
    }
    if (cfg.experiment == "mintime-scan" && cfg.mt_families.empty())
        throw ConfigError("mintime.families", "mintime-scan needs at least one family");

    cfg.energy_delta = num(sub(j, "energy"), "energy.", "delta", 0.0, 0.0, 1e6);

    const json& tr = sub(j, "transform");
    const json& Nj = sub(tr, "N");
    cfg.N_kind = str(Nj, "transform.N.", "kind", "affine");
    cfg.N_coef = nums(Nj, "transform.N.", "coef", {1.0, 1.0});
    make_N(cfg.N_kind, cfg.N_coef);
    cfg.gf_h = nums(tr, "transform.", "h", {0.01, 0.005, 0.0025});
    cfg.gf_T = num(tr, "transform.", "T", 10.0, 0.0, 1e6);

    auto seed = j.find("seed");
    if (seed != j.end()) {
        if (!seed->is_number_integer() && !seed->is_number_unsigned()) throw ConfigError("seed", "expected an integer");
        cfg.seed = seed->get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario", "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario", std::string("JSON parse error: ") + e.what());
    }
    return parse_scenario(j);
}

std::string scenario_hash(const json& j) {
    std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

GridProfile make_initial(const InitialSpec& spec, const RunConfig& cfg) {
    const auto& g = cfg.sc.geometry;
    const int n = cfg.sc.n;
    if (spec.kind == "const") return GridProfile(g, n, spec.c);
    if (spec.kind == "cosine") {
        const double R = g.inradius(), th = cfg.sc.theta;
        return GridProfile::sample(g, n, [&](double x) {
            return spec.c * 0.5 * (1.0 + std::cos(M_PI * g.radius_of(x) / R)) * th;
        });
    }
    if (spec.kind == "random") {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        double a[4], ph[4];
        for (int k = 0; k < 4; ++k) {
            a[k] = U(rng) / (k + 1);
            ph[k] = M_PI * U(rng);
        }
        double base = 0.5 + 0.25 * U(rng);
        return GridProfile::sample(g, n, [&](double x) {
            double v = base;
            for (int k = 0; k < 4; ++k) v += 0.25 * a[k] * std::cos((k + 1) * x + ph[k]);
            return std::clamp(v, 0.0, 1.0);
        });
    }
    if (spec.kind == "file") {
        std::ifstream in(spec.path);
        std::vector<double> xs, ps;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            double x, p;
            if (std::sscanf(line.c_str(), "%lf,%lf", &x, &p) == 2) {
                xs.push_back(x);
                ps.push_back(p);
            }
        }
        if (xs.size() < 2) throw ConfigError("initial.path", "need at least two x,p rows");
        return GridProfile::sample(g, n, [&](double x) {
            if (x <= xs.front()) return ps.front();
            if (x >= xs.back()) return ps.back();
            size_t k = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
            double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            return std::clamp((1 - t) * ps[k - 1] + t * ps[k], 0.0, 1.0);
        });
    }
    if (spec.kind == "barrier") {
        BarrierOptions o;
        o.n = n;
        auto nl = cfg.sc.nonlinearity();
        auto b = spec.which == 1.0 ? find_barrier_one(nl, cfg.sc.drift, g, o) : find_barrier_zero(nl, cfg.sc.drift, g, o);
        if (!b) throw Error("no-barrier", "initial datum asks for a barrier that does not exist");
        return b->profile;
    }
    throw ConfigError("initial.kind", "unknown initial datum");
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

namespace {
std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}
}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::string& hash, const std::vector<std::string>& header)
    : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) {
        delete impl_;
        throw Error("io-failure", "cannot write '" + path + "'");
    }
    impl_->out << "# scenario_hash=" << hash << ",version=" << kVersion << "\r\n";
    row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(fmt(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t k = 0; k < cells.size(); ++k) impl_->out << (k ? "," : "") << quote(cells[k]);
    impl_->out << "\r\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void write_svg(const std::string& path, const std::string& title, const std::string& xlabel,
               const std::string& ylabel, const std::vector<SvgSeries>& series) {
    const double W = 640, H = 420, ml = 60, mr = 150, mt = 30, mb = 45;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : series)
        for (size_t k = 0; k < s.x.size(); ++k)
            if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
                x0 = std::min(x0, s.x[k]);
                x1 = std::max(x1, s.x[k]);
                y0 = std::min(y0, s.y[k]);
                y1 = std::max(y1, s.y[k]);
            }
    if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x1 = x0 + 1;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };

    std::ofstream o(path, std::ios::binary);
    if (!o) throw Error("io-failure", "cannot write '" + path + "'");
    char buf[128];
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << ml << "\" y=\"18\" font-size=\"13\">" << title << "</text>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                  ml, mt, W - ml - mr, H - mt - mb);
    o << buf;
    for (int k = 0; k <= 4; ++k) {
        double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.3g</text>\n", X(xv), H - mb + 14, xv);
        o << buf;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.3g</text>\n", ml - 4, Y(yv) + 4, yv);
        o << buf;
    }
    o << "<text x=\"" << (ml + (W - ml - mr) / 2) << "\" y=\"" << (H - 8) << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    o << "<text x=\"14\" y=\"" << (mt + (H - mt - mb) / 2) << "\" transform=\"rotate(-90 14 " << (mt + (H - mt - mb) / 2)
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    int li = 0;
    for (const auto& s : series) {
        std::string pts;
        auto flush = [&] {
            if (pts.empty()) return;
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\""
              << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"" << pts << "\"/>\n";
            pts.clear();
        };
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) {
                flush();
                continue;
            }
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(s.x[k]), Y(s.y[k]));
            pts += buf;
        }
        flush();
        if (!s.label.empty()) {
            double ly = mt + 12 + 16 * li++;
            std::snprintf(buf, sizeof buf, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\"%s/>\n",
                          W - mr + 10, ly, W - mr + 30, ly, s.color.c_str(), s.dashed ? " stroke-dasharray=\"5,3\"" : "");
            o << buf << "<text x=\"" << (W - mr + 34) << "\" y=\"" << (ly + 4) << "\">" << s.label << "</text>\n";
        }
    }
    o << "</svg>\n";
}

}  // namespace geneflow
