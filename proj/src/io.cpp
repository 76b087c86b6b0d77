#include "hx/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hx {

namespace {

std::uint64_t fnv1a_bytes(const unsigned char* p, std::size_t n) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return std::string(buf);
}

// Assumes a little-endian host (checked once).
void require_little_endian() {
    const std::uint16_t probe = 1;
    unsigned char b;
    std::memcpy(&b, &probe, 1);
    if (b != 1) throw std::runtime_error("dump_grid_function: big-endian hosts unsupported");
}

} // namespace

void dump_grid_function(const GridFunction& f, const std::string& path) {
    require_little_endian();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_grid_function: cannot open " + path);
    const auto* bytes = reinterpret_cast<const unsigned char*>(f.values().data());
    const std::size_t nbytes = f.size() * sizeof(double);
    out.write(reinterpret_cast<const char*>(bytes), (std::streamsize)nbytes);
    if (!out) throw std::runtime_error("dump_grid_function: write failed for " + path);
    out.close();

    nlohmann::json side;
    side["n"] = f.spec().dim;
    side["N"] = f.spec().points;
    side["L"] = f.spec().period;
    side["mean"] = mean(f);
    side["checksum"] = hex64(fnv1a_bytes(bytes, nbytes));
    write_json(side, path + ".json");
}

GridFunction load_grid_function(const std::string& path) {
    require_little_endian();
    std::ifstream sj(path + ".json");
    if (!sj) throw std::runtime_error("load_grid_function: missing sidecar " + path + ".json");
    nlohmann::json side = nlohmann::json::parse(sj);
    const GridSpec spec(side.at("n").get<int>(), side.at("N").get<int>(), side.at("L").get<double>());

    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_grid_function: cannot open " + path);
    std::vector<double> v(spec.size());
    in.read(reinterpret_cast<char*>(v.data()), (std::streamsize)(v.size() * sizeof(double)));
    if ((std::size_t)in.gcount() != v.size() * sizeof(double))
        throw std::runtime_error("load_grid_function: short read in " + path);
    const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
    if (side.contains("checksum") &&
        side["checksum"].get<std::string>() != hex64(fnv1a_bytes(bytes, v.size() * sizeof(double))))
        throw std::runtime_error("load_grid_function: checksum mismatch in " + path);
    return GridFunction(spec, std::move(v));
}

void dump_grid_function_csv(const GridFunction& f, const std::string& path) {
    if (f.spec().dim != 1) throw std::invalid_argument("dump_grid_function_csv: n = 1 only");
    std::ostringstream out;
    out << "x,value\n";
    char buf[64];
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.spec().spacing() * (double)i, f[i]);
        out << buf;
    }
    write_text(out.str(), path);
}

void dump_extension(const ExtensionField& E, const std::string& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["s"] = E.order();
    manifest["tgrid"] = {{"t", E.tgrid().t}, {"w", E.tgrid().w}};
    std::vector<std::string> files;
    for (int j = 0; j < E.levels(); ++j) {
        char name[32];
        std::snprintf(name, sizeof name, "slice_%04d.bin", j);
        dump_grid_function(E.slice(j), dir + "/" + name);
        files.push_back(name);
    }
    manifest["files"] = files;
    write_json(manifest, dir + "/manifest.json");
}

// ---------------------------------------------------------------------------

namespace {

std::string kind_name(GenKind k) {
    switch (k) {
        case GenKind::Trig: return "trig";
        case GenKind::Bump: return "bump";
        case GenKind::ModulatedBump: return "modulated-bump";
    }
    return "trig";
}

GenKind kind_from(const std::string& s) {
    if (s == "trig") return GenKind::Trig;
    if (s == "bump") return GenKind::Bump;
    if (s == "modulated-bump") return GenKind::ModulatedBump;
    throw std::invalid_argument("unknown generator kind: " + s);
}

} // namespace

nlohmann::json config_to_json(const TrialConfig& cfg) {
    nlohmann::json j;
    j["suite"] = cfg.suite;
    j["dim"] = cfg.dim;
    j["grid"] = cfg.grid;
    j["period"] = cfg.period;
    j["levels"] = cfg.levels;
    j["tmin"] = cfg.tmin;
    j["tmax"] = cfg.tmax;
    j["s"] = cfg.s;
    j["nu"] = cfg.nu;
    j["sigma"] = cfg.sigma;
    j["inner"] = cfg.inner;
    j["pvec"] = cfg.pvec;
    j["qvec"] = cfg.qvec;
    j["svec"] = cfg.svec;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["kind"] = kind_name(cfg.kind);
    j["band"] = cfg.band;
    j["zero_mean"] = cfg.zero_mean;
    j["refine_check"] = cfg.refine_check;
    return j;
}

TrialConfig config_from_json(const nlohmann::json& j) {
    TrialConfig cfg;
    auto opt = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    opt("suite", cfg.suite);
    opt("dim", cfg.dim);
    opt("grid", cfg.grid);
    opt("period", cfg.period);
    opt("levels", cfg.levels);
    opt("tmin", cfg.tmin);
    opt("tmax", cfg.tmax);
    opt("s", cfg.s);
    opt("nu", cfg.nu);
    opt("sigma", cfg.sigma);
    opt("inner", cfg.inner);
    opt("pvec", cfg.pvec);
    opt("qvec", cfg.qvec);
    opt("svec", cfg.svec);
    opt("trials", cfg.trials);
    opt("seed", cfg.seed);
    if (j.contains("kind")) cfg.kind = kind_from(j.at("kind").get<std::string>());
    opt("band", cfg.band);
    opt("zero_mean", cfg.zero_mean);
    opt("refine_check", cfg.refine_check);
    return cfg;
}

TrialConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    return config_from_json(nlohmann::json::parse(in));
}

nlohmann::json report_to_json(const EstimateReport& rep) {
    nlohmann::json j;
    j["suite"] = rep.suite;
    j["config"] = config_to_json(rep.config);
    j["trials"] = nlohmann::json::array();
    for (const auto& t : rep.trials)
        j["trials"].push_back({{"seed", t.seed}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"ratio", t.ratio}});
    j["degenerate"] = rep.degenerate;
    j["aggregate"] = {{"max", rep.aggregate.max},
                      {"median", rep.aggregate.median},
                      {"stability", std::isnan(rep.aggregate.stability)
                                        ? nlohmann::json(nullptr)
                                        : nlohmann::json(rep.aggregate.stability)}};
    j["identities"] = nlohmann::json::array();
    return j;
}

nlohmann::json identity_report_to_json(const TrialConfig& cfg, const std::vector<IdentityResult>& ids) {
    nlohmann::json j;
    j["suite"] = "identities";
    j["config"] = config_to_json(cfg);
    j["trials"] = nlohmann::json::array();
    j["aggregate"] = {{"max", nullptr}, {"median", nullptr}, {"stability", nullptr}};
    j["identities"] = nlohmann::json::array();
    for (const auto& r : ids)
        j["identities"].push_back(
            {{"name", r.name}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"pass", r.pass}});
    return j;
}

nlohmann::json trace_report_to_json(const TrialConfig& cfg, const std::vector<TraceResult>& res) {
    nlohmann::json j;
    j["suite"] = "trace";
    j["config"] = config_to_json(cfg);
    j["trials"] = nlohmann::json::array();
    j["aggregate"] = {{"max", nullptr}, {"median", nullptr}, {"stability", nullptr}};
    j["identities"] = nlohmann::json::array();
    for (const auto& r : res)
        j["identities"].push_back({{"name", r.name},
                                   {"residual", r.spread()},
                                   {"tolerance", 50.0},
                                   {"pass", r.pass},
                                   {"ratio_min", r.ratio_min},
                                   {"ratio_max", r.ratio_max},
                                   {"ratio_max_refined", r.ratio_max_refined},
                                   {"stability", r.stability()},
                                   {"excluded", r.excluded}});
    return j;
}

nlohmann::json norm_report_to_json(const NormReport& rep) {
    nlohmann::json j;
    j["kind"] = rep.spec.name();
    j["params"] = {{"p", rep.spec.p}, {"q", rep.spec.q}, {"nu", rep.spec.nu}};
    j["value"] = rep.value;
    j["metadata"] = rep.metadata;
    return j;
}

std::string report_csv(const EstimateReport& rep) {
    std::ostringstream out;
    out << "trial,seed,lhs,rhs,ratio\n";
    char buf[128];
    for (std::size_t i = 0; i < rep.trials.size(); ++i) {
        const auto& t = rep.trials[i];
        std::snprintf(buf, sizeof buf, "%zu,%llu,%.17g,%.17g,%.17g\n", i, (unsigned long long)t.seed, t.lhs, t.rhs,
                      t.ratio);
        out << buf;
    }
    return out.str();
}

void write_json(const nlohmann::json& j, const std::string& path) {
    write_text(j.dump(2) + "\n", path);
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write failed: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace hx
