#include "zlab/lab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>

#include "zlab/errors.hpp"

namespace zlab::lab {

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
T get_or(const json& j, const char* key, T def) {
    if (!j.contains(key)) return def;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw UsageError("lab_cli", std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw UsageError("lab_cli", "config must be a JSON object");
    static const char* known[] = {"experiment", "seed", "workers", "sieve_limit", "params", "out"};
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* n : known) ok = ok || k == n;
        if (!ok) throw UsageError("lab_cli", "unknown config field '" + k + "'");
    }
    ExperimentConfig c;
    c.experiment = get_or<std::string>(j, "experiment", "");
    c.seed = get_or<std::uint64_t>(j, "seed", 1);
    c.workers = get_or<unsigned>(j, "workers", 1);
    // JSON numbers like 1e8 arrive as floats
    if (j.contains("sieve_limit")) {
        const double l = get_or<double>(j, "sieve_limit", 0);
        if (!(l >= 0) || l > static_cast<double>(kMaxSieveLimit))
            throw UsageError("lab_cli", "sieve_limit out of range");
        c.sieve_limit = static_cast<std::uint64_t>(l);
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw UsageError("lab_cli", "params must be an object");
        c.params = j["params"];
    }
    c.out_dir = get_or<std::string>(j, "out", "");
    return c;
}

json ExperimentConfig::to_json() const {
    json j;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["workers"] = workers;
    j["sieve_limit"] = sieve_limit;
    j["params"] = params;
    if (!out_dir.empty()) j["out"] = out_dir;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("lab_cli", "cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("lab_cli", "config " + path + " is not valid JSON: " + e.what());
    }
    return ExperimentConfig::from_json(j);
}

bool ResultRecord::all_pass() const {
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

const Metric* ResultRecord::metric(const std::string& name) const {
    for (const auto& m : metrics)
        if (m.name == name) return &m;
    return nullptr;
}

json ResultRecord::to_json() const {
    json j;
    j["experiment"] = experiment;
    j["params_hash"] = params_hash;
    j["seed"] = seed;
    j["workers"] = workers;
    j["params"] = resolved_params;
    json ms = json::array();
    for (const auto& m : metrics) {
        json e{{"name", m.name}, {"value", number_or_null(m.value)}};
        if (!std::isnan(m.lo) || !std::isnan(m.hi)) {
            e["lo"] = number_or_null(m.lo);
            e["hi"] = number_or_null(m.hi);
        }
        ms.push_back(e);
    }
    j["metrics"] = ms;
    json cs = json::array();
    for (const auto& c : criteria)
        cs.push_back({{"criterion", c.id}, {"part", c.part}, {"pass", c.pass}, {"detail", c.detail}});
    j["criteria"] = cs;
    j["all_pass"] = all_pass();
    j["wall_seconds"] = wall_seconds;
    return j;
}

Context::Context(const ExperimentConfig& cfg, json params, std::uint64_t sieve_limit)
    : cfg_(cfg), params_(std::move(params)), limit_(sieve_limit) {}

const PrimeTable& Context::primes() const {
    if (limit_ == 0) throw StructuralError("lab_cli", "suite declared no sieve limit");
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<PrimeTable>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[limit_];
    if (!slot) slot = std::make_unique<PrimeTable>(load_or_sieve(limit_));
    return *slot;
}

double Context::num(const char* key) const {
    const auto& v = params_.at(key);
    if (!v.is_number()) throw UsageError("lab_cli", std::string("param '") + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t Context::count(const char* key) const {
    const double x = num(key);
    if (!(x >= 0) || x != std::floor(x) || x > 1e15)
        throw UsageError("lab_cli", std::string("param '") + key + "' must be a non-negative integer");
    return static_cast<std::uint64_t>(x);
}

std::vector<double> Context::list(const char* key) const {
    const auto& v = params_.at(key);
    std::vector<double> out;
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw UsageError("lab_cli", std::string("param '") + key + "' must be a list of numbers");
    for (const auto& e : v) {
        if (!e.is_number()) throw UsageError("lab_cli", std::string("param '") + key + "' must be a list of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

void Context::metric(std::string name, double value, double lo, double hi) {
    rec_.metrics.push_back({std::move(name), value, lo, hi});
}

void Context::criterion(int id, std::string part, bool pass, std::string detail) {
    rec_.criteria.push_back({id, std::move(part), pass, std::move(detail)});
}

void Context::table(std::string name, std::string csv) { rec_.tables.push_back({std::move(name), std::move(csv)}); }

const SuiteInfo& find_suite(const std::string& name) {
    for (const auto& s : registry())
        if (s.name == name) return s;
    std::string names;
    for (const auto& s : registry()) names += (names.empty() ? "" : ", ") + s.name;
    throw UsageError("lab_cli", "unknown experiment '" + name + "'; suites: " + names);
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

ResultRecord run(const ExperimentConfig& cfg) {
    const SuiteInfo& suite = find_suite(cfg.experiment);
    json params = suite.defaults;
    for (const auto& [k, v] : cfg.params.items()) {
        if (!params.contains(k)) {
            std::string keys;
            for (const auto& [dk, dv] : suite.defaults.items()) keys += (keys.empty() ? "" : ", ") + dk;
            throw UsageError("lab_cli", "unknown parameter '" + k + "' for " + suite.name + " (accepts: " + keys + ")");
        }
        params[k] = v;
    }
    if (cfg.workers == 0) throw UsageError("lab_cli", "workers must be positive");
    const std::uint64_t limit = cfg.sieve_limit ? cfg.sieve_limit : suite.sieve_limit;

    // workers and out are excluded: neither changes a result
    const json canon{{"experiment", suite.name}, {"seed", cfg.seed}, {"sieve_limit", limit}, {"params", params}};
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(canon.dump())));

    Context ctx(cfg, params, limit);
    const auto t0 = std::chrono::steady_clock::now();
    suite.body(ctx);
    ResultRecord rec = std::move(ctx.record());
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.experiment = suite.name;
    rec.params_hash = hex;
    rec.seed = cfg.seed;
    rec.workers = cfg.workers;
    rec.resolved_params = params;
    if (!cfg.out_dir.empty()) persist(rec, cfg.out_dir);
    return rec;
}

void persist(const ResultRecord& rec, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("lab_cli", "cannot create output directory " + dir + ": " + ec.message());
    for (const auto& t : rec.tables) {
        const fs::path p = fs::path(dir) / (rec.experiment + "_" + t.name + ".csv");
        std::ofstream os(p, std::ios::binary);
        os << t.csv;
        if (!os) throw UsageError("lab_cli", "cannot write " + p.string());
    }
    const fs::path p = fs::path(dir) / (rec.experiment + ".json");
    std::ofstream os(p, std::ios::binary);
    os << rec.to_json().dump(2) << '\n';
    if (!os) throw UsageError("lab_cli", "cannot write " + p.string());
}

}  // namespace zlab::lab
