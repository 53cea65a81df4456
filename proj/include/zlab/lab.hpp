#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zlab/primes.hpp"

namespace zlab::lab {

using json = nlohmann::json;

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::uint64_t sieve_limit = 0;  // 0: the suite default
    json params = json::object();   // overrides of the suite defaults
    std::string out_dir;            // empty: nothing persisted

    static ExperimentConfig from_json(const json& j);
    json to_json() const;
};

ExperimentConfig load_config(const std::string& path);

struct Metric {
    std::string name;
    double value = 0;
    double lo = NAN, hi = NAN;  // CI ends, NaN when not an estimate
};

struct CriterionResult {
    int id = 0;           // acceptance criterion number
    std::string part;     // which clause of the criterion
    bool pass = false;
    std::string detail;
};

struct Table {
    std::string name;  // file stem: <experiment>_<name>.csv
    std::string csv;
};

struct ResultRecord {
    std::string experiment;
    std::string params_hash;  // FNV-1a 64 of the canonical resolved config, hex
    std::uint64_t seed = 0;
    unsigned workers = 1;
    json resolved_params;
    std::vector<Metric> metrics;
    std::vector<CriterionResult> criteria;
    std::vector<Table> tables;
    double wall_seconds = 0;

    bool all_pass() const;
    const Metric* metric(const std::string& name) const;
    json to_json() const;
};

// Handed to a suite body: resolved parameters plus result collection.
class Context {
public:
    Context(const ExperimentConfig& cfg, json params, std::uint64_t sieve_limit);

    std::uint64_t seed() const { return cfg_.seed; }
    unsigned workers() const { return cfg_.workers; }
    std::uint64_t sieve_limit() const { return limit_; }
    // Shared per process, keyed by limit.
    const PrimeTable& primes() const;

    double num(const char* key) const;
    std::uint64_t count(const char* key) const;
    std::vector<double> list(const char* key) const;

    void metric(std::string name, double value, double lo = NAN, double hi = NAN);
    void criterion(int id, std::string part, bool pass, std::string detail);
    void table(std::string name, std::string csv);

    ResultRecord& record() { return rec_; }

private:
    const ExperimentConfig& cfg_;
    json params_;
    std::uint64_t limit_;
    ResultRecord rec_;
};

struct SuiteInfo {
    std::string name;
    std::string summary;
    std::vector<int> criteria;
    std::uint64_t sieve_limit;  // 0: no primes needed
    json defaults;
    std::function<void(Context&)> body;
};

const std::vector<SuiteInfo>& registry();
const SuiteInfo& find_suite(const std::string& name);  // UsageError listing the suites

// Resolves defaults, runs the suite, persists to cfg.out_dir when set.
ResultRecord run(const ExperimentConfig& cfg);
void persist(const ResultRecord& rec, const std::string& dir);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace zlab::lab
