// Run configuration, named check suites and the JSON report shared by the
// command line tool and the acceptance binary.
#pragma once

#include "qgroup/qdp.hpp"

#include <nlohmann/json.hpp>

namespace qgroup {

struct RunConfig {
    std::string grid = "0,1,2";
    Presentation presentation = Presentation::Uq;
    EulerVariant euler = EulerVariant::Default;
    SerreVariant serre = SerreVariant::Full;
    IntervalOrder interval_order = IntervalOrder::Lex;
    int order = 8;   // formal truncation h^order
    int depth = 4;   // delta_n depth for membership
    long fuel = 10000;
    std::uint64_t seed = 1;
    std::vector<std::string> suites;    // empty: every suite
    std::vector<std::string> elements;  // extra membership elements, in `presentation`
    std::string out;

    static RunConfig from_json(const nlohmann::json& j);  // throws ConfigError
    nlohmann::json to_json() const;
    // Resolves the suite list and checks every field; throws ConfigError.
    void validate();
    QuiverPtr quiver() const;
};

struct CheckRecord {
    std::string name;
    std::string anchor;  // the statement this check verifies
    std::string status;  // pass | fail | skipped
    std::string witness;
    double ms = 0;
    nlohmann::json json() const;
};

struct Report {
    nlohmann::json config;
    std::vector<CheckRecord> checks;  // sorted by name
    int passed = 0, failed = 0, skipped = 0;
    nlohmann::json json() const;
    bool ok() const { return failed == 0; }
};

const std::vector<std::string>& suite_names();
std::vector<CheckRecord> run_suite(const std::string& suite, const RunConfig& cfg);
// Validates first: a bad configuration throws before any check runs.
Report run(RunConfig cfg);

}  // namespace qgroup
